use gabor_fiber_core::gabor::{
    analyze, direct_frame_apply, dual_window, gabor_frame_bounds, walnut_apply, AnalysisOptions, Lattice,
};
use gabor_fiber_core::spaces::{SampledWindow, WindowSpec};
use gabor_fiber_core::{Tolerances, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_f(rng: &mut ChaCha8Rng, lat: &Lattice) -> SampledWindow {
    let q = lat.q_b() as i64;
    let start = rng.gen_range(-2 * q..2 * q);
    let len = rng.gen_range(1..3 * q);
    SampledWindow::new(
        lat.step(),
        start,
        (0..len).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
    )
    .unwrap()
}

#[test]
fn dual_pair_reconstructs() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (spec, a, b) in [
        (WindowSpec::gaussian(0.0, 1.0).unwrap(), 1.0, 0.5),
        (WindowSpec::hat(0.0, 1.5).unwrap(), 0.75, 0.5),
        (WindowSpec::exponential(0.0, 3.0).unwrap(), 0.5, 1.0),
    ] {
        let lat = Lattice::with_fibers(a, b, 64).unwrap();
        let g = lat.sample(&spec).unwrap();
        // The section dual converges to the true dual exponentially in K.
        let k = lat.default_truncation(&g) + 12;
        let h = dual_window(&g, &lat, k, &tol).unwrap().window;
        for _ in 0..4 {
            let f = random_f(&mut rng, &lat);
            // Σ ⟨f, M T h⟩ M T g = f, evaluated both ways.
            let w = walnut_apply(&g, &h, &lat, &f, k + 1).unwrap().output;
            assert!(w.max_abs_diff(&f).unwrap() <= 1e-9, "{spec:?}");
            let d = direct_frame_apply(&g, &h, &lat, &f, None, None).unwrap();
            assert!(d.max_abs_diff(&f).unwrap() <= 1e-9, "{spec:?}");
        }
    }
}

#[test]
fn analysis_of_gaussian_system() {
    let lat = Lattice::with_fibers(1.0, 0.5, 128).unwrap();
    let g = lat.sample(&WindowSpec::gaussian(0.0, 1.0).unwrap()).unwrap();
    let r = analyze(&g, &lat, &AnalysisOptions { truncation: Some(6), module_radius: Some(6), ..Default::default() })
        .unwrap();
    assert!(r.is_frame && !r.parseval.passed);
    let m = r.module_bounds.unwrap();
    assert!((m.lower - r.bounds.lower).abs() <= 1e-10 && (m.upper - r.bounds.upper).abs() <= 1e-10);
    // Larger sections only widen the bounds, and only slightly for this window.
    let wide = gabor_frame_bounds(&g, &lat, 12).unwrap();
    assert!(wide.lower <= r.bounds.lower + 1e-12 && wide.upper >= r.bounds.upper - 1e-12);
    assert!(r.bounds.lower - wide.lower < 1e-3 && wide.upper - r.bounds.upper < 1e-3);
    let e = &r.estimates;
    assert!(r.bounds.upper <= e.cc && e.cc <= e.daubechies && r.bounds.upper <= e.schur);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    // Gaussian decay of G_k: the Walnut tails fall off fast.
    assert!(r.walnut_tail.windows(2).all(|w| w[1] <= w[0]));
    assert!(*r.walnut_tail.last().unwrap() < 1e-12);
}
