use gabor_fiber_core::gabor::{bessel_estimates, direct_frame_apply, gabor_frame_bounds, walnut_apply, Lattice};
use gabor_fiber_core::hmod::{frame_operator, gram_matrix, inner_product, weak_frame_bounds, ModuleSequence};
use gabor_fiber_core::schur::{bessel_from_gram, schur_conditions_with, TailEvidence};
use gabor_fiber_core::spaces::{
    bracket_product, classify_space, defiberize, fiberize, linf_l2_norm, CellSups, Decay, SampledWindow, WindowSpec,
};
use gabor_fiber_core::C64;
use proptest::prelude::*;

const STEP: f64 = 1.0 / 8.0;

fn window(step: f64, max_len: usize) -> impl Strategy<Value = SampledWindow> {
    (-40i64..40, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..max_len)).prop_map(move |(start, v)| {
        SampledWindow::new(step, start, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
    })
}

fn lattice() -> impl Strategy<Value = Lattice> {
    prop::sample::select(vec![(0.5, 1.0), (1.0, 0.5), (0.75, 1.0), (1.0, 1.0), (1.5, 0.5)])
        .prop_map(|(a, b)| Lattice::with_fibers(a, b, (8.0 / b) as usize).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_conjugate_symmetric(f in window(STEP, 60), g in window(STEP, 60)) {
        let fg = bracket_product(&f, &g, 1.0).unwrap();
        let gf = bracket_product(&g, &f, 1.0).unwrap();
        for (x, y) in fg.samples().iter().zip(gf.samples()) {
            prop_assert!((x - y.conj()).norm() <= 1e-12);
        }
    }

    #[test]
    fn fiberization_is_unitary(f in window(STEP, 60), g in window(STEP, 60)) {
        let (uf, ug) = (fiberize(&f, 1.0, 16).unwrap(), fiberize(&g, 1.0, 16).unwrap());
        let ip = inner_product(&uf, &ug).unwrap();
        let br = bracket_product(&f, &g, 1.0).unwrap();
        for (x, y) in ip.samples().iter().zip(br.samples()) {
            prop_assert!((x - y).norm() <= 1e-12);
        }
        let back = defiberize(&uf).unwrap();
        prop_assert_eq!(back.max_abs_diff(&f).unwrap(), 0.0);
    }

    #[test]
    fn l2_norm_embeds(f in window(STEP, 80), cells in 1usize..5) {
        let p = cells as f64 * 0.5;
        prop_assert!(f.l2_norm() <= p.sqrt() * linf_l2_norm(&f, p).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn walnut_matches_direct(lat in lattice(), g in window(STEP, 24), f in window(STEP, 24)) {
        let k = lat.default_truncation(&g);
        let w = walnut_apply(&g, &g, &lat, &f, k).unwrap().output;
        let d = direct_frame_apply(&g, &g, &lat, &f, None, None).unwrap();
        prop_assert!(w.max_abs_diff(&d).unwrap() <= 1e-10 * (1.0 + d.sup_norm()));
    }

    #[test]
    fn estimators_dominate_the_upper_bound(lat in lattice(), g in window(STEP, 30)) {
        let k = lat.default_truncation(&g);
        let b = gabor_frame_bounds(&g, &lat, k).unwrap();
        let est = bessel_estimates(&g, &lat, k).unwrap();
        let slack = 1e-9 * (1.0 + est.daubechies);
        prop_assert!(b.lower <= b.upper + slack);
        prop_assert!(b.upper <= est.cc + slack);
        prop_assert!(est.cc <= est.daubechies + slack);
        prop_assert!(b.upper <= est.schur + slack);
    }

    #[test]
    fn gram_and_frame_operator_share_the_top(ws in prop::collection::vec(window(STEP, 20), 1..5)) {
        let seq = ModuleSequence::new(ws.iter().map(|w| fiberize(w, 1.0, 8).unwrap()).collect()).unwrap();
        let top = weak_frame_bounds(&seq).unwrap().upper;
        let gram = gram_matrix(&seq).unwrap();
        let g_top = bessel_from_gram(&gram).unwrap();
        prop_assert!((top - g_top).abs() <= 1e-10 * (1.0 + top));
        let schur = schur_conditions_with(&gram, TailEvidence::Summable).bound;
        prop_assert!(top <= schur * (1.0 + 1e-12) + 1e-12);
        prop_assert!(frame_operator(&seq).unwrap().is_hermitian(1e-12));
    }

    #[test]
    fn membership_is_monotone(
        decay in prop_oneof![
            (0u32..5).prop_map(|cells| Decay::Compact { cells }),
            (0.0f64..0.99).prop_map(|ratio| Decay::Geometric { ratio }),
            (0.01f64..3.0).prop_map(|rate| Decay::Gaussian { rate }),
            (-1.0f64..2.0).prop_map(|exponent| Decay::Power { exponent }),
        ],
        overlap in prop::option::of(1u32..4),
        period in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        let mut model = CellSups::new(1.0, decay, period).unwrap();
        if let Some(o) = overlap {
            model = model.with_overlap(o);
        }
        let spec = WindowSpec::rect(0.0, 1.0).unwrap().with_cell_sups(Some(model));
        let m = classify_space(&spec, 1.0, STEP).unwrap();
        prop_assert!(m.is_monotone(), "{:?}", m);
    }
}
