//! Windows on the real line and the translate module `L∞_P(ℓ²)`.
//!
//! A window is sampled on a global grid of step `Δ`; every period `P` in play
//! must be an integer multiple `M·Δ`. The fiber grid of `[0, P)` is then the
//! first `M` samples, and translation by `P` is an index shift by `M`.

mod window;

pub(crate) use window::grid_index;
pub use window::{CellSups, Decay, SampledWindow, WindowShape, WindowSpec, DEFAULT_EPS_TAIL};

use alloc::vec::Vec;

use crate::hmod::ModuleVector;
use crate::valg::FiberField;
use crate::{Error, Result, C64};

/// Number of fibers `P/Δ`, or an alignment error when `P` is off the grid.
pub fn fibers_per_period(period: f64, step: f64) -> Result<usize> {
    if !(period > 0.0) {
        return Err(Error::InvalidParameter("period must be positive"));
    }
    let m = grid_index(period, step)?;
    if m < 1 {
        return Err(Error::Alignment { value: period, step });
    }
    Ok(m as usize)
}

/// `⟨f, g⟩_P(x) = Σ_n f(x − nP)·conj(g(x − nP))` on the fiber grid of `[0, P)`.
pub fn bracket_product(f: &SampledWindow, g: &SampledWindow, period: f64) -> Result<FiberField> {
    f.check_grid(g)?;
    let m = fibers_per_period(period, f.step())?;
    FiberField::new(period, f.periodized_product(g, 0, m))
}

/// The fiberization `U_P f = (T_{−nP} f·χ_{[0,P)})_{|n|≤N}`.
///
/// Fails with the required radius when `f` does not vanish outside `[−NP, (N+1)P)`.
pub fn fiberize(f: &SampledWindow, period: f64, radius: usize) -> Result<ModuleVector> {
    let m = fibers_per_period(period, f.step())? as i64;
    if let Some((lo, hi)) = f.nonzero_range() {
        let required = (-lo.div_euclid(m)).max((hi - 1).div_euclid(m)).max(0) as usize;
        if required > radius {
            return Err(Error::Truncation { required, available: radius });
        }
    }
    fiberize_clipped(f, period, radius)
}

/// Fiberization that drops every cell outside `[−N, N]`.
pub fn fiberize_clipped(f: &SampledWindow, period: f64, radius: usize) -> Result<ModuleVector> {
    let m = fibers_per_period(period, f.step())? as i64;
    let r = radius as i64;
    let entries = (-r..=r)
        .map(|n| FiberField::new(period, (0..m).map(|x| f.get(x + n * m)).collect()))
        .collect::<Result<Vec<_>>>()?;
    ModuleVector::from_entries(radius, entries)
}

/// `U_P^*`: the window whose restriction to cell `n` is entry `n`.
pub fn defiberize(x: &ModuleVector) -> Result<SampledWindow> {
    let m = x.fibers();
    let step = x.period() / m as f64;
    let values = x.entries().iter().flat_map(|e| e.samples().iter().copied()).collect();
    SampledWindow::new(step, -(x.radius() as i64) * m as i64, values)
}

/// `‖f‖_{L∞_P(ℓ²)} = (max_x Σ_n |f(x − nP)|²)^{1/2}`.
pub fn linf_l2_norm(f: &SampledWindow, period: f64) -> Result<f64> {
    let b = bracket_product(f, f, period)?;
    Ok(libm::sqrt(b.samples().iter().fold(0.0f64, |a, z| a.max(z.re))))
}

/// Per-cell sups `c_n = max_{[nP, (n+1)P)} |f|`, keyed by `n`, over the nonzero range.
pub fn cell_sups(f: &SampledWindow, period: f64) -> Result<Vec<(i64, f64)>> {
    let m = fibers_per_period(period, f.step())? as i64;
    let Some((lo, hi)) = f.nonzero_range() else { return Ok(Vec::new()) };
    let (n0, n1) = (lo.div_euclid(m), (hi - 1).div_euclid(m));
    Ok((n0..=n1).map(|n| (n, (n * m..(n + 1) * m).map(|i| f.get(i).norm()).fold(0.0, f64::max))).collect())
}

/// `‖f‖_{W_P(L∞,ℓ²)} = (Σ_n c_n²)^{1/2}`.
pub fn w2_norm(f: &SampledWindow, period: f64) -> Result<f64> {
    Ok(libm::sqrt(cell_sups(f, period)?.iter().map(|(_, c)| c * c).sum()))
}

/// `‖f‖_{W_P(L∞,ℓ¹)} = Σ_n c_n`.
pub fn w1_norm(f: &SampledWindow, period: f64) -> Result<f64> {
    Ok(cell_sups(f, period)?.iter().map(|(_, c)| c).sum())
}

/// `T_c f = f(· − c)`; `c` must be a multiple of the step.
pub fn translate(f: &SampledWindow, c: f64) -> Result<SampledWindow> {
    let k = grid_index(c, f.step())?;
    SampledWindow::new(f.step(), f.start() + k, f.values().to_vec())
}

/// `x ↦ f((a/c)·x)`, mapping `L∞_a(ℓ²)` onto `L∞_c(ℓ²)`.
///
/// The samples are kept and the step becomes `Δ·c/a`, so `a` must lie on the
/// grid of `f` for the cells to correspond.
pub fn dilate(f: &SampledWindow, a: f64, c: f64) -> Result<SampledWindow> {
    if !(a > 0.0) || !(c > 0.0) {
        return Err(Error::InvalidParameter("dilation periods must be positive"));
    }
    fibers_per_period(a, f.step())?;
    SampledWindow::new(f.step() * c / a, f.start(), f.values().to_vec())
}

/// Outcome of comparing `L∞_a(ℓ²)` with `L∞_c(ℓ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormEquivalence {
    /// `a/c = p/q` in lowest terms: `‖f‖_c ≤ √p‖f‖_a` and `‖f‖_a ≤ √q‖f‖_c`.
    Rational {
        p: u64,
        q: u64,
        sqrt_p: f64,
        sqrt_q: f64,
    },
    Incommensurable,
}

/// Largest denominator accepted by the rational detection.
const MAX_DENOMINATOR: u64 = 1 << 20;

/// Detects `a/c = p/q` by continued fractions at relative tolerance `1e−12`.
pub fn norm_equivalence_factors(a: f64, c: f64) -> NormEquivalence {
    match rational_approx(a / c, 1e-14) {
        Some((p, q)) => NormEquivalence::Rational { p, q, sqrt_p: libm::sqrt(p as f64), sqrt_q: libm::sqrt(q as f64) },
        None => NormEquivalence::Incommensurable,
    }
}

/// Convergent `p/q` of `x > 0` with `|x − p/q| ≤ tol·x`, if one exists below `MAX_DENOMINATOR`.
pub(crate) fn rational_approx(x: f64, tol: f64) -> Option<(u64, u64)> {
    if !(x > 0.0) || !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let t = libm::floor(r);
        if t > MAX_DENOMINATOR as f64 {
            return None;
        }
        let ti = t as u64;
        let h = ti.checked_mul(h1)?.checked_add(h0)?;
        let k = ti.checked_mul(k1)?.checked_add(k0)?;
        if k > MAX_DENOMINATOR || h > MAX_DENOMINATOR * MAX_DENOMINATOR {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        if libm::fabs(x - h as f64 / k as f64) <= tol * x {
            return Some((h, k));
        }
        let frac = r - t;
        if frac <= 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// Three-valued membership answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Undetermined,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

/// Position of a window in `W_P(L∞,ℓ¹) ⊂ W_P(L∞,ℓ²) ⊂ X_P(L∞,ℓ²) ⊂ L∞_P(ℓ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceMembership {
    pub period: f64,
    pub in_w1: Verdict,
    pub in_w2: Verdict,
    pub in_x: Verdict,
    pub in_linf_l2: Verdict,
    /// Computed from the samples; for truncated analytic windows this is the truncation's norm.
    pub w2_norm: Option<f64>,
    pub linf_l2_norm: Option<f64>,
}

impl SpaceMembership {
    /// Whether every `Yes` implies `Yes` further down the chain.
    pub fn is_monotone(&self) -> bool {
        let chain = [self.in_w1, self.in_w2, self.in_x, self.in_linf_l2];
        chain.windows(2).all(|w| w[0] != Verdict::Yes || w[1] == Verdict::Yes)
    }
}

/// Classifies a window on cells of length `period`.
///
/// Windows with a cell-sup model are classified from the model, since any
/// finite sampling lies in all four spaces. Windows of bounded support without
/// a model lie in all four. Anything else is undetermined.
pub fn classify_space(window: &WindowSpec, period: f64, step: f64) -> Result<SpaceMembership> {
    fibers_per_period(period, step)?;
    let samples = window.sample(step)?;
    let (in_w1, in_w2, in_x, in_linf_l2) = match (&window.cell_sups, window.has_finite_support()) {
        (Some(model), _) => model_verdicts(model, period),
        (None, true) => (Verdict::Yes, Verdict::Yes, Verdict::Yes, Verdict::Yes),
        (None, false) => (Verdict::Undetermined, Verdict::Undetermined, Verdict::Undetermined, Verdict::Undetermined),
    };
    let w2 = if in_w2 == Verdict::Yes { Some(w2_norm(&samples, period)?) } else { None };
    let linf = if in_linf_l2 == Verdict::Yes { Some(linf_l2_norm(&samples, period)?) } else { None };
    Ok(SpaceMembership { period, in_w1, in_w2, in_x, in_linf_l2, w2_norm: w2, linf_l2_norm: linf })
}

fn model_verdicts(model: &CellSups, period: f64) -> (Verdict, Verdict, Verdict, Verdict) {
    let w1 = Verdict::from_bool(model.summable(1.0));
    let w2 = Verdict::from_bool(model.summable(2.0));
    // The amalgam spaces do not depend on the cell length; X and L∞(ℓ²) agree
    // for commensurable cell lengths only.
    if !matches!(norm_equivalence_factors(model.period, period), NormEquivalence::Rational { .. }) {
        let und = Verdict::Undetermined;
        return (
            w1,
            w2,
            if w2 == Verdict::Yes { Verdict::Yes } else { und },
            if w2 == Verdict::Yes { Verdict::Yes } else { und },
        );
    }
    // Folded tail: sup_x Σ_{|n|>N} |f(x + nP)|² lies between sup_{|n|>N} c_n² and overlap·sup_{|n|>N} c_n².
    let x = if w2 == Verdict::Yes || (model.vanishing() && model.overlap.is_some()) {
        Verdict::Yes
    } else if !model.vanishing() {
        Verdict::No
    } else {
        Verdict::Undetermined
    };
    let l = if x == Verdict::Yes || (model.bounded() && model.overlap.is_some()) {
        Verdict::Yes
    } else if !model.bounded() {
        Verdict::No
    } else {
        Verdict::Undetermined
    };
    (w1, w2, x, l)
}

/// `(h^P·f)(x) = h(x mod P)·f(x)`: the left action of `L∞[0, P]` on windows.
pub fn act(h: &FiberField, f: &SampledWindow) -> Result<SampledWindow> {
    let m = fibers_per_period(h.period(), f.step())?;
    if m != h.fibers() {
        return Err(Error::Incompatible("multiplier grid does not match the window step"));
    }
    let values: Vec<C64> = (f.start()..f.end()).map(|i| h[i.rem_euclid(m as i64) as usize] * f.get(i)).collect();
    SampledWindow::new(f.step(), f.start(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmod::{inner_product, module_norm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const STEP: f64 = 1.0 / 16.0;

    fn rect(lo: f64, hi: f64) -> SampledWindow {
        WindowSpec::rect(lo, hi).unwrap().sample(STEP).unwrap()
    }

    pub(crate) fn random_window(rng: &mut ChaCha8Rng, step: f64, max_len: i64) -> SampledWindow {
        let start = rng.gen_range(-max_len..max_len);
        let len = rng.gen_range(1..max_len) as usize;
        let values = (0..len).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        SampledWindow::new(step, start, values).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let e = FiberField::unit(1.0, 16).unwrap();
        assert_eq!(bracket_product(&rect(0.0, 1.0), &rect(0.0, 1.0), 1.0).unwrap(), e);
        assert_eq!(bracket_product(&rect(0.0, 1.0), &rect(1.0, 2.0), 1.0).unwrap(), FiberField::zero(1.0, 16).unwrap());
        // Disjoint supports pair up only after a shift by P; realign first.
        let shifted = translate(&rect(1.0, 2.0), -1.0).unwrap();
        assert_eq!(bracket_product(&rect(0.0, 1.0), &shifted, 1.0).unwrap(), e);
        assert!(matches!(bracket_product(&rect(0.0, 1.0), &rect(0.0, 1.0), 0.3), Err(Error::Alignment { .. })));
    }

    #[test]
    fn bracket_is_positive_and_conjugate_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let f = random_window(&mut rng, STEP, 60);
            let g = random_window(&mut rng, STEP, 60);
            let ff = bracket_product(&f, &f, 1.0).unwrap();
            assert!(ff.samples().iter().all(|z| z.re >= 0.0 && z.im.abs() <= 1e-14 * (1.0 + z.re)));
            let fg = bracket_product(&f, &g, 1.0).unwrap();
            let gf = bracket_product(&g, &f, 1.0).unwrap();
            for (x, y) in fg.samples().iter().zip(gf.samples()) {
                assert!((x - y.conj()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn bracket_is_module_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let f = random_window(&mut rng, STEP, 60);
        let g = random_window(&mut rng, STEP, 60);
        let h = FiberField::from_fn(1.0, 16, |x| C64::new(libm::cos(6.0 * x), x)).unwrap();
        let lhs = bracket_product(&act(&h, &f).unwrap(), &g, 1.0).unwrap();
        let rhs = crate::valg::alg_mul(&h, &bracket_product(&f, &g, 1.0).unwrap()).unwrap();
        for (x, y) in lhs.samples().iter().zip(rhs.samples()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn fiberize_examples() {
        assert_eq!(fiberize(&rect(0.0, 1.0), 1.0, 2).unwrap(), ModuleVector::basis(0, 2, 1.0, 16).unwrap());
        assert_eq!(fiberize(&rect(1.0, 2.0), 1.0, 2).unwrap(), ModuleVector::basis(1, 2, 1.0, 16).unwrap());
        assert!(matches!(fiberize(&rect(-4.0, 1.0), 1.0, 2), Err(Error::Truncation { required: 4, available: 2 })));
        assert!(fiberize(&rect(2.0, 3.0), 1.0, 2).is_ok());
        assert!(matches!(fiberize(&rect(2.0, 3.5), 1.0, 2), Err(Error::Truncation { required: 3, .. })));
    }

    #[test]
    fn defiberize_examples() {
        let e0 = ModuleVector::basis(0, 2, 1.0, 16).unwrap();
        assert_eq!(defiberize(&e0).unwrap().trimmed(), rect(0.0, 1.0));
        assert!(defiberize(&ModuleVector::zeros(2, 1.0, 16).unwrap()).unwrap().trimmed().is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let f = random_window(&mut rng, STEP, 40);
        let u = fiberize(&f, 1.0, 6).unwrap();
        assert_eq!(defiberize(&u).unwrap().max_abs_diff(&f).unwrap(), 0.0);
        assert_eq!(fiberize(&defiberize(&u).unwrap(), 1.0, 6).unwrap(), u);
    }

    #[test]
    fn fiberize_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..20 {
            let f = random_window(&mut rng, STEP, 60);
            let g = random_window(&mut rng, STEP, 60);
            let (uf, ug) = (fiberize(&f, 1.0, 9).unwrap(), fiberize(&g, 1.0, 9).unwrap());
            let ip = inner_product(&uf, &ug).unwrap();
            let br = bracket_product(&f, &g, 1.0).unwrap();
            for (x, y) in ip.samples().iter().zip(br.samples()) {
                assert!((x - y).norm() < 1e-13);
            }
            // Independent norm: direct max over residues of stacked squares.
            let direct =
                (0..16).map(|r| (-20..20).map(|n| f.get(r + 16 * n).norm_sqr()).sum::<f64>()).fold(0.0, f64::max);
            assert!((module_norm(&uf).powi(2) - direct).abs() < 1e-12 * (1.0 + direct));
            assert!((linf_l2_norm(&f, 1.0).unwrap().powi(2) - direct).abs() < 1e-12 * (1.0 + direct));
        }
    }

    #[test]
    fn translate_examples() {
        let f = rect(0.0, 1.0);
        assert_eq!(translate(&f, 0.0).unwrap(), f);
        let t = translate(&f, 1.0).unwrap();
        assert_eq!(t, rect(1.0, 2.0));
        assert_eq!(linf_l2_norm(&t, 1.0).unwrap(), linf_l2_norm(&f, 1.0).unwrap());
        assert!(matches!(translate(&f, 0.01), Err(Error::Alignment { .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let g = random_window(&mut rng, STEP, 30);
        let shifted = fiberize(&translate(&g, 1.0).unwrap(), 1.0, 6).unwrap();
        assert_eq!(shifted, fiberize(&g, 1.0, 6).unwrap().shift(1));
        for c in [0.25, -3.0, 7.5] {
            let n0 = linf_l2_norm(&g, 1.0).unwrap();
            assert!((linf_l2_norm(&translate(&g, c).unwrap(), 1.0).unwrap() - n0).abs() <= 1e-12 * n0);
        }
    }

    #[test]
    fn dilate_examples() {
        let f = rect(0.0, 1.0);
        assert_eq!(dilate(&f, 1.0, 1.0).unwrap(), f);
        let d = dilate(&f, 1.0, 2.0).unwrap();
        assert_eq!(d.support(), (0.0, 2.0));
        assert_eq!(linf_l2_norm(&d, 2.0).unwrap(), 1.0);
        assert!(matches!(dilate(&f, 0.3, 1.0), Err(Error::Alignment { .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let g = random_window(&mut rng, STEP, 60);
        let n0 = linf_l2_norm(&g, 1.0).unwrap();
        let n1 = linf_l2_norm(&dilate(&g, 1.0, 3.0).unwrap(), 3.0).unwrap();
        assert!((n0 - n1).abs() <= 1e-10 * n0);
    }

    #[test]
    fn rational_detection() {
        assert_eq!(rational_approx(1.0, 1e-12), Some((1, 1)));
        assert_eq!(rational_approx(1.5, 1e-12), Some((3, 2)));
        assert_eq!(rational_approx(0.3, 1e-12), Some((3, 10)));
        assert_eq!(rational_approx(core::f64::consts::SQRT_2, 1e-12), None);
        assert_eq!(
            norm_equivalence_factors(2.0, 2.0),
            NormEquivalence::Rational { p: 1, q: 1, sqrt_p: 1.0, sqrt_q: 1.0 }
        );
        match norm_equivalence_factors(3.0, 2.0) {
            NormEquivalence::Rational { p, q, sqrt_p, sqrt_q } => {
                assert_eq!((p, q), (3, 2));
                assert_eq!((sqrt_p, sqrt_q), (3f64.sqrt(), 2f64.sqrt()));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(norm_equivalence_factors(core::f64::consts::PI, 1.0), NormEquivalence::Incommensurable);
    }

    #[test]
    fn classify_builtin() {
        let step = 1.0 / 64.0;
        let yes = Verdict::Yes;
        let no = Verdict::No;
        let c = |w: WindowSpec| {
            let m = classify_space(&w, 1.0, step).unwrap();
            assert!(m.is_monotone());
            (m.in_w1, m.in_w2, m.in_x, m.in_linf_l2)
        };
        assert_eq!(c(WindowSpec::paper_f1()), (no, yes, yes, yes));
        assert_eq!(c(WindowSpec::paper_f2()), (no, no, yes, yes));
        assert_eq!(c(WindowSpec::paper_f3()), (no, no, no, yes));
        assert_eq!(c(WindowSpec::rect(0.0, 1.0).unwrap()), (yes, yes, yes, yes));
        assert_eq!(c(WindowSpec::gaussian(0.0, 1.0).unwrap()), (yes, yes, yes, yes));
        let bare = WindowSpec::gaussian(0.0, 1.0).unwrap().with_cell_sups(None);
        let u = Verdict::Undetermined;
        assert_eq!(c(bare), (u, u, u, u));
    }

    #[test]
    fn classify_norms_for_finite_windows() {
        let m = classify_space(&WindowSpec::rect(0.0, 2.0).unwrap(), 1.0, 1.0 / 8.0).unwrap();
        assert_eq!(m.w2_norm, Some(2f64.sqrt()));
        assert_eq!(m.linf_l2_norm, Some(2f64.sqrt()));
        let m = classify_space(&WindowSpec::paper_f3(), 1.0, 1.0 / 8.0).unwrap();
        assert_eq!((m.w2_norm, m.linf_l2_norm), (None, Some(1.0)));
    }

    #[test]
    fn classify_incommensurable_period() {
        let m = classify_space(&WindowSpec::paper_f2(), core::f64::consts::SQRT_2, 1.0 / 64.0);
        // √2 is off the sample grid.
        assert!(matches!(m, Err(Error::Alignment { .. })));
    }

    #[test]
    fn model_verdicts_at_other_periods() {
        let f2 = WindowSpec::paper_f2().cell_sups.unwrap();
        let (w1, w2, x, l) = model_verdicts(&f2, 0.5);
        assert_eq!((w1, w2, x, l), (Verdict::No, Verdict::No, Verdict::Yes, Verdict::Yes));
        let (_, _, x, l) = model_verdicts(&f2, core::f64::consts::SQRT_2);
        assert_eq!((x, l), (Verdict::Undetermined, Verdict::Undetermined));
    }

    #[test]
    fn embedding_and_rational_inequalities() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let step = 1.0 / 16.0;
        for _ in 0..50 {
            let f = random_window(&mut rng, step, 200);
            for p in [0.5, 1.0, 3.0] {
                assert!(f.l2_norm() <= libm::sqrt(p) * linf_l2_norm(&f, p).unwrap() * (1.0 + 1e-14));
            }
            let (na, nc) = (linf_l2_norm(&f, 3.0).unwrap(), linf_l2_norm(&f, 2.0).unwrap());
            assert!(nc <= 3f64.sqrt() * na * (1.0 + 1e-14));
            assert!(na <= 2f64.sqrt() * nc * (1.0 + 1e-14));
        }
    }

    #[test]
    fn norm_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        for _ in 0..20 {
            let f = random_window(&mut rng, STEP, 80);
            let (l, w2, w1) = (linf_l2_norm(&f, 1.0).unwrap(), w2_norm(&f, 1.0).unwrap(), w1_norm(&f, 1.0).unwrap());
            assert!(l <= w2 * (1.0 + 1e-14) && w2 <= w1 * (1.0 + 1e-14));
        }
    }
}
