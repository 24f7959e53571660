//! Gabor systems `G(g, a, b) = (M_{mb} T_{na} g)_{m,n}` on a sample grid.
//!
//! With `a = p_a·Δ` and `1/b = q_b·Δ` every translation in play is an index
//! shift. The frame operator is then described by the correlation functions
//! `G_k^{h,g}` (period `a`) and `Γ_j` (period `1/b`), and fiberizes over the
//! `q_b` fibers of `[0, 1/b)` into `(2K+1)×(2K+1)` matrices
//! `s_kj(x) = (1/b)·G_{k−j}(x + k/b)`.

mod dual;
mod walnut;

pub use dual::{dual_window, wexler_raz_verify, DualWindow, WexlerRazReport};
pub use walnut::{analysis_matrix, direct_frame_apply, walnut_apply, AnalysisMatrix, WalnutOutput};

use alloc::vec;
use alloc::vec::Vec;

use crate::hmod::{weak_frame_bounds, FiberMatrixField, FrameBounds, ModuleSequence};
use crate::linalg::{HermitianEigen, SquareMatrix};
use crate::par::map_indices;
use crate::schur::{schur_conditions_with, SchurReport, TailEvidence};
use crate::spaces::{fiberize_clipped, rational_approx, SampledWindow, WindowSpec};
use crate::valg::FiberField;
use crate::{Error, Result, Tolerances, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Lattice `aZ × bZ` snapped onto a sample grid of step `Δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    step: f64,
    p_a: usize,
    q_b: usize,
    requested_a: f64,
    requested_b: f64,
}

impl Lattice {
    /// Snaps `a` and `1/b` to the nearest positive multiples of `step`.
    pub fn new(a: f64, b: f64, step: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && step > 0.0) || !(a.is_finite() && b.is_finite() && step.is_finite()) {
            return Err(Error::InvalidParameter("lattice parameters and step must be positive"));
        }
        let snap = |x: f64| (libm::round(x / step) as usize).max(1);
        Ok(Self { step, p_a: snap(a), q_b: snap(1.0 / b), requested_a: a, requested_b: b })
    }

    /// Lattice whose fiber domain `[0, 1/b)` carries `fibers` samples.
    pub fn with_fibers(a: f64, b: f64, fibers: usize) -> Result<Self> {
        if fibers == 0 || !(b > 0.0) {
            return Err(Error::InvalidParameter("fiber count and b must be positive"));
        }
        Self::new(a, b, 1.0 / (b * fibers as f64))
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Snapped translation step `a = p_a·Δ`.
    pub fn a(&self) -> f64 {
        self.p_a as f64 * self.step
    }

    /// Snapped modulation step, `1/b = q_b·Δ`.
    pub fn b(&self) -> f64 {
        1.0 / self.modulation_period()
    }

    /// `1/b`, the fiber period.
    pub fn modulation_period(&self) -> f64 {
        self.q_b as f64 * self.step
    }

    pub fn p_a(&self) -> usize {
        self.p_a
    }

    pub fn q_b(&self) -> usize {
        self.q_b
    }

    /// Number of fibers of `[0, 1/b)`.
    pub fn fibers(&self) -> usize {
        self.q_b
    }

    /// `ab = p/q` in lowest terms.
    pub fn density(&self) -> (u64, u64) {
        let g = gcd(self.p_a as u64, self.q_b as u64);
        (self.p_a as u64 / g, self.q_b as u64 / g)
    }

    /// `ab` as a real number.
    pub fn ab(&self) -> f64 {
        self.p_a as f64 / self.q_b as f64
    }

    /// Largest distance moved by snapping `a` or `1/b`.
    pub fn snap_distance(&self) -> f64 {
        libm::fabs(self.a() - self.requested_a).max(libm::fabs(self.modulation_period() - 1.0 / self.requested_b))
    }

    /// `(a, b)` as requested before snapping.
    pub fn requested(&self) -> (f64, f64) {
        (self.requested_a, self.requested_b)
    }

    /// Whether the requested `ab` is rational with a small denominator.
    pub fn requested_rational(&self) -> Option<(u64, u64)> {
        rational_approx(self.requested_a * self.requested_b, 1e-14)
    }

    /// The adjoint lattice `(1/b)Z × (1/a)Z` on the same grid.
    pub fn adjoint(&self) -> Self {
        Self {
            step: self.step,
            p_a: self.q_b,
            q_b: self.p_a,
            requested_a: 1.0 / self.requested_b,
            requested_b: 1.0 / self.requested_a,
        }
    }

    pub fn sample(&self, window: &WindowSpec) -> Result<SampledWindow> {
        window.sample(self.step)
    }

    pub(crate) fn check_window(&self, w: &SampledWindow) -> Result<()> {
        if libm::fabs(w.step() - self.step) > 1e-12 * self.step {
            return Err(Error::Alignment { value: w.step(), step: self.step });
        }
        Ok(())
    }

    /// `K = ceil(support_radius·b) + 2`.
    pub fn default_truncation(&self, g: &SampledWindow) -> usize {
        libm::ceil(g.support_radius() * self.b() - 1e-9).max(0.0) as usize + 2
    }

    /// Largest `|k|` with `G_k ≠ 0` possible: `k/b` must be shorter than the support.
    pub fn needed_modulation_radius(&self, g: &SampledWindow) -> usize {
        g.nonzero_range().map_or(0, |(lo, hi)| ((hi - lo - 1) as usize) / self.q_b)
    }

    /// Largest `|j|` with `Γ_j ≠ 0` possible.
    pub fn needed_translation_radius(&self, g: &SampledWindow) -> usize {
        g.nonzero_range().map_or(0, |(lo, hi)| ((hi - lo - 1) as usize) / self.p_a)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Non-fatal findings attached to reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// `a` or `1/b` moved by this much when snapped to the grid.
    Snap { distance: f64 },
    /// A sum over `|k| ≤ used` was cut below the `needed` radius.
    Truncation { needed: usize, used: usize },
    /// A fiber solve had condition number above the configured limit.
    Conditioning { fiber: usize, condition: f64 },
}

/// Snap warning for lattices that moved more than rounding.
pub fn snap_warning(lat: &Lattice) -> Option<Warning> {
    let d = lat.snap_distance();
    (d > 1e-12 * lat.a().max(lat.modulation_period())).then_some(Warning::Snap { distance: d })
}

/// `G_k^{h,g}(x) = Σ_n h(x − na)·conj(g(x − na − k/b))` on the `p_a` fibers of `[0, a)`.
pub fn modulation_correlation(g: &SampledWindow, h: &SampledWindow, lat: &Lattice, k: i64) -> Result<FiberField> {
    lat.check_window(g)?;
    lat.check_window(h)?;
    FiberField::new(lat.a(), h.periodized_product(g, k * lat.q_b as i64, lat.p_a))
}

/// `Γ_j(x) = Σ_n g(x − n/b)·conj(g(x − n/b − ja))` on the `q_b` fibers of `[0, 1/b)`.
pub fn translate_correlation(g: &SampledWindow, lat: &Lattice, j: i64) -> Result<FiberField> {
    lat.check_window(g)?;
    FiberField::new(lat.modulation_period(), g.periodized_product(g, j * lat.p_a as i64, lat.q_b))
}

/// Table of `G_l^{h,g}` for `|l| ≤ radius`; larger `|l|` read as zero.
pub(crate) struct Correlations {
    radius: i64,
    period: usize,
    tables: Vec<Vec<C64>>,
}

impl Correlations {
    pub(crate) fn new(g: &SampledWindow, h: &SampledWindow, lat: &Lattice, radius: usize) -> Result<Self> {
        lat.check_window(g)?;
        lat.check_window(h)?;
        let r = radius as i64;
        let q = lat.q_b as i64;
        let tables = map_indices(2 * radius + 1, |s| h.periodized_product(g, (s as i64 - r) * q, lat.p_a));
        Ok(Self { radius: r, period: lat.p_a, tables })
    }

    /// `G_l` at sample index `i` (reduced mod `p_a`).
    pub(crate) fn at(&self, l: i64, i: i64) -> C64 {
        if l.abs() > self.radius {
            return ZERO;
        }
        self.tables[(l + self.radius) as usize][i.rem_euclid(self.period as i64) as usize]
    }

    pub(crate) fn table(&self, l: i64) -> Option<&[C64]> {
        (l.abs() <= self.radius).then(|| self.tables[(l + self.radius) as usize].as_slice())
    }
}

/// `S(m)_{kj} = (1/b)·G_{k−j}^{h,g}[m + k·q_b]` for `k, j ∈ [−K, K]`.
fn fiber_matrix(corr: &Correlations, lat: &Lattice, trunc: usize, m: usize) -> SquareMatrix {
    let k_max = trunc as i64;
    let q = lat.q_b as i64;
    let inv_b = lat.modulation_period();
    SquareMatrix::from_fn(2 * trunc + 1, |r, c| {
        let (k, j) = (r as i64 - k_max, c as i64 - k_max);
        corr.at(k - j, m as i64 + k * q) * inv_b
    })
}

fn frame_correlations(g: &SampledWindow, h: &SampledWindow, lat: &Lattice, trunc: usize) -> Result<Correlations> {
    let needed = lat.needed_modulation_radius(g).max(lat.needed_modulation_radius(h));
    Correlations::new(g, h, lat, needed.min(2 * trunc))
}

/// Fiberized frame-operator matrices `m_kj(x) = (1/b)·G_{k−j}^{h,g}(x + k/b)` on `[0, 1/b)`.
pub fn fiber_frame_matrix(
    g: &SampledWindow,
    h: &SampledWindow,
    lat: &Lattice,
    trunc: usize,
) -> Result<FiberMatrixField> {
    let corr = frame_correlations(g, h, lat, trunc)?;
    let fibers = map_indices(lat.q_b, |m| fiber_matrix(&corr, lat, trunc, m));
    FiberMatrixField::new(lat.modulation_period(), fibers)
}

/// Frame bounds of `G(g, a, b)` as extreme fiber eigenvalues of the `|k| ≤ K` section.
pub fn gabor_frame_bounds(g: &SampledWindow, lat: &Lattice, trunc: usize) -> Result<FrameBounds> {
    let corr = frame_correlations(g, g, lat, trunc)?;
    let ext: Vec<Result<(f64, f64)>> = map_indices(lat.q_b, |m| {
        HermitianEigen::new(&fiber_matrix(&corr, lat, trunc, m)).map(|e| (e.min(), e.max())).map_err(|e| e.at_fiber(m))
    });
    let (lo, hi) = ext
        .into_iter()
        .try_fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| r.map(|(a, b)| (lo.min(a), hi.max(b))))?;
    Ok(FrameBounds { lower: lo.max(0.0), upper: hi.max(0.0) })
}

/// The translates `T_{na}(g/√b)` fiberized over `[0, 1/b)` and clipped to cells `[−N, N]`.
pub fn translate_sequence(g: &SampledWindow, lat: &Lattice, radius: usize) -> Result<ModuleSequence> {
    lat.check_window(g)?;
    let (lo, hi) = g.nonzero_range().ok_or(Error::InvalidParameter("window is identically zero"))?;
    let (p, q) = (lat.p_a as i64, lat.q_b as i64);
    let r = radius as i64;
    let (sec_lo, sec_hi) = (-r * q, (r + 1) * q);
    // T_{na}g meets the section iff [lo + np, hi + np) ∩ [sec_lo, sec_hi) ≠ ∅.
    let n0 = (sec_lo - hi + 1).div_euclid(p) + 1;
    let n1 = (sec_hi - 1 - lo).div_euclid(p);
    let scale = C64::new(libm::sqrt(lat.modulation_period()), 0.0);
    let g = g.scaled(scale);
    let elements = (n0..=n1)
        .map(|n| {
            fiberize_clipped(
                &SampledWindow::new(g.step(), g.start() + n * p, g.values().to_vec())?,
                lat.modulation_period(),
                radius,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleSequence::new(elements)
}

/// Frame bounds through the module of translates: weak frame bounds of
/// `(T_{na}(g/√b))_n` in `L∞_{1/b}(ℓ²)` at section radius `N`.
pub fn module_frame_bounds(g: &SampledWindow, lat: &Lattice, radius: usize) -> Result<FrameBounds> {
    weak_frame_bounds(&translate_sequence(g, lat, radius)?)
}

/// Upper Bessel bounds of `G(g, a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselEstimates {
    /// `(1/b)·‖Σ_{|k|≤K} |G_k|‖∞`.
    pub cc: f64,
    /// `(1/b)·Σ_{|k|≤K} ‖G_k‖∞`.
    pub daubechies: f64,
    /// `(1/b)·‖Σ_{|j|≤J} |Γ_j|‖∞`.
    pub dual_cc: f64,
    /// `(1/b)·` Schur bound of the Gramian of translates.
    pub schur: f64,
    pub schur_report: SchurReport,
    /// Translate radius `J` used for `dual_cc` and the Gramian.
    pub translate_radius: usize,
    pub warnings: Vec<Warning>,
}

/// Dense Gramian fields above this many entries are replaced by the
/// structured computation of the absolute Schur budgets.
const DENSE_GRAMIAN_LIMIT: usize = 1 << 22;

pub fn bessel_estimates(g: &SampledWindow, lat: &Lattice, trunc: usize) -> Result<BesselEstimates> {
    lat.check_window(g)?;
    let inv_b = lat.modulation_period();
    let mut warnings = Vec::new();
    let needed = lat.needed_modulation_radius(g);
    if trunc < needed {
        warnings.push(Warning::Truncation { needed, used: trunc });
    }
    let radius = trunc.min(needed);
    let corr = Correlations::new(g, g, lat, radius)?;
    let mut pointwise = vec![0.0; lat.p_a];
    let mut daubechies = 0.0;
    for l in -(radius as i64)..=radius as i64 {
        let t = corr.table(l).expect("in range");
        let mut sup = 0.0f64;
        for (acc, z) in pointwise.iter_mut().zip(t) {
            *acc += z.norm();
            sup = sup.max(z.norm());
        }
        daubechies += sup;
    }
    let cc = inv_b * pointwise.iter().copied().fold(0.0, f64::max);
    let daubechies = inv_b * daubechies;

    let needed_j = lat.needed_translation_radius(g);
    let jr = trunc.max(needed_j + 2);
    let gammas: Vec<Vec<C64>> = map_indices(2 * needed_j + 1, |s| {
        g.periodized_product(g, (s as i64 - needed_j as i64) * lat.p_a as i64, lat.q_b)
    });
    let gamma = |l: i64, i: i64| -> C64 {
        if l.unsigned_abs() as usize > needed_j {
            ZERO
        } else {
            gammas[(l + needed_j as i64) as usize][i.rem_euclid(lat.q_b as i64) as usize]
        }
    };
    let dual_cc = inv_b
        * (0..lat.q_b as i64)
            .map(|i| (-(needed_j as i64)..=needed_j as i64).map(|l| gamma(l, i).norm()).sum::<f64>())
            .fold(0.0, f64::max);

    let dim = 2 * jr + 1;
    let schur_report = if dim * dim * lat.q_b <= DENSE_GRAMIAN_LIMIT {
        let field = translate_gramian(&gamma, lat, jr)?;
        schur_conditions_with(&field, TailEvidence::Summable)
    } else {
        absolute_gramian_budgets(&gammas, needed_j, jr)
    };
    Ok(BesselEstimates {
        cc,
        daubechies,
        dual_cc,
        schur: inv_b * schur_report.bound,
        schur_report,
        translate_radius: jr,
        warnings,
    })
}

/// `Γ_{jk}(x) = Γ_{j−k}(x − ka)` for `j, k ∈ [−J, J]`.
fn translate_gramian(gamma: &(dyn Fn(i64, i64) -> C64 + Sync), lat: &Lattice, jr: usize) -> Result<FiberMatrixField> {
    let r = jr as i64;
    let p = lat.p_a as i64;
    let fibers = map_indices(lat.q_b, |m| {
        SquareMatrix::from_fn(2 * jr + 1, |a, b| {
            let (j, k) = (a as i64 - r, b as i64 - r);
            gamma(j - k, m as i64 - k * p)
        })
    });
    FiberMatrixField::new(lat.modulation_period(), fibers)
}

// Absolute Schur budgets of the Toeplitz-like Gramian without materializing it:
// the sup over fibers of |Γ_{j−k}(· − ka)| is ‖Γ_{j−k}‖∞.
fn absolute_gramian_budgets(gammas: &[Vec<C64>], needed_j: usize, jr: usize) -> SchurReport {
    let sups: Vec<f64> = gammas.iter().map(|t| t.iter().fold(0.0f64, |a, z| a.max(z.norm()))).collect();
    let r = jr as i64;
    let nj = needed_j as i64;
    let sup = |l: i64| if l.abs() > nj { 0.0 } else { sups[(l + nj) as usize] };
    let col = (-r..=r).map(|k| (-r..=r).map(|j| sup(j - k)).sum::<f64>()).fold(0.0, f64::max);
    let row = (-r..=r).map(|j| (-r..=r).map(|k| sup(j - k)).sum::<f64>()).fold(0.0, f64::max);
    SchurReport {
        col_budget: col,
        row_budget: row,
        bound: libm::sqrt(col * row),
        variant: crate::schur::SchurVariant::Absolute,
        satisfied: true,
        absolute: true,
        norm_convergent: true,
        strong_convergent: true,
    }
}

/// Residuals of the Parseval conditions `G_0 = b`, `G_k = 0 (k ≠ 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsevalReport {
    pub passed: bool,
    /// `‖G_0 − b‖∞`.
    pub g0_residual: f64,
    /// `max_{0<|k|≤K} ‖G_k‖∞`.
    pub off_residual: f64,
}

pub fn parseval_test(g: &SampledWindow, lat: &Lattice, trunc: usize, tol: &Tolerances) -> Result<ParsevalReport> {
    let radius = trunc.min(lat.needed_modulation_radius(g));
    let corr = Correlations::new(g, g, lat, radius)?;
    let b = lat.b();
    let g0_residual = corr.table(0).expect("k = 0").iter().fold(0.0f64, |a, z| a.max((z - b).norm()));
    let off_residual = (1..=radius as i64)
        .flat_map(|k| [k, -k])
        .map(|k| corr.table(k).expect("in range").iter().fold(0.0f64, |a, z| a.max(z.norm())))
        .fold(0.0, f64::max);
    Ok(ParsevalReport {
        passed: g0_residual <= tol.parseval && off_residual <= tol.parseval,
        g0_residual,
        off_residual,
    })
}

/// Everything `analyze` computes for one window and lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborAnalysis {
    pub lattice: Lattice,
    pub truncation: usize,
    pub estimates: BesselEstimates,
    pub bounds: FrameBounds,
    pub is_frame: bool,
    /// Bounds through the module of translates, when requested.
    pub module_bounds: Option<FrameBounds>,
    pub parseval: ParsevalReport,
    /// Walnut tail profile for the probe `χ_{[0, 1/b)}`.
    pub walnut_tail: Vec<f64>,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalysisOptions {
    /// Section radius `K`; `None` picks `ceil(support_radius·b) + 2`.
    pub truncation: Option<usize>,
    /// Section radius for the module-route bounds; `None` skips them.
    pub module_radius: Option<usize>,
    pub tol: Tolerances,
}

pub fn analyze(g: &SampledWindow, lat: &Lattice, opts: &AnalysisOptions) -> Result<GaborAnalysis> {
    lat.check_window(g)?;
    let trunc = opts.truncation.unwrap_or_else(|| lat.default_truncation(g));
    let mut warnings: Vec<Warning> = snap_warning(lat).into_iter().collect();
    let estimates = bessel_estimates(g, lat, trunc)?;
    warnings.extend(estimates.warnings.iter().copied());
    let bounds = gabor_frame_bounds(g, lat, trunc)?;
    let module_bounds = opts.module_radius.map(|n| module_frame_bounds(g, lat, n)).transpose()?;
    let parseval = parseval_test(g, lat, trunc, &opts.tol)?;
    let probe = SampledWindow::new(lat.step, 0, vec![C64::new(1.0, 0.0); lat.q_b])?;
    let walnut_tail = walnut_apply(g, g, lat, &probe, trunc)?.tail;
    Ok(GaborAnalysis {
        lattice: *lat,
        truncation: trunc,
        is_frame: bounds.is_frame(&opts.tol),
        estimates,
        bounds,
        module_bounds,
        parseval,
        walnut_tail,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(lo: f64, hi: f64, lat: &Lattice) -> SampledWindow {
        lat.sample(&WindowSpec::rect(lo, hi).unwrap()).unwrap()
    }

    fn gaussian_system() -> (SampledWindow, Lattice) {
        let lat = Lattice::with_fibers(1.0, 0.5, 256).unwrap();
        (lat.sample(&WindowSpec::gaussian(0.0, 1.0).unwrap()).unwrap(), lat)
    }

    #[test]
    fn lattice_snapping() {
        let lat = Lattice::with_fibers(1.0, 0.5, 256).unwrap();
        assert_eq!((lat.p_a(), lat.q_b(), lat.step()), (128, 256, 1.0 / 128.0));
        assert_eq!(lat.density(), (1, 2));
        assert_eq!(snap_warning(&lat), None);
        let odd = Lattice::with_fibers(core::f64::consts::FRAC_1_SQRT_2, 1.0, 64).unwrap();
        assert_eq!(odd.p_a(), 45);
        assert!(
            matches!(snap_warning(&odd), Some(Warning::Snap { distance }) if distance > 1e-4 && distance < 1.0 / 128.0)
        );
        let adj = lat.adjoint();
        assert_eq!((adj.a(), adj.b()), (2.0, 1.0));
    }

    #[test]
    fn correlation_examples() {
        let lat = Lattice::with_fibers(1.0, 1.0, 64).unwrap();
        let g = rect(0.0, 1.0, &lat);
        assert_eq!(modulation_correlation(&g, &g, &lat, 0).unwrap(), FiberField::unit(1.0, 64).unwrap());
        for k in [-2, -1, 1, 3] {
            assert_eq!(modulation_correlation(&g, &g, &lat, k).unwrap(), FiberField::zero(1.0, 64).unwrap());
            assert_eq!(translate_correlation(&g, &lat, k).unwrap(), FiberField::zero(1.0, 64).unwrap());
        }
        assert_eq!(translate_correlation(&g, &lat, 0).unwrap(), FiberField::unit(1.0, 64).unwrap());

        let half = Lattice::with_fibers(0.5, 1.0, 64).unwrap();
        let g = rect(0.0, 1.0, &half);
        assert_eq!(
            modulation_correlation(&g, &g, &half, 0).unwrap(),
            FiberField::constant(0.5, 32, C64::new(2.0, 0.0)).unwrap()
        );
        assert_eq!(modulation_correlation(&g, &g, &half, 1).unwrap(), FiberField::zero(0.5, 32).unwrap());
    }

    #[test]
    fn correlation_symmetries() {
        let (g, lat) = gaussian_system();
        let h = lat.sample(&WindowSpec::hat(0.3, 1.7).unwrap()).unwrap();
        let (p, q) = (lat.p_a(), lat.q_b());
        for k in -3i64..=3 {
            let lhs = modulation_correlation(&h, &g, &lat, -k).unwrap();
            let rhs = modulation_correlation(&g, &h, &lat, k).unwrap();
            for r in 0..p {
                let shifted = rhs[(r as i64 + k * q as i64).rem_euclid(p as i64) as usize];
                assert!((lhs[r] - shifted.conj()).norm() < 1e-13);
            }
            let gm = translate_correlation(&h, &lat, -k).unwrap();
            let gp = translate_correlation(&h, &lat, k).unwrap();
            for r in 0..q {
                let shifted = gp[(r as i64 - k * p as i64).rem_euclid(q as i64) as usize];
                assert!((gm[r] - shifted.conj()).norm() < 1e-13);
            }
        }
        let g0 = translate_correlation(&g, &lat, 0).unwrap();
        assert!(g0.samples().iter().all(|z| z.re >= 0.0 && z.im == 0.0));
    }

    #[test]
    fn frame_matrix_examples() {
        let lat = Lattice::with_fibers(1.0, 1.0, 32).unwrap();
        let g = rect(0.0, 1.0, &lat);
        let s = fiber_frame_matrix(&g, &g, &lat, 3).unwrap();
        assert!(s.fibers().iter().all(|m| *m == SquareMatrix::identity(7)));
        let half = Lattice::with_fibers(0.5, 1.0, 32).unwrap();
        let g = rect(0.0, 1.0, &half);
        let s = fiber_frame_matrix(&g, &g, &half, 3).unwrap();
        let two = SquareMatrix::from_fn(7, |i, j| if i == j { C64::new(2.0, 0.0) } else { ZERO });
        assert!(s.fibers().iter().all(|m| *m == two));
        let (g, lat) = gaussian_system();
        assert!(fiber_frame_matrix(&g, &g, &lat, 4).unwrap().is_hermitian(1e-10));
    }

    #[test]
    fn frame_bounds_examples() {
        let lat = Lattice::with_fibers(1.0, 1.0, 128).unwrap();
        let g = rect(0.0, 1.0, &lat);
        let b = gabor_frame_bounds(&g, &lat, 8).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
        let half = Lattice::with_fibers(0.5, 1.0, 128).unwrap();
        let b = gabor_frame_bounds(&rect(0.0, 1.0, &half), &half, 8).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-12 && (b.upper - 2.0).abs() < 1e-12);
    }

    #[test]
    fn module_route_matches_fiber_route() {
        let (g, lat) = gaussian_system();
        for k in [1, 3, 6] {
            let f = gabor_frame_bounds(&g, &lat, k).unwrap();
            let m = module_frame_bounds(&g, &lat, k).unwrap();
            assert!((f.lower - m.lower).abs() < 1e-10 && (f.upper - m.upper).abs() < 1e-10, "{f:?} {m:?}");
        }
    }

    #[test]
    fn gaussian_bounds_and_estimators() {
        let (g, lat) = gaussian_system();
        let b = gabor_frame_bounds(&g, &lat, 8).unwrap();
        // Dominated by G_0/b: 2·Σ_n 2^{1/2} e^{−2π(x−n)²}, between ~1.175 and ~2.85.
        assert!(b.lower > 1.1 && b.lower < 1.25, "{b:?}");
        assert!(b.upper > 2.8 && b.upper < 2.9, "{b:?}");
        let e = bessel_estimates(&g, &lat, 8).unwrap();
        assert!(e.warnings.is_empty());
        for est in [e.cc, e.daubechies, e.dual_cc, e.schur] {
            assert!(b.upper <= est + 1e-9, "{est} < {}", b.upper);
        }
        assert!(e.cc <= e.daubechies + 1e-12);
    }

    #[test]
    fn rect_estimators() {
        let lat = Lattice::with_fibers(1.0, 1.0, 64).unwrap();
        let e = bessel_estimates(&rect(0.0, 1.0, &lat), &lat, 4).unwrap();
        for est in [e.cc, e.daubechies, e.dual_cc, e.schur] {
            assert!((est - 1.0).abs() < 1e-14);
        }
        let half = Lattice::with_fibers(0.5, 1.0, 64).unwrap();
        assert!((bessel_estimates(&rect(0.0, 1.0, &half), &half, 4).unwrap().cc - 2.0).abs() < 1e-14);
    }

    #[test]
    fn structured_schur_matches_dense() {
        let (g, lat) = gaussian_system();
        let nj = lat.needed_translation_radius(&g);
        let gammas: Vec<Vec<C64>> =
            (-(nj as i64)..=nj as i64).map(|j| g.periodized_product(&g, j * lat.p_a() as i64, lat.q_b())).collect();
        let dense = bessel_estimates(&g, &lat, 8).unwrap().schur_report;
        let structured = absolute_gramian_budgets(&gammas, nj, 8.max(nj + 2));
        assert!((dense.bound - structured.bound).abs() < 1e-12);
    }

    #[test]
    fn truncation_warning() {
        let (g, lat) = gaussian_system();
        let e = bessel_estimates(&g, &lat, 1).unwrap();
        assert_eq!(e.warnings, vec![Warning::Truncation { needed: 2, used: 1 }]);
    }

    #[test]
    fn parseval_examples() {
        let tol = Tolerances::default();
        let lat = Lattice::with_fibers(1.0, 1.0, 64).unwrap();
        let p = parseval_test(&rect(0.0, 1.0, &lat), &lat, 4, &tol).unwrap();
        assert!(p.passed && p.g0_residual <= 1e-14 && p.off_residual <= 1e-14);
        let half = Lattice::with_fibers(0.5, 1.0, 64).unwrap();
        let g = rect(0.0, 1.0, &half).scaled(C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0));
        assert!(parseval_test(&g, &half, 4, &tol).unwrap().passed);
        let unit = Lattice::with_fibers(1.0, 1.0, 64).unwrap();
        let gauss = unit.sample(&WindowSpec::gaussian(0.0, 1.0).unwrap()).unwrap();
        let p = parseval_test(&gauss, &unit, 4, &tol).unwrap();
        assert!(!p.passed && p.g0_residual > 1e-3);
    }

    #[test]
    fn analyze_rect() {
        let lat = Lattice::with_fibers(1.0, 1.0, 128).unwrap();
        let opts = AnalysisOptions { truncation: Some(8), module_radius: Some(2), ..Default::default() };
        let r = analyze(&rect(0.0, 1.0, &lat), &lat, &opts).unwrap();
        assert!(r.parseval.passed && r.is_frame);
        assert_eq!(r.module_bounds, Some(r.bounds));
        assert!(r.walnut_tail.iter().all(|t| *t == 0.0));
        assert!(r.warnings.is_empty());
    }
}
