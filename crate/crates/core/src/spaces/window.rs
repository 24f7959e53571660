use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Relative tolerance for deciding that a real number is an integer multiple of the step.
pub(crate) const ALIGN_TOL: f64 = 1e-9;

/// `value / step` as an integer, or an alignment error.
pub(crate) fn grid_index(value: f64, step: f64) -> Result<i64> {
    let r = value / step;
    let n = libm::round(r);
    if libm::fabs(r - n) > ALIGN_TOL * (1.0 + libm::fabs(r)) {
        return Err(Error::Alignment { value, step });
    }
    Ok(n as i64)
}

/// Window samples `g(i·step)` for `i ∈ [start, start + len)`, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWindow {
    step: f64,
    start: i64,
    values: Vec<C64>,
}

impl SampledWindow {
    pub fn new(step: f64, start: i64, values: Vec<C64>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidParameter("sample step must be positive"));
        }
        Ok(Self { step, start, values })
    }

    pub fn zero(step: f64) -> Result<Self> {
        Self::new(step, 0, Vec::new())
    }

    /// Samples `f(i·step)` for `i ∈ [start, end)`.
    pub fn from_fn(step: f64, start: i64, end: i64, f: impl Fn(f64) -> C64) -> Result<Self> {
        let values = (start..end.max(start)).map(|i| f(i as f64 * step)).collect();
        Self::new(step, start, values)
    }

    /// Real samples stored from index `start` on.
    pub fn from_real(step: f64, start: i64, values: &[f64]) -> Result<Self> {
        Self::new(step, start, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last stored index.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Sample `i`, zero outside the stored range.
    pub fn get(&self, i: i64) -> C64 {
        let k = i - self.start;
        if k >= 0 && (k as usize) < self.values.len() {
            self.values[k as usize]
        } else {
            ZERO
        }
    }

    /// Position of sample `i`.
    pub fn x(&self, i: i64) -> f64 {
        i as f64 * self.step
    }

    /// `[first, last + 1)` over nonzero samples, `None` for the zero window.
    pub fn nonzero_range(&self) -> Option<(i64, i64)> {
        let first = self.values.iter().position(|z| *z != ZERO)?;
        let last = self.values.iter().rposition(|z| *z != ZERO)?;
        Some((self.start + first as i64, self.start + last as i64 + 1))
    }

    /// Drops zero samples at both ends.
    pub fn trimmed(&self) -> Self {
        match self.nonzero_range() {
            Some((lo, hi)) => self.restricted(lo, hi),
            None => Self { step: self.step, start: 0, values: Vec::new() },
        }
    }

    /// Samples with index in `[lo, hi)`; the result stores exactly that range.
    pub fn restricted(&self, lo: i64, hi: i64) -> Self {
        Self { step: self.step, start: lo, values: (lo..hi.max(lo)).map(|i| self.get(i)).collect() }
    }

    /// Support `[start·step, end·step)` of the stored samples.
    pub fn support(&self) -> (f64, f64) {
        (self.x(self.start), self.x(self.end()))
    }

    /// `max(|lo|, |hi|)` over the nonzero support.
    pub fn support_radius(&self) -> f64 {
        match self.nonzero_range() {
            Some((lo, hi)) => libm::fabs(self.x(lo)).max(libm::fabs(self.x(hi))),
            None => 0.0,
        }
    }

    /// Length of the nonzero support.
    pub fn support_width(&self) -> f64 {
        self.nonzero_range().map_or(0.0, |(lo, hi)| (hi - lo) as f64 * self.step)
    }

    pub fn scaled(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { step: self.step, start: self.start, values: self.values.iter().map(|&z| f(z)).collect() }
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        libm::fabs(self.step - other.step) <= 1e-12 * self.step
    }

    pub(crate) fn check_grid(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::Alignment { value: other.step, step: self.step })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_grid(other)?;
        let (lo, hi) = span(self, other);
        Ok(Self { step: self.step, start: lo, values: (lo..hi).map(|i| f(self.get(i), other.get(i))).collect() })
    }

    /// `max_i |f_i − g_i|` over the union of both ranges.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_grid(other)?;
        let (lo, hi) = span(self, other);
        Ok((lo..hi).map(|i| (self.get(i) - other.get(i)).norm()).fold(0.0, f64::max))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, z| a.max(z.norm()))
    }

    /// Riemann-sum `‖f‖_{L²}`.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.step * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Riemann-sum `⟨f, g⟩_{L²}`.
    pub fn l2_inner(&self, other: &Self) -> Result<C64> {
        self.check_grid(other)?;
        let lo = self.start.max(other.start);
        let hi = self.end().min(other.end());
        Ok((lo..hi).fold(ZERO, |acc, i| acc + self.get(i) * other.get(i).conj()) * self.step)
    }

    /// `out[r] = Σ_{i ≡ r (mod period)} f_i·conj(g_{i−shift})` for `r ∈ [0, period)`.
    ///
    /// With `shift = 0` this is the bracket product sampled on the period grid.
    pub fn periodized_product(&self, other: &Self, shift: i64, period: usize) -> Vec<C64> {
        let p = period as i64;
        let mut out = vec![ZERO; period];
        let lo = self.start.max(other.start + shift);
        let hi = self.end().min(other.end() + shift);
        for i in lo..hi {
            let f = self.get(i);
            if f == ZERO {
                continue;
            }
            out[i.rem_euclid(p) as usize] += f * other.get(i - shift).conj();
        }
        out
    }
}

fn span(f: &SampledWindow, g: &SampledWindow) -> (i64, i64) {
    match (f.is_empty(), g.is_empty()) {
        (true, true) => (0, 0),
        (true, false) => (g.start, g.end()),
        (false, true) => (f.start, f.end()),
        (false, false) => (f.start.min(g.start), f.end().max(g.end())),
    }
}

/// Growth model of the per-cell sups `c_n = ess sup_{[nP, (n+1)P)} |f|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// Only the first `cells` cells are nonzero.
    Compact { cells: u32 },
    /// `ratio^n`, `ratio < 1`.
    Geometric { ratio: f64 },
    /// `e^{−rate·n²}`.
    Gaussian { rate: f64 },
    /// `(n + 1)^{−exponent}`.
    Power { exponent: f64 },
}

/// Analytic tail model for a window on cells of length `period`.
///
/// `overlap` bounds how many cells can be nonzero above a single point of
/// `[0, period)` once folded; `None` means unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSups {
    pub scale: f64,
    pub decay: Decay,
    pub overlap: Option<u32>,
    pub period: f64,
    pub two_sided: bool,
}

impl CellSups {
    pub fn new(scale: f64, decay: Decay, period: f64) -> Result<Self> {
        if !(scale >= 0.0) || !(period > 0.0) {
            return Err(Error::InvalidParameter("cell sups need a nonnegative scale and positive period"));
        }
        match decay {
            Decay::Geometric { ratio } if !(0.0..1.0).contains(&ratio) => {
                return Err(Error::InvalidParameter("geometric decay ratio must lie in [0, 1)"))
            }
            Decay::Gaussian { rate } if !(rate > 0.0) => {
                return Err(Error::InvalidParameter("gaussian decay rate must be positive"))
            }
            Decay::Power { exponent } if !exponent.is_finite() => {
                return Err(Error::InvalidParameter("power decay exponent must be finite"))
            }
            _ => {}
        }
        Ok(Self { scale, decay, overlap: None, period, two_sided: false })
    }

    pub fn with_overlap(mut self, overlap: u32) -> Self {
        self.overlap = Some(overlap);
        self
    }

    pub fn two_sided(mut self) -> Self {
        self.two_sided = true;
        self
    }

    /// `c_n` (for two-sided models `c_{|n|}`).
    pub fn value(&self, n: i64) -> f64 {
        let k = if self.two_sided {
            n.unsigned_abs()
        } else if n < 0 {
            return 0.0;
        } else {
            n as u64
        };
        let d = match self.decay {
            Decay::Compact { cells } => {
                if k < cells as u64 {
                    1.0
                } else {
                    0.0
                }
            }
            Decay::Geometric { ratio } => libm::pow(ratio, k as f64),
            Decay::Gaussian { rate } => libm::exp(-rate * (k as f64) * (k as f64)),
            Decay::Power { exponent } => libm::pow(k as f64 + 1.0, -exponent),
        };
        self.scale * d
    }

    /// Whether `Σ_n c_n^p < ∞`.
    pub fn summable(&self, p: f64) -> bool {
        if self.scale == 0.0 {
            return true;
        }
        match self.decay {
            Decay::Compact { .. } | Decay::Geometric { .. } | Decay::Gaussian { .. } => true,
            Decay::Power { exponent } => exponent * p > 1.0,
        }
    }

    /// Whether `c_n → 0`.
    pub fn vanishing(&self) -> bool {
        self.scale == 0.0 || !matches!(self.decay, Decay::Power { exponent } if exponent <= 0.0)
    }

    /// Whether `(c_n)` is bounded.
    pub fn bounded(&self) -> bool {
        self.scale == 0.0 || !matches!(self.decay, Decay::Power { exponent } if exponent < 0.0)
    }
}

/// Shape of a window before sampling.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowShape {
    /// `e^{−π((x − center)/width)²}`.
    Gaussian {
        center: f64,
        width: f64,
    },
    /// `χ_{[lo, hi)}`.
    Rect {
        lo: f64,
        hi: f64,
    },
    /// `max(0, 1 − |x − center|/half_width)`.
    Hat {
        center: f64,
        half_width: f64,
    },
    /// `e^{−rate·|x − center|}`.
    Exponential {
        center: f64,
        rate: f64,
    },
    Samples(SampledWindow),
    /// Dyadic bumps `χ_{[n+1−2^{−n}, n+1−2^{−n−1})}` with heights `1/(n+1)`.
    PaperF1,
    /// Same bumps with heights `1/√(n+1)`.
    PaperF2,
    /// Same bumps with height 1.
    PaperF3,
}

/// A window `g` on the real line: a shape, an amplitude, the tail cut-off used
/// for analytic shapes and an optional cell-sup model.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpec {
    pub shape: WindowShape,
    pub amplitude: C64,
    pub eps_tail: f64,
    pub cell_sups: Option<CellSups>,
}

pub const DEFAULT_EPS_TAIL: f64 = 1e-12;

impl WindowSpec {
    fn with_shape(shape: WindowShape) -> Self {
        Self { shape, amplitude: C64::new(1.0, 0.0), eps_tail: DEFAULT_EPS_TAIL, cell_sups: None }
    }

    /// `2^{1/4}/√width · e^{−π((x−center)/width)²}`, unit `L²` norm.
    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidParameter("gaussian width must be positive"));
        }
        let amp = libm::pow(2.0, 0.25) / libm::sqrt(width);
        let model = CellSups::new(amp, Decay::Gaussian { rate: PI / (width * width) }, 1.0)?.two_sided();
        Ok(Self {
            amplitude: C64::new(amp, 0.0),
            cell_sups: Some(model),
            ..Self::with_shape(WindowShape::Gaussian { center, width })
        })
    }

    pub fn rect(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidParameter("rect needs lo < hi"));
        }
        Ok(Self::with_shape(WindowShape::Rect { lo, hi }))
    }

    pub fn hat(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidParameter("hat half-width must be positive"));
        }
        Ok(Self::with_shape(WindowShape::Hat { center, half_width }))
    }

    pub fn exponential(center: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0) {
            return Err(Error::InvalidParameter("exponential rate must be positive"));
        }
        let model = CellSups::new(1.0, Decay::Geometric { ratio: libm::exp(-rate) }, 1.0)?.two_sided();
        Ok(Self { cell_sups: Some(model), ..Self::with_shape(WindowShape::Exponential { center, rate }) })
    }

    pub fn samples(window: SampledWindow) -> Self {
        Self::with_shape(WindowShape::Samples(window))
    }

    pub fn paper_f1() -> Self {
        Self::bumps(WindowShape::PaperF1, 1.0)
    }

    pub fn paper_f2() -> Self {
        Self::bumps(WindowShape::PaperF2, 0.5)
    }

    pub fn paper_f3() -> Self {
        Self::bumps(WindowShape::PaperF3, 0.0)
    }

    fn bumps(shape: WindowShape, exponent: f64) -> Self {
        let model =
            CellSups { scale: 1.0, decay: Decay::Power { exponent }, overlap: Some(1), period: 1.0, two_sided: false };
        Self { cell_sups: Some(model), ..Self::with_shape(shape) }
    }

    pub fn with_amplitude(mut self, amplitude: C64) -> Self {
        if let Some(m) = self.cell_sups.as_mut() {
            m.scale *= amplitude.norm() / self.amplitude.norm().max(f64::MIN_POSITIVE);
        }
        self.amplitude = amplitude;
        self
    }

    pub fn with_eps_tail(mut self, eps: f64) -> Self {
        self.eps_tail = eps;
        self
    }

    pub fn with_cell_sups(mut self, model: Option<CellSups>) -> Self {
        self.cell_sups = model;
        self
    }

    /// Whether the untruncated window has bounded support.
    pub fn has_finite_support(&self) -> bool {
        matches!(self.shape, WindowShape::Rect { .. } | WindowShape::Hat { .. } | WindowShape::Samples(_))
    }

    fn tail_radius(&self, decay_log: f64) -> f64 {
        let ratio = self.amplitude.norm() / self.eps_tail;
        if ratio <= 1.0 {
            0.0
        } else {
            decay_log * libm::log(ratio)
        }
    }

    /// `[lo, hi]` outside which the (tail-truncated) window vanishes.
    pub fn support(&self, step: f64) -> (f64, f64) {
        match &self.shape {
            WindowShape::Gaussian { center, width } => {
                let r = width * libm::sqrt(self.tail_radius(1.0 / PI));
                (center - r, center + r)
            }
            WindowShape::Rect { lo, hi } => (*lo, *hi),
            WindowShape::Hat { center, half_width } => (center - half_width, center + half_width),
            WindowShape::Exponential { center, rate } => {
                let r = self.tail_radius(1.0 / rate);
                (center - r, center + r)
            }
            WindowShape::Samples(w) => w.support(),
            WindowShape::PaperF1 | WindowShape::PaperF2 | WindowShape::PaperF3 => (0.0, bump_count(step) as f64),
        }
    }

    /// Samples the window at `i·step`.
    ///
    /// Rects and bumps are half-open, `[lo, hi)`. Analytic shapes are cut where
    /// `|g| < eps_tail`; the dyadic bumps stop once their width drops below `step`.
    pub fn sample(&self, step: f64) -> Result<SampledWindow> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidParameter("sample step must be positive"));
        }
        let amp = self.amplitude;
        let w = match &self.shape {
            WindowShape::Samples(w) => {
                w.check_grid(&SampledWindow::zero(step)?).map_err(|_| Error::Alignment { value: w.step(), step })?;
                return Ok(w.scaled(amp));
            }
            WindowShape::Rect { lo, hi } => {
                let (i0, i1) = (half_open_index(*lo, step), half_open_index(*hi, step));
                SampledWindow::new(step, i0, vec![amp; (i1 - i0).max(0) as usize])?
            }
            WindowShape::PaperF1 | WindowShape::PaperF2 | WindowShape::PaperF3 => {
                let n_bumps = bump_count(step);
                let end = half_open_index(n_bumps as f64, step);
                let mut values = vec![ZERO; end.max(0) as usize];
                for n in 0..n_bumps {
                    let height = match self.shape {
                        WindowShape::PaperF1 => 1.0 / (n as f64 + 1.0),
                        WindowShape::PaperF2 => 1.0 / libm::sqrt(n as f64 + 1.0),
                        _ => 1.0,
                    };
                    let lo = n as f64 + 1.0 - libm::ldexp(1.0, -(n as i32));
                    let hi = n as f64 + 1.0 - libm::ldexp(1.0, -(n as i32) - 1);
                    for i in half_open_index(lo, step)..half_open_index(hi, step) {
                        values[i as usize] = amp * height;
                    }
                }
                SampledWindow::new(step, 0, values)?
            }
            shape => {
                let (lo, hi) = self.support(step);
                let i0 = libm::ceil(lo / step - ALIGN_TOL) as i64;
                let i1 = libm::floor(hi / step + ALIGN_TOL) as i64 + 1;
                let f = |x: f64| -> f64 {
                    match *shape {
                        WindowShape::Gaussian { center, width } => {
                            let t = (x - center) / width;
                            libm::exp(-PI * t * t)
                        }
                        WindowShape::Hat { center, half_width } => (1.0 - libm::fabs(x - center) / half_width).max(0.0),
                        WindowShape::Exponential { center, rate } => libm::exp(-rate * libm::fabs(x - center)),
                        _ => unreachable!(),
                    }
                };
                SampledWindow::from_fn(step, i0, i1, |x| amp * f(x))?
            }
        };
        Ok(w.trimmed())
    }
}

/// First index `i` with `i·step ≥ x`, treating near-grid `x` as on the grid.
fn half_open_index(x: f64, step: f64) -> i64 {
    libm::ceil(x / step - ALIGN_TOL) as i64
}

/// Number of dyadic bumps of width at least `step`.
fn bump_count(step: f64) -> usize {
    let mut n = 0;
    while libm::ldexp(1.0, -(n as i32) - 1) >= step * (1.0 - ALIGN_TOL) && n < 60 {
        n += 1;
    }
    n
}
