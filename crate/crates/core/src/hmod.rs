//! Finite truncation of the self-dual module `ℓ²_strong(Z; L∞[0, P])`.
//!
//! A [`ModuleVector`] keeps the entries with index `n ∈ [−N, N]`; everything
//! outside is zero. Strong and weak-strong sums are then finite sums, and every
//! module-level statement reduces to a statement about the `(2N+1)`-dimensional
//! coefficient column at each fiber.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{HermitianEigen, SquareMatrix};
use crate::par::map_indices;
use crate::valg::{sup_norm, FiberField};
use crate::{Error, Result, Tolerances, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Element of `ℓ²_strong(L∞[0, P])` truncated to indices `[−N, N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    radius: usize,
    entries: Vec<FiberField>,
}

impl ModuleVector {
    /// Builds a vector from entries ordered `n = −N, …, N`.
    pub fn from_entries(radius: usize, entries: Vec<FiberField>) -> Result<Self> {
        if entries.len() != 2 * radius + 1 {
            return Err(Error::LengthMismatch { expected: 2 * radius + 1, found: entries.len() });
        }
        if entries.windows(2).any(|w| !w[0].is_compatible(&w[1])) {
            return Err(Error::Incompatible("module entries live on different fiber grids"));
        }
        Ok(Self { radius, entries })
    }

    pub fn zeros(radius: usize, period: f64, fibers: usize) -> Result<Self> {
        let z = FiberField::zero(period, fibers)?;
        Ok(Self { radius, entries: vec![z; 2 * radius + 1] })
    }

    /// The canonical weak basis element `e^{(n)}`.
    pub fn basis(n: i64, radius: usize, period: f64, fibers: usize) -> Result<Self> {
        let mut v = Self::zeros(radius, period, fibers)?;
        let slot = v.slot(n).ok_or(Error::Truncation { required: n.unsigned_abs() as usize, available: radius })?;
        v.entries[slot] = FiberField::unit(period, fibers)?;
        Ok(v)
    }

    /// Builds a vector from its per-fiber coefficient columns.
    pub fn from_columns(radius: usize, period: f64, columns: &[Vec<C64>]) -> Result<Self> {
        let dim = 2 * radius + 1;
        let entries = (0..dim)
            .map(|slot| FiberField::new(period, columns.iter().map(|col| col[slot]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(radius, entries)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn period(&self) -> f64 {
        self.entries[0].period()
    }

    pub fn fibers(&self) -> usize {
        self.entries[0].fibers()
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let r = self.radius as i64;
        (-r..=r).contains(&n).then(|| (n + r) as usize)
    }

    /// Entry `n`, or `None` when `|n| > N` (implicitly zero).
    pub fn entry(&self, n: i64) -> Option<&FiberField> {
        self.slot(n).map(|s| &self.entries[s])
    }

    pub fn entries(&self) -> &[FiberField] {
        &self.entries
    }

    /// Coefficient column `(x_{−N}[m], …, x_N[m])` at fiber `m`.
    pub fn column(&self, m: usize) -> Vec<C64> {
        self.entries.iter().map(|e| e[m]).collect()
    }

    pub fn is_compatible(&self, other: &Self) -> bool {
        self.radius == other.radius && self.entries[0].is_compatible(&other.entries[0])
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::Incompatible("module vectors differ in truncation or fiber grid"))
        }
    }

    /// Left action of the algebra: `(a·x)_n = a·x_n`.
    pub fn act(&self, a: &FiberField) -> Result<Self> {
        let entries = self.entries.iter().map(|e| crate::valg::alg_mul(a, e)).collect::<Result<Vec<_>>>()?;
        Ok(Self { radius: self.radius, entries })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(x, y)| x.try_add(y)).collect::<Result<Vec<_>>>()?;
        Ok(Self { radius: self.radius, entries })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { radius: self.radius, entries: self.entries.iter().map(|e| e.scale(s)).collect() }
    }

    /// Index shift `(Sx)_n = x_{n−shift}`; entries pushed past `±N` are dropped.
    pub fn shift(&self, shift: i64) -> Self {
        let r = self.radius as i64;
        let zero = self.entries[0].map(|_| ZERO);
        let entries = (-r..=r).map(|n| self.entry(n - shift).cloned().unwrap_or_else(|| zero.clone())).collect();
        Self { radius: self.radius, entries }
    }

    /// Entrywise dilation `L∞[0, a] → L∞[0, c]`, a unitary between modules.
    pub fn dilate(&self, period: f64) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.with_period(period)).collect::<Result<Vec<_>>>()?;
        Ok(Self { radius: self.radius, entries })
    }

    /// Weak-strong convergence diagnostic: `t_k = ‖Σ_{|n|>k} |x_n|²‖∞` for `k = 0..=N`.
    pub fn tail_norms(&self) -> Vec<f64> {
        let m = self.fibers();
        let r = self.radius as i64;
        let mut acc = vec![0.0; m];
        let mut out = vec![0.0; self.radius + 1];
        for k in (0..=r).rev() {
            out[k as usize] = acc.iter().copied().fold(0.0, f64::max);
            for n in [-k, k] {
                let e = self.entry(n).expect("in range");
                for (a, z) in acc.iter_mut().zip(e.samples()) {
                    *a += z.norm_sqr();
                }
                if k == 0 {
                    break;
                }
            }
        }
        out
    }
}

/// Ordered family `(x_1, …, x_L)` of grid-compatible module vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleSequence {
    elements: Vec<ModuleVector>,
}

impl ModuleSequence {
    pub fn new(elements: Vec<ModuleVector>) -> Result<Self> {
        let first = elements.first().ok_or(Error::InvalidParameter("a module sequence needs at least one element"))?;
        if elements.iter().any(|e| !e.is_compatible(first)) {
            return Err(Error::Incompatible("sequence elements differ in truncation or fiber grid"));
        }
        Ok(Self { elements })
    }

    /// The canonical weak basis `(e^{(n)})_{n=−N..N}`.
    pub fn canonical_basis(radius: usize, period: f64, fibers: usize) -> Result<Self> {
        let r = radius as i64;
        Self::new((-r..=r).map(|n| ModuleVector::basis(n, radius, period, fibers)).collect::<Result<_>>()?)
    }

    pub fn elements(&self) -> &[ModuleVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.elements[0].radius()
    }

    pub fn fibers(&self) -> usize {
        self.elements[0].fibers()
    }

    pub fn period(&self) -> f64 {
        self.elements[0].period()
    }

    /// Applies `f` to each element.
    pub fn map(&self, f: impl Fn(&ModuleVector) -> Result<ModuleVector>) -> Result<Self> {
        Self::new(self.elements.iter().map(f).collect::<Result<_>>()?)
    }

    /// The sequence permuted by `perm` (element `i` of the result is `self[perm[i]]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: perm.len() });
        }
        Self::new(perm.iter().map(|&i| self.elements[i].clone()).collect())
    }
}

/// A `D×D` complex matrix at every fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberMatrixField {
    period: f64,
    fibers: Vec<SquareMatrix>,
}

impl FiberMatrixField {
    pub fn new(period: f64, fibers: Vec<SquareMatrix>) -> Result<Self> {
        let dim = fibers.first().ok_or(Error::InvalidParameter("matrix field needs at least one fiber"))?.dim();
        if fibers.iter().any(|m| m.dim() != dim) {
            return Err(Error::Incompatible("fiber matrices differ in dimension"));
        }
        Ok(Self { period, fibers })
    }

    /// Constant field with the same matrix at each of `count` fibers.
    pub fn constant(period: f64, count: usize, matrix: SquareMatrix) -> Result<Self> {
        Self::new(period, vec![matrix; count])
    }

    pub fn dim(&self) -> usize {
        self.fibers[0].dim()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn fiber_count(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber(&self, m: usize) -> &SquareMatrix {
        &self.fibers[m]
    }

    pub fn fibers(&self) -> &[SquareMatrix] {
        &self.fibers
    }

    /// Entry `(j, k)` as a field over the fibers.
    pub fn entry_field(&self, j: usize, k: usize) -> FiberField {
        FiberField::new(self.period, self.fibers.iter().map(|m| m[(j, k)]).collect()).expect("non-empty")
    }

    /// Largest `‖S(x) − S(x)^H‖_max` over fibers.
    pub fn hermitian_deviation(&self) -> f64 {
        self.fibers.iter().map(SquareMatrix::hermitian_deviation).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Per-fiber eigen-decompositions, in fiber order.
    pub fn eigen(&self) -> Result<Vec<HermitianEigen>> {
        map_indices(self.fibers.len(), |m| HermitianEigen::new(&self.fibers[m]).map_err(|e| e.at_fiber(m)))
            .into_iter()
            .collect()
    }

    /// `(min_x λ_min(S(x)), max_x λ_max(S(x)))`.
    pub fn spectral_extremes(&self) -> Result<(f64, f64)> {
        let ext: Vec<Result<(f64, f64)>> = map_indices(self.fibers.len(), |m| {
            HermitianEigen::new(&self.fibers[m]).map(|e| (e.min(), e.max())).map_err(|e| e.at_fiber(m))
        });
        ext.into_iter().try_fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            let (a, b) = r?;
            Ok((lo.min(a), hi.max(b)))
        })
    }
}

/// Lower and upper weak frame bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    /// Weak frame iff `A > frame_tol(B)`; otherwise only Bessel.
    pub fn is_frame(&self, tol: &Tolerances) -> bool {
        self.lower > tol.frame_tol(self.upper)
    }
}

/// `⟨x, y⟩ = Σ_n x_n·y_n^*`, computed fiberwise.
pub fn inner_product(x: &ModuleVector, y: &ModuleVector) -> Result<FiberField> {
    x.check_compatible(y)?;
    let mut acc = FiberField::zero(x.period(), x.fibers())?;
    for (a, b) in x.entries.iter().zip(&y.entries) {
        acc = acc.try_add(&crate::valg::alg_mul(a, &b.conj())?)?;
    }
    Ok(acc)
}

/// `‖x‖ = ‖⟨x, x⟩‖∞^{1/2}`.
pub fn module_norm(x: &ModuleVector) -> f64 {
    let ip = inner_product(x, x).expect("self-compatible");
    libm::sqrt(sup_norm(&ip))
}

/// Gramian `Γ_{nk} = ⟨x_k, x_n⟩` of a sequence, per fiber.
pub fn gram_matrix(seq: &ModuleSequence) -> Result<FiberMatrixField> {
    let l = seq.len();
    let fibers = map_indices(seq.fibers(), |m| {
        let cols: Vec<Vec<C64>> = seq.elements.iter().map(|e| e.column(m)).collect();
        SquareMatrix::from_fn(l, |n, k| dot(&cols[k], &cols[n]))
    });
    FiberMatrixField::new(seq.period(), fibers)
}

/// Frame operator `U^*U` in the canonical basis: `T(m) = Σ_l col_l(m)·col_l(m)^H`.
///
/// The columns are summed in a canonical order, so the result is bitwise
/// independent of the order of `seq`.
pub fn frame_operator(seq: &ModuleSequence) -> Result<FiberMatrixField> {
    let d = seq.elements[0].dim();
    let fibers = map_indices(seq.fibers(), |m| {
        let mut cols: Vec<Vec<C64>> = seq.elements.iter().map(|e| e.column(m)).collect();
        cols.sort_by(|x, y| {
            x.iter()
                .zip(y)
                .map(|(p, q)| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)))
                .find(|o| o.is_ne())
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let mut t = SquareMatrix::zeros(d);
        for col in &cols {
            t.add_outer(col);
        }
        t
    });
    FiberMatrixField::new(seq.period(), fibers)
}

/// Optimal weak frame bounds `(min_m λ_min T(m), max_m λ_max T(m))`.
pub fn weak_frame_bounds(seq: &ModuleSequence) -> Result<FrameBounds> {
    let (lo, hi) = frame_operator(seq)?.spectral_extremes()?;
    Ok(FrameBounds { lower: lo.max(0.0), upper: hi.max(0.0) })
}

/// Analysis `Ux = (⟨x, x_l⟩)_l`.
pub fn analyze(x: &ModuleVector, seq: &ModuleSequence) -> Result<Vec<FiberField>> {
    seq.elements.iter().map(|e| inner_product(x, e)).collect()
}

/// Synthesis `U^*(c) = Σ_l c_l·x_l`.
pub fn synthesize(coeffs: &[FiberField], seq: &ModuleSequence) -> Result<ModuleVector> {
    if coeffs.len() != seq.len() {
        return Err(Error::LengthMismatch { expected: seq.len(), found: coeffs.len() });
    }
    let first = &seq.elements[0];
    let mut out = ModuleVector::zeros(first.radius(), first.period(), first.fibers())?;
    for (c, x) in coeffs.iter().zip(&seq.elements) {
        c.check_compatible(&x.entries[0])?;
        for (o, e) in out.entries.iter_mut().zip(&x.entries) {
            *o = o.try_add(&crate::valg::alg_mul(c, e)?)?;
        }
    }
    Ok(out)
}

/// Canonical dual `((U^*U)^{-1} x_l)_l`, inverting the frame operator fiber by fiber.
pub fn canonical_dual(seq: &ModuleSequence, tol: &Tolerances) -> Result<ModuleSequence> {
    let t = frame_operator(seq)?;
    let eig = t.eigen()?;
    let lower = eig.iter().map(HermitianEigen::min).fold(f64::INFINITY, f64::min);
    let upper = eig.iter().map(HermitianEigen::max).fold(0.0, f64::max);
    let frame_tol = tol.frame_tol(upper);
    if !(lower > frame_tol) {
        return Err(Error::NotAFrame { lower, tol: frame_tol });
    }
    let radius = seq.radius();
    let period = seq.period();
    let elements = seq
        .elements
        .iter()
        .map(|x| {
            let cols: Vec<Vec<C64>> = (0..seq.fibers()).map(|m| eig[m].solve(&x.column(m))).collect();
            ModuleVector::from_columns(radius, period, &cols)
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleSequence::new(elements)
}

/// `‖x − Σ_l ⟨x, x_l⟩·y_l‖ / ‖x‖` for a pair of sequences (`y` the dual of `x`).
pub fn reconstruction_residual(x: &ModuleVector, seq: &ModuleSequence, dual: &ModuleSequence) -> Result<f64> {
    let coeffs = analyze(x, seq)?;
    let back = synthesize(&coeffs, dual)?;
    let diff = back.try_add(&x.scale(C64::new(-1.0, 0.0)))?;
    let norm = module_norm(x);
    Ok(if norm == 0.0 { module_norm(&diff) } else { module_norm(&diff) / norm })
}

fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).fold(ZERO, |acc, (a, b)| acc + a * b.conj())
}
