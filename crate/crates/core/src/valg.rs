//! The commutative von Neumann algebra `L∞[0, P]`, modelled as complex samples
//! at the uniform fibers `x_m = m·P/M`, `m = 0..M`.
//!
//! Every "almost everywhere" statement about the continuum algebra becomes a
//! statement about every grid fiber. The essential supremum becomes a maximum.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, Mul, Neg, Sub};

use crate::{Error, Result, C64};

/// A sampled element of `L∞[0, period]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberField {
    period: f64,
    samples: Vec<C64>,
}

impl FiberField {
    pub fn new(period: f64, samples: Vec<C64>) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidParameter("fiber period must be positive"));
        }
        if samples.is_empty() {
            return Err(Error::InvalidParameter("fiber grid needs at least one sample"));
        }
        Ok(Self { period, samples })
    }

    pub fn constant(period: f64, fibers: usize, value: C64) -> Result<Self> {
        Self::new(period, vec![value; fibers])
    }

    /// The unit `e` of the algebra.
    pub fn unit(period: f64, fibers: usize) -> Result<Self> {
        Self::constant(period, fibers, C64::new(1.0, 0.0))
    }

    pub fn zero(period: f64, fibers: usize) -> Result<Self> {
        Self::constant(period, fibers, C64::new(0.0, 0.0))
    }

    /// Samples `f(x_m)` of a function on the fiber grid.
    pub fn from_fn(period: f64, fibers: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        let step = period / fibers as f64;
        Self::new(period, (0..fibers).map(|m| f(m as f64 * step)).collect())
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn fibers(&self) -> usize {
        self.samples.len()
    }

    pub fn step(&self) -> f64 {
        self.period / self.samples.len() as f64
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<C64> {
        self.samples
    }

    pub fn is_compatible(&self, other: &Self) -> bool {
        self.samples.len() == other.samples.len() && libm::fabs(self.period - other.period) <= 1e-12 * self.period
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::Incompatible("fiber fields differ in period or grid resolution"))
        }
    }

    /// Same samples viewed on `[0, period)`: the dilation isomorphism
    /// `L∞[0, a] → L∞[0, c]`, `f ↦ f((a/c)·)`.
    pub fn with_period(&self, period: f64) -> Result<Self> {
        Self::new(period, self.samples.clone())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    /// Pointwise modulus `|f|`.
    pub fn modulus(&self) -> Self {
        self.map(|z| C64::new(z.norm(), 0.0))
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { period: self.period, samples: self.samples.iter().map(|&z| f(z)).collect() }
    }

    pub(crate) fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            period: self.period,
            samples: self.samples.iter().zip(&other.samples).map(|(&x, &y)| f(x, y)).collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    /// Largest imaginary part in modulus.
    pub fn max_imag(&self) -> f64 {
        self.samples.iter().fold(0.0, |acc, z| acc.max(libm::fabs(z.im)))
    }

    /// Realness check at tolerance `imag_rel·(1 + ‖f‖∞)`.
    pub fn is_real(&self, imag_rel: f64) -> bool {
        self.max_imag() <= imag_rel * (1.0 + sup_norm(self))
    }
}

impl Index<usize> for FiberField {
    type Output = C64;
    fn index(&self, m: usize) -> &C64 {
        &self.samples[m]
    }
}

impl Neg for &FiberField {
    type Output = FiberField;
    fn neg(self) -> FiberField {
        self.map(|z| -z)
    }
}

// Operator impls panic on incompatible grids; the `try_*` methods and
// `alg_mul` report the error instead.
impl Add for &FiberField {
    type Output = FiberField;
    fn add(self, rhs: &FiberField) -> FiberField {
        self.try_add(rhs).expect("incompatible fiber fields")
    }
}

impl Sub for &FiberField {
    type Output = FiberField;
    fn sub(self, rhs: &FiberField) -> FiberField {
        self.try_sub(rhs).expect("incompatible fiber fields")
    }
}

impl Mul for &FiberField {
    type Output = FiberField;
    fn mul(self, rhs: &FiberField) -> FiberField {
        alg_mul(self, rhs).expect("incompatible fiber fields")
    }
}

/// Pointwise product, the multiplication of the algebra.
pub fn alg_mul(f: &FiberField, g: &FiberField) -> Result<FiberField> {
    f.zip_with(g, |x, y| x * y)
}

/// `max_m |f[m]|`, the grid surrogate of the essential supremum norm.
pub fn sup_norm(f: &FiberField) -> f64 {
    f.samples.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `(min_m Re f[m], max_m Re f[m])` of a real field.
pub fn ess_bounds(f: &FiberField) -> Result<(f64, f64)> {
    ess_bounds_with(f, crate::Tolerances::default().imag_rel)
}

pub fn ess_bounds_with(f: &FiberField, imag_rel: f64) -> Result<(f64, f64)> {
    if !f.is_real(imag_rel) {
        return Err(Error::RealExpected { max_imag: f.max_imag() });
    }
    Ok(f.samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z.re), hi.max(z.re))))
}
