//! Schur test for matrices whose entries live in `L∞[0, P]`, and the
//! Gram-matrix Bessel bound.
//!
//! For a matrix `(m_jk)` with column budget `B_c` and row budget `B_r`, the
//! induced module map is bounded by `√(B_c·B_r)`. Three summation modes exist
//! for infinite matrices; at finite size all of them give finite numbers, so
//! the mode is chosen from [`TailEvidence`] about the entries that were cut off.

use alloc::vec;
use alloc::vec::Vec;

use crate::hmod::FiberMatrixField;
use crate::par::map_indices;
use crate::{Error, Result};

/// Which summation mode the budgets were computed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurVariant {
    /// `Σ_j ‖m_jk‖∞ ≤ B_c`: sups taken entry by entry.
    Absolute,
    /// `‖Σ_j |m_jk|‖∞ ≤ B_c` with the series converging in norm.
    NormConvergent,
    /// `‖Σ_j |m_jk|‖∞ ≤ B_c` with only bounded partial sums.
    StrongConvergent,
}

/// What is known about the entries beyond the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailEvidence {
    /// Nothing: only bounded partial sums can be claimed.
    #[default]
    Unknown,
    /// The row and column tails vanish in sup-norm.
    NormVanishing,
    /// The entry sups are summable (e.g. compactly supported windows).
    Summable,
}

impl TailEvidence {
    pub fn variant(self) -> SchurVariant {
        match self {
            TailEvidence::Unknown => SchurVariant::StrongConvergent,
            TailEvidence::NormVanishing => SchurVariant::NormConvergent,
            TailEvidence::Summable => SchurVariant::Absolute,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurReport {
    pub col_budget: f64,
    pub row_budget: f64,
    pub bound: f64,
    pub variant: SchurVariant,
    pub satisfied: bool,
    pub absolute: bool,
    pub norm_convergent: bool,
    pub strong_convergent: bool,
}

/// Schur test with no tail information (strong-convergence variant).
pub fn schur_conditions(field: &FiberMatrixField) -> SchurReport {
    schur_conditions_with(field, TailEvidence::Unknown)
}

pub fn schur_conditions_with(field: &FiberMatrixField, evidence: TailEvidence) -> SchurReport {
    let variant = evidence.variant();
    let (col_budget, row_budget) = match variant {
        SchurVariant::Absolute => absolute_budgets(field),
        _ => pointwise_budgets(field),
    };
    let satisfied = col_budget.is_finite() && row_budget.is_finite();
    SchurReport {
        col_budget,
        row_budget,
        bound: libm::sqrt(col_budget * row_budget),
        variant,
        satisfied,
        absolute: satisfied && variant == SchurVariant::Absolute,
        norm_convergent: satisfied && variant != SchurVariant::StrongConvergent,
        strong_convergent: satisfied,
    }
}

// max_k Σ_j sup_m |m_jk(m)| and the row analogue.
fn absolute_budgets(field: &FiberMatrixField) -> (f64, f64) {
    let d = field.dim();
    let mut sups = vec![0.0f64; d * d];
    for mat in field.fibers() {
        for (s, z) in sups.iter_mut().zip(mat.as_slice()) {
            *s = s.max(z.norm());
        }
    }
    let col = (0..d).map(|k| (0..d).map(|j| sups[j * d + k]).sum::<f64>()).fold(0.0, f64::max);
    let row = (0..d).map(|j| sups[j * d..(j + 1) * d].iter().sum::<f64>()).fold(0.0, f64::max);
    (col, row)
}

// max_k sup_m Σ_j |m_jk(m)| and the row analogue.
fn pointwise_budgets(field: &FiberMatrixField) -> (f64, f64) {
    let d = field.dim();
    let per_fiber: Vec<(f64, f64)> = map_indices(field.fiber_count(), |m| {
        let mat = field.fiber(m);
        let col = (0..d).map(|k| (0..d).map(|j| mat[(j, k)].norm()).sum::<f64>()).fold(0.0, f64::max);
        let row = (0..d).map(|j| (0..d).map(|k| mat[(j, k)].norm()).sum::<f64>()).fold(0.0, f64::max);
        (col, row)
    });
    per_fiber.into_iter().fold((0.0, 0.0), |(c, r), (a, b)| (c.max(a), r.max(b)))
}

/// Bessel bound `max_m λ_max(G(m))` of the sequence whose Gramian is `gram`.
pub fn bessel_from_gram(gram: &FiberMatrixField) -> Result<f64> {
    for (m, mat) in gram.fibers().iter().enumerate() {
        let dev = mat.hermitian_deviation();
        if dev > 1e-10 * (1.0 + mat.max_abs()) {
            return Err(Error::NotHermitian { fiber: m, deviation: dev });
        }
    }
    let (_, hi) = gram.spectral_extremes()?;
    Ok(hi.max(0.0))
}
