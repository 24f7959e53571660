use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{fiber_matrix, frame_correlations, snap_warning, Lattice, Warning};
use crate::hmod::FrameBounds;
use crate::linalg::HermitianEigen;
use crate::par::map_indices;
use crate::spaces::SampledWindow;
use crate::{Error, Result, Tolerances, C64};

/// Canonical dual window of the `|k| ≤ K` section.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWindow {
    pub window: SampledWindow,
    pub bounds: FrameBounds,
    /// Largest fiber condition number.
    pub condition: f64,
    pub warnings: Vec<Warning>,
}

/// Solves `S(x)·h_col(x) = g_col(x)` on every fiber, `g_col(x)_j = g(x + j/b)`,
/// and reassembles `h` on `[−K/b, (K+1)/b)`.
pub fn dual_window(g: &SampledWindow, lat: &Lattice, trunc: usize, tol: &Tolerances) -> Result<DualWindow> {
    lat.check_window(g)?;
    let q = lat.q_b() as i64;
    let k_max = trunc as i64;
    let (sec_lo, sec_hi) = (-k_max * q, (k_max + 1) * q);
    if let Some((lo, hi)) = g.nonzero_range() {
        if lo < sec_lo || hi > sec_hi {
            let required = (-lo.div_euclid(q)).max((hi - 1).div_euclid(q)).max(0) as usize;
            return Err(Error::Truncation { required, available: trunc });
        }
    }
    let corr = frame_correlations(g, g, lat, trunc)?;
    let eigen: Vec<Result<HermitianEigen>> =
        map_indices(lat.q_b(), |m| HermitianEigen::new(&fiber_matrix(&corr, lat, trunc, m)).map_err(|e| e.at_fiber(m)));
    let eigen = eigen.into_iter().collect::<Result<Vec<_>>>()?;
    let lower = eigen.iter().map(HermitianEigen::min).fold(f64::INFINITY, f64::min);
    let upper = eigen.iter().map(HermitianEigen::max).fold(0.0, f64::max);
    let frame_tol = tol.frame_tol(upper);
    if !(lower > frame_tol) {
        return Err(Error::NotAFrame { lower, tol: frame_tol });
    }

    let dim = 2 * trunc + 1;
    let mut values = vec![C64::new(0.0, 0.0); dim * lat.q_b()];
    let mut warnings: Vec<Warning> = snap_warning(lat).into_iter().collect();
    let mut condition = 0.0f64;
    for (m, e) in eigen.iter().enumerate() {
        let col: Vec<C64> = (-k_max..=k_max).map(|j| g.get(m as i64 + j * q)).collect();
        let h = e.solve(&col);
        for (s, z) in h.into_iter().enumerate() {
            values[s * lat.q_b() + m] = z;
        }
        let c = e.condition();
        if c > tol.max_condition {
            warnings.push(Warning::Conditioning { fiber: m, condition: c });
        }
        condition = condition.max(c);
    }
    Ok(DualWindow {
        window: SampledWindow::new(lat.step(), sec_lo, values)?,
        bounds: FrameBounds { lower, upper },
        condition,
        warnings,
    })
}

/// Discretized Wexler–Raz inner products `⟨h, M_{m/a} T_{k/b} g⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WexlerRazReport {
    /// `⟨h, g⟩`.
    pub origin: C64,
    /// `|⟨h, g⟩ − ab|`.
    pub origin_residual: f64,
    /// Largest `|⟨h, M_{m/a} T_{k/b} g⟩|` over `(m, k) ≠ (0, 0)`.
    pub max_off_origin: f64,
    /// Where the largest off-origin value occurs, as `(m, k)`.
    pub worst: (i64, i64),
    pub passed: bool,
}

/// Riemann sums `Δ·Σ_i h(x_i)·conj(e^{2πi m x_i/a}·g(x_i − k/b))` for `|m| ≤ m_max`, `|k| ≤ k_max`.
pub fn wexler_raz_verify(
    g: &SampledWindow,
    h: &SampledWindow,
    lat: &Lattice,
    k_max: usize,
    m_max: usize,
    tol: &Tolerances,
) -> Result<WexlerRazReport> {
    lat.check_window(g)?;
    lat.check_window(h)?;
    let p = lat.p_a() as i64;
    let q = lat.q_b() as i64;
    let phase: Vec<C64> = (0..p).map(|t| C64::from_polar(1.0, 2.0 * PI * t as f64 / p as f64)).collect();
    let pairs: Vec<(i64, i64)> =
        (-(k_max as i64)..=k_max as i64).flat_map(|k| (-(m_max as i64)..=m_max as i64).map(move |m| (m, k))).collect();
    let values = map_indices(pairs.len(), |s| {
        let (m, k) = pairs[s];
        let lo = h.start().max(g.start() + k * q);
        let hi = h.end().min(g.end() + k * q);
        let sum = (lo..hi).fold(C64::new(0.0, 0.0), |acc, i| {
            let atom = phase[(m * i).rem_euclid(p) as usize] * g.get(i - k * q);
            acc + h.get(i) * atom.conj()
        });
        sum * lat.step()
    });
    let mut report = WexlerRazReport {
        origin: C64::new(0.0, 0.0),
        origin_residual: 0.0,
        max_off_origin: 0.0,
        worst: (0, 0),
        passed: false,
    };
    for (&(m, k), v) in pairs.iter().zip(&values) {
        if (m, k) == (0, 0) {
            report.origin = *v;
            report.origin_residual = (v - lat.ab()).norm();
        } else if v.norm() > report.max_off_origin {
            report.max_off_origin = v.norm();
            report.worst = (m, k);
        }
    }
    report.passed = report.origin_residual <= tol.wexler_raz && report.max_off_origin <= tol.wexler_raz;
    Ok(report)
}
