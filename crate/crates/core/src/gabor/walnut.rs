use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::Lattice;
use crate::par::map_indices;
use crate::spaces::SampledWindow;
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Result of the Walnut representation.
#[derive(Debug, Clone, PartialEq)]
pub struct WalnutOutput {
    pub output: SampledWindow,
    /// `tail[K'−1] = ‖Σ_{K'≤|k|≤K} (1/b)·G_k·T_{k/b} f‖∞` for `K' = 1..=K`.
    pub tail: Vec<f64>,
}

/// `(1/b)·Σ_{|k|≤K} G_k^{h,g}·T_{k/b} f` evaluated on the grid.
pub fn walnut_apply(
    g: &SampledWindow,
    h: &SampledWindow,
    lat: &Lattice,
    f: &SampledWindow,
    trunc: usize,
) -> Result<WalnutOutput> {
    lat.check_window(g)?;
    lat.check_window(h)?;
    lat.check_window(f)?;
    let Some((f_lo, f_hi)) = f.nonzero_range() else {
        return Ok(WalnutOutput { output: SampledWindow::zero(lat.step())?, tail: vec![0.0; trunc] });
    };
    let q = lat.q_b() as i64;
    let p = lat.p_a() as i64;
    let k_max = trunc as i64;
    let out_lo = f_lo - k_max * q;
    let len = (f_hi - f_lo + 2 * k_max * q) as usize;
    let inv_b = lat.modulation_period();
    let mut acc = vec![ZERO; len];
    let mut tail = vec![0.0; trunc];

    let add_term = |acc: &mut [C64], k: i64| {
        let gk = h.periodized_product(g, k * q, lat.p_a());
        if gk.iter().all(|z| *z == ZERO) {
            return;
        }
        for i in f_lo + k * q..f_hi + k * q {
            let v = f.get(i - k * q);
            if v != ZERO {
                acc[(i - out_lo) as usize] += gk[i.rem_euclid(p) as usize] * v * inv_b;
            }
        }
    };
    for k in (1..=k_max).rev() {
        add_term(&mut acc, k);
        add_term(&mut acc, -k);
        tail[(k - 1) as usize] = acc.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    }
    add_term(&mut acc, 0);
    Ok(WalnutOutput { output: SampledWindow::new(lat.step(), out_lo, acc)?.trimmed(), tail })
}

fn phase_table(period: usize) -> Vec<C64> {
    (0..period).map(|t| C64::from_polar(1.0, 2.0 * PI * t as f64 / period as f64)).collect()
}

/// Modulation indices covering one full period of the discrete modulations.
fn full_modulation_range(lat: &Lattice) -> (i64, i64) {
    let q = lat.q_b() as i64;
    (-(q / 2), q - 1 - q / 2)
}

/// Translation indices `n` for which `T_{na}g` meets `[lo, hi)`, widened by 2.
fn covering_translations(g: &SampledWindow, lat: &Lattice, lo: i64, hi: i64) -> Option<(i64, i64)> {
    let (g_lo, g_hi) = g.nonzero_range()?;
    let p = lat.p_a() as i64;
    let n0 = (lo - g_hi + 1).div_euclid(p) + 1;
    let n1 = (hi - 1 - g_lo).div_euclid(p);
    Some((n0 - 2, n1 + 2))
}

/// Brute-force lattice sum `Σ_{m,n} ⟨f, M_{mb}T_{na}g⟩·M_{mb}T_{na}h` with
/// Riemann-sum inner products.
///
/// Discrete modulations are `q_b`-periodic in `m`, so the default modulation
/// range is one full period; the default translation range covers every `n`
/// with `T_{na}g` meeting the support of `f`, plus a margin of 2.
pub fn direct_frame_apply(
    g: &SampledWindow,
    h: &SampledWindow,
    lat: &Lattice,
    f: &SampledWindow,
    modulations: Option<(i64, i64)>,
    translations: Option<(i64, i64)>,
) -> Result<SampledWindow> {
    lat.check_window(g)?;
    lat.check_window(h)?;
    lat.check_window(f)?;
    let (Some((f_lo, f_hi)), Some(_)) = (f.nonzero_range(), h.nonzero_range()) else {
        return SampledWindow::zero(lat.step());
    };
    let Some(default_n) = covering_translations(g, lat, f_lo, f_hi) else {
        return SampledWindow::zero(lat.step());
    };
    let (m0, m1) = modulations.unwrap_or_else(|| full_modulation_range(lat));
    let (n0, n1) = translations.unwrap_or(default_n);
    if m0 > m1 || n0 > n1 {
        return Err(Error::InvalidParameter("empty lattice range"));
    }
    let q = lat.q_b() as i64;
    let p = lat.p_a() as i64;
    let phase = phase_table(lat.q_b());
    let (h_lo, h_hi) = (h.start(), h.end());
    let out_lo = h_lo + n0 * p;
    let out_len = (h_hi - h_lo + (n1 - n0) * p) as usize;

    // One contribution per translation, summed afterwards in a fixed order.
    let parts: Vec<Vec<C64>> = map_indices((n1 - n0 + 1) as usize, |s| {
        let n = n0 + s as i64;
        let mut part = vec![ZERO; (h_hi - h_lo) as usize];
        let lo = f_lo.max(g.start() + n * p);
        let hi = f_hi.min(g.end() + n * p);
        if lo >= hi {
            return part;
        }
        for m in m0..=m1 {
            let coeff = (lo..hi).fold(ZERO, |acc, i| {
                let atom = phase[(m * i).rem_euclid(q) as usize] * g.get(i - n * p);
                acc + f.get(i) * atom.conj()
            }) * lat.step();
            if coeff == ZERO {
                continue;
            }
            for (t, slot) in part.iter_mut().enumerate() {
                let i = h_lo + t as i64 + n * p;
                *slot += coeff * phase[(m * i).rem_euclid(q) as usize] * h.get(i - n * p);
            }
        }
        part
    });
    let mut out = vec![ZERO; out_len];
    for (s, part) in parts.iter().enumerate() {
        let off = (s as i64 * p) as usize;
        for (o, v) in out[off..off + part.len()].iter_mut().zip(part) {
            *o += v;
        }
    }
    Ok(SampledWindow::new(lat.step(), out_lo, out)?.trimmed())
}

/// Dense discretized analysis operator restricted to samples `[lo, hi)`.
///
/// Row `(n, m)` holds `√Δ·conj(e^{2πi m b x_i}·g(x_i − na))`, so that `C^H C`
/// is the frame operator on `ℓ²` with the Riemann-sum weight divided out.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub data: Vec<C64>,
    /// `(n, m)` of each row.
    pub labels: Vec<(i64, i64)>,
}

pub fn analysis_matrix(
    g: &SampledWindow,
    lat: &Lattice,
    lo: i64,
    hi: i64,
    modulations: Option<(i64, i64)>,
    translations: Option<(i64, i64)>,
) -> Result<AnalysisMatrix> {
    lat.check_window(g)?;
    if hi <= lo {
        return Err(Error::InvalidParameter("empty sample range"));
    }
    let (m0, m1) = modulations.unwrap_or_else(|| full_modulation_range(lat));
    let (n0, n1) = match translations.or_else(|| covering_translations(g, lat, lo, hi)) {
        Some(r) => r,
        None => return Err(Error::InvalidParameter("window is identically zero")),
    };
    let q = lat.q_b() as i64;
    let p = lat.p_a() as i64;
    let phase = phase_table(lat.q_b());
    let w = libm::sqrt(lat.step());
    let cols = (hi - lo) as usize;
    let labels: Vec<(i64, i64)> = (n0..=n1).flat_map(|n| (m0..=m1).map(move |m| (n, m))).collect();
    let mut data = Vec::with_capacity(labels.len() * cols);
    for &(n, m) in &labels {
        for i in lo..hi {
            data.push((phase[(m * i).rem_euclid(q) as usize] * g.get(i - n * p)).conj() * w);
        }
    }
    Ok(AnalysisMatrix { rows: labels.len(), cols, data, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::WindowSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_f(rng: &mut ChaCha8Rng, step: f64, lo: i64, hi: i64) -> SampledWindow {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(a + 1..=hi);
        let values = (a..b).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        SampledWindow::new(step, a, values).unwrap()
    }

    #[test]
    fn parseval_rect_is_identity() {
        let lat = Lattice::with_fibers(1.0, 1.0, 32).unwrap();
        let g = lat.sample(&WindowSpec::rect(0.0, 1.0).unwrap()).unwrap();
        let f = lat.sample(&WindowSpec::hat(1.0, 1.0).unwrap()).unwrap();
        let w = walnut_apply(&g, &g, &lat, &f, 3).unwrap();
        assert_eq!(w.output.max_abs_diff(&f).unwrap(), 0.0);
        assert!(w.tail.iter().all(|t| *t == 0.0));
        let d = direct_frame_apply(&g, &g, &lat, &f, None, None).unwrap();
        assert!(d.max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn tight_rect_doubles() {
        let lat = Lattice::with_fibers(0.5, 1.0, 32).unwrap();
        let g = lat.sample(&WindowSpec::rect(0.0, 1.0).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let f = random_f(&mut rng, lat.step(), -40, 40);
        let w = walnut_apply(&g, &g, &lat, &f, 2).unwrap();
        assert!(w.output.max_abs_diff(&f.scaled(C64::new(2.0, 0.0))).unwrap() < 1e-14);
    }

    #[test]
    fn walnut_matches_direct_for_gaussian() {
        let lat = Lattice::with_fibers(1.0, 0.5, 64).unwrap();
        let g = lat.sample(&WindowSpec::gaussian(0.0, 1.0).unwrap()).unwrap();
        let h = lat.sample(&WindowSpec::hat(0.25, 1.5).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..3 {
            let f = random_f(&mut rng, lat.step(), -100, 100);
            let w = walnut_apply(&g, &h, &lat, &f, 4).unwrap();
            let d = direct_frame_apply(&g, &h, &lat, &f, None, None).unwrap();
            assert!(w.output.max_abs_diff(&d).unwrap() <= 1e-12 * d.sup_norm());
        }
    }

    #[test]
    fn direct_is_linear() {
        let lat = Lattice::with_fibers(1.0, 0.5, 32).unwrap();
        let g = lat.sample(&WindowSpec::gaussian(0.0, 1.0).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let f1 = random_f(&mut rng, lat.step(), -50, 50);
        let f2 = random_f(&mut rng, lat.step(), -50, 50);
        let range = Some((-12, 12));
        let sum = direct_frame_apply(&g, &g, &lat, &f1.try_add(&f2).unwrap(), None, range).unwrap();
        let parts = direct_frame_apply(&g, &g, &lat, &f1, None, range)
            .unwrap()
            .try_add(&direct_frame_apply(&g, &g, &lat, &f2, None, range).unwrap())
            .unwrap();
        assert!(sum.max_abs_diff(&parts).unwrap() <= 1e-12);
    }

    #[test]
    fn analysis_matrix_gram_is_frame_operator() {
        let lat = Lattice::with_fibers(0.5, 1.0, 4).unwrap();
        let g = lat.sample(&WindowSpec::rect(0.0, 1.0).unwrap()).unwrap();
        let c = analysis_matrix(&g, &lat, -4, 8, None, None).unwrap();
        for i in 0..c.cols {
            for j in 0..c.cols {
                let v = (0..c.rows).fold(ZERO, |a, r| a + c.data[r * c.cols + i].conj() * c.data[r * c.cols + j]);
                let want = if i == j { 2.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-13, "{i} {j} {v}");
            }
        }
    }

    #[test]
    fn compact_window_tail_vanishes() {
        let lat = Lattice::with_fibers(1.0, 0.5, 32).unwrap();
        let g = lat.sample(&WindowSpec::gaussian(0.0, 1.0).unwrap()).unwrap();
        let f = SampledWindow::new(lat.step(), 0, vec![C64::new(1.0, 0.0); lat.q_b()]).unwrap();
        let w = walnut_apply(&g, &g, &lat, &f, 8).unwrap();
        assert!(w.tail[0] > 1e-6);
        assert!(w.tail[3..].iter().all(|t| *t == 0.0), "{:?}", w.tail);
    }
}
