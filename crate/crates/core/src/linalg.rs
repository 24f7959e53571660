//! Small dense complex matrices and a cyclic Jacobi eigensolver for the
//! Hermitian fiber matrices (dimension `2K+1`, at most a few dozen).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// `max |a_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `‖A − A^H‖_max`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].iter().zip(v).fold(ZERO, |acc, (a, x)| acc + a * x))
            .collect()
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// `self += v·v^H`.
    pub fn add_outer(&mut self, v: &[C64]) {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        for i in 0..n {
            if v[i] == ZERO {
                continue;
            }
            for j in 0..n {
                self.data[i * n + j] += v[i] * v[j].conj();
            }
        }
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Spectral decomposition `A = V·diag(λ)·V^H` of a Hermitian matrix,
/// eigenvalues ascending, eigenvectors in the columns of `V`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: SquareMatrix,
}

const MAX_SWEEPS: usize = 64;

impl HermitianEigen {
    /// Cyclic Jacobi with complex plane rotations. Each rotation first removes
    /// the phase of the pivot `a_pq`, then applies the real symmetric rotation
    /// that annihilates it.
    pub fn new(matrix: &SquareMatrix) -> Result<Self> {
        let n = matrix.dim();
        let scale = matrix.max_abs();
        let dev = matrix.hermitian_deviation();
        if dev > 1e-10 * (1.0 + scale) {
            return Err(Error::NotHermitian { fiber: 0, deviation: dev });
        }
        let mut a = matrix.clone();
        // Symmetrize exactly so rounding in the input cannot accumulate.
        for i in 0..n {
            a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
            for j in i + 1..n {
                let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
                a[(i, j)] = avg;
                a[(j, i)] = avg.conj();
            }
        }
        let mut v = SquareMatrix::identity(n);
        if n <= 1 || scale == 0.0 {
            return Ok(Self::sorted(a, v));
        }
        let frob = a.frobenius();
        let target = f64::EPSILON * frob;

        for _ in 0..MAX_SWEEPS {
            if off_diagonal(&a) <= target {
                return Ok(Self::sorted(a, v));
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let r = apq.norm();
                    if r <= f64::MIN_POSITIVE || r <= 1e-3 * target / n as f64 {
                        continue;
                    }
                    let phase = apq / r;
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let tau = (aqq - app) / (2.0 * r);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                    } else {
                        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                    };
                    let c = 1.0 / libm::sqrt(1.0 + t * t);
                    let s = t * c;
                    // U = diag(1, conj(phase)) · [[c, s], [-s, c]] on coordinates (p, q).
                    let u_pp = C64::new(c, 0.0);
                    let u_pq = C64::new(s, 0.0);
                    let u_qp = phase.conj() * (-s);
                    let u_qq = phase.conj() * c;
                    rotate(&mut a, &mut v, p, q, [u_pp, u_pq, u_qp, u_qq]);
                    a[(p, p)] = C64::new(app - t * r, 0.0);
                    a[(q, q)] = C64::new(aqq + t * r, 0.0);
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                }
            }
        }
        if off_diagonal(&a) <= 1e-12 * frob {
            return Ok(Self::sorted(a, v));
        }
        Err(Error::NoConvergence { fiber: 0 })
    }

    fn sorted(a: SquareMatrix, v: SquareMatrix) -> Self {
        let n = a.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let vectors = SquareMatrix::from_fn(n, |r, c| v[(r, order[c])]);
        Self { values, vectors }
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Spectral condition number `λ_max / λ_min` (infinite when singular).
    pub fn condition(&self) -> f64 {
        let lo = self.min();
        if lo <= 0.0 {
            f64::INFINITY
        } else {
            self.max() / lo
        }
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim()).map(|r| self.vectors[(r, k)]).collect()
    }

    /// `A^{-1} rhs` through the decomposition.
    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let n = self.vectors.dim();
        let mut out = vec![ZERO; n];
        for k in 0..n {
            let coeff = (0..n).fold(ZERO, |acc, r| acc + self.vectors[(r, k)].conj() * rhs[r]) / self.values[k];
            for (r, o) in out.iter_mut().enumerate() {
                *o += coeff * self.vectors[(r, k)];
            }
        }
        out
    }

    /// `max_k ‖A v_k − λ_k v_k‖`.
    pub fn residual(&self, matrix: &SquareMatrix) -> f64 {
        (0..self.values.len())
            .map(|k| {
                let v = self.vector(k);
                let av = matrix.mul_vec(&v);
                libm::sqrt(av.iter().zip(&v).map(|(x, y)| (x - y * self.values[k]).norm_sqr()).sum())
            })
            .fold(0.0, f64::max)
    }
}

fn off_diagonal(a: &SquareMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    libm::sqrt(s)
}

/// `A ← U^H A U`, `V ← V U` for a unitary `U` acting on coordinates `(p, q)`.
fn rotate(a: &mut SquareMatrix, v: &mut SquareMatrix, p: usize, q: usize, u: [C64; 4]) {
    let [u_pp, u_pq, u_qp, u_qq] = u;
    let n = a.dim();
    for r in 0..n {
        let (x, y) = (a[(r, p)], a[(r, q)]);
        a[(r, p)] = x * u_pp + y * u_qp;
        a[(r, q)] = x * u_pq + y * u_qq;
    }
    for c in 0..n {
        let (x, y) = (a[(p, c)], a[(q, c)]);
        a[(p, c)] = u_pp.conj() * x + u_qp.conj() * y;
        a[(q, c)] = u_pq.conj() * x + u_qq.conj() * y;
    }
    for r in 0..n {
        let (x, y) = (v[(r, p)], v[(r, q)]);
        v[(r, p)] = x * u_pp + y * u_qp;
        v[(r, q)] = x * u_pq + y * u_qq;
    }
}
