//! One-sided Jacobi SVD for small complex matrices.
//!
//! The QR-iteration SVD in nalgebra 0.35 occasionally returns complex
//! factors that reconstruct a rank-deficient wide matrix only to ~1e-5,
//! which breaks the Moore-Penrose identities. Jacobi rotations converge to
//! full relative accuracy on the sizes used here.

use num_complex::Complex64;

use super::element::CMatrix;

const MAX_SWEEPS: usize = 60;

/// Thin SVD `a = u · diag(σ) · v_t` with `σ` in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v_t: CMatrix,
}

impl Svd {
    /// Moore-Penrose inverse, dropping singular values `≤ cutoff`.
    pub fn pseudo_inverse(&self, cutoff: f64) -> CMatrix {
        let (m, n) = (self.u.nrows(), self.v_t.ncols());
        let mut out = CMatrix::zeros(n, m);
        for (j, &s) in self.singular_values.iter().enumerate() {
            if s > cutoff {
                out += self.v_t.row(j).adjoint()
                    * self.u.column(j).adjoint()
                    * Complex64::new(1.0 / s, 0.0);
            }
        }
        out
    }
}

/// Extend `k` orthonormal columns to a unitary `n×n` matrix.
pub(crate) fn complete_unitary(cols: &CMatrix) -> CMatrix {
    let (n, k) = cols.shape();
    let mut aug = CMatrix::zeros(n, k + n);
    aug.columns_mut(0, k).copy_from(cols);
    aug.columns_mut(k, n).copy_from(&CMatrix::identity(n, n));
    let q = aug.qr().q();
    let mut out = CMatrix::zeros(n, n);
    out.columns_mut(0, k).copy_from(cols);
    out.columns_mut(k, n - k).copy_from(&q.columns(k, n - k));
    out
}

/// Jacobi SVD of a matrix with at least as many rows as columns.
fn tall_svd(a: &CMatrix) -> Svd {
    let (m, n) = a.shape();
    let mut a = a.clone();
    let mut v = CMatrix::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // rotate a_p and e^{-iφ} a_q, whose inner product is real
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.nrows() {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase;
                        mat[(i, p)] = xp * c - xq * s;
                        mat[(i, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let top = norms.iter().copied().fold(0.0, f64::max);
    let nonzero = order
        .iter()
        .filter(|&&j| norms[j] > f64::EPSILON * f64::EPSILON * top && norms[j] > 0.0)
        .count();
    let mut u = CMatrix::zeros(m, nonzero);
    let mut vs = CMatrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        if k < nonzero {
            u.set_column(k, &(a.column(j) / Complex64::new(norms[j], 0.0)));
        }
        vs.set_column(k, &v.column(j));
    }
    let u = complete_unitary(&u).columns(0, n).into_owned();
    Svd {
        u,
        singular_values: order.iter().map(|&j| norms[j]).collect(),
        v_t: vs.adjoint(),
    }
}

pub fn svd(a: &CMatrix) -> Svd {
    if a.nrows() >= a.ncols() {
        tall_svd(a)
    } else {
        let t = tall_svd(&a.adjoint());
        Svd {
            u: t.v_t.adjoint(),
            singular_values: t.singular_values,
            v_t: t.u.adjoint(),
        }
    }
}
