//! Triple product, Bergman operators and determinants of `C^{r×s}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::element::{CMatrix, TripleElement};
use super::svd::svd;
use crate::error::{Error, Result};

/// Default relative threshold for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-10;

fn identity(n: usize) -> CMatrix {
    DMatrix::identity(n, n)
}

/// The trace inner product `(z|w) = tr(z w*)`.
pub fn inner_product(z: &TripleElement, w: &TripleElement) -> Result<Complex64> {
    z.check_shape(w)?;
    Ok(z.matrix()
        .iter()
        .zip(w.matrix().iter())
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// `{u;v;w} = u v* w + w v* u`.
pub fn triple_product(
    u: &TripleElement,
    v: &TripleElement,
    w: &TripleElement,
) -> Result<TripleElement> {
    u.check_shape(v)?;
    u.check_shape(w)?;
    let vs = v.adjoint();
    let (u, w) = (u.matrix(), w.matrix());
    Ok(TripleElement::new(u * &vs * w + w * &vs * u))
}

/// `D(z,w) v = {z;w;v}`.
pub fn d_operator(
    z: &TripleElement,
    w: &TripleElement,
    v: &TripleElement,
) -> Result<TripleElement> {
    triple_product(z, w, v)
}

/// `Q_z w = {z;w;z}/2 = z w* z`.
pub fn quadratic_rep(z: &TripleElement, w: &TripleElement) -> Result<TripleElement> {
    z.check_shape(w)?;
    Ok(TripleElement::new(z.matrix() * w.adjoint() * z.matrix()))
}

/// `B_{z,w} v = (I_r − z w*) v (I_s − w* z)`.
pub fn bergman_apply(
    z: &TripleElement,
    w: &TripleElement,
    v: &TripleElement,
) -> Result<TripleElement> {
    z.check_shape(w)?;
    z.check_shape(v)?;
    let (r, s) = z.shape();
    let ws = w.adjoint();
    let left = identity(r) - z.matrix() * &ws;
    let right = identity(s) - &ws * z.matrix();
    Ok(TripleElement::new(left * v.matrix() * right))
}

/// `B_{z,w} v` through the operator identity `I − D(z,w) + Q_z Q_w`,
/// using only the triple product.
pub fn bergman_apply_expanded(
    z: &TripleElement,
    w: &TripleElement,
    v: &TripleElement,
) -> Result<TripleElement> {
    let dv = d_operator(z, w, v)?;
    let qq = quadratic_rep(z, &quadratic_rep(w, v)?)?;
    Ok(&(v - &dv) + &qq)
}

/// `B_{z,w} v` through `v − {z;w;v} + ¼ {z; {w;v;w}; z}`.
pub fn bergman_apply_triple(
    z: &TripleElement,
    w: &TripleElement,
    v: &TripleElement,
) -> Result<TripleElement> {
    let first = triple_product(z, w, v)?;
    let inner = triple_product(w, v, w)?;
    let second = triple_product(z, &inner, z)?;
    Ok(&(v - &first) + &(&second * 0.25))
}

/// Jordan triple determinant `Δ(z,w) = det(I_r − z w*)`.
pub fn delta(z: &TripleElement, w: &TripleElement) -> Result<Complex64> {
    z.check_shape(w)?;
    let r = z.shape().0;
    Ok((identity(r) - z.matrix() * w.adjoint()).determinant())
}

/// Determinant of the operator `B_{z,w}` on `V`, from its Kronecker
/// structure: `det(I_r − z w*)^s · det(I_s − w* z)^r`.
pub fn bergman_det(z: &TripleElement, w: &TripleElement) -> Result<Complex64> {
    z.check_shape(w)?;
    let (r, s) = z.shape();
    let ws = w.adjoint();
    let left = (identity(r) - z.matrix() * &ws).determinant();
    let right = (identity(s) - &ws * z.matrix()).determinant();
    Ok(left.powi(s as i32) * right.powi(r as i32))
}

/// Checks `‖Q_c c − c‖ ≤ tol` (Frobenius norm).
pub fn is_tripotent(c: &TripleElement, tol: f64) -> bool {
    let q = TripleElement::new(c.matrix() * c.adjoint() * c.matrix());
    (&q - c).norm() <= tol
}

/// Numerical rank: singular values above `tol · σ_max`.
pub fn rank(z: &TripleElement, tol: f64) -> usize {
    let sv = z.singular_values();
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&x| x > tol * top).count(),
        _ => 0,
    }
}

/// Jordan pseudo-inverse `z̃ = (z⁺)*`, the conjugate transpose of the
/// Moore-Penrose inverse.
pub fn pseudo_inverse(z: &TripleElement) -> Result<TripleElement> {
    let top = z.spectral_norm();
    if !(top > 0.0) {
        return Err(Error::ZeroElement);
    }
    let pinv = svd(z.matrix()).pseudo_inverse(RANK_TOL * top);
    Ok(TripleElement::new(pinv.adjoint()))
}

/// Residuals of the three defining identities of the pseudo-inverse:
/// `Q_z z̃ = z`, `Q_{z̃} z = z̃` and `Q_z Q_{z̃} = Q_{z̃} Q_z` (the last one
/// tested on `probe`).
pub fn pseudo_inverse_residuals(
    z: &TripleElement,
    zt: &TripleElement,
    probe: &TripleElement,
) -> Result<[f64; 3]> {
    let r1 = (&quadratic_rep(z, zt)? - z).norm();
    let r2 = (&quadratic_rep(zt, z)? - zt).norm();
    let a = quadratic_rep(z, &quadratic_rep(zt, probe)?)?;
    let b = quadratic_rep(zt, &quadratic_rep(z, probe)?)?;
    Ok([r1, r2, (&a - &b).norm()])
}
