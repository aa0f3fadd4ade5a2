use nalgebra::DMatrix;
use num_complex::Complex64;

use super::young::Partition;
use crate::error::{Error, Result};

/// Complete homogeneous symmetric functions `h_0..=h_n` from power sums
/// `p_1..p_n` by Newton's identities `k h_k = Σ_{i=1}^k p_i h_{k−i}`.
pub fn complete_from_power_sums(p: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    if p.len() < n {
        return Err(Error::OutOfRange {
            what: "power sums",
            detail: format!("need {n}, got {}", p.len()),
        });
    }
    let mut h = Vec::with_capacity(n + 1);
    h.push(Complex64::new(1.0, 0.0));
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=k {
            acc += p[i - 1] * h[k - i];
        }
        h.push(acc / k as f64);
    }
    Ok(h)
}

/// Jacobi-Trudi determinant `det(h_{μ_i − i + j})` given `h_0..`.
pub fn jacobi_trudi(mu: &Partition, h: &[Complex64]) -> Result<Complex64> {
    let l = mu.len();
    if l == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if h.len() <= mu.weight() {
        return Err(Error::OutOfRange {
            what: "complete symmetric functions",
            detail: format!(
                "need h up to degree {}, got {}",
                mu.weight(),
                h.len().saturating_sub(1)
            ),
        });
    }
    // indices never exceed μ₁ + ℓ − 1 ≤ |μ|
    let entry = |k: isize| -> Complex64 {
        if k < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            h[k as usize]
        }
    };
    if l == 1 {
        return Ok(entry(mu.part(1) as isize));
    }
    let m = DMatrix::from_fn(l, l, |i, j| {
        entry(mu.part(i + 1) as isize - i as isize + j as isize)
    });
    Ok(m.determinant())
}

/// Schur polynomial `s_μ` evaluated from the power sums `p_1..p_{|μ|}` of
/// its arguments.
pub fn schur_from_power_sums(mu: &Partition, p: &[Complex64]) -> Result<Complex64> {
    let n = mu.weight();
    let h = complete_from_power_sums(p, n)?;
    jacobi_trudi(mu, &h)
}
