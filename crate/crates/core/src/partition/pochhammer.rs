use num_complex::Complex64;

use super::young::Partition;
use crate::error::{Error, Result};
use crate::numeric::ln_gamma;

/// Characteristic multiplicities `(a, b)` and rank of a hermitian Jordan
/// triple. Matrix triples `C^{r×s}` have `a = 2`, `b = s − r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multiplicities {
    pub a: f64,
    pub b: f64,
    pub rank: usize,
}

impl Multiplicities {
    pub fn new(a: f64, b: f64, rank: usize) -> Self {
        assert!(a >= 0.0 && b >= 0.0, "multiplicities must be nonnegative");
        Multiplicities { a, b, rank }
    }

    /// `p = 2 + a(r−1) + b`.
    pub fn genus(&self) -> f64 {
        2.0 + self.a * (self.rank as f64 - 1.0) + self.b
    }

    /// `d = r + a r(r−1)/2 + r b`.
    pub fn dim(&self) -> f64 {
        let r = self.rank as f64;
        r + self.a * r * (r - 1.0) / 2.0 + r * self.b
    }

    pub fn peirce2_dim(&self, lambda: usize) -> f64 {
        let l = lambda as f64;
        l * (1.0 + self.a / 2.0 * (l - 1.0))
    }

    pub fn peirce1_dim(&self, lambda: usize) -> f64 {
        let l = lambda as f64;
        l * (self.a * (self.rank as f64 - l) + self.b)
    }
}

/// Classical rising factorial `(x)_m`.
pub fn rising(x: f64, m: usize) -> f64 {
    (0..m).map(|i| x + i as f64).product()
}

/// Multivariate Pochhammer symbol `(ν)_μ = Π_j (ν − (a/2)(j−1))_{m_j}`.
pub fn pochhammer(nu: f64, mu: &Partition, a: f64) -> f64 {
    mu.parts()
        .iter()
        .enumerate()
        .map(|(j, &m)| rising(nu - a / 2.0 * j as f64, m))
        .product()
}

/// [`pochhammer`] at a complex argument.
pub fn pochhammer_complex(nu: Complex64, mu: &Partition, a: f64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &m) in mu.parts().iter().enumerate() {
        let base = nu - a / 2.0 * j as f64;
        for i in 0..m {
            acc *= base + i as f64;
        }
    }
    acc
}

/// The prefactor convention `log C(λ, a) = (a/2)·λ(λ−1)/2·log π`.
pub fn log_gamma_lambda_constant(lambda: usize, a: f64) -> f64 {
    let l = lambda as f64;
    a / 2.0 * l * (l - 1.0) / 2.0 * std::f64::consts::PI.ln()
}

/// `log Γ_λ(ν)` for the Koecher-Gindikin Gamma function.
pub fn log_gamma_lambda(nu: f64, lambda: usize, a: f64) -> Result<f64> {
    log_gamma_lambda_at(nu, &Partition::empty(), lambda, a)
}

/// `log Γ_λ(ν + μ) = log C + Σ_j log Γ(ν + m_j − (a/2)(j−1))`, so that
/// `Γ_λ(ν+μ)/Γ_λ(ν) = (ν)_μ`.
pub fn log_gamma_lambda_at(nu: f64, mu: &Partition, lambda: usize, a: f64) -> Result<f64> {
    if mu.len() > lambda {
        return Err(Error::PartitionTooLong {
            length: mu.len(),
            bound: lambda,
        });
    }
    let mut acc = log_gamma_lambda_constant(lambda, a);
    for j in 1..=lambda {
        acc += ln_gamma(nu + mu.part(j) as f64 - a / 2.0 * (j as f64 - 1.0))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::young::enumerate_partitions;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.7, &Partition::empty(), 2.0), 1.0);
        assert_eq!(pochhammer(3.0, &p(&[2]), 2.0), 12.0);
        assert_eq!(pochhammer(3.0, &p(&[2]), 7.0), 12.0);
        // (ν)_{(1,1)} = ν(ν − a/2)
        assert_eq!(pochhammer(5.0, &p(&[1, 1]), 2.0), 20.0);
        assert_eq!(pochhammer(1.0, &p(&[1, 1]), 2.0), 0.0);
        let z = pochhammer_complex(Complex64::new(4.5, 0.0), &p(&[3, 2, 1]), 2.0);
        assert!((z.re - pochhammer(4.5, &p(&[3, 2, 1]), 2.0)).abs() < 1e-9);
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn matrix_pochhammer_is_content_product() {
        for mu in enumerate_partitions(3, 7) {
            let content: f64 = mu.cells().map(|(i, j)| 4.0 + j as f64 - i as f64).product();
            assert!((pochhammer(4.0, &mu, 2.0) - content).abs() < 1e-9);
        }
    }

    #[test]
    fn gamma_lambda_examples() {
        assert!((log_gamma_lambda(4.5, 1, 2.0).unwrap() - ln_gamma(4.5).unwrap()).abs() < 1e-14);
        let g23 = log_gamma_lambda(3.0, 2, 2.0).unwrap().exp();
        assert!((g23 - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        let nu = 5.3;
        let ratio = (log_gamma_lambda_at(nu, &p(&[1, 1]), 2, 2.0).unwrap()
            - log_gamma_lambda(nu, 2, 2.0).unwrap())
        .exp();
        assert!((ratio - nu * (nu - 1.0)).abs() < 1e-10);
        assert!(matches!(
            log_gamma_lambda(0.5, 2, 2.0),
            Err(Error::Pole { .. })
        ));
        assert!(log_gamma_lambda_at(3.0, &p(&[1, 1, 1]), 2, 2.0).is_err());
    }

    #[test]
    fn structure_constants_matrix_case() {
        let m = Multiplicities::new(2.0, 1.0, 2);
        assert_eq!(m.genus(), 5.0);
        assert_eq!(m.dim(), 6.0);
        assert_eq!(m.peirce2_dim(1), 1.0);
        assert_eq!(m.peirce1_dim(1), 3.0);
        // spin factor: rank 2, a = n−2, b = 0
        let spin = Multiplicities::new(3.0, 0.0, 2);
        assert_eq!(spin.dim(), 5.0);
        assert_eq!(spin.genus(), 5.0);
    }
}
