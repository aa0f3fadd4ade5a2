//! Radial measures on the order interval `0 < t < c`, their moment
//! sequences, and numerical checks of the beta-type moment integral and of
//! polar integration on the ball.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::exec::{DefaultExecutor, Executor};
use crate::jordan::TripleSpace;
use crate::numeric::{ln_gamma, sum_real, tanh_sinh_unit};
use crate::partition::{log_gamma_lambda, pochhammer, schur_from_power_sums, Partition};

/// Samples per Monte Carlo block. Each block draws from its own ChaCha
/// stream, so results do not depend on how blocks are scheduled.
pub const MC_BLOCK: usize = 1 << 16;

/// Monte Carlo estimates whose relative standard error exceeds this are
/// rejected.
pub const MC_RELATIVE_ERROR_BUDGET: f64 = 0.05;

const QUADRATURE_TOL: f64 = 1e-13;

/// Density in eigenvalue coordinates `1 > t₁ ≥ … ≥ t_λ > 0`.
pub type Density = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum RadialMeasure {
    /// The probability measure whose moments are `(d_λ/λ)_μ/(ν)_μ`.
    Nu { nu: f64 },
    /// Point mass at `c`; every moment is 1.
    Hardy,
    /// An arbitrary density, normalized to total mass 1 on integration.
    Custom { density: Density },
}

impl fmt::Debug for RadialMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialMeasure::Nu { nu } => write!(f, "Nu {{ nu: {nu} }}"),
            RadialMeasure::Hardy => write!(f, "Hardy"),
            RadialMeasure::Custom { .. } => write!(f, "Custom {{ .. }}"),
        }
    }
}

impl RadialMeasure {
    pub fn nu(nu: f64) -> Self {
        RadialMeasure::Nu { nu }
    }

    pub fn custom<F>(density: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        RadialMeasure::Custom {
            density: Arc::new(density),
        }
    }

    /// Density of the nu-measure in eigenvalue coordinates, unnormalized:
    /// `Π t_i^{d1/λ} (1−t_i)^{ν−p} Π_{i<j} |t_i − t_j|^a`.
    pub fn nu_density(space: &TripleSpace, nu: f64) -> Self {
        let lambda = space.lambda() as f64;
        let alpha = space.d1() / lambda;
        let beta = nu - space.genus() as f64;
        let a = space.a();
        RadialMeasure::custom(move |t: &[f64]| {
            let mut v = 1.0;
            for (i, &ti) in t.iter().enumerate() {
                v *= ti.powf(alpha) * (1.0 - ti).powf(beta);
                for &tj in &t[i + 1..] {
                    v *= (ti - tj).abs().powf(a);
                }
            }
            v
        })
    }

    /// `ρ_μ = ∫ N_μ dρ`.
    pub fn moment(&self, space: &TripleSpace, mu: &Partition) -> Result<f64> {
        let lambda = space.lambda();
        if mu.len() > lambda {
            return Err(Error::PartitionTooLong {
                length: mu.len(),
                bound: lambda,
            });
        }
        match self {
            RadialMeasure::Hardy => Ok(1.0),
            RadialMeasure::Nu { nu } => {
                let den = pochhammer(*nu, mu, space.a());
                if den == 0.0 {
                    return Err(Error::Pole { argument: *nu });
                }
                Ok(pochhammer(space.d_lambda() / lambda as f64, mu, space.a()) / den)
            }
            RadialMeasure::Custom { density } => custom_moment(density, lambda, mu),
        }
    }
}

/// `N_μ(k·t)` averaged over `k`: the normalized Schur polynomial
/// `s_μ(t)/s_μ(1,…,1)`.
fn spherical(mu: &Partition, t: &[f64]) -> Result<f64> {
    if mu.is_empty() {
        return Ok(1.0);
    }
    let n = mu.weight();
    let p: Vec<Complex64> = (1..=n)
        .map(|k| Complex64::new(t.iter().map(|x| x.powi(k as i32)).sum(), 0.0))
        .collect();
    let ones: Vec<Complex64> = (1..=n)
        .map(|_| Complex64::new(t.len() as f64, 0.0))
        .collect();
    Ok(schur_from_power_sums(mu, &p)?.re / schur_from_power_sums(mu, &ones)?.re)
}

fn custom_moment(density: &Density, lambda: usize, mu: &Partition) -> Result<f64> {
    let integrate = |g: &dyn Fn(&[f64]) -> f64| -> f64 {
        match lambda {
            1 => tanh_sinh_unit(|t, _| g(&[t]), QUADRATURE_TOL).0,
            // t₂ = t₁·u on the ordered triangle
            _ => {
                tanh_sinh_unit(
                    |t1, _| t1 * tanh_sinh_unit(|u, _| g(&[t1, t1 * u]), QUADRATURE_TOL).0,
                    QUADRATURE_TOL,
                )
                .0
            }
        }
    };
    if lambda > 2 {
        return Err(Error::OutOfRange {
            what: "radial quadrature",
            detail: format!("rank {lambda} > 2 is not supported numerically"),
        });
    }
    let mass = integrate(&|t| density(t));
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::Domain(format!("density has total mass {mass}")));
    }
    let failure = RefCell::new(None);
    let raw = integrate(&|t| match spherical(mu, t) {
        Ok(phi) => density(t) * phi,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    });
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(raw / mass)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationMethod {
    /// Tanh-sinh quadrature; rank 1 only.
    Quadrature,
    MonteCarlo {
        seed: u64,
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_error: f64,
    /// Standard error of a Monte Carlo estimate, quadrature error estimate
    /// otherwise.
    pub std_error: f64,
}

impl BetaCheck {
    pub fn relative_error(&self) -> f64 {
        self.abs_error / self.rhs.abs()
    }

    /// Discrepancy in units of the reported standard error.
    pub fn sigmas(&self) -> f64 {
        self.abs_error / self.std_error
    }
}

/// `Γ_λ(d_λ/λ)Γ_λ(ν−d_λ/λ)/Γ_λ(ν) · (d_λ/λ)_μ/(ν)_μ`.
pub fn beta_closed_form(space: &TripleSpace, nu: f64, mu: &Partition) -> Result<f64> {
    let lambda = space.lambda();
    let a = space.a();
    let alpha = space.d_lambda() / lambda as f64;
    let log_norm = log_gamma_lambda(alpha, lambda, a)? + log_gamma_lambda(nu - alpha, lambda, a)?
        - log_gamma_lambda(nu, lambda, a)?;
    Ok(log_norm.exp() * RadialMeasure::nu(nu).moment(space, mu)?)
}

/// Leading principal minors of the 2×2 hermitian matrix
/// `[[t11, z], [conj z, t22]]`.
fn n_mu_2x2(mu: &Partition, t11: f64, det: f64) -> f64 {
    let (m1, m2) = (mu.part(1), mu.part(2));
    t11.powi((m1 - m2) as i32) * det.powi(m2 as i32)
}

/// Per-block generator: the master seed with the block index as stream.
pub fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

/// Mean and standard error of `f` over `samples` draws, in fixed blocks.
pub fn monte_carlo<E, F>(seed: u64, samples: usize, f: F) -> (f64, f64)
where
    E: Executor,
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync + Send,
{
    let blocks = samples.div_ceil(MC_BLOCK);
    let partial: Vec<(f64, f64)> = E::map_range(blocks, |b| {
        let mut rng = block_rng(seed, b);
        let n = MC_BLOCK.min(samples - b * MC_BLOCK);
        let values: Vec<f64> = (0..n).map(|_| f(&mut rng)).collect();
        let s = sum_real(values.iter().copied());
        let s2 = sum_real(values.iter().map(|v| v * v));
        (s, s2)
    });
    let n = samples as f64;
    let mean = sum_real(partial.iter().map(|p| p.0)) / n;
    let second = sum_real(partial.iter().map(|p| p.1)) / n;
    let var = (second - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

/// Numerical value of the beta-type integral
/// `∫_{0<t<c} N(t)^{d1/λ} N(c−t)^{ν−p} N_μ(t) dt` against its closed form.
///
/// Lebesgue measure on the hermitian λ×λ block is taken in the real
/// coordinates `(t_ii, Re t_ij, Im t_ij)`.
pub fn beta_integral_check_with<E: Executor>(
    space: &TripleSpace,
    nu: f64,
    mu: &Partition,
    method: IntegrationMethod,
) -> Result<BetaCheck> {
    let lambda = space.lambda();
    let p = space.genus() as f64;
    if !(nu > p - 1.0) {
        return Err(Error::OutOfRange {
            what: "nu",
            detail: format!("the integrand needs nu > p - 1 = {}", p - 1.0),
        });
    }
    if mu.len() > lambda {
        return Err(Error::PartitionTooLong {
            length: mu.len(),
            bound: lambda,
        });
    }
    let rhs = beta_closed_form(space, nu, mu)?;
    let alpha = space.d1() / lambda as f64;
    let beta = nu - p;
    let (lhs, std_error) = match (lambda, method) {
        (1, IntegrationMethod::Quadrature) => {
            let m = mu.part(1) as f64;
            tanh_sinh_unit(|t, tc| t.powf(alpha + m) * tc.powf(beta), QUADRATURE_TOL)
        }
        (1, IntegrationMethod::MonteCarlo { seed, samples }) => {
            let m = mu.part(1) as f64;
            monte_carlo::<E, _>(seed, samples, |rng| {
                let t: f64 = rng.random();
                t.powf(alpha + m) * (1.0 - t).powf(beta)
            })
        }
        (2, IntegrationMethod::MonteCarlo { seed, samples }) => {
            // the order interval sits inside (0,1)² × (−½,½)², a box of volume 1
            monte_carlo::<E, _>(seed, samples, |rng| {
                let t11: f64 = rng.random();
                let t22: f64 = rng.random();
                let x: f64 = rng.random::<f64>() - 0.5;
                let y: f64 = rng.random::<f64>() - 0.5;
                let z2 = x * x + y * y;
                let det = t11 * t22 - z2;
                let det_c = (1.0 - t11) * (1.0 - t22) - z2;
                if det <= 0.0 || det_c <= 0.0 {
                    return 0.0;
                }
                det.powf(alpha) * det_c.powf(beta) * n_mu_2x2(mu, t11, det)
            })
        }
        _ => {
            return Err(Error::OutOfRange {
                what: "integration method",
                detail: format!("{method:?} is not available at rank {lambda}"),
            })
        }
    };
    if let IntegrationMethod::MonteCarlo { .. } = method {
        let rel = std_error / lhs.abs();
        if !(rel <= MC_RELATIVE_ERROR_BUDGET) {
            return Err(Error::Convergence {
                tail: rel,
                tolerance: MC_RELATIVE_ERROR_BUDGET,
            });
        }
    }
    Ok(BetaCheck {
        lhs,
        rhs,
        abs_error: (lhs - rhs).abs(),
        std_error,
    })
}

pub fn beta_integral_check(
    space: &TripleSpace,
    nu: f64,
    mu: &Partition,
    method: IntegrationMethod,
) -> Result<BetaCheck> {
    beta_integral_check_with::<DefaultExecutor>(space, nu, mu, method)
}

/// Polar integration of `|z₁|^{2m}` on the unit ball of `C^d` against the
/// nu-measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarCheck {
    /// Radial quadrature times the Monte Carlo sphere average.
    pub norm: f64,
    /// `ρ_m ⟨z₁^m, z₁^m⟩_S` in closed form.
    pub expected: f64,
    pub relative_error: f64,
    pub sphere_std_error: f64,
}

/// `⟨z₁^m, z₁^m⟩_S = m!(d−1)!/(m+d−1)!`.
pub fn sphere_monomial_norm(d: usize, m: usize) -> f64 {
    (ln_gamma_int(m + 1) + ln_gamma_int(d) - ln_gamma_int(m + d)).exp()
}

fn ln_gamma_int(n: usize) -> f64 {
    libm::lgamma(n as f64)
}

/// Check `⟨f, f⟩_ν = ρ_m ⟨f, f⟩_S` for `f = z₁^m` on the ball of `C^d`
/// (`d = 1` is the disc). The sphere average uses the first column of
/// seeded Haar unitaries.
pub fn reproducing_property_check_with<E: Executor>(
    d: usize,
    nu: f64,
    m: usize,
    seed: u64,
    samples: usize,
) -> Result<PolarCheck> {
    if d == 0 {
        return Err(Error::InvalidSpace("the ball needs d >= 1".into()));
    }
    if !(nu > d as f64) {
        return Err(Error::OutOfRange {
            what: "nu",
            detail: format!("the ball measure needs nu > d = {d}"),
        });
    }
    let df = d as f64;
    let log_b = ln_gamma(df)? + ln_gamma(nu - df)? - ln_gamma(nu)?;
    let (radial, _) = tanh_sinh_unit(
        |t, tc| ((df - 1.0 + m as f64) * t.ln() + (nu - df - 1.0) * tc.ln() - log_b).exp(),
        QUADRATURE_TOL,
    );
    let (sphere, sphere_std_error) = monte_carlo::<E, _>(seed, samples, |rng| {
        let mut first = 0.0;
        let mut total = 0.0;
        for k in 0..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let n2 = re * re + im * im;
            if k == 0 {
                first = n2;
            }
            total += n2;
        }
        (first / total).powi(m as i32)
    });
    let rho = (0..m)
        .map(|j| (df + j as f64) / (nu + j as f64))
        .product::<f64>();
    let expected = rho * sphere_monomial_norm(d, m);
    let norm = radial * sphere;
    Ok(PolarCheck {
        norm,
        expected,
        relative_error: (norm - expected).abs() / expected,
        sphere_std_error,
    })
}

pub fn reproducing_property_check(
    d: usize,
    nu: f64,
    m: usize,
    seed: u64,
    samples: usize,
) -> Result<PolarCheck> {
    reproducing_property_check_with::<DefaultExecutor>(d, nu, m, seed, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn moments() {
        let ball = TripleSpace::ball(4).unwrap();
        for m in [RadialMeasure::Hardy, RadialMeasure::nu(7.0)] {
            assert_eq!(m.moment(&ball, &Partition::empty()).unwrap(), 1.0);
        }
        assert_eq!(
            RadialMeasure::Hardy.moment(&ball, &part(&[5])).unwrap(),
            1.0
        );
        // (4)_3/(7)_3
        let rho = RadialMeasure::nu(7.0).moment(&ball, &part(&[3])).unwrap();
        assert!((rho - 120.0 / 504.0).abs() < 1e-15);
        assert!(RadialMeasure::nu(-2.0).moment(&ball, &part(&[3])).is_err());
        assert!(RadialMeasure::Hardy.moment(&ball, &part(&[1, 1])).is_err());
    }

    #[test]
    fn custom_density_reproduces_nu_moments() {
        for (space, nu) in [
            (TripleSpace::ball(3).unwrap(), 6.5),
            (TripleSpace::new(2, 3, 2).unwrap(), 8.0),
        ] {
            let custom = RadialMeasure::nu_density(&space, nu);
            for mu in [
                part(&[]),
                part(&[1]),
                part(&[2]),
                part(&[1, 1]),
                part(&[2, 1]),
            ] {
                if mu.len() > space.lambda() {
                    continue;
                }
                let exact = RadialMeasure::nu(nu).moment(&space, &mu).unwrap();
                let got = custom.moment(&space, &mu).unwrap();
                assert!((got - exact).abs() < 1e-9, "{mu}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn rank_one_quadrature() {
        for d in [2, 4] {
            let space = TripleSpace::ball(d).unwrap();
            let nu = d as f64 + 2.0;
            for m in [0, 1, 3] {
                let r = beta_integral_check(&space, nu, &part(&[m]), IntegrationMethod::Quadrature)
                    .unwrap();
                // Γ(m+d)Γ(ν−d)/Γ(m+ν)
                let oracle = (libm::lgamma((m + d) as f64) + libm::lgamma(nu - d as f64)
                    - libm::lgamma(m as f64 + nu))
                .exp();
                assert!(
                    (r.lhs - oracle).abs() < 1e-12 * oracle,
                    "{}",
                    r.lhs - oracle
                );
                assert!(r.abs_error < 1e-10);
            }
        }
    }

    #[test]
    fn rank_two_monte_carlo() {
        let space = TripleSpace::new(2, 3, 2).unwrap();
        let r = beta_integral_check_with::<Sequential>(
            &space,
            8.0,
            &part(&[1]),
            IntegrationMethod::MonteCarlo {
                seed: 11,
                samples: 400_000,
            },
        )
        .unwrap();
        assert!(r.sigmas() < 4.0, "{r:?}");
        assert!(
            beta_integral_check(&space, 8.0, &part(&[1]), IntegrationMethod::Quadrature).is_err()
        );
        assert!(
            beta_integral_check(&space, 3.0, &part(&[1]), IntegrationMethod::Quadrature).is_err()
        );
    }

    #[test]
    fn monte_carlo_is_schedule_independent() {
        let f = |rng: &mut ChaCha8Rng| rng.random::<f64>();
        let a = monte_carlo::<Sequential, _>(3, 200_000, f);
        let b = monte_carlo::<DefaultExecutor, _>(3, 200_000, f);
        assert_eq!(a, b);
        assert!((a.0 - 0.5).abs() < 5.0 * a.1);
    }

    #[test]
    fn polar_integration() {
        let r = reproducing_property_check(4, 7.0, 0, 1, 1000).unwrap();
        assert!(r.relative_error < 1e-10);
        let r = reproducing_property_check(2, 5.0, 3, 2, 1_000_000).unwrap();
        assert!((r.expected - 24.0 / 210.0 * 0.25).abs() < 1e-15);
        assert!(r.relative_error < 5e-3, "{r:?}");
        // disc Bergman: ‖z^m‖² = 1/(m+1)
        let r = reproducing_property_check(1, 2.0, 4, 3, 1000).unwrap();
        assert!((r.norm - 0.2).abs() < 1e-10);
        assert!(reproducing_property_check(3, 3.0, 1, 0, 10).is_err());
    }
}
