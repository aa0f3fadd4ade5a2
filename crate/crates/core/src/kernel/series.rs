//! Truncated partition series for the kernel, the truncated (submodule)
//! kernel and the Q-kernel.

use num_complex::Complex64;

use super::coefficients::{kernel_coefficient_for, q_factor, CoefficientSequence};
use crate::error::{Error, Result};
use crate::exec::{DefaultExecutor, Executor};
use crate::jordan::{rank, TripleElement, TripleSpace};
use crate::numeric::CompensatedSum;
use crate::partition::{enumerate_partitions, FockExpansion, Partition};

/// Relative singular-value threshold used to check `rank(z) ≤ λ`.
pub const KEPLER_RANK_TOL: f64 = 1e-8;

/// Kernel data: space, coefficients, truncation weight `M` and vanishing
/// order `k` (`k = 0` is the full kernel).
///
/// The weight bound applies to the partitions actually paired with `E`,
/// i.e. to `μ + κ` for the truncated kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub space: TripleSpace,
    pub coeffs: CoefficientSequence,
    pub max_weight: usize,
    pub order: usize,
    /// Relative tail bound; `None` disables the convergence check.
    pub tail_tolerance: Option<f64>,
}

impl KernelSpec {
    pub fn new(
        space: TripleSpace,
        coeffs: CoefficientSequence,
        max_weight: usize,
        order: usize,
    ) -> Result<Self> {
        coeffs.validate(&space)?;
        if order > 0 && max_weight < order * space.lambda() {
            return Err(Error::OutOfRange {
                what: "truncation weight",
                detail: format!(
                    "M = {max_weight} is below kλ = {} so the truncated series is empty",
                    order * space.lambda()
                ),
            });
        }
        Ok(KernelSpec {
            space,
            coeffs,
            max_weight,
            order,
            tail_tolerance: None,
        })
    }

    pub fn with_tail_tolerance(mut self, tol: f64) -> Self {
        self.tail_tolerance = Some(tol);
        self
    }

    pub fn with_order(self, order: usize) -> Result<Self> {
        let mut spec = Self::new(self.space, self.coeffs, self.max_weight, order)?;
        spec.tail_tolerance = self.tail_tolerance;
        Ok(spec)
    }
}

/// A series value with its tail estimate (sum of the moduli of the terms in
/// the last weight shell, relative to the value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub tail: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SeriesKind {
    Kernel,
    QKernel,
}

/// Precomputed terms `(partition paired with E, coefficient)` of one of the
/// kernel series.
#[derive(Debug, Clone)]
pub struct KernelSeries {
    spec: KernelSpec,
    kind: SeriesKind,
    terms: Vec<(Partition, f64)>,
    top_weight: usize,
}

impl KernelSeries {
    /// `Σ coeff(μ+κ) E^{μ+κ}` over `|μ+κ| ≤ M`.
    pub fn kernel(spec: &KernelSpec) -> Result<Self> {
        let lambda = spec.space.lambda();
        let k = spec.order;
        let base_weight = spec.max_weight.saturating_sub(k * lambda);
        let mut terms = Vec::new();
        for mu in enumerate_partitions(lambda, base_weight) {
            let nu = if k == 0 { mu } else { mu.shifted(k, lambda)? };
            let c = kernel_coefficient_for(&spec.space, &spec.coeffs, &nu)?;
            terms.push((nu, c));
        }
        Ok(KernelSeries {
            spec: spec.clone(),
            kind: SeriesKind::Kernel,
            top_weight: spec.max_weight,
            terms,
        })
    }

    /// `Σ coeff(μ+𝟙)·(d2/λ)_μ/(d2/λ)_{μ+𝟙}·E^μ` over `|μ+𝟙| ≤ M`.
    pub fn q_kernel(spec: &KernelSpec) -> Result<Self> {
        if spec.order != 1 {
            return Err(Error::OutOfRange {
                what: "vanishing order",
                detail: format!("the Q-kernel needs k = 1, got {}", spec.order),
            });
        }
        let lambda = spec.space.lambda();
        let base_weight = spec.max_weight - lambda;
        let mut terms = Vec::new();
        for mu in enumerate_partitions(lambda, base_weight) {
            let shifted = mu.shifted(1, lambda)?;
            let c = kernel_coefficient_for(&spec.space, &spec.coeffs, &shifted)?
                * q_factor(&spec.space, &mu)?;
            terms.push((mu, c));
        }
        Ok(KernelSeries {
            spec: spec.clone(),
            kind: SeriesKind::QKernel,
            top_weight: base_weight,
            terms,
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// `(partition, coefficient)` pairs in graded order.
    pub fn terms(&self) -> &[(Partition, f64)] {
        &self.terms
    }

    pub fn is_q_kernel(&self) -> bool {
        self.kind == SeriesKind::QKernel
    }

    fn check_point(&self, z: &TripleElement) -> Result<()> {
        let space = &self.spec.space;
        z.expect_shape(space.shape())?;
        let sv = z.singular_values();
        let top = sv.first().copied().unwrap_or(0.0);
        if top >= 1.0 {
            return Err(Error::Domain(format!("spectral norm {top} is not below 1")));
        }
        if rank(z, KEPLER_RANK_TOL) > space.lambda() {
            return Err(Error::NotRankLambda {
                residual: sv[space.lambda()],
            });
        }
        Ok(())
    }

    /// Evaluate at `(z, w)` without the tail-tolerance check.
    pub fn eval_raw(&self, z: &TripleElement, w: &TripleElement) -> Result<KernelValue> {
        self.check_point(z)?;
        self.check_point(w)?;
        let fe = FockExpansion::new(z, w, self.top_weight)?;
        let mut sum = CompensatedSum::new();
        let mut shell = 0.0;
        for (mu, c) in &self.terms {
            let term = fe.component(mu)? * *c;
            sum.add(term);
            if mu.weight() == self.top_weight {
                shell += term.norm();
            }
        }
        let value = sum.value();
        Ok(KernelValue {
            value,
            tail: shell / value.norm().max(f64::MIN_POSITIVE),
            terms: self.terms.len(),
        })
    }

    /// Evaluate at `(z, w)`, failing if the tail exceeds the spec tolerance.
    pub fn eval(&self, z: &TripleElement, w: &TripleElement) -> Result<KernelValue> {
        let v = self.eval_raw(z, w)?;
        if let Some(tol) = self.spec.tail_tolerance {
            if v.tail > tol {
                return Err(Error::Convergence {
                    tail: v.tail,
                    tolerance: tol,
                });
            }
        }
        Ok(v)
    }

    /// Evaluate many pairs with the given executor; results keep input order.
    pub fn eval_batch_with<E: Executor>(
        &self,
        pairs: &[(TripleElement, TripleElement)],
    ) -> Vec<Result<KernelValue>> {
        E::map(pairs, |(z, w)| self.eval(z, w))
    }

    pub fn eval_batch(&self, pairs: &[(TripleElement, TripleElement)]) -> Vec<Result<KernelValue>> {
        self.eval_batch_with::<DefaultExecutor>(pairs)
    }
}

/// Coefficient of `E^μ` in the kernel of `spec`.
pub fn kernel_coefficient(spec: &KernelSpec, mu: &Partition) -> Result<f64> {
    kernel_coefficient_for(&spec.space, &spec.coeffs, mu)
}

/// The kernel of `spec` (full kernel for `k = 0`, the order-`k` submodule
/// kernel otherwise).
pub fn kernel_eval(spec: &KernelSpec, z: &TripleElement, w: &TripleElement) -> Result<KernelValue> {
    KernelSeries::kernel(spec)?.eval(z, w)
}

/// The kernel of the submodule vanishing to order `k ≥ 1` on `V_{λ−1}`.
pub fn truncated_kernel_eval(
    spec: &KernelSpec,
    z: &TripleElement,
    w: &TripleElement,
) -> Result<KernelValue> {
    if spec.order == 0 {
        return Err(Error::OutOfRange {
            what: "vanishing order",
            detail: "the truncated kernel needs k >= 1".into(),
        });
    }
    kernel_eval(spec, z, w)
}

/// The Q-kernel cross-section.
pub fn q_kernel_eval(
    spec: &KernelSpec,
    z: &TripleElement,
    w: &TripleElement,
) -> Result<KernelValue> {
    KernelSeries::q_kernel(spec)?.eval(z, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{
        delta, inner_product, random_element, random_rank_element, seeded_rng, with_spectral_norm,
    };
    use crate::partition::pochhammer;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn w_zero_gives_one() {
        let space = TripleSpace::new(2, 3, 1).unwrap();
        let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(6.0), 10, 0).unwrap();
        let mut rng = seeded_rng(1);
        let z = with_spectral_norm(&random_rank_element(2, 3, 1, &mut rng), 0.5);
        let v = kernel_eval(&spec, &z, &TripleElement::zeros(2, 3)).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn faraut_koranyi_full_rank() {
        let space = TripleSpace::new(2, 3, 2).unwrap();
        let mut rng = seeded_rng(2);
        let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(6.0), 16, 0).unwrap();
        let series = KernelSeries::kernel(&spec).unwrap();
        for _ in 0..10 {
            let z = with_spectral_norm(&random_element(2, 3, &mut rng), 0.35);
            let w = with_spectral_norm(&random_element(2, 3, &mut rng), 0.35);
            let k = series.eval(&z, &w).unwrap().value;
            let oracle = delta(&z, &w).unwrap().powf(-6.0);
            assert!((k - oracle).norm() < 1e-6);
        }
    }

    #[test]
    fn ball_closed_forms() {
        let space = TripleSpace::ball(4).unwrap();
        let mut rng = seeded_rng(3);
        let nu = 7.0;
        let full = KernelSpec::new(space, CoefficientSequence::nu_rule(nu), 60, 0).unwrap();
        let trunc = full.clone().with_order(1).unwrap();
        let q = KernelSeries::q_kernel(&trunc).unwrap();
        for _ in 0..5 {
            let z = with_spectral_norm(&random_element(1, 4, &mut rng), 0.5);
            let w = with_spectral_norm(&random_element(1, 4, &mut rng), 0.5);
            let x = inner_product(&z, &w).unwrap();
            let closed = (Complex64::new(1.0, 0.0) - x).powf(-nu);
            assert!(close(
                kernel_eval(&full, &z, &w).unwrap().value,
                closed,
                1e-10
            ));
            let t = truncated_kernel_eval(&trunc, &z, &w).unwrap().value;
            assert!(close(t, closed - 1.0, 1e-10));
            // Q(x) = ((1−x)^{−ν} − 1)/x on the ball
            assert!(close(
                q.eval(&z, &w).unwrap().value,
                (closed - 1.0) / x,
                1e-10
            ));
        }
    }

    #[test]
    fn q_kernel_at_origin() {
        let space = TripleSpace::new(2, 3, 1).unwrap();
        let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(6.0), 8, 1).unwrap();
        let o = TripleElement::zeros(2, 3);
        let v = q_kernel_eval(&spec, &o, &o).unwrap().value;
        let one = Partition::rectangle(1, 1);
        let expected = kernel_coefficient(&spec, &one).unwrap() / pochhammer(space.d2(), &one, 2.0);
        assert!((v.re - expected).abs() < 1e-14 && v.im == 0.0);
        assert!(KernelSeries::q_kernel(&spec.clone().with_order(2).unwrap()).is_err());
    }

    #[test]
    fn truncated_terms_are_kernel_terms_with_full_length() {
        let space = TripleSpace::new(3, 4, 2).unwrap();
        let spec = KernelSpec::new(space, CoefficientSequence::hardy(), 9, 0).unwrap();
        let full = KernelSeries::kernel(&spec).unwrap();
        let trunc = KernelSeries::kernel(&spec.clone().with_order(1).unwrap()).unwrap();
        let expected: Vec<_> = full
            .terms()
            .iter()
            .filter(|(mu, _)| mu.part(2) >= 1)
            .cloned()
            .collect();
        assert_eq!(trunc.terms(), &expected[..]);
    }

    #[test]
    fn domain_checks() {
        let space = TripleSpace::new(2, 3, 1).unwrap();
        let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(6.0), 6, 0).unwrap();
        let mut rng = seeded_rng(4);
        let full_rank = with_spectral_norm(&random_element(2, 3, &mut rng), 0.5);
        assert!(matches!(
            kernel_eval(&spec, &full_rank, &full_rank),
            Err(Error::NotRankLambda { .. })
        ));
        let big = with_spectral_norm(&random_rank_element(2, 3, 1, &mut rng), 1.2);
        assert!(matches!(
            kernel_eval(&spec, &big, &big),
            Err(Error::Domain(_))
        ));
        assert!(KernelSpec::new(space, CoefficientSequence::nu_rule(6.0), 0, 1).is_err());
        assert!(truncated_kernel_eval(&spec, &big, &big).is_err());
    }

    #[test]
    fn tail_tolerance_enforced() {
        let space = TripleSpace::ball(3).unwrap();
        let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(5.0), 4, 0)
            .unwrap()
            .with_tail_tolerance(1e-10);
        let mut rng = seeded_rng(5);
        let z = with_spectral_norm(&random_element(1, 3, &mut rng), 0.9);
        assert!(matches!(
            kernel_eval(&spec, &z, &z),
            Err(Error::Convergence { .. })
        ));
    }
}
