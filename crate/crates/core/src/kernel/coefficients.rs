use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::jordan::TripleSpace;
use crate::partition::{pochhammer, Partition};

/// A positive coefficient sequence `ρ_μ` with `ρ_∅ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientSequence {
    /// Explicit values; partitions not in the table are an error.
    Table(HashMap<Partition, f64>),
    /// `ρ_μ = (d_λ/λ)_μ / (ν)_μ`, the moments of the measure `ρ^ν`.
    NuRule { nu: f64 },
    /// `ρ_μ = 1` for every `μ`.
    Hardy,
}

impl CoefficientSequence {
    pub fn table(values: HashMap<Partition, f64>) -> Result<Self> {
        match values.get(&Partition::empty()) {
            Some(1.0) => {}
            Some(&v) => {
                return Err(Error::InvalidCoefficients(format!(
                    "ρ_∅ must be 1, got {v}"
                )));
            }
            None => {
                return Err(Error::InvalidCoefficients(
                    "table has no entry for ∅".into(),
                ))
            }
        }
        if let Some((mu, v)) = values.iter().find(|(_, &v)| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidCoefficients(format!(
                "ρ_{mu} = {v} is not positive"
            )));
        }
        Ok(CoefficientSequence::Table(values))
    }

    pub fn nu_rule(nu: f64) -> Self {
        CoefficientSequence::NuRule { nu }
    }

    pub fn hardy() -> Self {
        CoefficientSequence::Hardy
    }

    /// Check that the sequence is admissible on `space`.
    pub fn validate(&self, space: &TripleSpace) -> Result<()> {
        if let CoefficientSequence::NuRule { nu } = *self {
            let bound = space.genus() as f64 - 1.0;
            if !(nu > bound) || !nu.is_finite() {
                return Err(Error::InvalidCoefficients(format!(
                    "ν = {nu} must exceed p − 1 = {bound} on C^{{{}x{}}} with λ = {}",
                    space.r(),
                    space.s(),
                    space.lambda()
                )));
            }
        }
        Ok(())
    }

    /// `ρ_μ` on `space`.
    pub fn rho(&self, space: &TripleSpace, mu: &Partition) -> Result<f64> {
        if mu.len() > space.lambda() {
            return Err(Error::PartitionTooLong {
                length: mu.len(),
                bound: space.lambda(),
            });
        }
        match self {
            CoefficientSequence::Hardy => Ok(1.0),
            CoefficientSequence::NuRule { nu } => {
                let dl = space.d_lambda() / space.lambda() as f64;
                Ok(pochhammer(dl, mu, space.a()) / pochhammer(*nu, mu, space.a()))
            }
            CoefficientSequence::Table(t) => t
                .get(mu)
                .copied()
                .ok_or_else(|| Error::InvalidCoefficients(format!("no table entry for {mu}"))),
        }
    }
}

/// The coefficient of `E^μ` in the reproducing kernel of `M_ρ`:
/// `(d/r)_μ/ρ_μ · (ra/2)_μ/(λa/2)_μ`.
pub fn kernel_coefficient_for(
    space: &TripleSpace,
    coeffs: &CoefficientSequence,
    mu: &Partition,
) -> Result<f64> {
    let a = space.a();
    let (r, lambda) = (space.r() as f64, space.lambda() as f64);
    let d_over_r = space.dim() as f64 / r;
    let rho = coeffs.rho(space, mu)?;
    Ok(
        pochhammer(d_over_r, mu, a) / rho * pochhammer(r * a / 2.0, mu, a)
            / pochhammer(lambda * a / 2.0, mu, a),
    )
}

/// Extra factor `(d2/λ)_μ / (d2/λ)_{μ+𝟙}` of the Q-kernel.
pub fn q_factor(space: &TripleSpace, mu: &Partition) -> Result<f64> {
    let a = space.a();
    let base = space.d2() / space.lambda() as f64;
    let shifted = mu.shifted(1, space.lambda())?;
    Ok(pochhammer(base, mu, a) / pochhammer(base, &shifted, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn nu_rule_full_rank_collapses() {
        let space = TripleSpace::new(2, 3, 2).unwrap();
        let c = CoefficientSequence::nu_rule(6.0);
        c.validate(&space).unwrap();
        for mu in enumerate_partitions(2, 8) {
            let k = kernel_coefficient_for(&space, &c, &mu).unwrap();
            let expected = pochhammer(6.0, &mu, 2.0);
            assert!((k - expected).abs() < 1e-10 * expected, "{mu}");
        }
        let ball = TripleSpace::ball(4).unwrap();
        let k =
            kernel_coefficient_for(&ball, &CoefficientSequence::nu_rule(7.5), &p(&[3])).unwrap();
        assert!((k - 7.5 * 8.5 * 9.5).abs() < 1e-10);
        assert_eq!(
            kernel_coefficient_for(&space, &c, &Partition::empty()).unwrap(),
            1.0
        );
    }

    #[test]
    fn validation() {
        let space = TripleSpace::new(2, 3, 1).unwrap();
        assert!(CoefficientSequence::nu_rule(4.0).validate(&space).is_err());
        assert!(CoefficientSequence::nu_rule(4.01).validate(&space).is_ok());
        let mut t = HashMap::new();
        t.insert(p(&[1]), 0.5);
        assert!(CoefficientSequence::table(t.clone()).is_err());
        t.insert(Partition::empty(), 1.0);
        let seq = CoefficientSequence::table(t.clone()).unwrap();
        assert_eq!(seq.rho(&space, &p(&[1])).unwrap(), 0.5);
        assert!(seq.rho(&space, &p(&[2])).is_err());
        t.insert(p(&[2]), -1.0);
        assert!(CoefficientSequence::table(t).is_err());
        assert!(CoefficientSequence::hardy()
            .rho(&space, &p(&[1, 1]))
            .is_err());
    }

    #[test]
    fn nu_rule_moments_ratio() {
        let space = TripleSpace::new(2, 3, 1).unwrap();
        let c = CoefficientSequence::nu_rule(6.0);
        // d_λ/λ = 4
        for m in 0..6 {
            let r0 = c.rho(&space, &Partition::rectangle(m, 1)).unwrap();
            let r1 = c.rho(&space, &Partition::rectangle(m + 1, 1)).unwrap();
            assert!((r1 / r0 - (4.0 + m as f64) / (6.0 + m as f64)).abs() < 1e-14);
        }
    }
}
