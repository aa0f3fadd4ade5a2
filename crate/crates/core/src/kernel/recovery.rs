//! Constructive rigidity: recover `ρ_{μ+𝟙}` from diagonal values of the
//! Q-kernel.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::coefficients::{kernel_coefficient_for, q_factor, CoefficientSequence};
use crate::error::{Error, Result};
use crate::exec::{DefaultExecutor, Executor};
use crate::jordan::{TripleElement, TripleSpace};
use crate::partition::{enumerate_partitions, FockExpansion, Partition};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryOptions {
    /// Number of 1-D nodes per unknown weight, i.e. `K = ⌈oversample·(M+1)⌉`.
    pub oversample: f64,
    pub t_min: f64,
    pub t_max: f64,
    /// Scaled condition numbers above this are rejected.
    pub max_condition: f64,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions {
            oversample: 2.0,
            t_min: 0.2,
            t_max: 0.9,
            max_condition: 1e12,
        }
    }
}

/// Recovered `ρ_{μ+𝟙}` together with the fitted Q-coefficients and
/// diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredTable {
    /// `(μ+𝟙, ρ_{μ+𝟙})` in graded order of `μ`.
    pub entries: Vec<(Partition, f64)>,
    /// `(μ, q_μ)`, the fitted coefficients of `E^μ` in `Q`.
    pub q_coefficients: Vec<(Partition, f64)>,
    /// Condition number of the column-equilibrated collocation matrix.
    pub condition: f64,
    /// Relative least-squares residual.
    pub residual: f64,
    pub samples: usize,
}

impl RecoveredTable {
    pub fn get(&self, shifted: &Partition) -> Option<f64> {
        self.entries
            .iter()
            .find(|(p, _)| p == shifted)
            .map(|(_, v)| *v)
    }

    /// The table divided by its entry at `𝟙`, i.e. `ρ_{μ+𝟙}/ρ_𝟙`.
    pub fn ratios(&self) -> RecoveredTable {
        let base = self.entries.first().map(|(_, v)| *v).unwrap_or(1.0);
        RecoveredTable {
            entries: self
                .entries
                .iter()
                .map(|(p, v)| (p.clone(), v / base))
                .collect(),
            ..self.clone()
        }
    }

    /// Largest absolute entry difference; the tables must index the same
    /// partitions.
    pub fn max_discrepancy(&self, other: &RecoveredTable) -> Result<f64> {
        if self.entries.len() != other.entries.len()
            || self
                .entries
                .iter()
                .zip(&other.entries)
                .any(|(a, b)| a.0 != b.0)
        {
            return Err(Error::Inconsistent(
                "tables index different partitions".into(),
            ));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.1 - b.1).abs())
            .fold(0.0, f64::max))
    }
}

/// `x = Σ_i t_i e_ii`, built on the frame of standard rank-1 tripotents.
pub fn diagonal_point(space: &TripleSpace, t: &[f64]) -> Result<TripleElement> {
    if t.len() > space.r() {
        return Err(Error::OutOfRange {
            what: "diagonal point",
            detail: format!("{} coordinates for rank {}", t.len(), space.r()),
        });
    }
    let mut x = TripleElement::zeros(space.r(), space.s()).into_matrix();
    for (i, &ti) in t.iter().enumerate() {
        x[(i, i)] = Complex64::new(ti, 0.0);
    }
    Ok(TripleElement::new(x))
}

/// Multisets of size `lambda` from `k` nodes whose squares are Chebyshev
/// points of `[t_min², t_max²]`, each sorted decreasingly.
pub fn sample_grid(lambda: usize, k: usize, t_min: f64, t_max: f64) -> Vec<Vec<f64>> {
    let (lo, hi) = (t_min * t_min, t_max * t_max);
    let nodes: Vec<f64> = (0..k)
        .map(|j| {
            let c = (std::f64::consts::PI * (2 * j + 1) as f64 / (2 * k) as f64).cos();
            (0.5 * (lo + hi) + 0.5 * (hi - lo) * c).sqrt()
        })
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(lambda);
    fn go(
        nodes: &[f64],
        start: usize,
        left: usize,
        current: &mut Vec<f64>,
        out: &mut Vec<Vec<f64>>,
    ) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for j in start..nodes.len() {
            current.push(nodes[j]);
            go(nodes, j, left - 1, current, out);
            current.pop();
        }
    }
    go(&nodes, 0, lambda, &mut current, &mut out);
    out
}

/// Fit the coefficients `q_μ` (`|μ| ≤ M`, length ≤ λ) of a diagonal
/// Q-evaluator and invert them to `ρ_{μ+𝟙}`.
pub fn recover_coefficients_with<E, F>(
    space: &TripleSpace,
    evaluator: F,
    max_weight: usize,
    options: &RecoveryOptions,
) -> Result<RecoveredTable>
where
    E: Executor,
    F: Fn(&TripleElement) -> Result<f64> + Sync + Send,
{
    let lambda = space.lambda();
    let basis = enumerate_partitions(lambda, max_weight);
    let k = (options.oversample * (max_weight + 1) as f64).ceil() as usize;
    let grid = sample_grid(lambda, k.max(max_weight + 1), options.t_min, options.t_max);

    let rows: Vec<Result<(Vec<f64>, f64)>> = E::map(&grid, |t| {
        let x = diagonal_point(space, t)?;
        let fe = FockExpansion::new(&x, &x, max_weight)?;
        let row = basis
            .iter()
            .map(|mu| fe.component(mu).map(|e| e.re))
            .collect::<Result<Vec<f64>>>()?;
        Ok((row, evaluator(&x)?))
    });
    let n = basis.len();
    let mut a = DMatrix::<f64>::zeros(grid.len(), n);
    let mut b = DVector::<f64>::zeros(grid.len());
    for (i, row) in rows.into_iter().enumerate() {
        let (r, v) = row?;
        for (j, e) in r.into_iter().enumerate() {
            a[(i, j)] = e;
        }
        b[i] = v;
    }

    let scales: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut scaled = a.clone();
    for (j, s) in scales.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = scaled.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = smax / smin;
    if !(condition <= options.max_condition) {
        return Err(Error::IllConditioned { condition });
    }
    let y = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::Inconsistent(format!("least squares failed: {e}")))?;
    let q: Vec<f64> = y.iter().zip(&scales).map(|(v, s)| v / s).collect();
    let fitted = &a * DVector::from_column_slice(&q);
    let residual = (&fitted - &b).norm() / b.norm().max(f64::MIN_POSITIVE);

    let hardy = CoefficientSequence::hardy();
    let mut entries = Vec::with_capacity(n);
    for (mu, &qm) in basis.iter().zip(&q) {
        if !(qm > 0.0) {
            return Err(Error::Inconsistent(format!(
                "fitted Q-coefficient for {mu} is {qm}, which gives no positive ρ"
            )));
        }
        let shifted = mu.shifted(1, lambda)?;
        let numerator = kernel_coefficient_for(space, &hardy, &shifted)? * q_factor(space, mu)?;
        entries.push((shifted, numerator / qm));
    }
    Ok(RecoveredTable {
        entries,
        q_coefficients: basis.into_iter().zip(q).collect(),
        condition,
        residual,
        samples: grid.len(),
    })
}

pub fn recover_coefficients<F>(
    space: &TripleSpace,
    evaluator: F,
    max_weight: usize,
) -> Result<RecoveredTable>
where
    F: Fn(&TripleElement) -> Result<f64> + Sync + Send,
{
    recover_coefficients_with::<DefaultExecutor, F>(
        space,
        evaluator,
        max_weight,
        &RecoveryOptions::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::kernel::{KernelSeries, KernelSpec};

    fn generator(space: TripleSpace, coeffs: CoefficientSequence, m: usize) -> KernelSeries {
        let spec = KernelSpec::new(space, coeffs, m + space.lambda(), 1).unwrap();
        KernelSeries::q_kernel(&spec).unwrap()
    }

    #[test]
    fn nu_rule_round_trip() {
        let space = TripleSpace::new(2, 3, 1).unwrap();
        let seq = CoefficientSequence::nu_rule(6.0);
        let q = generator(space, seq.clone(), 6);
        let table = recover_coefficients(&space, |x| Ok(q.eval(x, x)?.value.re), 6).unwrap();
        assert_eq!(table.entries.len(), 7);
        for (p, v) in &table.entries {
            let exact = seq.rho(&space, p).unwrap();
            assert!((v - exact).abs() < 1e-8, "{p}: {v} vs {exact}");
        }
        assert!(table.condition.is_finite());
    }

    #[test]
    fn rank_two_round_trip() {
        let space = TripleSpace::new(3, 4, 2).unwrap();
        let seq = CoefficientSequence::nu_rule(8.5);
        let q = generator(space, seq.clone(), 4);
        let table = recover_coefficients_with::<Sequential, _>(
            &space,
            |x| Ok(q.eval(x, x)?.value.re),
            4,
            &RecoveryOptions::default(),
        )
        .unwrap();
        for (p, v) in &table.entries {
            let exact = seq.rho(&space, p).unwrap();
            assert!(
                (v - exact).abs() < 1e-8 * exact.max(1.0),
                "{p}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn inconsistent_and_ill_conditioned() {
        let space = TripleSpace::new(2, 3, 1).unwrap();
        assert!(matches!(
            recover_coefficients(&space, |_| Ok(-1.0), 3),
            Err(Error::Inconsistent(_))
        ));
        let tight = RecoveryOptions {
            max_condition: 1.0,
            ..Default::default()
        };
        assert!(matches!(
            recover_coefficients_with::<Sequential, _>(&space, |_| Ok(1.0), 3, &tight),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn grid_shape() {
        assert_eq!(sample_grid(1, 5, 0.2, 0.9).len(), 5);
        assert_eq!(sample_grid(2, 5, 0.2, 0.9).len(), 15);
        for t in sample_grid(2, 4, 0.2, 0.9) {
            assert!(t[0] >= t[1] && t[1] >= 0.2 && t[0] <= 0.9);
        }
    }
}
