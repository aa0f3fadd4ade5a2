//! Finite-difference curvature `∂∂̄ log h` of a hermitian metric in complex
//! chart coordinates, with Richardson extrapolation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::bundle::SingularModule;
use super::chart::ChartPoint;
use crate::error::{Error, Result};
use crate::exec::{DefaultExecutor, Executor};

/// Default step pair for the Richardson extrapolation.
pub const DEFAULT_STEPS: (f64, f64) = (1e-3, 5e-4);

/// `∂_i∂̄_j log h` at a base point.
///
/// The curvature of the metric is `−matrix`; storing the positive form
/// keeps closed-form oracles such as `(1+|τ|²)^{−2}` sign-free.
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub base: Vec<Complex64>,
    pub matrix: DMatrix<Complex64>,
    pub steps: (f64, f64),
    /// Largest entrywise change between the fine-step estimate and the
    /// extrapolated value.
    pub error_estimate: f64,
    /// Largest `|m_ij − conj(m_ji)|` before symmetrization.
    pub hermitian_defect: f64,
    pub log_h: f64,
}

impl CurvatureReport {
    /// `κ = −∂∂̄ log h`.
    pub fn curvature(&self) -> DMatrix<Complex64> {
        -self.matrix.clone()
    }
}

/// Offsets of a real stencil point in units of the step.
type Stencil = Vec<(usize, i8)>;

fn stencils(m: usize) -> Vec<Stencil> {
    let mut out = vec![Vec::new()];
    for a in 0..m {
        out.push(vec![(a, 1)]);
        out.push(vec![(a, -1)]);
    }
    for a in 0..m {
        for b in a + 1..m {
            for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.push(vec![(a, sa), (b, sb)]);
            }
        }
    }
    out
}

/// Real Hessian of `f` in the `2n` coordinates `(Re z₁, Im z₁, …)`.
fn real_hessian<E, F>(f: &F, base: &[Complex64], h: f64) -> Result<(DMatrix<f64>, f64)>
where
    E: Executor,
    F: Fn(&[Complex64]) -> Result<f64> + Sync + Send,
{
    let m = 2 * base.len();
    let pts = stencils(m);
    let values: Vec<Result<f64>> = E::map(&pts, |st| {
        let mut x = base.to_vec();
        for &(a, sgn) in st {
            let d = h * sgn as f64;
            if a % 2 == 0 {
                x[a / 2].re += d;
            } else {
                x[a / 2].im += d;
            }
        }
        let v = f(&x)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("metric value {v} is not positive")));
        }
        Ok(v.ln())
    });
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let f0 = values[0];
    let mut hess = DMatrix::<f64>::zeros(m, m);
    for a in 0..m {
        hess[(a, a)] = (values[1 + 2 * a] - 2.0 * f0 + values[2 + 2 * a]) / (h * h);
    }
    let mut idx = 1 + 2 * m;
    for a in 0..m {
        for b in a + 1..m {
            let (pp, pm, mp, mm) = (
                values[idx],
                values[idx + 1],
                values[idx + 2],
                values[idx + 3],
            );
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            hess[(a, b)] = v;
            hess[(b, a)] = v;
            idx += 4;
        }
    }
    Ok((hess, f0))
}

/// `∂_i∂̄_j f = ¼[f_{x_i x_j} + f_{y_i y_j} + i(f_{x_i y_j} − f_{y_i x_j})]`.
fn complex_levi(hess: &DMatrix<f64>, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| {
        let (xi, yi, xj, yj) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
        Complex64::new(
            0.25 * (hess[(xi, xj)] + hess[(yi, yj)]),
            0.25 * (hess[(xi, yj)] - hess[(yi, xj)]),
        )
    })
}

/// `∂∂̄ log h` at `base` with central differences at steps `(h₁, h₂)`
/// combined by Richardson extrapolation for a second-order error.
pub fn curvature_with<E, F>(h: F, base: &[Complex64], steps: (f64, f64)) -> Result<CurvatureReport>
where
    E: Executor,
    F: Fn(&[Complex64]) -> Result<f64> + Sync + Send,
{
    let (h1, h2) = steps;
    if !(h1 > 0.0 && h2 > 0.0) || h1 == h2 {
        return Err(Error::OutOfRange {
            what: "finite-difference steps",
            detail: format!("need two distinct positive steps, got ({h1}, {h2})"),
        });
    }
    let n = base.len();
    let (coarse, log_h) = real_hessian::<E, _>(&h, base, h1)?;
    let (fine, _) = real_hessian::<E, _>(&h, base, h2)?;
    let ratio = (h1 / h2).powi(2);
    let extrapolated = (&fine * ratio - &coarse) / (ratio - 1.0);
    let error_estimate = (&extrapolated - &fine).abs().max();
    let raw = complex_levi(&extrapolated, n);
    let mut hermitian_defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            hermitian_defect = hermitian_defect.max((raw[(i, j)] - raw[(j, i)].conj()).norm());
        }
    }
    let matrix = DMatrix::from_fn(n, n, |i, j| 0.5 * (raw[(i, j)] + raw[(j, i)].conj()));
    Ok(CurvatureReport {
        base: base.to_vec(),
        matrix,
        steps,
        error_estimate,
        hermitian_defect,
        log_h,
    })
}

pub fn curvature<F>(h: F, base: &[Complex64], step: f64) -> Result<CurvatureReport>
where
    F: Fn(&[Complex64]) -> Result<f64> + Sync + Send,
{
    curvature_with::<DefaultExecutor, F>(h, base, (step, step / 2.0))
}

/// Curvature of the submodule metric in the chart coordinates of `point`.
pub fn metric_curvature_with<E: Executor>(
    module: &SingularModule,
    point: &ChartPoint,
    steps: (f64, f64),
) -> Result<CurvatureReport> {
    let c = point.c.clone();
    let metric = |x: &[Complex64]| module.metric(&ChartPoint::from_coordinates(c.clone(), x)?);
    curvature_with::<E, _>(metric, &point.coordinates(), steps)
}

pub fn metric_curvature(
    module: &SingularModule,
    point: &ChartPoint,
    step: f64,
) -> Result<CurvatureReport> {
    metric_curvature_with::<DefaultExecutor>(module, point, (step, step / 2.0))
}
