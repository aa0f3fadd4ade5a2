//! The line bundle over the blow-up, its transition cocycle, and the
//! hermitian metric induced by a singular submodule.

use num_complex::Complex64;

use super::chart::{chart_inverse, sigma_c, ChartPoint};
use crate::error::{Error, Result};
use crate::jordan::{bergman_apply, delta, Peirce, TripleElement, Tripotent};
use crate::kernel::{KernelSeries, KernelSpec};
use crate::partition::{pochhammer, FockExpansion, Partition};

/// A germ `[s, t, κ]_c` of the line bundle.
#[derive(Debug, Clone)]
pub struct BundleGerm {
    pub chart: ChartPoint,
    pub coefficient: Complex64,
}

/// `N_c(s)`, failing if it vanishes (the point is then outside the chart).
fn chart_det(point: &ChartPoint) -> Result<Complex64> {
    let n = point.c.jordan_det(&point.s)?;
    if n.norm() == 0.0 {
        return Err(Error::OutOfChart { sigma_min: 0.0 });
    }
    Ok(n)
}

/// Re-express a germ in the chart of `c′`:
/// `κ′ = κ · conj(N_{c′}(s′)) / conj(N_c(s))`.
pub fn transition_germ(from: &BundleGerm, c_prime: &Tripotent) -> Result<BundleGerm> {
    let w = sigma_c(&from.chart);
    let target = chart_inverse(c_prime, &w)?;
    let ratio = chart_det(&target)?.conj() / chart_det(&from.chart)?.conj();
    Ok(BundleGerm {
        chart: target,
        coefficient: from.coefficient * ratio,
    })
}

/// `B*_{t,−c} z = B_{−c,t} z = (I + c t*) z (I + t* c)`.
pub fn bergman_adjoint_apply(point: &ChartPoint, z: &TripleElement) -> Result<TripleElement> {
    let neg_c = -point.c.element();
    bergman_apply(&neg_c, &point.t, z)
}

/// `Δ(t, −t) = det(I + t t*)`.
pub fn delta_t_minus_t(t: &TripleElement) -> Result<f64> {
    Ok(delta(t, &-t)?.re)
}

/// Two sides of an identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
}

impl IdentityCheck {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    /// Residual relative to `max(|lhs|, |rhs|, 1e-300)`.
    pub fn relative(&self) -> f64 {
        self.residual() / self.lhs.norm().max(self.rhs.norm()).max(1e-300)
    }
}

/// Data of the determinant identity for `P_c B*_{t,−c} B_{t,−c} c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaE {
    /// `N_c(P_c B*_{t,−c} B_{t,−c} c)`.
    pub lhs: Complex64,
    /// `Δ(t, −t) = det(I + t t*)`, which equals `lhs`.
    pub delta_t_minus_t: f64,
    /// `Δ(t, t) = det(I − t t*)`, for comparison.
    pub delta_t_t: f64,
    /// `‖P_c B*B c − P_c B_{t,−t} c‖`; zero when the two Peirce blocks commute.
    pub projection_residual: f64,
}

pub fn lemma_e(point: &ChartPoint) -> Result<LemmaE> {
    let neg_c = -point.c.element();
    let c = point.c.element();
    let bc = bergman_apply(&point.t, &neg_c, c)?;
    let bbc = bergman_adjoint_apply(point, &bc)?;
    let p_bbc = point.c.project(&bbc, Peirce::Two)?;
    let neg_t = -&point.t;
    let p_btt = point
        .c
        .project(&bergman_apply(&point.t, &neg_t, c)?, Peirce::Two)?;
    Ok(LemmaE {
        lhs: point.c.jordan_det(&p_bbc)?,
        delta_t_minus_t: delta_t_minus_t(&point.t)?,
        delta_t_t: delta(&point.t, &point.t)?.re,
        projection_residual: (&p_bbc - &p_btt).norm(),
    })
}

/// `E^{μ+𝟙}(z, w)` against `(d2/λ)_μ/(d2/λ)_{μ+𝟙} · N_c(P_c B* z) · conj(N_c(s)) · E^μ(z, w)`
/// with `w = σ_c(s,t)`.
pub fn fock_shift_identity(
    point: &ChartPoint,
    mu: &Partition,
    z: &TripleElement,
) -> Result<IdentityCheck> {
    let lambda = point.c.rank();
    let w = sigma_c(point);
    let shifted = mu.shifted(1, lambda)?;
    let fe = FockExpansion::new(z, &w, shifted.weight())?;
    // d2/λ = λ for matrix triples
    let d2 = lambda as f64;
    let factor = pochhammer(d2, mu, 2.0) / pochhammer(d2, &shifted, 2.0);
    let nz = point
        .c
        .jordan_det_of_block(&bergman_adjoint_apply(point, z)?);
    let ns = point.c.jordan_det(&point.s)?;
    Ok(IdentityCheck {
        lhs: fe.component(&shifted)?,
        rhs: nz * ns.conj() * fe.component(mu)? * factor,
    })
}

/// The truncated kernel and Q-kernel of one singular submodule.
#[derive(Debug, Clone)]
pub struct SingularModule {
    truncated: KernelSeries,
    q: KernelSeries,
}

impl SingularModule {
    /// `spec` must have vanishing order 1.
    pub fn new(spec: &KernelSpec) -> Result<Self> {
        if spec.order != 1 {
            return Err(Error::OutOfRange {
                what: "vanishing order",
                detail: format!("the singular submodule needs k = 1, got {}", spec.order),
            });
        }
        Ok(SingularModule {
            truncated: KernelSeries::kernel(spec)?,
            q: KernelSeries::q_kernel(spec)?,
        })
    }

    pub fn truncated(&self) -> &KernelSeries {
        &self.truncated
    }

    pub fn q_kernel(&self) -> &KernelSeries {
        &self.q
    }

    pub fn spec(&self) -> &KernelSpec {
        self.truncated.spec()
    }

    /// `h = Δ(t,−t) · Q(w, w)` with `w = σ_c(s,t)`.
    pub fn metric(&self, point: &ChartPoint) -> Result<f64> {
        let w = sigma_c(point);
        let q = self.q.eval(&w, &w)?.value.re;
        Ok(delta_t_minus_t(&point.t)? * q)
    }

    /// `K̃(z, w)` against `N_c(P_c B* z) · conj(N_c(s)) · Q(z, w)`.
    pub fn prop_d(&self, point: &ChartPoint, z: &TripleElement) -> Result<IdentityCheck> {
        let w = sigma_c(point);
        let nz = point
            .c
            .jordan_det_of_block(&bergman_adjoint_apply(point, z)?);
        let ns = point.c.jordan_det(&point.s)?;
        Ok(IdentityCheck {
            lhs: self.truncated.eval(z, &w)?.value,
            rhs: nz * ns.conj() * self.q.eval(z, &w)?.value,
        })
    }

    /// `K̃(w, w)` against `Δ(t,−t) |N_c(s)|² Q(w, w)`.
    pub fn prop_h(&self, point: &ChartPoint) -> Result<IdentityCheck> {
        let w = sigma_c(point);
        let ns = point.c.jordan_det(&point.s)?;
        Ok(IdentityCheck {
            lhs: self.truncated.eval(&w, &w)?.value,
            rhs: self.q.eval(&w, &w)?.value * (delta_t_minus_t(&point.t)? * ns.norm_sqr()),
        })
    }

    /// `K̃(w, w)/|N_c(s)|²` against the metric `Δ(t,−t) Q(w, w)`.
    pub fn embedding_check(&self, point: &ChartPoint) -> Result<IdentityCheck> {
        let w = sigma_c(point);
        let ns = chart_det(point)?;
        Ok(IdentityCheck {
            lhs: self.truncated.eval(&w, &w)?.value / ns.norm_sqr(),
            rhs: Complex64::new(self.metric(point)?, 0.0),
        })
    }
}

/// `Δ(t,−t) · Q(σ_c(s,t), σ_c(s,t))` for the submodule of `spec`.
pub fn bundle_metric(spec: &KernelSpec, point: &ChartPoint) -> Result<f64> {
    SingularModule::new(spec)?.metric(point)
}

/// Absolute residual of the isometry statement at `point`.
pub fn embedding_check(spec: &KernelSpec, point: &ChartPoint) -> Result<f64> {
    Ok(SingularModule::new(spec)?
        .embedding_check(point)?
        .residual())
}
