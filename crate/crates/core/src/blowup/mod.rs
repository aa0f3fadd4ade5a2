//! Charts of the rank-λ stratum, the tautological bundle over the blow-up
//! and the hermitian metric induced by a Kepler kernel.

pub mod bundle;
pub mod chart;
pub mod curvature;

pub use bundle::{
    bergman_adjoint_apply, bundle_metric, delta_t_minus_t, embedding_check, fock_shift_identity,
    lemma_e, transition_germ, BundleGerm, IdentityCheck, LemmaE, SingularModule,
};
pub use chart::{
    chart_inverse, sigma_c, theta_c, ChartPoint, ThetaPoint, CHART_RANGE_TOL, RANK_CONSISTENCY_TOL,
};
pub use curvature::{
    curvature, curvature_with, metric_curvature, metric_curvature_with, CurvatureReport,
    DEFAULT_STEPS,
};
