//! Reproducing kernels of the Hilbert modules `M_ρ`, their truncated
//! (submodule) kernels, the Q-kernel and coefficient recovery.

pub mod coefficients;
pub mod normalized;
pub mod recovery;
pub mod series;

pub use coefficients::{kernel_coefficient_for, q_factor, CoefficientSequence};
pub use normalized::{normalized_kernel, NormalizedKernel};
pub use recovery::{
    diagonal_point, recover_coefficients, recover_coefficients_with, sample_grid, RecoveredTable,
    RecoveryOptions,
};
pub use series::{
    kernel_coefficient, kernel_eval, q_kernel_eval, truncated_kernel_eval, KernelSeries,
    KernelSpec, KernelValue, KEPLER_RANK_TOL,
};
