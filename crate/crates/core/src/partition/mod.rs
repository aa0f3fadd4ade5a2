//! Partitions, Pochhammer symbols, Gamma functions of cones, Schur
//! polynomials and Fischer-Fock components.

pub mod fock;
pub mod pochhammer;
pub mod schur;
pub mod young;

pub use fock::{
    dim_p_mu, dim_p_mu_shape, e_mu, fock_component, power_sums, weyl_dimension, FockExpansion,
};
pub use pochhammer::{
    log_gamma_lambda, log_gamma_lambda_at, log_gamma_lambda_constant, pochhammer,
    pochhammer_complex, rising, Multiplicities,
};
pub use schur::{complete_from_power_sums, jacobi_trudi, schur_from_power_sums};
pub use young::{enumerate_partitions, num_syt, Partition};
