//! The hermitian Jordan triple `C^{r×s}`.

pub mod element;
pub mod ops;
pub mod random;
pub mod space;
pub mod svd;
pub mod tripotent;

pub use element::{CMatrix, TripleElement};
pub use ops::{
    bergman_apply, bergman_apply_expanded, bergman_apply_triple, bergman_det, d_operator, delta,
    inner_product, is_tripotent, pseudo_inverse, pseudo_inverse_residuals, quadratic_rep, rank,
    triple_product, RANK_TOL,
};
pub use random::{
    ginibre, haar_unitary, random_element, random_rank_element, random_tripotent,
    random_tripotent_with, seeded_rng, with_spectral_norm, SeededRng,
};
pub use space::TripleSpace;
pub use svd::{svd, Svd};
pub use tripotent::{jordan_det_nc, peirce_project, Peirce, Tripotent, PEIRCE_TOL};
