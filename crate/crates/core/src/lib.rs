//! Jordan triple machinery for singular Hilbert modules on Jordan-Kepler
//! varieties of rectangular complex matrices.
//!
//! The crate is organized bottom-up:
//!
//! * [`jordan`]: triple product, Bergman operators, tripotents, Peirce spaces.
//! * [`partition`]: partitions, Pochhammer symbols, Schur polynomials and the
//!   Fischer-Fock components `E^μ`.
//! * [`kernel`]: reproducing kernels, truncated kernels, the Q-kernel and
//!   coefficient recovery.
//! * [`blowup`]: blow-up charts, the line bundle cocycle, metrics and curvature.
//! * [`radial`]: radial moments and the beta integral.
//!
//! With the default `parallel` feature, batch evaluations run on rayon;
//! without it they run sequentially with identical results.

pub mod blowup;
pub mod error;
pub mod exec;
pub mod jordan;
pub mod kernel;
pub mod numeric;
pub mod partition;
pub mod radial;

pub use error::{Error, Result};
