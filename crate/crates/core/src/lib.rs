//! Numerical toolkit for distance problems on the Heisenberg group `ℍⁿ`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: group law, dilations, the Korányi gauge, ball volumes and
//!   uniform sampling in Korányi balls.
//! * [`special`]: Laguerre, Hermite, Bessel and Airy functions together with
//!   the regime-dispatched uniform asymptotics of weighted Laguerre
//!   polynomials.
//! * [`quadrature`]: adaptive Gauss–Kronrod integration on pre-split panels.
//! * [`spectral`]: the spectral coefficients `R_k(λ, σ_r)` of the Korányi
//!   sphere measure, frequency bands, low-frequency and decay checks, and a
//!   van der Corput checker.
//! * [`weyl`]: truncated Weyl transforms on `ℍ¹` and the identities linking
//!   them to Laguerre functions and twisted convolution.
//! * [`distance_sets`]: the quantitative Steinhaus constant, distance sets of
//!   finite configurations and a lattice construction of a large set that
//!   avoids a prescribed sequence of distances.

pub mod distance_sets;
mod error;
pub mod geometry;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod weyl;

pub use error::{Error, Result};
pub use geometry::{ball_volume, koranyi_dist, sample_ball_uniform, Dimension, HPoint};

/// Version string embedded into self-describing output files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
