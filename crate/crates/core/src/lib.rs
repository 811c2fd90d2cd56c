//! Exact computational engine for cluster varieties.
//!
//! The crate builds the combinatorial and algebraic layers needed to
//! construct and certify Donaldson-Thomas transformations:
//!
//! - [`algebra`]: arbitrary-precision rationals, sparse multivariate Laurent
//!   polynomials, Laurent polynomials in the quantum parameter `q`, quantum
//!   torus elements and graded-truncated formal series.
//! - [`quiver`]: quivers as skew-symmetric integer matrices with frozen
//!   vertices, mutation words, and lattice-basis half-reflections.
//! - [`tropical`]: tropical points, C-matrices, sign coherence, reddening
//!   detection and DT certification.
//! - [`cluster`]: classical X/A-seeds, principal coefficients and
//!   F-polynomials, closed-form verification of the cyclic transformation
//!   `tau`, and the octahedral-recursion oracle.
//! - [`quantum`]: quantum seeds, dilogarithm conjugation, ordered DT-series
//!   factorizations and truncated-series identities.
//! - [`surface`]: decorated surfaces, m-triangulation quivers, flip words,
//!   Weyl generator words, boundary rotation, the duality word, and the
//!   composite DT word with certification.
//!
//! All arithmetic is exact; there is no floating point anywhere in the core.

pub mod algebra;
pub mod cluster;
pub mod error;
pub mod quantum;
pub mod quiver;
pub mod surface;
pub mod tropical;

pub use error::{Error, Result};
