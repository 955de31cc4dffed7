//! Multicommodity flow on planar graphs whose demands sit on faces.
//!
//! The crate covers the whole chain: rotation-system embeddings and their
//! duals, demand sets on a face cycle with uncrossing and domination checks,
//! laminar approximating families, exact cut-condition checking, a
//! multiplicative-weights concurrent flow oracle, gap routing and approximate
//! sparsest cuts, and the primal-dual cut cover algorithm for 2-edge
//! connectivity augmentation together with the multicut reduction.
//!
//! All combinatorial quantities (capacities, demands, duals) are exact
//! rationals. Floating point only appears inside the flow oracle and is
//! rescaled to exact values before anything is reported.

pub mod cutcheck;
pub mod cutcover;
mod error;
pub mod facedemands;
pub mod format;
pub mod generate;
pub mod laminar;
pub mod pipeline;
pub mod planar;
pub mod rational;
pub mod route;

pub use error::{Error, Result};
pub use rational::Rational;
