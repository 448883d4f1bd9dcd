//! Exact and Monte Carlo calculus for zonotopes given by generator vectors.

pub mod error;
pub mod functionals;
pub mod digest;
pub mod geometry;
pub mod inequalities;
pub mod par;
pub mod radii;
pub mod rng;
pub mod search;
pub mod stochastic;
pub mod subsets;
pub mod zonotope;

pub use error::{Result, ZonoError};
pub use zonotope::GeneratorSet;
