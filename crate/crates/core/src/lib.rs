//! Agnostic learning of k-juntas on the Boolean cube.
//!
//! The crate pairs five learners — subsetwise least-squares regression, a
//! stochastic-Fourier variant, a threshold-tuned full regression, exhaustive
//! empirical risk minimization, and the empirical conditional-mean sign rule
//! — with exact small-instance oracles: explicit joint distributions, exact
//! 0-1 losses, exact optimal junta losses, conditional-expectation
//! projections, and the closed-form inequalities connecting square loss to
//! 0-1 loss. The oracles make every identity the learners rely on checkable
//! at desk scale, and the [`verify`] module packages those checks as
//! seeded, reproducible suites.
//!
//! See the `book/` guide for a narrative walkthrough; its code snippets run
//! as doctests of this crate.

#[cfg(doctest)]
mod book;
pub mod cube;
pub mod dataset;
pub mod dist;
pub mod error;
pub mod fourier;
pub mod learners;
mod linalg;
pub mod oracle;
pub mod regression;
pub mod rng;
pub mod verify;

pub use cube::{chi_eval, enumerate_subsets, CubePoint, EnumMode, SubsetMask};
pub use dataset::Dataset;
pub use dist::{JointDistribution, TruthTable};
pub use error::{Error, Result};
pub use fourier::{concentration_bound, Spectrum};
pub use regression::{Predictor, SparsePolynomial};
pub use rng::{CounterRng, RngSeed};
