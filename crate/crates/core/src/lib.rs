//! # divergence-lab
//!
//! Divergence families on finite probability simplices, and numerical
//! checkers that verify or falsify data processing, sufficiency and
//! decomposability for them.
//!
//! The library is organised bottom-up:
//!
//! - [`simplex`]: probability vectors, Markov channels, pushforwards and the
//!   sufficient transformations (permutations, proportional merges, splits).
//! - [`function`]: univariate generator functions (analytic catalog entries,
//!   polynomials, interpolated tables).
//! - [`divergence`]: f-divergences, Bregman divergences, KL-type distances,
//!   decomposable and composed divergences behind one [`DivergenceSpec`].
//! - [`family`]: constructive families (KL-type divergences generated from a
//!   nondecreasing `h`, binary Bregman divergences from symmetric convex `g`).
//! - [`checks`]: randomized and exhaustive-grid falsifiers producing
//!   [`CheckReport`]s with re-verifiable witnesses.
//! - [`fitting`]: convex-regression probes asking whether a binary divergence
//!   is representable as an f-divergence or as a Bregman divergence.
//! - [`verify`]: named scenarios reproducing each characterization result.
//!
//! Evaluation code in [`simplex`], [`function`] and [`divergence`] is generic
//! over [`Scalar`] (`f32` or `f64`). The checkers and fitters work in `f64`,
//! and the crate-root aliases below fix that choice.
//!
//! A checker verdict of "no violation found" is evidence, not a proof.

#![forbid(unsafe_code)]

pub mod checks;
pub mod divergence;
mod error;
pub mod family;
pub mod fitting;
pub mod function;
pub mod quadrature;
mod scalar;
pub mod simplex;
pub mod verify;

pub use checks::{CheckReport, Property, Verdict, Witness};
pub use divergence::{Divergence, DivergenceSpec, Family, Generator};
pub use error::{Error, Result};
pub use function::ScalarFunction;
pub use scalar::Scalar;

/// Probability vector in double precision.
pub type Distribution = simplex::Distribution<f64>;
/// Row-stochastic channel in double precision.
pub type Channel = simplex::Channel<f64>;
/// Probability vector in single precision.
pub type Distribution32 = simplex::Distribution<f32>;
/// Row-stochastic channel in single precision.
pub type Channel32 = simplex::Channel<f32>;
