//! Tube families in ℝⁿ, the multilinear Kakeya overlap functional
//!
//! ```text
//!     ∫_Q  Π_j ( Σ_a w_{j,a} T_{j,a} )^{1/(n-1)}
//! ```
//!
//! and an executable multiscale bound: every step of the argument (subcube
//! subdivision, axis-parallel fattening, Loomis-Whitney on each subcube, the
//! scale ladder W = 1, δ⁻¹, …, δ⁻ᴹ) is carried out on a concrete
//! configuration and produces a numeric [`certifier::Certificate`].
//!
//! The crate is `no_std` + `alloc`. The `parallel` feature (on by default)
//! spreads quadrature cells and subcube counts over rayon; results are
//! bit-identical with and without it because all sums go through the
//! fixed-shape reduction in [`evaluator::reduce`].

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
// `!(x > 0.0)` is how NaN gets rejected along with non-positive input.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod certifier;
pub mod error;
pub mod evaluator;
pub mod experiments;
pub mod generators;
pub mod geometry;
pub mod loomis_whitney;
pub mod math;
pub mod reduction;

pub use error::{Error, Result};
pub use evaluator::{GridSpec, Member, OverlapValue, Shape, TubeFamily};
pub use geometry::{Cap, Cube, Direction, Line, LinearMap, LipschitzCurve, Tube};
