//! # hscomp
//!
//! Explicit uniform-embedding constructions for finitely generated groups,
//! numeric verification of the inequalities they are supposed to satisfy, and
//! evaluation of Hilbert space compression lower bounds.
//!
//! ## Layout
//!
//! | module | contents |
//! |---|---|
//! | [`group`] | group models, length functions, extensions |
//! | [`balls`] | exact ball enumeration, growth profiles, the k(n) radius search, ball cache |
//! | [`embed`] | Schoenberg unit-vector families, thresholds, stacked embeddings, ρ₋ step functions |
//! | [`poly`] | normalized ball indicators for groups of polynomial growth |
//! | [`hyp`] | ray-segment vectors for free groups |
//! | [`combine`] | combining quotient and kernel families over an extension |
//! | [`bounds`] | closed-form compression bounds and empirical exponent fits |
//! | [`report`] | verification reports and their CSV form |
//!
//! ## Example
//!
//! ```
//! use hscomp::balls::enumerate_ball;
//! use hscomp::group::{make_group, GroupSpec};
//!
//! let z2 = make_group(&GroupSpec::FreeAbelian { rank: 2 }).unwrap();
//! let ball = enumerate_ball(&z2, 2).unwrap();
//! assert_eq!(ball.len(), 13);
//! ```
//!
//! Infinite-dimensional objects are never built. Unit-vector families are
//! kept as Gram matrices (or as sparse, equal-weight supports) and realized
//! in finite dimension only when coordinates are asked for.

pub mod balls;
pub mod bounds;
pub mod combine;
pub mod embed;
pub mod error;
mod fit;
pub mod group;
pub mod hyp;
pub mod poly;
pub mod report;

pub use error::{Error, Result};

/// Inequalities are treated as satisfied when violated by at most this much.
pub const TIE_TOLERANCE: f64 = 1e-12;
