//! Asymptotic expansions of functions along integral curves of diagonal
//! linear holomorphic vector fields, Cauchy-type bounds on their
//! coefficients, and a Forelli-type reconstruction pipeline with the
//! accompanying counterexamples.
//!
//! The modules build on each other bottom-up:
//!
//! - [`series`]: finite mixed Taylor jets in `z` and `conj(z)`.
//! - [`flow`]: diagonal fields, their integral curves and the exact level grid.
//! - [`asympt`]: expansions on the right half-plane and their decay checks.
//! - [`extract`]: numerical recovery of holomorphic expansion coefficients.
//! - [`forelli`]: the staged F-holomorphy / reconstruction pipeline.
//! - [`counterex`]: executable counterexamples showing the eigenvalue
//!   hypothesis cannot be dropped.
//! - [`scenario`]: file-driven scenario runner behind the `holoflow` binary.

// `!(x < tol)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asympt;
pub mod counterex;
pub mod error;
pub mod extract;
pub mod flow;
pub mod forelli;
pub mod numeric;
pub mod report;
pub mod scenario;
pub mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use num_rational::Rational64;
