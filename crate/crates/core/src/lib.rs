//! Group-invariant quantum machine learning models, simulated densely.
//!
//! Models have the form `h(ρ) = Tr[U (ρ^⊗k) U† O]`. When `O` lies in the
//! commutant of a symmetry group the model cannot tell apart states related
//! by that group. The crate builds such observables, generates labeled
//! datasets, and checks classification and Haar-moment behaviour numerically.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod datasets;
pub mod error;
pub mod groups;
pub mod models;
pub mod observables;
pub mod rng;
pub mod tensor;
pub mod train;

pub use error::{Error, Result};
