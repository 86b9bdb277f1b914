//! Numerical verification of the identities and inequalities satisfied by
//! closed G₂-structures: exterior algebra in dimension 7, the pointwise G₂
//! model, finite-difference tensor calculus on periodic charts, the torsion
//! identity chain, and the volume-growth analytics for Ricci-pinched metrics.

// Tensor code indexes several arrays with the same loop variable; negated
// comparisons are used to reject NaN along with non-positive values.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exterior;
pub mod fields;
pub mod g2;
pub mod gallery;
pub mod growth;
pub mod harness;
pub mod properties;
pub mod report;
pub mod torsion;

pub use error::{Error, Result};
