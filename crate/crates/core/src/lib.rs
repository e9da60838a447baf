//! Exact dimensions of spaces of generalized theta functions on moduli of
//! parabolic bundles, computed with the closed Verlinde formula over
//! cyclotomic fields, together with the recurrences and Hecke invariances
//! that the formula must satisfy.

pub mod cyclotomic;
pub mod error;
pub mod grid;
pub mod schur;
pub mod verlinde;
pub mod weights;

pub use error::{Error, Result};
