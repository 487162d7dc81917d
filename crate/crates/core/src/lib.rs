//! Hodge-theoretic operators on flat complex tori, exact operator calculus on
//! polynomial forms, Beltrami power series and their majorants.

pub mod calculus;
pub mod error;
pub mod experiment;
pub mod exterior;
pub mod kuranishi;
pub mod majorant;
pub mod torus;

pub use error::{Error, Result};
