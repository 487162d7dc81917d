//! Hodge theory of the flat torus `ℂⁿ/(ℤⁿ + iℤⁿ)`, diagonal in the Fourier basis.

pub mod axioms;
pub mod form;
pub mod geometry;
pub mod hodge;
pub mod norms;
pub mod random;
pub mod trig;

pub use form::{FourierForm, LiePart, TruncationReceipt};
pub use geometry::{Mode, TorusGeometry};
pub use trig::TrigPoly;
