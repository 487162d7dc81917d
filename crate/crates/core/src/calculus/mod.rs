//! Exact operator calculus on polynomial-coefficient forms over a chart of `ℂⁿ`.

pub mod connection;
pub mod curvature;
pub mod identities;
pub mod poly;
pub mod random;
pub mod word;

pub use connection::Connection;
pub use identities::{random_instance, verify_identity, IdentityTag, Instance, Verdict};
pub use poly::{GaussRat, Monomial, PolyCoeff, PolyForm};
pub use word::{apply_operator, Context, Expr, Letter};
