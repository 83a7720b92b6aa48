//! Point-transformation invariants of second-order ODEs cubic in the first
//! derivative, `y'' = P + 3Q y' + 3R y'^2 + S y'^3`.
//!
//! The crate computes two independent families of differential invariants
//! from the coefficients `P, Q, R, S`, checks how they transform under point
//! changes of variables, and relates the two families to each other.

pub mod bgd;
pub mod compare;
pub mod diff;
pub mod expr;
pub mod fext;
pub mod jet;
pub mod ode;
pub mod sample;
pub mod scalar;
pub mod report;
pub mod sd;
pub mod special;

pub use diff::{Calculus, Derivation, Plain, Rooted};
pub use expr::{Expr, RatFunc, Symbol};
pub use fext::FExt;
pub use jet::Jet;
pub use scalar::{Field, Rational, Scalar};

/// Integer polynomial over interned atoms.
pub type Poly = expr::Poly;
