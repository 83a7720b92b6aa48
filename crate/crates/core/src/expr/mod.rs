//! Symbolic expressions over two coordinates and opaque functions.

mod atom;
pub mod equal;
pub mod eval;
pub mod gcd;
pub mod parse;
pub mod poly;
mod ratfunc;
pub mod solve;
mod tree;

pub use atom::{AtomId, AtomKey, Func, Symbol};
pub use equal::{equal, Equality, Verdict};
pub use eval::{eval, eval_auto, Bindings, Env, EvalError, Value};
pub use parse::{parse, parse_with, ParseError, ParseErrorKind, ParseOptions};
pub use ratfunc::{atom_derivative, Coord, Poly, RatFunc};
pub use solve::{solve_linear, solve_linear_rf, SolveError};
pub use tree::{Expr, Node, NormalizeError};
