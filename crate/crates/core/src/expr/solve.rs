//! Solving an equation that is linear in one opaque symbol.

use thiserror::Error;

use super::atom::{AtomId, Symbol};
use super::ratfunc::RatFunc;
use super::tree::{Expr, NormalizeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{0} does not occur in the equation")]
    Absent(String),
    #[error("equation is not linear in {0} (degree {1})")]
    NotLinear(String, u32),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

/// Solve `lhs == rhs` for `s`, returning the normalized solution.
pub fn solve_linear(lhs: &Expr, rhs: &Expr, s: &Symbol) -> Result<Expr, SolveError> {
    let e = lhs.normalize()? - rhs.normalize()?;
    Ok(Expr::from(&solve_linear_rf(&e, s)?))
}

/// Solve `e == 0` for `s`. Only the numerator matters: where the equation is
/// defined, `num / den = 0` exactly when `num = 0`.
pub fn solve_linear_rf(e: &RatFunc, s: &Symbol) -> Result<RatFunc, SolveError> {
    let a = AtomId::symbol(s);
    let num = e.numer();
    let deg = num.degree_in(a);
    match deg {
        0 => Err(SolveError::Absent(s.to_string())),
        1 => {
            let cs = num.coefficients_in(a);
            let c1 = RatFunc::from_poly(cs[&1].clone());
            let c0 = cs
                .get(&0)
                .map(|p| RatFunc::from_poly(p.clone()))
                .unwrap_or_else(RatFunc::zero);
            Ok(-c0 * c1.inv().expect("linear coefficient is nonzero"))
        }
        d => Err(SolveError::NotLinear(s.to_string(), d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse::parse;

    #[test]
    fn linear_solution() {
        let lhs = parse("B*R_{2.0} + x*R_{2.0} - 3").unwrap();
        let r = Symbol::with_index("R", 2, 0);
        let sol = solve_linear(&lhs, &Expr::int(0), &r).unwrap();
        assert_eq!(sol.normalize().unwrap(), parse("3/(B + x)").unwrap().normalize().unwrap());
    }

    #[test]
    fn rejects_absent_and_nonlinear() {
        let s = Symbol::new("S");
        assert!(matches!(
            solve_linear(&parse("x").unwrap(), &Expr::int(1), &s),
            Err(SolveError::Absent(_))
        ));
        assert!(matches!(
            solve_linear(&parse("S^2").unwrap(), &Expr::int(1), &s),
            Err(SolveError::NotLinear(_, 2))
        ));
    }
}
