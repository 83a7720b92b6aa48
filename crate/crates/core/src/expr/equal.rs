//! Equality decisions for expressions.

use serde::Serialize;

use super::eval::{Bindings, Env};
use super::ratfunc::RatFunc;
use super::tree::{Expr, NormalizeError};
use crate::sample::Sampler;
use crate::scalar::{approx_eq, Scalar};

/// Minimum number of successful probes behind a numeric verdict.
pub const MIN_PROBES: usize = 20;
/// Relative tolerance for numeric probes.
pub const PROBE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Normal forms agree; a proof when no function atoms occur.
    Equal,
    /// Normal forms differ and no function atoms occur, or a numeric probe
    /// exhibited a difference.
    NotEqual,
    /// Normal forms differ only through function atoms and every probe agreed.
    ProbablyEqual { probes: usize },
    /// Too few probe points could be evaluated to decide.
    Undecided { probes: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equality {
    pub verdict: Verdict,
    /// Non-constant divisors of either input: the verdict holds where none of
    /// them vanishes.
    pub caveats: Vec<Expr>,
}

impl Equality {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::Equal | Verdict::ProbablyEqual { .. })
    }
}

/// Decide `a == b` as functions of the coordinates and opaque symbols.
pub fn equal(a: &Expr, b: &Expr, seed: u64) -> Result<Equality, NormalizeError> {
    let mut caveats = a.divisors();
    for d in b.divisors() {
        if !caveats.contains(&d) {
            caveats.push(d);
        }
    }
    let diff = a.normalize()? - b.normalize()?;
    let verdict = decide_zero(&diff, seed);
    Ok(Equality { verdict, caveats })
}

/// Decide whether a normal form is identically zero.
pub fn decide_zero(r: &RatFunc, seed: u64) -> Verdict {
    if r.is_zero() {
        return Verdict::Equal;
    }
    if !r.has_func_atoms() {
        return Verdict::NotEqual;
    }
    let symbols = r.symbols();
    let mut sampler = Sampler::new(seed);
    let mut ok = 0;
    for _ in 0..(MIN_PROBES * 10) {
        let (x, y) = sampler.point();
        let bindings: Bindings<f64> = symbols
            .iter()
            .map(|s| (s.clone(), Scalar::to_f64(&sampler.rational())))
            .collect();
        let env = Env::with_bindings(Scalar::to_f64(&x), Scalar::to_f64(&y), &bindings);
        let (Ok(n), Ok(d)) = (
            eval_poly_f64(r, &env, true),
            eval_poly_f64(r, &env, false),
        ) else {
            continue;
        };
        if d == 0.0 {
            continue;
        }
        // Compare numerator to zero relative to the size of its terms.
        let scale = numerator_scale(r, &env).unwrap_or(1.0);
        if !approx_eq(n / scale.max(1.0), 0.0, PROBE_TOLERANCE) {
            return Verdict::NotEqual;
        }
        ok += 1;
        if ok >= MIN_PROBES {
            return Verdict::ProbablyEqual { probes: ok };
        }
    }
    Verdict::Undecided { probes: ok }
}

fn eval_poly_f64(r: &RatFunc, env: &Env<'_, f64>, numer: bool) -> Result<f64, super::eval::EvalError> {
    let p = if numer { r.numer() } else { r.denom() };
    RatFunc::from_poly(p.clone()).eval(env)
}

/// Sum of absolute values of the numerator's terms at the point.
fn numerator_scale(r: &RatFunc, env: &Env<'_, f64>) -> Option<f64> {
    let mut s = 0.0;
    for (m, c) in r.numer().terms() {
        let mut t = Scalar::to_f64(&crate::scalar::Rational::from_integer(c.clone())).abs();
        for &(v, e) in m.pairs() {
            t *= env.atom(v).ok()?.abs().powi(e as i32);
        }
        s += t;
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse::parse;

    fn eq(a: &str, b: &str) -> Equality {
        equal(&parse(a).unwrap(), &parse(b).unwrap(), 0).unwrap()
    }

    #[test]
    fn exact_decisions() {
        assert_eq!(eq("(x + y)^2", "x^2 + 2*x*y + y^2").verdict, Verdict::Equal);
        assert_eq!(eq("x/x", "1").verdict, Verdict::Equal);
        assert_eq!(eq("x/x", "1").caveats[0].to_string(), "x");
        assert_eq!(eq("x + 1", "x").verdict, Verdict::NotEqual);
    }

    #[test]
    fn trigonometric_identity_is_probable() {
        let r = eq("sin(x*y)^2 + cos(x*y)^2", "1");
        assert_eq!(r.verdict, Verdict::ProbablyEqual { probes: MIN_PROBES });
        assert_eq!(eq("sin(x)^2", "cos(x)^2").verdict, Verdict::NotEqual);
        assert_eq!(eq("exp(x)*exp(y)", "exp(x + y)").verdict, Verdict::ProbablyEqual { probes: 20 });
    }
}
