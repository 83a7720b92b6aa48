//! Point evaluation.

use std::collections::HashMap;

use thiserror::Error;

use super::atom::{AtomId, AtomKey, Func, Symbol};
use super::tree::{Expr, Node};
use crate::scalar::{Rational, Scalar};

/// Values for opaque symbols (each derivative index is a separate entry).
pub type Bindings<T> = HashMap<Symbol, T>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero (pole) at the evaluation point")]
    Pole,
    #[error("no value bound for symbol {0}")]
    Unbound(String),
    #[error("{0} evaluated outside its domain")]
    Domain(Func),
    #[error("{0} has no exact rational value at this argument")]
    Inexact(Func),
    #[error("evaluation produced a non-finite value")]
    NonFinite,
}

/// Evaluation environment: coordinates and symbol bindings.
#[derive(Clone, Debug)]
pub struct Env<'a, T> {
    pub x: T,
    pub y: T,
    pub bindings: Option<&'a Bindings<T>>,
}

impl<'a, T: Scalar> Env<'a, T> {
    pub fn new(x: T, y: T) -> Self {
        Env {
            x,
            y,
            bindings: None,
        }
    }

    pub fn with_bindings(x: T, y: T, bindings: &'a Bindings<T>) -> Self {
        Env {
            x,
            y,
            bindings: Some(bindings),
        }
    }

    pub fn symbol(&self, s: &Symbol) -> Result<T, EvalError> {
        self.bindings
            .and_then(|b| b.get(s))
            .cloned()
            .ok_or_else(|| EvalError::Unbound(s.to_string()))
    }

    pub fn apply(&self, f: Func, v: &T) -> Result<T, EvalError> {
        if let Some(r) = T::elementary(f, v) {
            return Ok(r);
        }
        if T::EXACT {
            Err(EvalError::Inexact(f))
        } else {
            Err(EvalError::Domain(f))
        }
    }

    pub fn atom(&self, a: AtomId) -> Result<T, EvalError> {
        if a == AtomId::X {
            return Ok(self.x.clone());
        }
        if a == AtomId::Y {
            return Ok(self.y.clone());
        }
        match a.key() {
            AtomKey::Sym(s) => self.symbol(&s),
            AtomKey::Func(..) => {
                let (f, arg) = a.func_arg().expect("function atom has argument");
                let v = arg.eval(self)?;
                self.apply(f, &v)
            }
            _ => unreachable!(),
        }
    }
}

/// Evaluate an expression tree directly.
pub fn eval<T: Scalar>(e: &Expr, env: &Env<'_, T>) -> Result<T, EvalError> {
    let v = match e.node() {
        Node::Const(r) => T::from_rational(r),
        Node::X => env.x.clone(),
        Node::Y => env.y.clone(),
        Node::Sym(s) => env.symbol(s)?,
        Node::Add(items) => {
            let mut acc = T::zero();
            for i in items {
                acc = acc + eval(i, env)?;
            }
            acc
        }
        Node::Mul(items) => {
            let mut acc = T::one();
            for i in items {
                acc = acc * eval(i, env)?;
            }
            acc
        }
        Node::Neg(a) => -eval(a, env)?,
        Node::Div(a, b) => {
            let n = eval(a, env)?;
            let d = eval(b, env)?;
            if !d.is_unit() {
                return Err(EvalError::Pole);
            }
            n / d
        }
        Node::Pow(a, k) => {
            let b = eval(a, env)?;
            if *k >= 0 {
                b.powi(*k as u32)
            } else {
                if !b.is_unit() {
                    return Err(EvalError::Pole);
                }
                T::one() / b.powi(k.unsigned_abs())
            }
        }
        Node::Func(f, a) => {
            let v = eval(a, env)?;
            env.apply(*f, &v)?
        }
    };
    if !v.is_finite() {
        return Err(EvalError::NonFinite);
    }
    Ok(v)
}

/// Result of evaluating with automatic exactness: exact whenever every
/// operation stays rational, floating point otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => Scalar::to_f64(r),
            Value::Float(v) => *v,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Exact values serialize as `"p/q"` strings, floats as numbers.
impl serde::Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Exact(r) => s.collect_str(r),
            Value::Float(v) => s.serialize_f64(*v),
        }
    }
}

/// Evaluate at a rational point, exactly if possible.
pub fn eval_auto(
    e: &Expr,
    x: &Rational,
    y: &Rational,
    bindings: &Bindings<Rational>,
) -> Result<Value, EvalError> {
    match eval(e, &Env::with_bindings(x.clone(), y.clone(), bindings)) {
        Ok(v) => Ok(Value::Exact(v)),
        Err(EvalError::Inexact(_)) => {
            let fb: Bindings<f64> = bindings
                .iter()
                .map(|(k, v)| (k.clone(), Scalar::to_f64(v)))
                .collect();
            let env = Env::with_bindings(Scalar::to_f64(x), Scalar::to_f64(y), &fb);
            eval(e, &env).map(Value::Float)
        }
        Err(err) => Err(err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse::parse;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn exact_and_float_agree() {
        let e = parse("x^2*y - 3/x + (y - 1)^-2").unwrap();
        let exact: Rational = eval(&e, &Env::new(q(1, 2), q(3, 1))).unwrap();
        assert_eq!(exact, q(3, 4) - q(6, 1) + q(1, 4));
        let approx: f64 = eval(&e, &Env::new(0.5, 3.0)).unwrap();
        assert!((approx - Scalar::to_f64(&exact)).abs() < 1e-12);
    }

    #[test]
    fn poles_and_domains() {
        let e = parse("1/(x - y)").unwrap();
        assert_eq!(eval(&e, &Env::new(1.0, 1.0)), Err(EvalError::Pole));
        let l = parse("ln(x)").unwrap();
        assert_eq!(eval(&l, &Env::new(-1.0, 0.0)), Err(EvalError::Domain(Func::Ln)));
    }

    #[test]
    fn automatic_fallback_to_float() {
        let e = parse("sin(x) + B").unwrap();
        let mut b = Bindings::new();
        b.insert(Symbol::new("B"), q(1, 1));
        match eval_auto(&e, &q(1, 1), &q(0, 1), &b).unwrap() {
            Value::Float(v) => assert!((v - (1f64.sin() + 1.0)).abs() < 1e-15),
            other => panic!("expected float, got {other:?}"),
        }
        let z = eval_auto(&e, &q(0, 1), &q(0, 1), &b).unwrap();
        assert_eq!(z, Value::Exact(q(1, 1)));
        let unbound = eval_auto(&e, &q(0, 1), &q(0, 1), &Bindings::new());
        assert_eq!(unbound, Err(EvalError::Unbound("B".into())));
    }
}
