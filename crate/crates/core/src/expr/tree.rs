//! Expression trees as written by users and printed back.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::atom::{AtomId, AtomKey, Func, Symbol};
use super::ratfunc::{Coord, Poly, RatFunc};
use crate::scalar::Rational;

#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Rational),
    X,
    Y,
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Expr),
    Div(Expr, Expr),
    Pow(Expr, i32),
    Func(Func, Expr),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("division by an expression that is identically zero: {0}")]
    DivisionByZero(String),
}

impl Expr {
    fn wrap(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(Rational::from_integer(n.into()))
    }

    pub fn rational(r: Rational) -> Expr {
        Expr::wrap(Node::Const(r))
    }

    pub fn x() -> Expr {
        Expr::wrap(Node::X)
    }

    pub fn y() -> Expr {
        Expr::wrap(Node::Y)
    }

    pub fn symbol(s: Symbol) -> Expr {
        Expr::wrap(Node::Sym(s))
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        self.as_const().is_some_and(|r| r.is_zero())
    }

    fn is_one_literal(&self) -> bool {
        self.as_const().is_some_and(|r| r.is_one())
    }

    pub fn add(items: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        let mut c = Rational::zero();
        for i in items {
            match i.node() {
                Node::Add(inner) => flat.extend(inner.iter().cloned()),
                Node::Const(r) => c += r,
                _ => flat.push(i),
            }
        }
        if !c.is_zero() {
            flat.push(Expr::rational(c));
        }
        match flat.len() {
            0 => Expr::int(0),
            1 => flat.pop().unwrap(),
            _ => Expr::wrap(Node::Add(flat)),
        }
    }

    pub fn mul(items: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        let mut c = Rational::one();
        for i in items {
            match i.node() {
                Node::Mul(inner) => flat.extend(inner.iter().cloned()),
                Node::Const(r) => c *= r,
                _ => flat.push(i),
            }
        }
        if c.is_zero() {
            return Expr::int(0);
        }
        if !c.is_one() {
            flat.insert(0, Expr::rational(c));
        }
        match flat.len() {
            0 => Expr::int(1),
            1 => flat.pop().unwrap(),
            _ => Expr::wrap(Node::Mul(flat)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add(vec![a, b.neg()])
    }

    pub fn neg(self) -> Expr {
        match self.node() {
            Node::Const(r) => Expr::rational(-r.clone()),
            Node::Neg(inner) => inner.clone(),
            _ => Expr::wrap(Node::Neg(self)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if b.is_one_literal() {
            return a;
        }
        if a.is_zero_literal() && !b.is_zero_literal() {
            return a;
        }
        if let (Some(p), Some(q)) = (a.as_const(), b.as_const()) {
            if !q.is_zero() {
                return Expr::rational(p / q);
            }
        }
        Expr::wrap(Node::Div(a, b))
    }

    pub fn pow(base: Expr, k: i32) -> Expr {
        match k {
            0 => Expr::int(1),
            1 => base,
            _ => {
                if let Some(r) = base.as_const() {
                    if k > 0 || !r.is_zero() {
                        let v = if k > 0 {
                            num_traits::pow(r.clone(), k as usize)
                        } else {
                            num_traits::pow(r.recip(), k.unsigned_abs() as usize)
                        };
                        return Expr::rational(v);
                    }
                }
                Expr::wrap(Node::Pow(base, k))
            }
        }
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::wrap(Node::Func(f, arg))
    }

    /// Symbolic partial derivative with respect to a coordinate.
    ///
    /// Opaque symbols differentiate by shifting their derivative index, so
    /// mixed partials commute by construction.
    pub fn partial(&self, c: Coord) -> Expr {
        match self.node() {
            Node::Const(_) => Expr::int(0),
            Node::X => Expr::int(i64::from(c == Coord::X)),
            Node::Y => Expr::int(i64::from(c == Coord::Y)),
            Node::Sym(s) => Expr::symbol(match c {
                Coord::X => s.shifted(1, 0),
                Coord::Y => s.shifted(0, 1),
            }),
            Node::Add(items) => Expr::add(items.iter().map(|i| i.partial(c)).collect()),
            Node::Mul(items) => {
                let mut terms = Vec::new();
                for (i, f) in items.iter().enumerate() {
                    let d = f.partial(c);
                    if d.is_zero_literal() {
                        continue;
                    }
                    let mut factors: Vec<Expr> = items
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, g)| g.clone())
                        .collect();
                    factors.push(d);
                    terms.push(Expr::mul(factors));
                }
                Expr::add(terms)
            }
            Node::Neg(a) => a.partial(c).neg(),
            Node::Div(a, b) => {
                let da = a.partial(c);
                let db = b.partial(c);
                if db.is_zero_literal() {
                    return Expr::div(da, b.clone());
                }
                Expr::div(
                    Expr::sub(
                        Expr::mul(vec![da, b.clone()]),
                        Expr::mul(vec![a.clone(), db]),
                    ),
                    Expr::pow(b.clone(), 2),
                )
            }
            Node::Pow(b, k) => {
                let db = b.partial(c);
                Expr::mul(vec![Expr::int(*k as i64), Expr::pow(b.clone(), k - 1), db])
            }
            Node::Func(f, a) => {
                let da = a.partial(c);
                if da.is_zero_literal() {
                    return Expr::int(0);
                }
                let outer = match f {
                    Func::Sin => Expr::func(Func::Cos, a.clone()),
                    Func::Cos => Expr::func(Func::Sin, a.clone()).neg(),
                    Func::Exp => self.clone(),
                    Func::Ln => Expr::div(Expr::int(1), a.clone()),
                };
                Expr::mul(vec![outer, da])
            }
        }
    }

    /// `∂^{p+q} / ∂x^p ∂y^q`.
    pub fn partial_n(&self, p: u32, q: u32) -> Expr {
        let mut e = self.clone();
        for _ in 0..p {
            e = e.partial(Coord::X);
        }
        for _ in 0..q {
            e = e.partial(Coord::Y);
        }
        e
    }

    /// Replace leaves: `f` is consulted for every coordinate and symbol leaf.
    pub fn substitute(&self, f: &impl Fn(&Node) -> Option<Expr>) -> Expr {
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::X | Node::Y | Node::Sym(_) => f(self.node()).unwrap_or_else(|| self.clone()),
            Node::Add(items) => Expr::add(items.iter().map(|i| i.substitute(f)).collect()),
            Node::Mul(items) => Expr::mul(items.iter().map(|i| i.substitute(f)).collect()),
            Node::Neg(a) => a.substitute(f).neg(),
            Node::Div(a, b) => Expr::div(a.substitute(f), b.substitute(f)),
            Node::Pow(b, k) => Expr::pow(b.substitute(f), *k),
            Node::Func(g, a) => Expr::func(*g, a.substitute(f)),
        }
    }

    /// Substitute expressions for the coordinates `x` and `y`.
    pub fn substitute_xy(&self, ex: &Expr, ey: &Expr) -> Expr {
        self.substitute(&|n| match n {
            Node::X => Some(ex.clone()),
            Node::Y => Some(ey.clone()),
            _ => None,
        })
    }

    /// Canonical rational-function normal form.
    pub fn normalize(&self) -> Result<RatFunc, NormalizeError> {
        Ok(match self.node() {
            Node::Const(r) => RatFunc::rational(r),
            Node::X => RatFunc::x(),
            Node::Y => RatFunc::y(),
            Node::Sym(s) => RatFunc::symbol(s),
            Node::Add(items) => {
                let mut acc = RatFunc::zero();
                for i in items {
                    acc = acc + i.normalize()?;
                }
                acc
            }
            Node::Mul(items) => {
                let mut acc = RatFunc::one();
                for i in items {
                    acc = acc * i.normalize()?;
                }
                acc
            }
            Node::Neg(a) => -a.normalize()?,
            Node::Div(a, b) => {
                let d = b.normalize()?;
                let inv = d
                    .inv()
                    .ok_or_else(|| NormalizeError::DivisionByZero(b.to_string()))?;
                a.normalize()? * inv
            }
            Node::Pow(b, k) => b
                .normalize()?
                .powi(*k)
                .ok_or_else(|| NormalizeError::DivisionByZero(b.to_string()))?,
            Node::Func(f, a) => RatFunc::func(*f, a.normalize()?),
        })
    }

    /// Non-constant divisors appearing anywhere in the tree. The normal form
    /// is only valid where none of them vanishes.
    pub fn divisors(&self) -> Vec<Expr> {
        let mut out = Vec::new();
        self.collect_divisors(&mut out);
        out
    }

    fn collect_divisors(&self, out: &mut Vec<Expr>) {
        match self.node() {
            Node::Const(_) | Node::X | Node::Y | Node::Sym(_) => {}
            Node::Add(items) | Node::Mul(items) => {
                for i in items {
                    i.collect_divisors(out);
                }
            }
            Node::Neg(a) | Node::Func(_, a) => a.collect_divisors(out),
            Node::Div(a, b) => {
                a.collect_divisors(out);
                b.collect_divisors(out);
                if b.as_const().is_none() && !out.contains(b) {
                    out.push(b.clone());
                }
            }
            Node::Pow(b, k) => {
                b.collect_divisors(out);
                if *k < 0 && b.as_const().is_none() && !out.contains(b) {
                    out.push(b.clone());
                }
            }
        }
    }

    /// True if the tree contains an elementary function application.
    pub fn has_funcs(&self) -> bool {
        match self.node() {
            Node::Func(..) => true,
            Node::Const(_) | Node::X | Node::Y | Node::Sym(_) => false,
            Node::Add(items) | Node::Mul(items) => items.iter().any(Expr::has_funcs),
            Node::Neg(a) | Node::Pow(a, _) => a.has_funcs(),
            Node::Div(a, b) => a.has_funcs() || b.has_funcs(),
        }
    }

    /// Opaque symbols occurring in the tree.
    pub fn symbols(&self) -> Vec<Symbol> {
        fn walk(e: &Expr, out: &mut Vec<Symbol>) {
            match e.node() {
                Node::Sym(s) => {
                    if !out.contains(s) {
                        out.push(s.clone())
                    }
                }
                Node::Const(_) | Node::X | Node::Y => {}
                Node::Add(items) | Node::Mul(items) => items.iter().for_each(|i| walk(i, out)),
                Node::Neg(a) | Node::Pow(a, _) | Node::Func(_, a) => walk(a, out),
                Node::Div(a, b) => {
                    walk(a, out);
                    walk(b, out)
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out
    }

    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Add(_) => 1,
            Node::Neg(_) => 2,
            Node::Const(r) if r.is_negative() => 2,
            Node::Mul(_) | Node::Div(..) => 3,
            Node::Const(r) if !r.is_integer() => 3,
            Node::Pow(..) => 4,
            _ => 5,
        }
    }
}

impl From<&RatFunc> for Expr {
    fn from(r: &RatFunc) -> Expr {
        if let Some(k) = r.denom().as_constant() {
            return poly_expr(r.numer(), &k);
        }
        let one = BigInt::one();
        Expr::div(poly_expr(r.numer(), &one), poly_expr(r.denom(), &one))
    }
}

impl From<RatFunc> for Expr {
    fn from(r: RatFunc) -> Expr {
        Expr::from(&r)
    }
}

fn atom_expr(a: AtomId) -> Expr {
    match a.key() {
        AtomKey::X => Expr::x(),
        AtomKey::Y => Expr::y(),
        AtomKey::Sym(s) => Expr::symbol(s),
        AtomKey::Func(..) => {
            let (f, arg) = a.func_arg().expect("function atom has argument");
            Expr::func(f, Expr::from(&arg))
        }
    }
}

fn poly_expr(p: &Poly, k: &BigInt) -> Expr {
    let mut terms = Vec::new();
    for (m, c) in super::ratfunc::canonical_terms(p) {
        let r = Rational::new(c, k.clone());
        let mut pairs = m.pairs().to_vec();
        pairs.sort_by(|a, b| super::atom::canonical_cmp(a.0, b.0));
        let mut factors: Vec<Expr> = pairs
            .into_iter()
            .map(|(v, e)| Expr::pow(atom_expr(v), e as i32))
            .collect();
        let neg = r.is_negative();
        factors.insert(0, Expr::rational(r.abs()));
        let t = Expr::mul(factors);
        terms.push(if neg { t.neg() } else { t });
    }
    Expr::add(terms)
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(r) => write!(f, "{r}"),
            Node::X => f.write_str("x"),
            Node::Y => f.write_str("y"),
            Node::Sym(s) => write!(f, "{s}"),
            Node::Add(items) => {
                for (i, t) in items.iter().enumerate() {
                    if i == 0 {
                        write_child(f, t, 2)?;
                        continue;
                    }
                    match t.node() {
                        Node::Neg(inner) => {
                            f.write_str(" - ")?;
                            write_child(f, inner, 2)?;
                        }
                        Node::Const(r) if r.is_negative() => write!(f, " - {}", -r.clone())?,
                        _ => {
                            f.write_str(" + ")?;
                            write_child(f, t, 2)?;
                        }
                    }
                }
                Ok(())
            }
            Node::Mul(items) => {
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write_child(f, t, if i == 0 { 2 } else { 3 })?;
                }
                Ok(())
            }
            Node::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, 3)
            }
            Node::Div(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("/")?;
                write_child(f, b, 4)
            }
            Node::Pow(b, k) => {
                write_child(f, b, 5)?;
                write!(f, "^{k}")
            }
            Node::Func(g, a) => write!(f, "{g}({a})"),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse::parse;

    #[test]
    fn printing_round_trips_through_parser() {
        for src in [
            "x^2 - 3*y + 1/2",
            "-(x + y)^-2*sin(x*y)",
            "(x - 1)/(y*(x + 2))",
            "B_{1.0}*A - 2/3*x",
            "x/(2/3)",
            "(-x)^3",
        ] {
            let e = parse(src).unwrap();
            let back = parse(&e.to_string()).unwrap();
            assert_eq!(e.normalize().unwrap(), back.normalize().unwrap(), "{src} -> {e}");
        }
    }

    #[test]
    fn tree_derivative_matches_normal_form_derivative() {
        let e = parse("x^3*y/(1 + x*y) - B*y^2").unwrap();
        let a = e.partial(Coord::X).normalize().unwrap();
        let b = e.normalize().unwrap().partial(Coord::X);
        assert_eq!(a, b);
    }

    #[test]
    fn divisors_are_reported() {
        let e = parse("x/x + 1/(y - 1)").unwrap();
        let ds: Vec<String> = e.divisors().iter().map(|d| d.to_string()).collect();
        assert_eq!(ds, vec!["x", "y - 1"]);
    }

    #[test]
    fn division_by_identical_zero_is_an_error() {
        let e = parse("1/(x - x)").unwrap();
        assert!(matches!(e.normalize(), Err(NormalizeError::DivisionByZero(_))));
    }

    #[test]
    fn rational_function_converts_to_tree() {
        let r = parse("(x^2 - 1)/(2*x + 2)").unwrap().normalize().unwrap();
        let e = Expr::from(&r);
        assert_eq!(e.to_string(), "1/2*x - 1/2");
        assert_eq!(e.normalize().unwrap(), r);
    }
}
