//! Normalized rational functions: the canonical form used for zero testing.
//!
//! A [`RatFunc`] is `num / den` with integer polynomial numerator and
//! denominator over the atoms, cancelled to coprimality (integer content
//! included), and with the denominator's canonically-leading coefficient
//! positive. Two rational functions with no function atoms are equal exactly
//! when their normal forms are identical.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::atom::{canonical_ranks, AtomId, AtomKey, Func, Symbol};
use super::eval::{Env, EvalError};
use super::gcd::gcd;
use super::poly::{MPoly, Monomial};
use crate::scalar::{Field, Rational, Scalar};

/// Integer-coefficient polynomial over atoms.
pub type Poly = MPoly<BigInt>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Which coordinate to differentiate by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    X,
    Y,
}

impl Coord {
    pub fn atom(self) -> AtomId {
        match self {
            Coord::X => AtomId::X,
            Coord::Y => AtomId::Y,
        }
    }
}

fn canonical_key(m: &Monomial, ranks: &HashMap<AtomId, usize>) -> Vec<(usize, u32)> {
    let mut k: Vec<(usize, u32)> = m.pairs().iter().map(|&(v, e)| (ranks[&v], e)).collect();
    k.sort_unstable();
    k
}

fn canonical_monomial_cmp(a: &[(usize, u32)], b: &[(usize, u32)]) -> Ordering {
    for i in 0.. {
        match (a.get(i), b.get(i)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => {
                if va == vb {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                } else {
                    return vb.cmp(&va);
                }
            }
        }
    }
    unreachable!()
}

/// Terms of `p` in descending canonical order.
pub(crate) fn canonical_terms(p: &Poly) -> Vec<(Monomial, BigInt)> {
    let atoms: Vec<AtomId> = p.atoms().into_iter().collect();
    let monotone = atoms.len() <= 1
        || atoms
            .windows(2)
            .all(|w| super::atom::canonical_cmp(w[0], w[1]) == Ordering::Less);
    if monotone {
        return p.terms().to_vec();
    }
    let ranks = canonical_ranks(&atoms);
    let mut keyed: Vec<(Vec<(usize, u32)>, &(Monomial, BigInt))> = p
        .terms()
        .iter()
        .map(|t| (canonical_key(&t.0, &ranks), t))
        .collect();
    keyed.sort_by(|a, b| canonical_monomial_cmp(&b.0, &a.0));
    keyed.into_iter().map(|(_, t)| t.clone()).collect()
}

fn canonical_lead_negative(p: &Poly) -> bool {
    if p.len() <= 1 {
        return p.lead_coeff().is_negative();
    }
    canonical_terms(p)
        .first()
        .map(|t| t.1.is_negative())
        .unwrap_or(false)
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn x() -> RatFunc {
        RatFunc::from_poly(Poly::atom(AtomId::X))
    }

    pub fn y() -> RatFunc {
        RatFunc::from_poly(Poly::atom(AtomId::Y))
    }

    pub fn atom(a: AtomId) -> RatFunc {
        RatFunc::from_poly(Poly::atom(a))
    }

    pub fn symbol(s: &Symbol) -> RatFunc {
        RatFunc::atom(AtomId::symbol(s))
    }

    pub fn int(n: i64) -> RatFunc {
        RatFunc::from_poly(Poly::constant(BigInt::from(n)))
    }

    pub fn rational(r: &Rational) -> RatFunc {
        RatFunc::new_unchecked(Poly::constant(r.numer().clone()), Poly::constant(r.denom().clone()))
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    /// Function atom `func(arg)`, folding the exactly known values at 0 and 1.
    pub fn func(func: Func, arg: RatFunc) -> RatFunc {
        if let Some(c) = arg.as_rational() {
            if let Some(v) = <Rational as Scalar>::elementary(func, &c) {
                return RatFunc::rational(&v);
            }
        }
        RatFunc::atom(AtomId::func(func, arg))
    }

    /// `num / den` in normal form; `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<RatFunc> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc::zero());
        }
        if den.is_one() {
            return Some(RatFunc::from_poly(num));
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            return Some(RatFunc::new_unchecked(num, den));
        }
        Some(RatFunc::new_unchecked(
            num.div_exact(&g).expect("gcd divides"),
            den.div_exact(&g).expect("gcd divides"),
        ))
    }

    /// Build from an already coprime pair, fixing only the sign convention.
    fn new_unchecked(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if canonical_lead_negative(&den) {
            RatFunc {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            RatFunc { num, den }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(Rational::new(n, d))
    }

    pub fn atoms(&self) -> std::collections::BTreeSet<AtomId> {
        let mut s = self.num.atoms();
        s.extend(self.den.atoms());
        s
    }

    pub fn contains_atom(&self, a: AtomId) -> bool {
        self.num.contains_atom(a) || self.den.contains_atom(a)
    }

    /// True if any function atom (`sin`, `exp`, ...) occurs.
    pub fn has_func_atoms(&self) -> bool {
        self.atoms().into_iter().any(|a| a.is_func())
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for a in self.atoms() {
            match a.key() {
                AtomKey::Sym(s) => out.push(s),
                AtomKey::Func(..) => {
                    if let Some((_, arg)) = a.func_arg() {
                        out.extend(arg.symbols());
                    }
                }
                _ => {}
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new_unchecked(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, n: u32) -> RatFunc {
        RatFunc::new_unchecked(self.num.pow(n), self.den.pow(n))
    }

    pub fn powi(&self, n: i32) -> Option<RatFunc> {
        if n >= 0 {
            Some(self.pow(n as u32))
        } else {
            Some(self.inv()?.pow(n.unsigned_abs()))
        }
    }

    fn add_impl(&self, other: &RatFunc, negate: bool) -> RatFunc {
        let c = if negate { other.num.neg() } else { other.num.clone() };
        let (a, b, d) = (&self.num, &self.den, &other.den);
        if self.is_zero() {
            return RatFunc {
                num: c,
                den: d.clone(),
            };
        }
        if other.is_zero() {
            return self.clone();
        }
        if b == d {
            let n = a.add(&c);
            if b.is_one() {
                return RatFunc::from_poly(n);
            }
            return RatFunc::new(n, b.clone()).expect("nonzero denominator");
        }
        if b.is_one() {
            return RatFunc {
                num: a.mul(d).add(&c),
                den: d.clone(),
            };
        }
        if d.is_one() {
            return RatFunc {
                num: a.add(&c.mul(b)),
                den: b.clone(),
            };
        }
        let g = gcd(b, d);
        if g.is_one() {
            let n = a.mul(d).add(&c.mul(b));
            return RatFunc::new_unchecked(n, b.mul(d));
        }
        let b1 = b.div_exact(&g).expect("gcd divides");
        let d1 = d.div_exact(&g).expect("gcd divides");
        let n = a.mul(&d1).add(&c.mul(&b1));
        if n.is_zero() {
            return RatFunc::zero();
        }
        let g2 = gcd(&n, &g);
        if g2.is_one() {
            return RatFunc::new_unchecked(n, b1.mul(d));
        }
        RatFunc::new_unchecked(
            n.div_exact(&g2).expect("gcd divides"),
            b1.mul(&d.div_exact(&g2).expect("gcd divides")),
        )
    }

    fn mul_impl(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        let (a, b, c, d) = (&self.num, &self.den, &other.num, &other.den);
        if b.is_one() && d.is_one() {
            return RatFunc::from_poly(a.mul(c));
        }
        let g1 = gcd(a, d);
        let g2 = gcd(c, b);
        let (a1, d1) = if g1.is_one() {
            (a.clone(), d.clone())
        } else {
            (a.div_exact(&g1).unwrap(), d.div_exact(&g1).unwrap())
        };
        let (c1, b1) = if g2.is_one() {
            (c.clone(), b.clone())
        } else {
            (c.div_exact(&g2).unwrap(), b.div_exact(&g2).unwrap())
        };
        RatFunc::new_unchecked(a1.mul(&c1), b1.mul(&d1))
    }

    /// Partial derivative with respect to a coordinate.
    pub fn partial(&self, c: Coord) -> RatFunc {
        self.derive(&|a| atom_derivative(a, c))
    }

    /// `∂^{p+q} / ∂x^p ∂y^q`.
    pub fn partial_n(&self, p: u32, q: u32) -> RatFunc {
        let mut r = self.clone();
        for _ in 0..p {
            r = r.partial(Coord::X);
        }
        for _ in 0..q {
            r = r.partial(Coord::Y);
        }
        r
    }

    /// Derivative of a polynomial given the derivative of each atom.
    pub fn derive_poly(p: &Poly, datom: &impl Fn(AtomId) -> Option<RatFunc>) -> RatFunc {
        let mut poly_part = Poly::zero();
        let mut rat_part = RatFunc::zero();
        for a in p.atoms() {
            let Some(da) = datom(a) else { continue };
            if da.is_zero() {
                continue;
            }
            let dp = p.derivative(a);
            if da.is_polynomial() && da.den.is_one() {
                poly_part = poly_part.add(&dp.mul(&da.num));
            } else {
                rat_part = rat_part + RatFunc::from_poly(dp) * da;
            }
        }
        RatFunc::from_poly(poly_part) + rat_part
    }

    /// Derivative of the rational function given each atom's derivative
    /// (`None` meaning zero).
    pub fn derive(&self, datom: &impl Fn(AtomId) -> Option<RatFunc>) -> RatFunc {
        let dn = RatFunc::derive_poly(&self.num, datom);
        if self.den.is_constant() {
            return dn * RatFunc::new_unchecked(Poly::one(), self.den.clone());
        }
        let dd = RatFunc::derive_poly(&self.den, datom);
        let d = RatFunc::new_unchecked(Poly::one(), self.den.clone());
        // (n/d)' = (n' - (n/d) d') / d
        (dn - RatFunc::new_unchecked(self.num.clone(), self.den.clone()) * dd) * d
    }

    /// Simultaneous substitution of atoms. `None` if a denominator vanishes.
    ///
    /// Function atoms whose argument changes under the substitution are
    /// rebuilt from the substituted argument.
    pub fn substitute(&self, f: &impl Fn(AtomId) -> Option<RatFunc>) -> Option<RatFunc> {
        let mut values: HashMap<AtomId, Option<RatFunc>> = HashMap::new();
        for a in self.atoms() {
            let v = match f(a) {
                Some(v) => Some(v),
                None => match a.func_arg() {
                    Some((func, arg)) => {
                        let na = arg.substitute(f)?;
                        (na != arg).then(|| RatFunc::func(func, na))
                    }
                    None => None,
                },
            };
            values.insert(a, v);
        }
        if values.values().all(|v| v.is_none()) {
            return Some(self.clone());
        }
        let n = subst_poly(&self.num, &values);
        let d = subst_poly(&self.den, &values);
        let d_inv = d.inv()?;
        Some(n * d_inv)
    }

    /// Evaluate at a point; errors on poles, unbound symbols and domain
    /// violations.
    pub fn eval<T: Scalar>(&self, env: &Env<'_, T>) -> Result<T, EvalError> {
        let mut cache: HashMap<AtomId, T> = HashMap::new();
        let n = eval_poly(&self.num, env, &mut cache)?;
        let d = eval_poly(&self.den, env, &mut cache)?;
        if !d.is_unit() {
            return Err(EvalError::Pole);
        }
        let v = n / d;
        if !v.is_finite() {
            return Err(EvalError::NonFinite);
        }
        Ok(v)
    }

    /// Divisors occurring in the normal form: the denominator, when it is
    /// not constant.
    pub fn nonconstant_denominator(&self) -> Option<RatFunc> {
        (!self.den.is_constant()).then(|| RatFunc::from_poly(self.den.clone()))
    }

    /// Degree-ordered coefficients of `self` viewed as a polynomial in `a`,
    /// provided `a` does not occur in the denominator.
    pub fn coefficients_in(&self, a: AtomId) -> Option<BTreeMap<u32, RatFunc>> {
        if self.den.contains_atom(a) {
            return None;
        }
        let inv = RatFunc::new_unchecked(Poly::one(), self.den.clone());
        Some(
            self.num
                .coefficients_in(a)
                .into_iter()
                .map(|(e, c)| (e, RatFunc::from_poly(c) * inv.clone()))
                .collect(),
        )
    }
}

fn subst_poly(p: &Poly, values: &HashMap<AtomId, Option<RatFunc>>) -> RatFunc {
    // Common denominator: each replaced atom's denominator raised to the
    // atom's maximal degree in `p`.
    let mut max_deg: BTreeMap<AtomId, u32> = BTreeMap::new();
    for (m, _) in p.terms() {
        for &(v, e) in m.pairs() {
            let d = max_deg.entry(v).or_insert(0);
            *d = (*d).max(e);
        }
    }
    let replaced: Vec<(AtomId, &RatFunc, u32)> = max_deg
        .iter()
        .filter_map(|(v, &md)| match values.get(v) {
            Some(Some(val)) => Some((*v, val, md)),
            _ => None,
        })
        .collect();
    let mut common = Poly::one();
    for (_, val, md) in &replaced {
        if !val.den.is_one() {
            common = common.mul(&val.den.pow(*md));
        }
    }
    let mut num_pow: HashMap<(AtomId, u32), Poly> = HashMap::new();
    let mut den_pow: HashMap<(AtomId, u32), Poly> = HashMap::new();
    let mut num = Poly::zero();
    for (m, c) in p.terms() {
        let mut t = Poly::constant(c.clone());
        let mut plain = Vec::new();
        for &(v, e) in m.pairs() {
            if !replaced.iter().any(|r| r.0 == v) {
                plain.push((v, e));
            }
        }
        for (v, val, md) in &replaced {
            let e = m.degree_of(*v);
            if e > 0 {
                let np = num_pow.entry((*v, e)).or_insert_with(|| val.num.pow(e));
                t = t.mul(np);
            }
            if !val.den.is_one() && *md > e {
                let dp = den_pow
                    .entry((*v, md - e))
                    .or_insert_with(|| val.den.pow(md - e));
                t = t.mul(dp);
            }
        }
        num = num.add(&t.mul_term(&Monomial::from_pairs(plain), &BigInt::one()));
    }
    RatFunc::new(num, common).expect("common denominator is nonzero")
}

fn eval_poly<T: Scalar>(
    p: &Poly,
    env: &Env<'_, T>,
    cache: &mut HashMap<AtomId, T>,
) -> Result<T, EvalError> {
    let mut acc = T::zero();
    for (m, c) in p.terms() {
        let mut t = T::from_bigint(c);
        for &(v, e) in m.pairs() {
            let val = match cache.get(&v) {
                Some(val) => val.clone(),
                None => {
                    let val = env.atom(v)?;
                    cache.insert(v, val.clone());
                    val
                }
            };
            t = t * val.powi(e);
        }
        acc = acc + t;
    }
    Ok(acc)
}

/// Derivative of an atom with respect to a coordinate, `None` meaning zero.
pub fn atom_derivative(a: AtomId, c: Coord) -> Option<RatFunc> {
    if a == AtomId::X {
        return (c == Coord::X).then(RatFunc::one);
    }
    if a == AtomId::Y {
        return (c == Coord::Y).then(RatFunc::one);
    }
    match a.key() {
        AtomKey::Sym(s) => {
            let (p, q) = match c {
                Coord::X => (1, 0),
                Coord::Y => (0, 1),
            };
            Some(RatFunc::symbol(&s.shifted(p, q)))
        }
        AtomKey::Func(..) => {
            let (func, arg) = a.func_arg().expect("function atom has argument");
            let du = arg.partial(c);
            if du.is_zero() {
                return None;
            }
            let outer = match func {
                Func::Sin => RatFunc::func(Func::Cos, arg),
                Func::Cos => -RatFunc::func(Func::Sin, arg),
                Func::Exp => RatFunc::atom(a),
                Func::Ln => arg.inv().expect("ln of zero"),
            };
            Some(outer * du)
        }
        _ => unreachable!(),
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        self.add_impl(&o, false)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self.add_impl(&o, true)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        self.mul_impl(&o)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`Field::div`] to check.
    fn div(self, o: RatFunc) -> RatFunc {
        self.mul_impl(&o.inv().expect("division by zero"))
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        self.add_impl(o, false)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self.add_impl(o, true)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        self.mul_impl(o)
    }
}

impl Field for RatFunc {
    fn from_rational(r: &Rational) -> Self {
        RatFunc::rational(r)
    }

    fn from_int(n: i64) -> Self {
        RatFunc::int(n)
    }

    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }

    fn pow(&self, n: u32) -> Self {
        RatFunc::pow(self, n)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut pairs: Vec<(AtomId, u32)> = m.pairs().to_vec();
    pairs.sort_by(|a, b| super::atom::canonical_cmp(a.0, b.0));
    for (i, (v, e)) in pairs.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        write!(f, "{v}")?;
        if *e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Write `p / k` for a positive integer `k` as a sum of terms.
fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, k: &BigInt) -> fmt::Result {
    let terms = canonical_terms(p);
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (m, c)) in terms.iter().enumerate() {
        let r = Rational::new(c.clone(), k.clone());
        let neg = r.is_negative();
        let a = r.abs();
        if i == 0 {
            if neg {
                f.write_str("-")?;
            }
        } else if neg {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        if m.is_one() {
            write!(f, "{a}")?;
        } else {
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write_monomial(f, m)?;
        }
    }
    Ok(())
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.den.as_constant() {
            return write_poly(f, &self.num, &k);
        }
        let one = BigInt::one();
        let wrap_num = self.num.len() > 1;
        if wrap_num {
            f.write_str("(")?;
        }
        write_poly(f, &self.num, &one)?;
        if wrap_num {
            f.write_str(")")?;
        }
        f.write_str("/(")?;
        write_poly(f, &self.den, &one)?;
        f.write_str(")")
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RatFunc {
        RatFunc::x()
    }
    fn y() -> RatFunc {
        RatFunc::y()
    }
    fn k(n: i64) -> RatFunc {
        RatFunc::int(n)
    }

    #[test]
    fn cancellation_to_normal_form() {
        let a = (x() * x() - k(1)) / (x() - k(1));
        assert_eq!(a, x() + k(1));
        assert!((x() / x() - k(1)).is_zero());
        let h = k(1) / (x() + y()) - k(1) / (x() - y());
        let expected = (k(-2) * y()) / (x() * x() - y() * y());
        assert_eq!(h, expected);
    }

    #[test]
    fn denominator_sign_convention() {
        let a = k(1) / (k(-2) * x() + y());
        assert!(!a.denom().lead_coeff().is_negative());
        assert_eq!(a.to_string(), "-1/(2*x - y)");
    }

    #[test]
    fn printing() {
        let p = k(3) * x() * x() - y() / k(2) + k(1);
        assert_eq!(p.to_string(), "3*x^2 - 1/2*y + 1");
        let b = RatFunc::symbol(&Symbol::with_index("B", 1, 0));
        assert_eq!((b.clone() * x()).to_string(), "x*B_{1.0}");
        assert_eq!(((x() + k(1)) / (y() * b)).to_string(), "(x + 1)/(y*B_{1.0})");
    }

    #[test]
    fn quotient_rule() {
        let f = (x() * y() + k(1)) / (x() * x() + y());
        let d = f.partial(Coord::X);
        let expected = (y() * (x() * x() + y()) - (x() * y() + k(1)) * k(2) * x())
            / ((x() * x() + y()) * (x() * x() + y()));
        assert_eq!(d, expected);
    }

    #[test]
    fn opaque_symbol_derivatives_commute() {
        let b = RatFunc::symbol(&Symbol::new("B"));
        let e = b.clone() * b.clone() * x() / (b + y());
        assert_eq!(
            e.partial(Coord::X).partial(Coord::Y),
            e.partial(Coord::Y).partial(Coord::X)
        );
    }

    #[test]
    fn substitution_with_rational_values() {
        let e = x() * x() + y();
        let s = e
            .substitute(&|a| (a == AtomId::X).then(|| k(1) / (y() + k(1))))
            .unwrap();
        assert_eq!(s, k(1) / ((y() + k(1)) * (y() + k(1))) + y());
        let r = (k(1) / x()).substitute(&|a| (a == AtomId::X).then(RatFunc::zero));
        assert!(r.is_none());
    }

    #[test]
    fn function_atom_derivatives() {
        let s = RatFunc::func(Func::Sin, x() * y());
        let d = s.partial(Coord::X);
        assert_eq!(d, y() * RatFunc::func(Func::Cos, x() * y()));
        let l = RatFunc::func(Func::Ln, x());
        assert_eq!(l.partial(Coord::X), k(1) / x());
        assert_eq!(RatFunc::func(Func::Exp, k(0)), k(1));
    }
}
