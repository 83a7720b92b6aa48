//! Truncated bivariate Taylor series.
//!
//! A [`Jet`] of order `N` holds the Taylor coefficients of a function of
//! `(x, y)` around a fixed point up to total degree `N`. Differentiation
//! lowers the order by one, so a jet of order `N` supports `N` successive
//! partial derivatives. Jets implement [`Scalar`], which lets a rational
//! function be expanded at a point by ordinary evaluation.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::expr::{Coord, Func};
use crate::scalar::{Field, Rational, Scalar};

/// Truncated Taylor series in the offsets `(ξ, η)` from a base point.
///
/// Coefficients are stored by total degree, so truncating to a lower order
/// keeps a prefix. Constants carry no order and combine with jets of any
/// order.
#[derive(Clone, Debug)]
pub struct Jet<T> {
    order: Option<u32>,
    c: Vec<T>,
}

fn len(order: u32) -> usize {
    let n = order as usize;
    (n + 1) * (n + 2) / 2
}

fn idx(i: u32, j: u32) -> usize {
    let k = (i + j) as usize;
    k * (k + 1) / 2 + j as usize
}

/// Exponent pair of each storage slot, up to the given order.
fn exponents(order: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(len(order));
    for k in 0..=order {
        for j in 0..=k {
            out.push((k - j, j));
        }
    }
    out
}

fn min_order(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

impl<T: Scalar> Jet<T> {
    pub fn constant(v: T) -> Jet<T> {
        Jet {
            order: None,
            c: vec![v],
        }
    }

    /// The coordinate function `at + ξ` (or `at + η`) to the given order.
    pub fn variable(at: T, coord: Coord, order: u32) -> Jet<T> {
        let mut c = vec![T::zero(); len(order)];
        c[0] = at;
        if order > 0 {
            let k = match coord {
                Coord::X => idx(1, 0),
                Coord::Y => idx(0, 1),
            };
            c[k] = T::one();
        }
        Jet {
            order: Some(order),
            c,
        }
    }

    /// Jets of the two coordinate functions at a point.
    pub fn point(x: T, y: T, order: u32) -> (Jet<T>, Jet<T>) {
        (
            Jet::variable(x, Coord::X, order),
            Jet::variable(y, Coord::Y, order),
        )
    }

    /// `None` for constants.
    pub fn order(&self) -> Option<u32> {
        self.order
    }

    /// The value at the base point.
    pub fn value(&self) -> &T {
        &self.c[0]
    }

    /// Taylor coefficient of `ξ^i η^j`.
    pub fn coeff(&self, i: u32, j: u32) -> T {
        self.c.get(idx(i, j)).cloned().unwrap_or_else(T::zero)
    }

    /// `∂^{p+q} / ∂x^p ∂y^q` at the base point.
    pub fn derivative_value(&self, p: u32, q: u32) -> T {
        let mut f = T::one();
        for k in 2..=p {
            f = f * T::from_rational(&Rational::from_integer(k.into()));
        }
        for k in 2..=q {
            f = f * T::from_rational(&Rational::from_integer(k.into()));
        }
        self.coeff(p, q) * f
    }

    fn expand(&self, order: u32) -> Vec<T> {
        let n = len(order);
        let mut v: Vec<T> = self.c.iter().take(n).cloned().collect();
        v.resize(n, T::zero());
        v
    }

    fn zip(&self, o: &Jet<T>, f: impl Fn(T, T) -> T) -> Jet<T> {
        match min_order(self.order, o.order) {
            None => Jet::constant(f(self.c[0].clone(), o.c[0].clone())),
            Some(n) => {
                let a = self.expand(n);
                let b = o.expand(n);
                Jet {
                    order: Some(n),
                    c: a.into_iter().zip(b).map(|(a, b)| f(a, b)).collect(),
                }
            }
        }
    }

    fn map(&self, f: impl Fn(&T) -> T) -> Jet<T> {
        Jet {
            order: self.order,
            c: self.c.iter().map(f).collect(),
        }
    }

    fn mul_jet(&self, o: &Jet<T>) -> Jet<T> {
        let Some(n) = min_order(self.order, o.order) else {
            return Jet::constant(self.c[0].clone() * o.c[0].clone());
        };
        if self.order.is_none() {
            let k = self.c[0].clone();
            return Jet {
                order: Some(n),
                c: o.expand(n).into_iter().map(|v| k.clone() * v).collect(),
            };
        }
        if o.order.is_none() {
            let k = o.c[0].clone();
            return Jet {
                order: Some(n),
                c: self.expand(n).into_iter().map(|v| v * k.clone()).collect(),
            };
        }
        let a = self.expand(n);
        let b = o.expand(n);
        let ex = exponents(n);
        let mut out = vec![T::zero(); len(n)];
        for (ia, av) in a.iter().enumerate() {
            if av.is_zero() {
                continue;
            }
            let (ai, aj) = ex[ia];
            let room = n - ai - aj;
            for (ib, bv) in b[..len(room)].iter().enumerate() {
                if bv.is_zero() {
                    continue;
                }
                let (bi, bj) = ex[ib];
                let k = idx(ai + bi, aj + bj);
                out[k] = out[k].clone() + av.clone() * bv.clone();
            }
        }
        Jet {
            order: Some(n),
            c: out,
        }
    }

    /// The series with its constant term removed.
    fn tail(&self) -> Jet<T> {
        let mut t = self.clone();
        t.c[0] = T::zero();
        t
    }

    /// `Σ_{k=0}^{N} w_k h^k` for a series `h` without constant term.
    fn power_series(h: &Jet<T>, weights: impl Fn(u32) -> T) -> Jet<T> {
        let n = h.order.unwrap_or(0);
        let mut acc = Jet::constant(weights(0));
        let mut p = Jet::constant(T::one());
        for k in 1..=n {
            p = p.mul_jet(h);
            let w = weights(k);
            if !w.is_zero() {
                acc = acc.zip(&p.map(|v| w.clone() * v.clone()), |a, b| a + b);
            }
        }
        acc
    }

    /// Multiplicative inverse; `None` if the value at the base point is zero.
    pub fn recip(&self) -> Option<Jet<T>> {
        let u0 = self.c[0].clone();
        if !u0.is_unit() {
            return None;
        }
        let inv0 = T::one() / u0;
        if self.order.is_none() {
            return Some(Jet::constant(inv0));
        }
        // 1/u = (1/u0) Σ (-h/u0)^k
        let h = self.tail().map(|v| -(v.clone() * inv0.clone()));
        let s = Jet::power_series(&h, |_| T::one());
        Some(s.map(|v| v.clone() * inv0.clone()))
    }

    /// Partial derivative; the order drops by one.
    ///
    /// Panics on a jet of order zero, which has no derivative information
    /// left.
    pub fn derivative(&self, c: Coord) -> Jet<T> {
        let Some(n) = self.order else {
            return Jet::constant(T::zero());
        };
        assert!(n > 0, "jet order exhausted by differentiation");
        let m = n - 1;
        let mut out = Vec::with_capacity(len(m));
        for (i, j) in exponents(m) {
            let (k, src) = match c {
                Coord::X => (i + 1, idx(i + 1, j)),
                Coord::Y => (j + 1, idx(i, j + 1)),
            };
            out.push(self.c[src].clone() * T::from_rational(&Rational::from_integer(k.into())));
        }
        Jet {
            order: Some(m),
            c: out,
        }
    }

    fn factorial_recip(k: u32) -> T {
        let mut f = num_bigint::BigInt::one();
        for i in 2..=k {
            f *= i;
        }
        T::from_rational(&Rational::new(1.into(), f))
    }
}

impl<T: Scalar> PartialEq for Jet<T> {
    fn eq(&self, o: &Jet<T>) -> bool {
        match min_order(self.order, o.order) {
            None => self.c[0] == o.c[0],
            Some(n) => self.expand(n) == o.expand(n),
        }
    }
}

impl<T: Scalar> Zero for Jet<T> {
    fn zero() -> Self {
        Jet::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(T::is_zero)
    }
}

impl<T: Scalar> One for Jet<T> {
    fn one() -> Self {
        Jet::constant(T::one())
    }
}

impl<T: Scalar> Add for Jet<T> {
    type Output = Jet<T>;
    fn add(self, o: Jet<T>) -> Jet<T> {
        self.zip(&o, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for Jet<T> {
    type Output = Jet<T>;
    fn sub(self, o: Jet<T>) -> Jet<T> {
        self.zip(&o, |a, b| a - b)
    }
}

impl<T: Scalar> Mul for Jet<T> {
    type Output = Jet<T>;
    fn mul(self, o: Jet<T>) -> Jet<T> {
        self.mul_jet(&o)
    }
}

impl<T: Scalar> Div for Jet<T> {
    type Output = Jet<T>;
    /// Panics if the divisor vanishes at the base point.
    fn div(self, o: Jet<T>) -> Jet<T> {
        self.mul_jet(&o.recip().expect("jet division by a non-unit"))
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.map(|v| -v.clone())
    }
}

impl<T: Scalar> Scalar for Jet<T> {
    const EXACT: bool = T::EXACT;

    fn from_rational(r: &Rational) -> Self {
        Jet::constant(T::from_rational(r))
    }

    fn elementary(f: Func, v: &Self) -> Option<Self> {
        let u0 = v.c[0].clone();
        if v.order.is_none() {
            return T::elementary(f, &u0).map(Jet::constant);
        }
        let h = v.tail();
        let fact = Self::factorial_recip;
        let out = match f {
            Func::Exp => {
                let e0 = T::elementary(Func::Exp, &u0)?;
                Jet::power_series(&h, fact).map(|c| e0.clone() * c.clone())
            }
            Func::Sin | Func::Cos => {
                let s0 = T::elementary(Func::Sin, &u0)?;
                let c0 = T::elementary(Func::Cos, &u0)?;
                let sign = |k: u32| if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
                let cs = Jet::power_series(&h, |k| {
                    if k % 2 == 0 {
                        sign(k) * fact(k)
                    } else {
                        T::zero()
                    }
                });
                let sn = Jet::power_series(&h, |k| {
                    if k % 2 == 1 {
                        sign(k) * fact(k)
                    } else {
                        T::zero()
                    }
                });
                let s0j = Jet::constant(s0);
                let c0j = Jet::constant(c0);
                if f == Func::Sin {
                    s0j.clone() * cs + c0j * sn
                } else {
                    c0j * cs - s0j * sn
                }
            }
            Func::Ln => {
                let l0 = T::elementary(Func::Ln, &u0)?;
                let w = h.map(|c| c.clone() / u0.clone());
                let s = Jet::power_series(&w, |k| {
                    if k == 0 {
                        return T::zero();
                    }
                    let r = Rational::new(if k % 2 == 1 { 1 } else { -1 }.into(), k.into());
                    T::from_rational(&r)
                });
                Jet::constant(l0) + s
            }
        };
        Some(out)
    }

    fn to_f64(&self) -> f64 {
        self.c[0].to_f64()
    }

    fn is_finite(&self) -> bool {
        self.c.iter().all(T::is_finite)
    }

    fn is_unit(&self) -> bool {
        self.c[0].is_unit()
    }
}

impl<T: Scalar> Field for Jet<T> {
    fn from_rational(r: &Rational) -> Self {
        Jet::constant(<T as Scalar>::from_rational(r))
    }

    fn inv(&self) -> Option<Self> {
        self.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn product_and_derivatives() {
        let (x, y) = Jet::point(q(1, 2), q(-1, 3), 4);
        // x^2 y at (1/2, -1/3)
        let f = x.clone() * x.clone() * y.clone();
        assert_eq!(*f.value(), q(-1, 12));
        assert_eq!(f.derivative_value(1, 0), q(-1, 3));
        assert_eq!(f.derivative_value(1, 1), q(1, 1));
        assert_eq!(f.derivative_value(2, 1), q(2, 1));
        assert_eq!(f.derivative_value(3, 0), q(0, 1));
        let d = f.derivative(Coord::X).derivative(Coord::Y);
        assert_eq!(d.order(), Some(2));
        assert_eq!(*d.value(), q(1, 1));
    }

    #[test]
    fn reciprocal_series() {
        let (x, _) = Jet::point(q(2, 1), q(0, 1), 5);
        let r = x.recip().unwrap();
        // d^k/dx^k (1/x) = (-1)^k k! / x^{k+1}
        assert_eq!(r.derivative_value(3, 0), q(-6, 16));
        assert_eq!((r * x).coeff(2, 0), q(0, 1));
    }

    #[test]
    fn elementary_series_match_derivatives() {
        let (x, y) = Jet::point(0.3f64, -0.2, 4);
        let u = x.clone() * y.clone() + x.clone();
        let e = <Jet<f64> as Scalar>::elementary(Func::Exp, &u).unwrap();
        // ∂x exp(u) = exp(u) (y + 1)
        let want = (0.3f64 * -0.2 + 0.3).exp() * 0.8;
        assert!((e.derivative_value(1, 0) - want).abs() < 1e-12);
        let s = <Jet<f64> as Scalar>::elementary(Func::Sin, &x).unwrap();
        assert!((s.derivative_value(3, 0) + 0.3f64.cos()).abs() < 1e-12);
        let c = <Jet<f64> as Scalar>::elementary(Func::Cos, &x).unwrap();
        assert!((c.derivative_value(2, 0) + 0.3f64.cos()).abs() < 1e-12);
        let l = <Jet<f64> as Scalar>::elementary(Func::Ln, &x).unwrap();
        assert!((l.derivative_value(2, 0) + 1.0 / 0.09).abs() < 1e-9);
    }

    #[test]
    fn exact_jets_refuse_irrational_values() {
        let (x, _) = Jet::point(q(1, 2), q(0, 1), 2);
        assert!(<Jet<Rational> as Scalar>::elementary(Func::Exp, &x).is_none());
    }
}
