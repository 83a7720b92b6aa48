//! Numeric scalars for evaluation and the field abstraction used by the
//! invariant formulas.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use twofloat::TwoFloat;

use crate::expr::Func;

/// Exact rational numbers.
pub type Rational = BigRational;

/// A number type expressions can be evaluated in.
///
/// `f64` evaluates everything approximately; [`Rational`] evaluates exactly
/// and refuses elementary functions whose value is irrational.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn from_bigint(i: &BigInt) -> Self {
        Self::from_rational(&Rational::from_integer(i.clone()))
    }

    /// `None` if the value is outside the function's domain or cannot be
    /// represented in this scalar type.
    fn elementary(f: Func, v: &Self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// The exact value, for exact scalar types.
    fn to_rational(&self) -> Option<Rational> {
        None
    }

    fn is_finite(&self) -> bool {
        true
    }

    /// Whether division by this value is defined.
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn powi(&self, n: u32) -> Self {
        num_traits::pow(self.clone(), n as usize)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn elementary(f: Func, v: &Self) -> Option<Self> {
        if f == Func::Ln && *v <= 0.0 {
            return None;
        }
        Some(f.apply_f64(*v))
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn powi(&self, n: u32) -> Self {
        f64::powi(*self, n as i32)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn elementary(f: Func, v: &Self) -> Option<Self> {
        match f {
            Func::Sin if v.is_zero() => Some(Rational::zero()),
            Func::Cos | Func::Exp if v.is_zero() => Some(Rational::one()),
            Func::Ln if v.is_one() => Some(Rational::zero()),
            _ => None,
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Double-double floats, for numeric checks that lose too many digits in
/// `f64`.
impl Scalar for TwoFloat {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        let split = |n: &BigInt| {
            let hi = ToPrimitive::to_f64(n).unwrap_or(f64::NAN);
            let rest = num_traits::FromPrimitive::from_f64(hi).map(|h: BigInt| n - h);
            let lo = rest.and_then(|r| ToPrimitive::to_f64(&r)).unwrap_or(0.0);
            TwoFloat::new_add(hi, lo)
        };
        split(r.numer()) / split(r.denom())
    }

    fn elementary(f: Func, v: &Self) -> Option<Self> {
        Some(match f {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Ln if v.hi() > 0.0 => v.ln(),
            Func::Ln => return None,
        })
    }

    fn to_f64(&self) -> f64 {
        self.hi() + self.lo()
    }

    fn is_finite(&self) -> bool {
        self.hi().is_finite() && self.lo().is_finite()
    }
}

/// Field operations needed by the invariant formulas.
///
/// Implemented by exact rational functions, by their degree-5 radical
/// extension, and by the plain number types.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(&Rational::new(n.into(), d.into()))
    }

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn scale(&self, n: i64) -> Self {
        self.clone() * Self::from_int(n)
    }

    fn pow(&self, n: u32) -> Self {
        num_traits::pow(self.clone(), n as usize)
    }

    /// Integer power allowing negative exponents; `None` for `0^-n`.
    fn powi(&self, n: i32) -> Option<Self> {
        if n >= 0 {
            Some(Field::pow(self, n as u32))
        } else {
            Some(Field::pow(&self.inv()?, n.unsigned_abs()))
        }
    }

    fn div(&self, other: &Self) -> Option<Self> {
        Some(self.clone() * other.inv()?)
    }
}

impl Field for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Field for f64 {
    fn from_rational(r: &Rational) -> Self {
        <f64 as Scalar>::from_rational(r)
    }

    fn inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    let scale = 1f64.max(a.abs()).max(b.abs());
    (a - b).abs() <= tol * scale
}

/// Exact sign-preserving real fifth root of a rational, if it is one.
pub fn exact_fifth_root(r: &Rational) -> Option<Rational> {
    let root = |n: &BigInt| -> Option<BigInt> {
        let a = n.abs();
        let k = num_integer::Roots::nth_root(&a, 5);
        (num_traits::pow(k.clone(), 5) == a).then(|| if n.is_negative() { -k } else { k })
    };
    Some(Rational::new(root(r.numer())?, root(r.denom())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifth_roots() {
        let r = Rational::new(BigInt::from(-32), BigInt::from(243));
        assert_eq!(exact_fifth_root(&r), Some(Rational::new((-2).into(), 3.into())));
        assert_eq!(exact_fifth_root(&Rational::from_integer(3.into())), None);
    }

    #[test]
    fn tolerance_is_relative_above_one() {
        assert!(approx_eq(1e12, 1e12 + 1.0, 1e-9));
        assert!(!approx_eq(1e-3, 2e-3, 1e-9));
        assert!(approx_eq(1e-12, 0.0, 1e-9));
    }

    #[test]
    fn exact_scalar_refuses_irrational_values() {
        let two = Rational::from_integer(2.into());
        assert!(<Rational as Scalar>::elementary(Func::Sin, &two).is_none());
        assert_eq!(
            <Rational as Scalar>::elementary(Func::Ln, &Rational::one()),
            Some(Rational::zero())
        );
    }
}
