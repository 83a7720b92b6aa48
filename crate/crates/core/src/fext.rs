//! The ring `K[f] / (f⁵ − m)`: a field of functions with a formal fifth root
//! `f` of a nonzero element `m`.
//!
//! Quantities of odd degree in `F` live here, with `f` standing for `F` and
//! `m` for `F⁵`. Identities that are polynomial in `f` modulo `f⁵ = m` hold for
//! every choice of fifth root, so exact checks never need to pick one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::diff::Derivation;
use crate::expr::{Coord, EvalError, RatFunc, Value};
use crate::scalar::{exact_fifth_root, Field, Rational, Scalar};

/// The modulus `m = f⁵` together with its logarithmic derivatives
/// `∂m / (5m)`, which are the derivatives of `f` divided by `f`.
#[derive(Debug)]
pub struct FCtx<K> {
    m: K,
    dlog: [K; 2],
}

impl<K: Field> FCtx<K> {
    /// `None` if `m` is zero.
    pub fn new<D: Derivation<K = K>>(m: K, d: &D) -> Option<FCtx<K>> {
        let inv5m = m.scale(5).inv()?;
        let dlog = [d.dx(&m) * inv5m.clone(), d.dy(&m) * inv5m];
        Some(FCtx { m, dlog })
    }

    pub fn modulus(&self) -> &K {
        &self.m
    }

    /// `∂f / f` along a coordinate.
    pub fn dlog(&self, c: Coord) -> &K {
        match c {
            Coord::X => &self.dlog[0],
            Coord::Y => &self.dlog[1],
        }
    }
}

/// `c₀ + c₁f + c₂f² + c₃f³ + c₄f⁴` with `f⁵ = m`.
///
/// Elements without `f` need no modulus, which is what lets [`Zero`] and
/// [`One`] be implemented; mixing elements built over different moduli is
/// a logic error.
#[derive(Clone, Debug)]
pub struct FExt<K> {
    ctx: Option<Arc<FCtx<K>>>,
    c: [K; 5],
}

fn zeros<K: Field>() -> [K; 5] {
    [K::zero(), K::zero(), K::zero(), K::zero(), K::zero()]
}

impl<K: Field> FExt<K> {
    pub fn scalar(k: K) -> FExt<K> {
        let mut c = zeros();
        c[0] = k;
        FExt { ctx: None, c }
    }

    /// The root `f` itself.
    pub fn root(ctx: &Arc<FCtx<K>>) -> FExt<K> {
        FExt::monomial(ctx, K::one(), 1)
    }

    /// `k·f^i` for `0 ≤ i < 5`.
    pub fn monomial(ctx: &Arc<FCtx<K>>, k: K, i: usize) -> FExt<K> {
        assert!(i < 5);
        let mut c = zeros();
        c[i] = k;
        FExt {
            ctx: Some(ctx.clone()),
            c,
        }
    }

    /// `f^n` for any integer `n`, reduced to `m^q f^r` with `0 ≤ r < 5`.
    pub fn root_pow(ctx: &Arc<FCtx<K>>, n: i32) -> FExt<K> {
        let q = n.div_euclid(5);
        let r = n.rem_euclid(5) as usize;
        let k = ctx.m.powi(q).expect("modulus is nonzero");
        FExt::monomial(ctx, k, r)
    }

    pub fn from_coeffs(ctx: &Arc<FCtx<K>>, c: [K; 5]) -> FExt<K> {
        FExt {
            ctx: Some(ctx.clone()),
            c,
        }
    }

    pub fn coeffs(&self) -> &[K; 5] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> &K {
        &self.c[i]
    }

    pub fn ctx(&self) -> Option<&Arc<FCtx<K>>> {
        self.ctx.as_ref()
    }

    /// The coefficient of `f⁰` when no other power occurs.
    pub fn as_scalar(&self) -> Option<&K> {
        self.c[1..].iter().all(K::is_zero).then_some(&self.c[0])
    }

    /// `(k, i)` when the element is `k·f^i`.
    pub fn as_monomial(&self) -> Option<(&K, usize)> {
        let mut found = None;
        for (i, k) in self.c.iter().enumerate() {
            if !k.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((k, i));
            }
        }
        Some(found.unwrap_or((&self.c[0], 0)))
    }

    fn merge_ctx(&self, o: &FExt<K>) -> Option<Arc<FCtx<K>>> {
        match (&self.ctx, &o.ctx) {
            (Some(a), Some(b)) => {
                debug_assert!(Arc::ptr_eq(a, b) || a.m == b.m, "mixed moduli");
                Some(a.clone())
            }
            (Some(a), None) => Some(a.clone()),
            (None, b) => b.clone(),
        }
    }

    fn modulus(&self) -> &K {
        &self
            .ctx
            .as_ref()
            .expect("element with powers of f carries its modulus")
            .m
    }

    /// Multiply every coefficient by a base-field element.
    pub fn scale_by(&self, k: &K) -> FExt<K> {
        FExt {
            ctx: self.ctx.clone(),
            c: self.c.clone().map(|c| if c.is_zero() { c } else { c * k.clone() }),
        }
    }

    fn mul_impl(&self, o: &FExt<K>) -> FExt<K> {
        let ctx = self.merge_ctx(o);
        let mut wide: [K; 9] = std::array::from_fn(|_| K::zero());
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                wide[i + j] = std::mem::replace(&mut wide[i + j], K::zero()) + a.clone() * b.clone();
            }
        }
        let [w0, w1, w2, w3, w4, w5, w6, w7, w8] = wide;
        let high = [w5, w6, w7, w8];
        let mut c = [w0, w1, w2, w3, w4];
        if high.iter().any(|k| !k.is_zero()) {
            let m = ctx.as_ref().expect("powers of f carry the modulus").m.clone();
            for (i, h) in high.into_iter().enumerate() {
                if !h.is_zero() {
                    c[i] = std::mem::replace(&mut c[i], K::zero()) + h * m.clone();
                }
            }
        }
        FExt { ctx, c }
    }

    fn zip(&self, o: &FExt<K>, f: impl Fn(K, K) -> K) -> FExt<K> {
        let ctx = self.merge_ctx(o);
        let mut it = self.c.clone().into_iter().zip(o.c.clone());
        let c = std::array::from_fn(|_| {
            let (a, b) = it.next().unwrap();
            f(a, b)
        });
        FExt { ctx, c }
    }

    /// Inverse by solving `self · z = 1` for the five coefficients of `z`.
    fn inv_general(&self) -> Option<FExt<K>> {
        let ctx = self.ctx.clone()?;
        // Column j holds self·f^j.
        let mut a: Vec<Vec<K>> = vec![vec![K::zero(); 6]; 5];
        for j in 0..5 {
            let col = self.mul_impl(&FExt::monomial(&ctx, K::one(), j));
            for i in 0..5 {
                a[i][j] = col.c[i].clone();
            }
        }
        a[0][5] = K::one();
        for col in 0..5 {
            let piv = (col..5).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let inv = a[col][col].inv()?;
            for v in a[col].iter_mut() {
                *v = v.clone() * inv.clone();
            }
            for r in 0..5 {
                if r != col && !a[r][col].is_zero() {
                    let k = a[r][col].clone();
                    for cc in 0..6 {
                        let t = a[col][cc].clone() * k.clone();
                        a[r][cc] = a[r][cc].clone() - t;
                    }
                }
            }
        }
        let c = std::array::from_fn(|i| a[i][5].clone());
        Some(FExt { ctx: Some(ctx), c })
    }

    /// Derivative: `∂(k f^i) = (∂k + i·k·∂m/(5m)) f^i`.
    pub fn derive<D: Derivation<K = K>>(&self, d: &D, coord: Coord) -> FExt<K> {
        let mut c = zeros();
        for (i, k) in self.c.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            let mut v = d.d(k, coord);
            if i > 0 {
                let ctx = self.ctx.as_ref().expect("powers of f carry the modulus");
                v = v + k.clone() * ctx.dlog(coord).scale(i as i64);
            }
            c[i] = v;
        }
        FExt {
            ctx: self.ctx.clone(),
            c,
        }
    }

    /// Numeric value with `f` the real fifth root of the modulus.
    ///
    /// `coef` evaluates base-field elements. The value is exact when the
    /// scalar type is exact and either no power of `f` survives at the
    /// point or the modulus has a rational fifth root.
    pub fn evaluate<T: Scalar>(
        &self,
        coef: impl Fn(&K) -> Result<T, EvalError>,
    ) -> Result<Value, EvalError> {
        let vals: Vec<T> = self
            .c
            .iter()
            .map(|k| if k.is_zero() { Ok(T::zero()) } else { coef(k) })
            .collect::<Result<_, _>>()?;
        let pure = vals[1..].iter().all(T::is_zero);
        if pure {
            return Ok(match vals[0].to_rational() {
                Some(r) => Value::Exact(r),
                None => Value::Float(vals[0].to_f64()),
            });
        }
        let m = coef(self.modulus())?;
        if let Some(mr) = m.to_rational() {
            if let Some(root) = exact_fifth_root(&mr) {
                let mut acc = Rational::zero();
                let mut p = Rational::one();
                for v in &vals {
                    acc += v.to_rational().expect("exact scalar") * p.clone();
                    p *= root.clone();
                }
                return Ok(Value::Exact(acc));
            }
        }
        let mf = m.to_f64();
        let root = mf.signum() * mf.abs().powf(0.2);
        let mut acc = 0.0;
        let mut p = 1.0;
        for v in &vals {
            acc += v.to_f64() * p;
            p *= root;
        }
        if !acc.is_finite() {
            return Err(EvalError::NonFinite);
        }
        Ok(Value::Float(acc))
    }
}

impl<K: Field> PartialEq for FExt<K> {
    fn eq(&self, o: &FExt<K>) -> bool {
        self.c == o.c
    }
}

impl<K: Field> Zero for FExt<K> {
    fn zero() -> Self {
        FExt::scalar(K::zero())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(K::is_zero)
    }
}

impl<K: Field> One for FExt<K> {
    fn one() -> Self {
        FExt::scalar(K::one())
    }
}

impl<K: Field> Add for FExt<K> {
    type Output = FExt<K>;
    fn add(self, o: FExt<K>) -> FExt<K> {
        self.zip(&o, |a, b| if b.is_zero() { a } else { a + b })
    }
}

impl<K: Field> Sub for FExt<K> {
    type Output = FExt<K>;
    fn sub(self, o: FExt<K>) -> FExt<K> {
        self.zip(&o, |a, b| if b.is_zero() { a } else { a - b })
    }
}

impl<K: Field> Mul for FExt<K> {
    type Output = FExt<K>;
    fn mul(self, o: FExt<K>) -> FExt<K> {
        self.mul_impl(&o)
    }
}

impl<K: Field> Neg for FExt<K> {
    type Output = FExt<K>;
    fn neg(self) -> FExt<K> {
        FExt {
            ctx: self.ctx,
            c: self.c.map(|k| -k),
        }
    }
}

impl<K: Field> Field for FExt<K> {
    fn from_rational(r: &Rational) -> Self {
        FExt::scalar(K::from_rational(r))
    }

    fn from_int(n: i64) -> Self {
        FExt::scalar(K::from_int(n))
    }

    /// Monomials `k f^i` invert as `k⁻¹ m⁻¹ f^{5-i}`; anything else goes
    /// through a linear solve.
    fn inv(&self) -> Option<Self> {
        match self.as_monomial() {
            Some((k, 0)) => Some(FExt::scalar(k.inv()?)),
            Some((k, i)) => {
                let ctx = self.ctx.as_ref()?;
                let v = (k.clone() * ctx.m.clone()).inv()?;
                Some(FExt::monomial(ctx, v, 5 - i))
            }
            None => self.inv_general(),
        }
    }

    fn scale(&self, n: i64) -> Self {
        self.scale_by(&K::from_int(n))
    }
}

impl fmt::Display for FExt<RatFunc> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, k) in self.c.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{k}")?,
                1 => write!(f, "({k})*f")?,
                _ => write!(f, "({k})*f^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::Plain;
    use crate::expr::parse;

    fn rf(s: &str) -> RatFunc {
        parse(s).unwrap().normalize().unwrap()
    }

    fn ctx(m: &str) -> Arc<FCtx<RatFunc>> {
        Arc::new(FCtx::new(rf(m), &Plain).unwrap())
    }

    #[test]
    fn fifth_power_reduces_to_modulus() {
        let c = ctx("x^2 + y");
        let f = FExt::root(&c);
        let f5 = f.pow(5);
        assert_eq!(f5.as_scalar(), Some(&rf("x^2 + y")));
        assert_eq!(FExt::root_pow(&c, -1) * f.clone(), FExt::one());
        assert_eq!(FExt::root_pow(&c, -7), f.pow(7).inv().unwrap());
    }

    #[test]
    fn general_inverse() {
        let c = ctx("x + 2");
        let f = FExt::root(&c);
        let e = FExt::scalar(rf("y")) + f.clone() * f.clone() - FExt::from_int(3) * f;
        let inv = e.inv().unwrap();
        assert_eq!(e * inv, FExt::one());
    }

    #[test]
    fn derivative_of_root() {
        let c = ctx("x^3*y");
        let f = FExt::root(&c);
        // ∂x f^5 = ∂x m
        let d = f.pow(5).derive(&Plain, Coord::X);
        assert_eq!(d.as_scalar(), Some(&rf("3*x^2*y")));
        let lhs = f.pow(5).derive(&Plain, Coord::Y);
        let rhs = f.pow(4).scale(5) * f.derive(&Plain, Coord::Y);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn numeric_value_uses_real_root() {
        let c = ctx("x");
        let e = FExt::root(&c).pow(2) + FExt::scalar(rf("1"));
        let at = |k: &RatFunc| k.eval(&crate::expr::Env::new(Rational::from_integer((-32).into()), Rational::zero()));
        assert_eq!(e.evaluate(at).unwrap(), Value::Exact(Rational::from_integer(5.into())));
        let at3 = |k: &RatFunc| k.eval(&crate::expr::Env::new(3.0f64, 0.0));
        let v = e.evaluate(at3).unwrap().to_f64();
        assert!((v - (3f64.powf(0.4) + 1.0)).abs() < 1e-12);
    }
}
