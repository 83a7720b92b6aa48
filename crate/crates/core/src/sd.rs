//! The invariant chain built from the covector `(A, B)`: `G, H`, the
//! pseudoscalar `F⁵`, the frame `X, Y`, the connection, and the scalar
//! invariants `I₁ … I₈, L, K`.

use num_traits::Zero;
use serde::Serialize;

use crate::diff::{Calculus, Derivation};
use crate::expr::Coord;
use crate::ode::Ode;
use crate::scalar::Field;

/// Relative invariants of low order.
#[derive(Clone, Debug, PartialEq)]
pub struct SdCore<K> {
    /// The weight-1 covector `(A, B)`.
    pub a: K,
    pub b: K,
    /// The weight-3 covector is `(−H, G)`.
    pub g: K,
    pub h: K,
    /// The weight-5 pseudoscalar `F⁵`.
    pub f5: K,
}

fn c<K: Clone>(k: &K) -> K {
    k.clone()
}

/// `(A, B)`.
pub fn covector_alpha<D: Derivation>(d: &D, o: &Ode<D::K>) -> (D::K, D::K) {
    let (p, q, r, s) = (&o.p, &o.q, &o.r, &o.s);
    let p10 = d.dx(p);
    let p01 = d.dy(p);
    let q10 = d.dx(q);
    let q01 = d.dy(q);
    let r10 = d.dx(r);
    let r01 = d.dy(r);
    let s10 = d.dx(s);
    let s01 = d.dy(s);
    let a = d.dy(&p01) - d.dy(&q10).scale(2)
        + d.dx(&r10)
        + c(p) * s10.scale(2)
        + c(s) * p10
        - c(p) * r01.scale(3)
        - c(r) * p01.scale(3)
        - c(q) * r10.scale(3)
        + c(q) * q01.scale(6);
    let b = d.dx(&s10) - d.dy(&r10).scale(2)
        + d.dy(&q01)
        - c(s) * p01.scale(2)
        - c(p) * s01
        + c(s) * q10.scale(3)
        + c(q) * s10.scale(3)
        + c(r) * q01.scale(3)
        - c(r) * r10.scale(6);
    (a, b)
}

/// `(G, H)`.
pub fn covector_beta<D: Derivation>(d: &D, o: &Ode<D::K>, a: &D::K, b: &D::K) -> (D::K, D::K) {
    let (p, q, r, s) = (&o.p, &o.q, &o.r, &o.s);
    let a10 = d.dx(a);
    let a01 = d.dy(a);
    let b10 = d.dx(b);
    let b01 = d.dy(b);
    let a2 = c(a) * c(a);
    let b2 = c(b) * c(b);
    let ab = c(a) * c(b);
    let g = -(c(b) * b10.clone()) - c(a) * b01.scale(3) + c(b) * a01.scale(4) + c(s) * a2.scale(3)
        - c(r) * ab.scale(6)
        + c(q) * b2.scale(3);
    let h = -(c(a) * a01) - c(b) * a10.scale(3) + c(a) * b10.scale(4) - c(p) * b2.scale(3)
        + c(q) * ab.scale(6)
        - c(r) * a2.scale(3);
    (g, h)
}

/// `F⁵`.
pub fn pseudoscalar_f5<D: Derivation>(d: &D, o: &Ode<D::K>, a: &D::K, b: &D::K) -> D::K {
    let (p, q, r, s) = (&o.p, &o.q, &o.r, &o.s);
    let ab = c(a) * c(b);
    let a2 = c(a) * c(a);
    let b2 = c(b) * c(b);
    ab.clone() * d.dy(a) + ab * d.dx(b)
        - a2.clone() * d.dy(b)
        - b2.clone() * d.dx(a)
        - c(p) * b2.clone() * c(b)
        + c(q) * c(a) * b2.scale(3)
        - c(r) * a2.clone() * c(b).scale(3)
        + c(s) * a2 * c(a)
}

pub fn core<D: Derivation>(d: &D, o: &Ode<D::K>) -> SdCore<D::K> {
    let (a, b) = covector_alpha(d, o);
    let (g, h) = covector_beta(d, o, &a, &b);
    let f5 = pseudoscalar_f5(d, o, &a, &b);
    SdCore { a, b, g, h, f5 }
}

/// A vector field `V¹ ∂x + V² ∂y`.
pub type Vector<E> = [E; 2];

/// The frame `X = (B, −A)/F²`, `Y = (G, H)/F⁴`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<E> {
    pub x: Vector<E>,
    pub y: Vector<E>,
}

pub fn frame<C: Calculus>(cx: &C, core: &SdCore<<C::D as Derivation>::K>) -> Frame<C::E> {
    let f2 = cx.root_pow(-2);
    let f4 = cx.root_pow(-4);
    Frame {
        x: [cx.lift(&core.b) * c(&f2), cx.lift(&-c(&core.a)) * f2],
        y: [cx.lift(&core.g) * c(&f4), cx.lift(&core.h) * f4],
    }
}

/// Connection components `Γ^k_{ij}` indexed `[k][i][j]`, symmetric in `i, j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<E>(pub [[[E; 2]; 2]; 2]);

pub fn connection<C: Calculus>(cx: &C, o: &Ode<<C::D as Derivation>::K>) -> Connection<C::E> {
    let f = cx.root();
    let finv3 = f.scale(3).inv().expect("F is invertible");
    let fx = cx.d_ext(&f, Coord::X) * c(&finv3);
    let fy = cx.d_ext(&f, Coord::Y) * finv3;
    let (p, q, r, s) = (cx.lift(&o.p), cx.lift(&o.q), cx.lift(&o.r), cx.lift(&o.s));
    let g111 = c(&q) + fx.scale(2);
    let g112 = c(&r) + c(&fy);
    let g122 = s;
    let g211 = -p;
    let g212 = -q + fx;
    let g222 = -r + fy.scale(2);
    Connection([
        [[g111, c(&g112)], [g112, g122]],
        [[g211, c(&g212)], [g212, g222]],
    ])
}

/// `V(g) = V¹ ∂x g + V² ∂y g`.
pub fn apply_field<C: Calculus>(cx: &C, v: &Vector<C::E>, g: &C::E) -> C::E {
    let mut out = C::E::zero();
    if !v[0].is_zero() {
        out = out + c(&v[0]) * cx.d_ext(g, Coord::X);
    }
    if !v[1].is_zero() {
        out = out + c(&v[1]) * cx.d_ext(g, Coord::Y);
    }
    out
}

/// `(∇_U V)^k = U(V^k) + Σ Γ^k_{ij} U^i V^j`.
pub fn covariant<C: Calculus>(
    cx: &C,
    conn: &Connection<C::E>,
    u: &Vector<C::E>,
    v: &Vector<C::E>,
) -> Vector<C::E> {
    std::array::from_fn(|k| {
        let mut acc = apply_field(cx, u, &v[k]);
        for i in 0..2 {
            for j in 0..2 {
                let g = &conn.0[k][i][j];
                if !g.is_zero() && !u[i].is_zero() && !v[j].is_zero() {
                    acc = acc + c(g) * c(&u[i]) * c(&v[j]);
                }
            }
        }
        acc
    })
}

/// `[U, V] = U(V^k) − V(U^k)`.
pub fn bracket<C: Calculus>(cx: &C, u: &Vector<C::E>, v: &Vector<C::E>) -> Vector<C::E> {
    std::array::from_fn(|k| apply_field(cx, u, &v[k]) - apply_field(cx, v, &u[k]))
}

/// Coefficients `(α, β)` with `w = α·u + β·v`. `None` if `u, v` are
/// linearly dependent.
pub fn decompose<E: Field>(u: &Vector<E>, v: &Vector<E>, w: &Vector<E>) -> Option<(E, E)> {
    let det = c(&u[0]) * c(&v[1]) - c(&u[1]) * c(&v[0]);
    let inv = det.inv()?;
    let alpha = (c(&w[0]) * c(&v[1]) - c(&w[1]) * c(&v[0])) * c(&inv);
    let beta = (c(&u[0]) * c(&w[1]) - c(&u[1]) * c(&w[0])) * inv;
    Some((alpha, beta))
}

/// The ten scalar invariants, with both formulas for `I₆`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdScalars<E> {
    pub i1: E,
    pub i2: E,
    pub i3: E,
    pub i4: E,
    pub i5: E,
    pub i6: E,
    /// `I₆` by the shorter formula; equal to `i6` when both are computed.
    pub i6_short: E,
    pub i7: E,
    pub i8: E,
    pub l: E,
    pub k: E,
}

impl<E> SdScalars<E> {
    pub fn named(&self) -> [(&'static str, &E); 11] {
        [
            ("I1", &self.i1),
            ("I2", &self.i2),
            ("I3", &self.i3),
            ("I4", &self.i4),
            ("I5", &self.i5),
            ("I6", &self.i6),
            ("I6_short", &self.i6_short),
            ("I7", &self.i7),
            ("I8", &self.i8),
            ("L", &self.l),
            ("K", &self.k),
        ]
    }

    pub fn map<F>(&self, f: impl Fn(&E) -> F) -> SdScalars<F> {
        SdScalars {
            i1: f(&self.i1),
            i2: f(&self.i2),
            i3: f(&self.i3),
            i4: f(&self.i4),
            i5: f(&self.i5),
            i6: f(&self.i6),
            i6_short: f(&self.i6_short),
            i7: f(&self.i7),
            i8: f(&self.i8),
            l: f(&self.l),
            k: f(&self.k),
        }
    }
}

/// `I₃, I₆, I₇, I₈` from their explicit formulas; the other six follow
/// from the dependency relations.
pub fn scalars_explicit<C: Calculus>(
    cx: &C,
    o: &Ode<<C::D as Derivation>::K>,
    core: &SdCore<<C::D as Derivation>::K>,
) -> SdScalars<C::E> {
    let d = cx.base();
    let (p, q, r, s) = (&o.p, &o.q, &o.r, &o.s);
    let SdCore { a, b, g, h, .. } = core;
    let (a10, a01, b10, b01) = (d.dx(a), d.dy(a), d.dx(b), d.dy(b));
    let (g10, g01, h10, h01) = (d.dx(g), d.dy(g), d.dx(h), d.dy(h));
    let f = cx.root();
    let f10 = cx.d_ext(&f, Coord::X);
    let f01 = cx.d_ext(&f, Coord::Y);
    let l = |k: &<C::D as Derivation>::K| cx.lift(k);
    let fp = |n: i32| cx.root_pow(n);
    let third = C::E::frac(1, 3);
    let twelfth = C::E::frac(1, 12);

    let (g2, h2, a2, b2) = (c(g) * c(g), c(h) * c(h), c(a) * c(a), c(b) * c(b));
    let hbg2 = (c(h) * c(b) * c(g)).scale(2);
    let hag2 = (c(h) * c(a) * c(g)).scale(2);
    // H F01 + G F10
    let hf_gf = l(h) * c(&f01) + l(g) * c(&f10);
    // A F01 − B F10
    let af_bf = l(a) * c(&f01) - l(b) * c(&f10);

    let n3 = c(b) * (c(h) * c(&g10) - c(g) * c(&h10)) - c(a) * (c(h) * c(&g01) - c(g) * c(&h01))
        + c(b) * c(&g2) * c(p)
        - (c(a) * c(&g2) - c(&hbg2)) * c(q)
        + (c(b) * c(&h2) - c(&hag2)) * c(r)
        - c(a) * c(&h2) * c(s);
    let i3 = (l(&n3) * fp(-9) + c(&hf_gf) * fp(-5)) * c(&third);

    let n6 = c(a) * (c(g) * c(&a01) + c(h) * c(&b01)) - c(b) * (c(g) * c(&a10) + c(h) * c(&b10))
        - c(g) * c(&b2) * c(p)
        - (c(h) * c(&b2) - (c(g) * c(b) * c(a)).scale(2)) * c(q)
        - (c(g) * c(&a2) - (c(h) * c(b) * c(a)).scale(2)) * c(r)
        - c(h) * c(&a2) * c(s);
    let i6 = (l(&n6) * fp(-7) - c(&af_bf).scale(4) * fp(-3)) * twelfth;
    let i6_short = (l(&(c(&a01) - c(&b10))) * fp(-2) - af_bf * fp(-3)) * c(&third);

    let n7 = c(g) * c(h) * c(&g10) - c(&g2) * c(&h10) + c(&h2) * c(&g01) - c(h) * c(g) * c(&h01)
        + c(&g2) * c(g) * c(p)
        + (c(&g2) * c(h)).scale(3) * c(q)
        + (c(g) * c(&h2)).scale(3) * c(r)
        + c(&h2) * c(h) * c(s);
    let i7 = l(&n7) * fp(-11) * c(&third);

    let n8 = c(g) * (c(a) * c(&g10) + c(b) * c(&h10)) + c(h) * (c(a) * c(&g01) + c(b) * c(&h01))
        - c(b) * c(&g2) * c(p)
        + (c(a) * c(&g2) - hbg2) * c(q)
        - (c(b) * c(&h2) - hag2) * c(r)
        + c(a) * h2 * c(s);
    let i8 = (l(&n8) * fp(-9) - hf_gf.scale(10) * fp(-5)) * third;

    from_independent(i3, i6, i6_short, i7, i8)
}

/// Complete `I₃, I₆, I₇, I₈` with `I₁ = −4I₆`, `I₂ = 1/3`, `I₄ = 4I₆`,
/// `I₅ = −I₈`, `L = I₃ + I₈`, `K = −3I₆`.
fn from_independent<E: Field>(i3: E, i6: E, i6_short: E, i7: E, i8: E) -> SdScalars<E> {
    SdScalars {
        i1: i6.scale(-4),
        i2: E::frac(1, 3),
        i4: i6.scale(4),
        i5: -c(&i8),
        l: c(&i3) + c(&i8),
        k: i6.scale(-3),
        i3,
        i6_short,
        i6,
        i7,
        i8,
    }
}

/// All ten invariants by decomposing covariant derivatives of the frame,
/// and the bracket `[X, Y] = L X − K Y`, in the frame itself.
///
/// `None` if the frame is degenerate.
pub fn scalars_via_connection<C: Calculus>(
    cx: &C,
    o: &Ode<<C::D as Derivation>::K>,
    core: &SdCore<<C::D as Derivation>::K>,
) -> Option<SdScalars<C::E>> {
    let fr = frame(cx, core);
    let conn = connection(cx, o);
    let (x, y) = (&fr.x, &fr.y);
    let (i1, i2) = decompose(x, y, &covariant(cx, &conn, x, x))?;
    let (i3, i4) = decompose(x, y, &covariant(cx, &conn, x, y))?;
    let (i5, i6) = decompose(x, y, &covariant(cx, &conn, y, x))?;
    let (i7, i8) = decompose(x, y, &covariant(cx, &conn, y, y))?;
    let (l, mk) = decompose(x, y, &bracket(cx, x, y))?;
    Some(SdScalars {
        i1,
        i2,
        i3,
        i4,
        i5,
        i6_short: c(&i6),
        i6,
        i7,
        i8,
        l,
        k: -mk,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::{Plain, Rooted};
    use crate::expr::{parse, RatFunc};
    use crate::fext::FExt;

    fn rf(s: &str) -> RatFunc {
        parse(s).unwrap().normalize().unwrap()
    }

    fn ode(p: &str, q: &str, r: &str, s: &str) -> Ode<RatFunc> {
        Ode::parse(p, q, r, s).unwrap()
    }

    #[test]
    fn corpus_values() {
        let o = ode("1", "0", "0", "x^2");
        let k = core(&Plain, &o);
        assert_eq!((k.a.clone(), k.b.clone()), (rf("4*x"), rf("2")));
        assert_eq!((k.g.clone(), k.h.clone()), (rf("48*x^4"), rf("-36")));
        assert_eq!(k.f5, rf("64*x^5 - 24"));

        let o = ode("y^2", "0", "0", "0");
        let k = core(&Plain, &o);
        assert_eq!((k.a, k.b, k.f5), (rf("2"), rf("0"), rf("0")));

        let z = core(&Plain, &Ode::zero());
        assert!(z.a.is_zero() && z.b.is_zero() && z.g.is_zero() && z.h.is_zero() && z.f5.is_zero());
    }

    #[test]
    fn three_f5_identity() {
        let o = ode("x*y", "y^2 - 1", "x + 2*y", "x^2 - y");
        let k = core(&Plain, &o);
        let lhs = k.f5.scale(3);
        let rhs = c(&k.b) * c(&k.h) + c(&k.a) * c(&k.g);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn two_routes_agree() {
        let o = ode("1 + y", "x", "0", "x^2");
        let k = core(&Plain, &o);
        let cx = Rooted::new(Plain, k.f5.clone()).unwrap();
        let e = scalars_explicit(&cx, &o, &k);
        let v = scalars_via_connection(&cx, &o, &k).unwrap();
        assert_eq!(e.i6, e.i6_short);
        assert_eq!(v.i2, FExt::frac(1, 3));
        assert_eq!(e, v);
    }

    #[test]
    fn i6_vanishes_on_axis() {
        let o = ode("1", "0", "0", "x^2");
        let k = core(&Plain, &o);
        let cx = Rooted::new(Plain, k.f5.clone()).unwrap();
        let e = scalars_explicit(&cx, &o, &k);
        let at0 = |r: &RatFunc| r.eval(&crate::expr::Env::new(crate::Rational::from_integer(0.into()), crate::Rational::from_integer(0.into())));
        assert_eq!(e.i6.evaluate(at0).unwrap().to_f64(), 0.0);
        assert_eq!(e.k.evaluate(at0).unwrap().to_f64(), 0.0);
    }
}
