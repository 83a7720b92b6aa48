//! The second invariant family: the relative invariants `α … λ`, the
//! quantities `Γ₀, Γ₁, J₀ … J₄`, the operators `D₁, D₂` and the scalar
//! invariants built from `J₀ … J₄`.

use serde::Serialize;

use crate::diff::{Calculus, Derivation};
use crate::ode::Ode;
use crate::scalar::Field;
use crate::sd::{apply_field, bracket, decompose, Vector};

fn c<K: Clone>(k: &K) -> K {
    k.clone()
}

/// Every quantity of the chain, in dependency order.
#[derive(Clone, Debug, PartialEq)]
pub struct BgdChain<K> {
    pub alpha0: K,
    pub alpha1: K,
    pub alpha2: K,
    pub beta1: K,
    pub beta2: K,
    pub gamma10: K,
    pub gamma11: K,
    pub gamma20: K,
    pub gamma21: K,
    pub delta10: K,
    pub delta20: K,
    pub delta30: K,
    pub delta11: K,
    pub delta21: K,
    pub delta31: K,
    pub eps10: Option<K>,
    pub eps20: Option<K>,
    pub eps11: Option<K>,
    pub lambda10: Option<K>,
    pub big_gamma0: K,
    pub big_gamma1: K,
    pub j0: K,
    pub j1: K,
    pub j2: K,
    pub j3: K,
    pub j4: K,
}

/// The chain up to the fourth order, `Γ₀, Γ₁` and `J₀ … J₄`. With
/// `higher`, also the fifth and sixth order quantities `ε, λ`.
pub fn chain<D: Derivation>(d: &D, o: &Ode<D::K>, higher: bool) -> BgdChain<D::K> {
    let (p, q, r, s) = (&o.p, &o.q, &o.r, &o.s);
    let dx = |e: &D::K| d.dx(e);
    let dy = |e: &D::K| d.dy(e);

    let alpha0 = dx(q) - dy(p) + (c(p) * c(r)).scale(2) - (c(q) * c(q)).scale(2);
    let alpha1 = dx(r) - dy(q) + c(p) * c(s) - c(q) * c(r);
    let alpha2 = dx(s) - dy(r) + (c(q) * c(s)).scale(2) - (c(r) * c(r)).scale(2);

    let beta1 = dx(&alpha1) - dy(&alpha0) + c(r) * c(&alpha0) - (c(q) * c(&alpha1)).scale(2)
        + c(p) * c(&alpha2);
    let beta2 = dx(&alpha2) - dy(&alpha1) + c(s) * c(&alpha0) - (c(r) * c(&alpha1)).scale(2)
        + c(q) * c(&alpha2);

    let gamma10 = dx(&beta1) - c(q) * c(&beta1) + c(p) * c(&beta2);
    let gamma11 = dx(&beta2) - c(r) * c(&beta1) + c(q) * c(&beta2);
    let gamma20 = dy(&beta1) - c(r) * c(&beta1) + c(q) * c(&beta2);
    let gamma21 = dy(&beta2) - c(s) * c(&beta1) + c(r) * c(&beta2);

    let g2011 = c(&gamma20) + c(&gamma11);
    let delta10 = dx(&gamma10) - (c(q) * c(&gamma10)).scale(2) + c(p) * c(&g2011)
        - (c(&alpha0) * c(&beta1)).scale(5);
    let delta20 = dx(&gamma20) - c(r) * c(&gamma10) + c(p) * c(&gamma21)
        - (c(&alpha1) * c(&beta1)).scale(4)
        - c(&alpha0) * c(&beta2);
    let delta30 = dy(&gamma20) - c(s) * c(&gamma10) + c(q) * c(&gamma21)
        - (c(&alpha2) * c(&beta1)).scale(4)
        - c(&alpha1) * c(&beta2);
    let delta11 = dx(&gamma11) - c(r) * c(&gamma10) + c(p) * c(&gamma21)
        - c(&alpha1) * c(&beta1)
        - (c(&alpha0) * c(&beta2)).scale(4);
    let delta21 = dx(&gamma21) - c(r) * c(&g2011) + (c(q) * c(&gamma21)).scale(2)
        - (c(&alpha1) * c(&beta2)).scale(5);
    let delta31 = dy(&gamma21) - c(s) * c(&g2011) + (c(r) * c(&gamma21)).scale(2)
        - (c(&alpha2) * c(&beta2)).scale(5);

    let (eps10, eps20, eps11, lambda10) = if higher {
        let d2011 = delta20.scale(2) + c(&delta11);
        let eps10 = dx(&delta10) - (c(q) * c(&delta10)).scale(3) + c(p) * c(&d2011)
            - (c(&alpha0) * c(&gamma10)).scale(12);
        let eps20 = dy(&delta10) - (c(r) * c(&delta10)).scale(3) + c(q) * d2011
            - (c(&alpha1) * c(&gamma10)).scale(12);
        let eps11 = dx(&delta11) - c(r) * c(&delta10) - c(q) * c(&delta11)
            + (c(p) * c(&delta21)).scale(2)
            - (c(&alpha1) * c(&gamma10)).scale(2)
            - (c(&alpha0) * c(&gamma11)).scale(10)
            - (c(&beta1) * c(&beta1)).scale(10);
        let lambda10 = dx(&eps10) - (c(q) * c(&eps10)).scale(4)
            + c(p) * (eps20.scale(3) + c(&eps11))
            - (c(&alpha0) * c(&delta10)).scale(21);
        (Some(eps10), Some(eps20), Some(eps11), Some(lambda10))
    } else {
        (None, None, None, None)
    };

    let big_gamma0 = (c(&beta2) * c(&gamma10)).scale(3) + c(&beta1) * (c(&gamma20) - gamma11.scale(4));
    let big_gamma1 = c(&beta2) * (gamma20.scale(4) - c(&gamma11)) - (c(&beta1) * c(&gamma21)).scale(3);

    let b1 = &beta1;
    let b2 = &beta2;
    let dg = c(&gamma20) - c(&gamma11);
    let cross = c(&gamma10) * c(&gamma21) - c(&gamma20) * c(&gamma11);
    let j0 = c(b2) * c(b2) * c(&gamma10) - c(b1) * c(b2) * c(&g2011) + c(b1) * c(b1) * c(&gamma21);
    let j1 = c(b2) * (c(&delta20) - c(&delta11))
        + c(b1) * (c(&delta21) - c(&delta30))
        + c(&dg) * c(&dg) * D::K::frac(7, 5)
        - c(&cross) * D::K::frac(3, 5);
    let j2 = c(&big_gamma1) * (c(&delta20) - c(&delta11))
        + c(&big_gamma0) * (c(&delta21) - c(&delta30))
        + (c(&dg) * c(&cross)).scale(3)
        + c(&dg) * c(&dg) * c(&dg) * D::K::frac(4, 3);
    let d2011 = delta20.scale(2) + c(&delta11);
    let d3021 = c(&delta30) + delta21.scale(2);
    let j3 = c(b2) * c(b2) * c(b2) * c(&delta10) - c(b1) * c(b2) * c(b2) * c(&d2011)
        + c(b1) * c(b1) * c(b2) * c(&d3021)
        - c(b1) * c(b1) * c(b1) * c(&delta31)
        + (c(&dg) * c(&j0)).scale(4);
    let j4 = -(c(b2) * (c(b2) * c(&big_gamma0) + (c(b1) * c(&big_gamma1)).scale(2)) * d2011)
        + c(b1) * ((c(b2) * c(&big_gamma0)).scale(2) + c(b1) * c(&big_gamma1)) * d3021
        + (c(b2) * c(b2) * c(&big_gamma1) * c(&delta10)).scale(3)
        - (c(b1) * c(b1) * c(&big_gamma0) * c(&delta31)).scale(3)
        + c(&dg) * c(&dg) * c(&j0) * D::K::frac(66, 5)
        + c(&cross) * c(&j0) * D::K::frac(36, 5);

    BgdChain {
        alpha0,
        alpha1,
        alpha2,
        beta1,
        beta2,
        gamma10,
        gamma11,
        gamma20,
        gamma21,
        delta10,
        delta20,
        delta30,
        delta11,
        delta21,
        delta31,
        eps10,
        eps20,
        eps11,
        lambda10,
        big_gamma0,
        big_gamma1,
        j0,
        j1,
        j2,
        j3,
        j4,
    }
}

impl<K> BgdChain<K> {
    /// Named quantities, for reports.
    pub fn named(&self) -> Vec<(&'static str, &K)> {
        let mut v = vec![
            ("alpha0", &self.alpha0),
            ("alpha1", &self.alpha1),
            ("alpha2", &self.alpha2),
            ("beta1", &self.beta1),
            ("beta2", &self.beta2),
            ("gamma10", &self.gamma10),
            ("gamma11", &self.gamma11),
            ("gamma20", &self.gamma20),
            ("gamma21", &self.gamma21),
            ("delta10", &self.delta10),
            ("delta20", &self.delta20),
            ("delta30", &self.delta30),
            ("delta11", &self.delta11),
            ("delta21", &self.delta21),
            ("delta31", &self.delta31),
        ];
        for (n, e) in [
            ("eps10", &self.eps10),
            ("eps20", &self.eps20),
            ("eps11", &self.eps11),
            ("lambda10", &self.lambda10),
        ] {
            if let Some(e) = e {
                v.push((n, e));
            }
        }
        v.extend([
            ("Gamma0", &self.big_gamma0),
            ("Gamma1", &self.big_gamma1),
            ("J0", &self.j0),
            ("J1", &self.j1),
            ("J2", &self.j2),
            ("J3", &self.j3),
            ("J4", &self.j4),
        ]);
        v
    }
}

/// `μ₁` and the two invariant differentiations.
#[derive(Clone, Debug, PartialEq)]
pub struct Operators<E> {
    /// `μ₁ = J₀^{1/5}`, realised as `−F`.
    pub mu1: E,
    pub d1: Vector<E>,
    pub d2: Vector<E>,
    /// `D₂` through `μ₂`, present only when `β₁ ≠ 0`.
    pub d2_via_mu2: Option<Vector<E>>,
    pub mu2: Option<E>,
}

/// `J₀^{k/5} = μ₁^k` with `μ₁ = −F`.
pub fn j0_pow<C: Calculus>(cx: &C, k: i32) -> C::E {
    let v = cx.root_pow(k);
    if k.rem_euclid(2) == 1 {
        -v
    } else {
        v
    }
}

/// `D₁ = μ₁⁻²(β₂, −β₁)` and `D₂ = J₀^{−4/5}(Γ₁, −Γ₀)`. When `β₁ ≠ 0` the
/// original form `D₂ = μ₂(β₂, −β₁) − 3β₁⁻¹μ₁(1, 0)` with
/// `μ₂ = Γ₀ β₁⁻¹ J₀^{−4/5}` is computed as well.
pub fn operators<C: Calculus>(cx: &C, ch: &BgdChain<<C::D as Derivation>::K>) -> Operators<C::E> {
    let l = |k: &<C::D as Derivation>::K| cx.lift(k);
    let mu1 = j0_pow(cx, 1);
    let mu1_m2 = j0_pow(cx, -2);
    let j0_m45 = j0_pow(cx, -4);
    let d1 = [l(&ch.beta2) * c(&mu1_m2), l(&-c(&ch.beta1)) * mu1_m2];
    let d2 = [l(&ch.big_gamma1) * c(&j0_m45), l(&-c(&ch.big_gamma0)) * c(&j0_m45)];
    let (mu2, d2_via_mu2) = match ch.beta1.inv() {
        Some(b1inv) => {
            let mu2 = l(&(c(&ch.big_gamma0) * c(&b1inv))) * j0_m45;
            let first = c(&mu2) * l(&ch.beta2) - l(&b1inv).scale(3) * c(&mu1);
            let second = -(c(&mu2) * l(&ch.beta1));
            (Some(mu2), Some([first, second]))
        }
        None => (None, None),
    };
    Operators {
        mu1,
        d1,
        d2,
        d2_via_mu2,
        mu2,
    }
}

/// Scalar invariants `IB₁ … IB₄` and the coefficients of
/// `[D₁, D₂] = Ω₁D₁ + Ω₂D₂`, both solved for and by formula.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BgdScalars<E> {
    pub ib1: E,
    pub ib2: E,
    pub ib3: E,
    pub ib4: E,
    /// Solved from the bracket.
    pub omega1: E,
    pub omega2: E,
    /// `(8IB₁ − IB₄)/5` and `IB₃/5`.
    pub omega1_formula: E,
    pub omega2_formula: E,
}

impl<E> BgdScalars<E> {
    pub fn named(&self) -> [(&'static str, &E); 8] {
        [
            ("IB1", &self.ib1),
            ("IB2", &self.ib2),
            ("IB3", &self.ib3),
            ("IB4", &self.ib4),
            ("Omega1", &self.omega1),
            ("Omega2", &self.omega2),
            ("Omega1_formula", &self.omega1_formula),
            ("Omega2_formula", &self.omega2_formula),
        ]
    }

    pub fn map<F>(&self, f: impl Fn(&E) -> F) -> BgdScalars<F> {
        BgdScalars {
            ib1: f(&self.ib1),
            ib2: f(&self.ib2),
            ib3: f(&self.ib3),
            ib4: f(&self.ib4),
            omega1: f(&self.omega1),
            omega2: f(&self.omega2),
            omega1_formula: f(&self.omega1_formula),
            omega2_formula: f(&self.omega2_formula),
        }
    }
}

/// `IB₁ = J₁J₀^{−4/5}`, `IB₂ = J₂J₀^{−6/5}`, `IB₃ = J₃J₀^{−7/5}`,
/// `IB₄ = J₄J₀^{−9/5}`. `None` if the operators are dependent.
pub fn scalars_bgd<C: Calculus>(
    cx: &C,
    ch: &BgdChain<<C::D as Derivation>::K>,
    ops: &Operators<C::E>,
) -> Option<BgdScalars<C::E>> {
    let l = |k: &<C::D as Derivation>::K| cx.lift(k);
    let ib1 = l(&ch.j1) * j0_pow(cx, -4);
    let ib2 = l(&ch.j2) * j0_pow(cx, -6);
    let ib3 = l(&ch.j3) * j0_pow(cx, -7);
    let ib4 = l(&ch.j4) * j0_pow(cx, -9);
    let (omega1, omega2) = decompose(&ops.d1, &ops.d2, &bracket(cx, &ops.d1, &ops.d2))?;
    let fifth = C::E::frac(1, 5);
    Some(BgdScalars {
        omega1_formula: (ib1.scale(8) - c(&ib4)) * c(&fifth),
        omega2_formula: c(&ib3) * fifth,
        ib1,
        ib2,
        ib3,
        ib4,
        omega1,
        omega2,
    })
}

/// `D(g)` for an operator given by its components.
pub fn apply<C: Calculus>(cx: &C, op: &Vector<C::E>, g: &C::E) -> C::E {
    apply_field(cx, op, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::{Plain, Rooted};
    use crate::expr::{parse, RatFunc};
    use crate::sd;

    fn rf(s: &str) -> RatFunc {
        parse(s).unwrap().normalize().unwrap()
    }

    #[test]
    fn corpus_values() {
        let o = Ode::parse("1", "0", "0", "x^2").unwrap();
        let ch = chain(&Plain, &o, true);
        assert_eq!(ch.beta1, rf("4*x"));
        assert_eq!(ch.beta2, rf("2"));
        assert_eq!(ch.big_gamma0, rf("36"));
        assert_eq!(ch.big_gamma1, rf("48*x^4"));
        assert_eq!(ch.j0, rf("24 - 64*x^5"));
        let three_j0 = ch.j0.scale(3);
        assert_eq!(three_j0, c(&ch.beta2) * c(&ch.big_gamma0) - c(&ch.beta1) * c(&ch.big_gamma1));
    }

    #[test]
    fn zero_equation_has_zero_chain() {
        let ch = chain(&Plain, &Ode::zero(), true);
        assert!(ch.named().iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn operators_match_frame() {
        let o = Ode::parse("x", "y", "1", "x*y").unwrap();
        let ch = chain(&Plain, &o, false);
        let core = sd::core(&Plain, &o);
        assert_eq!(ch.j0, -c(&core.f5));
        let cx = Rooted::new(Plain, core.f5.clone()).unwrap();
        let ops = operators(&cx, &ch);
        let fr = sd::frame(&cx, &core);
        assert_eq!(ops.d1, fr.x);
        assert_eq!(ops.d2, fr.y);
        assert_eq!(ops.d2_via_mu2.as_ref(), Some(&fr.y));
        let sc = scalars_bgd(&cx, &ch, &ops).unwrap();
        assert_eq!(sc.omega1, sc.omega1_formula);
        assert_eq!(sc.omega2, sc.omega2_formula);
    }
}
