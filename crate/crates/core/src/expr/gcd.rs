//! Multivariate polynomial gcd over the integers.
//!
//! Strategy, cheapest first: monomial and content extraction, trial division,
//! a modular coprimality certificate, reduction through variables that occur
//! in only one operand, the heuristic gcd (evaluation at a large integer and
//! reconstruction from its balanced expansion), and finally a primitive
//! pseudo-remainder sequence, which always succeeds.

use super::atom::AtomId;
use super::poly::{Coeff, MPoly};

const PRIME: u64 = 2_147_483_647;

/// Greatest common divisor with positive leading coefficient.
pub fn gcd<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
    if a.is_zero() {
        return positive(b.clone());
    }
    if b.is_zero() {
        return positive(a.clone());
    }
    if a == b {
        return positive(a.clone());
    }
    let (ca, cb) = (a.content(), b.content());
    let (ma, mb) = (a.monomial_content(), b.monomial_content());
    let c = ca.gcd(&cb);
    let m = ma.gcd(&mb);
    if a.len() == 1 || b.len() == 1 {
        return MPoly::term(m, c);
    }
    let pa = strip(a, &ca, &ma);
    let pb = strip(b, &cb, &mb);
    gcd_primitive(&pa, &pb).mul_term(&m, &c)
}

fn strip<C: Coeff>(p: &MPoly<C>, c: &C, m: &super::poly::Monomial) -> MPoly<C> {
    let q = if m.is_one() {
        p.clone()
    } else {
        p.div_exact(&MPoly::term(m.clone(), C::one()))
            .expect("monomial content divides")
    };
    if c.is_one() {
        q
    } else {
        q.div_scalar(c)
    }
}

fn positive<C: Coeff>(p: MPoly<C>) -> MPoly<C> {
    if p.lead_coeff().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Divide out the integer content, keeping a positive leading coefficient.
pub fn primitive<C: Coeff>(p: &MPoly<C>) -> MPoly<C> {
    let c = p.content();
    if c.is_zero() || c.is_one() {
        return positive(p.clone());
    }
    positive(p.div_scalar(&c))
}

fn gcd_primitive<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let (a, b) = (positive(a.clone()), positive(b.clone()));
    if a == b {
        return a;
    }
    let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
    if large.div_exact(small).is_some() {
        return small.clone();
    }
    if coprime_certificate(&a, &b) {
        return MPoly::one();
    }
    let va = a.atoms();
    let vb = b.atoms();
    if let Some(&v) = va.difference(&vb).next() {
        return gcd_with_coefficients(&b, &a, v);
    }
    if let Some(&v) = vb.difference(&va).next() {
        return gcd_with_coefficients(&a, &b, v);
    }
    if let Some(g) = heu_gcd(&a, &b) {
        return positive(g);
    }
    prs_gcd(&a, &b)
}

/// `gcd(a, b)` where `b` involves `v` and `a` does not.
fn gcd_with_coefficients<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>, v: AtomId) -> MPoly<C> {
    let mut g = a.clone();
    for (_, c) in b.coefficients_in(v) {
        g = gcd(&g, &c);
        if g.is_constant() {
            return MPoly::one();
        }
    }
    positive(g)
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        (self.0 >> 33) % PRIME
    }
}

fn mod_p<C: Coeff>(c: &C) -> u64 {
    let p = C::from_u64(PRIME).expect("prime fits");
    c.mod_floor(&p).to_u64().expect("reduced value fits")
}

fn pow_mod(mut b: u64, mut e: u32) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, (PRIME - 2) as u32)
}

/// Image of `p` in `Z_p[v]` after substituting `point(w)` for every other atom.
fn univariate_image<C: Coeff>(
    p: &MPoly<C>,
    v: AtomId,
    point: &impl Fn(AtomId) -> u64,
) -> Vec<u64> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = mod_p(c);
        let mut e = 0;
        for &(w, k) in m.pairs() {
            if w == v {
                e = k as usize;
            } else {
                t = t * pow_mod(point(w), k) % PRIME;
            }
        }
        out[e] = (out[e] + t) % PRIME;
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn poly_rem_mod(a: &mut Vec<u64>, b: &[u64]) {
    let db = b.len() - 1;
    let inv = inv_mod(b[db]);
    while a.len() > db && !(a.len() == 1 && a[0] == 0) {
        let da = a.len() - 1;
        let q = a[da] * inv % PRIME;
        for i in 0..=db {
            let s = q * b[i] % PRIME;
            a[da - db + i] = (a[da - db + i] + PRIME - s) % PRIME;
        }
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        if a.len() == 1 && a[0] == 0 {
            break;
        }
        if a.len() - 1 < db {
            break;
        }
    }
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let is_zero = |p: &Vec<u64>| p.len() == 1 && p[0] == 0;
    while !is_zero(&b) {
        poly_rem_mod(&mut a, &b);
        std::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
}

/// Proves that `a` and `b` have no common factor of positive degree.
///
/// For each variable `v` shared by both operands, the other variables are
/// specialised modulo a prime at a point where the leading coefficient of `a`
/// in `v` survives. A common factor of positive `v`-degree would survive
/// into the images, so coprime images rule it out. `false` means "not
/// proven", never "not coprime".
fn coprime_certificate<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>) -> bool {
    let va = a.atoms();
    let vb = b.atoms();
    let shared: Vec<AtomId> = va.intersection(&vb).copied().collect();
    let mut rng = Lcg(0x9e37_79b9_7f4a_7c15 ^ (a.len() as u64) << 20 ^ b.len() as u64);
    'vars: for &v in &shared {
        let da = a.degree_in(v) as usize;

        for _ in 0..3 {
            let vals: Vec<(AtomId, u64)> = va
                .union(&vb)
                .filter(|&&w| w != v)
                .map(|&w| (w, rng.next()))
                .collect();
            let point = |w: AtomId| {
                vals.iter()
                    .find(|p| p.0 == w)
                    .map(|p| p.1)
                    .unwrap_or(0)
            };
            let ia = univariate_image(a, v, &point);
            if ia.len() - 1 != da {
                continue;
            }
            let ib = univariate_image(b, v, &point);
            if ib.len() == 1 && ib[0] == 0 {
                continue;
            }
            if gcd_degree_mod(ia, ib) == 0 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

fn heu_gcd<C: Coeff>(f: &MPoly<C>, g: &MPoly<C>) -> Option<MPoly<C>> {
    if f.is_zero() || g.is_zero() {
        return Some(positive(if f.is_zero() { g.clone() } else { f.clone() }));
    }
    if f.is_constant() || g.is_constant() {
        let c = f.content().gcd(&g.content());
        return Some(MPoly::constant(c));
    }
    let common = f.content().gcd(&g.content());
    let f = f.div_scalar(&common);
    let g = g.div_scalar(&common);
    let v = *f.atoms().union(&g.atoms()).next().expect("non-constant");

    let two = C::from_u32(2).unwrap();
    let fnorm = f.max_norm();
    let gnorm = g.max_norm();
    let b = two.clone() * fnorm.clone().min(gnorm.clone()) + C::from_u32(29).unwrap();
    let b_root = b.sqrt() * C::from_u32(99).unwrap();
    let lower = two.clone()
        * (fnorm / f.lead_coeff().abs()).min(gnorm / g.lead_coeff().abs())
        + two;
    let mut xi = b.min(b_root).max(lower);

    for _ in 0..6 {
        let ff = f.eval_atom(v, &xi);
        let gg = g.eval_atom(v, &xi);
        if !ff.is_zero() && !gg.is_zero() {
            let h = heu_gcd(&ff, &gg)?;
            let cff = ff.div_exact(&h)?;
            let cfg = gg.div_exact(&h)?;
            let hi = primitive(&interpolate(&h, &xi, v));
            if !hi.is_zero() && f.div_exact(&hi).is_some() && g.div_exact(&hi).is_some() {
                return Some(hi.scale(&common));
            }
            let cffi = interpolate(&cff, &xi, v);
            if let Some(h2) = f.div_exact(&cffi) {
                if g.div_exact(&h2).is_some() {
                    return Some(h2.scale(&common));
                }
            }
            let cfgi = interpolate(&cfg, &xi, v);
            if let Some(h2) = g.div_exact(&cfgi) {
                if f.div_exact(&h2).is_some() {
                    return Some(h2.scale(&common));
                }
            }
        }
        xi = C::from_u32(73794).unwrap() * xi.clone() * xi.sqrt().sqrt()
            / C::from_u32(27011).unwrap();
    }
    None
}

/// Rebuild a polynomial in `v` from its value at `v = xi` using balanced
/// base-`xi` digits.
fn interpolate<C: Coeff>(h: &MPoly<C>, xi: &C, v: AtomId) -> MPoly<C> {
    let half = xi.clone() / C::from_u32(2).unwrap();
    let mut h = h.clone();
    let mut out = MPoly::zero();
    let mut i = 0u32;
    while !h.is_zero() {
        let g = h.map_coeffs(|c| {
            let r = c.mod_floor(xi);
            if r > half {
                r - xi.clone()
            } else {
                r
            }
        });
        out = out.add(&g.mul_term(&super::poly::Monomial::var(v, i), &C::one()));
        h = h.sub(&g).div_scalar(xi);
        i += 1;
    }
    positive(out)
}

fn content_in<C: Coeff>(p: &MPoly<C>, v: AtomId) -> MPoly<C> {
    let mut g = MPoly::zero();
    for (_, c) in p.coefficients_in(v) {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn leading_in<C: Coeff>(p: &MPoly<C>, v: AtomId) -> (u32, MPoly<C>) {
    let cs = p.coefficients_in(v);
    let (&d, c) = cs.iter().next_back().expect("nonzero");
    (d, c.clone())
}

fn prem<C: Coeff>(f: &MPoly<C>, g: &MPoly<C>, v: AtomId) -> MPoly<C> {
    let (dg, lg) = leading_in(g, v);
    let mut r = f.clone();
    while !r.is_zero() {
        let (dr, lr) = leading_in(&r, v);
        if dr < dg {
            break;
        }
        let shift = super::poly::Monomial::var(v, dr - dg);
        r = r.mul(&lg).sub(&g.mul(&lr).mul_term(&shift, &C::one()));
    }
    r
}

fn prs_gcd<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
    let v = *a.atoms().union(&b.atoms()).next().expect("non-constant");
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let cg = gcd(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() && g.degree_in(v) > 0 {
        let r = prem(&f, &g, v);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            let c = content_in(&r, v);
            r.div_exact(&c).expect("content divides")
        };
    }
    let core = if g.is_zero() { primitive(&f) } else { MPoly::one() };
    positive(core.mul(&cg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::atom::Symbol;
    use num_bigint::BigInt;

    type P = MPoly<BigInt>;

    fn x() -> P {
        P::atom(AtomId::X)
    }
    fn y() -> P {
        P::atom(AtomId::Y)
    }
    fn k(n: i64) -> P {
        P::constant(BigInt::from(n))
    }

    fn same_up_to_sign(a: &P, b: &P) -> bool {
        a == b || *a == b.neg()
    }

    #[test]
    fn shared_factor_is_recovered() {
        let common = x().pow(2).add(&y().mul(&x())).add(&k(3));
        let u = x().sub(&y().pow(3)).add(&k(7));
        let w = y().pow(2).add(&x().scale(&BigInt::from(5)));
        let g = gcd(&common.mul(&u), &common.mul(&w));
        assert!(same_up_to_sign(&g, &common), "{g:?}");
    }

    #[test]
    fn coprime_inputs_give_one() {
        let a = x().pow(3).add(&y()).add(&k(1));
        let b = x().mul(&y()).sub(&k(2));
        assert!(gcd(&a, &b).is_one());
        assert!(coprime_certificate(&a, &b));
    }

    #[test]
    fn content_and_monomials() {
        let a = x().pow(2).mul(&y()).scale(&BigInt::from(6));
        let b = x().mul(&y().pow(3)).scale(&BigInt::from(4)).add(&x().scale(&BigInt::from(10)));
        assert_eq!(gcd(&a, &b), x().scale(&BigInt::from(2)));
    }

    #[test]
    fn fallback_paths_agree() {
        let s = P::atom(AtomId::symbol(&Symbol::new("Gq")));
        let common = x().add(&s).sub(&y().pow(2));
        let a = common.mul(&x().sub(&k(1))).mul(&common);
        let b = common.mul(&y().add(&s.pow(2)));
        let expected = positive(common.clone());
        assert_eq!(gcd(&a, &b), expected);
        let pa = primitive(&a);
        let pb = primitive(&b);
        assert_eq!(prs_gcd(&pa, &pb), expected);
        assert_eq!(heu_gcd(&pa, &pb).map(positive), Some(expected));
    }

    #[test]
    fn exclusive_variable_reduction() {
        let a = x().pow(2).sub(&k(1));
        let b = x().sub(&k(1)).mul(&y()).add(&x().pow(2).sub(&k(1)).mul(&y().pow(2)));
        assert_eq!(gcd(&a, &b), x().sub(&k(1)));
    }
}
