//! Classification and verification of the identities linking the two
//! invariant families.

use std::fmt::{self, Display};

use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use crate::bgd::{self, BgdScalars};
use crate::diff::{Calculus, JetDiff, Plain, Rooted};
use crate::expr::equal::decide_zero;
use crate::expr::{Env, EvalError, RatFunc, Value, Verdict as ZeroVerdict};
use crate::fext::FExt;
use crate::jet::Jet;
use crate::ode::{pullback, transform_components, JetOde, Ode, OdeError, PointTransformation, PseudoField};
use crate::report::IdentityReport;
use crate::sample::Sampler;
use crate::scalar::{Field, Rational, Scalar};
use crate::sd::{self, apply_field, SdScalars, Vector};

/// Points searched for a general-position witness.
pub const WITNESS_SEARCH: usize = 100;
/// Jet order for pointwise evaluation; the deepest quantity used,
/// `D₁(IB₄)`, needs six derivatives of the coefficients.
pub const JET_ORDER: u32 = 7;

/// Knobs of the numeric paths.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub seed: u64,
    /// Relative tolerance of numeric comparisons.
    pub tolerance: f64,
    /// Sample points for numeric comparisons.
    pub points: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: 0,
            tolerance: 1e-9,
            points: 100,
        }
    }
}

fn display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// `F⁵` does not vanish at the point.
    GeneralPositionAt {
        #[serde(serialize_with = "display")]
        x: Rational,
        #[serde(serialize_with = "display")]
        y: Rational,
        #[serde(serialize_with = "display")]
        f5: Value,
    },
    /// `A ≡ 0` and `B ≡ 0`.
    MaximalDegeneration,
    OtherCase,
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::GeneralPositionAt { .. } => "general_position_at",
            Verdict::MaximalDegeneration => "maximal_degeneration",
            Verdict::OtherCase => "other_case",
        }
    }
}

impl Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::GeneralPositionAt { x, y, f5 } => {
                write!(f, "general position at ({x}, {y}), F^5 = {f5}")
            }
            Verdict::MaximalDegeneration => write!(f, "maximal degeneration"),
            Verdict::OtherCase => write!(f, "other case"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Set when the verdict rests on floating-point probes.
    pub probabilistic: bool,
}

/// Evaluate at a rational point, exactly when no elementary function gets
/// in the way.
pub fn eval_at(r: &RatFunc, x: &Rational, y: &Rational) -> Result<Value, EvalError> {
    match r.eval(&Env::new(x.clone(), y.clone())) {
        Ok(v) => Ok(Value::Exact(v)),
        Err(EvalError::Inexact(_)) => r.eval(&Env::new(x.to_f64(), y.to_f64())).map(Value::Float),
        Err(e) => Err(e),
    }
}

fn is_nonzero(v: &Value, tol: f64) -> bool {
    match v {
        Value::Exact(r) => !num_traits::Zero::is_zero(r),
        Value::Float(f) => f.abs() > tol,
    }
}

/// Whether a residual vanishes identically, and whether that rests on
/// probes.
fn vanishes(r: &RatFunc, seed: u64) -> (bool, bool) {
    match decide_zero(r, seed) {
        ZeroVerdict::Equal => (true, false),
        ZeroVerdict::ProbablyEqual { .. } => (true, true),
        _ => (false, false),
    }
}

/// The verdict at `point`, or at a witness found among the origin and
/// [`WITNESS_SEARCH`] seeded points.
pub fn classify(
    ode: &Ode<RatFunc>,
    point: Option<(Rational, Rational)>,
    opts: &CheckOptions,
) -> Result<Classification, EvalError> {
    let core = sd::core(&Plain, ode);
    let (a0, pa) = vanishes(&core.a, opts.seed);
    let (b0, pb) = vanishes(&core.b, opts.seed);
    if a0 && b0 {
        return Ok(Classification {
            verdict: Verdict::MaximalDegeneration,
            probabilistic: pa || pb,
        });
    }
    let at = |x: Rational, y: Rational| -> Result<Option<Classification>, EvalError> {
        let v = eval_at(&core.f5, &x, &y)?;
        Ok(is_nonzero(&v, opts.tolerance).then(|| Classification {
            probabilistic: matches!(v, Value::Float(_)),
            verdict: Verdict::GeneralPositionAt { x, y, f5: v },
        }))
    };
    let other = |probabilistic| Classification {
        verdict: Verdict::OtherCase,
        probabilistic,
    };
    if let Some((x, y)) = point {
        return Ok(at(x, y)?.unwrap_or(other(core.f5.has_func_atoms())));
    }
    let (f0, pf) = vanishes(&core.f5, opts.seed);
    if f0 {
        return Ok(other(pf));
    }
    let mut sampler = Sampler::new(opts.seed);
    let zero = Rational::from_integer(0.into());
    let candidates = std::iter::once((zero.clone(), zero)).chain((0..WITNESS_SEARCH).map(|_| sampler.point()));
    for (x, y) in candidates {
        match at(x, y) {
            Ok(Some(c)) => return Ok(c),
            Ok(None) | Err(EvalError::Pole | EvalError::Domain(_) | EvalError::NonFinite) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(other(true))
}

/// Evaluation used by the numeric fallback, in double-double precision and
/// rounded at the end.
pub trait NumericEval {
    fn eval_at(&self, x: TwoFloat, y: TwoFloat) -> Result<f64, EvalError>;
}

impl NumericEval for RatFunc {
    fn eval_at(&self, x: TwoFloat, y: TwoFloat) -> Result<f64, EvalError> {
        Ok(self.eval(&Env::new(x, y))?.to_f64())
    }
}

impl NumericEval for FExt<RatFunc> {
    fn eval_at(&self, x: TwoFloat, y: TwoFloat) -> Result<f64, EvalError> {
        Ok(self.evaluate(|k: &RatFunc| k.eval(&Env::new(x, y)))?.to_f64())
    }
}

/// A claimed identity `lhs = rhs`.
#[derive(Clone, Debug)]
pub struct Claim<E> {
    pub name: String,
    pub lhs: E,
    pub rhs: E,
}

fn claim<E>(name: impl Into<String>, lhs: E, rhs: E) -> Claim<E> {
    Claim {
        name: name.into(),
        lhs,
        rhs,
    }
}

/// Settle a claim exactly, falling back to seeded numeric probes when the
/// coefficients contain elementary functions.
pub fn settle<E>(c: &Claim<E>, transcendental: bool, opts: &CheckOptions) -> IdentityReport
where
    E: Field + Display + NumericEval,
{
    let residual = c.lhs.clone() - c.rhs.clone();
    if residual.is_zero() || !transcendental {
        return IdentityReport::exact(c.name.clone(), &residual);
    }
    let mut sampler = Sampler::new(opts.seed);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for _ in 0..opts.points * 10 {
        if n == opts.points {
            break;
        }
        let (x, y) = sampler.unit_point();
        let (x, y) = (TwoFloat::from_rational(&x), TwoFloat::from_rational(&y));
        let (Ok(l), Ok(r)) = (c.lhs.eval_at(x, y), c.rhs.eval_at(x, y)) else {
            continue;
        };
        worst = worst.max((l - r).abs() / 1f64.max(l.abs()).max(r.abs()));
        n += 1;
    }
    if n < crate::expr::equal::MIN_PROBES {
        return IdentityReport::failed(c.name.clone(), format!("only {n} admissible probe points"));
    }
    IdentityReport::numeric(c.name.clone(), worst, opts.tolerance, n)
}

/// The crosswalk between the families, with `D₁, D₂` applied as
/// invariant differentiations.
pub fn crosswalk<C: Calculus>(
    cx: &C,
    s: &SdScalars<C::E>,
    b: &BgdScalars<C::E>,
    d1: &Vector<C::E>,
    d2: &Vector<C::E>,
) -> Vec<Claim<C::E>> {
    let c = |e: &C::E| e.clone();
    let fr = |n, d| C::E::frac(n, d);
    let (i3, i6, i7, i8) = (&s.i3, &s.i6, &s.i7, &s.i8);
    let (ib1, ib2, ib3, ib4) = (&b.ib1, &b.ib2, &b.ib3, &b.ib4);
    let x = |g: &C::E| apply_field(cx, d1, g);
    let y = |g: &C::E| apply_field(cx, d2, g);
    vec![
        claim("IB3 = 15 I6", c(ib3), i6.scale(15)),
        claim("IB1 = I3 + 14/5 I8", c(ib1), c(i3) + c(i8) * fr(14, 5)),
        claim("IB4 = 3 I3 + 87/5 I8", c(ib4), i3.scale(3) + c(i8) * fr(87, 5)),
        claim(
            "IB2 = -I7 - 3 D1(I8) + 15 D2(I6) + (24 I8 + 15 I3) I6",
            c(ib2),
            -c(i7) - x(i8).scale(3) + y(i6).scale(15) + (i8.scale(24) + i3.scale(15)) * c(i6),
        ),
        claim("I6 = IB3/15", c(i6), c(ib3) * fr(1, 15)),
        claim("I3 = 29/15 IB1 - 14/45 IB4", c(i3), c(ib1) * fr(29, 15) - c(ib4) * fr(14, 45)),
        claim("I8 = IB4/9 - IB1/3", c(i8), c(ib4) * fr(1, 9) - c(ib1) * fr(1, 3)),
        claim(
            "I7 = -IB2 - D1(IB4)/3 + D1(IB1) + D2(IB3) + (21 IB1 - 2 IB4) IB3/15",
            c(i7),
            -c(ib2) - x(ib4) * fr(1, 3) + x(ib1) + y(ib3)
                + (ib1.scale(21) - ib4.scale(2)) * c(ib3) * fr(1, 15),
        ),
    ]
}

/// The dependency relations among the first family.
pub fn sd_relations<E: Field>(s: &SdScalars<E>) -> Vec<Claim<E>> {
    let c = |e: &E| e.clone();
    vec![
        claim("I2 = 1/3", c(&s.i2), E::frac(1, 3)),
        claim("I1 = -4 I6", c(&s.i1), s.i6.scale(-4)),
        claim("I4 = 4 I6", c(&s.i4), s.i6.scale(4)),
        claim("I5 = -I8", c(&s.i5), -c(&s.i8)),
        claim("I5 = I3 - L", c(&s.i5), c(&s.i3) - c(&s.l)),
        claim("I6 = -I1 + K", c(&s.i6), -c(&s.i1) + c(&s.k)),
        claim("L = I3 + I8", c(&s.l), c(&s.i3) + c(&s.i8)),
        claim("K = -3 I6", c(&s.k), s.i6.scale(-3)),
    ]
}

/// Identities that hold for every equation, `F⁵ = 0` included.
pub fn lemma_claims(ode: &Ode<RatFunc>) -> Vec<Claim<RatFunc>> {
    let core = sd::core(&Plain, ode);
    let ch = bgd::chain(&Plain, ode, false);
    let c = |e: &RatFunc| e.clone();
    vec![
        claim("beta1 = A", c(&ch.beta1), c(&core.a)),
        claim("beta2 = B", c(&ch.beta2), c(&core.b)),
        claim("J0 = -F^5", c(&ch.j0), -c(&core.f5)),
        claim("Gamma0 = -H", c(&ch.big_gamma0), -c(&core.h)),
        claim("Gamma1 = G", c(&ch.big_gamma1), c(&core.g)),
        claim(
            "3 J0 = beta2 Gamma0 - beta1 Gamma1",
            ch.j0.scale(3),
            c(&ch.beta2) * c(&ch.big_gamma0) - c(&ch.beta1) * c(&ch.big_gamma1),
        ),
        claim("3 F^5 = B H + A G", core.f5.scale(3), c(&core.b) * c(&core.h) + c(&core.a) * c(&core.g)),
    ]
}

/// Identities that need `F ≠ 0`, exact in the ring with `F` adjoined.
/// Empty when `F⁵` vanishes identically.
pub fn general_position_claims(ode: &Ode<RatFunc>) -> Vec<Claim<FExt<RatFunc>>> {
    let core = sd::core(&Plain, ode);
    let Some(cx) = Rooted::new(Plain, core.f5.clone()) else {
        return Vec::new();
    };
    let c = |e: &FExt<RatFunc>| e.clone();
    let l = |k: &RatFunc| cx.lift(k);
    let mut out = Vec::new();

    let e = sd::scalars_explicit(&cx, ode, &core);
    out.push(claim("I6 by both explicit formulas", c(&e.i6), c(&e.i6_short)));
    let Some(v) = sd::scalars_via_connection(&cx, ode, &core) else {
        return out;
    };
    for ((n, a), (_, b)) in e.named().iter().zip(v.named().iter()).filter(|((n, _), _)| *n != "I6_short") {
        out.push(claim(format!("{n} explicit = {n} via connection"), c(a), c(b)));
    }
    out.extend(sd_relations(&v));

    let fr = sd::frame(&cx, &core);
    let ch = bgd::chain(&Plain, ode, false);
    let ops = bgd::operators(&cx, &ch);
    out.push(claim("mu1^5 = J0", ops.mu1.powi(5).expect("power"), l(&ch.j0)));
    out.push(claim("mu1 = -F", c(&ops.mu1), -cx.root()));
    for (i, comp) in ["x", "y"].iter().enumerate() {
        out.push(claim(format!("D1 = X ({comp} component)"), c(&ops.d1[i]), c(&fr.x[i])));
        out.push(claim(format!("D2 = Y ({comp} component)"), c(&ops.d2[i]), c(&fr.y[i])));
        if let Some(d2) = &ops.d2_via_mu2 {
            out.push(claim(format!("D2 through mu2 = Y ({comp} component)"), c(&d2[i]), c(&fr.y[i])));
        }
    }
    let Some(b) = bgd::scalars_bgd(&cx, &ch, &ops) else {
        return out;
    };
    out.push(claim("Omega1 = L", c(&b.omega1), c(&v.l)));
    out.push(claim("Omega2 = -K", c(&b.omega2), -c(&v.k)));
    out.push(claim("(8 IB1 - IB4)/5 = Omega1", c(&b.omega1_formula), c(&b.omega1)));
    out.push(claim("IB3/5 = Omega2", c(&b.omega2_formula), c(&b.omega2)));
    out.extend(crosswalk(&cx, &e, &b, &ops.d1, &ops.d2));
    out
}

/// Both scalar families as closed forms in the ring with `F` adjoined.
/// `None` where `F⁵` vanishes identically or the operators are dependent.
pub fn symbolic_scalars(
    ode: &Ode<RatFunc>,
) -> (Option<SdScalars<FExt<RatFunc>>>, Option<BgdScalars<FExt<RatFunc>>>) {
    let core = sd::core(&Plain, ode);
    let Some(cx) = Rooted::new(Plain, core.f5.clone()) else {
        return (None, None);
    };
    let e = sd::scalars_explicit(&cx, ode, &core);
    let ch = bgd::chain(&Plain, ode, false);
    let ops = bgd::operators(&cx, &ch);
    (Some(e), bgd::scalars_bgd(&cx, &ch, &ops))
}

/// The full identity suite on one equation.
pub fn verify_identities(ode: &Ode<RatFunc>, opts: &CheckOptions) -> Vec<IdentityReport> {
    let tr = ode.has_funcs();
    let mut out: Vec<IdentityReport> = lemma_claims(ode).iter().map(|c| settle(c, tr, opts)).collect();
    out.extend(general_position_claims(ode).iter().map(|c| settle(c, tr, opts)));
    out
}

/// Values of both families at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointValues {
    #[serde(serialize_with = "display")]
    pub f5: Value,
    pub sd: Option<SdScalars<Value>>,
    pub bgd: Option<BgdScalars<Value>>,
    /// `D₁(I₈)` and `D₂(I₆)`.
    pub d1_i8: Option<Value>,
    pub d2_i6: Option<Value>,
}

/// Evaluate both families at a point through Taylor jets of the
/// coefficients. Scalars are `None` where `F⁵` vanishes.
pub fn values_at(ode: &Ode<RatFunc>, x: &Rational, y: &Rational) -> Result<PointValues, EvalError> {
    match ode.jets(x, y, JET_ORDER)? {
        JetOde::Exact(o) => values_from_jets(&o),
        JetOde::Float(o) => values_from_jets(&o),
    }
}

/// Both families in double-double precision, rounded to `f64` at the end.
/// High-degree coefficients cancel heavily in plain `f64`.
pub fn values_at_dd(ode: &Ode<RatFunc>, x: TwoFloat, y: TwoFloat) -> Result<PointValues, EvalError> {
    let (jx, jy) = Jet::point(x, y, JET_ORDER);
    let env = Env::new(jx, jy);
    values_from_jets(&ode.try_map(|k| k.eval(&env))?)
}

fn values_from_jets<T: Scalar>(o: &Ode<Jet<T>>) -> Result<PointValues, EvalError> {
    let d = JetDiff::<T>::default();
    let core = sd::core(&d, o);
    let v = |e: &FExt<Jet<T>>| e.evaluate(|j: &Jet<T>| Ok(j.value().clone()));
    let f5 = FExt::<Jet<T>>::scalar(core.f5.clone()).evaluate(|j: &Jet<T>| Ok(j.value().clone()))?;
    let Some(cx) = Rooted::new(d.clone(), core.f5.clone()) else {
        return Ok(PointValues {
            f5,
            sd: None,
            bgd: None,
            d1_i8: None,
            d2_i6: None,
        });
    };
    let s = sd::scalars_explicit(&cx, o, &core);
    let ch = bgd::chain(&d, o, false);
    let ops = bgd::operators(&cx, &ch);
    let b = bgd::scalars_bgd(&cx, &ch, &ops);
    let sv = s.map(v);
    let sd = Some(SdScalars {
        i1: sv.i1?,
        i2: sv.i2?,
        i3: sv.i3?,
        i4: sv.i4?,
        i5: sv.i5?,
        i6: sv.i6?,
        i6_short: sv.i6_short?,
        i7: sv.i7?,
        i8: sv.i8?,
        l: sv.l?,
        k: sv.k?,
    });
    let bgd = match b {
        Some(b) => {
            let bv = b.map(v);
            Some(BgdScalars {
                ib1: bv.ib1?,
                ib2: bv.ib2?,
                ib3: bv.ib3?,
                ib4: bv.ib4?,
                omega1: bv.omega1?,
                omega2: bv.omega2?,
                omega1_formula: bv.omega1_formula?,
                omega2_formula: bv.omega2_formula?,
            })
        }
        None => None,
    };
    Ok(PointValues {
        f5,
        sd,
        bgd,
        d1_i8: Some(v(&apply_field(&cx, &ops.d1, &s.i8))?),
        d2_i6: Some(v(&apply_field(&cx, &ops.d2, &s.i6))?),
    })
}

/// Values at a point and at its image.
fn matched_values(
    ode: &Ode<RatFunc>,
    pulled: &Ode<RatFunc>,
    t: &PointTransformation,
    x: &Rational,
    y: &Rational,
) -> Result<(PointValues, PointValues), EvalError> {
    let (x, y) = (TwoFloat::from_rational(x), TwoFloat::from_rational(y));
    let (xt, yt) = t.apply(x, y)?;
    Ok((values_at_dd(ode, x, y)?, values_at_dd(pulled, xt, yt)?))
}

fn weight_zero_values(p: &PointValues) -> Option<Vec<(&'static str, f64)>> {
    let s = p.sd.as_ref()?;
    let b = p.bgd.as_ref()?;
    let mut v: Vec<(&'static str, f64)> = [
        ("I3", &s.i3),
        ("I6", &s.i6),
        ("I7", &s.i7),
        ("I8", &s.i8),
        ("L", &s.l),
        ("K", &s.k),
        ("IB1", &b.ib1),
        ("IB2", &b.ib2),
        ("IB3", &b.ib3),
        ("IB4", &b.ib4),
    ]
    .iter()
    .map(|(n, v)| (*n, v.to_f64()))
    .collect();
    v.push(("D1(I8)", p.d1_i8.as_ref()?.to_f64()));
    v.push(("D2(I6)", p.d2_i6.as_ref()?.to_f64()));
    Some(v)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Check the transformation laws under `t`: `(A, B)` and `(−H, G)` are
/// covectors of weights 1 and 3, `F⁵` a pseudoscalar of weight 5, the
/// scalar invariants agree at matched points, and the classification is
/// preserved.
pub fn check_weights(
    ode: &Ode<RatFunc>,
    t: &PointTransformation,
    opts: &CheckOptions,
) -> Result<Vec<IdentityReport>, OdeError> {
    let pulled = pullback(ode, t)?;
    let tr = ode.has_funcs();
    let old = sd::core(&Plain, ode);
    let new = sd::core(&Plain, &pulled);
    let mut out = Vec::new();

    let laws = [
        ("(A, B) has weight 1", 1, [new.a.clone(), new.b.clone()], [old.a.clone(), old.b.clone()]),
        (
            "(-H, G) has weight 3",
            3,
            [-new.h.clone(), new.g.clone()],
            [-old.h.clone(), old.g.clone()],
        ),
    ];
    for (name, w, tilded, want) in laws {
        let [a, b] = tilded;
        match transform_components(&PseudoField::covector(w, a, b), t) {
            Ok(f) => {
                for (i, (got, want)) in f.components.into_iter().zip(want).enumerate() {
                    out.push(settle(&claim(format!("{name}, component {}", i + 1), got, want), tr, opts));
                }
            }
            Err(e) => out.push(IdentityReport::failed(name, e.to_string())),
        }
    }
    match PseudoField::new(0, 0, 5, vec![new.f5.clone()]).and_then(|f| transform_components(&f, t)) {
        Ok(f) => out.push(settle(&claim("F^5 has weight 5", f.components[0].clone(), old.f5.clone()), tr, opts)),
        Err(e) => out.push(IdentityReport::failed("F^5 has weight 5", e.to_string())),
    }

    let before = classify(ode, None, opts).map_err(OdeError::Eval)?;
    let after = classify(&pulled, None, opts).map_err(OdeError::Eval)?;
    let same = before.verdict.kind() == after.verdict.kind();
    out.push(if same {
        IdentityReport::exact("classification preserved", &RatFunc::zero())
    } else {
        IdentityReport::failed("classification preserved", format!("{} became {}", before.verdict, after.verdict))
    });

    if old.f5.is_zero() {
        return Ok(out);
    }
    let mut sampler = Sampler::new(opts.seed);
    let mut worst: Vec<(&'static str, f64)> = Vec::new();
    let mut n = 0;
    let mut pointwise_ok = true;
    for _ in 0..opts.points * 10 {
        if n == opts.points {
            break;
        }
        let (x, y) = sampler.unit_point();
        let Ok((a, b)) = matched_values(ode, &pulled, t, &x, &y) else {
            continue;
        };
        let (Some(va), Some(vb)) = (weight_zero_values(&a), weight_zero_values(&b)) else {
            pointwise_ok &= a.sd.is_none() && b.sd.is_none();
            continue;
        };
        if worst.is_empty() {
            worst = va.iter().map(|(n, _)| (*n, 0.0)).collect();
        }
        for ((w, (_, x)), (_, y)) in worst.iter_mut().zip(&va).zip(&vb) {
            w.1 = w.1.max(rel_err(*x, *y));
        }
        n += 1;
    }
    if n == 0 {
        out.push(IdentityReport::failed("scalars at matched points", "no admissible point"));
    }
    for (name, w) in worst {
        out.push(IdentityReport::numeric(format!("{name} agrees at matched points"), w, opts.tolerance, n));
    }
    if !pointwise_ok {
        out.push(IdentityReport::failed(
            "general position preserved at matched points",
            "F^5 vanished on one side only",
        ));
    }
    Ok(out)
}

/// An equation of the test corpus.
#[derive(Clone, Debug)]
pub struct NamedOde {
    pub name: String,
    pub ode: Ode<RatFunc>,
}

/// The zero equation, `y'' = 1 + x² y'³` and `y'' = y²`.
pub fn fixed_examples() -> Vec<NamedOde> {
    let mk = |name: &str, p: &str, s: &str| NamedOde {
        name: name.into(),
        ode: Ode::parse(p, "0", "0", s).expect("fixed example parses"),
    };
    vec![mk("zero", "0", "0"), mk("P=1,S=x^2", "1", "x^2"), mk("P=y^2", "y^2", "0")]
}

/// A polynomial of total degree at most `degree` with coefficients drawn
/// uniformly from `[-3, 3]`.
pub fn random_poly(sampler: &mut Sampler, degree: u32) -> RatFunc {
    let (x, y) = (RatFunc::x(), RatFunc::y());
    let mut acc = RatFunc::zero();
    for total in 0..=degree {
        for i in 0..=total {
            let c = sampler.int(-3, 3);
            if c != 0 {
                acc = acc + x.pow(i) * y.pow(total - i) * RatFunc::int(c);
            }
        }
    }
    acc
}

pub fn random_ode(sampler: &mut Sampler, degree: u32) -> Ode<RatFunc> {
    let mut next = || random_poly(sampler, degree);
    Ode::new(next(), next(), next(), next())
}

/// `trials` seeded random equations followed by the fixed examples.
pub fn corpus(seed: u64, trials: usize, degree: u32) -> Vec<NamedOde> {
    let mut sampler = Sampler::new(seed);
    let mut out: Vec<NamedOde> = (0..trials)
        .map(|i| NamedOde {
            name: format!("random-{i}"),
            ode: random_ode(&mut sampler, degree),
        })
        .collect();
    out.extend(fixed_examples());
    out
}

/// A random invertible affine map with small integer entries.
pub fn random_affine(sampler: &mut Sampler) -> PointTransformation {
    loop {
        let mut k = || sampler.int(-3, 3);
        let (a, b, c, d, e, g) = (k(), k(), k(), k(), k(), k());
        if let Some(t) = PointTransformation::affine(a, b, c, d, e, g) {
            return t;
        }
    }
}

/// Nonlinear maps: `ỹ = y + x²`, the swap, `x̃ = x + y²`, `x̃ = x³ + x`
/// paired with a shear, and `ỹ = y/(1 + x²)`.
pub fn fixed_maps() -> Vec<(String, PointTransformation)> {
    let rf = |s: &str| crate::special::form(s);
    let mk = |name: &str, fw: [&str; 2], inv: [&str; 2]| {
        (
            name.to_string(),
            PointTransformation {
                forward: fw.map(rf),
                inverse: inv.map(rf),
            },
        )
    };
    vec![
        mk("yt = y + x^2", ["x", "y + x^2"], ["x", "y - x^2"]),
        mk("swap", ["y", "x"], ["y", "x"]),
        mk("xt = x + y^2", ["x + y^2", "y"], ["x - y^2", "y"]),
        mk("yt = y + x^3, xt = x + yt", ["x + y + x^3", "y + x^3"], ["x - y", "y - (x - y)^3"]),
        mk("yt = y/(1 + x^2)", ["x", "y/(1 + x^2)"], ["x", "y*(1 + x^2)"]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn classification_examples() {
        let o = CheckOptions::default();
        let zero = Ode::zero();
        assert_eq!(classify(&zero, None, &o).unwrap().verdict, Verdict::MaximalDegeneration);
        let gp = Ode::parse("1", "0", "0", "x^2").unwrap();
        let v = classify(&gp, Some((q(0), q(0))), &o).unwrap();
        assert_eq!(
            v.verdict,
            Verdict::GeneralPositionAt {
                x: q(0),
                y: q(0),
                f5: Value::Exact(q(-24))
            }
        );
        assert!(!v.probabilistic);
        let oc = Ode::parse("y^2", "0", "0", "0").unwrap();
        assert_eq!(classify(&oc, None, &o).unwrap().verdict, Verdict::OtherCase);
    }

    #[test]
    fn corpus_example_passes_suite() {
        let o = Ode::parse("1", "0", "0", "x^2").unwrap();
        let r = verify_identities(&o, &CheckOptions::default());
        assert!(all_passed(&r), "{r:#?}");
        assert!(r.len() > 40);
    }

    #[test]
    fn values_on_axis() {
        let o = Ode::parse("1", "0", "0", "x^2").unwrap();
        let v = values_at(&o, &q(0), &q(0)).unwrap();
        assert_eq!(v.f5, Value::Exact(q(-24)));
        let s = v.sd.unwrap();
        assert_eq!(s.i6.to_f64(), 0.0);
        assert_eq!(s.k.to_f64(), 0.0);
        assert_eq!(s.i2, Value::Exact(Rational::new(1.into(), 3.into())));
        assert_eq!(v.bgd.unwrap().ib3.to_f64(), 0.0);
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(values_at(&o, &half, &q(0)).unwrap().f5, Value::Exact(q(-22)));
    }

    #[test]
    fn scaling_law() {
        let o = Ode::parse("1", "0", "0", "x^2").unwrap();
        let t = PointTransformation::affine(1, 0, 0, 2, 0, 0).unwrap();
        let r = check_weights(&o, &t, &CheckOptions { points: 5, ..Default::default() }).unwrap();
        assert!(all_passed(&r), "{r:#?}");
    }

    #[test]
    fn transcendental_falls_back_to_probes() {
        let o = Ode::parse("sin(x)", "0", "0", "1").unwrap();
        let r = verify_identities(&o, &CheckOptions::default());
        assert!(all_passed(&r), "{r:#?}");
    }
}
