//! The equation `y'' = P + 3Q y' + 3R y'^2 + S y'^3`, point transformations,
//! and the transformation law of pseudotensorial fields.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{
    parse_with, AtomId, Coord, Env, EvalError, Expr, NormalizeError, ParseError, ParseOptions,
    RatFunc, Symbol,
};
use crate::jet::Jet;
use crate::sample::Sampler;
use crate::scalar::{approx_eq, Field, Rational, Scalar};

/// The four coefficients of the equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Ode<K> {
    pub p: K,
    pub q: K,
    pub r: K,
    pub s: K,
}

/// Coefficients as exact rational functions of `x, y`.
pub type OdeCoefficients = Ode<RatFunc>;

impl<K> Ode<K> {
    pub fn new(p: K, q: K, r: K, s: K) -> Ode<K> {
        Ode { p, q, r, s }
    }

    pub fn map<L>(&self, f: impl Fn(&K) -> L) -> Ode<L> {
        Ode {
            p: f(&self.p),
            q: f(&self.q),
            r: f(&self.r),
            s: f(&self.s),
        }
    }

    pub fn try_map<L, E>(&self, f: impl Fn(&K) -> Result<L, E>) -> Result<Ode<L>, E> {
        Ok(Ode {
            p: f(&self.p)?,
            q: f(&self.q)?,
            r: f(&self.r)?,
            s: f(&self.s)?,
        })
    }

    pub fn as_array(&self) -> [&K; 4] {
        [&self.p, &self.q, &self.r, &self.s]
    }
}

impl Ode<RatFunc> {
    /// The equation `y'' = 0`.
    pub fn zero() -> Ode<RatFunc> {
        Ode::new(RatFunc::zero(), RatFunc::zero(), RatFunc::zero(), RatFunc::zero())
    }

    /// Parse the four coefficients from expression strings.
    pub fn parse(p: &str, q: &str, r: &str, s: &str) -> Result<Ode<RatFunc>, OdeError> {
        let one = |src: &str, key: &'static str| -> Result<RatFunc, OdeError> {
            let e = crate::expr::parse(src).map_err(|e| OdeError::Parse {
                line: 0,
                key,
                source: e,
            })?;
            Ok(e.normalize()?)
        };
        Ok(Ode::new(one(p, "P")?, one(q, "Q")?, one(r, "R")?, one(s, "S")?))
    }

    /// Expansion of every coefficient into a Taylor jet at a point.
    ///
    /// Tries exact arithmetic first and falls back to floating point only
    /// when an elementary function has an irrational value.
    pub fn jets(&self, x: &Rational, y: &Rational, order: u32) -> Result<JetOde, EvalError> {
        let (jx, jy) = Jet::point(x.clone(), y.clone(), order);
        let env = Env::new(jx, jy);
        match self.try_map(|k| k.eval(&env)) {
            Ok(o) => Ok(JetOde::Exact(o)),
            Err(EvalError::Inexact(_)) => {
                let (fx, fy) = Jet::point(x.to_f64(), y.to_f64(), order);
                let env = Env::new(fx, fy);
                Ok(JetOde::Float(self.try_map(|k| k.eval(&env))?))
            }
            Err(e) => Err(e),
        }
    }

    pub fn has_symbols(&self) -> bool {
        self.as_array().iter().any(|k| !k.symbols().is_empty())
    }

    pub fn has_funcs(&self) -> bool {
        self.as_array().iter().any(|k| k.has_func_atoms())
    }
}

/// Coefficient jets at a point, exact when possible.
#[derive(Clone, Debug)]
pub enum JetOde {
    Exact(Ode<Jet<Rational>>),
    Float(Ode<Jet<f64>>),
}

impl fmt::Display for Ode<RatFunc> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "P = {}", Expr::from(&self.p))?;
        writeln!(f, "Q = {}", Expr::from(&self.q))?;
        writeln!(f, "R = {}", Expr::from(&self.r))?;
        writeln!(f, "S = {}", Expr::from(&self.s))
    }
}

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("line {line}: {key}: {source}")]
    Parse {
        line: usize,
        key: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: expected `<name> = <expression>`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key {key} given twice")]
    DuplicateKey { line: usize, key: &'static str },
    #[error("missing key {0}")]
    MissingKey(&'static str),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error("transformation is not invertible: {0}")]
    NotInvertible(String),
    #[error("transformed equation is not cubic in the derivative (degree {0})")]
    NotCubic(u32),
    #[error("coefficients with opaque symbols cannot be transformed")]
    OpaqueSymbols,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// An ODE file with optional name.
#[derive(Clone, Debug)]
pub struct OdeFile {
    pub name: Option<String>,
    pub ode: OdeCoefficients,
}

/// Split `key = value` lines, dropping comments and blank lines.
fn key_lines(text: &str) -> impl Iterator<Item = (usize, Result<(&str, &str, usize), OdeError>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            return None;
        }
        let Some(eq) = content.find('=') else {
            return Some((line, Err(OdeError::Syntax { line })));
        };
        let key = content[..eq].trim();
        let value = &content[eq + 1..];
        Some((line, Ok((key, value, eq + 1))))
    })
}

fn shift(e: ParseError, by: usize) -> ParseError {
    ParseError {
        offset: e.offset + by,
        kind: e.kind,
    }
}

/// Parse the `P = …`, `Q = …`, `R = …`, `S = …` file format. A `name = …`
/// line is kept as metadata.
pub fn parse_ode_file(text: &str) -> Result<OdeFile, OdeError> {
    const KEYS: [&str; 4] = ["P", "Q", "R", "S"];
    let mut found: [Option<RatFunc>; 4] = Default::default();
    let mut name = None;
    let opts = ParseOptions {
        forbidden: &["xt", "yt"],
        ..ParseOptions::default()
    };
    for (line, item) in key_lines(text) {
        let (key, value, at) = item?;
        if key == "name" {
            name = Some(value.trim().to_string());
            continue;
        }
        let Some(k) = KEYS.iter().position(|&k| k == key) else {
            return Err(OdeError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if found[k].is_some() {
            return Err(OdeError::DuplicateKey { line, key: KEYS[k] });
        }
        let e = parse_with(value, &opts).map_err(|e| OdeError::Parse {
            line,
            key: KEYS[k],
            source: shift(e, at),
        })?;
        found[k] = Some(e.normalize()?);
    }
    let [p, q, r, s] = found;
    Ok(OdeFile {
        name,
        ode: Ode::new(
            p.ok_or(OdeError::MissingKey("P"))?,
            q.ok_or(OdeError::MissingKey("Q"))?,
            r.ok_or(OdeError::MissingKey("R"))?,
            s.ok_or(OdeError::MissingKey("S"))?,
        ),
    })
}

/// A point transformation `x̃ = x̃(x, y)`, `ỹ = ỹ(x, y)` with its inverse.
///
/// Both directions are stored as rational functions of the atoms `x, y`;
/// for the inverse these stand for `x̃, ỹ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointTransformation {
    pub forward: [RatFunc; 2],
    pub inverse: [RatFunc; 2],
}

/// Number of sample points for the round-trip check.
pub const ROUND_TRIP_POINTS: usize = 20;

impl PointTransformation {
    /// Checks the round trip `forward ∘ inverse = id` and `det T ≠ 0` at
    /// [`ROUND_TRIP_POINTS`] seeded sample points.
    pub fn new(
        forward: [RatFunc; 2],
        inverse: [RatFunc; 2],
        seed: u64,
    ) -> Result<PointTransformation, OdeError> {
        let t = PointTransformation { forward, inverse };
        t.check_round_trip(seed)?;
        Ok(t)
    }

    pub fn identity() -> PointTransformation {
        PointTransformation {
            forward: [RatFunc::x(), RatFunc::y()],
            inverse: [RatFunc::x(), RatFunc::y()],
        }
    }

    /// `x̃ = a x + b y + e`, `ỹ = c x + d y + g`. `None` if singular.
    pub fn affine(a: i64, b: i64, c: i64, d: i64, e: i64, g: i64) -> Option<PointTransformation> {
        let det = a * d - b * c;
        if det == 0 {
            return None;
        }
        let (x, y) = (RatFunc::x(), RatFunc::y());
        let lin = |p: i64, q: i64, r: i64| {
            x.scale(p) + y.scale(q) + RatFunc::int(r)
        };
        let fw = [lin(a, b, e), lin(c, d, g)];
        // x = (d(x̃ - e) - b(ỹ - g)) / det, y = (a(ỹ - g) - c(x̃ - e)) / det
        let k = RatFunc::rational(&Rational::new(1.into(), det.into()));
        let inv = [
            lin(d, -b, -d * e + b * g) * k.clone(),
            lin(-c, a, c * e - a * g) * k,
        ];
        Some(PointTransformation {
            forward: fw,
            inverse: inv,
        })
    }

    /// The inverse transformation.
    pub fn inverted(&self) -> PointTransformation {
        PointTransformation {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &PointTransformation) -> Option<PointTransformation> {
        Some(PointTransformation {
            forward: [
                compose(&other.forward[0], &self.forward)?,
                compose(&other.forward[1], &self.forward)?,
            ],
            inverse: [
                compose(&self.inverse[0], &other.inverse)?,
                compose(&self.inverse[1], &other.inverse)?,
            ],
        })
    }

    /// Image of a point under the forward map.
    pub fn apply<T: Scalar>(&self, x: T, y: T) -> Result<(T, T), EvalError> {
        let env = Env::new(x, y);
        Ok((self.forward[0].eval(&env)?, self.forward[1].eval(&env)?))
    }

    /// Image of a point under the inverse map.
    pub fn apply_inverse<T: Scalar>(&self, x: T, y: T) -> Result<(T, T), EvalError> {
        let env = Env::new(x, y);
        Ok((self.inverse[0].eval(&env)?, self.inverse[1].eval(&env)?))
    }

    fn check_round_trip(&self, seed: u64) -> Result<(), OdeError> {
        let jac = jacobians(self);
        let mut rng = Sampler::new(seed);
        let mut ok = 0;
        for _ in 0..ROUND_TRIP_POINTS * 20 {
            if ok == ROUND_TRIP_POINTS {
                return Ok(());
            }
            let (xt, yt) = rng.point();
            let Ok((x, y)) = self.apply_inverse(xt.to_f64(), yt.to_f64()) else {
                continue;
            };
            let Ok((bx, by)) = self.apply(x, y) else {
                continue;
            };
            let Ok(det) = jac.det_t.eval(&Env::new(x, y)) else {
                continue;
            };
            if !(approx_eq(bx, xt.to_f64(), 1e-9) && approx_eq(by, yt.to_f64(), 1e-9)) {
                return Err(OdeError::NotInvertible(format!(
                    "round trip fails at ({xt}, {yt})"
                )));
            }
            if det == 0.0 {
                return Err(OdeError::NotInvertible(format!(
                    "det T vanishes at ({x}, {y})"
                )));
            }
            ok += 1;
        }
        if ok == ROUND_TRIP_POINTS {
            return Ok(());
        }
        Err(OdeError::NotInvertible(
            "too few sample points outside the poles of the maps".into(),
        ))
    }
}

/// Substitute `(x, y) := (u, v)` into `f`.
fn compose(f: &RatFunc, uv: &[RatFunc; 2]) -> Option<RatFunc> {
    f.substitute(&|a| {
        if a == AtomId::X {
            Some(uv[0].clone())
        } else if a == AtomId::Y {
            Some(uv[1].clone())
        } else {
            None
        }
    })
}

/// `S` and `T` of a point transformation.
///
/// `T[i][j] = ∂x̃^i/∂x^j` is a function of the old coordinates and
/// `S[i][j] = ∂x^i/∂x̃^j` a function of the new ones.
#[derive(Clone, Debug)]
pub struct TransitionMatrices {
    pub s: [[RatFunc; 2]; 2],
    pub t: [[RatFunc; 2]; 2],
    pub det_s: RatFunc,
    pub det_t: RatFunc,
}

fn jacobian(map: &[RatFunc; 2]) -> [[RatFunc; 2]; 2] {
    [
        [map[0].partial(Coord::X), map[0].partial(Coord::Y)],
        [map[1].partial(Coord::X), map[1].partial(Coord::Y)],
    ]
}

fn det2(m: &[[RatFunc; 2]; 2]) -> RatFunc {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn jacobians(t: &PointTransformation) -> TransitionMatrices {
    let s = jacobian(&t.inverse);
    let tm = jacobian(&t.forward);
    TransitionMatrices {
        det_s: det2(&s),
        det_t: det2(&tm),
        s,
        t: tm,
    }
}

impl TransitionMatrices {
    /// `S` rewritten as a function of the old coordinates.
    pub fn s_in_old(&self, t: &PointTransformation) -> Option<[[RatFunc; 2]; 2]> {
        let c = |f: &RatFunc| compose(f, &t.forward);
        Some([
            [c(&self.s[0][0])?, c(&self.s[0][1])?],
            [c(&self.s[1][0])?, c(&self.s[1][1])?],
        ])
    }
}

/// Reserved symbol standing for the derivative `ỹ'` during pullback.
fn slope_symbol() -> Symbol {
    Symbol::new("$slope")
}

/// Coefficients of the equation written in the new coordinates.
///
/// The inverse map is substituted into the equation, `y'` and `y''` are
/// expressed through `ỹ'` and `ỹ''`, and the result is solved for `ỹ''`. The
/// right-hand side must come out as a cubic polynomial in `ỹ'`.
pub fn pullback(ode: &OdeCoefficients, t: &PointTransformation) -> Result<OdeCoefficients, OdeError> {
    if ode.has_symbols() {
        return Err(OdeError::OpaqueSymbols);
    }
    let [phi, psi] = &t.inverse;
    let slope = RatFunc::symbol(&slope_symbol());
    let sq = slope.pow(2);
    let d = |f: &RatFunc, c| f.partial(c);
    let (phi1, phi2, psi1, psi2) = (
        d(phi, Coord::X),
        d(phi, Coord::Y),
        d(psi, Coord::X),
        d(psi, Coord::Y),
    );
    let second = |f1: &RatFunc, f2: &RatFunc| {
        d(f1, Coord::X) + d(f1, Coord::Y).scale(2) * slope.clone() + d(f2, Coord::Y) * sq.clone()
    };
    let num = psi1.clone() + psi2.clone() * slope.clone();
    let den = phi1.clone() + phi2.clone() * slope.clone();
    let num2 = second(&psi1, &psi2);
    let den2 = second(&phi1, &phi2);
    let det_s = &phi1 * &psi2 - &phi2 * &psi1;
    let inv_det = det_s
        .inv()
        .ok_or_else(|| OdeError::NotInvertible("det S vanishes identically".into()))?;
    let sub = |f: &RatFunc| {
        compose(f, &t.inverse)
            .ok_or_else(|| OdeError::NotInvertible("inverse map hits a pole identically".into()))
    };
    let o = ode.try_map(sub)?;
    let rhs = o.p.clone() * den.pow(3)
        + o.q.scale(3) * num.clone() * den.pow(2)
        + o.r.scale(3) * num.pow(2) * den.clone()
        + o.s.clone() * num.pow(3)
        - num2 * den
        + num * den2;
    let rhs = rhs * inv_det;
    let coeffs = rhs
        .coefficients_in(AtomId::symbol(&slope_symbol()))
        .ok_or(OdeError::NotCubic(u32::MAX))?;
    if let Some((&deg, _)) = coeffs.iter().next_back() {
        if deg > 3 {
            return Err(OdeError::NotCubic(deg));
        }
    }
    let get = |k: u32| coeffs.get(&k).cloned().unwrap_or_else(RatFunc::zero);
    let third = RatFunc::rational(&Rational::new(1.into(), 3.into()));
    Ok(Ode::new(get(0), get(1) * third.clone(), get(2) * third, get(3)))
}

/// Components of a pseudotensorial field of valence `(r, s)` and weight `m`.
///
/// Components are stored upper indices first, each index in `{0, 1}`, in
/// row-major order; a covector is `[α₁, α₂]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PseudoField<K> {
    pub upper: usize,
    pub lower: usize,
    pub weight: i32,
    pub components: Vec<K>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("expected valence ({0}, {1})")]
    Valence(usize, usize),
    #[error("component count does not match the valence")]
    Shape,
    #[error("transformation is singular or hits a pole")]
    Singular,
}

impl<K: Field> PseudoField<K> {
    pub fn new(
        upper: usize,
        lower: usize,
        weight: i32,
        components: Vec<K>,
    ) -> Result<PseudoField<K>, FieldError> {
        if components.len() != 1 << (upper + lower) {
            return Err(FieldError::Shape);
        }
        Ok(PseudoField {
            upper,
            lower,
            weight,
            components,
        })
    }

    pub fn covector(weight: i32, a: K, b: K) -> PseudoField<K> {
        PseudoField {
            upper: 0,
            lower: 1,
            weight,
            components: vec![a, b],
        }
    }

    /// The skew field `d` with lower indices, weight −1.
    pub fn skew_lower() -> PseudoField<K> {
        PseudoField {
            upper: 0,
            lower: 2,
            weight: -1,
            components: vec![K::zero(), K::one(), -K::one(), K::zero()],
        }
    }

    /// `α^i = Σ d^{ik} α_k` with `d^{12} = 1`, `d^{21} = −1`; the weight goes
    /// up by one.
    pub fn raise_index(&self) -> Result<PseudoField<K>, FieldError> {
        if (self.upper, self.lower) != (0, 1) {
            return Err(FieldError::Valence(0, 1));
        }
        let c = &self.components;
        Ok(PseudoField {
            upper: 1,
            lower: 0,
            weight: self.weight + 1,
            components: vec![c[1].clone(), -c[0].clone()],
        })
    }
}

/// Apply the transformation law: untilded components from tilded ones,
///
/// `F^{i..}_{j..} = (det T)^m Σ S^i_k … T^q_j … F̃^{k..}_{q..}`.
///
/// `tilded` holds components as functions of the new coordinates; the
/// result is a function of the old ones.
pub fn transform_components(
    tilded: &PseudoField<RatFunc>,
    t: &PointTransformation,
) -> Result<PseudoField<RatFunc>, FieldError> {
    let jac = jacobians(t);
    let s_old = jac.s_in_old(t).ok_or(FieldError::Singular)?;
    let comps: Vec<RatFunc> = tilded
        .components
        .iter()
        .map(|c| compose(c, &t.forward).ok_or(FieldError::Singular))
        .collect::<Result<_, _>>()?;
    let det = jac.det_t.powi(tilded.weight).ok_or(FieldError::Singular)?;
    let out = apply_law(&comps, tilded.upper, tilded.lower, &s_old, &jac.t)
        .into_iter()
        .map(|c| c * det.clone())
        .collect();
    Ok(PseudoField {
        upper: tilded.upper,
        lower: tilded.lower,
        weight: tilded.weight,
        components: out,
    })
}

/// Contract every upper index with `S` and every lower index with `T`.
pub fn apply_law<K: Field>(
    comps: &[K],
    upper: usize,
    lower: usize,
    s: &[[K; 2]; 2],
    t: &[[K; 2]; 2],
) -> Vec<K> {
    let n = upper + lower;
    let mut cur = comps.to_vec();
    // Contract one slot at a time; slot `pos` counts from the left.
    for pos in 0..n {
        let stride = 1 << (n - 1 - pos);
        let mut next = vec![K::zero(); cur.len()];
        for (idx, out) in next.iter_mut().enumerate() {
            let i = (idx / stride) & 1;
            let base = idx & !stride;
            let mut acc = K::zero();
            for k in 0..2 {
                let src = base | (k * stride);
                let w = if pos < upper {
                    s[i][k].clone()
                } else {
                    t[k][i].clone()
                };
                if !w.is_zero() && !cur[src].is_zero() {
                    acc = acc + w * cur[src].clone();
                }
            }
            *out = acc;
        }
        cur = next;
    }
    cur
}

/// Parse the transformation file format: lines `xt = …`, `yt = …` in `x, y`
/// and `x = …`, `y = …` in `xt, yt`.
pub fn parse_map_file(text: &str, seed: u64) -> Result<PointTransformation, OdeError> {
    const KEYS: [&str; 4] = ["xt", "yt", "x", "y"];
    let fw_opts = ParseOptions {
        forbidden: &["xt", "yt"],
        ..ParseOptions::default()
    };
    let inv_opts = ParseOptions {
        x: "xt",
        y: "yt",
        forbidden: &["x", "y"],
    };
    let mut found: [Option<RatFunc>; 4] = Default::default();
    let mut seen = HashSet::new();
    for (line, item) in key_lines(text) {
        let (key, value, at) = item?;
        let Some(k) = KEYS.iter().position(|&k| k == key) else {
            return Err(OdeError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if !seen.insert(k) {
            return Err(OdeError::DuplicateKey { line, key: KEYS[k] });
        }
        let opts = if k < 2 { &fw_opts } else { &inv_opts };
        let e = parse_with(value, opts).map_err(|e| OdeError::Parse {
            line,
            key: KEYS[k],
            source: shift(e, at),
        })?;
        found[k] = Some(e.normalize()?);
    }
    let [xt, yt, x, y] = found;
    PointTransformation::new(
        [
            xt.ok_or(OdeError::MissingKey("xt"))?,
            yt.ok_or(OdeError::MissingKey("yt"))?,
        ],
        [
            x.ok_or(OdeError::MissingKey("x"))?,
            y.ok_or(OdeError::MissingKey("y"))?,
        ],
        seed,
    )
}

/// Matrix product of 2×2 matrices.
pub fn mat_mul<K: Field>(a: &[[K; 2]; 2], b: &[[K; 2]; 2]) -> [[K; 2]; 2] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone())
    })
}

/// `true` when the matrix is the identity.
pub fn is_identity<K: Field>(m: &[[K; 2]; 2]) -> bool {
    m[0][0].is_one() && m[1][1].is_one() && m[0][1].is_zero() && m[1][0].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn rf(s: &str) -> RatFunc {
        parse(s).unwrap().normalize().unwrap()
    }

    fn map(xt: &str, yt: &str, x: &str, y: &str) -> PointTransformation {
        let text = format!("xt = {xt}\nyt = {yt}\nx = {x}\ny = {y}\n");
        parse_map_file(&text, 1).unwrap()
    }

    #[test]
    fn jacobian_examples() {
        let id = jacobians(&PointTransformation::identity());
        assert!(is_identity(&id.s) && is_identity(&id.t));
        assert!(id.det_t.is_one());

        let sc = jacobians(&map("x", "2*y", "xt", "yt/2"));
        assert_eq!(sc.t[1][1], rf("2"));
        assert_eq!(sc.det_t, rf("2"));
        assert_eq!(sc.s[1][1], rf("1/2"));

        let t = map("x", "y + x^2", "xt", "yt - xt^2");
        let j = jacobians(&t);
        assert_eq!(j.t[1][0], rf("2*x"));
        assert!(j.det_t.is_one());
        let s_old = j.s_in_old(&t).unwrap();
        assert!(is_identity(&mat_mul(&s_old, &j.t)));
    }

    #[test]
    fn pullback_examples() {
        let o = Ode::parse("1", "x", "y^2", "x*y").unwrap();
        assert_eq!(pullback(&o, &PointTransformation::identity()).unwrap(), o);
        let flat = Ode::zero();
        for t in [map("x", "2*y", "xt", "yt/2"), map("y", "x", "yt", "xt")] {
            assert_eq!(pullback(&flat, &t).unwrap(), flat);
        }
        // y'' = 0 under ỹ = y + x²: ỹ'' = 2.
        let t = map("x", "y + x^2", "xt", "yt - xt^2");
        let p = pullback(&flat, &t).unwrap();
        assert_eq!(p, Ode::parse("2", "0", "0", "0").unwrap());
    }

    #[test]
    fn pullback_round_trip() {
        let o = Ode::parse("x*y", "1 - y", "x^2", "3").unwrap();
        let t = map("x + y^2", "y", "xt - yt^2", "yt");
        let back = pullback(&pullback(&o, &t).unwrap(), &t.inverted()).unwrap();
        assert_eq!(back, o);
    }

    #[test]
    fn skew_field_is_invariant() {
        let d = PseudoField::<RatFunc>::skew_lower();
        for t in [map("x + 2*y", "3*x - y", "(xt + 2*yt)/7", "(3*xt - yt)/7"), map("y", "x + y^2", "yt - xt^2", "xt")] {
            assert_eq!(transform_components(&d, &t).unwrap(), d);
        }
    }

    #[test]
    fn raise_examples() {
        let a = PseudoField::covector(1, rf("A"), rf("B"));
        assert_eq!(a.raise_index().unwrap().components, vec![rf("B"), rf("-A")]);
        let b = PseudoField::covector(3, rf("-H"), rf("G"));
        let up = b.raise_index().unwrap();
        assert_eq!(up.components, vec![rf("G"), rf("H")]);
        assert_eq!(up.weight, 4);
        assert_eq!(up.raise_index(), Err(FieldError::Valence(0, 1)));
    }

    #[test]
    fn pseudoscalar_scaling() {
        let one = PseudoField::new(0, 0, 1, vec![rf("x + y")]).unwrap();
        let t = map("x", "2*y", "xt", "yt/2");
        let got = transform_components(&one, &t).unwrap();
        assert_eq!(got.components[0], rf("2*x + 4*y"));
    }

    #[test]
    fn file_errors() {
        assert!(matches!(parse_ode_file("P = 1\nQ = 0\nR = 0\n"), Err(OdeError::MissingKey("S"))));
        assert!(matches!(
            parse_ode_file("P = 1\nP = 2\n"),
            Err(OdeError::DuplicateKey { line: 2, .. })
        ));
        match parse_ode_file("P = 1\nQ = 2 +\nR=0\nS=0") {
            Err(OdeError::Parse { line: 2, key: "Q", .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_map_file("xt = x\nyt = x\nx = xt\ny = yt\n", 0).is_err());
        let f = parse_ode_file("# comment\nname = demo\nP = 1\nQ = 0\nR = 0\nS = x^2 # tail\n").unwrap();
        assert_eq!(f.name.as_deref(), Some("demo"));
    }
}
