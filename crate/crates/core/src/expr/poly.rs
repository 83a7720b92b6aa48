//! Sparse multivariate polynomials over an integer-like coefficient ring.
//!
//! Terms are kept sorted by descending monomial in lexicographic order where
//! the atom with the smaller interned id is the more significant variable.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{AddAssign, Mul, SubAssign};

use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use smallvec::SmallVec;

use super::atom::AtomId;

/// Coefficient ring requirements for [`MPoly`].
pub trait Coeff:
    Integer
    + Signed
    + Roots
    + Clone
    + Hash
    + Debug
    + Display
    + ToPrimitive
    + FromPrimitive
    + AddAssign
    + SubAssign
    + Send
    + Sync
{
    /// Product without consuming either operand.
    fn mul_ref(&self, o: &Self) -> Self;
}

impl<T> Coeff for T
where
    T: Integer
        + Signed
        + Roots
        + Clone
        + Hash
        + Debug
        + Display
        + ToPrimitive
        + FromPrimitive
        + AddAssign
        + SubAssign
        + Send
        + Sync,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
}

/// Power product of atoms, stored as `(atom, exponent)` pairs sorted by atom
/// with all exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(AtomId, u32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(v: AtomId, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        let mut s = SmallVec::new();
        s.push((v, e));
        Monomial(s)
    }

    pub fn from_pairs(mut pairs: Vec<(AtomId, u32)>) -> Monomial {
        pairs.sort_by_key(|p| p.0);
        let mut out: SmallVec<[(AtomId, u32); 4]> = SmallVec::new();
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(AtomId, u32)] {
        &self.0
    }

    pub fn degree_of(&self, v: AtomId) -> u32 {
        self.0
            .iter()
            .find(|p| p.0 == v)
            .map(|p| p.1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        let b = &other.0;
        for &(v, e) in self.0.iter() {
            if j < b.len() && b[j].0 < v {
                return None;
            }
            if j < b.len() && b[j].0 == v {
                match e.cmp(&b[j].1) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - b[j].1)),
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in self.0.iter() {
            let f = other.degree_of(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Remove `v` from the monomial, returning its exponent.
    pub fn split_var(&self, v: AtomId) -> (u32, Monomial) {
        let mut e = 0;
        let mut out = SmallVec::new();
        for &(w, k) in self.0.iter() {
            if w == v {
                e = k;
            } else {
                out.push((w, k));
            }
        }
        (e, Monomial(out))
    }

    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * n)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va == vb {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                    } else if va < vb {
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
            }
            i += 1;
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
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
}

/// Mixed-radix indexing of an exponent box. The most significant atom gets
/// the largest stride, so descending index order is descending monomial
/// order.
struct Grid {
    atoms: SmallVec<[AtomId; 4]>,
    radix: SmallVec<[u32; 4]>,
    stride: SmallVec<[usize; 4]>,
    size: usize,
}

impl Grid {
    /// Box with the given per-atom maximum exponents, sorted by atom.
    fn new(bounds: &[(AtomId, u32)], limit: usize) -> Option<Grid> {
        let mut stride: SmallVec<[usize; 4]> = SmallVec::from_elem(0, bounds.len());
        let mut size = 1usize;
        for i in (0..bounds.len()).rev() {
            stride[i] = size;
            size = size.checked_mul(bounds[i].1 as usize + 1)?;
            if size > limit {
                return None;
            }
        }
        Some(Grid {
            atoms: bounds.iter().map(|b| b.0).collect(),
            radix: bounds.iter().map(|b| b.1 + 1).collect(),
            stride,
            size,
        })
    }

    /// Exponents of `m` along the grid axes, if `m` lies in the box.
    fn exponents(&self, m: &Monomial) -> Option<SmallVec<[u32; 4]>> {
        let mut out: SmallVec<[u32; 4]> = SmallVec::from_elem(0, self.atoms.len());
        let mut j = 0;
        for &(v, e) in m.pairs() {
            while j < self.atoms.len() && self.atoms[j] < v {
                j += 1;
            }
            if j == self.atoms.len() || self.atoms[j] != v || e >= self.radix[j] {
                return None;
            }
            out[j] = e;
        }
        Some(out)
    }

    fn index_of(&self, exps: &[u32]) -> usize {
        exps.iter().zip(&self.stride).map(|(&e, &s)| e as usize * s).sum()
    }

    fn monomial(&self, mut idx: usize) -> Monomial {
        let mut out = SmallVec::new();
        for (j, &s) in self.stride.iter().enumerate() {
            let e = idx / s;
            idx %= s;
            if e > 0 {
                out.push((self.atoms[j], e as u32));
            }
        }
        Monomial(out)
    }
}

/// Sparse polynomial with coefficients in `C`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: vec![(Monomial::one(), c)],
        }
    }

    pub fn atom(v: AtomId) -> Self {
        Self::term(Monomial::var(v, 1), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: vec![(m, c)],
        }
    }

    /// Build from arbitrary terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(e) => *e += c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    /// Leading term in the internal order.
    pub fn lead(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn lead_coeff(&self) -> C {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(C::zero)
    }

    pub fn atoms(&self) -> BTreeSet<AtomId> {
        let mut s = BTreeSet::new();
        for (m, _) in &self.terms {
            for &(v, _) in m.pairs() {
                s.insert(v);
            }
        }
        s
    }

    pub fn contains_atom(&self, v: AtomId) -> bool {
        self.terms.iter().any(|(m, _)| m.degree_of(v) > 0)
    }

    pub fn degree_in(&self, v: AtomId) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_of(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul_ref(k)))
                .collect(),
        }
    }

    /// Divide every coefficient by `k`; the caller guarantees exactness.
    pub fn div_scalar(&self, k: &C) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone() / k.clone()))
                .collect(),
        }
    }

    /// Largest exponent of each atom, sorted by atom.
    fn degree_bounds(&self) -> Vec<(AtomId, u32)> {
        let mut b: BTreeMap<AtomId, u32> = BTreeMap::new();
        for (m, _) in &self.terms {
            for &(v, e) in m.pairs() {
                let d = b.entry(v).or_insert(0);
                *d = (*d).max(e);
            }
        }
        b.into_iter().collect()
    }

    /// Product accumulated in a dense exponent box, when the box is not
    /// much larger than the number of term products.
    fn mul_dense(&self, other: &Self) -> Option<Self> {
        let mut bounds: BTreeMap<AtomId, u32> = self.degree_bounds().into_iter().collect();
        for (v, e) in other.degree_bounds() {
            *bounds.entry(v).or_insert(0) += e;
        }
        let bounds: Vec<(AtomId, u32)> = bounds.into_iter().collect();
        let grid = Grid::new(&bounds, (4 * self.len() * other.len()).max(1 << 12))?;
        let idx = |p: &Self| -> Vec<usize> {
            p.terms
                .iter()
                .map(|(m, _)| grid.index_of(&grid.exponents(m).expect("inside the product box")))
                .collect()
        };
        let (ia, ib) = (idx(self), idx(other));
        let mut acc: Vec<C> = vec![C::zero(); grid.size];
        for ((_, ca), &i) in self.terms.iter().zip(&ia) {
            for ((_, cb), &j) in other.terms.iter().zip(&ib) {
                acc[i + j] += ca.mul_ref(cb);
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (grid.monomial(i), c))
            .collect();
        Some(MPoly { terms })
    }

    /// Exact division in the dividend's exponent box. Every term of an exact
    /// quotient times the divisor stays inside that box, so leaving it
    /// proves the division inexact.
    fn div_exact_dense(&self, d: &Self) -> Option<Option<Self>> {
        let grid = Grid::new(&self.degree_bounds(), (8 * self.len()).max(1 << 12))?;
        let Some(dexps) = d.terms.iter().map(|(m, _)| grid.exponents(m)).collect::<Option<Vec<_>>>() else {
            return Some(None);
        };
        let n = grid.atoms.len();
        let mut dmax: SmallVec<[u32; 4]> = SmallVec::from_elem(0, n);
        for e in &dexps {
            for k in 0..n {
                dmax[k] = dmax[k].max(e[k]);
            }
        }
        let didx: Vec<usize> = dexps.iter().map(|e| grid.index_of(e)).collect();
        let (lexp, lc) = (&dexps[0], &d.terms[0].1);
        let mut rem: Vec<C> = vec![C::zero(); grid.size];
        for (m, c) in &self.terms {
            rem[grid.index_of(&grid.exponents(m).expect("own box"))] = c.clone();
        }
        let mut quot = Vec::new();
        for i in (0..grid.size).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let (qc, r) = rem[i].div_rem(lc);
            if !r.is_zero() {
                return Some(None);
            }
            let qm = grid.monomial(i);
            let Some(mut qe) = grid.exponents(&qm) else {
                return Some(None);
            };
            for k in 0..n {
                if qe[k] < lexp[k] || qe[k] - lexp[k] + dmax[k] >= grid.radix[k] {
                    return Some(None);
                }
                qe[k] -= lexp[k];
            }
            let qi = grid.index_of(&qe);
            for (dc, &dk) in d.terms[1..].iter().map(|t| &t.1).zip(&didx[1..]) {
                rem[qi + dk] -= qc.mul_ref(dc);
            }
            rem[i] = C::zero();
            quot.push((grid.monomial(qi), qc));
        }
        Some(Some(MPoly { terms: quot }))
    }

    pub fn mul_term(&self, mono: &Monomial, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.mul_ref(k)))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &C| if negate { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1.clone() + sign(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        MPoly { terms: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        if other.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if let Some(p) = self.mul_dense(other) {
            return p;
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                *acc.entry(m).or_insert_with(C::zero) += ca.mul_ref(cb);
            }
        }
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one();
        }
        if self.len() == 1 {
            let (m, c) = &self.terms[0];
            return Self::term(m.pow(n), num_traits::pow(c.clone(), n as usize));
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division: `Some(q)` with `self = q * d`, or `None` if `d` does
    /// not divide `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                let q = m.div(dm)?;
                let (qc, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.push((q, qc));
            }
            return Some(MPoly { terms: out });
        }
        if d.len() > self.len() && d.total_degree() > self.total_degree() {
            return None;
        }
        if let Some(q) = self.div_exact_dense(d) {
            return q;
        }
        let (lm, lc) = &d.terms[0];
        let mut rem: BTreeMap<Monomial, C> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, C)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(lm)?;
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (dm, dc) in &d.terms[1..] {
                let tm = qm.mul(dm);
                let tc = qc.mul_ref(dc);
                match rem.entry(tm) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= tc;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-tc);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(MPoly { terms: quot })
    }

    /// Positive gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> C {
        let mut g = C::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn max_norm(&self) -> C {
        self.terms
            .iter()
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(C::zero)
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let v = f(c);
                    (!v.is_zero()).then(|| (m.clone(), v))
                })
                .collect(),
        }
    }

    /// Coefficients with respect to `v`, keyed by exponent.
    pub fn coefficients_in(&self, v: AtomId) -> BTreeMap<u32, Self> {
        let mut parts: BTreeMap<u32, Vec<(Monomial, C)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            parts.entry(e).or_default().push((rest, c.clone()));
        }
        // Removing a variable preserves the relative order of the remaining
        // monomials within each exponent class.
        parts
            .into_iter()
            .map(|(e, terms)| (e, MPoly { terms }))
            .collect()
    }

    /// Substitute the integer `value` for the atom `v`.
    pub fn eval_atom(&self, v: AtomId, value: &C) -> Self {
        let deg = self.degree_in(v) as usize;
        if deg == 0 {
            return self.clone();
        }
        let mut powers = Vec::with_capacity(deg + 1);
        powers.push(C::one());
        for i in 1..=deg {
            let p = powers[i - 1].clone() * value.clone();
            powers.push(p);
        }
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let (e, rest) = m.split_var(v);
            (rest, c.clone() * powers[e as usize].clone())
        }))
    }

    /// Formal partial derivative with respect to the atom `v`.
    pub fn derivative(&self, v: AtomId) -> Self {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if e == 0 {
                continue;
            }
            let m2 = rest.mul(&Monomial::var(v, e - 1));
            out.push((m2, c.clone() * C::from_u32(e).expect("exponent fits")));
        }
        Self::from_terms(out)
    }
}

impl<C: Coeff> Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{m:?}")?;
        }
        Ok(())
    }
}
