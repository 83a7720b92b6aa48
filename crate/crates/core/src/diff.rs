//! Derivations and the ring that carries the fifth root of `F⁵`.

use std::marker::PhantomData;
use std::sync::Arc;

use crate::expr::{Coord, RatFunc};
use crate::fext::{FCtx, FExt};
use crate::jet::Jet;
use crate::scalar::{Field, Scalar};

/// A pair of commuting partial derivatives on a field of functions.
pub trait Derivation: Sync {
    type K: Field;

    fn d(&self, e: &Self::K, c: Coord) -> Self::K;

    fn dx(&self, e: &Self::K) -> Self::K {
        self.d(e, Coord::X)
    }

    fn dy(&self, e: &Self::K) -> Self::K {
        self.d(e, Coord::Y)
    }

    /// `∂^{p+q} / ∂x^p ∂y^q`.
    fn dn(&self, e: &Self::K, p: u32, q: u32) -> Self::K {
        let mut r = e.clone();
        for _ in 0..p {
            r = self.dx(&r);
        }
        for _ in 0..q {
            r = self.dy(&r);
        }
        r
    }
}

/// Ordinary partial derivatives of rational functions.
#[derive(Clone, Copy, Debug, Default)]
pub struct Plain;

impl Derivation for Plain {
    type K = RatFunc;

    fn d(&self, e: &RatFunc, c: Coord) -> RatFunc {
        e.partial(c)
    }
}

/// Partial derivatives of Taylor jets.
#[derive(Debug)]
pub struct JetDiff<T>(PhantomData<fn() -> T>);

impl<T> Default for JetDiff<T> {
    fn default() -> Self {
        JetDiff(PhantomData)
    }
}

impl<T> Clone for JetDiff<T> {
    fn clone(&self) -> Self {
        JetDiff(PhantomData)
    }
}

impl<T: Scalar> Derivation for JetDiff<T> {
    type K = Jet<T>;

    fn d(&self, e: &Jet<T>, c: Coord) -> Jet<T> {
        e.derivative(c)
    }
}

/// A derivation extended to a ring containing the pseudoscalar `F`.
pub trait Calculus: Sync {
    type D: Derivation;
    type E: Field;

    fn base(&self) -> &Self::D;

    fn lift(&self, k: &<Self::D as Derivation>::K) -> Self::E;

    /// The element `F`.
    fn root(&self) -> Self::E;

    fn d_ext(&self, e: &Self::E, c: Coord) -> Self::E;

    /// `F^n` for any integer `n`.
    fn root_pow(&self, n: i32) -> Self::E {
        self.root().powi(n).expect("F is invertible")
    }
}

/// `F` adjoined as a formal fifth root of a given `F⁵`.
#[derive(Clone, Debug)]
pub struct Rooted<D: Derivation> {
    base: D,
    ctx: Arc<FCtx<D::K>>,
}

impl<D: Derivation> Rooted<D> {
    /// `None` if `f5` is zero.
    pub fn new(base: D, f5: D::K) -> Option<Rooted<D>> {
        let ctx = Arc::new(FCtx::new(f5, &base)?);
        Some(Rooted { base, ctx })
    }

    pub fn ctx(&self) -> &Arc<FCtx<D::K>> {
        &self.ctx
    }
}

impl<D: Derivation> Calculus for Rooted<D>
where
    D::K: Send + Sync,
{
    type D = D;
    type E = FExt<D::K>;

    fn base(&self) -> &D {
        &self.base
    }

    fn lift(&self, k: &D::K) -> FExt<D::K> {
        FExt::scalar(k.clone())
    }

    fn root(&self) -> FExt<D::K> {
        FExt::root(&self.ctx)
    }

    fn d_ext(&self, e: &FExt<D::K>, c: Coord) -> FExt<D::K> {
        e.derive(&self.base, c)
    }

    fn root_pow(&self, n: i32) -> FExt<D::K> {
        FExt::root_pow(&self.ctx, n)
    }
}
