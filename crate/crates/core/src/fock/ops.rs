//! Composite operators on `F^α(V, ψ)` built from the generator action.

use std::sync::Arc;

use crate::error::Result;
use crate::field::Cyclotomic;
use crate::lattice::ExpVec;
use crate::lie::{BElement, LoopElement};

use super::{FVector, FockModule};

/// A linear operator on module vectors, kept as a closure.
#[derive(Clone)]
pub struct Operator<'a>(Arc<dyn Fn(&FVector) -> FVector + Send + Sync + 'a>);

impl<'a> Operator<'a> {
    pub fn new(f: impl Fn(&FVector) -> FVector + Send + Sync + 'a) -> Self {
        Self(Arc::new(f))
    }

    pub fn identity() -> Self {
        Self::new(FVector::clone)
    }

    pub fn zero() -> Self {
        Self::new(|_| FVector::zero())
    }

    pub fn apply(&self, xi: &FVector) -> FVector {
        (self.0)(xi)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Operator<'a>) -> Operator<'a> {
        let (f, g) = (self.clone(), other.clone());
        Self::new(move |x| f.apply(&g.apply(x)))
    }

    pub fn add(&self, other: &Operator<'a>) -> Operator<'a> {
        let (f, g) = (self.clone(), other.clone());
        Self::new(move |x| f.apply(x).add(&g.apply(x)))
    }

    pub fn sub(&self, other: &Operator<'a>) -> Operator<'a> {
        let (f, g) = (self.clone(), other.clone());
        Self::new(move |x| f.apply(x).sub(&g.apply(x)))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Operator<'a> {
        let (f, c) = (self.clone(), c.clone());
        Self::new(move |x| f.apply(x).scale(&c))
    }

    /// `[self, other] = self ∘ other - other ∘ self`.
    pub fn commutator(&self, other: &Operator<'a>) -> Operator<'a> {
        self.compose(other).sub(&other.compose(self))
    }
}

impl FockModule {
    /// The action of a fixed loop element as an operator.
    pub fn op(&self, x: LoopElement) -> Operator<'_> {
        Operator::new(move |xi| self.act(&x, xi).expect("operator input matches module"))
    }

    pub fn op_t_mult(&self, a: &ExpVec, b: &BElement) -> Operator<'_> {
        self.op(self.t_elem(a, b))
    }

    pub fn op_ad(&self, a: &ExpVec, b: &BElement) -> Operator<'_> {
        self.op(self.ad_elem(a, b))
    }

    pub fn op_d(&self, u: &[Cyclotomic], r: &ExpVec, b: &BElement) -> Result<Operator<'_>> {
        Ok(self.op(self.d_elem(u, r, b)?))
    }

    /// `T(u, r, b1, b2) = σ(r, r) t^{-r} b1 · D(u, r) b2`.
    pub fn op_t(&self, u: &[Cyclotomic], r: &ExpVec, b1: &BElement, b2: &BElement) -> Result<Operator<'_>> {
        let sig = self.ctx().sigma(r, r)?;
        Ok(self
            .op_t_mult(&-r, b1)
            .compose(&self.op_d(u, r, b2)?)
            .scale(&sig))
    }

    /// `T'(u, r, b1, b2) = T(u, r, b1, b2) - D(u, 0) b1 b2`.
    pub fn op_tprime(&self, u: &[Cyclotomic], r: &ExpVec, b1: &BElement, b2: &BElement) -> Result<Operator<'_>> {
        let b12 = self.b().mul(b1, b2);
        let zero = ExpVec::zero(self.n());
        Ok(self.op_t(u, r, b1, b2)?.sub(&self.op_d(u, &zero, &b12)?))
    }

    /// `I(u, r, b1, b2) = ψ(b1) √σ(r, r) D(u, r) b2 - D(u, 0) b1 b2`.
    pub fn op_i(&self, u: &[Cyclotomic], r: &ExpVec, b1: &BElement, b2: &BElement) -> Result<Operator<'_>> {
        let c = &self.psi(b1) * &self.ctx().sqrt_sigma_diag(r)?;
        let b12 = self.b().mul(b1, b2);
        let zero = ExpVec::zero(self.n());
        Ok(self
            .op_d(u, r, b2)?
            .scale(&c)
            .sub(&self.op_d(u, &zero, &b12)?))
    }

    /// `t^{-s} b1 · ad t^s b2`, the generators of the abelian ideal.
    pub fn op_inner_composite(&self, s: &ExpVec, b1: &BElement, b2: &BElement) -> Operator<'_> {
        self.op_t_mult(&-s, b1).compose(&self.op_ad(s, b2))
    }

    /// `t^{-r} b1 · D(u, r) b2` (that is `T` without the `σ(r, r)` factor).
    pub fn op_outer_composite(&self, u: &[Cyclotomic], r: &ExpVec, b1: &BElement, b2: &BElement) -> Result<Operator<'_>> {
        Ok(self.op_t_mult(&-r, b1).compose(&self.op_d(u, r, b2)?))
    }
}
