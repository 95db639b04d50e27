//! The `τ`-module `F^α(V, ψ) = V ⊗ C_q`.
//!
//! A vector is a finite sum `Σ_s v_s(s)` with `v_s ∈ V`; the generators act by
//!
//! * `t^r ⊗ b · v(s) = ψ(b) σ(r, s) v(r + s)`
//! * `ad t^r ⊗ b · v(s) = ψ(b) (σ(r, s) - σ(s, r)) v(r + s)`
//! * `D(u, r) ⊗ b · v(s) = ψ(b) σ(r, s) ((u, s + α) v + Σ r_i u_j E_ij v)(r + s)`
//!
//! Composite operators (`T`, `T'`, `I`, …) live in [`ops`], identity checkers
//! in [`checks`] and the windowed span computations in [`probe`].

pub mod checks;
pub mod ops;
pub mod probe;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::field::Cyclotomic;
use crate::gln::GlnModule;
use crate::lattice::{CocycleContext, ExpVec};
use crate::lie::{BAlgebra, BElement, GElement, GTerm, LoopAlgebra, LoopElement};
use crate::linalg::{Mat, Vector};
use crate::torus::fmt_coeff;

pub use ops::Operator;

/// Finite-support map from lattice degrees to vectors in `V`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FVector {
    terms: BTreeMap<ExpVec, Vector>,
}

impl FVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `v(s)`.
    pub fn single(s: ExpVec, v: Vector) -> Self {
        let mut x = Self::zero();
        x.add_component(s, &v);
        x
    }

    pub fn components(&self) -> &BTreeMap<ExpVec, Vector> {
        &self.terms
    }

    pub fn component(&self, s: &ExpVec) -> Option<&Vector> {
        self.terms.get(s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_component(&mut self, s: ExpVec, v: &[Cyclotomic]) {
        if v.iter().all(Cyclotomic::is_zero) {
            return;
        }
        match self.terms.get_mut(&s) {
            None => {
                self.terms.insert(s, v.to_vec());
            }
            Some(w) => {
                for (x, y) in w.iter_mut().zip(v) {
                    *x += y;
                }
                if w.iter().all(Cyclotomic::is_zero) {
                    self.terms.remove(&s);
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (s, v) in &other.terms {
            self.add_component(s.clone(), v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (s, v) in &self.terms {
            let w: Vector = v.iter().map(|x| x * c).collect();
            out.add_component(s.clone(), &w);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(s, v)| (s.clone(), v.iter().map(|x| -x).collect()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn support(&self) -> impl Iterator<Item = &ExpVec> {
        self.terms.keys()
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, v)| {
                let cs: Vec<String> = v.iter().map(fmt_coeff).collect();
                format!("v{s}({})", cs.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Data defining `F^α(V, ψ)`.
#[derive(Clone, Debug)]
pub struct ModuleParams {
    pub ctx: Arc<CocycleContext>,
    pub v: GlnModule,
    pub alpha: Vec<Cyclotomic>,
    pub b: BAlgebra,
}

/// The module `F^α(V, ψ)` with its action.
#[derive(Clone, Debug)]
pub struct FockModule {
    params: ModuleParams,
    loop_algebra: LoopAlgebra,
}

impl FockModule {
    pub fn new(params: ModuleParams) -> Result<Self> {
        let n = params.ctx.n();
        if params.v.n() != n {
            return Err(AlgebraError::Module(format!("V is a gl_{} module but n = {n}", params.v.n())));
        }
        if params.alpha.len() != n {
            return Err(AlgebraError::Dimension {
                expected: n,
                got: params.alpha.len(),
            });
        }
        let conductor = params.ctx.field().conductor();
        if params.alpha.iter().any(|a| a.conductor() != conductor)
            || params.v.field().conductor() != conductor
        {
            return Err(AlgebraError::Module("all scalars must live in the context field".into()));
        }
        if let Err(w) = params.v.validate() {
            return Err(AlgebraError::Module(format!("V fails the gl_n relations at {w:?}")));
        }
        let loop_algebra = LoopAlgebra::new(params.ctx.clone(), params.b.clone())?;
        Ok(Self { params, loop_algebra })
    }

    pub fn params(&self) -> &ModuleParams {
        &self.params
    }

    pub fn ctx(&self) -> &Arc<CocycleContext> {
        &self.params.ctx
    }

    pub fn b(&self) -> &BAlgebra {
        &self.params.b
    }

    pub fn loop_algebra(&self) -> &LoopAlgebra {
        &self.loop_algebra
    }

    pub fn dim_v(&self) -> usize {
        self.params.v.dim()
    }

    pub fn n(&self) -> usize {
        self.params.ctx.n()
    }

    pub fn zero_v(&self) -> Vector {
        vec![self.ctx().zero(); self.dim_v()]
    }

    /// `ψ(b)`.
    pub fn psi(&self, b: &BElement) -> Cyclotomic {
        self.params.b.psi(b)
    }

    /// `(u, s + α)`.
    pub fn weight(&self, u: &[Cyclotomic], s: &ExpVec) -> Cyclotomic {
        let mut acc = self.ctx().pairing(u, s);
        for (ui, ai) in u.iter().zip(&self.params.alpha) {
            if !ui.is_zero() && !ai.is_zero() {
                acc += &(ui * ai);
            }
        }
        acc
    }

    /// `(u, α)`.
    pub fn alpha_pairing(&self, u: &[Cyclotomic]) -> Cyclotomic {
        self.weight(u, &ExpVec::zero(self.n()))
    }

    /// Matrix of `Σ r_i u_j E_ij` on `V`.
    pub fn outer_matrix(&self, u: &[Cyclotomic], r: &ExpVec) -> Mat {
        self.params.v.rank_one_action(&r.0, u)
    }

    fn check_vector(&self, xi: &FVector) -> Result<()> {
        for (s, v) in xi.components() {
            self.ctx().check_dim(s)?;
            if v.len() != self.dim_v() {
                return Err(AlgebraError::Dimension {
                    expected: self.dim_v(),
                    got: v.len(),
                });
            }
        }
        Ok(())
    }

    fn act_term(&self, term: &GTerm<'_>, xi: &FVector, factor: &Cyclotomic, out: &mut FVector) {
        let ctx = self.ctx();
        match *term {
            GTerm::T(a, c) => {
                let k = c * factor;
                for (s, v) in xi.components() {
                    let sc = &k * &ctx.root(2 * ctx.sigma_exponent(a, s));
                    let w: Vector = v.iter().map(|x| x * &sc).collect();
                    out.add_component(a + s, &w);
                }
            }
            GTerm::Ad(a, c) => {
                let k = c * factor;
                for (s, v) in xi.components() {
                    let cc = ctx.commutator_coeff(a, s);
                    if cc.is_zero() {
                        continue;
                    }
                    let sc = &k * &cc;
                    let w: Vector = v.iter().map(|x| x * &sc).collect();
                    out.add_component(a + s, &w);
                }
            }
            GTerm::D(r, u) => {
                let a = self.outer_matrix(u, r);
                for (s, v) in xi.components() {
                    let sc = factor * &ctx.root(2 * ctx.sigma_exponent(r, s));
                    let wt = self.weight(u, s);
                    let av = a.apply(v);
                    let w: Vector = v
                        .iter()
                        .zip(&av)
                        .map(|(x, y)| &(&(x * &wt) + y) * &sc)
                        .collect();
                    out.add_component(r + s, &w);
                }
            }
        }
    }

    /// Action of an element of `g` (i.e. of `x ⊗ 1`).
    pub fn act_g(&self, x: &GElement, xi: &FVector) -> Result<FVector> {
        self.ctx().check_g(x)?;
        self.check_vector(xi)?;
        let one = self.ctx().one();
        let mut out = FVector::zero();
        for t in x.terms() {
            self.act_term(&t, xi, &one, &mut out);
        }
        Ok(out)
    }

    /// Action of `τ`.
    pub fn act(&self, x: &LoopElement, xi: &FVector) -> Result<FVector> {
        self.check_vector(xi)?;
        let mut out = FVector::zero();
        for (i, g) in x.parts() {
            if !self.b().is_valid_index(*i) {
                return Err(AlgebraError::BIndex(*i));
            }
            self.ctx().check_g(g)?;
            let factor = self.b().psi_index(*i);
            if factor.is_zero() {
                continue;
            }
            for t in g.terms() {
                self.act_term(&t, xi, &factor, &mut out);
            }
        }
        Ok(out)
    }

    /// `t^a ⊗ b`.
    pub fn t_elem(&self, a: &ExpVec, b: &BElement) -> LoopElement {
        LoopElement::tensor(&GElement::from_torus(self.ctx().t_monomial(a.clone())), b)
    }

    /// `ad t^a ⊗ b`, which is zero for `a ∈ rad f`.
    pub fn ad_elem(&self, a: &ExpVec, b: &BElement) -> LoopElement {
        match self.ctx().g_ad(a.clone(), self.ctx().one()) {
            Ok(g) => LoopElement::tensor(&g, b),
            Err(_) => LoopElement::zero(),
        }
    }

    /// `D(u, r) ⊗ b`; `r` must lie in `rad f`.
    pub fn d_elem(&self, u: &[Cyclotomic], r: &ExpVec, b: &BElement) -> Result<LoopElement> {
        Ok(LoopElement::tensor(&self.ctx().g_d(u.to_vec(), r.clone())?, b))
    }

    /// `v(0)` for `v ∈ V`.
    pub fn at_zero(&self, v: Vector) -> FVector {
        FVector::single(ExpVec::zero(self.n()), v)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lie::BKind;

    pub(crate) fn minus_one_module(alpha: [i64; 2]) -> FockModule {
        let ctx = CocycleContext::new(2, 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let v = GlnModule::natural(ctx.field(), 2);
        let b = BAlgebra::new(BKind::Laurent, ctx.int(2)).unwrap();
        let alpha = alpha.iter().map(|&a| ctx.int(a)).collect();
        FockModule::new(ModuleParams { ctx, v, alpha, b }).unwrap()
    }

    fn e(v: &[i64]) -> ExpVec {
        ExpVec(v.to_vec())
    }

    #[test]
    fn identity_and_weights() {
        let m = minus_one_module([0, 0]);
        let c = m.ctx().clone();
        let xi = FVector::single(e(&[1, -1]), vec![c.int(1), c.int(5)])
            .add(&FVector::single(e(&[0, 3]), vec![c.int(-2), c.int(0)]));
        let one = m.b().one();
        assert_eq!(m.act(&m.t_elem(&e(&[0, 0]), &one), &xi).unwrap(), xi);

        let m = minus_one_module([1, -3]);
        let u = vec![c.int(2), c.int(1)];
        let s = e(&[1, 2]);
        let v = FVector::single(s.clone(), vec![c.int(1), c.int(1)]);
        let got = m.act(&m.d_elem(&u, &e(&[0, 0]), &one).unwrap(), &v).unwrap();
        // (u, s + α) = 2*2 + 1*(-1) = 3
        assert_eq!(got, v.scale(&c.int(3)));
    }

    #[test]
    fn outer_derivation_example() {
        let m = minus_one_module([0, 0]);
        let c = m.ctx().clone();
        let u = vec![c.int(1), c.int(0)];
        let v = vec![c.int(1), c.int(0)];
        let xi = FVector::single(e(&[0, 1]), v);
        let got = m.act(&m.d_elem(&u, &e(&[2, 0]), &m.b().one()).unwrap(), &xi).unwrap();
        // σ((2,0),(0,1)) = 1, (u, s) = 0, Σ r_i u_j E_ij = 2 E_11
        assert_eq!(got, FVector::single(e(&[2, 1]), vec![c.int(2), c.int(0)]));
    }

    #[test]
    fn display() {
        let m = minus_one_module([0, 0]);
        let c = m.ctx();
        let xi = FVector::single(e(&[1, 0]), vec![c.int(1), c.int(0)]);
        assert_eq!(xi.to_string(), "v[1,0](1,0)");
    }
}
