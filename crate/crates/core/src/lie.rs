//! The Lie algebras `Der(C_q)`, `g = C_q ⋊ Der(C_q)` and the loop algebra
//! `τ = g ⊗ B`.
//!
//! A homogeneous derivation of degree `a` is `ad t^a` when `a ∉ rad f` and
//! `D(u, a) = t^a Σ u_i t_i ∂_i` when `a ∈ rad f`; [`GElement`] keeps the two
//! families in separate maps keyed by degree and enforces that split.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::field::Cyclotomic;
use crate::lattice::{CocycleContext, ExpVec};
use crate::torus::{fmt_coeff, TorusElement};

/// Element of `g`: a torus part, inner derivations `ad t^a` (`a ∉ rad f`)
/// and outer derivations `D(u, r)` (`r ∈ rad f`, one `u` per degree).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GElement {
    pub torus: TorusElement,
    inner: BTreeMap<ExpVec, Cyclotomic>,
    witt: BTreeMap<ExpVec, Vec<Cyclotomic>>,
}

/// One homogeneous basis-type term of a [`GElement`].
#[derive(Clone, Copy, Debug)]
pub enum GTerm<'a> {
    T(&'a ExpVec, &'a Cyclotomic),
    Ad(&'a ExpVec, &'a Cyclotomic),
    D(&'a ExpVec, &'a [Cyclotomic]),
}

impl GTerm<'_> {
    pub fn degree(&self) -> &ExpVec {
        match self {
            GTerm::T(a, _) | GTerm::Ad(a, _) | GTerm::D(a, _) => a,
        }
    }
}

impl GElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_torus(torus: TorusElement) -> Self {
        Self {
            torus,
            ..Self::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.torus.is_zero() && self.inner.is_empty() && self.witt.is_empty()
    }

    pub fn inner(&self) -> &BTreeMap<ExpVec, Cyclotomic> {
        &self.inner
    }

    pub fn witt(&self) -> &BTreeMap<ExpVec, Vec<Cyclotomic>> {
        &self.witt
    }

    pub fn terms(&self) -> impl Iterator<Item = GTerm<'_>> {
        self.torus
            .terms()
            .iter()
            .map(|(a, c)| GTerm::T(a, c))
            .chain(self.inner.iter().map(|(a, c)| GTerm::Ad(a, c)))
            .chain(self.witt.iter().map(|(a, u)| GTerm::D(a, u.as_slice())))
    }

    pub fn add_torus(&mut self, a: ExpVec, c: Cyclotomic) {
        self.torus.add_term(a, c);
    }

    /// Adds `c · ad t^a`; the caller guarantees `a ∉ rad f`.
    fn add_inner_unchecked(&mut self, a: ExpVec, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        let e = self.inner.entry(a.clone()).or_insert_with(|| Cyclotomic::zero(c.field()));
        *e += &c;
        if e.is_zero() {
            self.inner.remove(&a);
        }
    }

    /// Adds `D(u, r)`; the caller guarantees `r ∈ rad f`.
    fn add_witt_unchecked(&mut self, r: ExpVec, u: Vec<Cyclotomic>) {
        if u.iter().all(Cyclotomic::is_zero) {
            return;
        }
        match self.witt.get_mut(&r) {
            None => {
                self.witt.insert(r, u);
            }
            Some(v) => {
                for (x, y) in v.iter_mut().zip(&u) {
                    *x += y;
                }
                if v.iter().all(Cyclotomic::is_zero) {
                    self.witt.remove(&r);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.torus = out.torus.add(&other.torus);
        for (a, c) in &other.inner {
            out.add_inner_unchecked(a.clone(), c.clone());
        }
        for (r, u) in &other.witt {
            out.add_witt_unchecked(r.clone(), u.clone());
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::from_torus(self.torus.scale(c));
        for (a, x) in &self.inner {
            out.add_inner_unchecked(a.clone(), x * c);
        }
        for (r, u) in &self.witt {
            out.add_witt_unchecked(r.clone(), u.iter().map(|x| x * c).collect());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            torus: self.torus.neg(),
            inner: self.inner.iter().map(|(a, c)| (a.clone(), -c)).collect(),
            witt: self
                .witt
                .iter()
                .map(|(r, u)| (r.clone(), u.iter().map(|x| -x).collect()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Degrees carried by this element, in order.
    pub fn degrees(&self) -> Vec<ExpVec> {
        let mut d: Vec<ExpVec> = self.terms().map(|t| t.degree().clone()).collect();
        d.sort();
        d.dedup();
        d
    }
}

impl fmt::Display for GElement {
    /// Every term carries an explicit coefficient: `c*t[a]`, `c*ad[a]`,
    /// `D[(u1,…);r]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().map(|t| fmt_term(&t)).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub(crate) fn fmt_term(t: &GTerm<'_>) -> String {
    match t {
        GTerm::T(a, c) => format!("{}*t{a}", fmt_coeff(c)),
        GTerm::Ad(a, c) => format!("{}*ad{a}", fmt_coeff(c)),
        GTerm::D(r, u) => {
            let us: Vec<String> = u.iter().map(ToString::to_string).collect();
            let rs = r.to_string();
            format!("D[({});{}]", us.join(","), &rs[1..rs.len() - 1])
        }
    }
}

impl CocycleContext {
    pub fn g_t(&self, a: ExpVec) -> Result<GElement> {
        self.check_dim(&a)?;
        Ok(GElement::from_torus(self.t_monomial(a)))
    }

    pub fn g_ad(&self, a: ExpVec, c: Cyclotomic) -> Result<GElement> {
        self.check_dim(&a)?;
        if self.in_radf(&a) {
            return Err(AlgebraError::InnerInRadical(a.to_string()));
        }
        let mut x = GElement::zero();
        x.add_inner_unchecked(a, c);
        Ok(x)
    }

    pub fn g_d(&self, u: Vec<Cyclotomic>, r: ExpVec) -> Result<GElement> {
        self.check_dim(&r)?;
        if u.len() != self.n() {
            return Err(AlgebraError::Dimension {
                expected: self.n(),
                got: u.len(),
            });
        }
        if !self.in_radf(&r) {
            return Err(AlgebraError::OuterNotInRadical(r.to_string()));
        }
        let mut x = GElement::zero();
        x.add_witt_unchecked(r, u);
        Ok(x)
    }

    /// Checks the degree split of inner/outer derivations.
    pub fn check_g(&self, x: &GElement) -> Result<()> {
        for t in x.terms() {
            self.check_dim(t.degree())?;
            match t {
                GTerm::Ad(a, _) if self.in_radf(a) => {
                    return Err(AlgebraError::InnerInRadical(a.to_string()))
                }
                GTerm::D(r, u) => {
                    if !self.in_radf(r) {
                        return Err(AlgebraError::OuterNotInRadical(r.to_string()));
                    }
                    if u.len() != self.n() {
                        return Err(AlgebraError::Dimension {
                            expected: self.n(),
                            got: u.len(),
                        });
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Bracket of two homogeneous terms, accumulated into `out`.
    fn bracket_terms(&self, x: &GTerm<'_>, y: &GTerm<'_>, out: &mut GElement) {
        use GTerm::*;
        match (*x, *y) {
            (T(a, c), T(b, d)) | (Ad(a, c), T(b, d)) => {
                let k = self.commutator_coeff(a, b);
                if !k.is_zero() {
                    out.add_torus(a + b, &(c * d) * &k);
                }
            }
            (T(_, _), Ad(_, _)) | (T(_, _), D(_, _)) | (Ad(_, _), D(_, _)) => {
                let mut tmp = GElement::zero();
                self.bracket_terms(y, x, &mut tmp);
                *out = out.sub(&tmp);
            }
            (Ad(a, c), Ad(b, d)) => {
                let k = self.commutator_coeff(a, b);
                if !k.is_zero() {
                    let s = a + b;
                    assert!(!self.in_radf(&s), "nonzero ad bracket landed in rad f");
                    out.add_inner_unchecked(s, &(c * d) * &k);
                }
            }
            (D(r, u), T(s, c)) => {
                let k = &self.pairing(u, s) * &self.sigma(r, s).expect("dims");
                if !k.is_zero() {
                    out.add_torus(r + s, &k * c);
                }
            }
            (D(r, u), Ad(s, c)) => {
                let k = &self.pairing(u, s) * &self.sigma(r, s).expect("dims");
                if !k.is_zero() {
                    out.add_inner_unchecked(r + s, &k * c);
                }
            }
            (D(r, u), D(r2, u2)) => {
                // w = σ(r, r')((u, r') u' - (u', r) u)
                let sig = self.sigma(r, r2).expect("dims");
                let a = self.pairing(u, r2);
                let b = self.pairing(u2, r);
                let w: Vec<Cyclotomic> = u
                    .iter()
                    .zip(u2)
                    .map(|(ui, vi)| &sig * &(&(&a * vi) - &(&b * ui)))
                    .collect();
                out.add_witt_unchecked(r + r2, w);
            }
        }
    }

    pub fn g_bracket(&self, x: &GElement, y: &GElement) -> Result<GElement> {
        self.check_g(x)?;
        self.check_g(y)?;
        let mut out = GElement::zero();
        for a in x.terms() {
            for b in y.terms() {
                self.bracket_terms(&a, &b, &mut out);
            }
        }
        Ok(out)
    }
}

/// Shape of the coefficient algebra `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BKind {
    /// `C[z, z^{-1}]`.
    Laurent,
    /// `C[z] / (z^k)`.
    Truncated(u32),
}

/// A commutative unital algebra with basis `{z^i}` and a character `ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BAlgebra {
    kind: BKind,
    psi_z: Cyclotomic,
}

/// Finite combination `Σ c_i z^i` in `B`.
pub type BElement = BTreeMap<i64, Cyclotomic>;

impl BAlgebra {
    /// `psi_z` is the image of `z`; it must be nonzero for Laurent and zero
    /// for a truncation with `k >= 2`.
    pub fn new(kind: BKind, psi_z: Cyclotomic) -> Result<Self> {
        match kind {
            BKind::Laurent if psi_z.is_zero() => {
                return Err(AlgebraError::BAlgebra("ψ(z) must be invertible in a Laurent algebra".into()))
            }
            BKind::Truncated(0) => return Err(AlgebraError::BAlgebra("truncation order must be >= 1".into())),
            BKind::Truncated(_) if !psi_z.is_zero() => {
                return Err(AlgebraError::BAlgebra("ψ(z) must be 0 on a truncated algebra (z is nilpotent)".into()))
            }
            _ => {}
        }
        Ok(Self { kind, psi_z })
    }

    pub fn kind(&self) -> BKind {
        self.kind
    }

    pub fn psi_z(&self) -> &Cyclotomic {
        &self.psi_z
    }

    pub fn is_valid_index(&self, i: i64) -> bool {
        match self.kind {
            BKind::Laurent => true,
            BKind::Truncated(k) => (0..i64::from(k)).contains(&i),
        }
    }

    /// Basis indices `lo..=hi` available for sampling.
    pub fn sample_range(&self) -> (i64, i64) {
        match self.kind {
            BKind::Laurent => (-2, 2),
            BKind::Truncated(k) => (0, i64::from(k) - 1),
        }
    }

    /// `z^i z^j`, or `None` when it vanishes.
    pub fn mul_index(&self, i: i64, j: i64) -> Option<i64> {
        let s = i + j;
        self.is_valid_index(s).then_some(s)
    }

    pub fn one(&self) -> BElement {
        self.basis(0)
    }

    pub fn basis(&self, i: i64) -> BElement {
        BTreeMap::from([(i, Cyclotomic::one(self.psi_z.field()))])
    }

    pub fn check(&self, b: &BElement) -> Result<()> {
        match b.keys().find(|&&i| !self.is_valid_index(i)) {
            Some(&i) => Err(AlgebraError::BIndex(i)),
            None => Ok(()),
        }
    }

    pub fn mul(&self, x: &BElement, y: &BElement) -> BElement {
        let mut out = BElement::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(k) = self.mul_index(*i, *j) {
                    add_b_term(&mut out, k, a * b);
                }
            }
        }
        out
    }

    pub fn psi_index(&self, i: i64) -> Cyclotomic {
        match self.kind {
            BKind::Laurent => self.psi_z.pow(i).expect("ψ(z) is invertible"),
            BKind::Truncated(_) if i == 0 => Cyclotomic::one(self.psi_z.field()),
            BKind::Truncated(_) => Cyclotomic::zero(self.psi_z.field()),
        }
    }

    /// The character `ψ(b)`.
    pub fn psi(&self, b: &BElement) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.psi_z.field());
        for (i, c) in b {
            acc += &(c * &self.psi_index(*i));
        }
        acc
    }

    /// `b - ψ(b)·1 ∈ ker ψ`.
    pub fn psi_kernel_element(&self, b: &BElement) -> BElement {
        let mut out = b.clone();
        add_b_term(&mut out, 0, -self.psi(b));
        out
    }
}

pub fn add_b_term(b: &mut BElement, i: i64, c: Cyclotomic) {
    if c.is_zero() {
        return;
    }
    let e = b.entry(i).or_insert_with(|| Cyclotomic::zero(c.field()));
    *e += &c;
    if e.is_zero() {
        b.remove(&i);
    }
}

pub fn fmt_b(b: &BElement) -> String {
    if b.is_empty() {
        return "0".into();
    }
    b.iter()
        .map(|(i, c)| format!("{}*z^{i}", fmt_coeff(c)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Element of `τ = g ⊗ B`, stored as `Σ_i x_i ⊗ z^i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LoopElement {
    parts: BTreeMap<i64, GElement>,
}

impl LoopElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `x ⊗ z^i`.
    pub fn basis(x: GElement, i: i64) -> Self {
        let mut out = Self::zero();
        out.add_part(i, x);
        out
    }

    /// `x ⊗ b`.
    pub fn tensor(x: &GElement, b: &BElement) -> Self {
        let mut out = Self::zero();
        for (i, c) in b {
            out.add_part(*i, x.scale(c));
        }
        out
    }

    pub fn parts(&self) -> &BTreeMap<i64, GElement> {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add_part(&mut self, i: i64, x: GElement) {
        if x.is_zero() {
            return;
        }
        let merged = match self.parts.remove(&i) {
            Some(y) => y.add(&x),
            None => x,
        };
        if !merged.is_zero() {
            self.parts.insert(i, merged);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, x) in &other.parts {
            out.add_part(*i, x.clone());
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::zero();
        for (i, x) in &self.parts {
            out.add_part(*i, x.scale(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            parts: self.parts.iter().map(|(i, x)| (*i, x.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl fmt::Display for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, x) in &self.parts {
            for t in x.terms() {
                let s = fmt_term(&t);
                parts.push(if *i == 0 { s } else { format!("{s}⊗z^{i}") });
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `τ` over a fixed torus and coefficient algebra.
#[derive(Clone, Debug)]
pub struct LoopAlgebra {
    pub ctx: Arc<CocycleContext>,
    pub b: BAlgebra,
}

impl LoopAlgebra {
    pub fn new(ctx: Arc<CocycleContext>, b: BAlgebra) -> Result<Self> {
        if b.psi_z().conductor() != ctx.field().conductor() {
            return Err(AlgebraError::BMismatch);
        }
        Ok(Self { ctx, b })
    }

    fn check(&self, x: &LoopElement) -> Result<()> {
        for (i, g) in &x.parts {
            if !self.b.is_valid_index(*i) {
                return Err(AlgebraError::BIndex(*i));
            }
            self.ctx.check_g(g)?;
        }
        Ok(())
    }

    /// `[x ⊗ a, y ⊗ b] = [x, y] ⊗ ab`.
    pub fn bracket(&self, x: &LoopElement, y: &LoopElement) -> Result<LoopElement> {
        self.check(x)?;
        self.check(y)?;
        let mut out = LoopElement::zero();
        for (i, gx) in &x.parts {
            for (j, gy) in &y.parts {
                if let Some(k) = self.b.mul_index(*i, *j) {
                    out.add_part(k, self.ctx.g_bracket(gx, gy)?);
                }
            }
        }
        Ok(out)
    }

    /// `(ad t^r - t^r) ⊗ z^i`, with `ad t^r := 0` for `r ∈ rad f`.
    pub fn cq2_embed(&self, r: &ExpVec, i: i64) -> Result<LoopElement> {
        self.ctx.check_dim(r)?;
        if !self.b.is_valid_index(i) {
            return Err(AlgebraError::BIndex(i));
        }
        let mut g = GElement::zero();
        g.add_torus(r.clone(), -self.ctx.one());
        if !self.ctx.in_radf(r) {
            g.add_inner_unchecked(r.clone(), self.ctx.one());
        }
        Ok(LoopElement::basis(g, i))
    }

    pub fn psi_kernel_element(&self, b: &BElement) -> BElement {
        self.b.psi_kernel_element(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<CocycleContext> {
        CocycleContext::new(2, 2, vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn e(v: &[i64]) -> ExpVec {
        ExpVec(v.to_vec())
    }

    fn u(c: &CocycleContext, v: &[i64]) -> Vec<Cyclotomic> {
        v.iter().map(|&x| c.int(x)).collect()
    }

    #[test]
    fn bracket_examples() {
        let c = ctx();
        let d0 = c.g_d(u(&c, &[1, 0]), e(&[0, 0])).unwrap();
        let d0b = c.g_d(u(&c, &[3, -1]), e(&[0, 0])).unwrap();
        assert!(c.g_bracket(&d0, &d0b).unwrap().is_zero());

        let ad = c.g_ad(e(&[3, 1]), c.one()).unwrap();
        assert_eq!(c.g_bracket(&d0, &ad).unwrap(), ad.scale(&c.int(3)));

        let r = e(&[2, 0]);
        let ts = c.g_t(e(&[0, 1])).unwrap();
        let dr = c.g_d(u(&c, &[1, 0]), r.clone()).unwrap();
        assert!(c.g_bracket(&dr, &ts).unwrap().is_zero());
        let dr = c.g_d(u(&c, &[0, 1]), r).unwrap();
        assert_eq!(c.g_bracket(&dr, &ts).unwrap(), c.g_t(e(&[2, 1])).unwrap());
    }

    #[test]
    fn invariants_enforced() {
        let c = ctx();
        assert!(c.g_ad(e(&[2, 0]), c.one()).is_err());
        assert!(c.g_d(u(&c, &[1, 0]), e(&[1, 0])).is_err());
        assert!(c.g_d(u(&c, &[1]), e(&[0, 0])).is_err());
    }

    #[test]
    fn loop_brackets() {
        let c = ctx();
        let b = BAlgebra::new(BKind::Truncated(2), c.zero()).unwrap();
        let la = LoopAlgebra::new(c.clone(), b).unwrap();
        let x = c.g_t(e(&[1, 0])).unwrap();
        let y = c.g_t(e(&[0, 1])).unwrap();
        let one = la.bracket(&LoopElement::basis(x.clone(), 0), &LoopElement::basis(y.clone(), 0)).unwrap();
        assert_eq!(one, LoopElement::basis(c.g_bracket(&x, &y).unwrap(), 0));
        let zz = la.bracket(&LoopElement::basis(x, 1), &LoopElement::basis(y, 1)).unwrap();
        assert!(zz.is_zero());
        assert!(la.cq2_embed(&e(&[0, 0]), 2).is_err());
    }

    #[test]
    fn cq2_shape() {
        let c = ctx();
        let b = BAlgebra::new(BKind::Laurent, c.int(3)).unwrap();
        let la = LoopAlgebra::new(c.clone(), b).unwrap();
        let x = la.cq2_embed(&e(&[1, 0]), 0).unwrap();
        let g = &x.parts()[&0];
        assert_eq!(g.inner()[&e(&[1, 0])], c.one());
        assert_eq!(g.torus.coeff(&e(&[1, 0])).unwrap(), &c.int(-1));
        let z = la.cq2_embed(&e(&[0, 0]), 0).unwrap();
        assert_eq!(z, LoopElement::basis(GElement::from_torus(c.t_monomial(e(&[0, 0])).neg()), 0));
    }

    #[test]
    fn psi_kernel() {
        let c = ctx();
        let lb = BAlgebra::new(BKind::Laurent, c.int(3)).unwrap();
        assert!(lb.psi_kernel_element(&lb.one()).is_empty());
        let k = lb.psi_kernel_element(&lb.basis(1));
        assert_eq!(k[&0], c.int(-3));
        assert!(lb.psi(&k).is_zero());
        assert_eq!(lb.psi(&lb.basis(-1)), c.int(3).inv().unwrap());
        let tb = BAlgebra::new(BKind::Truncated(3), c.zero()).unwrap();
        assert_eq!(tb.psi_kernel_element(&tb.basis(1)), tb.basis(1));
        assert!(BAlgebra::new(BKind::Truncated(3), c.one()).is_err());
        assert!(BAlgebra::new(BKind::Laurent, c.zero()).is_err());
    }
}
