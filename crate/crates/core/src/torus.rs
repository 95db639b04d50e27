//! The quantum torus `C_q` as a graded associative algebra and as a Lie
//! algebra under the commutator.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::field::Cyclotomic;
use crate::lattice::{CocycleContext, ExpVec};

/// A finite sum `Σ c_a t^a`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TorusElement {
    terms: BTreeMap<ExpVec, Cyclotomic>,
}

impl TorusElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: ExpVec, c: Cyclotomic) -> Self {
        let mut x = Self::zero();
        x.add_term(a, c);
        x
    }

    pub fn terms(&self) -> &BTreeMap<ExpVec, Cyclotomic> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &ExpVec) -> Option<&Cyclotomic> {
        self.terms.get(a)
    }

    pub fn add_term(&mut self, a: ExpVec, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            out.add_term(a.clone(), x * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = &ExpVec> {
        self.terms.keys()
    }
}

impl fmt::Display for TorusElement {
    /// `c*t[a] + …`; a unit coefficient is omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "t{a}")?;
            } else {
                write!(f, "{}*t{a}", fmt_coeff(c))?;
            }
        }
        Ok(())
    }
}

/// Coefficient text: parenthesized when it has more than one term.
pub fn fmt_coeff(c: &Cyclotomic) -> String {
    let s = c.to_string();
    let nonzero = c.coeffs().iter().filter(|x| !num_traits::Zero::is_zero(*x)).count();
    if nonzero > 1 {
        format!("({s})")
    } else {
        s
    }
}

impl CocycleContext {
    pub fn t_monomial(&self, a: ExpVec) -> TorusElement {
        TorusElement::monomial(a, self.one())
    }

    fn check_torus(&self, x: &TorusElement) -> Result<()> {
        x.support().try_for_each(|a| self.check_dim(a))
    }

    /// Twisted product `t^a t^b = σ(a, b) t^{a+b}`, extended bilinearly.
    pub fn t_mul(&self, x: &TorusElement, y: &TorusElement) -> Result<TorusElement> {
        self.check_torus(x)?;
        self.check_torus(y)?;
        let mut out = TorusElement::zero();
        for (a, c) in x.terms() {
            for (b, d) in y.terms() {
                let s = self.root(2 * self.sigma_exponent(a, b));
                out.add_term(a + b, &(c * d) * &s);
            }
        }
        Ok(out)
    }

    /// `[x, y] = xy - yx`.
    pub fn t_bracket(&self, x: &TorusElement, y: &TorusElement) -> Result<TorusElement> {
        self.check_torus(x)?;
        self.check_torus(y)?;
        let mut out = TorusElement::zero();
        for (a, c) in x.terms() {
            for (b, d) in y.terms() {
                let k = self.commutator_coeff(a, b);
                if !k.is_zero() {
                    out.add_term(a + b, &(c * d) * &k);
                }
            }
        }
        Ok(out)
    }

    /// Splits `x` into its `[C_q, C_q]` part (support off `rad f`) and its
    /// central part (support on `rad f`).
    pub fn decompose(&self, x: &TorusElement) -> Result<(TorusElement, TorusElement)> {
        self.check_torus(x)?;
        let mut comm = TorusElement::zero();
        let mut center = TorusElement::zero();
        for (a, c) in x.terms() {
            if self.in_radf(a) {
                center.add_term(a.clone(), c.clone());
            } else {
                comm.add_term(a.clone(), c.clone());
            }
        }
        Ok((comm, center))
    }

    /// A pair `(r, s)` in `[-b, b]^n` with `r + s = a` and `σ(r,s) ≠ σ(s,r)`,
    /// exhibiting `t^a` as a multiple of `[t^r, t^s]`.
    pub fn commutator_witness(&self, a: &ExpVec, b: i64) -> Option<(ExpVec, ExpVec)> {
        ExpVec::window(self.n(), b).into_iter().find_map(|r| {
            let s = a - &r;
            let e = self.sigma_exponent(&r, &s) - self.sigma_exponent(&s, &r);
            (e.rem_euclid(self.order()) != 0).then_some((r, s))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn ctx() -> Arc<CocycleContext> {
        CocycleContext::new(2, 2, vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn t(c: &CocycleContext, a: &[i64]) -> TorusElement {
        c.t_monomial(ExpVec(a.to_vec()))
    }

    #[test]
    fn products_and_brackets() {
        let c = ctx();
        let e1 = t(&c, &[1, 0]);
        let e2 = t(&c, &[0, 1]);
        assert_eq!(c.t_mul(&e1, &e2).unwrap(), t(&c, &[1, 1]));
        assert_eq!(c.t_mul(&e2, &e1).unwrap(), t(&c, &[1, 1]).neg());
        assert_eq!(c.t_bracket(&e1, &e2).unwrap(), t(&c, &[1, 1]).scale(&c.int(2)));
        assert!(c.t_bracket(&e1, &e1).unwrap().is_zero());
        let x = e1.add(&e2.scale(&c.int(3)));
        assert_eq!(c.t_mul(&t(&c, &[0, 0]), &x).unwrap(), x);
        assert_eq!(c.t_mul(&e1, &e2).unwrap().to_string(), "t[1,1]");
    }

    #[test]
    fn decomposition() {
        let c = ctx();
        let (comm, center) = c.decompose(&t(&c, &[0, 0])).unwrap();
        assert!(comm.is_zero());
        assert_eq!(center, t(&c, &[0, 0]));
        let x = t(&c, &[1, 0]).add(&t(&c, &[2, 0]));
        let (comm, center) = c.decompose(&x).unwrap();
        assert_eq!(comm, t(&c, &[1, 0]));
        assert_eq!(center, t(&c, &[2, 0]));
        for b in ExpVec::window(2, 3) {
            assert!(c.t_bracket(&center, &c.t_monomial(b)).unwrap().is_zero());
        }
        assert!(c.commutator_witness(&ExpVec(vec![1, 0]), 2).is_some());
        assert!(c.commutator_witness(&ExpVec(vec![2, 0]), 2).is_none());
    }

    #[test]
    fn dimension_mismatch() {
        let c = ctx();
        assert!(c.t_mul(&t(&c, &[1]), &t(&c, &[0, 1])).is_err());
    }
}
