//! Finite-dimensional `gl_n`-modules given by the matrices of `E_ij`.

use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::field::{Cyclotomic, CyclotomicField};
use crate::linalg::{Mat, Vector};

/// Largest module dimension the constructors will build.
pub const MAX_DIM: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlnModule {
    n: usize,
    d: usize,
    /// `e[i][j]` is the action of `E_ij`.
    e: Vec<Vec<Mat>>,
}

/// First `(i, j, k, l)` at which `[E_ij, E_kl] = δ_jk E_il - δ_li E_kj` fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GlnViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl GlnModule {
    /// Builds a module from explicit matrices without validating them.
    pub fn from_matrices(n: usize, e: Vec<Vec<Mat>>) -> Result<Self> {
        if e.len() != n || e.iter().any(|row| row.len() != n) {
            return Err(AlgebraError::Gln(format!("need an {n}x{n} array of matrices")));
        }
        let d = e[0][0].rows();
        if e.iter().flatten().any(|m| m.rows() != d || m.cols() != d) {
            return Err(AlgebraError::Gln("all E_ij must be square of one size".into()));
        }
        if d > MAX_DIM {
            return Err(AlgebraError::Gln(format!("dimension {d} exceeds {MAX_DIM}")));
        }
        Ok(Self { n, d, e })
    }

    pub fn trivial(field: &Arc<CyclotomicField>, n: usize) -> Self {
        let e = vec![vec![Mat::zeros(field, 1, 1); n]; n];
        Self { n, d: 1, e }
    }

    /// `C^n` with `E_ij` acting as the matrix unit.
    pub fn natural(field: &Arc<CyclotomicField>, n: usize) -> Self {
        let e = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut m = Mat::zeros(field, n, n);
                        m.set(i, j, Cyclotomic::one(field));
                        m
                    })
                    .collect()
            })
            .collect();
        Self { n, d: n, e }
    }

    /// Contragredient module: `E_ij ↦ -ρ(E_ij)^T`.
    pub fn dual(&self) -> Self {
        let e = self
            .e
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m| {
                        let t = m.transpose();
                        t.scale(&-Cyclotomic::one(self.field()))
                    })
                    .collect()
            })
            .collect();
        Self { n: self.n, d: self.d, e }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        self.e[0][0].get(0, 0).field()
    }

    /// Action matrix of `E_ij`.
    pub fn e(&self, i: usize, j: usize) -> &Mat {
        &self.e[i][j]
    }

    /// Matrix of `Σ_{ij} x_i y_j E_ij` for integer `x` and scalar `y`.
    pub fn rank_one_action(&self, x: &[i64], y: &[Cyclotomic]) -> Mat {
        let mut acc = Mat::zeros(self.field(), self.d, self.d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc = acc.add(&self.e[i][j].scale(&yj.scale_int(xi)));
            }
        }
        acc
    }

    /// Leibniz action on `V1 ⊗ V2`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(AlgebraError::Gln("tensor factors must share n".into()));
        }
        let d = self.d * other.d;
        if d > MAX_DIM {
            return Err(AlgebraError::Gln(format!("dimension {d} exceeds {MAX_DIM}")));
        }
        let id1 = Mat::identity(self.field(), self.d);
        let id2 = Mat::identity(self.field(), other.d);
        let e = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.e[i][j].kron(&id2).add(&id1.kron(&other.e[i][j])))
                    .collect()
            })
            .collect();
        Ok(Self { n: self.n, d, e })
    }

    /// Symmetric square, basis `e_a e_b` (`a <= b`).
    pub fn sym2(&self) -> Result<Self> {
        let sq = self.tensor(self)?;
        let d = self.d;
        let one = Cyclotomic::one(self.field());
        let mut basis = Vec::new();
        for a in 0..d {
            for b in a..d {
                let mut v = vec![Cyclotomic::zero(self.field()); d * d];
                v[a * d + b] = one.clone();
                v[b * d + a] = one.clone();
                basis.push((a * d + b, v));
            }
        }
        sq.restrict(&basis)
    }

    /// Exterior square, basis `e_a ∧ e_b` (`a < b`).
    pub fn wedge2(&self) -> Result<Self> {
        let sq = self.tensor(self)?;
        let d = self.d;
        let one = Cyclotomic::one(self.field());
        let mut basis = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let mut v = vec![Cyclotomic::zero(self.field()); d * d];
                v[a * d + b] = one.clone();
                v[b * d + a] = -one.clone();
                basis.push((a * d + b, v));
            }
        }
        if basis.is_empty() {
            return Err(AlgebraError::Gln("exterior square of a 1-dimensional module is zero".into()));
        }
        sq.restrict(&basis)
    }

    /// Restriction to the span of `basis`; each vector carries a pivot
    /// coordinate where it is 1 and every other basis vector vanishes.
    fn restrict(&self, basis: &[(usize, Vector)]) -> Result<Self> {
        let k = basis.len();
        let field = self.field().clone();
        let mut e = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut row = Vec::with_capacity(self.n);
            for j in 0..self.n {
                let mut m = Mat::zeros(&field, k, k);
                for (col, (_, v)) in basis.iter().enumerate() {
                    let image = self.e[i][j].apply(v);
                    // read coordinates at pivots, then confirm membership
                    let coords: Vec<Cyclotomic> = basis.iter().map(|(p, _)| image[*p].clone()).collect();
                    let mut recon = vec![Cyclotomic::zero(&field); image.len()];
                    for (c, (_, w)) in coords.iter().zip(basis) {
                        for (r, x) in recon.iter_mut().zip(w) {
                            *r += &(c * x);
                        }
                    }
                    if recon != image {
                        return Err(AlgebraError::Gln("subspace is not E-invariant".into()));
                    }
                    for (rix, c) in coords.into_iter().enumerate() {
                        m.set(rix, col, c);
                    }
                }
                row.push(m);
            }
            e.push(row);
        }
        Ok(Self { n: self.n, d: k, e })
    }

    /// Checks `[E_ij, E_kl] = δ_jk E_il - δ_li E_kj` exactly.
    pub fn validate(&self) -> std::result::Result<(), GlnViolation> {
        let n = self.n;
        let zero = Mat::zeros(self.field(), self.d, self.d);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs = self.e[i][j].commutator(&self.e[k][l]);
                        let mut rhs = zero.clone();
                        if j == k {
                            rhs = rhs.add(&self.e[i][l]);
                        }
                        if l == i {
                            rhs = rhs.sub(&self.e[k][j]);
                        }
                        if lhs != rhs {
                            return Err(GlnViolation { i, j, k, l });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Whether the identity `Σ E_ii` acts as a scalar.
    pub fn identity_acts_as_scalar(&self) -> bool {
        let mut sum = Mat::zeros(self.field(), self.d, self.d);
        for i in 0..self.n {
            sum = sum.add(&self.e[i][i]);
        }
        let c = sum.get(0, 0).clone();
        sum == Mat::identity(self.field(), self.d).scale(&c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> Arc<CyclotomicField> {
        CyclotomicField::new(4).unwrap()
    }

    #[test]
    fn constructors_validate() {
        let f = field();
        for n in 2..=3 {
            let nat = GlnModule::natural(&f, n);
            for m in [
                GlnModule::trivial(&f, n),
                nat.clone(),
                nat.dual(),
                nat.sym2().unwrap(),
                nat.wedge2().unwrap(),
                nat.tensor(&nat.dual()).unwrap(),
            ] {
                assert_eq!(m.validate(), Ok(()));
            }
        }
    }

    #[test]
    fn natural_matrix_unit() {
        let f = field();
        let nat = GlnModule::natural(&f, 2);
        let v2 = vec![Cyclotomic::zero(&f), Cyclotomic::one(&f)];
        assert_eq!(nat.e(0, 1).apply(&v2), vec![Cyclotomic::one(&f), Cyclotomic::zero(&f)]);
    }

    #[test]
    fn dual_eigenvalues() {
        let f = field();
        let d = GlnModule::natural(&f, 2).dual();
        let e11 = d.e(0, 0);
        assert_eq!(e11.get(0, 0), &Cyclotomic::from_integer(&f, -1));
        assert!(e11.get(1, 1).is_zero());
        assert!(e11.get(0, 1).is_zero() && e11.get(1, 0).is_zero());
    }

    #[test]
    fn wedge_and_sym_dimensions() {
        let f = field();
        let nat = GlnModule::natural(&f, 2);
        let w = nat.wedge2().unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w.e(0, 0).get(0, 0).is_one());
        assert!(w.e(1, 1).get(0, 0).is_one());
        assert!(w.e(0, 1).is_zero() && w.e(1, 0).is_zero());
        assert_eq!(nat.sym2().unwrap().dim(), 3);
        let t = GlnModule::trivial(&f, 2).tensor(&nat).unwrap();
        assert_eq!(t, nat);
    }

    #[test]
    fn perturbed_module_fails() {
        let f = field();
        let nat = GlnModule::natural(&f, 2);
        let mut e = nat.e.clone();
        let old = e[0][0].get(0, 1).clone();
        e[0][0].set(0, 1, &old + &Cyclotomic::one(&f));
        let bad = GlnModule::from_matrices(2, e).unwrap();
        let v = bad.validate().unwrap_err();
        assert!(v.i == 0 && v.j == 0 || v.k == 0 && v.l == 0, "{v:?}");
    }

    #[test]
    fn identity_is_scalar() {
        let f = field();
        let nat = GlnModule::natural(&f, 3);
        assert!(nat.identity_acts_as_scalar());
        assert!(nat.sym2().unwrap().identity_acts_as_scalar());
        assert!(nat.wedge2().unwrap().identity_acts_as_scalar());
        assert!(nat.dual().identity_acts_as_scalar());
    }
}
