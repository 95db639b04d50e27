//! The lattice `Z^n` with the twisting cocycle `σ`, the commutation form `f`
//! and the radical `rad f`.
//!
//! The matrix `q` is given by integer exponents: `q_{ij} = ζ_N^{K[i][j]}`.
//! Every value lives in `Q(ζ_{2N})` so that `σ` and a square root of
//! `σ(r, r)` share one field; `σ(a, b) = ζ_{2N}^{2E(a, b)}` with the integer
//! exponent `E(a, b) = Σ_{i<j} K[j][i] a_j b_i`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::{Cyclotomic, CyclotomicField};
use crate::smith::{column_hermite, smith_normal_form, IntMatrix};

/// A lattice degree `(a_1, …, a_n)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExpVec(pub Vec<i64>);

impl ExpVec {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// All points of `[-b, b]^n` in lexicographic order.
    pub fn window(n: usize, b: i64) -> Vec<ExpVec> {
        let mut out = vec![ExpVec(Vec::with_capacity(n))];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (-b..=b).map(move |x| {
                        let mut q = p.0.clone();
                        q.push(x);
                        ExpVec(q)
                    })
                })
                .collect();
        }
        out
    }
}

impl Add for &ExpVec {
    type Output = ExpVec;
    fn add(self, rhs: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExpVec {
    type Output = ExpVec;
    fn sub(self, rhs: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExpVec {
    type Output = ExpVec;
    fn neg(self) -> ExpVec {
        ExpVec(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for ExpVec {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Which square root of `σ(r, r)` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SqrtBranch {
    /// `ζ_{2N}^{E(r,r)}` corrected by a sign on `rad f` so that
    /// `√σ(r+s, r+s) = √σ(r, r) √σ(s, s) σ(r, s)` for all `r, s ∈ rad f`.
    #[default]
    Refined,
    /// Plain `ζ_{2N}^{E(r,r)}`; multiplicative on `rad f` only up to sign.
    Diagonal,
}

/// The quantum torus parameters `q` with cached radical data.
#[derive(Debug)]
pub struct CocycleContext {
    n: usize,
    order: i64,
    k: IntMatrix,
    field: Arc<CyclotomicField>,
    /// Skew integer matrix `M` with `f(a, e_k) = ζ_N^{(M a)_k}`.
    skew: IntMatrix,
    /// Columns form a basis of `rad f` in column Hermite form.
    radf_basis: IntMatrix,
    /// `(E(g_i, g_j) - E(g_j, g_i)) / N mod 2` for basis columns `g`.
    radf_parity: Vec<Vec<i64>>,
    branch: SqrtBranch,
}

impl CocycleContext {
    /// `order` is `N` and `k` the exponent matrix; rejects non-skew input.
    pub fn new(n: usize, order: i64, k: IntMatrix) -> Result<Arc<Self>> {
        Self::with_branch(n, order, k, SqrtBranch::default())
    }

    pub fn with_branch(n: usize, order: i64, k: IntMatrix, branch: SqrtBranch) -> Result<Arc<Self>> {
        let bad = |m: String| Err(AlgebraError::Cocycle(m));
        if n < 1 {
            return bad("rank n must be positive".into());
        }
        if order < 1 {
            return bad(format!("N must be positive, got {order}"));
        }
        if k.len() != n || k.iter().any(|row| row.len() != n) {
            return bad(format!("K must be {n}x{n}"));
        }
        for i in 0..n {
            if k[i][i].rem_euclid(order) != 0 {
                return bad(format!("K[{i}][{i}] must be 0 mod N (q_ii = 1)"));
            }
            for j in 0..n {
                if (k[i][j] + k[j][i]).rem_euclid(order) != 0 {
                    return bad(format!("K[{i}][{j}] must equal -K[{j}][{i}] mod N"));
                }
            }
        }
        let conductor = u32::try_from(2 * order).map_err(|_| AlgebraError::Cocycle("N too large".into()))?;
        let field = CyclotomicField::new(conductor)?;

        let mut skew = vec![vec![0i64; n]; n];
        for j in 0..n {
            for i in 0..j {
                skew[i][j] = k[j][i];
                skew[j][i] = -k[j][i];
            }
        }

        // a ∈ rad f  ⇔  M a ≡ 0 (mod N). With U M V = D this is
        // d_i (V^{-1} a)_i ≡ 0, i.e. (V^{-1} a)_i ∈ (N / gcd(d_i, N)) Z.
        let smith = smith_normal_form(&skew);
        let diag = smith.diagonal();
        let mut basis = smith.v.clone();
        for (j, &d) in diag.iter().enumerate() {
            let step = order / num_integer::gcd(d, order);
            for row in basis.iter_mut() {
                row[j] *= step;
            }
        }
        let radf_basis = column_hermite(&basis);

        let mut ctx = Self {
            n,
            order,
            k,
            field,
            skew,
            radf_basis,
            radf_parity: Vec::new(),
            branch,
        };
        let cols = ctx.radf_columns();
        let parity = cols
            .iter()
            .map(|gi| {
                cols.iter()
                    .map(|gj| {
                        let diff = ctx.sigma_exponent(gi, gj) - ctx.sigma_exponent(gj, gi);
                        debug_assert_eq!(diff.rem_euclid(order), 0);
                        (diff / order).rem_euclid(2)
                    })
                    .collect()
            })
            .collect();
        ctx.radf_parity = parity;
        Ok(Arc::new(ctx))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N`, the common order of the `q_{ij}`.
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn exponents(&self) -> &IntMatrix {
        &self.k
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn branch(&self) -> SqrtBranch {
        self.branch
    }

    pub fn skew_matrix(&self) -> &IntMatrix {
        &self.skew
    }

    pub fn check_dim(&self, a: &ExpVec) -> Result<()> {
        if a.len() != self.n {
            return Err(AlgebraError::Dimension {
                expected: self.n,
                got: a.len(),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> Cyclotomic {
        Cyclotomic::zero(&self.field)
    }

    pub fn one(&self) -> Cyclotomic {
        Cyclotomic::one(&self.field)
    }

    pub fn int(&self, v: i64) -> Cyclotomic {
        Cyclotomic::from_integer(&self.field, v)
    }

    /// `ζ_{2N}^e`.
    pub fn root(&self, e: i64) -> Cyclotomic {
        Cyclotomic::root(&self.field, e)
    }

    /// `E(a, b) = Σ_{i<j} K[j][i] a_j b_i`, so that `σ(a, b) = ζ_N^{E(a, b)}`.
    pub fn sigma_exponent(&self, a: &ExpVec, b: &ExpVec) -> i64 {
        let mut e = 0;
        for j in 0..self.n {
            for i in 0..j {
                e += self.k[j][i] * a.0[j] * b.0[i];
            }
        }
        e
    }

    pub fn sigma(&self, a: &ExpVec, b: &ExpVec) -> Result<Cyclotomic> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.root(2 * self.sigma_exponent(a, b)))
    }

    pub fn f(&self, a: &ExpVec, b: &ExpVec) -> Result<Cyclotomic> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.root(2 * (self.sigma_exponent(a, b) - self.sigma_exponent(b, a))))
    }

    /// `σ(a, b) - σ(b, a)`, the structure constant of `[t^a, t^b]`.
    pub fn commutator_coeff(&self, a: &ExpVec, b: &ExpVec) -> Cyclotomic {
        let e1 = self.sigma_exponent(a, b);
        let e2 = self.sigma_exponent(b, a);
        if (e1 - e2).rem_euclid(self.order) == 0 {
            return self.zero();
        }
        self.root(2 * e1) - self.root(2 * e2)
    }

    pub fn in_radf(&self, a: &ExpVec) -> bool {
        self.skew
            .iter()
            .all(|row| row.iter().zip(&a.0).map(|(m, x)| m * x).sum::<i64>().rem_euclid(self.order) == 0)
    }

    /// `n x n` basis of `rad f`, columns are generators.
    pub fn radf_basis(&self) -> &IntMatrix {
        &self.radf_basis
    }

    pub fn radf_columns(&self) -> Vec<ExpVec> {
        (0..self.n)
            .map(|j| ExpVec(self.radf_basis.iter().map(|row| row[j]).collect()))
            .collect()
    }

    /// Integer coordinates of `a` in the radical basis, if `a ∈ rad f`.
    pub fn radf_coords(&self, a: &ExpVec) -> Option<Vec<i64>> {
        // lower-triangular forward substitution
        let h = &self.radf_basis;
        let mut k = vec![0i64; self.n];
        for i in 0..self.n {
            let partial: i64 = (0..i).map(|j| h[i][j] * k[j]).sum();
            let rest = a.0[i] - partial;
            if rest % h[i][i] != 0 {
                return None;
            }
            k[i] = rest / h[i][i];
        }
        Some(k)
    }

    /// Exponent `e` with `√σ(r, r) = ζ_{2N}^e`.
    pub fn sqrt_sigma_exponent(&self, r: &ExpVec) -> i64 {
        let base = self.sigma_exponent(r, r);
        if self.branch == SqrtBranch::Diagonal {
            return base;
        }
        match self.radf_coords(r) {
            Some(k) => {
                let mut parity = 0;
                for i in 0..self.n {
                    for j in i + 1..self.n {
                        parity += k[i] * k[j] * self.radf_parity[i][j];
                    }
                }
                base + self.order * parity.rem_euclid(2)
            }
            None => base,
        }
    }

    /// A square root of `σ(r, r)`. On `rad f` (refined branch) it satisfies
    /// `√σ(r+s) = √σ(r) √σ(s) σ(r, s)`.
    pub fn sqrt_sigma_diag(&self, r: &ExpVec) -> Result<Cyclotomic> {
        self.check_dim(r)?;
        Ok(self.root(self.sqrt_sigma_exponent(r)))
    }

    /// `(u, s) = Σ u_i s_i`.
    pub fn pairing(&self, u: &[Cyclotomic], s: &ExpVec) -> Cyclotomic {
        let mut acc = self.zero();
        for (ui, &si) in u.iter().zip(&s.0) {
            if si != 0 && !ui.is_zero() {
                acc += &ui.scale_int(si);
            }
        }
        acc
    }

    /// Points of `rad f` in `[-b, b]^n`, by direct congruence test.
    pub fn radf_window(&self, b: i64) -> Vec<ExpVec> {
        ExpVec::window(self.n, b)
            .into_iter()
            .filter(|a| self.in_radf(a))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn minus_one() -> Arc<CocycleContext> {
        CocycleContext::new(2, 2, vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn v(x: &[i64]) -> ExpVec {
        ExpVec(x.to_vec())
    }

    #[test]
    fn sigma_examples() {
        let c = minus_one();
        assert!(c.sigma(&v(&[3, -1]), &v(&[0, 0])).unwrap().is_one());
        assert!(c.sigma(&v(&[1, 0]), &v(&[0, 1])).unwrap().is_one());
        assert_eq!(c.sigma(&v(&[0, 1]), &v(&[1, 0])).unwrap(), c.int(-1));
        assert_eq!(c.f(&v(&[1, 0]), &v(&[0, 1])).unwrap(), c.int(-1));
        assert_eq!(c.sigma_exponent(&v(&[0, 1]), &v(&[1, 0])), 1);
        assert!(c.sigma(&v(&[1]), &v(&[1, 0])).is_err());
    }

    #[test]
    fn radical_examples() {
        let c = minus_one();
        assert_eq!(c.radf_basis(), &vec![vec![2, 0], vec![0, 2]]);
        assert!(c.in_radf(&v(&[0, 0])));
        assert!(!c.in_radf(&v(&[1, 0])));
        assert!(c.in_radf(&v(&[2, 0])));
        let id = CocycleContext::new(3, 2, vec![vec![0; 3]; 3]).unwrap();
        assert_eq!(id.radf_basis(), &crate::smith::identity(3));
        // q12 = ζ_3, others 1
        let c3 = CocycleContext::new(3, 3, vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(c3.radf_basis(), &vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn rejects_non_skew() {
        assert!(CocycleContext::new(2, 3, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(CocycleContext::new(2, 3, vec![vec![1, 1], vec![-1, 0]]).is_err());
        assert!(CocycleContext::new(2, 3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn sqrt_squares_to_sigma() {
        let c = CocycleContext::new(3, 6, vec![vec![0, 1, 2], vec![-1, 0, 3], vec![-2, -3, 0]]).unwrap();
        for r in ExpVec::window(3, 3) {
            let s = c.sqrt_sigma_diag(&r).unwrap();
            assert_eq!(&s * &s, c.sigma(&r, &r).unwrap());
        }
        assert!(c.sqrt_sigma_diag(&ExpVec::zero(3)).unwrap().is_one());
    }
}
