//! Dense exact linear algebra over the cyclotomic field.

use std::sync::Arc;

use crate::field::{Cyclotomic, CyclotomicField};

pub type Vector = Vec<Cyclotomic>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

impl Mat {
    pub fn zeros(field: &Arc<CyclotomicField>, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Cyclotomic::zero(field); rows * cols],
        }
    }

    pub fn identity(field: &Arc<CyclotomicField>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Cyclotomic::one(field));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Cyclotomic) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclotomic::is_zero)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let field = self.data.first().or(other.data.first()).map(|x| x.field().clone());
        let Some(field) = field else {
            return Mat { rows: self.rows, cols: other.cols, data: Vec::new() };
        };
        let mut out = Mat::zeros(&field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.scale(&-Cyclotomic::one(other.data[0].field())))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn apply(&self, v: &[Cyclotomic]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Cyclotomic::zero(v[0].field());
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..self.rows {
            for k in 0..other.rows {
                for j in 0..self.cols {
                    for l in 0..other.cols {
                        data.push(self.get(i, j) * other.get(k, l));
                    }
                }
            }
        }
        Mat { rows, cols, data }
    }
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(m: &Mat) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let field = m.data[0].field().clone();
    let mut a: Vec<Vec<Cyclotomic>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = Cyclotomic::one(&field);
    let mut rank = 0;
    for col in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(p) = (rank..m.rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv_prev = prev.inv().expect("nonzero pivot");
        for i in rank + 1..m.rows {
            for j in col + 1..m.cols {
                let v = &(&a[rank][col] * &a[i][j]) - &(&a[i][col] * &a[rank][j]);
                a[i][j] = &v * &inv_prev;
            }
            a[i][col] = Cyclotomic::zero(&field);
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Incrementally built row-echelon basis of a subspace of `K^dim`.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, v)| v)
    }

    fn reduce(&self, v: &[Cyclotomic]) -> Vector {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let c = w[*p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&c * y);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Cyclotomic]) -> bool {
        self.reduce(v).iter().all(Cyclotomic::is_zero)
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Cyclotomic]) -> bool {
        assert_eq!(v.len(), self.dim);
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        let w: Vector = w.iter().map(|x| x * &inv).collect();
        // keep earlier rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&w) {
                    if !y.is_zero() {
                        *x -= &(&c * y);
                    }
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_agree() {
        let f = CyclotomicField::new(6).unwrap();
        let z = Cyclotomic::root(&f, 1);
        let one = Cyclotomic::one(&f);
        let two = Cyclotomic::from_integer(&f, 2);
        let m = Mat::from_rows(vec![
            vec![one.clone(), z.clone(), two.clone()],
            vec![&one * &z, &z * &z, &two * &z],
            vec![two.clone(), one.clone(), z.clone()],
        ]);
        assert_eq!(bareiss_rank(&m), 2);
        let mut e = EchelonBasis::new(3);
        for i in 0..3 {
            e.insert(m.row(i));
        }
        assert_eq!(e.rank(), 2);
        assert!(e.contains(m.row(1)));
        assert_eq!(bareiss_rank(&Mat::identity(&f, 4)), 4);
        assert_eq!(bareiss_rank(&Mat::zeros(&f, 3, 2)), 0);
    }
}
