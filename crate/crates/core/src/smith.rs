//! Integer matrix normal forms used for the radical lattice.
//!
//! Matrices are dense row-major `Vec<Vec<i64>>`. Entries stay small in every
//! use here (cocycle exponents and lattice bases of rank ≤ a handful), so plain
//! `i64` arithmetic with overflow checks is enough.

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Smith normal form `U · A · V = D` with `U`, `V` unimodular.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries `d_0 | d_1 | …`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i64> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i]).collect()
    }
}

fn swap_rows(m: &mut IntMatrix, i: usize, j: usize) {
    m.swap(i, j);
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// row_i -= q * row_j
fn row_axpy(m: &mut IntMatrix, i: usize, j: usize, q: i64) {
    for c in 0..m[i].len() {
        m[i][c] = m[i][c]
            .checked_sub(q.checked_mul(m[j][c]).expect("overflow"))
            .expect("overflow");
    }
}

/// col_i -= q * col_j
fn col_axpy(m: &mut IntMatrix, i: usize, j: usize, q: i64) {
    for row in m.iter_mut() {
        row[i] = row[i]
            .checked_sub(q.checked_mul(row[j]).expect("overflow"))
            .expect("overflow");
    }
}

/// Pivot: smallest nonzero absolute value in the trailing block, ties to the
/// lowest (row, column) index.
fn find_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i64, usize, usize)> = None;
    for (i, row) in d.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                best = Some((x.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&d, t) else {
            break;
        };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let p = d[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(p);
                if q != 0 {
                    row_axpy(&mut d, i, t, q);
                    row_axpy(&mut u, i, t, q);
                }
                dirty |= d[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(p);
                if q != 0 {
                    col_axpy(&mut d, j, t, q);
                    col_axpy(&mut v, j, t, q);
                }
                dirty |= d[t][j] != 0;
            }
            if !dirty {
                // divisibility of the trailing block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| d[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        // fold the offending row into the pivot row
                        row_axpy(&mut d, t, i, -1);
                        row_axpy(&mut u, t, i, -1);
                        continue;
                    }
                }
            }
            // a smaller remainder exists in the pivot row/column: re-pivot
            let (pi, pj) = find_pivot_cross(&d, t);
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    Smith { u, d, v }
}

/// Smallest nonzero entry in row `t` / column `t` (ties to lowest index).
fn find_pivot_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (d[t][t].abs(), t, t);
    for (i, row) in d.iter().enumerate().skip(t + 1) {
        let x = row[t].abs();
        if x != 0 && (best.0 == 0 || x < best.0) {
            best = (x, i, t);
        }
    }
    for (j, &x) in d[t].iter().enumerate().skip(t + 1) {
        if x != 0 && (best.0 == 0 || x.abs() < best.0) {
            best = (x.abs(), t, j);
        }
    }
    (best.1, best.2)
}

/// Column-style Hermite normal form of a full-rank square basis: lower
/// triangular, positive diagonal, and `0 <= h[i][j] < h[i][i]` for `j < i`.
/// The columns generate the same lattice as the input columns.
pub fn column_hermite(basis: &IntMatrix) -> IntMatrix {
    let n = basis.len();
    let mut h = basis.clone();
    for i in 0..n {
        // gcd-eliminate row i over columns i..n into column i
        loop {
            let nz: Vec<usize> = (i..n).filter(|&j| h[i][j] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    swap_cols(&mut h, i, j);
                }
                break;
            }
            let &jmin = nz.iter().min_by_key(|&&j| (h[i][j].abs(), j)).unwrap();
            for &j in &nz {
                if j != jmin {
                    let q = h[i][j].div_euclid(h[i][jmin]);
                    col_axpy(&mut h, j, jmin, q);
                }
            }
        }
        assert!(h[i][i] != 0, "basis is not full rank");
        if h[i][i] < 0 {
            for row in h.iter_mut() {
                row[i] = -row[i];
            }
        }
        for j in 0..i {
            let q = h[i][j].div_euclid(h[i][i]);
            if q != 0 {
                col_axpy(&mut h, j, i, q);
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(mat_mul(&mat_mul(&s.u, a), &s.v), s.d);
        let diag = s.diagonal();
        for (i, row) in s.d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j {
                    assert_eq!(x, 0);
                }
            }
        }
        for w in diag.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0, "divisibility {diag:?}");
            } else {
                assert!(w[0] >= 0);
            }
        }
    }

    #[test]
    fn smith_small_cases() {
        check_smith(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        check_smith(&vec![vec![0, 1], vec![-1, 0]]);
        check_smith(&vec![vec![0, 0], vec![0, 0]]);
        check_smith(&vec![vec![6, 4], vec![4, 6]]);
        check_smith(&vec![vec![0, 1, -1], vec![-1, 0, 2], vec![1, -2, 0]]);
        let s = smith_normal_form(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(s.diagonal(), vec![2, 6, 12]);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = vec![vec![2, 0], vec![0, 2]];
        let b = vec![vec![2, 2], vec![0, 2]];
        assert_eq!(column_hermite(&a), column_hermite(&b));
        assert_eq!(column_hermite(&b), a);
        let c = vec![vec![3, 1], vec![0, -1]];
        assert_eq!(column_hermite(&c), vec![vec![1, 0], vec![2, 3]]);
    }

    proptest::proptest! {
        #[test]
        fn smith_random(a in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 3), 3)) {
            check_smith(&a);
        }
    }
}
