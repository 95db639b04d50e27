//! Windowed span computations: how much of `F^α(V, ψ)` a single vector
//! generates, and the `T`-orbit of a vector inside one weight space.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::lattice::ExpVec;
use crate::lie::LoopElement;
use crate::linalg::{bareiss_rank, EchelonBasis, Mat, Vector};

use super::{FVector, FockModule};

/// Outcome of [`FockModule::cyclicity_probe`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub window: i64,
    pub seed: u64,
    pub start_degree: ExpVec,
    pub start_vector: Vec<String>,
    /// Dimension of the span reached inside the window.
    pub span_dim: usize,
    /// `dim V × |window|`.
    pub expected_dim: usize,
    /// Rank of the materialized span, recomputed by fraction-free elimination
    /// (skipped above [`RANK_CHECK_MAX_WIDTH`] coordinates).
    pub span_rank_check: Option<usize>,
    pub saturated: bool,
    /// `T`-orbit ranks of random vectors in the degree-0 weight space.
    pub t_orbit_ranks: Vec<usize>,
}

/// Widest materialized span that is re-ranked by fraction-free elimination.
pub const RANK_CHECK_MAX_WIDTH: usize = 256;

/// Number of random vectors whose `T`-orbit is measured.
pub const T_ORBIT_SAMPLES: usize = 20;

fn random_vector(m: &FockModule, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let v: Vector = (0..m.dim_v()).map(|_| m.ctx().int(rng.gen_range(-3..=3))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

impl FockModule {
    /// Homogeneous generators used by the probe, with degrees in `[-w, w]^n`
    /// and `B` basis indices 0 and 1 where available.
    fn probe_generators(&self, w: i64) -> Result<Vec<LoopElement>> {
        let n = self.n();
        let idx: Vec<i64> = [0, 1].into_iter().filter(|&i| self.b().is_valid_index(i)).collect();
        let mut gens = Vec::new();
        for r in ExpVec::window(n, w) {
            for &i in &idx {
                let b = self.b().basis(i);
                gens.push(self.t_elem(&r, &b));
                if !self.ctx().in_radf(&r) {
                    gens.push(self.ad_elem(&r, &b));
                } else {
                    for j in 0..n {
                        let mut u = vec![self.ctx().zero(); n];
                        u[j] = self.ctx().one();
                        gens.push(self.d_elem(&u, &r, &b)?);
                    }
                }
            }
        }
        Ok(gens)
    }

    /// Closure of a random `v(s)` under the window generators, truncated to
    /// the window, plus `T`-orbit ranks inside the degree-0 weight space.
    pub fn cyclicity_probe(&self, window: i64, seed: u64) -> Result<ProbeReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.n();
        let d = self.dim_v();
        let degrees = ExpVec::window(n, window);
        let s0 = degrees[rng.gen_range(0..degrees.len())].clone();
        let v0 = random_vector(self, &mut rng);

        let gens = self.probe_generators(window)?;
        let mut spaces: BTreeMap<ExpVec, EchelonBasis> = BTreeMap::new();
        let mut queue = vec![(s0.clone(), v0.clone())];
        spaces.entry(s0.clone()).or_insert_with(|| EchelonBasis::new(d)).insert(&v0);
        while let Some((s, v)) = queue.pop() {
            let xi = FVector::single(s, v);
            for g in &gens {
                let image = self.act(g, &xi)?;
                for (t, w) in image.components() {
                    if t.max_abs() > window {
                        continue;
                    }
                    let space = spaces.entry(t.clone()).or_insert_with(|| EchelonBasis::new(d));
                    if space.insert(w) {
                        queue.push((t.clone(), w.clone()));
                    }
                }
            }
        }
        let span_dim: usize = spaces.values().map(EchelonBasis::rank).sum();

        let width = degrees.len() * d;
        let span_rank_check = (width <= RANK_CHECK_MAX_WIDTH).then(|| self.materialized_rank(&spaces, &degrees));

        let mut t_orbit_ranks = Vec::with_capacity(T_ORBIT_SAMPLES);
        for _ in 0..T_ORBIT_SAMPLES {
            let v = random_vector(self, &mut rng);
            t_orbit_ranks.push(self.t_orbit_rank(&v, window)?);
        }

        let expected_dim = d * degrees.len();
        Ok(ProbeReport {
            window,
            seed,
            start_degree: s0,
            start_vector: v0.iter().map(ToString::to_string).collect(),
            span_dim,
            expected_dim,
            span_rank_check,
            saturated: span_dim == expected_dim,
            t_orbit_ranks,
        })
    }

    /// Rank of the span laid out over `window × V` coordinates.
    fn materialized_rank(&self, spaces: &BTreeMap<ExpVec, EchelonBasis>, degrees: &[ExpVec]) -> usize {
        let d = self.dim_v();
        let pos: BTreeMap<&ExpVec, usize> = degrees.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let width = degrees.len() * d;
        let mut rows = Vec::new();
        for (s, space) in spaces {
            for v in space.vectors() {
                let mut row = vec![self.ctx().zero(); width];
                for (k, x) in v.iter().enumerate() {
                    row[pos[s] * d + k] = x.clone();
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            0
        } else {
            bareiss_rank(&Mat::from_rows(rows))
        }
    }

    /// Rank of the closure of `v(0)` under `T(e_j, r, b1, b2)` with
    /// `r ∈ rad f ∩ [-w, w]^n` and `b1, b2` among the basis indices 0 and 1.
    pub fn t_orbit_rank(&self, v: &Vector, window: i64) -> Result<usize> {
        let n = self.n();
        let zero = ExpVec::zero(n);
        let idx: Vec<i64> = [0, 1].into_iter().filter(|&i| self.b().is_valid_index(i)).collect();
        let mut ops = Vec::new();
        for r in self.ctx().radf_window(window) {
            for j in 0..n {
                let mut u = vec![self.ctx().zero(); n];
                u[j] = self.ctx().one();
                for &i1 in &idx {
                    for &i2 in &idx {
                        ops.push(self.op_t(&u, &r, &self.b().basis(i1), &self.b().basis(i2))?);
                    }
                }
            }
        }
        let mut space = EchelonBasis::new(self.dim_v());
        let mut queue = Vec::new();
        if space.insert(v) {
            queue.push(v.clone());
        }
        while let Some(w) = queue.pop() {
            let xi = self.at_zero(w);
            for op in &ops {
                if let Some(image) = op.apply(&xi).component(&zero) {
                    if space.insert(image) {
                        queue.push(image.clone());
                    }
                }
            }
        }
        Ok(space.rank())
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::minus_one_module;
    use super::*;
    use crate::gln::GlnModule;
    use crate::lie::{BAlgebra, BKind};
    use crate::fock::ModuleParams;

    #[test]
    fn natural_module_saturates() {
        let m = minus_one_module([0, 0]);
        let rep = m.cyclicity_probe(2, 7).unwrap();
        assert_eq!(rep.expected_dim, 50);
        assert!(rep.saturated, "{rep:?}");
        assert_eq!(rep.span_rank_check, Some(rep.span_dim));
        assert!(rep.t_orbit_ranks.iter().all(|&r| r == 2));
    }

    #[test]
    fn trivial_module_saturates() {
        let m = minus_one_module([0, 0]);
        let ctx = m.ctx().clone();
        let b = BAlgebra::new(BKind::Truncated(2), ctx.zero()).unwrap();
        let v = GlnModule::trivial(ctx.field(), 2);
        let alpha = vec![ctx.zero(), ctx.zero()];
        let m = FockModule::new(ModuleParams { ctx, v, alpha, b }).unwrap();
        let rep = m.cyclicity_probe(1, 3).unwrap();
        assert_eq!(rep.span_dim, 9);
        assert!(rep.t_orbit_ranks.iter().all(|&r| r == 1));
    }
}
