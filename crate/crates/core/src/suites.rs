//! Randomized verification suites over a [`Scenario`].
//!
//! Every trial draws its inputs from a ChaCha stream seeded by
//! `(seed, suite, trial)`, so any failure can be replayed alone with
//! [`rerun_trial`] and reports are identical across runs and thread counts.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exec::Execution;
use crate::field::Cyclotomic;
use crate::fock::{FVector, FockModule};
use crate::gln::GlnModule;
use crate::lattice::{CocycleContext, ExpVec};
use crate::lie::{BElement, GElement, LoopElement};
use crate::report::{Failure, SuiteReport, MAX_RECORDED_FAILURES};
use crate::scenario::{Scenario, Suite};
use crate::torus::TorusElement;

/// Result of one named check on one draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub check: &'static str,
    pub inputs: BTreeMap<String, String>,
    pub ok: bool,
    pub witness: String,
}

/// Everything a single trial produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrialResult {
    pub outcomes: Vec<Outcome>,
    pub skipped: u64,
}

impl TrialResult {
    fn push(&mut self, check: &'static str, inputs: Inputs, residual: impl Residual) {
        self.outcomes.push(Outcome {
            check,
            inputs: inputs.0,
            ok: residual.is_zero(),
            witness: residual.describe(),
        });
    }

    fn push_bool(&mut self, check: &'static str, inputs: Inputs, ok: bool, witness: impl Into<String>) {
        self.outcomes.push(Outcome {
            check,
            inputs: inputs.0,
            ok,
            witness: if ok { "0".into() } else { witness.into() },
        });
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }
}

/// Anything that can serve as a residual.
pub trait Residual {
    fn is_zero(&self) -> bool;
    fn describe(&self) -> String;
}

impl Residual for FVector {
    fn is_zero(&self) -> bool {
        FVector::is_zero(self)
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Residual for Cyclotomic {
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Residual for TorusElement {
    fn is_zero(&self) -> bool {
        TorusElement::is_zero(self)
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Residual for GElement {
    fn is_zero(&self) -> bool {
        GElement::is_zero(self)
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Residual for LoopElement {
    fn is_zero(&self) -> bool {
        LoopElement::is_zero(self)
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Residual for Vec<Cyclotomic> {
    fn is_zero(&self) -> bool {
        self.iter().all(Cyclotomic::is_zero)
    }
    fn describe(&self) -> String {
        let parts: Vec<String> = self.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(","))
    }
}

impl<T: Residual> Residual for Result<T> {
    fn is_zero(&self) -> bool {
        matches!(self, Ok(x) if x.is_zero())
    }
    fn describe(&self) -> String {
        match self {
            Ok(x) => x.describe(),
            Err(e) => format!("error: {e}"),
        }
    }
}

/// Named, ordered input record for a failure witness.
#[derive(Default)]
struct Inputs(BTreeMap<String, String>);

impl Inputs {
    fn new() -> Self {
        Self::default()
    }

    fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }
}

fn fmt_u(u: &[Cyclotomic]) -> String {
    let parts: Vec<String> = u.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn fmt_bel(b: &BElement) -> String {
    crate::lie::fmt_b(b)
}

/// Seed of trial `trial` in `suite`, by SplitMix64 finalization.
pub fn trial_seed(seed: u64, suite: Suite, trial: u64) -> u64 {
    let mut z = seed
        .wrapping_add(suite.id().wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(trial.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random inputs for one trial.
pub struct Draw<'a> {
    pub m: &'a FockModule,
    pub rng: ChaCha8Rng,
    pub window: i64,
}

impl<'a> Draw<'a> {
    pub fn new(m: &'a FockModule, seed: u64, window: i64) -> Self {
        Self {
            m,
            rng: ChaCha8Rng::seed_from_u64(seed),
            window,
        }
    }

    fn ctx(&self) -> &'a CocycleContext {
        self.m.ctx()
    }

    fn n(&self) -> usize {
        self.m.n()
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    fn chance(&mut self, k: u32) -> bool {
        self.rng.gen_ratio(1, k)
    }

    pub fn degree(&mut self) -> ExpVec {
        let w = self.window;
        ExpVec((0..self.n()).map(|_| self.rng.gen_range(-w..=w)).collect())
    }

    /// A random element of `rad f`, sometimes zero.
    pub fn radf_degree(&mut self) -> ExpVec {
        let cols = self.ctx().radf_columns();
        let mut r = ExpVec::zero(self.n());
        for c in &cols {
            let k = self.rng.gen_range(-1..=1);
            r = &r + &c.scale(k);
        }
        r
    }

    /// A random degree outside `rad f`, if the window has one.
    pub fn outer_degree(&mut self) -> Option<ExpVec> {
        let ctx = self.ctx();
        (0..64).map(|_| self.degree()).find(|a| !ctx.in_radf(a))
    }

    /// Small cyclotomic `a + b ζ^k`.
    pub fn scalar(&mut self) -> Cyclotomic {
        let a = self.rng.gen_range(-3..=3);
        let c = self.ctx().int(a);
        if self.chance(2) {
            let b = self.rng.gen_range(-2..=2);
            let k = self.rng.gen_range(1..=2 * self.ctx().order());
            &c + &self.ctx().root(k).scale_int(b)
        } else {
            c
        }
    }

    pub fn nonzero_scalar(&mut self) -> Cyclotomic {
        loop {
            let c = self.scalar();
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// Random `u`; orthogonal to `s` about one time in six.
    pub fn vector_u(&mut self, s: Option<&ExpVec>) -> Vec<Cyclotomic> {
        let n = self.n();
        if let (Some(s), true) = (s, self.chance(6)) {
            let mut u = vec![self.ctx().zero(); n];
            if n >= 2 {
                let i = self.rng.gen_range(0..n);
                let j = (i + 1 + self.rng.gen_range(0..n - 1)) % n;
                u[i] = self.ctx().int(s.0[j]);
                u[j] = self.ctx().int(-s.0[i]);
            }
            return u;
        }
        (0..n).map(|_| self.ctx().int(self.rng.gen_range(-2..=2))).collect()
    }

    pub fn b_basis(&mut self) -> BElement {
        let (lo, hi) = self.m.b().sample_range();
        let i = self.rng.gen_range(lo..=hi);
        self.m.b().basis(i)
    }

    /// One or two basis terms with small coefficients.
    pub fn b_elem(&mut self) -> BElement {
        let (lo, hi) = self.m.b().sample_range();
        let mut b = BElement::new();
        for _ in 0..self.rng.gen_range(1..=2) {
            let i = self.rng.gen_range(lo..=hi);
            let c = self.nonzero_scalar();
            crate::lie::add_b_term(&mut b, i, c);
        }
        if b.is_empty() {
            b = self.m.b().one();
        }
        b
    }

    pub fn b4(&mut self) -> [BElement; 4] {
        [self.b_elem(), self.b_elem(), self.b_elem(), self.b_elem()]
    }

    pub fn v_vector(&mut self) -> Vec<Cyclotomic> {
        (0..self.m.dim_v()).map(|_| self.scalar()).collect()
    }

    /// One to three homogeneous components.
    pub fn fvector(&mut self) -> FVector {
        let mut xi = FVector::zero();
        for _ in 0..self.rng.gen_range(1..=3) {
            let s = self.degree();
            let v = self.v_vector();
            xi.add_component(s, &v);
        }
        xi
    }

    pub fn torus_elem(&mut self) -> TorusElement {
        let mut x = TorusElement::zero();
        for _ in 0..self.rng.gen_range(1..=3) {
            let a = self.degree();
            let c = self.nonzero_scalar();
            x.add_term(a, c);
        }
        x
    }

    /// A homogeneous monomial of the given species (0 = t, 1 = ad, 2 = D).
    pub fn g_monomial(&mut self, species: u8) -> Option<GElement> {
        let c = self.nonzero_scalar();
        match species {
            0 => {
                let a = self.degree();
                Some(GElement::from_torus(TorusElement::monomial(a, c)))
            }
            1 => {
                let a = self.outer_degree()?;
                self.ctx().g_ad(a, c).ok()
            }
            _ => {
                let r = self.radf_degree();
                let u = loop {
                    let u = self.vector_u(None);
                    if u.iter().any(|x| !x.is_zero()) {
                        break u;
                    }
                };
                self.ctx().g_d(u, r).ok()
            }
        }
    }

    /// A sum of one to three monomials of mixed species.
    pub fn g_elem(&mut self) -> GElement {
        let mut x = GElement::zero();
        for _ in 0..self.rng.gen_range(1..=3) {
            let species = self.rng.gen_range(0..3);
            if let Some(y) = self.g_monomial(species) {
                x = x.add(&y);
            }
        }
        x
    }

    pub fn loop_elem(&mut self) -> LoopElement {
        let mut x = LoopElement::zero();
        for _ in 0..self.rng.gen_range(1..=2) {
            let g = self.g_elem();
            let b = self.b_elem();
            x = x.add(&LoopElement::tensor(&g, &b));
        }
        x
    }
}

/// Runs `suite` on `scenario` with the scenario's trial count, seed and window.
pub fn run_suite(scenario: &Scenario, suite: Suite, exec: Execution, timings: bool) -> SuiteReport {
    let start = Instant::now();
    let mut results: Vec<(Option<u64>, TrialResult)> = vec![(None, fixed_checks(scenario, suite))];
    let mut probe = None;
    let mut candidates = Vec::new();
    let trials = match suite {
        Suite::Probe => {
            let (res, rep, cand) = probe_suite(scenario);
            results.push((None, res));
            probe = rep;
            candidates = cand;
            0
        }
        _ => {
            let per = exec.map_trials(scenario.trials, |t| rerun_trial(scenario, suite, t));
            results.extend(per.into_iter().enumerate().map(|(t, r)| (Some(t as u64), r)));
            scenario.trials
        }
    };

    let mut checks = 0;
    let mut skipped = 0;
    let mut failure_count = 0;
    let mut failures = Vec::new();
    let mut check_counts = BTreeMap::new();
    for (trial, res) in results {
        skipped += res.skipped;
        for o in res.outcomes {
            checks += 1;
            *check_counts.entry(o.check.to_string()).or_insert(0) += 1;
            if o.ok {
                continue;
            }
            failure_count += 1;
            if failures.len() < MAX_RECORDED_FAILURES {
                failures.push(Failure {
                    check: o.check.to_string(),
                    trial,
                    inputs: o.inputs,
                    residual_norm_is_zero: false,
                    witness: o.witness,
                });
            }
        }
    }
    SuiteReport {
        name: suite.name().to_string(),
        trials,
        checks,
        skipped,
        check_counts,
        failure_count,
        failures,
        candidates,
        probe,
        wall_ms: timings.then(|| start.elapsed().as_millis() as u64),
        passed: failure_count == 0,
    }
}

/// Replays one random trial of `suite`.
pub fn rerun_trial(scenario: &Scenario, suite: Suite, trial: u64) -> TrialResult {
    let seed = trial_seed(scenario.seed, suite, trial);
    let mut d = Draw::new(&scenario.module, seed, scenario.window);
    match suite {
        Suite::Cocycle => cocycle_trial(&mut d),
        Suite::Torus => torus_trial(&mut d),
        Suite::Lie => lie_trial(&mut d),
        Suite::Rep => rep_trial(&mut d),
        Suite::Section3 => section3_trial(&mut d),
        Suite::Lattice => lattice_trial(&mut d),
        Suite::Probe => TrialResult::default(),
    }
}

fn fixed_checks(scenario: &Scenario, suite: Suite) -> TrialResult {
    match suite {
        Suite::Lattice => radf_window_checks(scenario.ctx(), scenario.radf_window),
        Suite::Rep => gln_checks(&scenario.module.params().v),
        _ => TrialResult::default(),
    }
}

/// `E_ij` commutation relations of `V`.
pub fn gln_checks(v: &GlnModule) -> TrialResult {
    let mut out = TrialResult::default();
    let res = v.validate();
    let witness = match res {
        Ok(()) => String::new(),
        Err(w) => format!("[E_{}{}, E_{}{}] wrong", w.i + 1, w.j + 1, w.k + 1, w.l + 1),
    };
    out.push_bool("gln_commutation", Inputs::new().with("dim", v.dim()), res.is_ok(), witness);
    out
}

fn eq_residual(lhs: &Cyclotomic, rhs: &Cyclotomic) -> Cyclotomic {
    lhs - rhs
}

fn cocycle_trial(d: &mut Draw<'_>) -> TrialResult {
    let mut out = TrialResult::default();
    let (a, b, c) = (d.degree(), d.degree(), d.degree());
    let k = d.int(-d.window, d.window);
    let ctx = d.m.ctx().clone();
    let one = ctx.one();
    let inp = || Inputs::new().with("a", &a).with("b", &b).with("c", &c).with("k", k);
    let f = |x: &ExpVec, y: &ExpVec| ctx.f(x, y).expect("dimensions match");
    let s = |x: &ExpVec, y: &ExpVec| ctx.sigma(x, y).expect("dimensions match");

    out.push("f_inverse", inp(), eq_residual(&(&f(&a, &b) * &f(&b, &a)), &one));
    let ka = a.scale(k);
    out.push("f_multiple_left", inp(), eq_residual(&f(&ka, &a), &one));
    out.push("f_multiple_right", inp(), eq_residual(&f(&a, &ka), &one));
    out.push("f_additive_left", inp(), eq_residual(&f(&(&a + &b), &c), &(&f(&a, &c) * &f(&b, &c))));
    out.push("f_additive_right", inp(), eq_residual(&f(&a, &(&b + &c)), &(&f(&a, &b) * &f(&a, &c))));
    out.push("sigma_additive_right", inp(), eq_residual(&s(&a, &(&b + &c)), &(&s(&a, &b) * &s(&a, &c))));
    out.push("sigma_additive_left", inp(), eq_residual(&s(&(&a + &b), &c), &(&s(&a, &c) * &s(&b, &c))));
    out.push("f_from_sigma", inp(), eq_residual(&(&f(&a, &b) * &s(&b, &a)), &s(&a, &b)));

    let ta = ctx.t_monomial(a.clone());
    let tb = ctx.t_monomial(b.clone());
    let ab = ctx.t_mul(&ta, &tb).expect("same context");
    let ba = ctx.t_mul(&tb, &ta).expect("same context");
    out.push("monomial_commutation", inp(), ab.sub(&ba.scale(&f(&a, &b))));
    out.push("monomial_product", inp(), ab.sub(&ctx.t_monomial(&a + &b).scale(&s(&a, &b))));

    let sq = ctx.sqrt_sigma_diag(&a).expect("dimension");
    out.push("sqrt_square", inp(), eq_residual(&(&sq * &sq), &s(&a, &a)));

    let oracle = (0..ctx.n()).all(|i| f(&a, &ExpVec::unit(ctx.n(), i)).is_one());
    out.push_bool(
        "radf_membership",
        inp(),
        ctx.in_radf(&a) == oracle,
        format!("in_radf = {}, f(a, e_k) = 1 for all k: {oracle}", ctx.in_radf(&a)),
    );

    let (r, t) = (d.radf_degree(), d.radf_degree());
    let lhs = ctx.sqrt_sigma_diag(&(&r + &t)).expect("dimension");
    let rhs = &(&ctx.sqrt_sigma_diag(&r).expect("dimension") * &ctx.sqrt_sigma_diag(&t).expect("dimension")) * &s(&r, &t);
    out.push("sqrt_multiplicative_on_radf", Inputs::new().with("r", &r).with("s", &t), eq_residual(&lhs, &rhs));
    out
}

pub fn radf_window_checks(ctx: &CocycleContext, w: i64) -> TrialResult {
    let mut out = TrialResult::default();
    let n = ctx.n();
    let units: Vec<ExpVec> = (0..n).map(|i| ExpVec::unit(n, i)).collect();
    for a in ExpVec::window(n, w) {
        let oracle = units.iter().all(|e| ctx.f(&a, e).expect("dimension").is_one());
        let by_basis = ctx.radf_coords(&a).is_some();
        out.push_bool(
            "radf_window_agreement",
            Inputs::new().with("a", &a),
            oracle == by_basis && oracle == ctx.in_radf(&a),
            format!("f-oracle {oracle}, basis {by_basis}, congruence {}", ctx.in_radf(&a)),
        );
    }
    // m ∈ rad f ⇔ f(r, s) = 1 for all r + s = m, over a smaller window
    let small = w.min(2);
    for m in ExpVec::window(n, small) {
        let all_split = ExpVec::window(n, small)
            .iter()
            .all(|r| ctx.f(r, &(&m - r)).expect("dimension").is_one());
        out.push_bool(
            "radf_split_characterization",
            Inputs::new().with("m", &m),
            all_split == ctx.in_radf(&m),
            format!("split test {all_split}, in_radf {}", ctx.in_radf(&m)),
        );
    }
    for (j, g) in ctx.radf_columns().iter().enumerate() {
        out.push_bool("radf_basis_column", Inputs::new().with("column", j).with("g", g), ctx.in_radf(g), "column not in rad f");
    }
    for e in &units {
        let ne = e.scale(ctx.order());
        out.push_bool("radf_contains_n_lattice", Inputs::new().with("a", &ne), ctx.radf_coords(&ne).is_some(), "N e_k not generated");
    }
    out
}

fn lattice_trial(d: &mut Draw<'_>) -> TrialResult {
    let mut out = TrialResult::default();
    let ctx = d.m.ctx().clone();
    let n = ctx.n();
    let cols = ctx.radf_columns();
    let coeffs: Vec<i64> = (0..n).map(|_| d.int(-3, 3)).collect();
    let mut r = ExpVec::zero(n);
    for (c, g) in coeffs.iter().zip(&cols) {
        r = &r + &g.scale(*c);
    }
    let inp = Inputs::new().with("coeffs", format!("{coeffs:?}")).with("r", &r);
    out.push_bool("radf_combination_member", inp, ctx.in_radf(&r), "combination left rad f");
    let back = ctx.radf_coords(&r);
    out.push_bool(
        "radf_coordinates_roundtrip",
        Inputs::new().with("r", &r),
        back.as_deref() == Some(coeffs.as_slice()),
        format!("{back:?}"),
    );
    let (a, b) = (d.radf_degree(), d.radf_degree());
    out.push_bool("radf_closed_under_sum", Inputs::new().with("a", &a).with("b", &b), ctx.in_radf(&(&a + &b)), "sum left rad f");
    let x = d.degree();
    out.push_bool(
        "radf_membership_vs_coordinates",
        Inputs::new().with("a", &x),
        ctx.in_radf(&x) == ctx.radf_coords(&x).is_some(),
        "congruence and basis disagree",
    );
    out
}

fn torus_trial(d: &mut Draw<'_>) -> TrialResult {
    let mut out = TrialResult::default();
    let ctx = d.m.ctx().clone();
    let (x, y, z) = (d.torus_elem(), d.torus_elem(), d.torus_elem());
    let inp = || Inputs::new().with("x", &x).with("y", &y).with("z", &z);
    let mul = |a: &TorusElement, b: &TorusElement| ctx.t_mul(a, b).expect("same context");
    let br = |a: &TorusElement, b: &TorusElement| ctx.t_bracket(a, b).expect("same context");

    out.push("associativity", inp(), mul(&mul(&x, &y), &z).sub(&mul(&x, &mul(&y, &z))));
    let jac = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).add(&br(&z, &br(&x, &y)));
    out.push("jacobi", inp(), jac);
    out.push("bracket_is_commutator", inp(), br(&x, &y).sub(&mul(&x, &y).sub(&mul(&y, &x))));
    let unit = ctx.t_monomial(ExpVec::zero(ctx.n()));
    out.push("unit", inp(), mul(&unit, &x).sub(&x).add(&mul(&x, &unit).sub(&x)));

    let (comm, center) = ctx.decompose(&x).expect("same context");
    out.push("decompose_sum", inp(), comm.add(&center).sub(&x));
    let disjoint = comm.support().all(|a| center.coeff(a).is_none());
    out.push_bool("decompose_disjoint", inp(), disjoint, "supports overlap");
    let b = d.degree();
    let tb = ctx.t_monomial(b.clone());
    out.push("center_commutes", inp().with("b", &b), br(&center, &tb));
    for a in comm.support() {
        let found = ctx.commutator_witness(a, 4);
        out.push_bool(
            "commutator_witness",
            Inputs::new().with("a", a),
            found.is_some(),
            "no r + s = a in [-4, 4]^n with σ(r,s) ≠ σ(s,r)",
        );
    }
    out
}

fn lie_trial(d: &mut Draw<'_>) -> TrialResult {
    let mut out = TrialResult::default();
    let ctx = d.m.ctx().clone();
    let la = d.m.loop_algebra().clone();
    let gb = |a: &GElement, b: &GElement| ctx.g_bracket(a, b);

    let (x, y, z) = (d.g_elem(), d.g_elem(), d.g_elem());
    let inp = || Inputs::new().with("x", &x).with("y", &y).with("z", &z);
    let anti = gb(&x, &y).and_then(|a| Ok(a.add(&gb(&y, &x)?)));
    out.push("g_antisymmetry", inp(), anti);
    let jac = (|| -> Result<GElement> {
        Ok(gb(&x, &gb(&y, &z)?)?.add(&gb(&y, &gb(&z, &x)?)?).add(&gb(&z, &gb(&x, &y)?)?))
    })();
    out.push("g_jacobi", inp(), jac);

    let (p, q, r) = (d.loop_elem(), d.loop_elem(), d.loop_elem());
    let inp = || Inputs::new().with("x", &p).with("y", &q).with("z", &r);
    let lb = |a: &LoopElement, b: &LoopElement| la.bracket(a, b);
    out.push("tau_antisymmetry", inp(), lb(&p, &q).and_then(|a| Ok(a.add(&lb(&q, &p)?))));
    let jac = (|| -> Result<LoopElement> {
        Ok(lb(&p, &lb(&q, &r)?)?.add(&lb(&q, &lb(&r, &p)?)?).add(&lb(&r, &lb(&p, &q)?)?))
    })();
    out.push("tau_jacobi", inp(), jac);

    // grading and h-diagonality on homogeneous monomials
    let s1 = d.int(0, 2) as u8;
    let s2 = d.int(0, 2) as u8;
    match (d.g_monomial(s1), d.g_monomial(s2)) {
        (Some(a), Some(b)) => {
            let (da, db) = (a.degrees()[0].clone(), b.degrees()[0].clone());
            let inp = Inputs::new().with("x", &a).with("y", &b);
            match gb(&a, &b) {
                Ok(c) => {
                    let sum = &da + &db;
                    let ok = c.degrees().iter().all(|e| *e == sum);
                    out.push_bool("grading", inp, ok, format!("bracket {c} not of degree {sum}"));
                }
                Err(e) => out.push_bool("grading", inp, false, format!("error: {e}")),
            }
            let u = d.vector_u(Some(&da));
            let h = ctx.g_d(u.clone(), ExpVec::zero(ctx.n())).expect("0 ∈ rad f");
            let lhs = gb(&h, &a).map(|c| c.sub(&a.scale(&ctx.pairing(&u, &da))));
            out.push("h_diagonal", Inputs::new().with("u", fmt_u(&u)).with("x", &a), lhs);
        }
        _ => out.skip(),
    }

    // C_q^(2) ≅ C_q^(1)
    let (a, b) = (d.degree(), d.degree());
    let res = (|| -> Result<LoopElement> {
        let lhs = la.bracket(&la.cq2_embed(&a, 0)?, &la.cq2_embed(&b, 0)?)?;
        let rhs = la.cq2_embed(&(&a + &b), 0)?.scale(&ctx.commutator_coeff(&a, &b));
        Ok(lhs.sub(&rhs))
    })();
    out.push("cq2_isomorphism", Inputs::new().with("r", &a).with("s", &b), res);

    let be = d.b_elem();
    let k = la.psi_kernel_element(&be);
    out.push("psi_kernel", Inputs::new().with("b", fmt_bel(&be)), d.m.b().psi(&k));
    out
}

const SPECIES: [&str; 3] = ["t", "ad", "D"];

fn rep_trial(d: &mut Draw<'_>) -> TrialResult {
    let mut out = TrialResult::default();
    let m = d.m;
    let names = [
        ["rep_t_t", "rep_t_ad", "rep_t_D"],
        ["rep_ad_t", "rep_ad_ad", "rep_ad_D"],
        ["rep_D_t", "rep_D_ad", "rep_D_D"],
    ];
    for i in 0..3u8 {
        for j in 0..3u8 {
            let (Some(x), Some(y)) = (d.g_monomial(i), d.g_monomial(j)) else {
                out.skip();
                continue;
            };
            let (bx, by) = (d.b_basis(), d.b_basis());
            let x = LoopElement::tensor(&x, &bx);
            let y = LoopElement::tensor(&y, &by);
            let xi = d.fvector();
            let inp = Inputs::new()
                .with("species", format!("{}/{}", SPECIES[i as usize], SPECIES[j as usize]))
                .with("x", &x)
                .with("y", &y)
                .with("xi", &xi);
            out.push(names[i as usize][j as usize], inp, m.rep_check(&x, &y, &xi));
        }
    }
    out
}

fn section3_trial(d: &mut Draw<'_>) -> TrialResult {
    let mut out = TrialResult::default();
    let m = d.m;
    let ctx = m.ctx().clone();
    let one = m.b().one();
    let n = ctx.n();

    // L(τ) relations
    let (r, s) = (d.degree(), d.degree());
    let (b1, b2) = (d.b_elem(), d.b_elem());
    let xi = d.fvector();
    let inp = || {
        Inputs::new()
            .with("r", &r)
            .with("s", &s)
            .with("b1", fmt_bel(&b1))
            .with("b2", fmt_bel(&b2))
            .with("xi", &xi)
    };
    out.push("assoc", inp(), m.assoc_check(&r, &s, &b1, &b2, &xi));
    out.push("antiassoc", inp(), m.antiassoc_check(&r, &s, &b1, &b2, &xi));
    out.push("ad_product_expansion", inp(), m.ad_product_expansion_check(&s, &r, &b1, &b2, &xi));

    // inner composites
    match (d.outer_degree(), d.outer_degree()) {
        (Some(s), Some(r)) => {
            let b = d.b4();
            let xi = d.fvector();
            let inp = Inputs::new().with("s", &s).with("r", &r).with("b", b4_str(&b)).with("xi", &xi);
            out.push("prop31", inp, m.prop31_check(&s, &r, [&b[0], &b[1], &b[2], &b[3]], &xi));
            let bb = d.b_elem();
            let xi = d.fvector();
            let inp = Inputs::new().with("s", &s).with("b", fmt_bel(&bb)).with("xi", &xi);
            out.push("adb_scalar", inp, m.adb_scalar_check(&s, &bb, &xi));
        }
        _ => {
            out.skip();
            out.skip();
        }
    }

    // outer derivation against inner composite
    match d.outer_degree() {
        Some(s) => {
            let r = d.radf_degree();
            let u = d.vector_u(Some(&s));
            let b = d.b4();
            let xi = d.fvector();
            let inp = Inputs::new()
                .with("u", fmt_u(&u))
                .with("r", &r)
                .with("s", &s)
                .with("b", b4_str(&b))
                .with("xi", &xi);
            out.push("lemma32", inp, m.lemma32_check(&u, &r, &s, [&b[0], &b[1], &b[2], &b[3]], &xi));
        }
        None => out.skip(),
    }

    // T and T' structure
    let (r, s) = (d.radf_degree(), d.radf_degree());
    let u = d.vector_u(Some(&s));
    let v = d.vector_u(Some(&r));
    let b = d.b4();
    let bref = [&b[0], &b[1], &b[2], &b[3]];
    let xi = d.fvector();
    let inp = || {
        Inputs::new()
            .with("u", fmt_u(&u))
            .with("v", fmt_u(&v))
            .with("r", &r)
            .with("s", &s)
            .with("b", b4_str(&b))
            .with("xi", &xi)
    };
    out.push("t_bracket_structure", inp(), m.t_bracket_structure_check(&u, &v, &r, &s, bref, &xi));
    out.push("tprime_bracket", inp(), m.tprime_bracket_check(&u, &v, &r, &s, bref, &xi));
    match m.eta_check(&u, &v, &r, &s, bref, &xi) {
        Ok((i_res, t_res)) => {
            out.push("eta_i_bracket", inp(), i_res);
            out.push("eta_tprime_bracket", inp(), t_res);
        }
        Err(e) => out.push_bool("eta_i_bracket", inp(), false, format!("error: {e}")),
    }

    let inp1 = || {
        Inputs::new()
            .with("u", fmt_u(&u))
            .with("r", &r)
            .with("b1", fmt_bel(&b[0]))
            .with("b2", fmt_bel(&b[1]))
            .with("xi", &xi)
    };
    out.push("dtilde", inp1(), m.dtilde_check(&u, &r, &b[0], &b[1], &xi));
    out.push("degree_op_bracket", inp1().with("v", fmt_u(&v)), m.degree_op_bracket_check(&v, &u, &r, &b[1], &xi));
    out.push("tprime_coeff_split", inp1(), m.tprime_coeff_split_check(&u, &r, &b[1], &xi));
    out.push("t_weight_zero", inp1().with("v", fmt_u(&v)), m.t_weight_zero_check(&v, &u, &r, &b[0], &b[1], &xi));
    let k = if d.chance(2) { d.radf_degree() } else { d.degree() };
    out.push("tprime_commutes_with_t", inp1().with("k", &k), m.tprime_commutes_with_t(&u, &r, &b[0], &b[1], &k, &xi));
    match (m.op_t(&u, &r, &b[0], &b[1]), m.op_tprime(&u, &r, &b[0], &b[1])) {
        (Ok(t), Ok(tp)) => {
            out.push_bool("degree_preserved_t", inp1(), m.preserves_degree(&t, &xi), "T moved a degree");
            out.push_bool("degree_preserved_tprime", inp1(), m.preserves_degree(&tp, &xi), "T' moved a degree");
        }
        _ => out.push_bool("degree_preserved_t", inp1(), false, "operator construction failed"),
    }
    out.push("proj0_intertwining", inp1(), m.proj0_intertwining_check(&u, &r, &b[0], &b[1], &xi));

    // weight-vector chain on t^k v0
    let k = d.degree();
    let v0 = d.v_vector();
    let bb = d.b_elem();
    let mm = d.degree();
    let inp2 = || {
        Inputs::new()
            .with("u", fmt_u(&u))
            .with("r", &r)
            .with("k", &k)
            .with("b", fmt_bel(&bb))
            .with("v0", fmt_u(&v0))
    };
    out.push("degree_op_on_orbit", inp2(), m.degree_op_on_orbit_check(&u, &bb, &k, &v0));
    out.push("t_coeff_on_orbit", inp2().with("m", &mm), m.t_coeff_on_orbit_check(&mm, &bb, &k, &v0));
    out.push("outer_d_coeff_on_orbit", inp2(), m.outer_d_coeff_on_orbit_check(&u, &r, &bb, &k, &v0));
    out.push("outer_d_on_orbit", inp2(), m.outer_d_on_orbit_check(&u, &r, &k, &v0));

    // degree-0 quotient
    let w = d.degree();
    out.push("w_generator", Inputs::new().with("m", &w).with("v", fmt_u(&v0)), m.w_generator_check(&w, &v0));
    let p = m.proj0(&m.at_zero(v0.clone())).map(|p| p.iter().zip(&v0).map(|(x, y)| x - y).collect::<Vec<_>>());
    out.push("proj0_surjective", Inputs::new().with("v", fmt_u(&v0)), p);
    let xi = d.fvector();
    out.push("weight_eigen", Inputs::new().with("xi", &xi), m.weight_eigen_check(&xi));

    let _ = (one, n);
    out
}

fn b4_str(b: &[BElement; 4]) -> String {
    let parts: Vec<String> = b.iter().map(fmt_bel).collect();
    format!("[{}]", parts.join("; "))
}

fn probe_suite(scenario: &Scenario) -> (TrialResult, Option<crate::fock::probe::ProbeReport>, Vec<String>) {
    let mut out = TrialResult::default();
    let mut candidates = Vec::new();
    let m = &scenario.module;
    let inp = || Inputs::new().with("window", scenario.probe_window).with("seed", scenario.seed);
    match m.cyclicity_probe(scenario.probe_window, scenario.seed) {
        Ok(rep) => {
            match rep.span_rank_check {
                Some(r) => out.push_bool(
                    "span_rank_cross_check",
                    inp(),
                    rep.span_dim == r,
                    format!("echelon {} vs fraction-free {r}", rep.span_dim),
                ),
                None => out.skip(),
            }
            if !rep.saturated {
                candidates.push(format!(
                    "span {} of {} inside window {} (inconclusive)",
                    rep.span_dim, rep.expected_dim, rep.window
                ));
            }
            let d = m.dim_v();
            let short: Vec<usize> = rep.t_orbit_ranks.iter().copied().filter(|&r| r != d).collect();
            if !short.is_empty() {
                candidates.push(format!("T-orbit ranks {short:?} below dim V = {d} (inconclusive)"));
            }
            (out, Some(rep), candidates)
        }
        Err(e) => {
            out.push_bool("cyclicity_probe", inp(), false, format!("error: {e}"));
            (out, None, candidates)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(extra: &str, trials: u64) -> Scenario {
        let text = format!(r#"{{"n": 3, "N": 3, "K": [[0, 1, 0], [-1, 0, 0], [0, 0, 0]], "trials": {trials}, "seed": 9{extra}}}"#);
        Scenario::from_json_str(&text, "test").unwrap()
    }

    #[test]
    fn sequential_matches_parallel() {
        let sc = scenario("", 6);
        for suite in [Suite::Cocycle, Suite::Rep, Suite::Section3] {
            let a = run_suite(&sc, suite, Execution::Sequential, false);
            let b = run_suite(&sc, suite, Execution::Parallel, false);
            assert_eq!(a, b);
            assert!(a.passed, "{a:?}");
        }
    }

    #[test]
    fn diagonal_branch_fails_and_replays() {
        let sc = scenario(r#", "sqrt_branch": "diagonal""#, 20);
        let rep = run_suite(&sc, Suite::Section3, Execution::Parallel, false);
        assert!(!rep.passed);
        let f = &rep.failures[0];
        let again = rerun_trial(&sc, Suite::Section3, f.trial.unwrap());
        let o = again.outcomes.iter().find(|o| !o.ok).unwrap();
        assert_eq!(o.check, f.check);
        assert_eq!(o.witness, f.witness);
        assert_eq!(o.inputs, f.inputs);
    }

    #[test]
    fn trial_seeds_differ_by_suite_and_trial() {
        assert_ne!(trial_seed(1, Suite::Cocycle, 0), trial_seed(1, Suite::Torus, 0));
        assert_ne!(trial_seed(1, Suite::Cocycle, 0), trial_seed(1, Suite::Cocycle, 1));
        assert_eq!(trial_seed(7, Suite::Lie, 3), trial_seed(7, Suite::Lie, 3));
    }

    #[test]
    fn gln_check_reports_witness() {
        let sc = scenario("", 1);
        let res = gln_checks(&sc.module.params().v);
        assert!(res.outcomes.iter().all(|o| o.ok));
    }
}
