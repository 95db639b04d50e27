//! End-to-end acceptance: one line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use qtorus::exec::Execution;
use qtorus::gln::GlnModule;
use qtorus::lattice::ExpVec;
use qtorus::report::SuiteReport;
use qtorus::scenario::{Scenario, Suite};
use qtorus::suites::{gln_checks, radf_window_checks, run_suite};
use qtorus::Cyclotomic;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn shipped() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("scenarios"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

fn load(p: &Path) -> Scenario {
    Scenario::load(p).unwrap()
}

fn named(name: &str) -> Scenario {
    load(&root().join("scenarios").join(format!("{name}.json")))
}

fn run(sc: &Scenario, suite: Suite, trials: u64) -> (SuiteReport, Duration) {
    let mut sc = sc.clone();
    sc.trials = trials;
    let t = Instant::now();
    let rep = run_suite(&sc, suite, Execution::Parallel, false);
    (rep, t.elapsed())
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counts_at_least(rep: &SuiteReport, names: &[&str], min: u64, who: &str) -> Result<(), String> {
    for n in names {
        let c = rep.check_counts.get(*n).copied().unwrap_or(0);
        require(c >= min, || format!("{who}: {n} evaluated {c} < {min} times"))?;
    }
    Ok(())
}

fn passed(rep: &SuiteReport, who: &str) -> Result<(), String> {
    require(rep.passed, || {
        let f = &rep.failures[0];
        format!("{who}: {} failures, first {} residual {}", rep.failure_count, f.check, f.witness)
    })
}

fn c1_cocycle() -> Verdict {
    let mut ns = Vec::new();
    let mut big_n = Vec::new();
    let mut slowest = Duration::ZERO;
    for p in shipped() {
        let mut sc = load(&p);
        sc.window = 6;
        let (rep, dt) = run(&sc, Suite::Cocycle, 200);
        passed(&rep, &sc.name)?;
        counts_at_least(&rep, &rep.check_counts.keys().map(String::as_str).collect::<Vec<_>>(), 200, &sc.name)?;
        require(dt < Duration::from_secs(10), || format!("{}: {dt:?}", sc.name))?;
        slowest = slowest.max(dt);
        ns.push(sc.ctx().n());
        big_n.push(sc.ctx().order());
    }
    for n in [2, 3, 4] {
        require(ns.contains(&n), || format!("no shipped context with n = {n}"))?;
    }
    for n in [2, 3, 4, 6] {
        require(big_n.contains(&n), || format!("no shipped context with N = {n}"))?;
    }
    Ok(format!("{} contexts x 200 trials, slowest {slowest:.2?}", ns.len()))
}

fn c2_radf() -> Verdict {
    let mut points = 0;
    for p in shipped() {
        let sc = load(&p);
        let res = radf_window_checks(sc.ctx(), 4);
        if let Some(o) = res.outcomes.iter().find(|o| !o.ok) {
            return Err(format!("{}: {} {:?} {}", sc.name, o.check, o.inputs, o.witness));
        }
        points += res.outcomes.len();
    }
    let id = named("identity");
    let all = ExpVec::window(2, 4).iter().all(|a| id.ctx().in_radf(a));
    require(all, || "identity: rad f is not all of Z^2".into())?;
    let m1 = named("minus_one");
    for a in ExpVec::window(2, 4) {
        let even = a.0.iter().all(|x| x % 2 == 0);
        require(m1.ctx().in_radf(&a) == even, || format!("minus_one: {a} membership wrong"))?;
    }
    Ok(format!("{points} window checks agree; identity gives Z^2, minus_one gives 2Z x 2Z"))
}

fn c3_lie() -> Verdict {
    let names = ["g_antisymmetry", "g_jacobi", "tau_antisymmetry", "tau_jacobi"];
    let mut total = 0;
    for p in shipped() {
        let sc = load(&p);
        let (rep, _) = run(&sc, Suite::Lie, 200);
        passed(&rep, &sc.name)?;
        if sc.name != "identity" {
            counts_at_least(&rep, &names, 200, &sc.name)?;
        }
        total += rep.checks;
    }
    Ok(format!("{total} checks over all contexts"))
}

fn c4_rep() -> Verdict {
    let pairs = ["t", "ad", "D"];
    let names: Vec<String> = pairs
        .iter()
        .flat_map(|a| pairs.iter().map(move |b| format!("rep_{a}_{b}")))
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let combos = ["minus_one", "minus_one_trivial", "minus_one_truncated", "sixth_root"];
    let (mut trivial_v, mut natural_v, mut truncated, mut laurent, mut alpha0, mut alpha1) = (false, false, false, false, false, false);
    for name in combos {
        let sc = named(name);
        let (rep, _) = run(&sc, Suite::Rep, 500);
        passed(&rep, name)?;
        counts_at_least(&rep, &names, 500, name)?;
        let m = &sc.module;
        trivial_v |= m.dim_v() == 1;
        natural_v |= sc.v_spec.to_string() == "natural";
        truncated |= m.b().sample_range().0 == 0;
        laurent |= m.b().sample_range().0 < 0;
        let zero = m.params().alpha.iter().all(Cyclotomic::is_zero);
        alpha0 |= zero;
        alpha1 |= !zero;
    }
    require(trivial_v && natural_v && truncated && laurent && alpha0 && alpha1, || "combination coverage incomplete".into())?;
    Ok(format!("{} combinations x 9 species pairs x 500 trials", combos.len()))
}

const SECTION3_N2: [&str; 5] = ["minus_one", "minus_one_trivial", "minus_one_truncated", "sixth_root", "identity"];

fn section3_runs() -> &'static [(String, SuiteReport, Duration)] {
    static RUNS: std::sync::OnceLock<Vec<(String, SuiteReport, Duration)>> = std::sync::OnceLock::new();
    RUNS.get_or_init(|| {
        SECTION3_N2
            .iter()
            .map(|&name| {
                let trials = if name == "minus_one" { 200 } else { 100 };
                let (rep, dt) = run(&named(name), Suite::Section3, trials);
                (name.to_string(), rep, dt)
            })
            .collect()
    })
}

fn c5_relations() -> Verdict {
    let (name, rep, _) = &section3_runs()[0];
    passed(rep, name)?;
    counts_at_least(rep, &["assoc", "antiassoc", "ad_product_expansion"], 200, name)?;
    Ok(format!("{name}: assoc, antiassoc, ad_product_expansion each on 200 draws"))
}

fn c6_section3() -> Verdict {
    let names = [
        "prop31",
        "lemma32",
        "t_bracket_structure",
        "tprime_bracket",
        "eta_i_bracket",
        "eta_tprime_bracket",
        "dtilde",
        "degree_op_on_orbit",
        "t_coeff_on_orbit",
        "outer_d_coeff_on_orbit",
        "outer_d_on_orbit",
        "degree_op_bracket",
        "tprime_coeff_split",
        "adb_scalar",
        "tprime_commutes_with_t",
        "w_generator",
        "proj0_intertwining",
    ];
    let mut total = Duration::ZERO;
    for (name, rep, dt) in section3_runs() {
        passed(rep, name)?;
        if name != "identity" {
            counts_at_least(rep, &names, 100, name)?;
        }
        total += *dt;
    }
    require(total < Duration::from_secs(60), || format!("took {total:?}"))?;
    Ok(format!("{} contexts, {} identities, {total:.2?}", section3_runs().len(), names.len()))
}

fn c7_degrees() -> Verdict {
    let mut n = 0;
    for (name, rep, _) in section3_runs() {
        passed(rep, name)?;
        counts_at_least(rep, &["degree_preserved_t", "degree_preserved_tprime"], 100, name)?;
        n += rep.check_counts["degree_preserved_t"] + rep.check_counts["degree_preserved_tprime"];
    }
    Ok(format!("{n} draws preserve degree"))
}

fn c8_probe() -> Verdict {
    let sc = named("minus_one");
    require(sc.v_spec.to_string() == "natural", || "minus_one must use natural V".into())?;
    let a = sc.module.cyclicity_probe(2, sc.seed).map_err(|e| e.to_string())?;
    let b = sc.module.cyclicity_probe(2, sc.seed).map_err(|e| e.to_string())?;
    require(a == b, || "probe is not deterministic".into())?;
    require(a.span_dim == 50 && a.expected_dim == 50 && a.saturated, || format!("span {} of {}", a.span_dim, a.expected_dim))?;
    require(a.span_rank_check == Some(50), || format!("fraction-free rank {:?}", a.span_rank_check))?;
    require(a.t_orbit_ranks.len() == 20 && a.t_orbit_ranks.iter().all(|&r| r == 2), || format!("T-orbit ranks {:?}", a.t_orbit_ranks))?;
    Ok("span 50 of 2x25, 20 T-orbits of rank 2, repeatable".into())
}

fn c9_gln() -> Verdict {
    let field = named("fourth_root").ctx().field().clone();
    let mut count = 0;
    for n in 2..=4 {
        let nat = GlnModule::natural(&field, n);
        for m in [
            GlnModule::trivial(&field, n),
            nat.clone(),
            nat.dual(),
            nat.sym2().unwrap(),
            nat.wedge2().unwrap(),
            nat.tensor(&nat.dual()).unwrap(),
        ] {
            require(m.is_valid(), || format!("constructor of dim {} fails at n = {n}", m.dim()))?;
            count += 1;
        }
    }
    for p in shipped() {
        let sc = load(&p);
        require(gln_checks(&sc.module.params().v).outcomes.iter().all(|o| o.ok), || format!("{}: V invalid", sc.name))?;
    }
    let nat = GlnModule::natural(&field, 3);
    let e: Vec<Vec<_>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let mut m = nat.e(i, j).clone();
                    if (i, j) == (1, 2) {
                        let x = m.get(0, 0) + &Cyclotomic::one(&field);
                        m.set(0, 0, x);
                    }
                    m
                })
                .collect()
        })
        .collect();
    let bad = GlnModule::from_matrices(3, e).map_err(|e| e.to_string())?;
    let res = gln_checks(&bad);
    let o = &res.outcomes[0];
    require(!o.ok && !o.witness.is_empty(), || "mutated module passed".into())?;
    Ok(format!("{count} constructors valid; mutated E_23 rejected: {}", o.witness))
}

fn qtorus(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qtorus")).args(args).output().unwrap()
}

fn c10_cli() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut n = 0;
    for p in shipped() {
        let stem = p.file_name().unwrap().to_str().unwrap();
        let out = dir.path().join(stem);
        let mut args = vec!["verify", p.to_str().unwrap(), "--trials", "20", "--report", out.to_str().unwrap()];
        if stem == "minus_one.json" {
            args.push("--sequential");
        }
        let o = qtorus(&args);
        require(o.status.code() == Some(0), || format!("{stem}: exit {:?}", o.status.code()))?;
        let got = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
        let want = std::fs::read_to_string(root().join("scenarios/golden").join(stem)).map_err(|e| format!("{stem}: {e}"))?;
        require(got == want, || format!("{stem}: report differs from golden"))?;
        n += 1;
    }
    let fx = root().join("scenarios/fixtures");
    let code = |name: &str| qtorus(&["verify", fx.join(name).to_str().unwrap()]);
    let pass = code("pass.json");
    require(pass.status.code() == Some(0), || format!("pass fixture exit {:?}", pass.status.code()))?;
    let fail = code("fail_diagonal_branch.json");
    require(fail.status.code() == Some(1), || format!("fail fixture exit {:?}", fail.status.code()))?;
    let bad = code("invalid_nonskew.json");
    let stderr = String::from_utf8_lossy(&bad.stderr);
    require(bad.status.code() == Some(2) && stderr.contains("/K/1/0"), || format!("invalid fixture exit {:?}: {stderr}", bad.status.code()))?;
    Ok(format!("{n} golden reports match; fixture exits 0/1/2"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("cocycle identities", c1_cocycle),
        ("rad f basis vs enumeration", c2_radf),
        ("Lie antisymmetry and Jacobi", c3_lie),
        ("representation property", c4_rep),
        ("loop algebra relations on the module", c5_relations),
        ("operator identity suite", c6_section3),
        ("degree preservation", c7_degrees),
        ("cyclicity probe", c8_probe),
        ("gl_n validator", c9_gln),
        ("CLI goldens and exit codes", c10_cli),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match verdict {
            Ok(detail) => println!("criterion {:>2} {name}: pass ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
