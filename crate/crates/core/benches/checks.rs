use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qtorus::exec::Execution;
use qtorus::scenario::{Scenario, Suite};
use qtorus::suites::run_suite;

fn scenario(name: &str, trials: u64) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"));
    let mut sc = Scenario::load(&path).expect("shipped scenario");
    sc.trials = trials;
    sc
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_suite");
    group.sample_size(10);
    for (name, suite, trials) in [
        ("minus_one", Suite::Cocycle, 200),
        ("minus_one", Suite::Rep, 100),
        ("minus_one", Suite::Section3, 50),
        ("cube_root", Suite::Lie, 100),
    ] {
        let sc = scenario(name, trials);
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            let id = BenchmarkId::new(format!("{name}/{}", suite.name()), label);
            group.bench_with_input(id, &exec, |b, &exec| b.iter(|| run_suite(&sc, suite, exec, false)));
        }
    }
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
