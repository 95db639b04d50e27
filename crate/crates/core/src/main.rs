use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qtorus::exec::Execution;
use qtorus::report::Report;
use qtorus::scenario::{ConfigError, Scenario, Suite};
use qtorus::suites::run_suite;

#[derive(Parser)]
#[command(name = "qtorus", version, about = "Exact checks for quantum torus loop algebras and their modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites on a scenario.
    Verify {
        scenario: PathBuf,
        /// Restrict to these suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Degree sampling window `[-b, b]^n`.
        #[arg(long)]
        window: Option<i64>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Include wall time per suite (makes reports non-reproducible).
        #[arg(long)]
        timings: bool,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Print a basis of rad f and cross-check it against window enumeration.
    Radf { scenario: PathBuf },
    /// Evaluate an expression such as `[D[(1,0);0,0], ad[0,1]]`.
    Eval {
        expr: String,
        #[arg(long)]
        scenario: PathBuf,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn config_error(e: &ConfigError) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(EXIT_CONFIG)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            scenario,
            suites,
            seed,
            trials,
            window,
            report,
            timings,
            sequential,
        } => {
            let mut sc = match Scenario::load(&scenario) {
                Ok(s) => s,
                Err(e) => return config_error(&e),
            };
            if !suites.is_empty() {
                let mut chosen = Vec::new();
                for name in &suites {
                    match name.parse::<Suite>() {
                        Ok(s) if !chosen.contains(&s) => chosen.push(s),
                        Ok(_) => {}
                        Err(e) => return config_error(&ConfigError::new("/suites", format!("--suite: {e}"))),
                    }
                }
                sc.suites = chosen;
            }
            if let Some(s) = seed {
                sc.seed = s;
            }
            if let Some(t) = trials {
                if t == 0 {
                    return config_error(&ConfigError::new("/trials", "--trials must be positive"));
                }
                sc.trials = t;
            }
            if let Some(w) = window {
                if !(1..=64).contains(&w) {
                    return config_error(&ConfigError::new("/window", "--window must be in 1..=64"));
                }
                sc.window = w;
            }
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let reports = sc.suites.iter().map(|&s| run_suite(&sc, s, exec, timings)).collect();
            let rep = Report::new(sc.name.clone(), sc.seed, sc.trials, sc.window, reports);
            print!("{}", rep.summary());
            if let Some(path) = report {
                if let Err(e) = std::fs::write(&path, rep.to_json()) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            }
            if rep.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Command::Radf { scenario } => {
            let sc = match Scenario::load(&scenario) {
                Ok(s) => s,
                Err(e) => return config_error(&e),
            };
            let ctx = sc.ctx();
            println!("rad f basis (columns):");
            for g in ctx.radf_columns() {
                println!("  {g}");
            }
            let check = qtorus::suites::radf_window_checks(ctx, sc.radf_window);
            let bad: Vec<_> = check.outcomes.iter().filter(|o| !o.ok).collect();
            println!(
                "window [-{w},{w}]^{n}: {} checks, {} mismatches",
                check.outcomes.len(),
                bad.len(),
                w = sc.radf_window,
                n = ctx.n()
            );
            for o in bad.iter().take(10) {
                println!("  {} {:?}: {}", o.check, o.inputs, o.witness);
            }
            if bad.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Command::Eval { expr, scenario } => {
            let sc = match Scenario::load(&scenario) {
                Ok(s) => s,
                Err(e) => return config_error(&e),
            };
            match qtorus::parse::evaluate(&expr, &sc.module) {
                Ok(v) => {
                    println!("{v}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(EXIT_CONFIG)
                }
            }
        }
    }
}
