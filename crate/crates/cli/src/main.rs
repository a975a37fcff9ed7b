use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use loopforge_core::io::{export_outputs, load_config, report_json, run_pipeline, IoError};
use loopforge_core::selfcheck::{selftest, verify_oracle};

/// Loop-group construction and certification of harmonic maps with a constant lightlike vector.
#[derive(Parser)]
#[command(name = "loopforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline described by a JSON config.
    Run {
        config: PathBuf,
        /// Worker threads; overrides `parallelism` in the config.
        #[arg(long, env = "LOOPFORGE_THREADS")]
        threads: Option<usize>,
        /// Suppress the summary on stderr.
        #[arg(long)]
        quiet: bool,
    },
    /// Cross-check the generic Iwasawa solver against the m = 3 closed forms.
    VerifyOracle {
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn config_error(e: &IoError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn run(config: PathBuf, threads: Option<usize>, quiet: bool) -> ExitCode {
    let mut spec = match load_config(&config) {
        Ok(s) => s,
        Err(e) => return config_error(&e),
    };
    if let Some(t) = threads {
        spec.parallelism = t;
    }
    let out = match run_pipeline(&spec) {
        Ok(o) => o,
        Err(e) => return config_error(&e),
    };
    if let Err(e) = export_outputs(&out, &spec) {
        return config_error(&e);
    }
    let r = &out.report;
    if spec.outputs.report_path.is_none() {
        print!("{}", report_json(r));
    }
    if !quiet {
        eprintln!("verdict: {:?} ({})", r.verdict, r.verdict_basis);
        eprintln!("points solved: {}/{}", r.points_solved, r.points_total);
        eprintln!("max rank: {}", r.rank.max_rank);
        let res = &r.residuals;
        eprintln!(
            "iwasawa {:.3e}  reality {:.3e}  membership {:.3e}  twist {:.3e}",
            res.iwasawa, res.reality, res.membership, res.twist
        );
        eprintln!(
            "mc_pattern {:.3e}  lightlike_const {:.3e}  lightlike_isotropy {:.3e}",
            res.mc_pattern, res.lightlike_const, res.lightlike_isotropy
        );
        if !r.exceeded.is_empty() {
            eprintln!("above tolerance: {}", r.exceeded.join(", "));
        }
        if !r.failures.is_empty() {
            eprintln!("{} point failures", r.failures.len());
        }
    }
    ExitCode::from(r.exit_code() as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, threads, quiet } => {
            if threads == Some(0) {
                eprintln!("error: --threads must be at least 1");
                return ExitCode::from(1);
            }
            run(config, threads, quiet)
        }
        Command::VerifyOracle { cases, seed, tol } => {
            let r = verify_oracle(cases, seed, tol);
            println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            ExitCode::from(if r.passed { 0 } else { 3 })
        }
        Command::Selftest { seed } => {
            let cases = selftest(seed);
            for c in &cases {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag} {} (value {:.3e}, tol {:.1e})", c.name, c.value, c.tol);
            }
            ExitCode::from(if cases.iter().all(|c| c.passed) { 0 } else { 3 })
        }
    }
}
