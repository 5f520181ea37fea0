//! Batch experiment runner.
//!
//! `dnls-lab <scenario> --config <path> [--seed N] [--out DIR]` parses a JSON
//! config, runs one scenario and writes its artifacts into a fresh run
//! directory. Exit codes: 0 when every in-scenario check passes, 1 when a
//! check fails or the computation errors out, 2 when the config is invalid.
//! `DNLS_LAB_THREADS` caps the worker pool.

use std::fs;
use std::path::PathBuf;

use clap::Parser;

pub mod dump;
pub mod flowmap;
pub mod output;
pub mod scenarios;
pub mod spec;

pub use dump::{DumpHeader, FieldDump};
pub use flowmap::{flowmap_experiment, FlowmapReport};
pub use output::{Check, Cmp, Outcome};
pub use spec::{ExperimentSpec, ScenarioParams, SchemaError, Scenario};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "DNLS_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dnls-lab", version, about = "Pseudospectral lab for the derivative NLS")]
pub struct Cli {
    /// Scenario to run.
    #[arg(value_parser = parse_scenario)]
    pub scenario: Scenario,
    /// JSON experiment config.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the output root in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_scenario(s: &str) -> std::result::Result<Scenario, String> {
    s.parse()
}

/// Result of a completed run.
#[derive(Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub outcome: Outcome,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.outcome.passed() {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

/// Run the scenario without touching the disk.
pub fn execute(spec: &ExperimentSpec) -> Result<Outcome> {
    let seed = spec.seed;
    match &spec.params {
        ScenarioParams::Solve(p) => scenarios::solve_scenario(p, seed),
        ScenarioParams::GaugeRoundtrip(p) => scenarios::gauge_roundtrip(p, seed),
        ScenarioParams::GaugeEquivalence(p) => scenarios::gauge_equivalence(p, seed),
        ScenarioParams::PlaneWave(p) => scenarios::plane_wave(p),
        ScenarioParams::Scaling(p) => scenarios::scaling(p, seed),
        ScenarioParams::Flowmap(p) => scenarios::flowmap(p, seed),
        ScenarioParams::VerifyResonance(p) => scenarios::verify_resonance(p, seed),
        ScenarioParams::VerifyDomination(p) => scenarios::verify_domination(p, seed),
        ScenarioParams::ProbeStrichartz(p) => scenarios::probe_strichartz(p, seed),
        ScenarioParams::ProbeTrilinear(p) => scenarios::probe_trilinear(p, seed),
        ScenarioParams::ProbeMultilinear(p) => scenarios::probe_multilinear(p, seed),
        ScenarioParams::ProbeSmult(p) => scenarios::probe_smult(p, seed),
        ScenarioParams::DyadicChecks(p) => scenarios::dyadic_checks(p, seed),
    }
}

/// Run the scenario and write its artifacts into a new run directory.
pub fn run(spec: &ExperimentSpec) -> Result<RunOutcome> {
    let outcome = execute(spec)?;
    let dir = output::fresh_run_dir(&output::experiment_dir(spec))?;
    output::write_artifacts(&dir, spec, &outcome)?;
    Ok(RunOutcome { dir, outcome })
}

/// Load a config file and apply command-line overrides.
pub fn load_spec(cli: &Cli) -> std::result::Result<ExperimentSpec, SchemaError> {
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| SchemaError(format!("{}: cannot read config: {e}", cli.config.display())))?;
    let mut spec = ExperimentSpec::parse(cli.scenario, &text)
        .map_err(|e| SchemaError(format!("{}: {}", cli.config.display(), e.0)))?;
    if let Some(seed) = cli.seed {
        spec.seed = seed;
    }
    if let Some(out) = &cli.out {
        spec.out = out.clone();
    }
    Ok(spec)
}

/// Size the global worker pool from `DNLS_LAB_THREADS`, if set. Only the
/// first call in a process has an effect.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Full command: parse, run, report. Returns the process exit code.
pub fn run_cli(cli: &Cli) -> i32 {
    init_threads();
    let spec = match load_spec(cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_SCHEMA;
        }
    };
    match run(&spec) {
        Ok(done) => {
            for c in &done.outcome.checks {
                if c.passed {
                    println!("ok    {}", c.describe());
                } else {
                    eprintln!("FAIL  {}", c.describe());
                }
            }
            println!("artifacts: {}", done.dir.display());
            done.exit_code()
        }
        Err(Error::Parameter(msg)) => {
            eprintln!("error: invalid parameters: {msg}");
            EXIT_SCHEMA
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}

/// Entry point for the binary.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_cli(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
