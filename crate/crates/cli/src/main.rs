use std::path::{Path, PathBuf};
use std::process::ExitCode;

use burescone::acceptance::{all_criteria, CriterionReport};
use burescone::scenarios::{run, ScenarioName, ScenarioResult};
use burescone::Error;
use clap::{Parser, Subcommand};
use rayon::prelude::*;

mod config;
mod output;
mod probe;

use config::{build_config, Overrides};

const EXIT_FAILED_CHECKS: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "burescone",
    version,
    about = "Bures geometry near rank-changing density matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario (or `all`) and write CSV tables, checks.json and manifest.json
    Run {
        /// Scenario name, kebab or snake case, or `all`
        scenario: String,
        /// key = value file; command-line parameters override it
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, env = "BURESCONE_OUT", default_value = "out")]
        out: PathBuf,
        /// Worker threads when running all scenarios
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Scenario parameters as `--key value`, e.g. `--p 0.7 --gamma 2`
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Evaluate every acceptance criterion and print measured against target
    CheckAll {
        #[arg(long, env = "BURESCONE_OUT", default_value = "out")]
        out: PathBuf,
        /// Also write <out>/acceptance/checks.json
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print Bures metric components (and optionally curvature) of a built-in family
    #[command(allow_negative_numbers = true)]
    Metric(probe::MetricArgs),
    /// Integrate a geodesic on a metric cone and print it as CSV
    #[command(allow_negative_numbers = true)]
    Geodesic(probe::GeodesicArgs),
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter { .. }
        | Error::InvalidSpectrum(_)
        | Error::InvalidBloch(_)
        | Error::InvalidDensity(_)
        | Error::DimensionMismatch { .. }
        | Error::NotHermitian { .. }
        | Error::TwoDimensionalCone => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("burescone: {msg}");
    ExitCode::from(code)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| e.to_string())
}

struct RunOptions {
    config: Option<PathBuf>,
    out: PathBuf,
    jobs: usize,
}

impl RunOptions {
    /// Takes `--out`, `--config` and `--jobs` given after the scenario parameters.
    fn absorb(&mut self, flags: &mut Overrides) -> Result<(), String> {
        let mut rest = Vec::new();
        for (k, v) in flags.pairs.drain(..) {
            match k.as_str() {
                "out" => self.out = PathBuf::from(v),
                "config" => self.config = Some(PathBuf::from(v)),
                "jobs" => self.jobs = v.parse().map_err(|_| format!("`jobs` expects an integer, got `{v}`"))?,
                _ => rest.push((k, v)),
            }
        }
        flags.pairs = rest;
        Ok(())
    }
}

fn report_scenario(result: &ScenarioResult, dir: &Path) {
    println!("{} -> {}", result.name, dir.display());
    for c in &result.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "  [{tag}] {:<44} measured={} target={} tol={}",
            c.name,
            output::sci(c.measured),
            output::sci(c.target),
            output::sci(c.tolerance)
        );
    }
}

fn cmd_run(scenario: &str, mut opts: RunOptions, params: &[String]) -> ExitCode {
    let mut flags = match Overrides::from_args(params) {
        Ok(o) => o,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    if let Err(e) = opts.absorb(&mut flags) {
        return fail(EXIT_CONFIG, e);
    }
    let RunOptions { config, out, jobs } = opts;
    let names: Vec<ScenarioName> = if scenario == "all" {
        ScenarioName::ALL.to_vec()
    } else {
        match scenario.parse() {
            Ok(n) => vec![n],
            Err(e) => return fail(EXIT_CONFIG, e),
        }
    };
    let mut layers = Vec::new();
    if let Some(path) = &config {
        match Overrides::from_file(path) {
            Ok(o) => layers.push(o),
            Err(e) => return fail(EXIT_CONFIG, e),
        }
    }
    layers.push(flags);
    let mut configs = Vec::new();
    for name in names {
        match build_config(name, &layers) {
            Ok(c) => configs.push(c),
            Err(e) => return fail(EXIT_CONFIG, e),
        }
    }
    let pool = match pool(jobs) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let results: Vec<_> = pool.install(|| configs.par_iter().map(|c| (c, run(c))).collect());
    let mut code = 0;
    for (cfg, result) in results {
        let result = match result {
            Ok(r) => r,
            Err(e) => {
                eprintln!("burescone: {}: {e}", cfg.name);
                code = code.max(error_code(&e));
                continue;
            }
        };
        match output::write_scenario(&out, &result, &cfg.grid) {
            Ok(dir) => report_scenario(&result, &dir),
            Err(e) => return fail(EXIT_NUMERICAL, format!("writing output: {e}")),
        }
        if !result.passed() {
            code = code.max(EXIT_FAILED_CHECKS);
        }
    }
    ExitCode::from(code)
}

fn cmd_check_all(out: &Path, json: bool, jobs: usize) -> ExitCode {
    let pool = match pool(jobs) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let reports: Vec<CriterionReport> = pool.install(|| all_criteria().par_iter().map(|f| f()).collect());
    for r in &reports {
        for line in r.lines() {
            println!("{line}");
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    println!("{passed}/{} criteria passed", reports.len());
    if json {
        let dir = out.join("acceptance");
        let written = std::fs::create_dir_all(&dir)
            .and_then(|_| output::to_json(&reports))
            .and_then(|bytes| output::write_atomic(&dir.join("checks.json"), &bytes));
        if let Err(e) = written {
            return fail(EXIT_NUMERICAL, format!("writing checks.json: {e}"));
        }
    }
    if passed == reports.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED_CHECKS)
    }
}

fn print_or_fail(result: burescone::Result<String>) -> ExitCode {
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(error_code(&e), e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Run {
            scenario,
            config,
            out,
            jobs,
            params,
        } => cmd_run(&scenario, RunOptions { config, out, jobs }, &params),
        Command::CheckAll { out, json, jobs } => cmd_check_all(&out, json, jobs),
        Command::Metric(a) => print_or_fail(probe::metric_csv(&a)),
        Command::Geodesic(a) => print_or_fail(probe::geodesic_csv(&a)),
    }
}
