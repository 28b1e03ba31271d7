//! Command-line driver: classification, completion construction,
//! certificate verification, grid scanning, and the finite-dimensional
//! oracle suites.
//!
//! Exit codes: 0 success/decided, 1 counterexample or failed
//! verification, 2 parse/input error, 3 undecided, 4 precondition
//! failure, 5 precision exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use browder_core::browder::classify;
use browder_core::completion::{construct_browder_c, construct_invertible_c, verify_certificate};
use browder_core::config::RunConfig;
use browder_core::jsonio::{
    certificate_to_json, class_is_decided, classification_report, operator_spec_to_json,
    parse_certificate, parse_operator_spec, parse_rational,
};
use browder_core::linalg::oracle::{
    corner_suite, product_dimension_suite, two_of_three_suite, OracleReport,
};
use browder_core::num::gaussian::GaussianRational;
use browder_core::op::bet::BetOperator;
use browder_core::spectra::{grid_to_csv, grid_to_svg, scan, Region, ScanMode};
use browder_core::{CoreError, Result};

const EXIT_OK: u8 = 0;
const EXIT_COUNTEREXAMPLE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;
const EXIT_PRECISION: u8 = 5;

#[derive(Parser)]
#[command(
    name = "browder",
    version,
    about = "Browder-type completions of upper-triangular operator matrices"
)]
struct Cli {
    /// Working precision ceiling in bits (>= 64). Overrides the
    /// BROWDER_PRECISION_BITS environment variable; defaults to 128.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Stabilization search bound for operator-power chains.
    #[arg(long, global = true)]
    power_cap: Option<u64>,
    /// Worker threads for grid scans (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for output artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an operator at a point lambda (default 0)
    Classify {
        /// Operator-spec JSON file
        spec: PathBuf,
        /// Point as "re" or "re,im" with rational components
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Construct a completion C for a pair (A, B) and certify it
    Complete {
        spec_a: PathBuf,
        spec_b: PathBuf,
        /// Completion kind: "browder" (finite-rank C) or "invertible"
        #[arg(long, default_value = "browder")]
        kind: String,
    },
    /// Re-validate a completion certificate file
    Verify { certificate: PathBuf },
    /// Classify every point of a rational grid against the common
    /// Browder spectrum of all completions
    Scan {
        spec_a: PathBuf,
        spec_b: PathBuf,
        /// Rectangle "re_min,re_max,im_min,im_max" with rational entries
        #[arg(long, allow_hyphen_values = true)]
        region: String,
        /// Grid step, e.g. "1/20"
        #[arg(long)]
        step: String,
        /// Completion class: all_C, fredholm_C, or invertible_C
        #[arg(long, default_value = "all_C")]
        mode: String,
        /// Attach verified completion certificates to decided-out points
        #[arg(long)]
        witness: bool,
    },
    /// Run a seeded finite-dimensional oracle suite
    Oracle {
        /// Suite: product-dimension, two-of-three, or corner
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 1729)]
        seed: u64,
    },
}

fn error_exit(e: &CoreError) -> u8 {
    match e {
        CoreError::Parse(_) => EXIT_PARSE,
        CoreError::PrecisionExhausted { .. } => EXIT_PRECISION,
        _ => EXIT_PRECONDITION,
    }
}

fn fail(e: &CoreError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(error_exit(e))
}

fn load_operator(path: &Path) -> Result<BetOperator> {
    let text = fs::read_to_string(path)
        .map_err(|e| CoreError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_operator_spec(&text)
}

fn parse_lambda(s: &str) -> Result<GaussianRational> {
    match s.split_once(',') {
        Some((re, im)) => Ok(GaussianRational::new(
            parse_rational(re)?,
            parse_rational(im)?,
        )),
        None => Ok(GaussianRational::from_real(parse_rational(s)?)),
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Ok(env_bits) = std::env::var("BROWDER_PRECISION_BITS") {
        cfg.precision_bits = env_bits
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad BROWDER_PRECISION_BITS '{env_bits}'")))?;
    }
    if let Some(bits) = cli.precision_bits {
        cfg.precision_bits = bits;
    }
    if let Some(cap) = cli.power_cap {
        cfg.power_cap = cap;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_artifact(dir: &Path, name: &str, content: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| {
        CoreError::PreconditionFailed(format!("cannot create {}: {e}", dir.display()))
    })?;
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| {
        CoreError::PreconditionFailed(format!("cannot write {}: {e}", path.display()))
    })?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_classify(
    spec: &Path,
    lambda: Option<&str>,
    out: Option<&Path>,
    cfg: &RunConfig,
) -> Result<u8> {
    let op = load_operator(spec)?;
    let lambda = match lambda {
        Some(s) => parse_lambda(s)?,
        None => GaussianRational::zero(),
    };
    let class = classify(&op.translate(&lambda), cfg)?;
    let report = classification_report(&lambda, &class);
    print!("{report}");
    if let Some(dir) = out {
        write_artifact(dir, "classify.json", &report)?;
    }
    Ok(if class_is_decided(&class) {
        EXIT_OK
    } else {
        EXIT_UNDECIDED
    })
}

fn cmd_complete(
    spec_a: &Path,
    spec_b: &Path,
    kind: &str,
    out: Option<&Path>,
    cfg: &RunConfig,
) -> Result<u8> {
    let a = load_operator(spec_a)?;
    let b = load_operator(spec_b)?;
    let (c, cert) = match kind {
        "browder" => construct_browder_c(&a, &b, cfg)?,
        "invertible" | "invertible_C" => construct_invertible_c(&a, &b, cfg)?,
        other => {
            return Err(CoreError::Parse(format!(
                "unknown completion kind '{other}' (expected browder or invertible)"
            )))
        }
    };
    let (ok, reasons) = verify_certificate(&cert, cfg);
    if let Some(dir) = out {
        write_artifact(dir, "completion.json", &operator_spec_to_json(&c)?)?;
        write_artifact(dir, "certificate.json", &certificate_to_json(&cert)?)?;
    }
    println!("verified: {ok}");
    for r in &reasons {
        println!("reason: {r}");
    }
    Ok(if ok { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
}

fn cmd_verify(path: &Path, cfg: &RunConfig) -> Result<u8> {
    let text = fs::read_to_string(path)
        .map_err(|e| CoreError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let cert = parse_certificate(&text)?;
    let (ok, reasons) = verify_certificate(&cert, cfg);
    println!("verified: {ok}");
    for r in &reasons {
        println!("reason: {r}");
    }
    Ok(if ok { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    spec_a: &Path,
    spec_b: &Path,
    region: &str,
    step: &str,
    mode: &str,
    witness: bool,
    out: Option<&Path>,
    cfg: &RunConfig,
) -> Result<u8> {
    let a = load_operator(spec_a)?;
    let b = load_operator(spec_b)?;
    let parts: Vec<&str> = region.split(',').collect();
    if parts.len() != 4 {
        return Err(CoreError::Parse(format!(
            "region must be 're_min,re_max,im_min,im_max', got '{region}'"
        )));
    }
    let region = Region::new(
        parse_rational(parts[0])?,
        parse_rational(parts[1])?,
        parse_rational(parts[2])?,
        parse_rational(parts[3])?,
    )
    .map_err(|e| CoreError::Parse(e.to_string()))?;
    let step = parse_rational(step)?;
    let mode: ScanMode = mode.parse()?;
    let grid = scan(&a, &b, &region, &step, mode, witness, cfg)
        .map_err(|e| CoreError::Parse(e.to_string()))?;
    let csv = grid_to_csv(&grid);
    match out {
        Some(dir) => {
            write_artifact(dir, "scan.csv", &csv)?;
            write_artifact(dir, "scan.svg", &grid_to_svg(&grid))?;
        }
        None => print!("{csv}"),
    }
    let (yes, no, undecided) = grid.counts();
    println!("in_SPR yes: {yes} no: {no} undecided: {undecided}");
    Ok(EXIT_OK)
}

fn cmd_oracle(suite: &str, trials: usize, seed: u64) -> Result<u8> {
    let report: OracleReport = match suite {
        "product-dimension" => product_dimension_suite(trials, seed, 8),
        "two-of-three" => two_of_three_suite(trials, seed, 8),
        "corner" => corner_suite(trials, seed, 8),
        other => {
            return Err(CoreError::Parse(format!(
                "unknown suite '{other}' (expected product-dimension, two-of-three, or corner)"
            )))
        }
    };
    println!(
        "suite: {} trials: {} seed: {} failures: {}",
        report.suite,
        report.trials,
        report.seed,
        report.failures.len()
    );
    for f in &report.failures {
        println!("counterexample:\n{f}");
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    })
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<u8> {
    match &cli.command {
        Command::Classify { spec, lambda } => {
            cmd_classify(spec, lambda.as_deref(), cli.out.as_deref(), cfg)
        }
        Command::Complete {
            spec_a,
            spec_b,
            kind,
        } => cmd_complete(spec_a, spec_b, kind, cli.out.as_deref(), cfg),
        Command::Verify { certificate } => cmd_verify(certificate, cfg),
        Command::Scan {
            spec_a,
            spec_b,
            region,
            step,
            mode,
            witness,
        } => cmd_scan(
            spec_a,
            spec_b,
            region,
            step,
            mode,
            *witness,
            cli.out.as_deref(),
            cfg,
        ),
        Command::Oracle {
            suite,
            trials,
            seed,
        } => cmd_oracle(suite, *trials, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => return fail(&e),
    };
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(&cli, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(&e),
    }
}
