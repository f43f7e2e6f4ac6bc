//! `locyc`: construct, verify and inspect certificates.
//!
//! Exit codes: 0 success, 1 verification failure, 2 search budget or range
//! exhausted, 3 internal invariant failure, 64 usage error, 65 malformed
//! certificate, 66 unreadable input, 73 unwritable output.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use locyc_core::certificate::{Certificate, MAX_SUPPORTED_PRIME};
use locyc_core::pipeline::{construct, PipelineError};
use locyc_core::search::{SearchConfig, SearchError};
use locyc_core::tate::{build_bundle_at, construction_precision, is_small_prime};
use locyc_core::verify;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;
const EXIT_CANT_CREATE: u8 = 73;

#[derive(Parser)]
#[command(name = "locyc", version, about = "Elliptic curves with locally cyclic GL2(F_p) p-division fields")]
struct Cli {
    /// Suppress structured log lines on stderr.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    quiet: bool,
    /// Also log search progress after every batch.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the construction for a prime p >= 5 and write a certificate.
    Construct(ConstructArgs),
    /// Check every claim of a certificate.
    Verify {
        /// Certificate file.
        file: PathBuf,
        /// Print the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the Tate-curve series data for p.
    Series {
        #[arg(long, short)]
        prime: u64,
        /// Number of p-adic digits to print.
        #[arg(long, short, default_value_t = 12)]
        digits: u32,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, short)]
    prime: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Maximum number of primality tests.
    #[arg(long, default_value_t = SearchConfig::default().budget)]
    budget: u64,
    /// Output file; stdout if omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Worker threads for the search (does not change the result).
    #[arg(long, env = "LOCYC_WORKERS")]
    workers: Option<usize>,
    /// Number of candidate differences X - Y.
    #[arg(long, default_value_t = SearchConfig::default().d_range)]
    d_range: u64,
    /// X values sieved per difference.
    #[arg(long, default_value_t = SearchConfig::default().x_window)]
    x_window: u64,
    /// Largest sieving prime.
    #[arg(long, default_value_t = SearchConfig::default().sieve_bound)]
    sieve_bound: u64,
}

struct Log {
    quiet: bool,
    verbose: bool,
}

impl Log {
    fn record(&self, value: serde_json::Value) {
        if !self.quiet {
            eprintln!("{value}");
        }
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn check_prime(p: u64) -> Result<(), String> {
    if p == 2 || p == 3 {
        return Err(format!("p = {p} is excluded: the construction requires a prime p >= 5"));
    }
    if !is_small_prime(p) {
        return Err(format!("p = {p} is not prime; the construction requires a prime p >= 5"));
    }
    if p > MAX_SUPPORTED_PRIME {
        return Err(format!("p = {p} is above the supported maximum {MAX_SUPPORTED_PRIME}"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let log = Log { quiet: cli.quiet, verbose: cli.verbose };
    match cli.command {
        Command::Construct(args) => run_construct(args, &log),
        Command::Verify { file, json } => run_verify(&file, json),
        Command::Series { prime, digits } => run_series(prime, digits),
    }
}

fn run_construct(args: ConstructArgs, log: &Log) -> ExitCode {
    if let Err(e) = check_prime(args.prime) {
        return fail(EXIT_USAGE, e);
    }
    let workers =
        args.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)).max(1);
    let cfg = SearchConfig {
        seed: args.seed,
        d_range: args.d_range,
        x_window: args.x_window,
        sieve_bound: args.sieve_bound,
        budget: args.budget,
        worker_count: workers,
    };
    let started = Instant::now();
    log.record(json!({"event": "construct-start", "p": args.prime, "seed": cfg.seed, "budget": cfg.budget, "workers": workers}));
    let progress = |s: &locyc_core::search::SearchStats| {
        if log.verbose {
            log.record(json!({"event": "search-progress", "stats": s}));
        }
    };
    let construction = match construct(args.prime, &cfg, progress) {
        Ok(c) => c,
        Err(PipelineError::Search(SearchError::Exhausted { reason, stats })) => {
            log.record(json!({"event": "search-exhausted", "reason": reason, "stats": stats}));
            return fail(
                EXIT_EXHAUSTED,
                "search exhausted without a solution; raise --budget or --d-range, or change --seed",
            );
        }
        Err(PipelineError::Search(e @ SearchError::InvalidConfig(_))) => return fail(EXIT_USAGE, e),
        Err(e) => return fail(EXIT_INTERNAL, e),
    };
    log.record(json!({"event": "search-done", "stats": construction.stats}));
    let cert = construction.certificate;
    let report = verify(&cert);
    if !report.all_passed() {
        eprintln!("{report}");
        return fail(EXIT_INTERNAL, format!("constructed certificate fails {}", report.failed().join(", ")));
    }
    let text = match cert.emit() {
        Ok(t) => t,
        Err(e) => return fail(EXIT_INTERNAL, e),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(EXIT_CANT_CREATE, format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    log.record(json!({
        "event": "construct-done",
        "p": cert.p,
        "q1": cert.q1.to_string(),
        "q2": cert.q2.to_string(),
        "q3": cert.q3.to_string(),
        "elapsed_ms": started.elapsed().as_millis() as u64,
    }));
    ExitCode::SUCCESS
}

fn run_verify(file: &PathBuf, as_json: bool) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_NO_INPUT, format!("cannot read {}: {e}", file.display())),
    };
    let cert = match Certificate::parse(&text) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_DATA, e),
    };
    let report = verify(&cert);
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report.checks).expect("plain data"));
    } else {
        println!("{report}");
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed checks: {}", report.failed().join(", "));
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn run_series(p: u64, digits: u32) -> ExitCode {
    if let Err(e) = check_prime(p) {
        return fail(EXIT_USAGE, e);
    }
    if digits == 0 {
        return fail(EXIT_USAGE, "--digits must be positive");
    }
    let precision = construction_precision(p).max(digits + p as u32);
    let bundle = match build_bundle_at(p, precision) {
        Ok(b) => b,
        Err(e) => return fail(EXIT_INTERNAL, e),
    };
    println!("p = {p}, q = {p}^{}", bundle.q_exponent());
    let rows = [
        ("a4", &bundle.a4),
        ("a6", &bundle.a6),
        ("x''1", &bundle.xpp1),
        ("x''2", &bundle.xpp2),
        ("x''3", &bundle.xpp3),
        ("alpha", &bundle.alpha),
        ("beta", &bundle.beta),
        ("gamma", &bundle.gamma),
    ];
    for (name, value) in rows {
        println!("{name:<6} = {}", value.expansion(digits));
    }
    ExitCode::SUCCESS
}
