//! Command implementations behind the `vwx` binary.
//!
//! Every command returns an [`Outcome`] holding its exit code and output so
//! that the binary stays a thin shell and the commands can be tested
//! in-process.

pub mod bench;
pub mod bfile;
pub mod table;

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vwx_core::detect::detect_fast;
use vwx_core::spectral::{spectrum_report, verify_uniformity, COUNT_IDENTITY_MAX_P, DFT_MAX_P};
use vwx_core::vw::{compute_vw, scan_range, VwOptions, VwResult};
use vwx_core::{Coefficients, PrimeContext, Subgroup};

use crate::table::ScanRow;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "vwx", version, about = "Van der Waerden-like numbers for multiplicative subgroups of F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the index-n subgroup mod p has a nontrivial solution.
    Detect(DetectArgs),
    /// Compute VW(n) exactly.
    Vw(VwArgs),
    /// Compute VW(n) for a range of n.
    Scan(ScanArgs),
    /// Compare computed values against an OEIS b-file.
    VerifyOeis(VerifyOeisArgs),
    /// Time the quadratic and linear detectors on the same subgroup.
    Bench(BenchArgs),
    /// Fourier uniformity and counting-identity checks.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct EquationArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    #[arg(long, default_value_t = 2)]
    pub c: u64,
}

impl Default for EquationArgs {
    fn default() -> Self {
        Self { a: 1, b: 1, c: 2 }
    }
}

impl EquationArgs {
    fn coefficients(&self) -> vwx_core::Result<Coefficients> {
        Coefficients::new(self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub equation: EquationArgs,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VwArgs {
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub equation: EquationArgs,
    /// Scan up to this bound instead of the guarantee bound. Results below
    /// the guarantee bound are marked UNCERTIFIED.
    #[arg(long = "bound")]
    pub bound_override: Option<u64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Bfile,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long = "from")]
    pub n_from: u64,
    #[arg(long = "to")]
    pub n_to: u64,
    #[command(flatten)]
    pub equation: EquationArgs,
    #[arg(long = "bound")]
    pub bound_override: Option<u64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyOeisArgs {
    /// b-file with lines `<n> <a(n)>`.
    pub bfile: PathBuf,
    /// Ignore entries with index above this.
    #[arg(long)]
    pub to: Option<u64>,
    #[command(flatten)]
    pub equation: EquationArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub equation: EquationArgs,
    /// Timed repetitions per detector (at least 5).
    #[arg(long, default_value_t = bench::MIN_REPETITIONS)]
    pub reps: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub equation: EquationArgs,
}

/// Exit code plus what the command printed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: impl Display) -> Self {
        Self {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Detect(a) => cmd_detect(a),
        Command::Vw(a) => cmd_vw(a),
        Command::Scan(a) => cmd_scan(a),
        Command::VerifyOeis(a) => cmd_verify_oeis(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Spectrum(a) => cmd_spectrum(a),
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial table.
pub fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(output: Option<&Path>, contents: String) -> Outcome {
    match output {
        None => Outcome::ok(contents),
        Some(path) => match write_atomically(path, &contents) {
            Ok(()) => Outcome::ok(String::new()),
            Err(e) => Outcome::error(format!("cannot write {}: {e}", path.display())),
        },
    }
}

fn subgroup_and_equation(
    p: u64,
    n: u64,
    eq: &EquationArgs,
) -> vwx_core::Result<(Subgroup, vwx_core::Equation)> {
    let sub = Subgroup::new(PrimeContext::new(p)?, n)?;
    let equation = eq.coefficients()?.reduce(p)?;
    Ok((sub, equation))
}

#[derive(Serialize)]
struct DetectReport {
    p: u64,
    n: u64,
    a: u64,
    b: u64,
    c: u64,
    order: u64,
    has_solution: bool,
    witness: Option<vwx_core::Witness>,
    time_ns: u64,
}

pub fn cmd_detect(args: &DetectArgs) -> Outcome {
    let (sub, eq) = match subgroup_and_equation(args.p, args.n, &args.equation) {
        Ok(v) => v,
        Err(e) => return Outcome::error(e),
    };
    let start = Instant::now();
    let outcome = match detect_fast(&sub, &eq) {
        Ok(o) => o,
        Err(e) => return Outcome::error(e),
    };
    let time_ns = start.elapsed().as_nanos() as u64;
    let EquationArgs { a, b, c } = args.equation;
    let report = DetectReport {
        p: args.p,
        n: args.n,
        a,
        b,
        c,
        order: sub.order(),
        has_solution: outcome.has_solution,
        witness: outcome.witness,
        time_ns,
    };
    let stdout = if args.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        let mut s = format!(
            "p = {}, n = {}, |H| = {}, equation {a}x + {b}y = {c}z\nhas_solution: {}\n",
            report.p, report.n, report.order, report.has_solution
        );
        if let Some(w) = report.witness {
            s.push_str(&format!(
                "witness: {a}*{} + {b}*{} = {c}*{} (mod {})\n",
                w.x, w.y, w.z, report.p
            ));
        }
        s.push_str(&format!("time_ns: {time_ns}\n"));
        s
    };
    Outcome {
        code: if outcome.has_solution {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        },
        stdout,
        stderr: String::new(),
    }
}

#[derive(Serialize)]
struct VwDocument<'a> {
    status: &'static str,
    #[serde(flatten)]
    result: &'a VwResult,
}

/// Pretty JSON for a single result, labelled CERTIFIED or UNCERTIFIED.
pub fn vw_json(result: &VwResult) -> String {
    let doc = VwDocument {
        status: if result.certified {
            "CERTIFIED"
        } else {
            table::UNCERTIFIED
        },
        result,
    };
    serde_json::to_string_pretty(&doc).expect("result serializes") + "\n"
}

pub fn cmd_vw(args: &VwArgs) -> Outcome {
    let coefficients = match args.equation.coefficients() {
        Ok(c) => c,
        Err(e) => return Outcome::error(e),
    };
    let options = VwOptions {
        bound_override: args.bound_override,
        workers: args.workers as usize,
    };
    match compute_vw(args.n, coefficients, &options) {
        Ok(result) => {
            let mut out = emit(args.output.as_deref(), vw_json(&result));
            if !result.certified {
                out.stderr.push_str(&format!(
                    "warning: scan stopped at {} below the guarantee bound {}; result is UNCERTIFIED\n",
                    result.scan_limit, result.guarantee_bound
                ));
            }
            out
        }
        Err(e) => Outcome::error(e),
    }
}

/// The scan table as rows, one per `n`.
pub fn scan_rows(args: &ScanArgs) -> vwx_core::Result<Vec<ScanRow>> {
    let options = VwOptions {
        bound_override: args.bound_override,
        workers: args.workers as usize,
    };
    let entries = scan_range(args.n_from, args.n_to, args.equation.coefficients()?, &options)?;
    Ok(entries.iter().map(ScanRow::from_entry).collect())
}

pub fn cmd_scan(args: &ScanArgs) -> Outcome {
    let rows = match scan_rows(args) {
        Ok(r) => r,
        Err(e) => return Outcome::error(e),
    };
    let rendered = match args.format {
        OutputFormat::Csv => table::to_csv(&rows),
        OutputFormat::Json => table::to_json(&rows),
        OutputFormat::Bfile => table::to_bfile(&rows),
    };
    let mut out = emit(args.output.as_deref(), rendered);
    for r in &rows {
        if let Some(err) = &r.error {
            out.stderr.push_str(&format!("error: n = {}: {err}\n", r.n));
            out.code = EXIT_ERROR;
        }
    }
    out
}

pub fn cmd_verify_oeis(args: &VerifyOeisArgs) -> Outcome {
    let text = match std::fs::read_to_string(&args.bfile) {
        Ok(t) => t,
        Err(e) => return Outcome::error(format!("cannot read {}: {e}", args.bfile.display())),
    };
    let records = match bfile::parse_bfile(&text) {
        Ok(r) => r,
        Err(e) => return Outcome::error(format!("{}: {e}", args.bfile.display())),
    };
    let coefficients = match args.equation.coefficients() {
        Ok(c) => c,
        Err(e) => return Outcome::error(e),
    };
    let options = VwOptions {
        bound_override: None,
        workers: args.workers as usize,
    };
    let mut out = Outcome::default();
    let (mut agree, mut mismatch) = (0, 0);
    for rec in records {
        if args.to.is_some_and(|to| rec.n > to) {
            continue;
        }
        if rec.n < 2 {
            out.stdout.push_str(&format!("n = {}: skipped (index must be >= 2)\n", rec.n));
            continue;
        }
        match compute_vw(rec.n, coefficients, &options) {
            Ok(r) if r.p0 == Some(rec.value) => {
                agree += 1;
                out.stdout.push_str(&format!("n = {}: {} OK\n", rec.n, rec.value));
            }
            Ok(r) => {
                mismatch += 1;
                out.stdout.push_str(&format!(
                    "n = {}: MISMATCH file {} computed {}\n",
                    rec.n,
                    rec.value,
                    r.p0.map_or("none".to_string(), |v| v.to_string())
                ));
            }
            Err(e) => return Outcome::error(format!("n = {}: {e}", rec.n)),
        }
    }
    out.stdout
        .push_str(&format!("{agree} agree, {mismatch} mismatch\n"));
    out.code = if mismatch == 0 { EXIT_OK } else { EXIT_NEGATIVE };
    out
}

pub fn cmd_bench(args: &BenchArgs) -> Outcome {
    let (sub, eq) = match subgroup_and_equation(args.p, args.n, &args.equation) {
        Ok(v) => v,
        Err(e) => return Outcome::error(e),
    };
    let report = match bench::run(&sub, &eq, args.reps) {
        Ok(r) => r,
        Err(e) => return Outcome::error(e),
    };
    let mut out = if args.json {
        Outcome::ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
    } else {
        let opt = |v: Option<u64>| v.map_or("skipped".to_string(), |x| x.to_string());
        let ratio = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.1}"));
        Outcome::ok(format!(
            "p = {}, n = {}, |H| = {}, repetitions = {}\n\
             {:<12} {:>16}\n\
             {:<12} {:>16}\n\
             {:<12} {:>16}\n\
             {:<12} {:>16}\n\
             {:<12} {:>16}\n\
             {:<12} {:>16}\n",
            report.p,
            report.n,
            report.order,
            report.repetitions,
            "leg",
            "median_ns",
            "naive",
            opt(report.naive_ns),
            "fast",
            report.fast_ns,
            "full_pass",
            opt(report.full_pass_ns),
            "speedup",
            ratio(report.speedup),
            "full_speedup",
            ratio(report.full_pass_speedup),
        ))
    };
    if report.naive_skipped {
        out.stderr.push_str(&format!(
            "notice: naive leg skipped, |H| = {} exceeds {}\n",
            report.order,
            bench::NAIVE_MAX_ORDER
        ));
    }
    out
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Outcome {
    if args.p > DFT_MAX_P {
        return Outcome::error(format!(
            "p = {} exceeds the transform limit {DFT_MAX_P}",
            args.p
        ));
    }
    let (sub, eq) = match subgroup_and_equation(args.p, args.n, &args.equation) {
        Ok(v) => v,
        Err(e) => return Outcome::error(e),
    };
    if args.p <= COUNT_IDENTITY_MAX_P {
        match spectrum_report(&sub, &eq) {
            Ok(r) => {
                let mut out =
                    Outcome::ok(serde_json::to_string_pretty(&r).expect("report serializes") + "\n");
                if !r.passes() {
                    out.code = EXIT_NEGATIVE;
                }
                out
            }
            Err(e) => Outcome::error(e),
        }
    } else {
        match verify_uniformity(&sub) {
            Ok(r) => {
                let mut out =
                    Outcome::ok(serde_json::to_string_pretty(&r).expect("report serializes") + "\n");
                out.stderr = format!(
                    "notice: counting identity skipped above p = {COUNT_IDENTITY_MAX_P}\n"
                );
                if !r.uniform {
                    out.code = EXIT_NEGATIVE;
                }
                out
            }
            Err(e) => Outcome::error(e),
        }
    }
}
