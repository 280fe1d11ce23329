//! `qsqrt`: build, verify, analyse and export the square-root circuits.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsqrt_core::analysis::{count_ops, resource_report, T_DEPTH_LABEL};
use qsqrt_core::blocks::{verify_block, Backend, Block, SweepMode};
use qsqrt_core::export::{rows_to_csv, rows_to_json, to_qasm, ReportRow};
use qsqrt_core::sim::sv_cap_from_env;
use qsqrt_core::sqrt::{build_isqrt_circuit, select_width, IsqrtPipeline};

mod range;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qsqrt",
    version,
    about = "Reversible square-root circuits: simulate, verify, count resources"
)]
struct Cli {
    /// Suppress timing lines (written to stderr).
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the integer square root of a value by simulating the circuit.
    Isqrt(IsqrtArgs),
    /// Tabulate qubits, T-count and depth against the closed-form estimates.
    Resources(ResourcesArgs),
    /// Check a circuit against its integer oracle.
    Verify(VerifyArgs),
    /// Write a circuit as OpenQASM 2.0.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct IsqrtArgs {
    #[arg(long)]
    value: u64,
    /// Register width (even, >= 4). Chosen automatically when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Also print the resource report of the circuit used.
    #[arg(long)]
    resources: bool,
}

#[derive(Debug, Args)]
struct ResourcesArgs {
    #[arg(long, value_parser = parse_block)]
    circuit: Block,
    /// Width, list (`6,8`) or inclusive range (`6..16`).
    #[arg(long)]
    n: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_block)]
    circuit: Block,
    #[arg(long)]
    n: usize,
    /// Enumerate every input (the default).
    #[arg(long, conflicts_with = "sampled")]
    exhaustive: bool,
    /// Check random inputs instead of all of them.
    #[arg(long)]
    sampled: bool,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = BackendArg::Perm)]
    backend: BackendArg,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long, value_parser = parse_block)]
    circuit: Block,
    #[arg(long)]
    n: usize,
    /// Destination file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Perm,
    Statevector,
}

fn parse_block(s: &str) -> Result<Block, String> {
    s.parse()
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<qsqrt_core::Error> for Failure {
    fn from(e: qsqrt_core::Error) -> Self {
        Failure::usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match cli.command {
        Command::Isqrt(args) => cmd_isqrt(args),
        Command::Resources(args) => cmd_resources(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Export(args) => cmd_export(args),
    };
    if !cli.no_timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_isqrt(args: IsqrtArgs) -> Result<(), Failure> {
    let n = match args.n {
        Some(n) => n,
        None => {
            let n = select_width(args.value);
            println!("n = {n} (smallest even n >= 4 with a <= 2^(n-1) - 1)");
            n
        }
    };
    let pipeline = IsqrtPipeline::new(n)?;
    let run = pipeline.run(args.value)?;
    println!(
        "a = {}, root = {}, remainder = {}",
        args.value, run.result.root, run.result.remainder
    );
    if args.resources {
        let report = resource_report(&build_isqrt_circuit(n)?)?;
        println!("qubits = {}", report.width);
        println!("t_count = {}", report.t_count);
        println!("{T_DEPTH_LABEL} = {}", report.t_depth);
        println!("total_depth = {}", report.total_depth);
    }
    Ok(())
}

fn render_table(block: Block, rows: &[ReportRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<13} {:>3} {:>10} {:>10} {:>11} {:>11} {:>8} {:>8} {:>5}",
        "circuit",
        "n",
        "qubits(C)",
        "qubits(E)",
        "t_count(C)",
        "t_count(E)",
        "t_depth*",
        "depth",
        "match"
    );
    for r in rows {
        let width_e = block.expected_width(r.n);
        let t_e = r.t_count_expected.unwrap_or(0);
        let ok = r.width == width_e && r.t_count_expected == Some(r.t_count);
        let _ = writeln!(
            out,
            "{:<13} {:>3} {:>10} {:>10} {:>11} {:>11} {:>8} {:>8} {:>5}",
            block.name(),
            r.n,
            r.width,
            width_e,
            r.t_count,
            t_e,
            r.t_depth,
            r.total_depth,
            if ok { "yes" } else { "NO" }
        );
    }
    let _ = writeln!(out, "* {T_DEPTH_LABEL}");
    out
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_resources(args: ResourcesArgs) -> Result<(), Failure> {
    let block = args.circuit;
    let widths = range::parse_widths(&args.n, block).map_err(Failure::usage)?;
    let rows = widths
        .iter()
        .map(|&n| {
            let report = resource_report(&block.build(n)?)?;
            Ok(ReportRow::new(n, report, Some(block.expected_t_count(n)?)))
        })
        .collect::<Result<Vec<_>, qsqrt_core::Error>>()?;
    let text = match args.format {
        Format::Table => render_table(block, &rows),
        Format::Json => rows_to_json(&rows) + "\n",
        Format::Csv => rows_to_csv(&rows),
    };
    emit(args.output.as_ref(), &text)?;
    if let Some(path) = &args.output {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let mode = if args.sampled {
        SweepMode::Sampled {
            samples: args.samples,
            seed: args.seed,
        }
    } else {
        SweepMode::Exhaustive
    };
    let backend = match args.backend {
        BackendArg::Perm => Backend::Permutation,
        BackendArg::Statevector => Backend::Statevector {
            cap: sv_cap_from_env(),
        },
    };
    let report = verify_block(args.circuit, args.n, mode, backend).map_err(|e| match e {
        qsqrt_core::Error::EnumerationLimit { .. } => Failure::usage(format!("{e}; try --sampled")),
        e => Failure::usage(e),
    })?;
    println!(
        "{} n = {}: checked {}, passed {}",
        report.block, report.n, report.checked, report.passed
    );
    match report.first_failure {
        None => {
            println!("PASS");
            Ok(())
        }
        Some(f) => {
            println!("FAIL");
            Err(Failure {
                code: EXIT_VERIFY_FAILED,
                message: format!("first counterexample: input {} ({})", f.input, f.message),
            })
        }
    }
}

fn is_header(line: &str) -> bool {
    ["OPENQASM", "include", "qreg"]
        .iter()
        .any(|p| line.starts_with(p))
}

fn cmd_export(args: ExportArgs) -> Result<(), Failure> {
    let circuit = args.circuit.build(args.n)?;
    let doc = to_qasm(&circuit)?;
    emit(args.output.as_ref(), &doc.text)?;
    if let Some(path) = &args.output {
        let gates = doc.text.lines().filter(|l| !is_header(l)).count();
        let logical: usize = count_ops(&circuit).values().sum();
        println!(
            "wrote {} ({gates} gates, {logical} before ZCX expansion)",
            path.display()
        );
    }
    Ok(())
}
