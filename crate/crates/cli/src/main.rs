use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qflag::flagbasis::{format_relation, format_sl2_relation, quadratic_relations, FlagCache};
use qflag::geometry::QValue;
use qflag::orthocell::{enumerate_effective, enumerate_effective_cells, enumerate_monogressive, enumerate_orthocells};
use qflag::report::{RunReport, Status};
use qflag::scalars::Laurent;
use qflag::suite::{dims, full_report, verify, Options, Suite};

const DEFAULT_MAX_N: usize = 7;
const ALGEBRAIC_WARN_N: usize = 5;

#[derive(Parser)]
#[command(name = "qflag", version, about = "Exact checks for the quantum flag variety of SL(n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List orthocells of S_n.
    Orthocells(OrthocellArgs),
    /// Compare D_{n;i,j} with the number and span rank of the e-vectors.
    Dims(DimsArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Print the quadratic relations in degree ω_i + ω_j.
    Relations(RelationArgs),
    /// Run every suite and emit one consolidated report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filter {
    All,
    Monogressive,
    Effective,
}

impl Filter {
    fn name(self) -> &'static str {
        match self {
            Filter::All => "all",
            Filter::Monogressive => "monogressive",
            Filter::Effective => "effective",
        }
    }
}

#[derive(Args)]
struct OrthocellArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, value_enum, default_value = "monogressive")]
    filter: Filter,
    /// First level, required with `--filter effective`.
    #[arg(long)]
    i: Option<usize>,
    /// Second level, required with `--filter effective`.
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct Sampling {
    /// Sampled points per cell for the geometric checks.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Rational specialization of q, as NUM/DEN or an integer.
    #[arg(long, value_parser = parse_q, default_value = "2")]
    q: QValue,
}

impl Sampling {
    fn options(&self) -> Options {
        Options {
            samples: self.samples,
            seed: self.seed,
            q: self.q.clone(),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct RelationArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    i: usize,
    #[arg(long)]
    j: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn parse_q(s: &str) -> Result<QValue, String> {
    QValue::parse(s).map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: qflag::Error| e.to_string())
}

/// Errors that map to the usage exit code.
struct Usage(String);

fn max_n() -> Result<usize, Usage> {
    match std::env::var("QFLAG_MAX_N") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Usage(format!("QFLAG_MAX_N={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn check_n(n: usize) -> Result<(), Usage> {
    let cap = max_n()?;
    if n < 2 || n > cap {
        return Err(Usage(format!("--n must lie in 2..={cap}, got {n}")));
    }
    Ok(())
}

fn check_level(n: usize, name: &str, l: usize) -> Result<(), Usage> {
    if l == 0 || l >= n {
        return Err(Usage(format!("--{name} must lie in 1..={}, got {l}", n - 1)));
    }
    Ok(())
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn emit_run(report: &RunReport, format: Format) -> ExitCode {
    match format {
        Format::Json => print_json(report),
        Format::Table => {
            for c in &report.checks {
                let tag = if c.status == Status::Pass { "PASS" } else { "FAIL" };
                println!("{tag}  {:<40} {:>8} ms  {}", c.name, c.elapsed_ms, c.detail);
            }
            let status = if report.passed() { "pass" } else { "fail" };
            println!("status: {status}");
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn orthocells(a: &OrthocellArgs) -> Result<ExitCode, Usage> {
    check_n(a.n)?;
    if let Some(d) = a.rank {
        if d > a.n / 2 {
            return Err(Usage(format!("--rank must be at most {} for n={}", a.n / 2, a.n)));
        }
    }
    let mut normal = None;
    let cells = match a.filter {
        Filter::All => enumerate_orthocells(a.n, a.rank),
        Filter::Monogressive => enumerate_monogressive(a.n, a.rank),
        Filter::Effective => {
            let (Some(i), Some(j)) = (a.i, a.j) else {
                return Err(Usage("--filter effective needs --i and --j".into()));
            };
            check_level(a.n, "i", i)?;
            check_level(a.n, "j", j)?;
            let cells: Vec<_> = enumerate_effective_cells(a.n, i, j)
                .into_iter()
                .filter(|c| a.rank.is_none_or(|d| c.rank() == d))
                .collect();
            normal = Some(enumerate_effective(a.n, i, j).len());
            cells
        }
    };
    match a.format {
        Format::Json => print_json(&json!({
            "n": a.n,
            "rank": a.rank,
            "filter": a.filter.name(),
            "i": a.i,
            "j": a.j,
            "count": cells.len(),
            "normal_count": normal,
            "cells": cells,
        })),
        Format::Table => {
            println!("count: {}", cells.len());
            if let Some(d) = normal {
                println!("ij-normal classes (all ranks): {d}");
            }
            for c in &cells {
                println!("{c}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn dims_cmd(a: &DimsArgs) -> Result<ExitCode, Usage> {
    check_n(a.n)?;
    let rows = match dims(a.n) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let ok = rows.iter().all(|r| r.matches);
    match a.format {
        Format::Json => print_json(&json!({ "n": a.n, "rows": rows, "status": if ok { "pass" } else { "fail" } })),
        Format::Table => {
            println!("{:>3} {:>3} {:>8} {:>8} {:>8}  match", "i", "j", "D", "cells", "rank");
            for r in &rows {
                println!("{:>3} {:>3} {:>8} {:>8} {:>8}  {}", r.i, r.j, r.formula, r.cells, r.rank, r.matches);
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn warn_algebraic(n: usize) {
    if n > ALGEBRAIC_WARN_N {
        eprintln!("warning: algebraic suites beyond n={ALGEBRAIC_WARN_N} can take a long time");
    }
}

fn verify_cmd(a: &VerifyArgs) -> Result<ExitCode, Usage> {
    check_n(a.n)?;
    if a.sampling.samples == 0 {
        return Err(Usage("--samples must be at least 1".into()));
    }
    if a.suite.is_algebraic() {
        warn_algebraic(a.n);
    }
    match verify(a.n, a.suite, &a.sampling.options()) {
        Ok(r) => Ok(emit_run(&r, a.format)),
        Err(e) => {
            eprintln!("error: {e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn report_cmd(a: &ReportArgs) -> Result<ExitCode, Usage> {
    check_n(a.n)?;
    if a.sampling.samples == 0 {
        return Err(Usage("--samples must be at least 1".into()));
    }
    warn_algebraic(a.n);
    match full_report(a.n, &a.sampling.options()) {
        Ok(r) => Ok(emit_run(&r, a.format)),
        Err(e) => {
            eprintln!("error: {e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn is_identity(m: &[Vec<Laurent>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(r, row)| row.iter().enumerate().all(|(c, x)| if r == c { x.is_one() } else { x.is_zero() }))
}

fn relations_cmd(a: &RelationArgs) -> Result<ExitCode, Usage> {
    check_n(a.n)?;
    check_level(a.n, "i", a.i)?;
    check_level(a.n, "j", a.j)?;
    let set = match FlagCache::new(a.n).and_then(|c| quadratic_relations(&c, a.i, a.j)) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let text: Vec<String> = set
        .type_i
        .iter()
        .map(|xi| if a.n == 2 { format_sl2_relation(xi) } else { format_relation(xi) })
        .collect();
    let identity = is_identity(&set.type_ii);
    match a.format {
        Format::Json => print_json(&json!({
            "relations": set,
            "type_i_text": text,
            "type_ii_is_identity": identity,
        })),
        Format::Table => {
            let (i, j) = (a.i, a.j);
            println!("type I relations in degree ω_{i}+ω_{j}: {}", text.len());
            for t in &text {
                println!("  {t}");
            }
            println!("type II relations: {} (x_C^{{{j}{i}}} ↦ x_C^{{{i}{j}}})", set.type_ii.len());
            if identity {
                println!("  R^{{{j}{i}}} is the identity matrix in the e-bases");
            } else {
                for (k, row) in set.type_ii.iter().enumerate() {
                    let entries: Vec<String> = row
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(c, x)| format!("{x}·{}", set.cells[c]))
                        .collect();
                    println!("  {} ↦ {}", set.cells[k], entries.join(" + "));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Orthocells(a) => orthocells(a),
        Command::Dims(a) => dims_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Relations(a) => relations_cmd(a),
        Command::Report(a) => report_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
