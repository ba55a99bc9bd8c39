//! The `mdlab` command line. [`run`] takes the argument list and output
//! streams explicitly and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | internal error, or a ratio bound was violated |
//! | 2 | bad arguments or input files |
//! | 3 | `verify` found profitable deviations |

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdlab_core::harness::{
    check_truthful, check_universally_truthful, grid_size, instance_ratio, range_gap_demo,
    DeviationWitness, HarnessError, RatioMechanism, RatioSummary, TruthCheck,
};
use mdlab_core::mechanisms::{
    AffineMaximizer, AffineMaximizerSpec, NaiveVcgFptas, RandomDictator, Vcg,
};
use mdlab_core::{Epsilon, Money};
use serde_json::json;

use crate::format::{
    affine_spec_from_json, gap_to_json, summary_to_json, witness_to_json, write_csv, write_jsonl,
    InstanceJson,
};
use crate::mlist::parse_m_list;
use crate::runner::{self, RunnerError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WITNESSES: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mdlab",
    version,
    about = "Two-bidder multi-unit auction laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact vs. FPTAS query counts, and range-gap instances.
    Separation(SeparationArgs),
    /// Search for profitable misreports.
    Verify(VerifyArgs),
    /// Approximation ratios against the brute-force optimum.
    Ratio(RatioArgs),
}

#[derive(Debug, Clone)]
struct MList(Vec<usize>);

fn m_list_arg(s: &str) -> Result<MList, String> {
    parse_m_list(s).map(MList).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SeparationArgs {
    /// Item counts: `8`, `4,16,100` or `2^10..2^20`.
    #[arg(long, value_parser = m_list_arg)]
    m: Option<MList>,
    #[arg(long, default_value = "1/1")]
    eps: Epsilon,
    #[arg(long, default_value_t = 1_000_000)]
    vmax: Money,
    /// Required for the query-growth rows.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Range of a maximal-in-range rule to break with a spike instance.
    #[arg(long, value_delimiter = ',')]
    gap_range: Option<Vec<usize>>,
    /// Spike height of the gap instance.
    #[arg(long = "H", default_value_t = 1_000_000)]
    height: Money,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyMechanism {
    Vcg,
    Affine,
    RandomDictator,
    FptasNaiveVcg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    mechanism: VerifyMechanism,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    vmax: Money,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    #[arg(long, default_value = "1/1")]
    eps: Epsilon,
    /// Required in sampled mode.
    #[arg(long)]
    seed: Option<u64>,
    /// Deviation triples per bidder in sampled mode.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Largest per-bidder grid the exhaustive mode will enumerate.
    #[arg(long, default_value_t = TruthCheck::DEFAULT_MAX_GRID)]
    max_grid: usize,
    /// Affine maximizer spec file, required for `--mechanism affine`.
    #[arg(long)]
    affine: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RatioKind {
    RandomDictator,
    Fptas,
}

#[derive(Debug, Args)]
struct RatioArgs {
    #[arg(long, value_enum)]
    mechanism: RatioKind,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value = "1/1")]
    eps: Epsilon,
    #[arg(long, default_value_t = 1000, conflicts_with = "instance")]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1_000_000)]
    vmax: Money,
    /// Evaluate a single instance file instead of random trials.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<RunnerError> for Failure {
    fn from(e: RunnerError) -> Self {
        match e {
            RunnerError::Threads(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(path: &Option<PathBuf>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| internal(format!("{}: {e}", p.display()))),
        None => stdout.write_all(bytes).map_err(internal),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Separation(a) => separation(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Ratio(a) => ratio(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn separation(a: SeparationArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let ms = a.m.ok_or_else(|| usage("--m is required"))?.0;
    if a.seed.is_none() && a.gap_range.is_none() {
        return Err(usage(
            "--seed is required for query-growth rows (or pass --gap-range)",
        ));
    }
    let mut out = Vec::new();
    if let Some(seed) = a.seed {
        let pool = runner::pool_from_env()?;
        let records = runner::query_growth(&pool, &ms, a.eps, a.vmax, seed)?;
        match a.format {
            Format::Json => write_jsonl(&mut out, &records),
            Format::Csv => write_csv(&mut out, &records),
        }
        .map_err(internal)?;
    }
    if let Some(range) = a.gap_range {
        let spec = AffineMaximizerSpec::maximal_in_range(range).map_err(usage)?;
        let mut demos = Vec::with_capacity(ms.len());
        for &m in &ms {
            if let Some(&t) = spec.range().iter().find(|&&t| t > m) {
                return Err(usage(format!("gap range element {t} exceeds m = {m}")));
            }
            match range_gap_demo(&spec, m, a.height) {
                Ok(d) => demos.push(d),
                Err(HarnessError::FullRange) => {
                    return Err(usage(format!("gap range is the full range for m = {m}")))
                }
                Err(e) => return Err(internal(e)),
            }
        }
        match a.format {
            Format::Json => {
                for d in &demos {
                    serde_json::to_writer(&mut out, &gap_to_json(&spec, a.height, d))
                        .map_err(internal)?;
                    out.push(b'\n');
                }
            }
            Format::Csv => {
                if a.seed.is_some() {
                    out.push(b'\n');
                }
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(["m", "missing", "chosen", "H", "mir_welfare", "opt_welfare"])
                    .map_err(internal)?;
                for d in &demos {
                    w.write_record([
                        d.m.to_string(),
                        d.missing.to_string(),
                        d.chosen.to_string(),
                        a.height.to_string(),
                        d.mir_welfare.to_string(),
                        d.opt_welfare.to_string(),
                    ])
                    .map_err(internal)?;
                }
                w.flush().map_err(internal)?;
            }
        }
    }
    emit(&a.output, stdout, &out)?;
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mut cfg = match a.mode {
        Mode::Exhaustive => TruthCheck::exhaustive(a.m, a.vmax),
        Mode::Sampled => {
            let seed = a
                .seed
                .ok_or_else(|| usage("--seed is required in sampled mode"))?;
            TruthCheck::sampled(a.m, a.vmax, seed, a.trials)
        }
    };
    cfg.max_grid = a.max_grid;
    if a.m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    let run = |mech: &dyn mdlab_core::Mechanism| check_truthful(mech, &cfg);
    let result: Result<Vec<DeviationWitness>, HarnessError> = match a.mechanism {
        VerifyMechanism::Vcg => run(&Vcg),
        VerifyMechanism::Affine => {
            let path = a
                .affine
                .as_ref()
                .ok_or_else(|| usage("--affine <file> is required"))?;
            let spec = affine_spec_from_json(&read_file(path)?)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            if let Some(&t) = spec.range().iter().find(|&&t| t > a.m) {
                return Err(usage(format!(
                    "affine range element {t} exceeds m = {}",
                    a.m
                )));
            }
            run(&AffineMaximizer(spec))
        }
        VerifyMechanism::RandomDictator => check_universally_truthful(&RandomDictator, &cfg),
        VerifyMechanism::FptasNaiveVcg => run(&NaiveVcgFptas(a.eps)),
    };
    let witnesses = match result {
        Ok(w) => w,
        Err(HarnessError::GridTooLarge { size, cap }) => {
            return Err(usage(format!(
                "exhaustive grid has {size} valuations per bidder (cap {cap}); use --mode sampled or --max-grid"
            )))
        }
        Err(e) => return Err(internal(e)),
    };
    let mode = match a.mode {
        Mode::Exhaustive => json!("exhaustive"),
        Mode::Sampled => json!({"seed": a.seed, "trials": a.trials}),
    };
    let doc = json!({
        "mechanism": a.mechanism.to_possible_value().map(|v| v.get_name().to_string()),
        "m": a.m,
        "vmax": a.vmax,
        "mode": mode,
        "grid_size": grid_size(a.m, a.vmax).to_string(),
        "witness_count": witnesses.len(),
        "witnesses": witnesses.iter().map(witness_to_json).collect::<Vec<_>>(),
    });
    let mut out = serde_json::to_vec(&doc).map_err(internal)?;
    out.push(b'\n');
    emit(&a.output, stdout, &out)?;
    Ok(if witnesses.is_empty() {
        EXIT_OK
    } else {
        EXIT_WITNESSES
    })
}

fn ratio(a: RatioArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mech = match a.mechanism {
        RatioKind::RandomDictator => RatioMechanism::RandomDictator,
        RatioKind::Fptas => RatioMechanism::Fptas(a.eps),
    };
    let summary = if let Some(path) = &a.instance {
        let (v1, v2) = InstanceJson::parse(&read_file(path)?)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        if let Some(m) = a.m.filter(|&m| m != v1.m()) {
            return Err(usage(format!(
                "--m {m} does not match the instance's m = {}",
                v1.m()
            )));
        }
        RatioSummary::summarize([instance_ratio(mech, &v1, &v2).map_err(internal)?])
    } else if a.trials == 0 {
        RatioSummary::summarize([])
    } else {
        let m =
            a.m.ok_or_else(|| usage("--m is required unless --instance is given"))?;
        if m == 0 {
            return Err(usage("--m must be at least 1"));
        }
        let seed = a
            .seed
            .ok_or_else(|| usage("--seed is required for random trials"))?;
        let pool = runner::pool_from_env()?;
        runner::ratio(&pool, mech, a.trials, m, a.vmax, seed)?
    };
    let name = a.mechanism.to_possible_value().unwrap();
    let bound = mech.bound();
    let mut out =
        serde_json::to_vec(&summary_to_json(name.get_name(), bound, &summary)).map_err(internal)?;
    out.push(b'\n');
    emit(&a.output, stdout, &out)?;
    Ok(if summary.within(bound) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("mdlab").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("separation"));
    }

    #[test]
    fn bad_eps_is_usage() {
        let (code, _, err) = call(&["separation", "--m", "4", "--seed", "1", "--eps", "0/1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("eps"));
    }

    #[test]
    fn gap_range_beyond_m() {
        let (code, _, err) = call(&["separation", "--m", "3", "--gap-range", "0,5"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("exceeds"));
    }

    #[test]
    fn full_gap_range() {
        let (code, _, _) = call(&["separation", "--m", "2", "--gap-range", "0,1,2"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn verify_grid_cap() {
        let (code, _, err) = call(&["verify", "--mechanism", "vcg", "--m", "5", "--vmax", "5"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("sampled"));
    }

    #[test]
    fn sampled_needs_seed() {
        let (code, _, _) = call(&["verify", "--mechanism", "vcg", "--mode", "sampled"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn affine_needs_file() {
        let (code, _, err) = call(&["verify", "--mechanism", "affine"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--affine"));
    }

    #[test]
    fn ratio_trials_need_m_and_seed() {
        assert_eq!(
            call(&["ratio", "--mechanism", "fptas", "--seed", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            call(&["ratio", "--mechanism", "fptas", "--m", "4"]).0,
            EXIT_USAGE
        );
    }
}
