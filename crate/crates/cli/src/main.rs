//! Batch CLI: replay the verification pipeline phase by phase or end to
//! end, emitting the JSON or text report on stdout.
//!
//! Exit codes: 0 when `verify` reaches the "verified" verdict (and for the
//! partial phases on success), 2 when `verify` ends inconclusive, 1 on any
//! error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Deserialize;

use triblucas::pipeline::{run_phase, OutputFormat, Phase, PipelineConfig};
use triblucas::report::{render_json, render_text};

#[derive(Parser)]
#[command(
    name = "triblucas",
    about = "Certified verification that 131 is the only Tribonacci-Lucas number \
             formed by a palindromic concatenation of two distinct repdigits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive low-range search over sequence indices
    Search(PhaseArgs),
    /// Derive the initial bounds from linear forms in logarithms
    Bounds(PhaseArgs),
    /// Run the three reduction rounds (includes bound derivation)
    Reduce(PhaseArgs),
    /// Full pipeline: search, bounds, reduction, verdict
    Verify(PhaseArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args)]
struct PhaseArgs {
    /// Upper index of the low-range search (default 500)
    #[arg(long = "n-max")]
    n_max: Option<u64>,
    /// Working decimal digits for certified arithmetic (default 250)
    #[arg(long)]
    precision: Option<u32>,
    /// Report format (default json)
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// TOML config file; command-line flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Config file schema: every key optional, mirroring PipelineConfig.
#[derive(Deserialize, Default)]
struct FileConfig {
    n_low_max: Option<u64>,
    precision_digits: Option<u32>,
    m_round1: Option<String>,
    c_lll: Option<String>,
    output_format: Option<String>,
}

/// Accepts plain decimal digits, "1e51", or "10^51".
fn parse_big(s: &str) -> Result<BigInt, String> {
    let s = s.trim();
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let mant: BigInt = mant.parse().map_err(|_| format!("bad mantissa in {s}"))?;
        let exp: u32 = exp.parse().map_err(|_| format!("bad exponent in {s}"))?;
        return Ok(mant * BigInt::from(10u32).pow(exp));
    }
    if let Some(exp) = s.strip_prefix("10^") {
        let exp: u32 = exp.parse().map_err(|_| format!("bad exponent in {s}"))?;
        return Ok(BigInt::from(10u32).pow(exp));
    }
    s.parse().map_err(|_| format!("bad integer {s}"))
}

fn load_config(args: &PhaseArgs) -> Result<PipelineConfig, String> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let file: FileConfig =
            toml::from_str(&text).map_err(|e| format!("bad config file: {e}"))?;
        if let Some(v) = file.n_low_max {
            cfg.n_low_max = v;
        }
        if let Some(v) = file.precision_digits {
            cfg.precision_digits = v;
        }
        if let Some(v) = file.m_round1 {
            cfg.m_round1 = parse_big(&v)?;
        }
        if let Some(v) = file.c_lll {
            cfg.c_lll = parse_big(&v)?;
        }
        if let Some(v) = file.output_format {
            cfg.output_format = match v.as_str() {
                "json" => OutputFormat::Json,
                "text" => OutputFormat::Text,
                other => return Err(format!("unknown output format {other}")),
            };
        }
    }
    if let Some(v) = args.n_max {
        cfg.n_low_max = v;
    }
    if let Some(v) = args.precision {
        cfg.precision_digits = v;
    }
    if let Some(v) = args.format {
        cfg.output_format = match v {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Text => OutputFormat::Text,
        };
    }
    Ok(cfg)
}

fn run(phase: Phase, args: &PhaseArgs) -> Result<ExitCode, String> {
    let cfg = load_config(args)?;
    let report = run_phase(&cfg, phase).map_err(|e| e.to_string())?;
    let rendered = match cfg.output_format {
        OutputFormat::Json => render_json(&report),
        OutputFormat::Text => render_text(&report),
    };
    print!("{rendered}");
    Ok(if phase == Phase::Verify {
        match report.verdict.as_str() {
            "verified" => ExitCode::SUCCESS,
            _ => ExitCode::from(2),
        }
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (phase, args) = match &cli.command {
        Command::Search(a) => (Phase::Search, a),
        Command::Bounds(a) => (Phase::Bounds, a),
        Command::Reduce(a) => (Phase::Reduce, a),
        Command::Verify(a) => (Phase::Verify, a),
    };
    match run(phase, args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
