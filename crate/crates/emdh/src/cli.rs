//! Command-line surface.
//!
//! Subcommands: `analyze` (full batch pipeline), `synth` (deterministic
//! generators writing the same CSV schema the parser reads), `zabreak`
//! (structural-break test only) and `hurst` (R/S estimate only).
//! Log verbosity comes from the `EMDH_LOG` env var. Exit codes: 0 success,
//! 1 partial failures, 2 configuration errors.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;

use emdh_core::breaktest::{
    monte_carlo_critical_values, za_test, CriticalValues, LagPolicy, LevelFlags,
};
use emdh_core::hurst::{hurst_exponent_with, HurstOptions};
use emdh_core::scale::{SplitPolicy, DEFAULT_SPLIT_THRESHOLD};
use emdh_core::synth::{generate, SynthKind, SynthSpec};

use crate::csv_io::{parse_ohlcv_csv, write_rs_cloud_csv, write_series_csv, PriceColumn};
use crate::pipeline::{run_pipeline, Mode, OutputFormat, PipelineConfig};

#[derive(Debug, Parser)]
#[command(
    name = "emdh",
    version,
    about = "Separate financial time series into short-term (random) and long-term (persistent) components"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full pipeline over one or more OHLCV CSV files.
    Analyze(AnalyzeArgs),
    /// Generate a synthetic series with known ground truth.
    Synth(SynthArgs),
    /// Zivot-Andrews structural-break unit-root test.
    Zabreak(ZabreakArgs),
    /// Rescaled-range Hurst exponent of one series.
    Hurst(HurstArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ColumnArg {
    Auto,
    Close,
    Adjclose,
    Open,
    High,
    Low,
}

impl From<ColumnArg> for PriceColumn {
    fn from(c: ColumnArg) -> Self {
        match c {
            ColumnArg::Auto => PriceColumn::Auto,
            ColumnArg::Close => PriceColumn::Close,
            ColumnArg::Adjclose => PriceColumn::AdjClose,
            ColumnArg::Open => PriceColumn::Open,
            ColumnArg::High => PriceColumn::High,
            ColumnArg::Low => PriceColumn::Low,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Nobreak,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Input CSV file(s).
    #[arg(long, required = true, num_args = 1.., value_name = "CSV")]
    input: Vec<PathBuf>,
    /// Price column to analyze.
    #[arg(long, value_enum, default_value_t = ColumnArg::Auto)]
    column: ColumnArg,
    /// Whether to split at the structural break.
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    mode: ModeArg,
    /// Trimming fraction for the break-candidate window.
    #[arg(long, default_value_t = 0.15)]
    trim: f64,
    /// Lag policy: `tsig`, `tsig:K`, or `fixed:K`.
    #[arg(long, default_value = "tsig")]
    lags: String,
    /// Sifting stop threshold.
    #[arg(long, default_value_t = 0.2)]
    sd: f64,
    /// Cap on extracted IMFs (default: run to exhaustion).
    #[arg(long)]
    max_imfs: Option<usize>,
    /// Cap on sifting rounds per IMF.
    #[arg(long, default_value_t = 100)]
    max_sift_iters: usize,
    /// Short/long-term split: `auto`, `threshold:H`, or `fixed:J`.
    #[arg(long, default_value = "auto")]
    split: String,
    /// Reproduction preset: pins --max-imfs 9 and --split fixed:5.
    #[arg(long)]
    paper_repro: bool,
    /// Apply the Anis-Lloyd small-sample correction to Hurst estimates.
    #[arg(long)]
    anis_lloyd: bool,
    /// Output directory for reports and CSVs.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Whitenoise,
    Randomwalk,
    Fbm,
    Brokentrend,
    Tone,
    Chirp,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Series length.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hurst parameter (fbm).
    #[arg(long, default_value_t = 0.5)]
    h: f64,
    /// Period in samples (tone).
    #[arg(long, default_value_t = 20.0)]
    period: f64,
    /// Start frequency in cycles/sample (chirp).
    #[arg(long, default_value_t = 0.01)]
    f0: f64,
    /// End frequency in cycles/sample (chirp).
    #[arg(long, default_value_t = 0.1)]
    f1: f64,
    /// Break position as a fraction of the length (brokentrend).
    #[arg(long, default_value_t = 0.5)]
    break_frac: f64,
    /// Level shift after the break (brokentrend).
    #[arg(long, default_value_t = 10.0)]
    level_shift: f64,
    /// Slope shift after the break (brokentrend).
    #[arg(long, default_value_t = 0.0)]
    slope_shift: f64,
    /// Noise standard deviation (brokentrend).
    #[arg(long, default_value_t = 1.0)]
    noise_sd: f64,
    /// Output CSV path.
    #[arg(long, value_name = "CSV")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ZabreakArgs {
    #[arg(long, value_name = "CSV")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ColumnArg::Auto)]
    column: ColumnArg,
    #[arg(long, default_value_t = 0.15)]
    trim: f64,
    /// Lag policy: `tsig`, `tsig:K`, or `fixed:K`.
    #[arg(long, default_value = "tsig")]
    lags: String,
    /// Also derive finite-sample critical values from this many simulated
    /// null runs.
    #[arg(long, value_name = "RUNS")]
    mc_cv: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, value_name = "JSON")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HurstArgs {
    #[arg(long, value_name = "CSV")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ColumnArg::Auto)]
    column: ColumnArg,
    /// Explicit comma-separated window grid (default: auto).
    #[arg(long, value_name = "N,N,...")]
    grid: Option<String>,
    /// Analyze first differences instead of levels.
    #[arg(long)]
    diff: bool,
    /// Apply the Anis-Lloyd small-sample correction.
    #[arg(long)]
    anis_lloyd: bool,
    /// Write the `ln_n,ln_rs` point cloud here.
    #[arg(long, value_name = "CSV")]
    out: Option<PathBuf>,
}

fn parse_lag_policy(text: &str) -> Result<LagPolicy, String> {
    if text == "tsig" {
        return Ok(LagPolicy::TSig { k_max: None });
    }
    if let Some(k) = text.strip_prefix("tsig:") {
        let k: usize = k.parse().map_err(|_| format!("bad lag count in {text:?}"))?;
        return Ok(LagPolicy::TSig { k_max: Some(k) });
    }
    if let Some(k) = text.strip_prefix("fixed:") {
        let k: usize = k.parse().map_err(|_| format!("bad lag count in {text:?}"))?;
        return Ok(LagPolicy::Fixed(k));
    }
    Err(format!("lag policy {text:?} is not tsig, tsig:K or fixed:K"))
}

fn parse_split_policy(text: &str) -> Result<SplitPolicy, String> {
    if text == "auto" {
        return Ok(SplitPolicy::Threshold(DEFAULT_SPLIT_THRESHOLD));
    }
    if let Some(h) = text.strip_prefix("threshold:") {
        let h: f64 = h.parse().map_err(|_| format!("bad threshold in {text:?}"))?;
        return Ok(SplitPolicy::Threshold(h));
    }
    if let Some(j) = text.strip_prefix("fixed:") {
        let j: usize = j.parse().map_err(|_| format!("bad split index in {text:?}"))?;
        return Ok(SplitPolicy::Fixed(j));
    }
    Err(format!("split policy {text:?} is not auto, threshold:H or fixed:J"))
}

/// Run the parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Synth(args) => run_synth(args),
        Command::Zabreak(args) => run_zabreak(args),
        Command::Hurst(args) => run_hurst(args),
    }
}

fn config_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn run_analyze(args: AnalyzeArgs) -> i32 {
    let lag_policy = match parse_lag_policy(&args.lags) {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    let split_policy = match parse_split_policy(&args.split) {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    let mut config = PipelineConfig::new(args.input, args.out);
    config.column = args.column.into();
    config.mode = match args.mode {
        ModeArg::Full => Mode::Full,
        ModeArg::Nobreak => Mode::NoBreak,
    };
    config.trim = args.trim;
    config.lag_policy = lag_policy;
    config.emd.sd_threshold = args.sd;
    config.emd.max_sift_iters = args.max_sift_iters;
    config.emd.max_imfs = args.max_imfs;
    config.split_policy = split_policy;
    config.hurst = HurstOptions { anis_lloyd: args.anis_lloyd };
    config.format = match args.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Both => OutputFormat::Both,
    };
    if args.paper_repro {
        config = config.with_repro_preset();
    }

    let summary = match run_pipeline(&config) {
        Ok(s) => s,
        Err(e) => return config_error(e),
    };
    for file in &summary.files {
        match &file.error {
            Some(e) => println!("FAIL {} ({e})", file.input.display()),
            None => println!(
                "ok   {} ({} files written{})",
                file.input.display(),
                file.written.len(),
                if file.skipped.is_empty() {
                    String::new()
                } else {
                    format!(", {} sub-series skipped", file.skipped.len())
                }
            ),
        }
    }
    if summary.failed() > 0 {
        1
    } else {
        0
    }
}

fn run_synth(args: SynthArgs) -> i32 {
    let kind = match args.kind {
        KindArg::Whitenoise => SynthKind::WhiteNoise,
        KindArg::Randomwalk => SynthKind::RandomWalk,
        KindArg::Fbm => SynthKind::Fbm { h: args.h },
        KindArg::Brokentrend => SynthKind::BrokenTrend {
            break_frac: args.break_frac,
            level_shift: args.level_shift,
            slope_shift: args.slope_shift,
            noise_sd: args.noise_sd,
        },
        KindArg::Tone => SynthKind::Tone { period: args.period },
        KindArg::Chirp => SynthKind::Chirp { f0: args.f0, f1: args.f1 },
    };
    let series = match generate(&SynthSpec { kind, n: args.n, seed: args.seed }) {
        Ok(s) => s,
        Err(e) => return config_error(e),
    };
    let file = match File::create(&args.out) {
        Ok(f) => f,
        Err(e) => return config_error(format_args!("{}: {e}", args.out.display())),
    };
    if let Err(e) = write_series_csv(BufWriter::new(file), &series) {
        eprintln!("error: {e}");
        return 1;
    }
    println!("wrote {} ({} points, {})", args.out.display(), series.len(), series.label());
    0
}

#[derive(serde::Serialize)]
struct ZabreakReport<'a> {
    input: String,
    column: &'static str,
    trim: f64,
    k_used: usize,
    break_index: usize,
    break_date: String,
    min_tstat: f64,
    critical_values: CriticalValues,
    reject_unit_root: LevelFlags,
    candidate_start: usize,
    candidate_tstats: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo_critical_values: Option<CriticalValues>,
}

fn run_zabreak(args: ZabreakArgs) -> i32 {
    let lag_policy = match parse_lag_policy(&args.lags) {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    let stem = args.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let parsed = match File::open(&args.input)
        .map_err(|e| e.to_string())
        .and_then(|f| parse_ohlcv_csv(f, args.column.into(), &stem).map_err(|e| e.to_string()))
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return 1;
        }
    };
    if parsed.dropped_rows > 0 {
        warn!("dropped {} rows", parsed.dropped_rows);
    }
    let result = match za_test(&parsed.series, args.trim, lag_policy) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let mc = match args.mc_cv {
        None => None,
        Some(runs) => {
            match monte_carlo_critical_values(parsed.series.len(), args.trim, runs, 0) {
                Ok(cv) => Some(cv),
                Err(e) => {
                    eprintln!("error: Monte Carlo critical values: {e}");
                    return 1;
                }
            }
        }
    };

    let report = ZabreakReport {
        input: args.input.display().to_string(),
        column: parsed.column_used,
        trim: args.trim,
        k_used: result.k_used,
        break_index: result.break_index,
        break_date: parsed.series.dates()[result.break_index].to_string(),
        min_tstat: result.min_tstat,
        critical_values: result.critical_values,
        reject_unit_root: result.reject_unit_root,
        candidate_start: result.candidate_start,
        candidate_tstats: &result.candidate_tstats,
        monte_carlo_critical_values: mc,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serialization is infallible");
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return 1;
            }
            println!(
                "break at {} ({}), min t = {:.3}; wrote {}",
                report.break_index,
                report.break_date,
                report.min_tstat,
                path.display()
            );
        }
        None => println!("{json}"),
    }
    0
}

fn run_hurst(args: HurstArgs) -> i32 {
    let grid: Option<Vec<usize>> = match &args.grid {
        None => None,
        Some(text) => {
            let parsed: Result<Vec<usize>, _> =
                text.split(',').map(|p| p.trim().parse::<usize>()).collect();
            match parsed {
                Ok(g) if !g.is_empty() => Some(g),
                _ => return config_error(format_args!("bad grid {text:?}")),
            }
        }
    };
    let stem = args.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let parsed = match File::open(&args.input)
        .map_err(|e| e.to_string())
        .and_then(|f| parse_ohlcv_csv(f, args.column.into(), &stem).map_err(|e| e.to_string()))
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return 1;
        }
    };
    let values: Vec<f64> = if args.diff {
        parsed.series.values().windows(2).map(|w| w[1] - w[0]).collect()
    } else {
        parsed.series.values().to_vec()
    };
    let options = HurstOptions { anis_lloyd: args.anis_lloyd };
    let estimate = match hurst_exponent_with(&values, grid.as_deref(), &options) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let (lo, hi) = estimate.two_sigma_band();
    println!(
        "H = {:.4} +/- {:.4} (2 sigma: [{:.4}, {:.4}]), intercept {:.4}, {} grid points",
        estimate.h,
        2.0 * estimate.stderr,
        lo,
        hi,
        estimate.intercept,
        estimate.points.len()
    );
    if let Some(path) = &args.out {
        let file = match File::create(path) {
            Ok(f) => f,
            Err(e) => return config_error(format_args!("{}: {e}", path.display())),
        };
        if let Err(e) = write_rs_cloud_csv(BufWriter::new(file), &estimate) {
            eprintln!("error: {e}");
            return 1;
        }
        println!("wrote {}", path.display());
    }
    0
}
