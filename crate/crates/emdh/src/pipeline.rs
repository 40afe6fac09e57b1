//! Batch orchestration: parse, break-split, decompose, score, write.
//!
//! Each input file is processed independently (and in parallel): the
//! original series is optionally split at the detected structural break,
//! then every sub-series long enough for the full analysis is decomposed,
//! scored per IMF (time scale, Hurst exponent, normalized variance),
//! classified into short/long-term groups and written out as a report plus
//! plot-ready CSVs. Series too short for a stage degrade gracefully: the
//! break test falls back to no-break mode, and sub-series below the
//! analysis minimum are skipped with a warning instead of failing the
//! batch. Outputs are pure functions of input bytes and configuration, so
//! re-running overwrites files with identical content.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;

use emdh_core::breaktest::{split_at_break, za_test, BreakError, BreakTestResult, LagPolicy};
use emdh_core::emd::{decompose, EmdConfig, EmdError};
use emdh_core::hurst::{hurst_exponent_with, HurstError, HurstEstimate, HurstOptions};
use emdh_core::scale::{
    build_report, normalized_variance, ScaleError, SeriesKind, SplitPolicy,
};
use emdh_core::series::TimeSeries;
use emdh_core::spectral::instantaneous_attributes;
use emdh_core::ScaleReport;

use crate::csv_io::{
    parse_ohlcv_csv, write_decomposition_csv, write_rs_multi_csv, write_scale_table_csv, CsvError,
    PriceColumn,
};

/// Shortest sub-series the full per-IMF analysis accepts (the Hurst auto
/// grid needs 256 points).
pub const MIN_ANALYSIS_LEN: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("no input files")]
    NoInputs,
    #[error("output directory {0}: {1}")]
    OutputDir(PathBuf, std::io::Error),
}

/// Failure analyzing one input or one of its sub-series.
#[derive(Debug, thiserror::Error)]
pub enum SeriesFailure {
    #[error("parse: {0}")]
    Parse(#[from] CsvError),
    #[error("break test: {0}")]
    Break(#[from] BreakError),
    #[error("decomposition: {0}")]
    Decomposition(#[from] EmdError),
    #[error("Hurst estimation: {0}")]
    Hurst(#[from] HurstError),
    #[error("report: {0}")]
    Report(#[from] ScaleError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Break test, then analyze TSO, TSB and TSA.
    #[default]
    Full,
    /// Analyze the original series only.
    NoBreak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Both,
}

/// Everything one batch run needs.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub inputs: Vec<PathBuf>,
    pub column: PriceColumn,
    pub mode: Mode,
    pub trim: f64,
    pub lag_policy: LagPolicy,
    pub emd: EmdConfig,
    pub split_policy: SplitPolicy,
    pub hurst: HurstOptions,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
}

impl PipelineConfig {
    pub fn new(inputs: Vec<PathBuf>, output_dir: PathBuf) -> Self {
        PipelineConfig {
            inputs,
            column: PriceColumn::default(),
            mode: Mode::default(),
            trim: 0.15,
            lag_policy: LagPolicy::TSig { k_max: None },
            emd: EmdConfig::default(),
            split_policy: SplitPolicy::default(),
            hurst: HurstOptions::default(),
            output_dir,
            format: OutputFormat::default(),
        }
    }

    /// The reproduction preset: exactly nine IMFs and a fixed short/long
    /// boundary after IMF5.
    pub fn with_repro_preset(mut self) -> Self {
        self.emd.max_imfs = Some(9);
        self.split_policy = SplitPolicy::Fixed(5);
        self
    }
}

/// Outcome for one input file.
#[derive(Debug)]
pub struct FileOutcome {
    pub input: PathBuf,
    pub written: Vec<PathBuf>,
    /// Sub-series skipped with the reason (e.g. too short to analyze).
    pub skipped: Vec<(SeriesKind, String)>,
    pub error: Option<SeriesFailure>,
}

#[derive(Debug)]
pub struct PipelineSummary {
    pub files: Vec<FileOutcome>,
}

impl PipelineSummary {
    pub fn failed(&self) -> usize {
        self.files.iter().filter(|f| f.error.is_some()).count()
    }
}

/// Run the whole batch. Inputs are processed in parallel; outputs land in
/// `config.output_dir` named `<stem>.<kind>.<what>.<ext>`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineSummary, PipelineError> {
    if config.inputs.is_empty() {
        return Err(PipelineError::NoInputs);
    }
    std::fs::create_dir_all(&config.output_dir)
        .map_err(|e| PipelineError::OutputDir(config.output_dir.clone(), e))?;

    let stems = unique_stems(&config.inputs);
    let files: Vec<FileOutcome> = config
        .inputs
        .par_iter()
        .zip(stems)
        .map(|(path, stem)| analyze_file(config, path, &stem))
        .collect();
    Ok(PipelineSummary { files })
}

/// File stems, disambiguated by position when two inputs share one.
fn unique_stems(inputs: &[PathBuf]) -> Vec<String> {
    let raw: Vec<String> = inputs
        .iter()
        .map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "series".into()))
        .collect();
    raw.iter()
        .enumerate()
        .map(|(i, s)| {
            if raw.iter().filter(|o| *o == s).count() > 1 {
                format!("{s}-{i}")
            } else {
                s.clone()
            }
        })
        .collect()
}

fn analyze_file(config: &PipelineConfig, path: &Path, stem: &str) -> FileOutcome {
    let mut outcome =
        FileOutcome { input: path.to_path_buf(), written: Vec::new(), skipped: Vec::new(), error: None };
    match analyze_file_inner(config, path, stem, &mut outcome) {
        Ok(()) => {}
        Err(e) => {
            warn!("{}: {e}", path.display());
            outcome.error = Some(e);
        }
    }
    outcome
}

fn analyze_file_inner(
    config: &PipelineConfig,
    path: &Path,
    stem: &str,
    outcome: &mut FileOutcome,
) -> Result<(), SeriesFailure> {
    let parsed = parse_ohlcv_csv(File::open(path)?, config.column, stem)?;
    if parsed.dropped_rows > 0 {
        warn!("{}: dropped {} rows with missing or invalid values", path.display(), parsed.dropped_rows);
    }
    info!(
        "{}: {} points from column {:?}",
        path.display(),
        parsed.series.len(),
        parsed.column_used
    );
    let tso = parsed.series;

    let mut jobs: Vec<(SeriesKind, TimeSeries, Option<BreakTestResult>)> = Vec::new();
    match config.mode {
        Mode::NoBreak => jobs.push((SeriesKind::Tso, tso, None)),
        Mode::Full => match za_test(&tso, config.trim, config.lag_policy) {
            Ok(result) => {
                let (tsb, tsa) = split_at_break(&tso, &result)?;
                info!(
                    "{}: break at index {} ({}), min t = {:.3}",
                    path.display(),
                    result.break_index,
                    tso.dates()[result.break_index],
                    result.min_tstat
                );
                jobs.push((SeriesKind::Tso, tso, Some(result)));
                jobs.push((SeriesKind::Tsb, tsb, None));
                jobs.push((SeriesKind::Tsa, tsa, None));
            }
            Err(BreakError::TooShort { len, min }) => {
                warn!(
                    "{}: too short for the break test ({len} < {min}); analyzing without a split",
                    path.display()
                );
                jobs.push((SeriesKind::Tso, tso, None));
            }
            Err(e) => return Err(e.into()),
        },
    }

    for (kind, series, break_info) in jobs {
        if series.len() < MIN_ANALYSIS_LEN {
            let reason = format!(
                "{} points < minimum {MIN_ANALYSIS_LEN}; report omitted",
                series.len()
            );
            warn!("{} [{}]: {reason}", path.display(), kind.as_str());
            outcome.skipped.push((kind, reason));
            continue;
        }
        let written = analyze_kind(config, &series, kind, break_info, stem)?;
        outcome.written.extend(written);
    }
    Ok(())
}

fn analyze_kind(
    config: &PipelineConfig,
    series: &TimeSeries,
    kind: SeriesKind,
    break_info: Option<BreakTestResult>,
    stem: &str,
) -> Result<Vec<PathBuf>, SeriesFailure> {
    let decomp = decompose(series, &config.emd)?;

    let mut periods = Vec::with_capacity(decomp.num_imfs());
    let mut hursts: Vec<HurstEstimate> = Vec::with_capacity(decomp.num_imfs());
    for imf in decomp.imfs() {
        periods.push(instantaneous_attributes(imf, series.dt()).ok().map(|a| a.mean_period_days));
        hursts.push(hurst_exponent_with(imf, None, &config.hurst)?);
    }
    let nv = normalized_variance(&decomp)?;
    let report =
        build_report(&decomp, &periods, &hursts, &nv, break_info, kind, config.split_policy)?;

    let tag = kind.as_str().to_ascii_lowercase();
    let file = |what: &str, ext: &str| {
        config.output_dir.join(format!("{stem}.{tag}.{what}.{ext}"))
    };
    let mut written = Vec::new();

    if matches!(config.format, OutputFormat::Json | OutputFormat::Both) {
        let path = file("report", "json");
        let mut w = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut w, &report).expect("report serialization is infallible");
        w.write_all(b"\n")?;
        w.flush()?;
        written.push(path);
    }
    if matches!(config.format, OutputFormat::Csv | OutputFormat::Both) {
        let path = file("scales", "csv");
        write_scale_table_csv(BufWriter::new(File::create(&path)?), &report)
            .map_err(io_of_csv)?;
        written.push(path);
    }

    let path = file("imfs", "csv");
    write_decomposition_csv(BufWriter::new(File::create(&path)?), &decomp).map_err(io_of_csv)?;
    written.push(path);

    let mut clouds: Vec<(String, &HurstEstimate)> = hursts
        .iter()
        .enumerate()
        .map(|(i, est)| (format!("imf{}", i + 1), est))
        .collect();
    if let Some(est) = report.h_st.as_ref() {
        clouds.push(("x_st".into(), est));
    }
    if let Some(est) = report.h_lt.as_ref() {
        clouds.push(("x_lt".into(), est));
    }
    if let Some(est) = report.h_residue.as_ref() {
        clouds.push(("residue".into(), est));
    }
    let path = file("rs", "csv");
    write_rs_multi_csv(BufWriter::new(File::create(&path)?), &clouds).map_err(io_of_csv)?;
    written.push(path);

    Ok(written)
}

fn io_of_csv(e: CsvError) -> SeriesFailure {
    match e {
        CsvError::Io(io) => SeriesFailure::Io(io),
        other => SeriesFailure::Parse(other),
    }
}

/// Convenience for tests and library callers: analyze one already-parsed
/// series in memory (no files) and return the report.
pub fn analyze_series_report(
    series: &TimeSeries,
    kind: SeriesKind,
    break_info: Option<BreakTestResult>,
    emd: &EmdConfig,
    hurst: &HurstOptions,
    split: SplitPolicy,
) -> Result<ScaleReport, SeriesFailure> {
    let decomp = decompose(series, emd)?;
    let mut periods = Vec::with_capacity(decomp.num_imfs());
    let mut hursts = Vec::with_capacity(decomp.num_imfs());
    for imf in decomp.imfs() {
        periods.push(instantaneous_attributes(imf, series.dt()).ok().map(|a| a.mean_period_days));
        hursts.push(hurst_exponent_with(imf, None, hurst)?);
    }
    let nv = normalized_variance(&decomp)?;
    Ok(build_report(&decomp, &periods, &hursts, &nv, break_info, kind, split)?)
}
