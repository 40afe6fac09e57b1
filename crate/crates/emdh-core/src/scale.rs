//! Normalized-variance IMF ranking, short/long-term classification, and
//! report assembly.
//!
//! `NV_i = sqrt(sum_t IMF_i^2) / sum_j sqrt(sum_t IMF_j^2)` ranks IMFs by
//! their share of root energy (the residue is excluded from the default
//! denominator). The short/long-term boundary is either pinned to a fixed
//! IMF index or found by thresholding the per-IMF Hurst exponents: the
//! short-term group ends just before the first IMF from which every
//! estimate stays at or above the threshold. `X_ST` is the sum of the
//! short-term IMFs; `X_LT` is everything else plus the residue.

use alloc::string::String;
use alloc::vec::Vec;

use crate::breaktest::BreakTestResult;
use crate::emd::{reconstruct, Decomposition};
use crate::hurst::{hurst_exponent, HurstError, HurstEstimate};

#[allow(unused_imports)]
use num_traits::Float;

/// Default Hurst threshold separating the ~0.5 short-term cluster from the
/// >= 0.75 long-term cluster.
pub const DEFAULT_SPLIT_THRESHOLD: f64 = 0.65;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScaleError {
    #[error("every IMF is identically zero")]
    AllZeroImfs,
    #[error("need at least {need} IMFs, got {got}")]
    TooFewImfs { got: usize, need: usize },
    #[error("fixed split index {index} invalid for {imfs} IMFs")]
    InvalidSplit { index: usize, imfs: usize },
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(&'static str),
    #[error("Hurst estimation of a reconstructed component failed: {0}")]
    ReconstructionHurst(#[from] HurstError),
}

/// Root-energy share per IMF; sums to one. The residue is not part of the
/// normalization.
pub fn normalized_variance(decomp: &Decomposition) -> Result<Vec<f64>, ScaleError> {
    root_energy_shares(decomp, false)
}

/// [`normalized_variance`] with the residue folded in as one extra trailing
/// component, for sensitivity analysis.
pub fn normalized_variance_with_residue(decomp: &Decomposition) -> Result<Vec<f64>, ScaleError> {
    root_energy_shares(decomp, true)
}

fn root_energy_shares(decomp: &Decomposition, with_residue: bool) -> Result<Vec<f64>, ScaleError> {
    if decomp.num_imfs() == 0 {
        return Err(ScaleError::TooFewImfs { got: 0, need: 1 });
    }
    let mut roots: Vec<f64> = decomp
        .imfs()
        .iter()
        .map(|imf| imf.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    if with_residue {
        roots.push(decomp.residue().iter().map(|v| v * v).sum::<f64>().sqrt());
    }
    let total: f64 = roots.iter().sum();
    if total == 0.0 {
        return Err(ScaleError::AllZeroImfs);
    }
    Ok(roots.into_iter().map(|r| r / total).collect())
}

/// Where to cut the IMF sequence into short- and long-term groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitPolicy {
    /// The short-term group is IMFs `1..=index` (1-based count).
    Fixed(usize),
    /// Split before the first IMF from which all Hurst estimates stay at or
    /// above the threshold.
    Threshold(f64),
}

impl Default for SplitPolicy {
    fn default() -> Self {
        SplitPolicy::Threshold(DEFAULT_SPLIT_THRESHOLD)
    }
}

/// Classification outcome. `Interior(j)` means the first `j` IMFs are
/// short-term and the rest long-term; the two degenerate outcomes flag
/// series where no interior boundary exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitOutcome {
    Interior(usize),
    /// No IMF (suffix) clears the threshold; the whole series behaves
    /// short-term.
    AllShortTerm,
    /// Every IMF clears the threshold; the whole series behaves long-term.
    AllLongTerm,
}

/// Classify IMFs into short/long-term groups from their Hurst exponents.
pub fn classify_scales(per_imf_h: &[f64], policy: SplitPolicy) -> Result<SplitOutcome, ScaleError> {
    let n = per_imf_h.len();
    if n < 2 {
        return Err(ScaleError::TooFewImfs { got: n, need: 2 });
    }
    match policy {
        SplitPolicy::Fixed(index) => {
            if index == 0 || index >= n {
                return Err(ScaleError::InvalidSplit { index, imfs: n });
            }
            Ok(SplitOutcome::Interior(index))
        }
        SplitPolicy::Threshold(h_star) => {
            let mut first = n;
            for (i, &h) in per_imf_h.iter().enumerate().rev() {
                if h >= h_star {
                    first = i;
                } else {
                    break;
                }
            }
            Ok(match first {
                f if f == n => SplitOutcome::AllShortTerm,
                0 => SplitOutcome::AllLongTerm,
                f => SplitOutcome::Interior(f),
            })
        }
    }
}

/// Which sub-series a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "UPPERCASE")
)]
pub enum SeriesKind {
    /// The original series.
    Tso,
    /// The sub-series before the structural break.
    Tsb,
    /// The sub-series after the structural break.
    Tsa,
}

impl SeriesKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesKind::Tso => "TSO",
            SeriesKind::Tsb => "TSB",
            SeriesKind::Tsa => "TSA",
        }
    }
}

/// How the short/long-term boundary was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum SplitFlag {
    Interior,
    AllShortTerm,
    AllLongTerm,
}

/// Per-IMF row of the report. `index` is 1-based to match the IMF1..IMFk
/// naming used everywhere in the output.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImfScaleRow {
    pub index: usize,
    /// Characteristic time scale in days; absent when the Hilbert estimate
    /// was undefined for this IMF.
    pub tau_days: Option<f64>,
    pub h: f64,
    pub h_stderr: f64,
    pub nv: f64,
}

/// Full per-series scale report.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScaleReport {
    pub label: String,
    pub series_kind: SeriesKind,
    pub per_imf: Vec<ImfScaleRow>,
    /// Number of short-term IMFs (the last short-term IMF, 1-based). Zero
    /// when everything is long-term, the IMF count when everything is
    /// short-term; `split_flag` records which.
    pub split_index: usize,
    pub split_flag: SplitFlag,
    pub h_st: Option<HurstEstimate>,
    pub h_lt: Option<HurstEstimate>,
    pub h_residue: Option<HurstEstimate>,
    pub break_info: Option<BreakTestResult>,
}

/// Assemble the report for one decomposed series.
///
/// `periods` and `hursts` are per-IMF (same order as the decomposition);
/// `h_st`/`h_lt` are estimated here on the reconstructed components that
/// the classification implies. The residue always belongs to the long-term
/// reconstruction.
pub fn build_report(
    decomp: &Decomposition,
    periods: &[Option<f64>],
    hursts: &[HurstEstimate],
    nv: &[f64],
    break_info: Option<BreakTestResult>,
    kind: SeriesKind,
    policy: SplitPolicy,
) -> Result<ScaleReport, ScaleError> {
    let n = decomp.num_imfs();
    if n == 0 {
        return Err(ScaleError::TooFewImfs { got: 0, need: 1 });
    }
    if periods.len() != n {
        return Err(ScaleError::InconsistentInputs("period count != IMF count"));
    }
    if hursts.len() != n {
        return Err(ScaleError::InconsistentInputs("Hurst count != IMF count"));
    }
    if nv.len() != n {
        return Err(ScaleError::InconsistentInputs("NV count != IMF count"));
    }

    let h_values: Vec<f64> = hursts.iter().map(|e| e.h).collect();
    let outcome = classify_scales(&h_values, policy)?;
    let (split_index, split_flag, st_range, lt_range) = match outcome {
        SplitOutcome::Interior(j) => {
            (j, SplitFlag::Interior, Some(0..j), Some(j..n))
        }
        SplitOutcome::AllShortTerm => (n, SplitFlag::AllShortTerm, Some(0..n), None),
        SplitOutcome::AllLongTerm => (0, SplitFlag::AllLongTerm, None, Some(0..n)),
    };

    let estimate = |range: core::ops::Range<usize>, residue: bool| -> Result<HurstEstimate, ScaleError> {
        let indices: Vec<usize> = range.collect();
        let component = reconstruct(decomp, &indices, residue)
            .expect("indices come from the decomposition itself");
        Ok(hurst_exponent(&component, None)?)
    };
    let h_st = st_range.map(|r| estimate(r, false)).transpose()?;
    let h_lt = lt_range.map(|r| estimate(r, true)).transpose()?;
    let h_residue = hurst_exponent(decomp.residue(), None).ok();

    let per_imf = (0..n)
        .map(|i| ImfScaleRow {
            index: i + 1,
            tau_days: periods[i],
            h: hursts[i].h,
            h_stderr: hursts[i].stderr,
            nv: nv[i],
        })
        .collect();

    Ok(ScaleReport {
        label: decomp.source_label().into(),
        series_kind: kind,
        per_imf,
        split_index,
        split_flag,
        h_st,
        h_lt,
        h_residue,
        break_info,
    })
}
