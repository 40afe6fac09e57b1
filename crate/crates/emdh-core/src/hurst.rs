//! Rescaled-range (R/S) Hurst exponent estimation.
//!
//! A series of length `N` is cut into `P = floor(N/n)` subperiods of length
//! `n` (trailing remainder dropped). Within each subperiod the cumulative
//! departures from the subperiod mean are ranged and rescaled by the
//! population standard deviation; the per-`n` statistic is the mean of
//! `R/S` over subperiods. Regressing `ln(R/S_n)` on `ln(n)` over a grid of
//! window sizes gives the Hurst exponent as the slope: ~0.5 for random
//! series, above for persistent, below for anti-persistent.
//!
//! The raw statistic is biased upward for small `n`; the optional
//! Anis-Lloyd correction (with Peters' finite-sample factor) regresses the
//! deviation from the expected null value instead and re-centres at 0.5.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HurstError {
    #[error("series of length {len} too short (need >= {min})")]
    TooShort { len: usize, min: usize },
    #[error("window {n} invalid for series of length {len}")]
    InvalidWindow { n: usize, len: usize },
    #[error("all subperiods have zero dispersion")]
    DegenerateSeries,
    #[error("only {got} usable grid points (need >= {need})")]
    InsufficientPoints { got: usize, need: usize },
}

/// One point of the log-log regression cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RescaledRangePoint {
    /// Subperiod length.
    pub n: usize,
    /// Mean R/S over the subperiods of that length.
    pub rs: f64,
}

/// Hurst exponent with its regression diagnostics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HurstEstimate {
    /// Slope of ln(R/S) on ln(n).
    pub h: f64,
    /// OLS standard error of the slope.
    pub stderr: f64,
    /// Regression intercept, `ln c` in `R/S_n = c * n^H`.
    pub intercept: f64,
    /// The point cloud behind the fit.
    pub points: Vec<RescaledRangePoint>,
}

impl HurstEstimate {
    /// `h +/- 2 * stderr`, the band used when reporting estimates.
    pub fn two_sigma_band(&self) -> (f64, f64) {
        (self.h - 2.0 * self.stderr, self.h + 2.0 * self.stderr)
    }
}

/// A subperiod counts as flat (skipped) when its standard deviation
/// vanishes relative to its mean level.
fn is_flat(s: f64, mu: f64) -> bool {
    s == 0.0 || s <= mu.abs() * 1e-12
}

/// Mean rescaled range over the subperiods of length `n`.
///
/// Exact transcription of the R/S recipe: per subperiod mean, population
/// standard deviation (divisor `n`), cumulative departures, range
/// `max - min`, rescaled by the standard deviation. Flat subperiods carry
/// no information and are skipped.
pub fn rescaled_range(values: &[f64], n: usize) -> Result<f64, HurstError> {
    if n < 8 {
        return Err(HurstError::InvalidWindow { n, len: values.len() });
    }
    let p = values.len() / n;
    if p < 1 {
        return Err(HurstError::InvalidWindow { n, len: values.len() });
    }
    let mut sum = 0.0;
    let mut used = 0usize;
    for m in 0..p {
        let window = &values[m * n..(m + 1) * n];
        let mu = window.iter().sum::<f64>() / n as f64;
        let var = window.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n as f64;
        let s = var.sqrt();
        if is_flat(s, mu) {
            continue;
        }
        let mut cum = 0.0;
        let mut y_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        for &v in window {
            cum += v - mu;
            y_max = y_max.max(cum);
            y_min = y_min.min(cum);
        }
        sum += (y_max - y_min) / s;
        used += 1;
    }
    if used == 0 {
        return Err(HurstError::DegenerateSeries);
    }
    Ok(sum / used as f64)
}

/// Default window grid: ~12 sizes log-spaced in `[16, len/4]`.
pub fn auto_lag_grid(len: usize) -> Vec<usize> {
    const COUNT: usize = 12;
    let lo = 16.0f64;
    let hi = (len / 4) as f64;
    let mut grid: Vec<usize> = Vec::with_capacity(COUNT);
    for i in 0..COUNT {
        let x = lo * (hi / lo).powf(i as f64 / (COUNT - 1) as f64);
        let n = libm::round(x) as usize;
        if grid.last() != Some(&n) {
            grid.push(n);
        }
    }
    grid
}

/// Estimator options.
#[derive(Debug, Clone, Copy, Default)]
pub struct HurstOptions {
    /// Apply the Anis-Lloyd/Peters small-sample correction.
    pub anis_lloyd: bool,
}

/// Expected R/S of an i.i.d. Gaussian series at window size `n`
/// (Anis-Lloyd with Peters' finite-sample factor).
pub fn anis_lloyd_expected_rs(n: usize) -> f64 {
    let nf = n as f64;
    let sum: f64 = (1..n).map(|i| ((nf - i as f64) / i as f64).sqrt()).sum();
    let front = if n <= 340 {
        libm::exp(libm::lgamma((nf - 1.0) / 2.0) - libm::lgamma(nf / 2.0))
            / libm::sqrt(core::f64::consts::PI)
    } else {
        1.0 / libm::sqrt(nf * core::f64::consts::PI / 2.0)
    };
    (nf - 0.5) / nf * front * sum
}

/// Hurst exponent from the slope of `ln(R/S_n)` on `ln(n)`.
///
/// `grid = None` uses [`auto_lag_grid`] and requires at least 256 points;
/// an explicit grid must satisfy `8 <= n <= len/2` per window. At least 4
/// usable grid points are required.
pub fn hurst_exponent(values: &[f64], grid: Option<&[usize]>) -> Result<HurstEstimate, HurstError> {
    hurst_exponent_with(values, grid, &HurstOptions::default())
}

/// [`hurst_exponent`] with explicit [`HurstOptions`].
pub fn hurst_exponent_with(
    values: &[f64],
    grid: Option<&[usize]>,
    options: &HurstOptions,
) -> Result<HurstEstimate, HurstError> {
    let len = values.len();
    let grid: Vec<usize> = match grid {
        Some(g) => {
            for &n in g {
                if n < 8 || n > len / 2 {
                    return Err(HurstError::InvalidWindow { n, len });
                }
            }
            let mut g = g.to_vec();
            g.sort_unstable();
            g.dedup();
            g
        }
        None => {
            if len < 256 {
                return Err(HurstError::TooShort { len, min: 256 });
            }
            auto_lag_grid(len)
        }
    };

    let mut points = Vec::with_capacity(grid.len());
    let mut degenerate = 0usize;
    for &n in &grid {
        match rescaled_range(values, n) {
            Ok(rs) => points.push(RescaledRangePoint { n, rs }),
            Err(HurstError::DegenerateSeries) => degenerate += 1,
            Err(e) => return Err(e),
        }
    }
    if points.is_empty() && degenerate > 0 {
        return Err(HurstError::DegenerateSeries);
    }
    hurst_from_points(points, options)
}

/// Fit the log-log regression over an existing point cloud (e.g. one
/// loaded back from an exported CSV).
pub fn hurst_from_points(
    points: Vec<RescaledRangePoint>,
    options: &HurstOptions,
) -> Result<HurstEstimate, HurstError> {
    if points.len() < 4 {
        return Err(HurstError::InsufficientPoints { got: points.len(), need: 4 });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points
        .iter()
        .map(|p| {
            if options.anis_lloyd {
                p.rs.ln() - anis_lloyd_expected_rs(p.n).ln()
            } else {
                p.rs.ln()
            }
        })
        .collect();
    let (slope, intercept, stderr) = linfit(&xs, &ys);
    let h = if options.anis_lloyd { 0.5 + slope } else { slope };
    Ok(HurstEstimate { h, stderr, intercept, points })
}

/// OLS line fit returning (slope, intercept, slope standard error).
fn linfit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let m = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / m;
    let mean_y = ys.iter().sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let dof = (xs.len() - 2).max(1) as f64;
    let stderr = (ssr / dof / sxx).sqrt();
    (slope, intercept, stderr)
}
