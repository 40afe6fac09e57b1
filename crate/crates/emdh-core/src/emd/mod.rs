//! Empirical mode decomposition by envelope sifting.
//!
//! A series is split into intrinsic mode functions (IMFs) by repeatedly
//! subtracting the mean of its upper and lower extrema envelopes until the
//! remainder satisfies the IMF conditions: extrema and zero-crossing counts
//! differ by at most one, and the local envelope mean is close to zero.
//! Extracted IMFs are removed from the running remainder until it no longer
//! oscillates; what is left is the residue (the trend). The decomposition is
//! complete by construction: the IMFs plus the residue sum back to the input
//! up to floating-point rounding.
//!
//! Conventions in this implementation:
//! - envelopes are natural cubic splines through the extrema,
//! - before fitting, the two extrema nearest to each end are mirrored
//!   across the end sample to tame boundary swings (skipped when the end
//!   sample itself is an anchor),
//! - plateau extrema contribute their midpoint index once,
//! - sifting stops when the normalized squared change between successive
//!   candidates drops below `sd_threshold` and the candidate passes both
//!   IMF conditions, or after `max_sift_iters` rounds.

mod spline;

pub use spline::CubicSpline;

use alloc::string::String;
use alloc::vec::Vec;

use crate::series::TimeSeries;

#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmdError {
    #[error("series of length {len} too short (need >= {min})")]
    TooShort { len: usize, min: usize },
    #[error("too few extrema to sift")]
    NoOscillation,
    #[error("fewer than 2 envelope anchors after boundary extension")]
    InsufficientAnchors,
    #[error("IMF index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("invalid config: {0}")]
    InvalidConfig(&'static str),
}

/// Boundary handling for envelope fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Mirror the two extrema nearest to each end across the end sample.
    #[default]
    MirrorExtrema,
}

/// Envelope interpolant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplineKind {
    #[default]
    NaturalCubic,
}

/// Sifting controls.
#[derive(Debug, Clone)]
pub struct EmdConfig {
    /// Stop threshold on SD = sum((h_prev - h)^2) / sum(h_prev^2).
    pub sd_threshold: f64,
    /// Hard cap on sifting rounds per IMF.
    pub max_sift_iters: usize,
    /// Cap on the number of extracted IMFs; `None` runs to extrema
    /// exhaustion.
    pub max_imfs: Option<usize>,
    pub boundary: BoundaryPolicy,
    pub spline: SplineKind,
}

impl Default for EmdConfig {
    fn default() -> Self {
        EmdConfig {
            sd_threshold: 0.2,
            max_sift_iters: 100,
            max_imfs: None,
            boundary: BoundaryPolicy::MirrorExtrema,
            spline: SplineKind::NaturalCubic,
        }
    }
}

impl EmdConfig {
    fn validate(&self) -> Result<(), EmdError> {
        if !self.sd_threshold.is_finite() || self.sd_threshold <= 0.0 {
            return Err(EmdError::InvalidConfig("sd_threshold must be > 0"));
        }
        if self.max_sift_iters < 1 {
            return Err(EmdError::InvalidConfig("max_sift_iters must be >= 1"));
        }
        if self.max_imfs == Some(0) {
            return Err(EmdError::InvalidConfig("max_imfs must be >= 1 when set"));
        }
        Ok(())
    }
}

/// Strict interior extrema of a series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extrema {
    pub maxima: Vec<usize>,
    pub minima: Vec<usize>,
}

impl Extrema {
    pub fn count(&self) -> usize {
        self.maxima.len() + self.minima.len()
    }
}

/// Locate strict local maxima and minima. Runs of equal values that form a
/// local extremum contribute their midpoint index once; endpoints are never
/// extrema.
pub fn find_extrema(values: &[f64]) -> Result<Extrema, EmdError> {
    let n = values.len();
    if n < 3 {
        return Err(EmdError::TooShort { len: n, min: 3 });
    }
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let mut start = 0usize;
    while start < n {
        let mut end = start;
        while end + 1 < n && values[end + 1] == values[start] {
            end += 1;
        }
        if start > 0 && end < n - 1 {
            let v = values[start];
            let prev = values[start - 1];
            let next = values[end + 1];
            let mid = (start + end) / 2;
            if v > prev && v > next {
                maxima.push(mid);
            } else if v < prev && v < next {
                minima.push(mid);
            }
        }
        start = end + 1;
    }
    Ok(Extrema { maxima, minima })
}

/// Count sign changes, ignoring exact zeros (a zero between values of
/// opposite sign counts as one crossing).
pub fn zero_crossings(values: &[f64]) -> usize {
    let mut count = 0usize;
    let mut last = 0i8;
    for &v in values {
        let s = if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Spline envelope through `values[anchors]`, evaluated at every index of
/// the series. Anchors are extended per the boundary policy first; the
/// result is exact at the anchors.
pub fn envelope(
    values: &[f64],
    anchors: &[usize],
    boundary: BoundaryPolicy,
) -> Result<Vec<f64>, EmdError> {
    let n = values.len();
    let BoundaryPolicy::MirrorExtrema = boundary;
    if let Some(&a) = anchors.iter().find(|&&a| a >= n) {
        return Err(EmdError::IndexOutOfRange(a));
    }

    let mut xs: Vec<f64> = Vec::with_capacity(anchors.len() + 4);
    let mut ys: Vec<f64> = Vec::with_capacity(anchors.len() + 4);

    // Left extension: mirror the two anchors nearest to the start across
    // t = 0, unless the start sample is itself an anchor.
    if anchors.first() != Some(&0) {
        for &a in anchors.iter().take(2).rev() {
            xs.push(-(a as f64));
            ys.push(values[a]);
        }
    }
    for &a in anchors {
        xs.push(a as f64);
        ys.push(values[a]);
    }
    if anchors.last() != Some(&(n - 1)) {
        let edge = (n - 1) as f64;
        for &a in anchors.iter().rev().take(2).rev() {
            xs.push(2.0 * edge - a as f64);
            ys.push(values[a]);
        }
    }
    // Mirrored right anchors were appended in original order; reflection
    // reverses ordering, so sort the knots.
    let mut perm: Vec<usize> = (0..xs.len()).collect();
    perm.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let xs: Vec<f64> = perm.iter().map(|&i| xs[i]).collect();
    let ys: Vec<f64> = perm.iter().map(|&i| ys[i]).collect();

    if xs.len() < 2 {
        return Err(EmdError::InsufficientAnchors);
    }
    let spline = CubicSpline::natural(&xs, &ys).ok_or(EmdError::InsufficientAnchors)?;
    Ok((0..n).map(|t| spline.eval(t as f64)).collect())
}

fn mean_envelope_of(
    values: &[f64],
    extrema: &Extrema,
    boundary: BoundaryPolicy,
) -> Result<Vec<f64>, EmdError> {
    let upper = envelope(values, &extrema.maxima, boundary)?;
    let lower = envelope(values, &extrema.minima, boundary)?;
    Ok(upper.iter().zip(&lower).map(|(u, l)| 0.5 * (u + l)).collect())
}

/// Mean of the upper/lower envelopes of `values`, or `None` when there are
/// not enough extrema to fit them. Exposed for diagnostics and validation.
pub fn mean_envelope(values: &[f64]) -> Option<Vec<f64>> {
    let ext = find_extrema(values).ok()?;
    if ext.maxima.len() < 2 || ext.minima.len() < 2 {
        return None;
    }
    mean_envelope_of(values, &ext, BoundaryPolicy::default()).ok()
}

fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// Indices of the interior 90% of `n` samples (5% trimmed at each edge).
pub(crate) fn interior_range(n: usize) -> core::ops::Range<usize> {
    let trim = n / 20;
    trim..n - trim
}

fn imf_count_condition(values: &[f64], extrema: &Extrema) -> bool {
    let zc = zero_crossings(values);
    extrema.count().abs_diff(zc) <= 1
}

fn envelope_mean_is_small(mean: &[f64], h: &[f64]) -> bool {
    let r = interior_range(h.len());
    let m = rms(&mean[r.clone()]);
    let s = rms(&h[r]);
    m <= 0.1 * s
}

/// Extract one IMF from `values` by sifting.
///
/// Iterates `h <- h - mean_envelope(h)` until the normalized change SD
/// falls below the threshold and `h` passes the IMF conditions, or the
/// iteration cap is reached. Returns the IMF and the number of sifting
/// rounds performed.
pub fn sift(values: &[f64], config: &EmdConfig) -> Result<(Vec<f64>, usize), EmdError> {
    config.validate()?;
    let ext = find_extrema(values).map_err(|_| EmdError::NoOscillation)?;
    if ext.maxima.len() < 2 || ext.minima.len() < 2 {
        return Err(EmdError::NoOscillation);
    }

    let mut h = values.to_vec();
    let mut prev_sd = f64::INFINITY;
    let mut iters = 0usize;
    while let Ok(ext) = find_extrema(&h) {
        if ext.maxima.len() < 2 || ext.minima.len() < 2 {
            // Oscillation collapsed mid-sift; keep the current candidate.
            break;
        }
        let mean = mean_envelope_of(&h, &ext, config.boundary)?;
        if iters > 0
            && prev_sd < config.sd_threshold
            && imf_count_condition(&h, &ext)
            && envelope_mean_is_small(&mean, &h)
        {
            break;
        }
        if iters >= config.max_sift_iters {
            break;
        }
        let h_energy: f64 = h.iter().map(|v| v * v).sum();
        let m_energy: f64 = mean.iter().map(|v| v * v).sum();
        for (hi, mi) in h.iter_mut().zip(&mean) {
            *hi -= mi;
        }
        prev_sd = if h_energy > 0.0 { m_energy / h_energy } else { 0.0 };
        iters += 1;
    }
    Ok((h, iters))
}

/// An ordered set of IMFs plus the residue.
///
/// `imfs[0]` carries the fastest oscillation; the residue is what remains
/// once no further IMF can be extracted. For every index `t` the identity
/// `input[t] = sum_i imfs[i][t] + residue[t]` holds up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    imfs: Vec<Vec<f64>>,
    residue: Vec<f64>,
    sift_counts: Vec<usize>,
    source_label: String,
}

impl Decomposition {
    /// Assemble a decomposition from raw parts, checking only the shape
    /// invariants (equal lengths, one sift count per IMF). Useful for
    /// loading exported decompositions and for constructing fixtures.
    pub fn from_parts(
        imfs: Vec<Vec<f64>>,
        residue: Vec<f64>,
        sift_counts: Vec<usize>,
        source_label: impl Into<String>,
    ) -> Result<Self, EmdError> {
        if residue.is_empty() {
            return Err(EmdError::TooShort { len: 0, min: 1 });
        }
        if imfs.iter().any(|imf| imf.len() != residue.len()) {
            return Err(EmdError::InvalidConfig("IMF lengths must match the residue"));
        }
        if sift_counts.len() != imfs.len() {
            return Err(EmdError::InvalidConfig("one sift count per IMF required"));
        }
        Ok(Decomposition { imfs, residue, sift_counts, source_label: source_label.into() })
    }

    pub fn imfs(&self) -> &[Vec<f64>] {
        &self.imfs
    }

    pub fn imf(&self, i: usize) -> Option<&[f64]> {
        self.imfs.get(i).map(|v| v.as_slice())
    }

    pub fn residue(&self) -> &[f64] {
        &self.residue
    }

    pub fn sift_counts(&self) -> &[usize] {
        &self.sift_counts
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn num_imfs(&self) -> usize {
        self.imfs.len()
    }

    /// Length of the decomposed series.
    pub fn len(&self) -> usize {
        self.residue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residue.is_empty()
    }

    /// Largest absolute gap between `original` and the sum of all IMFs plus
    /// residue.
    pub fn max_reconstruction_error(&self, original: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for t in 0..self.len().min(original.len()) {
            let sum: f64 = self.imfs.iter().map(|imf| imf[t]).sum::<f64>() + self.residue[t];
            worst = worst.max((original[t] - sum).abs());
        }
        worst
    }
}

/// Decompose a series into IMFs and a residue.
///
/// IMFs are extracted from successive remainders until the remainder no
/// longer has two maxima and two minima (monotonic or nearly so), or
/// `max_imfs` is reached.
pub fn decompose(series: &TimeSeries, config: &EmdConfig) -> Result<Decomposition, EmdError> {
    decompose_values(series.values(), series.label(), config)
}

/// [`decompose`] over a bare slice; the label is carried into the result.
pub fn decompose_values(
    values: &[f64],
    label: &str,
    config: &EmdConfig,
) -> Result<Decomposition, EmdError> {
    config.validate()?;
    if values.len() < 16 {
        return Err(EmdError::TooShort { len: values.len(), min: 16 });
    }
    // When an IMF captures the remainder exactly, what is left is rounding
    // dust whose oscillation pattern is arbitrary; stop instead of
    // decomposing it.
    let dust_floor = 1e-12 * values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut remainder = values.to_vec();
    let mut imfs: Vec<Vec<f64>> = Vec::new();
    let mut sift_counts = Vec::new();
    loop {
        if let Some(cap) = config.max_imfs {
            if imfs.len() >= cap {
                break;
            }
        }
        if rms(&remainder) <= dust_floor {
            break;
        }
        match find_extrema(&remainder) {
            Ok(e) if e.maxima.len() >= 2 && e.minima.len() >= 2 => {}
            _ => break,
        }
        let (imf, iters) = sift(&remainder, config)?;
        for (r, v) in remainder.iter_mut().zip(&imf) {
            *r -= v;
        }
        imfs.push(imf);
        sift_counts.push(iters);
    }
    Ok(Decomposition { imfs, residue: remainder, sift_counts, source_label: label.into() })
}

/// Pointwise sum of the selected IMFs (0-based indices), plus the residue
/// when requested.
pub fn reconstruct(
    decomp: &Decomposition,
    imf_indices: &[usize],
    include_residue: bool,
) -> Result<Vec<f64>, EmdError> {
    let mut out = alloc::vec![0.0; decomp.len()];
    for &i in imf_indices {
        let imf = decomp.imf(i).ok_or(EmdError::IndexOutOfRange(i))?;
        for (o, v) in out.iter_mut().zip(imf) {
            *o += v;
        }
    }
    if include_residue {
        for (o, v) in out.iter_mut().zip(decomp.residue()) {
            *o += v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Date;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    fn sine(n: usize, period: f64) -> Vec<f64> {
        (0..n).map(|t| (2.0 * PI * t as f64 / period).sin()).collect()
    }

    fn series(values: Vec<f64>) -> TimeSeries {
        TimeSeries::from_values(values, Date::new(2000, 1, 1).unwrap(), "test").unwrap()
    }

    fn pearson(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let mut cov = 0.0;
        let mut va = 0.0;
        let mut vb = 0.0;
        for (x, y) in a.iter().zip(b) {
            cov += (x - ma) * (y - mb);
            va += (x - ma) * (x - ma);
            vb += (y - mb) * (y - mb);
        }
        cov / (va.sqrt() * vb.sqrt())
    }

    #[test]
    fn extrema_by_inspection() {
        let e = find_extrema(&[0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(e.maxima, vec![1, 3]);
        assert_eq!(e.minima, vec![2]);
    }

    #[test]
    fn extrema_of_monotonic_is_empty() {
        let e = find_extrema(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(e.maxima.is_empty());
        assert!(e.minima.is_empty());
    }

    #[test]
    fn extrema_too_short() {
        assert!(matches!(find_extrema(&[1.0, 2.0]), Err(EmdError::TooShort { .. })));
    }

    #[test]
    fn extrema_of_sine_match_analytic_count() {
        // 4 full periods, 64 samples each: 4 maxima, 4 minima, all interior.
        let x = sine(256, 64.0);
        let e = find_extrema(&x).unwrap();
        assert_eq!(e.maxima.len(), 4);
        assert_eq!(e.minima.len(), 4);
        assert_eq!(e.maxima, vec![16, 80, 144, 208]);
    }

    #[test]
    fn plateau_contributes_midpoint_once() {
        let e = find_extrema(&[0.0, 2.0, 2.0, 2.0, 0.0, -1.0, -1.0, 0.0]).unwrap();
        assert_eq!(e.maxima, vec![2]);
        assert_eq!(e.minima, vec![5]);
    }

    #[test]
    fn zero_crossing_count() {
        assert_eq!(zero_crossings(&[1.0, -1.0, 1.0, -1.0]), 3);
        assert_eq!(zero_crossings(&[1.0, 0.0, -1.0]), 1);
        assert_eq!(zero_crossings(&[1.0, 2.0, 3.0]), 0);
        assert_eq!(zero_crossings(&sine(400, 20.0)), 39);
    }

    #[test]
    fn envelope_through_all_points_of_line_is_the_line() {
        let n = 32;
        let line: Vec<f64> = (0..n).map(|t| 2.0 + 0.5 * t as f64).collect();
        let anchors: Vec<usize> = (0..n).collect();
        let env = envelope(&line, &anchors, BoundaryPolicy::MirrorExtrema).unwrap();
        for (e, v) in env.iter().zip(&line) {
            assert_abs_diff_eq!(e, v, epsilon = 1e-9);
        }
    }

    #[test]
    fn envelope_of_two_end_anchors_is_linear() {
        let n = 21;
        let mut vals = alloc::vec![0.0; n];
        vals[0] = 1.0;
        vals[n - 1] = 3.0;
        let env = envelope(&vals, &[0, n - 1], BoundaryPolicy::MirrorExtrema).unwrap();
        for (t, e) in env.iter().enumerate() {
            assert_abs_diff_eq!(*e, 1.0 + 0.1 * t as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn upper_envelope_dominates_sine_interior() {
        let x = sine(256, 64.0);
        let e = find_extrema(&x).unwrap();
        let env = envelope(&x, &e.maxima, BoundaryPolicy::MirrorExtrema).unwrap();
        for t in interior_range(x.len()) {
            assert!(env[t] >= x[t] - 1e-9, "envelope below signal at t={t}");
        }
    }

    #[test]
    fn envelope_needs_anchors() {
        let vals = alloc::vec![0.0; 16];
        assert!(matches!(
            envelope(&vals, &[], BoundaryPolicy::MirrorExtrema),
            Err(EmdError::InsufficientAnchors)
        ));
        assert!(matches!(
            envelope(&vals, &[3, 99], BoundaryPolicy::MirrorExtrema),
            Err(EmdError::IndexOutOfRange(99))
        ));
    }

    #[test]
    fn sift_returns_pure_sine_unchanged() {
        let x = sine(256, 64.0);
        let cfg = EmdConfig::default();
        let (imf, iters) = sift(&x, &cfg).unwrap();
        assert!(iters <= 2, "took {iters} iterations");
        let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in imf.iter().zip(&x) {
            assert!((a - b).abs() <= 1e-6 * scale);
        }
    }

    #[test]
    fn sift_recovers_sine_under_quadratic_trend() {
        let n = 512;
        let fast = sine(n, 32.0);
        let x: Vec<f64> = fast
            .iter()
            .enumerate()
            .map(|(t, v)| {
                let u = (t as f64 - n as f64 / 2.0) / (n as f64);
                v + 8.0 * u * u
            })
            .collect();
        let (imf, _) = sift(&x, &EmdConfig::default()).unwrap();
        let r = interior_range(n);
        assert!(pearson(&imf[r.clone()], &fast[r]) > 0.95);
    }

    #[test]
    fn sift_flat_line_has_no_oscillation() {
        let x = alloc::vec![1.5; 64];
        assert!(matches!(sift(&x, &EmdConfig::default()), Err(EmdError::NoOscillation)));
    }

    #[test]
    fn decompose_ramp_is_pure_residue() {
        let vals: Vec<f64> = (0..64).map(|t| 0.5 * t as f64).collect();
        let d = decompose(&series(vals.clone()), &EmdConfig::default()).unwrap();
        assert_eq!(d.num_imfs(), 0);
        assert_eq!(d.residue(), vals.as_slice());
    }

    #[test]
    fn decompose_separates_two_tones_and_trend() {
        let n = 1024;
        let fast = sine(n, 16.0);
        let slow: Vec<f64> = (0..n).map(|t| 3.0 * (2.0 * PI * t as f64 / 128.0).sin()).collect();
        let trend: Vec<f64> = (0..n).map(|t| 0.01 * t as f64).collect();
        let x: Vec<f64> = (0..n).map(|t| fast[t] + slow[t] + trend[t]).collect();

        let d = decompose(&series(x.clone()), &EmdConfig::default()).unwrap();
        assert!(d.num_imfs() >= 2);
        let r = interior_range(n);
        assert!(pearson(&d.imf(0).unwrap()[r.clone()], &fast[r.clone()]) > 0.9);
        assert!(pearson(&d.imf(1).unwrap()[r.clone()], &slow[r.clone()]) > 0.9);
        // Residue carries the trend.
        assert!(pearson(&d.residue()[r.clone()], &trend[r]) > 0.99);
        assert!(d.max_reconstruction_error(&x) <= 1e-8 * 12.0);
    }

    #[test]
    fn decompose_rejects_short_input() {
        let vals: Vec<f64> = (0..8).map(|t| t as f64).collect();
        let s = TimeSeries::from_values(vals, Date::new(2000, 1, 1).unwrap(), "short").unwrap();
        assert!(matches!(decompose(&s, &EmdConfig::default()), Err(EmdError::TooShort { .. })));
    }

    #[test]
    fn reconstruct_all_parts_restores_input() {
        let n = 512;
        let x: Vec<f64> =
            (0..n).map(|t| (t as f64 * 0.21).sin() + 0.3 * (t as f64 * 0.037).cos()).collect();
        let d = decompose(&series(x.clone()), &EmdConfig::default()).unwrap();
        let all: Vec<usize> = (0..d.num_imfs()).collect();
        let rec = reconstruct(&d, &all, true).unwrap();
        let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in rec.iter().zip(&x) {
            assert!((a - b).abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn reconstruct_empty_selection_is_zero() {
        let x = sine(128, 16.0);
        let d = decompose(&series(x), &EmdConfig::default()).unwrap();
        let rec = reconstruct(&d, &[], false).unwrap();
        assert!(rec.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn reconstruct_rejects_bad_index() {
        let x = sine(128, 16.0);
        let d = decompose(&series(x), &EmdConfig::default()).unwrap();
        let bad = d.num_imfs() + 3;
        assert!(matches!(
            reconstruct(&d, &[bad], false),
            Err(EmdError::IndexOutOfRange(i)) if i == bad
        ));
    }

    #[test]
    fn imf_periods_are_ordered() {
        let n = 2048;
        let x: Vec<f64> = (0..n)
            .map(|t| {
                let t = t as f64;
                (t * 0.9).sin() + (t * 0.21).sin() + 2.0 * (t * 0.04).sin() + 0.002 * t
            })
            .collect();
        let d = decompose(&series(x), &EmdConfig::default()).unwrap();
        let periods: Vec<f64> = d
            .imfs()
            .iter()
            .map(|imf| 2.0 * imf.len() as f64 / zero_crossings(imf).max(1) as f64)
            .collect();
        for w in periods.windows(2) {
            assert!(w[1] >= w[0], "periods not ordered: {periods:?}");
        }
    }

    #[test]
    fn pure_tone_stops_at_one_imf_regardless_of_scale() {
        for scale in [1.0f64, 3.7] {
            let x: Vec<f64> = sine(512, 32.0).iter().map(|v| scale * v).collect();
            let d = decompose(&series(x), &EmdConfig::default()).unwrap();
            assert_eq!(d.num_imfs(), 1, "scale {scale}");
            let dust = d.residue().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(dust <= 1e-10 * scale, "residue magnitude {dust}");
        }
    }

    #[test]
    fn decompose_is_deterministic() {
        let n = 600;
        let x: Vec<f64> = (0..n).map(|t| (t as f64 * 0.37).sin() * (1.0 + t as f64 * 0.001)).collect();
        let s = series(x);
        let a = decompose(&s, &EmdConfig::default()).unwrap();
        let b = decompose(&s, &EmdConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
