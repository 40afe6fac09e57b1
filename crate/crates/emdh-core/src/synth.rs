//! Deterministic synthetic series with known ground truth.
//!
//! These generators back the statistical test suites; identical spec and
//! seed always produce bit-identical output, so the pseudo-random pipeline
//! is part of the external contract rather than an implementation detail:
//!
//! - byte stream: ChaCha20 (the RFC 8439 block function as shipped in
//!   `rand_chacha` 0.3), keyed from the `u64` seed by the `rand_core` 0.6
//!   `seed_from_u64` expansion (a PCG32 keystream), zero nonce, block 0;
//! - uniforms: consecutive little-endian `u64` draws mapped into `(0, 1]`
//!   by `u = ((x >> 11) + 1) * 2^-53`;
//! - Gaussians: Box-Muller pairs `z0 = sqrt(-2 ln u1) * cos(2 pi u2)` and
//!   `z1 = sqrt(-2 ln u1) * sin(2 pi u2)`, emitted in order;
//! - fractional Gaussian noise: Davies-Harte circulant embedding (exact
//!   covariance) over a `2n`-point FFT, drawing `2n` Gaussians in the order
//!   `g0 -> W_0`, `g1 -> W_n`, `(g_{2k}, g_{2k+1}) -> W_k` for
//!   `k = 1..n-1`; if the embedding has a negative eigenvalue the Hosking
//!   recursion (Durbin-Levinson) takes over.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::fft::fft;
use crate::series::{Date, TimeSeries};

#[allow(unused_imports)]
use num_traits::Float;

/// First calendar date of every generated series.
pub const SYNTH_START_DATE: Date = Date { year: 2000, month: 1, day: 3 };

/// Deterministic trend slope of [`SynthKind::BrokenTrend`] series.
pub const BROKEN_TREND_BASE_SLOPE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("invalid spec: {0}")]
    InvalidSpec(&'static str),
}

/// Seeded standard-normal stream (ChaCha20 + Box-Muller, see module docs).
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        GaussianStream { rng: ChaCha20Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform draw in `(0, 1]`.
    pub fn next_uniform(&mut self) -> f64 {
        let x = self.rng.next_u64();
        ((x >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * PI * u2;
        self.spare = Some(r * angle.sin());
        r * angle.cos()
    }
}

/// Family of generated processes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SynthKind {
    /// I.i.d. standard Gaussians.
    WhiteNoise,
    /// Cumulative sum of standard Gaussians.
    RandomWalk,
    /// Fractional Brownian motion path with Hurst parameter `h`.
    Fbm { h: f64 },
    /// Trend-stationary series with one break:
    /// `x_t = 0.05 t + level_shift * [t > T_B] + slope_shift * (t - T_B)+ + noise_sd * g_t`
    /// with `T_B = floor(break_frac * n)`.
    BrokenTrend { break_frac: f64, level_shift: f64, slope_shift: f64, noise_sd: f64 },
    /// `sin(2 pi t / period)`.
    Tone { period: f64 },
    /// Sine sweep from `f0` to `f1` cycles/sample over the series.
    Chirp { f0: f64, f1: f64 },
}

/// A fully specified generation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub n: usize,
    pub seed: u64,
}

fn validate(spec: &SynthSpec) -> Result<(), SynthError> {
    if spec.n < 16 {
        return Err(SynthError::InvalidSpec("n must be >= 16"));
    }
    match spec.kind {
        SynthKind::Fbm { h } => {
            if !(h > 0.0 && h < 1.0) {
                return Err(SynthError::InvalidSpec("fbm h must lie in (0, 1)"));
            }
        }
        SynthKind::BrokenTrend { break_frac, level_shift, slope_shift, noise_sd } => {
            if !(break_frac > 0.0 && break_frac < 1.0) {
                return Err(SynthError::InvalidSpec("break_frac must lie in (0, 1)"));
            }
            if !noise_sd.is_finite() || noise_sd < 0.0 {
                return Err(SynthError::InvalidSpec("noise_sd must be finite and >= 0"));
            }
            if !level_shift.is_finite() || !slope_shift.is_finite() {
                return Err(SynthError::InvalidSpec("shifts must be finite"));
            }
        }
        SynthKind::Tone { period } => {
            if !period.is_finite() || period < 2.0 {
                return Err(SynthError::InvalidSpec("tone period must be >= 2 samples"));
            }
        }
        SynthKind::Chirp { f0, f1 } => {
            if !(f0 > 0.0 && f0 <= 0.5 && f1 > 0.0 && f1 <= 0.5) {
                return Err(SynthError::InvalidSpec("chirp frequencies must lie in (0, 0.5]"));
            }
        }
        SynthKind::WhiteNoise | SynthKind::RandomWalk => {}
    }
    Ok(())
}

fn label(spec: &SynthSpec) -> alloc::string::String {
    let SynthSpec { kind, n, seed } = spec;
    match kind {
        SynthKind::WhiteNoise => format!("whitenoise(n={n},seed={seed})"),
        SynthKind::RandomWalk => format!("randomwalk(n={n},seed={seed})"),
        SynthKind::Fbm { h } => format!("fbm(h={h},n={n},seed={seed})"),
        SynthKind::BrokenTrend { break_frac, level_shift, slope_shift, noise_sd } => format!(
            "brokentrend(frac={break_frac},level={level_shift},slope={slope_shift},sd={noise_sd},n={n},seed={seed})"
        ),
        SynthKind::Tone { period } => format!("tone(period={period},n={n},seed={seed})"),
        SynthKind::Chirp { f0, f1 } => format!("chirp(f0={f0},f1={f1},n={n},seed={seed})"),
    }
}

/// Generate the series described by `spec`. Deterministic in `(spec, seed)`.
pub fn generate(spec: &SynthSpec) -> Result<TimeSeries, SynthError> {
    validate(spec)?;
    let n = spec.n;
    let mut stream = GaussianStream::new(spec.seed);
    let values: Vec<f64> = match spec.kind {
        SynthKind::WhiteNoise => (0..n).map(|_| stream.next_gaussian()).collect(),
        SynthKind::RandomWalk => {
            let mut acc = 0.0;
            (0..n)
                .map(|_| {
                    acc += stream.next_gaussian();
                    acc
                })
                .collect()
        }
        SynthKind::Fbm { h } => {
            let fgn = fgn_davies_harte(n, h, &mut stream)
                .unwrap_or_else(|| fgn_hosking(n, h, &mut GaussianStream::new(spec.seed)));
            let mut acc = 0.0;
            fgn.into_iter()
                .map(|g| {
                    acc += g;
                    acc
                })
                .collect()
        }
        SynthKind::BrokenTrend { break_frac, level_shift, slope_shift, noise_sd } => {
            let t_b = libm::floor(break_frac * n as f64) as usize;
            (0..n)
                .map(|t| {
                    let mut x = BROKEN_TREND_BASE_SLOPE * t as f64;
                    if t > t_b {
                        x += level_shift + slope_shift * (t - t_b) as f64;
                    }
                    x + noise_sd * stream.next_gaussian()
                })
                .collect()
        }
        SynthKind::Tone { period } => {
            (0..n).map(|t| (2.0 * PI * t as f64 / period).sin()).collect()
        }
        SynthKind::Chirp { f0, f1 } => (0..n)
            .map(|t| {
                let t = t as f64;
                let phase = 2.0 * PI * (f0 * t + (f1 - f0) * t * t / (2.0 * (n - 1) as f64));
                phase.sin()
            })
            .collect(),
    };
    TimeSeries::from_values(values, SYNTH_START_DATE, label(spec))
        .map_err(|_| SynthError::InvalidSpec("generated series failed validation"))
}

/// Autocovariance of fractional Gaussian noise at lag `k` (unit variance).
fn fgn_autocovariance(k: usize, h: f64) -> f64 {
    let k = k as f64;
    let two_h = 2.0 * h;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
}

/// Exact-covariance fractional Gaussian noise by circulant embedding.
///
/// Returns `None` when the embedding is not nonnegative definite (only
/// possible in corner cases; callers fall back to [`fgn_hosking`]).
pub fn fgn_davies_harte(n: usize, h: f64, stream: &mut GaussianStream) -> Option<Vec<f64>> {
    let m = 2 * n;
    let mut row = Vec::with_capacity(m);
    for k in 0..=n {
        row.push(Complex64::new(fgn_autocovariance(k, h), 0.0));
    }
    for k in (1..n).rev() {
        row.push(row[k]);
    }
    let eigen = fft(&row);
    let max_eig = eigen.iter().fold(0.0f64, |acc, v| acc.max(v.re));
    let mut lambda = Vec::with_capacity(m);
    for v in &eigen {
        if v.re < -1e-8 * max_eig {
            return None;
        }
        lambda.push(v.re.max(0.0));
    }

    let mf = m as f64;
    let mut w = vec![Complex64::ZERO; m];
    w[0] = Complex64::new((lambda[0] / mf).sqrt() * stream.next_gaussian(), 0.0);
    w[n] = Complex64::new((lambda[n] / mf).sqrt() * stream.next_gaussian(), 0.0);
    for k in 1..n {
        let a = stream.next_gaussian();
        let b = stream.next_gaussian();
        let scale = (lambda[k] / (2.0 * mf)).sqrt();
        w[k] = Complex64::new(scale * a, scale * b);
        w[m - k] = Complex64::new(scale * a, -scale * b);
    }
    let z = fft(&w);
    Some(z[..n].iter().map(|v| v.re).collect())
}

/// Fractional Gaussian noise by the Hosking (Durbin-Levinson) recursion.
/// O(n^2); used as the embedding fallback and as a cross-check in tests.
pub fn fgn_hosking(n: usize, h: f64, stream: &mut GaussianStream) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut phi = vec![0.0f64; n];
    let mut prev = vec![0.0f64; n];
    let mut variance = 1.0;
    out.push(stream.next_gaussian());
    for t in 1..n {
        let mut reflection = fgn_autocovariance(t, h);
        for (j, p) in prev.iter().enumerate().take(t - 1) {
            reflection -= p * fgn_autocovariance(t - 1 - j, h);
        }
        reflection /= variance;
        phi[..t - 1].copy_from_slice(&prev[..t - 1]);
        for j in 0..t - 1 {
            phi[j] = prev[j] - reflection * prev[t - 2 - j];
        }
        phi[t - 1] = reflection;
        variance *= 1.0 - reflection * reflection;

        let mut mean = 0.0;
        for j in 0..t {
            mean += phi[j] * out[t - 1 - j];
        }
        out.push(mean + variance.sqrt() * stream.next_gaussian());
        prev[..t].copy_from_slice(&phi[..t]);
    }
    out
}
