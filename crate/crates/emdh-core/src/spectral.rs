//! Analytic-signal time-scale estimation.
//!
//! Each IMF is close to a mono-frequency component, so its characteristic
//! time scale is read off the instantaneous frequency of the analytic
//! signal: `z = x + i*H[x]` with `H` the Hilbert transform, phase
//! `theta = atan2(im, re)`, frequency `omega = d theta / dt`. Frequencies
//! are reported in cycles/day so the time scale is `tau = 1/omega` in days.
//!
//! Averaging conventions: the mean frequency is energy-weighted (squared
//! envelope amplitude) and taken over the interior 90% of samples, since
//! the discrete Hilbert transform distorts both edges. A zero-crossing
//! period estimate is carried alongside as a cross-check.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::emd::{interior_range, zero_crossings};
use crate::fft::{fft, ifft};

#[allow(unused_imports)]
use num_traits::Float;

/// Magnitude below which the phase (and hence frequency) is undefined.
pub const ZERO_MAGNITUDE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error("series of length {len} too short (need >= {min})")]
    TooShort { len: usize, min: usize },
    #[error("value at index {0} is not finite")]
    NonFinite(usize),
    #[error("fewer than 2 zero crossings; no oscillation to time")]
    NoOscillation,
    #[error("instantaneous frequency undefined over the averaging window")]
    DegenerateFrequency,
}

/// Analytic signal via the discrete-Fourier method: zero the negative
/// frequency bins, double the positive ones, keep DC (and Nyquist for even
/// lengths). The real part reproduces the input to rounding.
pub fn analytic_signal(values: &[f64]) -> Result<Vec<Complex64>, SpectralError> {
    let n = values.len();
    if n < 8 {
        return Err(SpectralError::TooShort { len: n, min: 8 });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(SpectralError::NonFinite(i));
    }
    let time: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut spec = fft(&time);
    let half = n / 2;
    for (k, bin) in spec.iter_mut().enumerate() {
        if k == 0 || (n.is_multiple_of(2) && k == half) {
            // keep as is
        } else if k < half || (!n.is_multiple_of(2) && k == half) {
            *bin *= 2.0;
        } else {
            *bin = Complex64::ZERO;
        }
    }
    Ok(ifft(&spec))
}

/// Instantaneous frequency samples in cycles per day.
#[derive(Debug, Clone, PartialEq)]
pub struct InstantaneousFrequency {
    /// One value per sample; NaN where the magnitude was below
    /// [`ZERO_MAGNITUDE`].
    pub cycles_per_day: Vec<f64>,
    /// Indices with undefined frequency, excluded from averages.
    pub undefined: Vec<usize>,
}

/// Unwrap `2*pi` jumps out of a phase sequence.
pub fn unwrap_phase(phase: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phase.len());
    let mut offset = 0.0;
    for (i, &p) in phase.iter().enumerate() {
        if i == 0 {
            out.push(p);
            continue;
        }
        let mut d = p - phase[i - 1];
        while d > PI {
            d -= 2.0 * PI;
            offset -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
            offset += 2.0 * PI;
        }
        out.push(p + offset);
    }
    out
}

/// Phase-derivative frequency estimate: unwrapped `atan2` phase, central
/// differences inside, one-sided at the ends, converted from radians/day
/// to cycles/day.
pub fn instantaneous_frequency(analytic: &[Complex64], dt: f64) -> InstantaneousFrequency {
    let n = analytic.len();
    let mut undefined = Vec::new();
    let mut raw_phase = Vec::with_capacity(n);
    let mut last = 0.0;
    for (i, z) in analytic.iter().enumerate() {
        if z.norm() < ZERO_MAGNITUDE {
            undefined.push(i);
            // Carry the last defined phase so unwrapping stays continuous.
            raw_phase.push(last);
        } else {
            last = z.im.atan2(z.re);
            raw_phase.push(last);
        }
    }
    let phase = unwrap_phase(&raw_phase);

    let mut omega = Vec::with_capacity(n);
    if n < 3 {
        omega.resize(n, f64::NAN);
        return InstantaneousFrequency { cycles_per_day: omega, undefined };
    }
    let scale = 1.0 / (2.0 * PI * dt);
    for i in 0..n {
        let radians = if i == 0 {
            phase[1] - phase[0]
        } else if i == n - 1 {
            phase[n - 1] - phase[n - 2]
        } else {
            (phase[i + 1] - phase[i - 1]) / 2.0
        };
        omega.push(radians * scale);
    }
    for &i in &undefined {
        omega[i] = f64::NAN;
    }
    InstantaneousFrequency { cycles_per_day: omega, undefined }
}

/// Phase, frequency, and characteristic period of one IMF.
#[derive(Debug, Clone, PartialEq)]
pub struct InstantaneousAttributes {
    /// Unwrapped phase in radians.
    pub phase: Vec<f64>,
    /// Instantaneous frequency in cycles/day (NaN where undefined).
    pub omega: Vec<f64>,
    /// Energy-weighted mean period in days, `tau = 1 / mean(omega)`.
    pub mean_period_days: f64,
    /// Cross-check period from the zero-crossing count.
    pub zero_crossing_period_days: f64,
}

/// Characteristic time scale of an oscillatory IMF, in days.
///
/// `tau = 1 / omega_bar` where `omega_bar` is the amplitude-squared-weighted
/// mean instantaneous frequency over the interior 90% of samples.
pub fn mean_period(imf: &[f64], dt: f64) -> Result<f64, SpectralError> {
    Ok(instantaneous_attributes(imf, dt)?.mean_period_days)
}

/// Cross-check period: two samples per oscillation, `2 * span / crossings`.
pub fn mean_period_zero_crossing(imf: &[f64], dt: f64) -> Result<f64, SpectralError> {
    let zc = zero_crossings(imf);
    if zc < 2 {
        return Err(SpectralError::NoOscillation);
    }
    Ok(2.0 * imf.len() as f64 * dt / zc as f64)
}

/// Full Hilbert attributes of one IMF.
pub fn instantaneous_attributes(
    imf: &[f64],
    dt: f64,
) -> Result<InstantaneousAttributes, SpectralError> {
    let zc_period = mean_period_zero_crossing(imf, dt)?;
    let analytic = analytic_signal(imf)?;
    let freq = instantaneous_frequency(&analytic, dt);

    let mut weighted = 0.0;
    let mut weight = 0.0;
    for i in interior_range(imf.len()) {
        let omega = freq.cycles_per_day[i];
        if omega.is_nan() {
            continue;
        }
        let w = analytic[i].norm_sqr();
        weighted += w * omega;
        weight += w;
    }
    if weight <= 0.0 {
        return Err(SpectralError::DegenerateFrequency);
    }
    let omega_bar = weighted / weight;
    if !omega_bar.is_finite() || omega_bar <= 0.0 {
        return Err(SpectralError::DegenerateFrequency);
    }

    let phase = unwrap_phase(
        &analytic
            .iter()
            .map(|z| if z.norm() < ZERO_MAGNITUDE { 0.0 } else { z.im.atan2(z.re) })
            .collect::<Vec<_>>(),
    );
    Ok(InstantaneousAttributes {
        phase,
        omega: freq.cycles_per_day,
        mean_period_days: 1.0 / omega_bar,
        zero_crossing_period_days: zc_period,
    })
}
