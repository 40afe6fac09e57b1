//! Separation of financial time series into short-term (random) and
//! long-term (persistent) components.
//!
//! The pipeline implemented here works on daily price series and combines
//! four classical tools:
//!
//! 1. a Zivot-Andrews model-C unit-root test that locates a single
//!    endogenous structural break and splits the series around it
//!    ([`breaktest`]),
//! 2. empirical mode decomposition into intrinsic mode functions
//!    ([`emd`]),
//! 3. Hilbert-transform time-scale estimation per IMF ([`spectral`]),
//! 4. rescaled-range Hurst exponents per IMF and per reconstructed
//!    component ([`hurst`]), plus normalized-variance IMF ranking and
//!    short/long-term classification ([`scale`]).
//!
//! The crate is `no_std` + `alloc` compatible (disable the default `std`
//! feature); all operations are pure functions over immutable inputs and
//! safe to run in parallel from the caller's side. The `parallel` feature
//! additionally fans the break-candidate scan out over a thread pool with
//! a deterministic reduction, and `serde` derives serialization for the
//! report types. Deterministic synthetic generators with pinned RNG
//! semantics live in [`synth`] and back the statistical test suites.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod breaktest;
pub mod emd;
pub mod fft;
pub mod hurst;
pub mod ols;
pub mod scale;
pub mod series;
pub mod spectral;
pub mod synth;

pub use breaktest::{za_test, BreakTestResult};
pub use emd::{decompose, Decomposition, EmdConfig};
pub use hurst::{hurst_exponent, HurstEstimate};
pub use scale::ScaleReport;
pub use series::TimeSeries;
