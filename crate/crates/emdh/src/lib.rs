//! IO, batch pipeline and CLI for the time-scale separation toolkit.
//!
//! The algorithms live in [`emdh_core`]; this crate adds the Yahoo-style
//! CSV layer, report serialization, the batch orchestration that ties the
//! break test, decomposition, spectral and Hurst stages together, and the
//! `emdh` binary. See the README for the file formats and CLI reference.

pub mod cli;
pub mod csv_io;
pub mod pipeline;

pub use csv_io::{parse_ohlcv_csv, ParsedCsv, PriceColumn};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineSummary};
