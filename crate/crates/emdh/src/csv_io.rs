//! Yahoo-style OHLCV CSV ingestion and the CSV export formats.
//!
//! Input schema: `Date,Open,High,Low,Close,Adj Close,Volume` with ISO
//! dates, comma separation and a header row. Rows with missing, `null` or
//! unparseable numeric fields are dropped (counted, never interpolated);
//! unparseable dates abort the parse. Remaining rows are sorted by date and
//! indexed by trading day. Exports round-trip through Rust's shortest
//! float formatting, so written values re-parse bit-exactly.

use std::io::{Read, Write};

use emdh_core::emd::Decomposition;
use emdh_core::hurst::HurstEstimate;
use emdh_core::series::{Date, SeriesError, TimeSeries};

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error("input has no {0} column")]
    MissingColumn(String),
    #[error("no valid data rows")]
    NoValidRows,
    #[error("unparseable date {text:?} at data row {row}")]
    UnparseableDate { row: usize, text: String },
    #[error(transparent)]
    Malformed(#[from] csv::Error),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which price column feeds the analysis. `Auto` prefers `Adj Close` and
/// falls back to `Close`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriceColumn {
    #[default]
    Auto,
    Close,
    AdjClose,
    Open,
    High,
    Low,
}

impl PriceColumn {
    fn header_name(&self) -> Option<&'static str> {
        match self {
            PriceColumn::Auto => None,
            PriceColumn::Close => Some("Close"),
            PriceColumn::AdjClose => Some("Adj Close"),
            PriceColumn::Open => Some("Open"),
            PriceColumn::High => Some("High"),
            PriceColumn::Low => Some("Low"),
        }
    }
}

/// Parse result: the validated series plus ingestion diagnostics.
#[derive(Debug, Clone)]
pub struct ParsedCsv {
    pub series: TimeSeries,
    /// Rows dropped for missing/unparseable values or duplicate dates.
    pub dropped_rows: usize,
    /// Header of the column actually used.
    pub column_used: &'static str,
}

fn find_header(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name))
}

/// Parse an OHLCV CSV stream into a trading-day series labelled `label`.
pub fn parse_ohlcv_csv<R: Read>(
    reader: R,
    column: PriceColumn,
    label: &str,
) -> Result<ParsedCsv, CsvError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let date_idx =
        find_header(&headers, "Date").ok_or_else(|| CsvError::MissingColumn("Date".into()))?;
    let (value_idx, column_used) = match column.header_name() {
        Some(name) => {
            (find_header(&headers, name).ok_or_else(|| CsvError::MissingColumn(name.into()))?, name)
        }
        None => {
            if let Some(i) = find_header(&headers, "Adj Close") {
                (i, "Adj Close")
            } else if let Some(i) = find_header(&headers, "Close") {
                (i, "Close")
            } else {
                return Err(CsvError::MissingColumn("Adj Close or Close".into()));
            }
        }
    };

    let mut rows: Vec<(Date, f64)> = Vec::new();
    let mut dropped = 0usize;
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let date_text = record.get(date_idx).unwrap_or("").trim();
        let date = Date::parse_iso(date_text)
            .ok_or_else(|| CsvError::UnparseableDate { row, text: date_text.into() })?;
        let raw = record.get(value_idx).map(str::trim).unwrap_or("");
        if raw.is_empty() || raw.eq_ignore_ascii_case("null") {
            dropped += 1;
            continue;
        }
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => rows.push((date, v)),
            _ => dropped += 1,
        }
    }
    if rows.is_empty() {
        return Err(CsvError::NoValidRows);
    }

    rows.sort_by_key(|(d, _)| *d);
    let mut values = Vec::with_capacity(rows.len());
    let mut dates = Vec::with_capacity(rows.len());
    for (d, v) in rows {
        if dates.last() == Some(&d) {
            dropped += 1; // duplicate date: keep the first occurrence
            continue;
        }
        dates.push(d);
        values.push(v);
    }

    let series = TimeSeries::new(values, dates, label)?;
    Ok(ParsedCsv { series, dropped_rows: dropped, column_used })
}

/// Write a series in the same OHLCV schema the parser reads (all price
/// columns carry the value; volume is zero).
pub fn write_series_csv<W: Write>(mut w: W, series: &TimeSeries) -> Result<(), CsvError> {
    writeln!(w, "Date,Open,High,Low,Close,Adj Close,Volume")?;
    for (date, v) in series.dates().iter().zip(series.values()) {
        writeln!(w, "{date},{v},{v},{v},{v},{v},0")?;
    }
    Ok(())
}

/// Decomposition export: `t,imf1..imfK,residue`.
pub fn write_decomposition_csv<W: Write>(mut w: W, decomp: &Decomposition) -> Result<(), CsvError> {
    write!(w, "t")?;
    for i in 1..=decomp.num_imfs() {
        write!(w, ",imf{i}")?;
    }
    writeln!(w, ",residue")?;
    for t in 0..decomp.len() {
        write!(w, "{t}")?;
        for imf in decomp.imfs() {
            write!(w, ",{}", imf[t])?;
        }
        writeln!(w, ",{}", decomp.residue()[t])?;
    }
    Ok(())
}

/// One regression cloud as `ln_n,ln_rs` rows.
pub fn write_rs_cloud_csv<W: Write>(mut w: W, estimate: &HurstEstimate) -> Result<(), CsvError> {
    writeln!(w, "ln_n,ln_rs")?;
    for p in &estimate.points {
        writeln!(w, "{},{}", (p.n as f64).ln(), p.rs.ln())?;
    }
    Ok(())
}

/// Several named clouds in one file: `component,ln_n,ln_rs`.
pub fn write_rs_multi_csv<W: Write>(
    mut w: W,
    clouds: &[(String, &HurstEstimate)],
) -> Result<(), CsvError> {
    writeln!(w, "component,ln_n,ln_rs")?;
    for (name, est) in clouds {
        for p in &est.points {
            writeln!(w, "{name},{},{}", (p.n as f64).ln(), p.rs.ln())?;
        }
    }
    Ok(())
}

/// Per-IMF scale table: `index,tau_days,h,h_stderr,nv`.
pub fn write_scale_table_csv<W: Write>(
    mut w: W,
    report: &emdh_core::ScaleReport,
) -> Result<(), CsvError> {
    writeln!(w, "index,tau_days,h,h_stderr,nv")?;
    for row in &report.per_imf {
        let tau = row.tau_days.map(|t| t.to_string()).unwrap_or_default();
        writeln!(w, "{},{tau},{},{},{}", row.index, row.h, row.h_stderr, row.nv)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_row_close_column() {
        let text = "Date,Open,High,Low,Close,Adj Close,Volume\n\
            2020-01-02,9,11,8,10,9.5,100\n\
            2020-01-03,10,12,9,11,10.4,100\n\
            2020-01-06,11,13,10,12,11.3,100\n";
        let parsed = parse_ohlcv_csv(text.as_bytes(), PriceColumn::Close, "x").unwrap();
        assert_eq!(parsed.series.values(), &[10.0, 11.0, 12.0]);
        assert_eq!(parsed.series.dt(), 1.0);
        assert_eq!(parsed.dropped_rows, 0);
        assert_eq!(parsed.column_used, "Close");
    }

    #[test]
    fn auto_prefers_adjusted_close() {
        let text = "Date,Close,Adj Close\n2020-01-02,10,9.5\n2020-01-03,11,10.4\n";
        let parsed = parse_ohlcv_csv(text.as_bytes(), PriceColumn::Auto, "x").unwrap();
        assert_eq!(parsed.column_used, "Adj Close");
        assert_eq!(parsed.series.values(), &[9.5, 10.4]);

        let text = "Date,Close\n2020-01-02,10\n2020-01-03,11\n";
        let parsed = parse_ohlcv_csv(text.as_bytes(), PriceColumn::Auto, "x").unwrap();
        assert_eq!(parsed.column_used, "Close");
    }

    #[test]
    fn null_rows_are_dropped_and_counted() {
        let text = "Date,Close\n\
            2020-01-02,10\n\
            2020-01-03,null\n\
            2020-01-06,12\n\
            2020-01-07,13\n\
            2020-01-08,14\n";
        let parsed = parse_ohlcv_csv(text.as_bytes(), PriceColumn::Close, "x").unwrap();
        assert_eq!(parsed.series.len(), 4);
        assert_eq!(parsed.dropped_rows, 1);
        assert!(parsed.series.dates().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn unsorted_rows_are_sorted_and_duplicates_dropped() {
        let text = "Date,Close\n\
            2020-01-06,12\n\
            2020-01-02,10\n\
            2020-01-03,11\n\
            2020-01-03,99\n";
        let parsed = parse_ohlcv_csv(text.as_bytes(), PriceColumn::Close, "x").unwrap();
        assert_eq!(parsed.series.values(), &[10.0, 11.0, 12.0]);
        assert_eq!(parsed.dropped_rows, 1);
    }

    #[test]
    fn missing_column_and_bad_date_are_errors() {
        let text = "Date,Open\n2020-01-02,10\n";
        assert!(matches!(
            parse_ohlcv_csv(text.as_bytes(), PriceColumn::Close, "x"),
            Err(CsvError::MissingColumn(_))
        ));
        let text = "Date,Close\n02/01/2020,10\n";
        assert!(matches!(
            parse_ohlcv_csv(text.as_bytes(), PriceColumn::Close, "x"),
            Err(CsvError::UnparseableDate { row: 1, .. })
        ));
        let text = "Date,Close\n2020-01-02,null\n";
        assert!(matches!(
            parse_ohlcv_csv(text.as_bytes(), PriceColumn::Close, "x"),
            Err(CsvError::NoValidRows)
        ));
    }

    #[test]
    fn decomposition_export_shape() {
        let imfs = vec![vec![1.0, 2.0, 3.0], vec![0.5, 0.25, 0.125]];
        let d = Decomposition::from_parts(imfs, vec![7.0, 8.0, 9.0], vec![1, 1], "d").unwrap();
        let mut out = Vec::new();
        write_decomposition_csv(&mut out, &d).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,imf1,imf2,residue");
        assert_eq!(lines.next().unwrap(), "0,1,0.5,7");
        assert_eq!(lines.next().unwrap(), "1,2,0.25,8");
    }
}
