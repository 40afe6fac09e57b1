//! Uniformly sampled trading-day series.
//!
//! All downstream analysis treats daily closes as evenly spaced: the time
//! axis is the trading-day index `t = 0, 1, 2, ...` with `dt` fixed at one
//! day. Calendar dates are carried along as provenance so break points and
//! sub-series can be labelled in reports, but they never enter the math.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Calendar date with ISO-8601 ordering and `YYYY-MM-DD` display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Date {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

impl Date {
    pub const fn new(year: i32, month: u8, day: u8) -> Option<Self> {
        if month < 1 || month > 12 {
            return None;
        }
        let d = Date { year, month, day };
        if day < 1 || day > d.days_in_month() {
            return None;
        }
        Some(d)
    }

    /// Parse a `YYYY-MM-DD` string. Rejects impossible dates (e.g. Feb 30).
    pub fn parse_iso(s: &str) -> Option<Self> {
        let mut parts = s.trim().splitn(3, '-');
        let year: i32 = parts.next()?.parse().ok()?;
        let month: u8 = parts.next()?.parse().ok()?;
        let day: u8 = parts.next()?.parse().ok()?;
        Date::new(year, month, day)
    }

    const fn is_leap_year(&self) -> bool {
        (self.year % 4 == 0 && self.year % 100 != 0) || self.year % 400 == 0
    }

    const fn days_in_month(&self) -> u8 {
        match self.month {
            1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
            4 | 6 | 9 | 11 => 30,
            2 => {
                if self.is_leap_year() {
                    29
                } else {
                    28
                }
            }
            _ => 0,
        }
    }

    /// The next calendar day.
    pub fn succ(&self) -> Date {
        if self.day < self.days_in_month() {
            Date { day: self.day + 1, ..*self }
        } else if self.month < 12 {
            Date { year: self.year, month: self.month + 1, day: 1 }
        } else {
            Date { year: self.year + 1, month: 1, day: 1 }
        }
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Date {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Date {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = <alloc::borrow::Cow<'de, str>>::deserialize(deserializer)?;
        Date::parse_iso(&s).ok_or_else(|| serde::de::Error::custom("expected YYYY-MM-DD date"))
    }
}

/// Errors raised when constructing or slicing a [`TimeSeries`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series needs at least 2 points, got {0}")]
    TooShort(usize),
    #[error("value at index {0} is not finite")]
    NonFinite(usize),
    #[error("{values} values vs {dates} dates")]
    LengthMismatch { values: usize, dates: usize },
    #[error("dates not strictly increasing at index {0}")]
    NonIncreasingDates(usize),
    #[error("slice [{start}, {end}) out of range for length {len}")]
    OutOfRange { start: usize, end: usize, len: usize },
}

/// A validated daily price series on the trading-day index.
///
/// Invariants (enforced at construction, never violated afterwards):
/// length >= 2, all values finite, dates strictly increasing, one date per
/// value.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    dates: Vec<Date>,
    label: String,
}

impl TimeSeries {
    pub fn new(
        values: Vec<f64>,
        dates: Vec<Date>,
        label: impl Into<String>,
    ) -> Result<Self, SeriesError> {
        if values.len() != dates.len() {
            return Err(SeriesError::LengthMismatch { values: values.len(), dates: dates.len() });
        }
        if values.len() < 2 {
            return Err(SeriesError::TooShort(values.len()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SeriesError::NonFinite(i));
        }
        if let Some(i) = dates.windows(2).position(|w| w[0] >= w[1]) {
            return Err(SeriesError::NonIncreasingDates(i + 1));
        }
        Ok(TimeSeries { values, dates, label: label.into() })
    }

    /// Build a series over synthetic consecutive calendar dates starting at
    /// `start`. Used by generators and tests where real dates don't exist.
    pub fn from_values(
        values: Vec<f64>,
        start: Date,
        label: impl Into<String>,
    ) -> Result<Self, SeriesError> {
        let mut dates = Vec::with_capacity(values.len());
        let mut d = start;
        for _ in 0..values.len() {
            dates.push(d);
            d = d.succ();
        }
        TimeSeries::new(values, dates, label)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dates(&self) -> &[Date] {
        &self.dates
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sampling interval in days. Always one trading day by construction.
    pub fn dt(&self) -> f64 {
        1.0
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    /// Contiguous sub-series over `[start, end)`. The label is suffixed with
    /// the index range. Needs `end - start >= 2` so the result is itself a
    /// valid series.
    pub fn slice(&self, start: usize, end: usize) -> Result<TimeSeries, SeriesError> {
        if start >= end || end > self.len() || end - start < 2 {
            return Err(SeriesError::OutOfRange { start, end, len: self.len() });
        }
        Ok(TimeSeries {
            values: self.values[start..end].to_vec(),
            dates: self.dates[start..end].to_vec(),
            label: format!("{}[{}..{})", self.label, start, end),
        })
    }
}
