//! Calendar months and labeled month windows.
//!
//! Snapshots are stamped with a [`Month`]; multi-month analyses aggregate
//! over [`PhaseWindow`]s. Months serialize as `"YYYY-MM"` everywhere (CSV,
//! JSON, CLI arguments) and order chronologically.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A calendar month, stored as a flat index (`year * 12 + month - 1`) so that
/// ordering, hashing and month arithmetic are trivial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month(u32);

/// Errors from parsing or constructing a [`Month`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonthError {
    #[error("invalid month string {0:?}: expected \"YYYY-MM\"")]
    Format(String),
    #[error("month out of range: year {year}, month {month}")]
    Range { year: u32, month: u32 },
}

impl Month {
    /// Builds a month from a calendar year (1..=9999) and month (1..=12).
    pub fn new(year: u32, month: u32) -> Result<Self, MonthError> {
        if !(1..=9999).contains(&year) || !(1..=12).contains(&month) {
            return Err(MonthError::Range { year, month });
        }
        Ok(Month(year * 12 + month - 1))
    }

    pub fn year(self) -> u32 {
        self.0 / 12
    }

    /// Calendar month, 1..=12.
    pub fn month(self) -> u32 {
        self.0 % 12 + 1
    }

    /// The following calendar month.
    pub fn succ(self) -> Month {
        Month(self.0 + 1)
    }

    /// Flat month index; consecutive months differ by exactly 1.
    pub fn index(self) -> u32 {
        self.0
    }

    /// Whole months from `earlier` to `self` (negative if `self` precedes it).
    pub fn months_since(self, earlier: Month) -> i64 {
        i64::from(self.0) - i64::from(earlier.0)
    }

    /// Iterates `start..=end` month by month (empty if `start > end`).
    pub fn sequence(start: Month, end: Month) -> impl Iterator<Item = Month> {
        (start.0..=end.0).map(Month)
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year(), self.month())
    }
}

impl fmt::Debug for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Month({self})")
    }
}

impl FromStr for Month {
    type Err = MonthError;

    /// Strict `"YYYY-MM"` parse: four year digits, a dash, two month digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 7
            || bytes[4] != b'-'
            || !bytes
                .iter()
                .enumerate()
                .all(|(i, b)| i == 4 || b.is_ascii_digit())
        {
            return Err(MonthError::Format(s.to_string()));
        }
        let year: u32 = s[..4]
            .parse()
            .map_err(|_| MonthError::Format(s.to_string()))?;
        let month: u32 = s[5..]
            .parse()
            .map_err(|_| MonthError::Format(s.to_string()))?;
        Month::new(year, month)
    }
}

impl Serialize for Month {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Month {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A labeled inclusive month window used to group snapshots for aggregation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseWindow {
    pub label: String,
    pub start: Month,
    pub end: Month,
}

impl PhaseWindow {
    pub fn new(label: impl Into<String>, start: Month, end: Month) -> Self {
        PhaseWindow {
            label: label.into(),
            start,
            end,
        }
    }

    pub fn contains(&self, month: Month) -> bool {
        self.start <= month && month <= self.end
    }

    pub fn overlaps(&self, other: &PhaseWindow) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    /// Number of months in the window (0 if start > end).
    pub fn len(&self) -> usize {
        if self.start > self.end {
            0
        } else {
            (self.end.index() - self.start.index() + 1) as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn months(&self) -> impl Iterator<Item = Month> {
        Month::sequence(self.start, self.end)
    }
}

fn m(year: u32, month: u32) -> Month {
    Month::new(year, month).expect("static month literal")
}

/// The four canonical analysis windows covering 2007-01 through 2012-03:
/// pre-crisis growth (20 months), crisis shock (3), stimulus expansion (25),
/// and post-stimulus tightening (15).
pub fn canonical_windows() -> Vec<PhaseWindow> {
    vec![
        PhaseWindow::new("phase1", m(2007, 1), m(2008, 8)),
        PhaseWindow::new("phase2", m(2008, 9), m(2008, 11)),
        PhaseWindow::new("phase3", m(2008, 12), m(2010, 12)),
        PhaseWindow::new("phase4", m(2011, 1), m(2012, 3)),
    ]
}

/// First month of the canonical 63-month span.
pub fn canonical_start() -> Month {
    m(2007, 1)
}

/// Last month of the canonical 63-month span.
pub fn canonical_end() -> Month {
    m(2012, 3)
}
