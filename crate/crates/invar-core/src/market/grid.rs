//! Interval grids over trading sessions.
//!
//! A grid partitions a set of trading days into ordered, disjoint
//! `[start, end)` intervals that lie entirely inside the trading session.
//! Intraday horizons split each session into equal slices; day horizons
//! group consecutive trading days into blocks.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling horizon: an intraday slice in minutes or a block of trading days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Horizon {
    Minutes(u32),
    Days(u32),
}

impl Horizon {
    pub fn is_intraday(&self) -> bool {
        matches!(self, Horizon::Minutes(_))
    }

    /// Length of one grid step in minutes, for intraday horizons.
    pub fn minutes(&self) -> Option<u32> {
        match self {
            Horizon::Minutes(m) => Some(*m),
            Horizon::Days(_) => None,
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Minutes(m) => write!(f, "{m}m"),
            Horizon::Days(d) => write!(f, "{d}d"),
        }
    }
}

impl FromStr for Horizon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::Config(format!("invalid horizon `{s}` (expected e.g. `15m`, `1d`, `5d`)"));
        if let Some(num) = s.strip_suffix('m') {
            let m: u32 = num.parse().map_err(|_| err())?;
            if m == 0 {
                return Err(err());
            }
            Ok(Horizon::Minutes(m))
        } else if let Some(num) = s.strip_suffix('d') {
            let d: u32 = num.parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Ok(Horizon::Days(d))
        } else {
            Err(err())
        }
    }
}

impl TryFrom<String> for Horizon {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Horizon> for String {
    fn from(h: Horizon) -> String {
        h.to_string()
    }
}

/// Daily trading session given by open and close times; intervals live in
/// `[open, close)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub open: NaiveTime,
    pub close: NaiveTime,
}

impl Session {
    pub fn new(open: NaiveTime, close: NaiveTime) -> Result<Self> {
        if open >= close {
            return Err(Error::Config(format!(
                "session open {open} must precede close {close}"
            )));
        }
        Ok(Session { open, close })
    }

    pub fn minutes(&self) -> u32 {
        (self.close - self.open).num_minutes() as u32
    }
}

impl Default for Session {
    /// 09:00-17:30, an 8.5-hour continuous session (34 intervals of 15
    /// minutes per day).
    fn default() -> Self {
        Session {
            open: NaiveTime::from_hms_opt(9, 0, 0).unwrap(),
            close: NaiveTime::from_hms_opt(17, 30, 0).unwrap(),
        }
    }
}

/// One `[start, end)` span of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub start: NaiveDateTime,
    pub end: NaiveDateTime,
}

/// Ordered, disjoint intervals covering the trading sessions of a set of
/// trading days.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalGrid {
    horizon: Horizon,
    session: Session,
    dates: Vec<NaiveDate>,
    intervals: Vec<Interval>,
    /// Intervals per day for intraday horizons, 0 otherwise.
    per_day: usize,
    date_index: HashMap<NaiveDate, usize>,
}

impl IntervalGrid {
    /// Builds a grid over the given trading dates.
    ///
    /// Dates must be strictly increasing. For intraday horizons the slice
    /// length may not exceed the session; a non-divisor slice leaves a
    /// truncated final interval each day. For day horizons the last block
    /// may cover fewer than `d` days.
    pub fn build(dates: Vec<NaiveDate>, session: Session, horizon: Horizon) -> Result<Self> {
        if dates.is_empty() {
            return Err(Error::Config("grid requires at least one trading date".into()));
        }
        if dates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("grid dates must be strictly increasing".into()));
        }
        let mut intervals = Vec::new();
        let per_day;
        match horizon {
            Horizon::Minutes(m) => {
                let session_min = session.minutes();
                if m > session_min {
                    return Err(Error::Config(format!(
                        "horizon {m}m exceeds the {session_min}-minute session"
                    )));
                }
                per_day = session_min.div_ceil(m) as usize;
                let step = chrono::Duration::minutes(m as i64);
                for date in &dates {
                    let open = date.and_time(session.open);
                    let close = date.and_time(session.close);
                    let mut start = open;
                    while start < close {
                        let end = (start + step).min(close);
                        intervals.push(Interval { start, end });
                        start = end;
                    }
                }
            }
            Horizon::Days(d) => {
                per_day = 0;
                for block in dates.chunks(d as usize) {
                    intervals.push(Interval {
                        start: block[0].and_time(session.open),
                        end: block[block.len() - 1].and_time(session.close),
                    });
                }
            }
        }
        let date_index = dates.iter().enumerate().map(|(i, d)| (*d, i)).collect();
        Ok(IntervalGrid {
            horizon,
            session,
            dates,
            intervals,
            per_day,
            date_index,
        })
    }

    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn session(&self) -> Session {
        self.session
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Intervals per trading day (intraday horizons only).
    pub fn intervals_per_day(&self) -> Option<usize> {
        if self.horizon.is_intraday() {
            Some(self.per_day)
        } else {
            None
        }
    }

    /// Maps a timestamp to its interval index, or `None` when it falls on a
    /// non-grid date or outside the session.
    pub fn locate(&self, ts: NaiveDateTime) -> Option<usize> {
        let day = *self.date_index.get(&ts.date())?;
        let time = ts.time();
        if time < self.session.open || time >= self.session.close {
            return None;
        }
        match self.horizon {
            Horizon::Minutes(m) => {
                let offset = (time - self.session.open).num_seconds() as usize / (m as usize * 60);
                Some(day * self.per_day + offset)
            }
            Horizon::Days(d) => Some(day / d as usize),
        }
    }

    /// Session-block id of an interval: the trading day for intraday grids,
    /// the interval itself otherwise. Lagged-pair computations use this to
    /// avoid mixing intraday dynamics with overnight gaps.
    pub fn day_block(&self, interval: usize) -> usize {
        if self.horizon.is_intraday() {
            interval / self.per_day
        } else {
            interval
        }
    }

    /// Session-block ids for all intervals.
    pub fn day_blocks(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.day_block(i)).collect()
    }

    /// Interval ranges making up each trading day (intraday grids only).
    pub fn day_ranges(&self) -> Option<Vec<std::ops::Range<usize>>> {
        if !self.horizon.is_intraday() {
            return None;
        }
        Some(
            (0..self.dates.len())
                .map(|d| d * self.per_day..(d + 1) * self.per_day)
                .collect(),
        )
    }
}
