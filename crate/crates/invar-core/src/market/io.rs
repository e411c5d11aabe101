//! Panel and return-series serialization.
//!
//! Panels serialize to CSV with intervals as rows and firms as columns; an
//! adjacent JSON sidecar carries the grid metadata needed to rebuild the
//! panel. Inactive cells are written as empty fields so that active zeros
//! (internal crosses) survive round trips. Floats are written in shortest
//! round-trip form, making re-parsing bit-identical.

use std::io::{Read, Write};

use chrono::{NaiveDate, NaiveTime};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{FirmId, Horizon, IntervalGrid, InventoryPanel, ReturnSeries, Session};
use crate::error::{Error, Result};

const TS_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

/// Grid metadata carried in panel sidecars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub horizon: Horizon,
    pub session_open: NaiveTime,
    pub session_close: NaiveTime,
    pub dates: Vec<NaiveDate>,
}

impl GridMeta {
    pub fn from_grid(grid: &IntervalGrid) -> Self {
        GridMeta {
            horizon: grid.horizon(),
            session_open: grid.session().open,
            session_close: grid.session().close,
            dates: grid.dates().to_vec(),
        }
    }

    pub fn to_grid(&self) -> Result<IntervalGrid> {
        IntervalGrid::build(
            self.dates.clone(),
            Session::new(self.session_open, self.session_close)?,
            self.horizon,
        )
    }
}

/// Writes a panel as CSV: `interval_start,<firm>,<firm>,...`.
pub fn write_panel_csv<W: Write>(writer: W, panel: &InventoryPanel) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["interval_start".to_owned()];
    header.extend(panel.firms().iter().map(|f| f.as_str().to_owned()));
    wtr.write_record(&header)?;

    let mut row = Vec::with_capacity(header.len());
    for (t, interval) in panel.grid().intervals().iter().enumerate() {
        row.clear();
        row.push(interval.start.format(TS_FORMAT).to_string());
        for i in 0..panel.n_firms() {
            if panel.activity()[(t, i)] {
                row.push(format!("{}", panel.values()[(t, i)]));
            } else {
                row.push(String::new());
            }
        }
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a panel back from CSV plus its grid sidecar.
pub fn read_panel_csv<R: Read>(reader: R, meta: &GridMeta) -> Result<InventoryPanel> {
    let grid = meta.to_grid()?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);

    let headers = rdr.headers()?.clone();
    let mut cols = headers.iter();
    if cols.next() != Some("interval_start") {
        return Err(Error::Parse {
            line: 1,
            message: "panel CSV must start with an `interval_start` column".into(),
        });
    }
    let firms: Vec<FirmId> = cols.map(FirmId::from).collect();

    let mut values = Array2::zeros((grid.len(), firms.len()));
    let mut activity = Array2::from_elem((grid.len(), firms.len()), false);
    let mut t = 0usize;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if t >= grid.len() {
            return Err(Error::Parse {
                line,
                message: format!("panel has more rows than the {}-interval grid", grid.len()),
            });
        }
        let start = record.get(0).unwrap_or("");
        let expected = grid.intervals()[t].start.format(TS_FORMAT).to_string();
        if start != expected {
            return Err(Error::Parse {
                line,
                message: format!("row {t} starts at `{start}`, grid expects `{expected}`"),
            });
        }
        if record.len() != firms.len() + 1 {
            return Err(Error::Parse {
                line,
                message: format!(
                    "expected {} fields, found {}",
                    firms.len() + 1,
                    record.len()
                ),
            });
        }
        for (i, cell) in record.iter().skip(1).enumerate() {
            if cell.is_empty() {
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid value `{cell}`"),
            })?;
            values[(t, i)] = v;
            activity[(t, i)] = true;
        }
        t += 1;
    }
    if t != grid.len() {
        return Err(Error::InsufficientData(format!(
            "panel has {t} rows but the grid has {} intervals",
            grid.len()
        )));
    }
    Ok(InventoryPanel::from_parts(grid, firms, values, activity))
}

/// Writes a return series as CSV: `interval_start,price,log_return,gap`.
pub fn write_returns_csv<W: Write>(writer: W, returns: &ReturnSeries) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["interval_start", "price", "log_return", "gap"])?;
    for (t, interval) in returns.grid().intervals().iter().enumerate() {
        wtr.write_record([
            interval.start.format(TS_FORMAT).to_string(),
            format!("{}", returns.prices()[t]),
            format!("{}", returns.values()[t]),
            if returns.gaps()[t] { "1".into() } else { "0".to_owned() },
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
