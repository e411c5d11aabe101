//! Trade tape parsing and emission.
//!
//! Tape format: UTF-8 CSV with header
//! `timestamp,stock,buyer,seller,price,volume`, ISO-8601 timestamps at
//! second resolution, `.` decimal separator.

use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDateTime;

use super::{FirmId, TradeRecord};
use crate::error::{Error, Result};

const HEADER: [&str; 6] = ["timestamp", "stock", "buyer", "seller", "price", "volume"];
const TS_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

/// Parses a trade tape and returns records in timestamp order (stable sort,
/// so records sharing a timestamp keep their tape order).
///
/// The first malformed field aborts parsing with the offending line number.
/// An empty tape (header only) yields an empty list.
pub fn parse_trade_tape<R: Read>(reader: R) -> Result<Vec<TradeRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);

    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "unexpected header `{}` (expected `{}`)",
                headers.iter().collect::<Vec<_>>().join(","),
                HEADER.join(",")
            ),
        });
    }

    let mut trades = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |idx: usize, name: &str| -> Result<&str> {
            record.get(idx).ok_or_else(|| Error::Parse {
                line,
                message: format!("missing field `{name}`"),
            })
        };
        let parse_err = |name: &str, value: &str| Error::Parse {
            line,
            message: format!("invalid {name} `{value}`"),
        };

        let ts_raw = field(0, "timestamp")?;
        let timestamp = NaiveDateTime::parse_from_str(ts_raw, TS_FORMAT)
            .map_err(|_| parse_err("timestamp", ts_raw))?;
        let stock = field(1, "stock")?.to_owned();
        let buyer = field(2, "buyer")?;
        let seller = field(3, "seller")?;
        if stock.is_empty() || buyer.is_empty() || seller.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty stock or firm field".into(),
            });
        }
        let price_raw = field(4, "price")?;
        let price: f64 = price_raw.parse().map_err(|_| parse_err("price", price_raw))?;
        if !price.is_finite() || price <= 0.0 {
            return Err(Error::Parse {
                line,
                message: format!("price must be finite and > 0, got {price_raw}"),
            });
        }
        let volume_raw = field(5, "volume")?;
        let volume: f64 = volume_raw
            .parse()
            .map_err(|_| parse_err("volume", volume_raw))?;
        if !volume.is_finite() || volume <= 0.0 {
            return Err(Error::Parse {
                line,
                message: format!("volume must be finite and > 0, got {volume_raw}"),
            });
        }

        trades.push(TradeRecord {
            timestamp,
            stock,
            buyer: FirmId::new(buyer),
            seller: FirmId::new(seller),
            price,
            volume,
        });
    }

    trades.sort_by_key(|t| t.timestamp);
    Ok(trades)
}

/// Convenience wrapper opening a file path.
pub fn parse_trade_tape_path(path: impl AsRef<Path>) -> Result<Vec<TradeRecord>> {
    let file = std::fs::File::open(path)?;
    parse_trade_tape(std::io::BufReader::new(file))
}

/// Writes trades in tape format. Floats use the shortest representation
/// that parses back to the same value, so write/parse round trips are
/// bit-exact.
pub fn write_trade_tape<W: Write>(writer: W, trades: &[TradeRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(HEADER)?;
    for t in trades {
        wtr.write_record([
            t.timestamp.format(TS_FORMAT).to_string(),
            t.stock.clone(),
            t.buyer.as_str().to_owned(),
            t.seller.as_str().to_owned(),
            format!("{}", t.price),
            format!("{}", t.volume),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
