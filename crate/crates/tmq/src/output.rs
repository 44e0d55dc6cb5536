//! CSV and JSON writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::Format;
use crate::Result;

/// Rounds to 12 significant digits; non-finite values become `None`.
pub fn sig12(v: f64) -> Option<f64> {
    if !v.is_finite() {
        return None;
    }
    if v == 0.0 {
        return Some(0.0);
    }
    format!("{v:.11e}").parse().ok()
}

pub fn open(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize + ?Sized>(mut w: Box<dyn Write>, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Flat records: one CSV row or one JSON object each.
pub fn write_records<T: Serialize>(format: Format, out: Option<&Path>, records: &[T], header: &[&str]) -> Result<()> {
    let w = open(out)?;
    match format {
        Format::Json => write_json(w, records),
        Format::Csv => {
            let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(w);
            csv.write_record(header)?;
            for r in records {
                csv.serialize(r)?;
            }
            csv.flush()?;
            Ok(())
        }
    }
}

/// A table with a column set known only at run time. JSON gets `doc`.
pub fn write_table<T: Serialize>(
    format: Format,
    out: Option<&Path>,
    header: &[String],
    rows: &[Vec<String>],
    doc: &T,
) -> Result<()> {
    let w = open(out)?;
    match format {
        Format::Json => write_json(w, doc),
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(header)?;
            for r in rows {
                csv.write_record(r)?;
            }
            csv.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(sig12(1.0 / 3.0), Some(0.333333333333));
        assert_eq!(sig12(1024.0), Some(1024.0));
        assert_eq!(sig12(f64::NAN), None);
        assert_eq!(sig12(-2.0e-300 / 3.0), Some(-6.66666666667e-301));
    }
}
