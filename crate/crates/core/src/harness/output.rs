//! CSV and JSON writers for scan records.
//!
//! CSV columns: `preset,p,card_a,d,trial,seed,measured,bound,ratio,exact,hypothesis_ok,elapsed_s`.
//! Floating-point columns carry six significant digits.

use std::io::Write;

use super::scan::ExperimentRecord;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 12] = [
    "preset",
    "p",
    "card_a",
    "d",
    "trial",
    "seed",
    "measured",
    "bound",
    "ratio",
    "exact",
    "hypothesis_ok",
    "elapsed_s",
];

/// Six significant digits; integers below 2^53 print without an exponent.
pub fn fmt_sig(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.5e}")
    }
}

fn row(r: &ExperimentRecord) -> [String; 12] {
    [
        r.preset.clone(),
        r.p.to_string(),
        r.card_a.to_string(),
        r.d.to_string(),
        r.trial.to_string(),
        r.seed.to_string(),
        fmt_sig(r.measured),
        fmt_sig(r.bound),
        fmt_sig(r.ratio),
        r.exact.to_string(),
        r.hypothesis_ok.to_string(),
        format!("{:.3}", r.elapsed_s),
    ]
}

fn io(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record(row(r)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(records: &[ExperimentRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

pub fn write_json<W: Write>(records: &[ExperimentRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Writes `.json` paths as JSON and everything else as CSV.
pub fn write_records(path: &std::path::Path, records: &[ExperimentRecord]) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    if path.extension().is_some_and(|e| e == "json") {
        write_json(records, file)
    } else {
        write_csv(records, file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_sig(3.0), "3");
        assert_eq!(fmt_sig(2.0f64.powf(1.5)), "2.82843e0");
        assert_eq!(fmt_sig(1.0 / 3.0), "3.33333e-1");
    }

    #[test]
    fn csv_shape() {
        let r = ExperimentRecord {
            preset: "thm3".into(),
            p: 5,
            card_a: 2,
            d: 2,
            trial: 0,
            seed: 7,
            measured: 3.0,
            bound: 2f64.powf(1.5),
            ratio: 3.0 / 2f64.powf(1.5),
            exact: true,
            hypothesis_ok: true,
            elapsed_s: 0.0,
            clamped: false,
        };
        let s = to_csv_string(std::slice::from_ref(&r)).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(
            lines[0],
            "preset,p,card_a,d,trial,seed,measured,bound,ratio,exact,hypothesis_ok,elapsed_s"
        );
        assert_eq!(
            lines[1],
            "thm3,5,2,2,0,7,3,2.82843e0,1.06066e0,true,true,0.000"
        );
        let mut js = Vec::new();
        write_json(&[r], &mut js).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&js).unwrap();
        assert_eq!(v[0]["measured"], 3.0);
        assert_eq!(v[0].as_object().unwrap().len(), 12);
    }
}
