//! Output records and their line-oriented serializations.

use std::io::Write;

use clap::ValueEnum;
use gausscap::monte_carlo::Estimate;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

/// One computed quantity. Field order is the serialized column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub quantity: String,
    pub method: Method,
    pub value: f64,
    pub stderr_or_tol: f64,
    pub n: u64,
    pub seed: Option<u64>,
    pub paper_target: Option<f64>,
}

impl OutputRecord {
    pub fn closed_form(quantity: impl Into<String>, value: f64, target: Option<f64>) -> Self {
        Self {
            quantity: quantity.into(),
            method: Method::ClosedForm,
            value,
            stderr_or_tol: 0.0,
            n: 0,
            seed: None,
            paper_target: target,
        }
    }

    /// `n` is the number of integrand evaluations.
    pub fn quadrature(
        quantity: impl Into<String>,
        value: f64,
        error_estimate: f64,
        evaluations: u64,
        target: Option<f64>,
    ) -> Self {
        Self {
            quantity: quantity.into(),
            method: Method::Quadrature,
            value,
            stderr_or_tol: error_estimate,
            n: evaluations,
            seed: None,
            paper_target: target,
        }
    }

    pub fn monte_carlo(quantity: impl Into<String>, e: &Estimate, seed: u64, target: Option<f64>) -> Self {
        Self {
            quantity: quantity.into(),
            method: Method::MonteCarlo,
            value: e.mean,
            stderr_or_tol: e.stderr,
            n: e.n,
            seed: Some(seed),
            paper_target: target,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per line.
    #[default]
    Json,
    /// Comma-separated table with a header row.
    Csv,
}

pub fn write_records<W: Write>(out: W, records: &[OutputRecord], format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
            if records.is_empty() {
                w.write_record(HEADER)?;
            }
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub const HEADER: [&str; 7] = ["quantity", "method", "value", "stderr_or_tol", "n", "seed", "paper_target"];

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<OutputRecord> {
        let e = Estimate::binomial(25, 100, 100);
        vec![
            OutputRecord::closed_form("theta", 0.5, Some(0.5)),
            OutputRecord::monte_carlo("capture_probability", &e, 7, None),
        ]
    }

    #[test]
    fn json_lines_keep_field_order() {
        let mut buf = Vec::new();
        write_records(&mut buf, &sample(), Format::Json).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            r#"{"quantity":"theta","method":"closed_form","value":0.5,"stderr_or_tol":0.0,"n":0,"seed":null,"paper_target":0.5}"#
        );
        assert!(lines[1].contains(r#""method":"monte_carlo""#) && lines[1].contains(r#""seed":7"#));
    }

    #[test]
    fn csv_has_header_and_empty_optionals() {
        let mut buf = Vec::new();
        write_records(&mut buf, &sample(), Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], HEADER.join(","));
        assert_eq!(lines[1], "theta,closed_form,0.5,0.0,0,,0.5");
        assert!(lines[2].starts_with("capture_probability,monte_carlo,0.25,"));
        assert!(lines[2].ends_with(",100,7,"));
    }

    #[test]
    fn empty_csv_still_has_header() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[], Format::Csv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), HEADER.join(",") + "\n");
    }
}
