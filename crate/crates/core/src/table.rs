//! Tidy long-format result tables: one row per (axis value, evaluator).

use std::io;

use serde::Serialize;

use crate::analytic::{Method, OutageEstimate, Scheme};
use crate::montecarlo::McResult;

pub const CSV_HEADER: [&str; 7] = ["axis", "value", "scheme", "evaluator", "p_out", "std_err", "flags"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub axis: String,
    pub value: f64,
    pub scheme: String,
    pub evaluator: String,
    pub p_out: f64,
    pub std_err: f64,
    pub flags: String,
}

impl ResultRow {
    /// Row for a deterministic estimate; the standard error is zero.
    pub fn from_estimate(axis: &str, value: f64, scheme: Scheme, est: &OutageEstimate) -> Self {
        Self {
            axis: axis.to_string(),
            value,
            scheme: scheme.to_string(),
            evaluator: est.method.name().to_string(),
            p_out: est.value,
            std_err: 0.0,
            flags: est.flag_list(),
        }
    }

    pub fn from_mc(axis: &str, value: f64, scheme: Scheme, mc: &McResult) -> Self {
        Self {
            axis: axis.to_string(),
            value,
            scheme: scheme.to_string(),
            evaluator: Method::MonteCarlo.name().to_string(),
            p_out: mc.p_hat,
            std_err: mc.std_err,
            flags: String::new(),
        }
    }
}

pub fn write_csv<W: io::Write>(rows: &[ResultRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.axis.clone(),
            r.value.to_string(),
            r.scheme.clone(),
            r.evaluator.clone(),
            r.p_out.to_string(),
            r.std_err.to_string(),
            r.flags.clone(),
        ])?;
    }
    w.flush()
}

pub fn to_csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// JSON array of row objects carrying the CSV column names.
pub fn to_json_string(rows: &[ResultRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Correction;

    fn rows() -> Vec<ResultRow> {
        let est = OutageEstimate {
            value: 0.125,
            method: Method::ClosedForm,
            ci_halfwidth: 0.0,
            flags: vec![Correction::PbfCoefficient, Correction::RvqArgument],
        };
        vec![
            ResultRow::from_estimate("snr_db", 10.0, Scheme::MisoRvq { codebook_size: 8 }, &est),
            ResultRow::from_mc("snr_db", 10.0, Scheme::MisoTas, &McResult::from_counts(3, 4)),
        ]
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv_string(&rows());
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "axis,value,scheme,evaluator,p_out,std_err,flags");
        assert_eq!(
            lines.next().unwrap(),
            "snr_db,10,miso-rvq(N=8),closed,0.125,0,pbf-coefficient;rvq-argument"
        );
        assert!(lines
            .next()
            .unwrap()
            .starts_with("snr_db,10,miso-tas,mc,0.75,0.21650635094610965,"));
    }

    #[test]
    fn json_uses_csv_field_names() {
        let v: serde_json::Value = serde_json::from_str(&to_json_string(&rows())).unwrap();
        let first = v[0].as_object().unwrap();
        for key in CSV_HEADER {
            assert!(first.contains_key(key), "{key}");
        }
    }
}
