//! Verification reports and their JSON/CSV serialization.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serde adapter for `f64` that writes non-finite values as the strings
/// `"inf"`, `"-inf"` and `"nan"`.
pub mod real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(super::non_finite_tag(*x))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Tag(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Tag(t) => super::parse_tag(&t).ok_or_else(|| de::Error::custom(format!("not a number: {t:?}"))),
        }
    }
}

mod real_map {
    use std::collections::BTreeMap;

    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(serde::Serialize)]
    struct Wrap(#[serde(with = "super::real")] f64);

    #[derive(Deserialize)]
    struct Unwrap(#[serde(with = "super::real")] f64);

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            map.serialize_entry(k, &Wrap(*v))?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        let raw = BTreeMap::<String, Unwrap>::deserialize(d)?;
        Ok(raw.into_iter().map(|(k, v)| (k, v.0)).collect())
    }
}

fn non_finite_tag(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

fn parse_tag(t: &str) -> Option<f64> {
    match t {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => None,
    }
}

/// Outcome of one inequality or identity over a set of samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// The relation being checked, as a formula.
    pub anchor: String,
    pub samples: u64,
    pub violations: u64,
    /// Smallest tolerance-adjusted slack; negative exactly when some sample
    /// is violated.
    #[serde(with = "real")]
    pub worst_margin: f64,
    /// Constants used and statistics gathered by the check.
    #[serde(with = "real_map")]
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub wall_time: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    /// Corpus size requested.
    pub samples: u64,
    pub checks: Vec<CheckResult>,
    pub wall_time: f64,
}

impl VerificationReport {
    pub fn total_violations(&self) -> u64 {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Copy with every timing zeroed, for reproducibility comparisons.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.wall_time = 0.0;
        for c in &mut r.checks {
            c.wall_time = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,anchor,samples,violations,worst_margin,seed,wall_time\n");
        for c in &self.checks {
            let row = [
                csv_field(&c.name),
                csv_field(&c.anchor),
                c.samples.to_string(),
                c.violations.to_string(),
                format_real(c.worst_margin),
                c.seed.to_string(),
                format_real(c.wall_time),
            ];
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits, or a tag for non-finite values.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        non_finite_tag(x).to_string()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidArgument(format!("unknown report format {other:?} (expected json or csv)"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Json => "json",
            Self::Csv => "csv",
        })
    }
}

pub fn render_report(report: &VerificationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report.to_json() + "\n",
        ReportFormat::Csv => report.to_csv(),
    }
}

pub fn emit_report(report: &VerificationReport, path: &Path, format: ReportFormat) -> Result<()> {
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    w.write_all(render_report(report, format).as_bytes()).map_err(io)?;
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(name: &str, margin: f64) -> CheckResult {
        CheckResult {
            name: name.into(),
            anchor: "beta <= c(1+s^2) D".into(),
            samples: 10,
            violations: u64::from(margin < 0.0),
            worst_margin: margin,
            params: BTreeMap::from([("c".to_string(), 1979.0), ("min_ratio".to_string(), f64::INFINITY)]),
            seed: 42,
            wall_time: 0.25,
        }
    }

    fn report(n: usize) -> VerificationReport {
        VerificationReport {
            suite: "main".into(),
            seed: 42,
            samples: 10,
            checks: (0..n).map(|i| check(&format!("c{i}"), 0.1 * i as f64 - 0.05)).collect(),
            wall_time: 1.0,
        }
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let mut r = report(1);
        r.checks[0].anchor = "beta(E) = beta(E^c), alpha(E) = alpha(E^c)".into();
        assert!(r.to_csv().contains(",\"beta(E) = beta(E^c), alpha(E) = alpha(E^c)\","));
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(report(0).to_csv(), "name,anchor,samples,violations,worst_margin,seed,wall_time\n");
    }

    #[test]
    fn csv_has_one_row_per_check() {
        let csv = report(3).to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().starts_with("c0,beta <= c(1+s^2) D,10,1,-5.0000000000000003e-2,42,"));
    }

    #[test]
    fn json_round_trip_keeps_non_finite_values() {
        let r = report(3);
        let text = r.to_json();
        assert!(text.contains("\"min_ratio\": \"inf\""));
        assert_eq!(VerificationReport::from_json(&text).unwrap(), r);
    }

    #[test]
    fn timings_are_stripped() {
        let r = report(2).without_timings();
        assert_eq!(r.wall_time, 0.0);
        assert!(r.checks.iter().all(|c| c.wall_time == 0.0));
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_real(f64::NAN), "nan");
    }

    #[test]
    fn emit_reports_io_errors_with_path() {
        let err = emit_report(&report(1), Path::new("/nonexistent/dir/report.json"), ReportFormat::Json).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/report.json"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
