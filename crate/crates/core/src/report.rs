//! Verification reports: one row per checked inequality, rendered as JSON,
//! markdown or CSV.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

/// One checked relation `lhs ⋈ rhs`; `margin` is positive when it holds
/// with room to spare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub target: String,
    pub id: String,
    pub status: Status,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub worst_point: Option<Complex64>,
    pub note: String,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Check {
    fn new(target: &str, id: &str, status: Status, lhs: f64, rhs: f64, margin: f64) -> Self {
        Self {
            target: target.to_string(),
            id: id.to_string(),
            status,
            lhs: finite(lhs),
            rhs: finite(rhs),
            margin: finite(margin),
            worst_point: None,
            note: String::new(),
        }
    }

    /// `lhs ≤ rhs + tol`.
    pub fn le(target: &str, id: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let ok = lhs <= rhs + tol;
        Self::new(target, id, if ok { Status::Pass } else { Status::Fail }, lhs, rhs, rhs - lhs)
    }

    /// `lhs ≥ rhs − tol`.
    pub fn ge(target: &str, id: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let ok = lhs >= rhs - tol;
        Self::new(target, id, if ok { Status::Pass } else { Status::Fail }, lhs, rhs, lhs - rhs)
    }

    /// `|value − expected| ≤ tol`; the margin is `tol − |value − expected|`.
    pub fn approx(target: &str, id: &str, value: f64, expected: f64, tol: f64) -> Self {
        let err = (value - expected).abs();
        let ok = err <= tol;
        Self::new(target, id, if ok { Status::Pass } else { Status::Fail }, value, expected, tol - err)
    }

    pub fn flag(target: &str, id: &str, ok: bool, note: impl Into<String>) -> Self {
        let mut c = Self::new(
            target,
            id,
            if ok { Status::Pass } else { Status::Fail },
            f64::NAN,
            f64::NAN,
            f64::NAN,
        );
        c.note = note.into();
        c
    }

    pub fn skip(target: &str, id: &str, note: impl Into<String>) -> Self {
        let mut c = Self::new(target, id, Status::Skip, f64::NAN, f64::NAN, f64::NAN);
        c.note = note.into();
        c
    }

    /// A failed check recording an error raised while computing it.
    pub fn error(target: &str, id: &str, err: &Error) -> Self {
        Self::flag(target, id, false, err.to_string())
    }

    pub fn at(mut self, z: Complex64) -> Self {
        self.worst_point = Some(z);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub targets: Vec<String>,
    pub checks: Vec<Check>,
    pub config: BTreeMap<String, serde_json::Value>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            suite: suite.into(),
            targets: Vec::new(),
            checks: Vec::new(),
            config: BTreeMap::new(),
            runtime_ms: 0,
        }
    }

    pub fn push(&mut self, check: Check) {
        if !self.targets.contains(&check.target) {
            self.targets.push(check.target.clone());
        }
        self.checks.push(check);
    }

    /// Appends the checks of `other`, keeping target order.
    pub fn absorb(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c);
        }
        for (k, v) in other.config {
            self.config.entry(k).or_insert(v);
        }
    }

    pub fn set_config(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.config.insert(key.to_string(), v);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn counts(&self) -> Counts {
        let mut n = Counts::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => n.pass += 1,
                Status::Fail => n.fail += 1,
                Status::Skip => n.skip += 1,
            }
        }
        n
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn to_markdown(&self) -> String {
        let n = self.counts();
        let mut out = format!(
            "# {} suite\n\n{} pass, {} fail, {} skip ({} ms)\n\n",
            self.suite, n.pass, n.fail, n.skip, self.runtime_ms
        );
        out.push_str("| target | check | status | lhs | rhs | margin | point | note |\n");
        out.push_str("|---|---|---|---|---|---|---|---|\n");
        for c in &self.checks {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                c.target,
                c.id,
                c.status.as_str(),
                fmt_opt(c.lhs),
                fmt_opt(c.rhs),
                fmt_opt(c.margin),
                c.worst_point.map(|z| format!("{z:.6}")).unwrap_or_default(),
                c.note.replace('|', "\\|"),
            ));
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
        w.write_record(["suite", "target", "id", "status", "lhs", "rhs", "margin", "point_re", "point_im", "note"])
            .map_err(io)?;
        for c in &self.checks {
            let (re, im) = c.worst_point.map(|z| (z.re.to_string(), z.im.to_string())).unwrap_or_default();
            w.write_record([
                self.suite.as_str(),
                &c.target,
                &c.id,
                c.status.as_str(),
                &opt_string(c.lhs),
                &opt_string(c.rhs),
                &opt_string(c.margin),
                &re,
                &im,
                &c.note,
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6e}")).unwrap_or_default()
}

fn opt_string(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new("demo");
        r.push(Check::le("a", "bound", 1.0, 2.0, 0.0).at(Complex64::new(0.5, -0.25)));
        r.push(Check::ge("b", "lower", 1.0, 2.0, 1e-9).with_note("too small"));
        r.push(Check::skip("a", "unused", "not applicable"));
        r.set_config("tol", 1e-9);
        r
    }

    #[test]
    fn statuses() {
        let r = sample();
        assert_eq!(r.targets, vec!["a", "b"]);
        assert_eq!(r.counts(), Counts { pass: 1, fail: 1, skip: 1 });
        assert!(!r.passed());
        assert_eq!(r.checks[0].margin, Some(1.0));
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn approx_and_tolerance() {
        assert!(Check::le("t", "x", 1.0 + 1e-10, 1.0, 1e-9).passed());
        assert!(!Check::le("t", "x", 1.0 + 1e-8, 1.0, 1e-9).passed());
        assert!(Check::approx("t", "x", 0.5005, 0.5, 1e-3).passed());
        assert!(!Check::approx("t", "x", 0.502, 0.5, 1e-3).passed());
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let s = r.to_json().unwrap();
        assert!(s.contains("\"schema\": 1"));
        assert!(s.contains("\"status\": \"fail\""));
        assert_eq!(VerificationReport::from_json(&s).unwrap(), r);
    }

    #[test]
    fn non_finite_values_become_null() {
        let c = Check::le("t", "x", f64::INFINITY, 1.0, 0.0);
        assert_eq!(c.lhs, None);
        assert!(!c.passed());
    }

    #[test]
    fn markdown_and_csv() {
        let r = sample();
        let md = r.to_markdown();
        assert!(md.contains("| a | bound | pass |"));
        assert!(md.contains("1 pass, 1 fail, 1 skip"));
        let csv = r.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("demo,a,bound,pass,1,2,1,0.5,-0.25,"));
    }
}
