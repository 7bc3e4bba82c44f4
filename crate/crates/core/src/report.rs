//! Sweep reports: margin bookkeeping, JSON and CSV output.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative strictness tolerance: a step is a violation only when it goes
/// the wrong way by more than `STRICT_TOL * (1 + |value|)`.
pub const STRICT_TOL: f64 = 1e-12;
/// Violations kept verbatim in a report; the total is always counted.
pub const MAX_RECORDED_VIOLATIONS: usize = 100;

/// How firmly a checked statement is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimClass {
    /// Proven: the sweep must pass.
    Proven,
    /// Supported only by numerical evidence: the sweep must pass at desk
    /// scale.
    Evidenced,
    /// Stated to be false: the sweep must find a violation.
    Disproven,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub location: Vec<f64>,
    pub value: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coords: Vec<f64>,
    pub value: f64,
    pub margin: f64,
}

/// Outcome of a sweep.
///
/// `margin` is measured from the violation threshold: with `slack` the
/// signed amount by which a point satisfies its claim and
/// `tol = STRICT_TOL * (1 + |value|)`, `margin = slack + tol`. A point is a
/// violation when `margin < 0` and a tie when `margin <= 2 tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub description: String,
    pub claim: ClaimClass,
    pub seed: Option<u64>,
    pub coordinates: Vec<String>,
    pub points_checked: usize,
    pub ties: usize,
    pub min_margin: Option<f64>,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub verdict: Verdict,
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

impl SweepReport {
    /// True when the verdict is the one the claim class calls for.
    pub fn matches_claim(&self) -> bool {
        match self.claim {
            ClaimClass::Proven | ClaimClass::Evidenced => self.verdict == Verdict::Pass,
            ClaimClass::Disproven => self.verdict == Verdict::Fail,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    /// CSV with the coordinate columns, then `value` and `margin`, all in
    /// 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<&str> = self.coordinates.iter().map(String::as_str).collect();
        header.push("value");
        header.push("margin");
        out.write_record(&header).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec: Vec<String> = r.coords.iter().map(|&x| fmt17(x)).collect();
            rec.push(fmt17(r.value));
            rec.push(fmt17(r.margin));
            out.write_record(&rec).map_err(csv_err)?;
        }
        out.flush().map_err(|e| Error::Usage(format!("csv write failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory csv");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Usage(format!("csv write failed: {e}"))
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Collects checked points into a `SweepReport`. Points must be pushed in
/// grid order for the report to be reproducible.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    description: String,
    claim: ClaimClass,
    seed: Option<u64>,
    coordinates: Vec<String>,
    strict_tol: f64,
    points: usize,
    ties: usize,
    min_margin: Option<f64>,
    violation_count: usize,
    violations: Vec<Violation>,
    rows: Vec<Row>,
    diagnostics: BTreeMap<String, f64>,
}

impl ReportBuilder {
    pub fn new(description: impl Into<String>, claim: ClaimClass, coordinates: &[&str]) -> Self {
        Self {
            description: description.into(),
            claim,
            seed: None,
            coordinates: coordinates.iter().map(|s| s.to_string()).collect(),
            strict_tol: STRICT_TOL,
            points: 0,
            ties: 0,
            min_margin: None,
            violation_count: 0,
            violations: Vec::new(),
            rows: Vec::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn strict_tol(mut self, tol: f64) -> Self {
        self.strict_tol = tol;
        self
    }

    pub fn diagnostic(&mut self, key: impl Into<String>, value: f64) {
        self.diagnostics.insert(key.into(), value);
    }

    /// Records one checked point. `slack > 0` means the claim holds there;
    /// `scale` is the function value that sets the tolerance and `value` is
    /// what goes into the row (often the same number).
    pub fn push(&mut self, coords: Vec<f64>, value: f64, slack: f64, scale: f64) -> f64 {
        let tol = self.strict_tol * (1.0 + scale.abs());
        let margin = if slack.is_nan() { f64::NEG_INFINITY } else { slack + tol };
        let index = self.points;
        self.points += 1;
        self.min_margin = Some(match self.min_margin {
            Some(m) => m.min(margin),
            None => margin,
        });
        if margin < 0.0 {
            self.violation_count += 1;
            if self.violations.len() < MAX_RECORDED_VIOLATIONS {
                self.violations.push(Violation {
                    index,
                    location: coords.clone(),
                    value,
                    margin,
                });
            }
        } else if margin <= 2.0 * tol {
            self.ties += 1;
        }
        self.rows.push(Row { coords, value, margin });
        margin
    }

    pub fn violation_count(&self) -> usize {
        self.violation_count
    }

    pub fn finish(self) -> SweepReport {
        let verdict = if self.violation_count == 0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        SweepReport {
            description: self.description,
            claim: self.claim,
            seed: self.seed,
            coordinates: self.coordinates,
            points_checked: self.points,
            ties: self.ties,
            min_margin: self.min_margin,
            violation_count: self.violation_count,
            violations: self.violations,
            verdict,
            diagnostics: self.diagnostics,
            rows: self.rows,
        }
    }
}
