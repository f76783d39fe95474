//! Verification report records.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub suite: String,
    pub check: String,
    pub status: Status,
    /// Measured deviation; for counting checks, the number of failures.
    pub residual: f64,
    pub tolerance: f64,
    pub seed: u64,
    /// Wall-clock seconds, omitted when timings are disabled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ReportRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A whole run: records in suite declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub passed: bool,
    pub total: usize,
    pub failures: usize,
    pub records: Vec<ReportRecord>,
}

impl Report {
    pub fn new(seed: u64, records: Vec<ReportRecord>) -> Self {
        let failures = records.iter().filter(|r| !r.passed()).count();
        Self {
            seed,
            passed: failures == 0,
            total: records.len(),
            failures,
            records,
        }
    }
}

/// Collects records for one suite, timing each check.
#[derive(Debug)]
pub struct SuiteRecorder {
    suite: String,
    seed: u64,
    timing: bool,
    tol_override: Option<f64>,
    records: Vec<ReportRecord>,
}

/// What a check measured.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    /// A deviation compared against a tolerance (`--tol` applies).
    Residual { value: f64, tolerance: f64 },
    /// A number of failing cases; passes only at zero.
    Failures(usize),
    /// A measure that must stay strictly above a bound; `--tol` does not
    /// apply. Stored as `residual = bound − value`, passing when negative.
    Above { value: f64, bound: f64 },
}

impl SuiteRecorder {
    pub fn new(suite: &str, seed: u64, timing: bool, tol_override: Option<f64>) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            timing,
            tol_override,
            records: Vec::new(),
        }
    }

    /// Run `f` and record its measure. Errors are recorded as failures.
    pub fn check<F>(&mut self, name: &str, f: F)
    where
        F: FnOnce() -> crate::Result<(Measure, Option<String>)>,
    {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed().as_secs_f64();
        let (status, residual, tolerance, detail) = match outcome {
            Ok((Measure::Residual { value, tolerance }, detail)) => {
                let tol = self.tol_override.unwrap_or(tolerance);
                (value <= tol, value, tol, detail)
            }
            Ok((Measure::Failures(n), detail)) => (n == 0, n as f64, 0.0, detail),
            Ok((Measure::Above { value, bound }, detail)) => (value > bound, bound - value, 0.0, detail),
            Err(e) => (false, f64::INFINITY, 0.0, Some(e.to_string())),
        };
        self.records.push(ReportRecord {
            suite: self.suite.clone(),
            check: name.to_string(),
            status: if status { Status::Pass } else { Status::Fail },
            residual: if residual.is_nan() { f64::INFINITY } else { residual },
            tolerance,
            seed: self.seed,
            timing: self.timing.then_some(elapsed),
            detail,
        });
    }

    pub fn finish(self) -> Vec<ReportRecord> {
        self.records
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses() {
        let mut r = SuiteRecorder::new("s", 7, false, None);
        r.check("ok", || {
            Ok((
                Measure::Residual {
                    value: 1e-12,
                    tolerance: 1e-9,
                },
                None,
            ))
        });
        r.check("bad", || Ok((Measure::Failures(2), None)));
        r.check("err", || Err(crate::Error::SingularPoint));
        r.check("above", || Ok((Measure::Above { value: 1.5, bound: 1.0 }, None)));
        let rep = Report::new(7, r.finish());
        let st: Vec<bool> = rep.records.iter().map(ReportRecord::passed).collect();
        assert_eq!(st, [true, false, false, true]);
        assert_eq!(rep.failures, 2);
        assert!(rep.records.iter().all(|r| r.timing.is_none()));
    }

    #[test]
    fn tolerance_override_applies_to_residuals_only() {
        let mut r = SuiteRecorder::new("s", 0, false, Some(1e-15));
        r.check("tight", || {
            Ok((
                Measure::Residual {
                    value: 1e-12,
                    tolerance: 1e-9,
                },
                None,
            ))
        });
        r.check("count", || Ok((Measure::Failures(0), None)));
        let recs = r.finish();
        assert!(!recs[0].passed());
        assert!(recs[1].passed());
    }
}
