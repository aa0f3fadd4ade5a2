//! JSON-lines verification reports.
//!
//! A report is one `config` record, one `case` record per check in a fixed
//! order, and a closing `summary` record. Nothing in it depends on timing or
//! thread count, so equal inputs give byte-identical files.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// Pass iff `residual <= tolerance`.
    AtMost,
    /// Pass iff `residual >= tolerance`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRecord {
    pub suite: String,
    pub case: String,
    pub index: usize,
    /// `[re, im]`.
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub residual: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl CaseRecord {
    pub fn at_most(
        suite: &str,
        case: impl Into<String>,
        index: usize,
        lhs: Complex64,
        rhs: Complex64,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        CaseRecord {
            suite: suite.to_string(),
            case: case.into(),
            index,
            lhs: pair(lhs),
            rhs: pair(rhs),
            residual,
            tolerance,
            comparison: Comparison::AtMost,
            pass: residual <= tolerance,
            note: None,
            error: None,
        }
    }

    pub fn real(
        suite: &str,
        case: impl Into<String>,
        index: usize,
        lhs: f64,
        rhs: f64,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self::at_most(
            suite,
            case,
            index,
            Complex64::new(lhs, 0.0),
            Complex64::new(rhs, 0.0),
            residual,
            tolerance,
        )
    }

    pub fn at_least(
        suite: &str,
        case: impl Into<String>,
        index: usize,
        value: f64,
        threshold: f64,
    ) -> Self {
        CaseRecord {
            comparison: Comparison::AtLeast,
            pass: value >= threshold,
            ..Self::real(suite, case, index, value, threshold, value, threshold)
        }
    }

    pub fn failed(
        suite: &str,
        case: impl Into<String>,
        index: usize,
        error: &jordan_kepler::Error,
    ) -> Self {
        CaseRecord {
            suite: suite.to_string(),
            case: case.into(),
            index,
            lhs: [f64::NAN; 2],
            rhs: [f64::NAN; 2],
            residual: f64::NAN,
            tolerance: f64::NAN,
            comparison: Comparison::AtMost,
            pass: false,
            note: None,
            error: Some(error.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub cases: usize,
    pub failed: usize,
    pub errors: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub suites: BTreeMap<String, SuiteSummary>,
    pub cases: usize,
    pub failed: usize,
    pub errors: usize,
    pub pass: bool,
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum Record<'a> {
    Config {
        config: &'a RunConfig,
        suites: &'a [String],
    },
    Case(&'a CaseRecord),
    Summary(&'a Summary),
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: RunConfig,
    pub suites: Vec<String>,
    pub cases: Vec<CaseRecord>,
}

impl Report {
    pub fn summary(&self) -> Summary {
        let mut suites: BTreeMap<String, SuiteSummary> = BTreeMap::new();
        for name in &self.suites {
            suites.insert(
                name.clone(),
                SuiteSummary {
                    cases: 0,
                    failed: 0,
                    errors: 0,
                    max_residual: 0.0,
                },
            );
        }
        for c in &self.cases {
            let s = suites.entry(c.suite.clone()).or_insert(SuiteSummary {
                cases: 0,
                failed: 0,
                errors: 0,
                max_residual: 0.0,
            });
            s.cases += 1;
            if c.error.is_some() {
                s.errors += 1;
            } else if !c.pass {
                s.failed += 1;
            }
            if c.comparison == Comparison::AtMost && c.residual.is_finite() {
                s.max_residual = s.max_residual.max(c.residual);
            }
        }
        let failed = suites.values().map(|s| s.failed).sum();
        let errors = suites.values().map(|s| s.errors).sum();
        Summary {
            cases: self.cases.len(),
            failed,
            errors,
            pass: failed == 0 && errors == 0,
            suites,
        }
    }

    pub fn outcome(&self) -> Outcome {
        let s = self.summary();
        if s.errors > 0 {
            Outcome::DomainError
        } else if s.failed > 0 {
            Outcome::Fail
        } else {
            Outcome::Pass
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut push = |r: Record| {
            out.push_str(&serde_json::to_string(&r).expect("report records serialize"));
            out.push('\n');
        };
        push(Record::Config {
            config: &self.config,
            suites: &self.suites,
        });
        for c in &self.cases {
            push(Record::Case(c));
        }
        push(Record::Summary(&self.summary()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_and_outcome() {
        let mut report = Report {
            config: RunConfig::default(),
            suites: vec!["a".into()],
            cases: vec![
                CaseRecord::real("a", "x", 0, 1.0, 1.0, 1e-12, 1e-10),
                CaseRecord::at_least("a", "gap", 0, 0.5, 1e-3),
            ],
        };
        assert_eq!(report.outcome(), Outcome::Pass);
        report
            .cases
            .push(CaseRecord::real("a", "x", 1, 1.0, 2.0, 1.0, 1e-10));
        assert_eq!(report.outcome(), Outcome::Fail);
        report.cases.push(CaseRecord::failed(
            "a",
            "x",
            2,
            &jordan_kepler::Error::Domain("boom".into()),
        ));
        assert_eq!(report.outcome(), Outcome::DomainError);
        let text = report.to_jsonl();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with(r#"{"record":"config""#));
        assert!(lines[5].contains(r#""pass":false"#));
        let s = report.summary();
        assert_eq!((s.failed, s.errors), (1, 1));
        assert_eq!(s.suites["a"].max_residual, 1.0);
    }
}
