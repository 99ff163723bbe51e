//! Scenario reports: an ordered list of named verification steps, each
//! carrying what was expected, what was computed, where the expectation
//! comes from, and how the comparison ended.
//!
//! Reports serialize to a fixed JSON shape
//! `{scenario, steps: [{name, anchor, expected, actual, provenance, status}]}`
//! and render to aligned text for the terminal. Two runs of the same
//! scenario produce byte-identical reports.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Where a step's expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Quoted from the source material the catalog encodes.
    Stated,
    /// Computed by an independent in-tool oracle.
    Derived,
    /// True by definition or immediate arithmetic.
    Trivial,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Stated => "stated",
            Provenance::Derived => "derived",
            Provenance::Trivial => "trivial",
        })
    }
}

/// Outcome of one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Expected and computed agree.
    Pass,
    /// A verification that should have succeeded did not.
    Fail,
    /// The computed value disagrees with the quoted one; both are shown.
    /// Documented misprints land here, never silently corrected.
    Discrepancy,
    /// Not machine-checked: context, an unverifiable claim, or an
    /// out-of-budget search. Never affects the exit code.
    Recorded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Discrepancy => "discrepancy",
            Status::Recorded => "recorded",
        })
    }
}

/// One verification step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub name: String,
    /// Which claim the step checks, as a short descriptive slug.
    pub anchor: String,
    pub expected: String,
    pub actual: String,
    pub provenance: Provenance,
    pub status: Status,
}

/// A named scenario run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub scenario: String,
    pub steps: Vec<Step>,
}

impl Report {
    /// True iff no step failed (discrepancies and recorded steps do not
    /// count as failures).
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.status != Status::Fail)
    }

    /// Count of steps with the given status.
    pub fn count(&self, status: Status) -> usize {
        self.steps.iter().filter(|s| s.status == status).count()
    }

    /// Aligned, human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.scenario);
        out.push('\n');
        let width = self
            .steps
            .iter()
            .map(|s| s.name.len())
            .max()
            .unwrap_or(0);
        for s in &self.steps {
            out.push_str(&format!(
                "  {:<12} {:<w$}  expected {} | actual {}\n",
                format!("[{}]", s.status),
                s.name,
                s.expected,
                s.actual,
                w = width
            ));
        }
        out.push_str(&format!(
            "  {} steps: {} pass, {} fail, {} discrepancy, {} recorded\n",
            self.steps.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Discrepancy),
            self.count(Status::Recorded),
        ));
        out
    }
}

/// Sort reports into their canonical output order (by scenario name), so
/// the merged output is independent of execution order.
pub fn sort_reports(reports: &mut [Report]) {
    reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
}

/// Serialize a batch of reports as a JSON array (single reports still go
/// through `serde_json` directly).
pub fn reports_to_json(reports: &[Report]) -> String {
    serde_json::to_string_pretty(reports).expect("report serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(name: &str, status: Status) -> Step {
        Step {
            name: name.to_string(),
            anchor: "anchor".to_string(),
            expected: "4".to_string(),
            actual: "4".to_string(),
            provenance: Provenance::Stated,
            status,
        }
    }

    #[test]
    fn failure_detection_ignores_discrepancies() {
        let mut r = Report {
            scenario: "demo".to_string(),
            steps: vec![step("a", Status::Pass), step("b", Status::Discrepancy)],
        };
        assert!(r.passed());
        r.steps.push(step("c", Status::Fail));
        assert!(!r.passed());
        assert_eq!(r.count(Status::Fail), 1);
    }

    #[test]
    fn json_shape_is_stable() {
        let r = Report {
            scenario: "demo".to_string(),
            steps: vec![step("a", Status::Recorded)],
        };
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"scenario":"demo","steps":[{"name":"a","anchor":"anchor","expected":"4","actual":"4","provenance":"stated","status":"recorded"}]}"#
        );
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn sorting_is_by_name() {
        let mut rs = vec![
            Report { scenario: "S6".into(), steps: vec![] },
            Report { scenario: "S1".into(), steps: vec![] },
        ];
        sort_reports(&mut rs);
        assert_eq!(rs[0].scenario, "S1");
    }

    #[test]
    fn text_rendering_lists_every_step() {
        let r = Report {
            scenario: "demo".to_string(),
            steps: vec![step("first", Status::Pass), step("second", Status::Fail)],
        };
        let text = r.render_text();
        assert!(text.contains("[pass]"));
        assert!(text.contains("[fail]"));
        assert!(text.contains("2 steps: 1 pass, 1 fail, 0 discrepancy, 0 recorded"));
    }
}
