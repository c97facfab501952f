//! Deterministic check reporting.
//!
//! A [`CheckReport`] collects per-case outcomes from the identity suites.
//! Its canonical serializations ([`CheckReport::to_text`],
//! [`CheckReport::to_json`]) are byte-stable: cases are sorted by
//! `(suite, case_id)` before emission and the wall-clock measurement is
//! deliberately excluded from both formats (runners print it separately),
//! so identical configurations yield identical bytes.

use serde::Serialize;

/// Outcome of a single check case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseRecord {
    /// Suite token the case belongs to.
    pub suite: String,
    /// Stable case identifier (unique within the suite).
    pub case_id: String,
    /// Rendered parameter point, if any.
    pub params: String,
    /// Whether the residual vanished.
    pub pass: bool,
    /// Serialized residual witness for failing cases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

/// Aggregated outcomes of a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CheckReport {
    pub cases: Vec<CaseRecord>,
    /// Wall-clock time of the producing run, in microseconds. Not part of
    /// the canonical serializations (reports must be reproducible
    /// bit-for-bit from the configuration alone).
    #[serde(skip_serializing)]
    pub wall_time_micros: Option<u64>,
}

/// Summary block emitted with the canonical serializations.
#[derive(Debug, Clone, Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
}

#[derive(Serialize)]
struct CanonicalReport<'a> {
    summary: Summary,
    cases: &'a [CaseRecord],
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record one case.
    pub fn push(&mut self, rec: CaseRecord) {
        self.cases.push(rec);
    }

    /// Record a pass/fail outcome with an optional witness.
    pub fn record(
        &mut self,
        suite: &str,
        case_id: String,
        params: String,
        residual_witness: Option<String>,
    ) {
        self.cases.push(CaseRecord {
            suite: suite.to_string(),
            case_id,
            params,
            pass: residual_witness.is_none(),
            residual: residual_witness,
        });
    }

    /// Absorb another report's cases.
    pub fn merge(&mut self, other: CheckReport) {
        self.cases.extend(other.cases);
    }

    /// Sort cases into canonical order; call before serializing.
    pub fn finalize(&mut self) {
        self.cases.sort_by(|a, b| (&a.suite, &a.case_id).cmp(&(&b.suite, &b.case_id)));
    }

    pub fn total(&self) -> usize {
        self.cases.len()
    }

    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.total() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    fn summary(&self) -> Summary {
        Summary { total: self.total(), passed: self.passed(), failed: self.failed() }
    }

    /// Canonical plain-text rendering (sorted, no timing data).
    pub fn to_text(&self) -> String {
        let mut sorted = self.clone();
        sorted.finalize();
        let mut out = String::new();
        for c in &sorted.cases {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{tag}] suite={} case={} params={}", c.suite, c.case_id, c.params));
            if let Some(w) = &c.residual {
                out.push_str(&format!(" residual={w}"));
            }
            out.push('\n');
        }
        let s = sorted.summary();
        out.push_str(&format!(
            "summary: total={} passed={} failed={}\n",
            s.total, s.passed, s.failed
        ));
        out
    }

    /// Canonical JSON rendering (sorted, no timing data). Schema:
    /// `{"summary": {"total", "passed", "failed"}, "cases": [CaseRecord]}`.
    pub fn to_json(&self) -> String {
        let mut sorted = self.clone();
        sorted.finalize();
        let canon = CanonicalReport { summary: sorted.summary(), cases: &sorted.cases };
        let mut bytes = serde_json::to_string_pretty(&canon).expect("report serializes");
        bytes.push('\n');
        bytes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CheckReport {
        let mut r = CheckReport::new();
        r.record("beta", "case-2".into(), "eps=1".into(), Some("3/4".into()));
        r.record("alpha", "case-1".into(), "eps=0".into(), None);
        r.wall_time_micros = Some(12345);
        r
    }

    #[test]
    fn counts_and_flags() {
        let r = sample();
        assert_eq!((r.total(), r.passed(), r.failed()), (2, 1, 1));
        assert!(!r.all_passed());
    }

    #[test]
    fn text_is_sorted_and_contains_the_witness() {
        let text = sample().to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("[PASS] suite=alpha"));
        assert!(lines[1].contains("residual=3/4"));
        assert_eq!(lines[2], "summary: total=2 passed=1 failed=1");
    }

    #[test]
    fn serializations_are_byte_stable_and_time_free() {
        let a = sample();
        let mut b = sample();
        b.wall_time_micros = Some(99999);
        // Different wall times, different input order: same bytes.
        b.cases.reverse();
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.to_json(), b.to_json());
        assert!(!a.to_json().contains("wall"));
    }

    #[test]
    fn empty_report_is_a_valid_document() {
        let r = CheckReport::new();
        assert_eq!(r.to_text(), "summary: total=0 passed=0 failed=0\n");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["summary"]["total"], 0);
        assert_eq!(v["cases"].as_array().unwrap().len(), 0);
    }
}
