use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use kgsphere::symcore::ZeroTest;
use serde::Serialize;

pub const SCHEMA: &str = "kgsphere.report/1";

/// One verdict. Checks that are not `required` never affect the exit code.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: String,
    pub expected: String,
    pub passed: bool,
    pub required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &str, verdict: &str, expected: &str, passed: bool) -> Check {
        Check {
            name: name.to_string(),
            verdict: verdict.to_string(),
            expected: expected.to_string(),
            passed,
            required: true,
            value: None,
            tolerance: None,
            detail: None,
        }
    }

    pub fn zero(name: &str, z: &ZeroTest) -> Check {
        Check::new(name, z.label(), "PROVEN_ZERO", z.is_proven())
    }

    pub fn nonzero(name: &str, z: &ZeroTest) -> Check {
        Check::new(
            name,
            z.label(),
            "LIKELY_NONZERO",
            matches!(z, ZeroTest::LikelyNonzero { .. }),
        )
    }

    pub fn holds(name: &str, ok: bool) -> Check {
        Check::new(name, if ok { "PASS" } else { "FAIL" }, "PASS", ok)
    }

    /// `|value − target| ≤ tolerance`.
    pub fn near(name: &str, value: f64, target: f64, tolerance: f64) -> Check {
        let ok = (value - target).abs() <= tolerance;
        let mut c = Check::new(
            name,
            if ok { "PASS" } else { "FAIL" },
            &format!("{target} ± {tolerance:e}"),
            ok,
        );
        c.value = Some(value);
        c.tolerance = Some(tolerance);
        c
    }

    pub fn within(name: &str, value: f64, lo: f64, hi: f64) -> Check {
        let ok = value >= lo && value <= hi;
        let mut c = Check::new(
            name,
            if ok { "PASS" } else { "FAIL" },
            &format!("[{lo}, {hi}]"),
            ok,
        );
        c.value = Some(value);
        c
    }

    pub fn info(mut self) -> Check {
        self.required = false;
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Check {
        self.detail = Some(d.into());
        self
    }

    fn tag(&self) -> &'static str {
        match (self.passed, self.required) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "INFO",
        }
    }
}

/// A disagreement with a reference formula; reported, never fatal.
#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub level: &'static str,
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub data: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    pub findings: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    pub status: &'static str,
    #[serde(skip)]
    pub lines: Vec<String>,
    #[serde(skip)]
    clock: Option<Instant>,
}

impl RunReport {
    pub fn new(command: &str, timings: bool) -> RunReport {
        RunReport {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs: BTreeMap::new(),
            data: BTreeMap::new(),
            checks: Vec::new(),
            findings: Vec::new(),
            timings: timings.then(BTreeMap::new),
            status: "pass",
            lines: Vec::new(),
            clock: Some(Instant::now()),
        }
    }

    pub fn input(&mut self, k: &str, v: impl ToString) {
        self.inputs.insert(k.to_string(), v.to_string());
    }

    pub fn data(&mut self, k: &str, v: impl Serialize) {
        self.data.insert(
            k.to_string(),
            serde_json::to_value(v).expect("report data serializes"),
        );
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn warn(&mut self, subject: &str, message: impl Into<String>) {
        self.findings.push(Finding {
            level: "WARN",
            subject: subject.to_string(),
            message: message.into(),
        });
    }

    /// Record the time since the previous mark under `label`.
    pub fn mark(&mut self, label: &str) {
        let now = Instant::now();
        if let (Some(t), Some(start)) = (self.timings.as_mut(), self.clock) {
            t.insert(label.to_string(), now.duration_since(start).as_secs_f64());
        }
        self.clock = Some(now);
    }

    pub fn finish(&mut self) {
        self.status = if self.passed() { "pass" } else { "fail" };
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let _ = writeln!(s, "{l}");
        }
        if !self.lines.is_empty() {
            s.push('\n');
        }
        for c in &self.checks {
            let _ = write!(s, "{} {}: {}", c.tag(), c.name, c.verdict);
            if let Some(v) = c.value {
                let _ = write!(s, " (value {v:.6e}, expected {})", c.expected);
            } else if !c.passed {
                let _ = write!(s, " (expected {})", c.expected);
            }
            if let Some(d) = &c.detail {
                let _ = write!(s, " [{d}]");
            }
            s.push('\n');
        }
        for f in &self.findings {
            let _ = writeln!(s, "{} {}: {}", f.level, f.subject, f.message);
        }
        if let Some(t) = &self.timings {
            for (k, v) in t {
                let _ = writeln!(s, "time {k}: {v:.3} s");
            }
        }
        let failed = self
            .checks
            .iter()
            .filter(|c| !c.passed && c.required)
            .count();
        let _ = writeln!(
            s,
            "{}: {} checks, {} failed, {} warnings",
            self.status.to_uppercase(),
            self.checks.len(),
            failed,
            self.findings.len()
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree_on_verdicts() {
        let mut r = RunReport::new("test", false);
        r.check(Check::zero("a", &ZeroTest::ProvenZero));
        r.check(Check::zero("b", &ZeroTest::Undecided));
        r.check(Check::holds("c", false).info());
        r.warn("d", "typo");
        r.finish();
        assert!(!r.passed());
        let text = r.to_text();
        assert!(text.contains("PASS a: PROVEN_ZERO"));
        assert!(text.contains("FAIL b: UNDECIDED"));
        assert!(text.contains("INFO c: FAIL"));
        assert!(text.contains("WARN d: typo"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["checks"][1]["verdict"], "UNDECIDED");
        assert_eq!(json["status"], "fail");
        assert!(json.get("timings").is_none());
    }

    #[test]
    fn tolerance_checks() {
        assert!(Check::near("x", 1.0 + 1e-10, 1.0, 1e-9).passed);
        assert!(!Check::near("x", 1.1, 1.0, 1e-9).passed);
        assert!(Check::within("o", 2.0, 1.8, 2.2).passed);
    }
}
