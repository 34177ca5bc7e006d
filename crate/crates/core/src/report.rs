//! Structured text records for verifier output.
//!
//! One record per line: `check=<name> <param>=<value>... verdict=<pass|fail> <detail>=<value>...`.
//! Values never contain spaces; big integers are written in decimal.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub params: Vec<(String, String)>,
    pub passed: bool,
    pub details: Vec<(String, String)>,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report {
            check: check.to_string(),
            params: Vec::new(),
            passed: true,
            details: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.push((key.to_string(), value.to_string()));
    }

    pub fn fail(&mut self, reason: &str) {
        self.passed = false;
        self.detail("reason", reason);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.details
            .iter()
            .chain(&self.params)
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn clean(value: &str) -> String {
    value.replace(char::is_whitespace, "_")
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check={}", self.check)?;
        for (k, v) in &self.params {
            write!(f, " {k}={}", clean(v))?;
        }
        write!(f, " verdict={}", if self.passed { "pass" } else { "fail" })?;
        for (k, v) in &self.details {
            write!(f, " {k}={}", clean(v))?;
        }
        Ok(())
    }
}

/// Pass/fail counts over a batch of reports.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl Summary {
    pub fn add(&mut self, report: &Report) {
        if report.passed {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(report.to_string());
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "summary total={} passed={} failed={}",
            self.passed + self.failed,
            self.passed,
            self.failed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_format() {
        let mut r = Report::new("demo").param("n", 4).param("N", 2);
        r.detail("max_gap", 24);
        assert_eq!(r.to_string(), "check=demo n=4 N=2 verdict=pass max_gap=24");
        r.fail("gap 5 not allowed");
        assert_eq!(
            r.to_string(),
            "check=demo n=4 N=2 verdict=fail max_gap=24 reason=gap_5_not_allowed"
        );
        assert_eq!(r.get("max_gap"), Some("24"));
        let mut s = Summary::default();
        s.add(&r);
        assert!(!s.all_passed());
        assert_eq!(s.to_string(), "summary total=1 passed=0 failed=1");
    }
}
