//! Verification reports: one `check <id> <status> <evidence>` line per
//! check, evidence in exact rationals and ordinal literals.

use std::fmt;

use crate::textio::HEADER;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub evidence: String,
}

impl Check {
    pub fn new(id: &str, ok: bool, evidence: impl Into<String>) -> Self {
        Check {
            id: id.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            evidence: evidence.into(),
        }
    }

    pub fn skip(id: &str, evidence: impl Into<String>) -> Self {
        Check {
            id: id.to_string(),
            status: Status::Skip,
            evidence: evidence.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check {} {} {}", self.id, self.status.as_str(), self.evidence)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    /// 0 when no check failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{HEADER}")?;
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        writeln!(f, "result {}", if self.failed() { "fail" } else { "pass" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_do_not_fail() {
        let mut r = Report {
            suite: "demo".into(),
            checks: vec![Check::new("a", true, "x=1/2"), Check::skip("b", "not built")],
        };
        assert_eq!(r.exit_code(), 0);
        assert_eq!(
            r.to_string(),
            "tamedyn 1\nsuite demo\ncheck a pass x=1/2\ncheck b skip not built\nresult pass\n"
        );
        r.checks.push(Check::new("c", false, "y=3"));
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_string().ends_with("result fail\n"));
    }
}
