//! Pass/fail check reports shared by the validator and the verifiers.
//!
//! Reports render as one line per check, `CHECK <name> PASS|FAIL: <detail>`,
//! in the order the checks ran. Rendering is deterministic so that runs
//! can be diffed.

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Human-readable summary; carries the counterexample on failure.
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    /// Record a check outcome: `Ok(detail)` passes, `Err(detail)` fails.
    pub fn add(&mut self, name: &str, outcome: Result<String, String>) {
        let (pass, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail,
        });
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// The first failing check, if any.
    pub fn failing(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "CHECK {} {}: {}\n",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.detail
            ));
        }
        out
    }
}
