//! Structured text reports: `key: value` fields followed by PASS/FAIL clauses.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    /// Present on every failing clause.
    pub witness: Option<String>,
}

impl Clause {
    pub fn pass(name: impl Into<String>) -> Clause {
        Clause {
            name: name.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Clause {
        Clause {
            name: name.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }

    /// Passes iff `ok`; the witness is only rendered on failure.
    pub fn check<F: FnOnce() -> String>(name: impl Into<String>, ok: bool, witness: F) -> Clause {
        if ok {
            Clause::pass(name)
        } else {
            Clause::fail(name, witness())
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.passed, &self.witness) {
            (true, _) => write!(f, "PASS {}", self.name),
            (false, Some(w)) => write!(f, "FAIL {} witness: {}", self.name, w),
            (false, None) => write!(f, "FAIL {}", self.name),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub fields: Vec<(String, String)>,
    pub clauses: Vec<Clause>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report {
            title: title.into(),
            ..Report::default()
        }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Report {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn clause(&mut self, clause: Clause) -> &mut Report {
        self.clauses.push(clause);
        self
    }

    pub fn clauses(&mut self, clauses: impl IntoIterator<Item = Clause>) -> &mut Report {
        self.clauses.extend(clauses);
        self
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "report: {}", self.title)?;
        for (k, v) in &self.fields {
            if v.contains('\n') {
                writeln!(f, "{k}:")?;
                for line in v.lines() {
                    writeln!(f, "  {line}")?;
                }
            } else {
                writeln!(f, "{k}: {v}")?;
            }
        }
        for c in &self.clauses {
            writeln!(f, "clause: {c}")?;
        }
        writeln!(
            f,
            "verdict: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        let mut r = Report::new("demo");
        r.field("size", 3).field("rows", "a\nb");
        r.clause(Clause::pass("first"))
            .clause(Clause::check("second", false, || "x".into()));
        assert!(!r.passed());
        assert_eq!(
            r.to_string(),
            "report: demo\nsize: 3\nrows:\n  a\n  b\nclause: PASS first\nclause: FAIL second witness: x\nverdict: FAIL\n"
        );
    }
}
