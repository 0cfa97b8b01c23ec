use std::fmt;

/// One measured property against its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    /// Human-readable form of the pass condition, e.g. `value <= tol`.
    pub relation: &'static str,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance`; NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            relation: "<=",
            pass: value <= tolerance,
        }
    }

    /// Passes when `value < bound`.
    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: bound,
            relation: "<",
            pass: value < bound,
        }
    }

    /// Passes when `value > bound`.
    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: bound,
            relation: ">",
            pass: value > bound,
        }
    }

    /// Adds an extra condition (a runtime budget, say) to the verdict.
    pub fn and(mut self, ok: bool) -> Self {
        self.pass &= ok;
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {:.6e} {} {:.6e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.relation,
            self.tolerance
        )
    }
}

/// Checks and headline numbers of one scenario run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub checks: Vec<Check>,
    pub quantities: Vec<(String, f64)>,
}

impl RunReport {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            ..Self::default()
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn quantity(&mut self, name: impl Into<String>, value: f64) {
        self.quantities.push((name.into(), value));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// `kind,name,value,tolerance,pass` rows for the report file.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,name,value,tolerance,pass\n");
        for (name, v) in &self.quantities {
            s.push_str(&format!("quantity,{name},{v:.16e},,\n"));
        }
        for c in &self.checks {
            s.push_str(&format!("check,{},{:.16e},{:.16e},{}\n", c.name, c.value, c.tolerance, c.pass));
        }
        s
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.scenario)?;
        for (name, v) in &self.quantities {
            writeln!(f, "  {name} = {v:.10e}")?;
        }
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        write!(f, "{}", if self.passed() { "all checks passed" } else { "some checks FAILED" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_fails() {
        assert!(!Check::at_most("x", f64::NAN, 1.0).pass);
        assert!(!Check::below("x", f64::NAN, 1.0).pass);
    }

    #[test]
    fn overall_verdict() {
        let mut r = RunReport::new("t");
        r.check(Check::at_most("a", 0.5, 1.0));
        assert_eq!(r.exit_code(), 0);
        r.check(Check::above("b", 0.5, 1.0));
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_csv().contains("check,b,5.0000000000000000e-1,1.0000000000000000e0,false"));
    }
}
