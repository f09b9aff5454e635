use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ScenarioName;

/// Column set emitted as one CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    /// Short description of the figure or relation this table reproduces.
    pub source: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, source: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            source: source.to_string(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// |measured − target| ≤ tolerance
    Absolute,
    /// |measured/target − 1| ≤ tolerance
    Relative,
    /// measured ≤ tolerance (target is reported for context)
    AtMost,
    /// measured > tolerance
    Exceeds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub provenance: String,
    /// Window of the independent variable the check was evaluated on.
    pub window: Option<(f64, f64)>,
    pub passed: bool,
}

impl Check {
    pub fn new(
        name: &str,
        measured: f64,
        target: f64,
        tolerance: f64,
        comparison: Comparison,
        provenance: &str,
    ) -> Self {
        let passed = match comparison {
            Comparison::Absolute => (measured - target).abs() <= tolerance,
            Comparison::Relative => (measured / target - 1.0).abs() <= tolerance,
            Comparison::AtMost => measured <= tolerance,
            Comparison::Exceeds => measured > tolerance,
        };
        Self {
            name: name.to_string(),
            measured,
            target,
            tolerance,
            comparison,
            provenance: provenance.to_string(),
            window: None,
            passed,
        }
    }

    pub fn absolute(name: &str, measured: f64, target: f64, tolerance: f64, provenance: &str) -> Self {
        Self::new(name, measured, target, tolerance, Comparison::Absolute, provenance)
    }

    pub fn relative(name: &str, measured: f64, target: f64, tolerance: f64, provenance: &str) -> Self {
        Self::new(name, measured, target, tolerance, Comparison::Relative, provenance)
    }

    pub fn at_most(name: &str, measured: f64, limit: f64, provenance: &str) -> Self {
        Self::new(name, measured, 0.0, limit, Comparison::AtMost, provenance)
    }

    pub fn exceeds(name: &str, measured: f64, limit: f64, provenance: &str) -> Self {
        Self::new(name, measured, limit, limit, Comparison::Exceeds, provenance)
    }

    pub fn on_window(mut self, lo: f64, hi: f64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    /// Deviation in the units the tolerance is expressed in.
    pub fn deviation(&self) -> f64 {
        match self.comparison {
            Comparison::Absolute => (self.measured - self.target).abs(),
            Comparison::Relative => (self.measured / self.target - 1.0).abs(),
            Comparison::AtMost | Comparison::Exceeds => self.measured,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub name: ScenarioName,
    pub parameters: BTreeMap<String, f64>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl ScenarioResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        assert!(Check::absolute("a", 1.0005, 1.0, 1e-3, "").passed);
        assert!(!Check::absolute("a", 1.002, 1.0, 1e-3, "").passed);
        assert!(Check::relative("r", 101.0, 100.0, 0.02, "").passed);
        assert!(!Check::relative("r", 103.0, 100.0, 0.02, "").passed);
        assert!(Check::at_most("m", 1e-10, 1e-9, "").passed);
        assert!(Check::exceeds("e", 1e-3, 0.0, "").passed);
        assert!(!Check::exceeds("e", 0.0, 0.0, "").passed);
    }

    #[test]
    fn nan_never_passes() {
        for c in [
            Check::absolute("a", f64::NAN, 0.0, 1.0, ""),
            Check::relative("r", f64::NAN, 1.0, 1.0, ""),
            Check::at_most("m", f64::NAN, 1.0, ""),
            Check::exceeds("e", f64::NAN, 0.0, ""),
        ] {
            assert!(!c.passed, "{}", c.name);
        }
    }

    #[test]
    fn table_columns() {
        let mut t = Table::new("t", "test", &["x", "y"]);
        t.push(vec![1.0, 2.0]);
        t.push(vec![3.0, 4.0]);
        assert_eq!(t.column("y").unwrap(), vec![2.0, 4.0]);
        assert!(t.column("z").is_none());
    }
}
