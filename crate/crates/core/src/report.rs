use std::fmt;

use serde::Serialize;

/// Maximum number of violations a report keeps.
pub const MAX_VIOLATIONS: usize = 100;

/// A single failed axiom or constraint.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `d[i][i] != 0`.
    Diagonal { i: usize, value: f64 },
    /// `d[i][j] != d[j][i]`.
    Asymmetry { i: usize, j: usize, gap: f64 },
    /// `d[i][k] > d[i][j] + d[j][k] + tol`; `slack` is the excess.
    Triangle { i: usize, j: usize, k: usize, slack: f64 },
    /// `d_B(pi(i), pi(j)) > d[i][j] + tol`.
    Lipschitz { i: usize, j: usize, excess: f64 },
    /// Negative mass at point `i`.
    NegativeMass { i: usize, value: f64 },
    /// Total mass differs from 1.
    MeasureSum { sum: f64, excess: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Diagonal { i, value } => write!(f, "d[{i}][{i}] = {value} is not zero"),
            Violation::Asymmetry { i, j, gap } => {
                write!(f, "d[{i}][{j}] and d[{j}][{i}] differ by {gap}")
            }
            Violation::Triangle { i, j, k, slack } => {
                write!(f, "d[{i}][{k}] exceeds d[{i}][{j}] + d[{j}][{k}] by {slack}")
            }
            Violation::Lipschitz { i, j, excess } => {
                write!(f, "value gap between {i} and {j} exceeds their distance by {excess}")
            }
            Violation::NegativeMass { i, value } => write!(f, "mass at {i} is negative ({value})"),
            Violation::MeasureSum { sum, excess } => {
                write!(f, "measure sums to {sum} (off by {excess})")
            }
        }
    }
}

/// Outcome of a validation pass. Empty means every checked constraint holds.
///
/// Violations are listed in index order and capped at [`MAX_VIOLATIONS`];
/// `total` counts all of them.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub total: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.total == 0
    }

    pub(crate) fn push(&mut self, v: Violation) {
        if self.violations.len() < MAX_VIOLATIONS {
            self.violations.push(v);
        }
        self.total += 1;
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for v in other.violations {
            if self.violations.len() < MAX_VIOLATIONS {
                self.violations.push(v);
            }
        }
        self.total += other.total;
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        writeln!(f, "{} violation(s)", self.total)?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}
