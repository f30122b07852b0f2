//! Metric-measure fields: a finite metric space, a probability vector, and a
//! 1-Lipschitz map into a target space.

use crate::error::{Error, Result};
use crate::metric::FiniteMetric;
use crate::report::{ValidationReport, Violation};
use crate::target::{TargetPoint, TargetSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct MMField {
    metric: FiniteMetric,
    measure: Vec<f64>,
    target: TargetSpace,
    values: Vec<TargetPoint>,
}

/// The uniform probability vector on `n` points.
pub fn uniform_measure(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

impl MMField {
    /// Assembles a field, checking shapes and that every value belongs to
    /// `target`. The Lipschitz and measure constraints are checked by
    /// [`validate_field`]; use [`MMField::validated`] to require them.
    pub fn new(
        metric: FiniteMetric,
        measure: Vec<f64>,
        target: TargetSpace,
        values: Vec<TargetPoint>,
    ) -> Result<Self> {
        let n = metric.len();
        if measure.len() != n {
            return Err(Error::DimensionMismatch { what: "measure", got: measure.len(), expected: n });
        }
        if values.len() != n {
            return Err(Error::DimensionMismatch { what: "values", got: values.len(), expected: n });
        }
        if let Some(bad) = measure.iter().find(|m| !m.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite mass {bad}")));
        }
        for v in &values {
            target.check_point(v)?;
        }
        Ok(MMField { metric, measure, target, values })
    }

    /// [`MMField::new`] followed by [`validate_field`].
    pub fn validated(
        metric: FiniteMetric,
        measure: Vec<f64>,
        target: TargetSpace,
        values: Vec<TargetPoint>,
        tol: f64,
    ) -> Result<Self> {
        let f = Self::new(metric, measure, target, values)?;
        f.require_valid(tol)?;
        Ok(f)
    }

    /// Real-valued field with uniform measure; handy in tests and examples.
    pub fn real_uniform(metric: FiniteMetric, values: &[f64]) -> Result<Self> {
        let n = metric.len();
        Self::new(
            metric,
            uniform_measure(n),
            TargetSpace::real_line(),
            values.iter().map(|&x| TargetPoint::real(x)).collect(),
        )
    }

    pub(crate) fn require_valid(&self, tol: f64) -> Result<()> {
        let report = validate_field(self, tol);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidField(report.to_string()))
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.metric.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn target(&self) -> &TargetSpace {
        &self.target
    }

    pub fn values(&self) -> &[TargetPoint] {
        &self.values
    }

    /// `d_B(pi(i), pi(j))`.
    pub fn value_gap(&self, i: usize, j: usize) -> f64 {
        self.target.distance(&self.values[i], &self.values[j])
    }

    /// Relabels points so that new point `k` is old point `perm[k]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<MMField> {
        let n = self.len();
        if perm.len() != n {
            return Err(Error::DimensionMismatch { what: "permutation", got: perm.len(), expected: n });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            self.metric.check_index(p)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter(format!("index {p} repeated in permutation")));
            }
        }
        let metric = self.metric.submetric(perm)?;
        Ok(MMField {
            metric,
            measure: perm.iter().map(|&p| self.measure[p]).collect(),
            target: self.target.clone(),
            values: perm.iter().map(|&p| self.values[p].clone()).collect(),
        })
    }

    #[cfg(test)]
    pub(crate) fn into_parts(self) -> (FiniteMetric, Vec<f64>, TargetSpace, Vec<TargetPoint>) {
        (self.metric, self.measure, self.target, self.values)
    }
}

/// Checks that the value map is 1-Lipschitz and the measure is a probability
/// vector, both within `tol`. Metric axioms are not rechecked here.
pub fn validate_field(f: &MMField, tol: f64) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = f.len();
    for i in 0..n {
        for j in i + 1..n {
            let excess = f.value_gap(i, j) - f.metric.get(i, j);
            if excess > tol {
                report.push(Violation::Lipschitz { i, j, excess });
            }
        }
    }
    for (i, &value) in f.measure.iter().enumerate() {
        if value < 0.0 {
            report.push(Violation::NegativeMass { i, value });
        }
    }
    let sum: f64 = f.measure.iter().sum();
    let excess = (sum - 1.0).abs();
    if excess > tol {
        report.push(Violation::MeasureSum { sum, excess });
    }
    report
}
