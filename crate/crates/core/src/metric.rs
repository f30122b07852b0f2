//! Finite (pseudo-)metric spaces stored as dense distance matrices.

use crate::error::{Error, Result};
use crate::report::{ValidationReport, Violation};

/// Default tolerance for metric and Lipschitz axiom checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// An `n x n` matrix of finite nonnegative distances.
///
/// Zero off-diagonal entries are allowed, so this also represents
/// pseudo-metrics. Construction only checks shape and entry ranges; the
/// metric axioms are checked by [`validate_metric`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    n: usize,
    d: Vec<f64>,
}

impl FiniteMetric {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: i, len: row.len(), expected: n });
            }
            for (j, &value) in row.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::BadEntry { i, j, value });
                }
            }
            d.extend(row);
        }
        Ok(FiniteMetric { n, d })
    }

    /// Builds the matrix entry by entry from `dist(i, j)`.
    pub fn from_fn(n: usize, mut dist: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let rows = (0..n).map(|i| (0..n).map(|j| dist(i, j)).collect()).collect();
        Self::from_rows(rows)
    }

    /// Euclidean distances between the given points.
    pub fn euclidean(points: &[Vec<f64>]) -> Result<Self> {
        check_point_dims(points)?;
        Self::from_fn(points.len(), |i, j| {
            points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
        })
    }

    /// Sup-norm (Chebyshev) distances between the given points.
    pub fn sup_norm(points: &[Vec<f64>]) -> Result<Self> {
        check_point_dims(points)?;
        Self::from_fn(points.len(), |i, j| {
            points[i].iter().zip(&points[j]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        })
    }

    /// Builds and validates in one step.
    pub fn validated(rows: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let m = Self::from_rows(rows)?;
        let report = validate_metric(&m, tol);
        if report.is_valid() {
            Ok(m)
        } else {
            Err(Error::InvalidMetric(report.to_string()))
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Restriction to `indices`, in the order given.
    pub fn submetric(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_indices(indices)?;
        let k = indices.len();
        let mut d = Vec::with_capacity(k * k);
        for &a in indices {
            for &b in indices {
                d.push(self.get(a, b));
            }
        }
        Ok(FiniteMetric { n: k, d })
    }

    /// Hausdorff distance between the index sets `a` and `b`.
    pub fn hausdorff(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_indices(a)?;
        self.check_indices(b)?;
        Ok(self.hausdorff_unchecked(a, b))
    }

    pub(crate) fn hausdorff_unchecked(&self, a: &[usize], b: &[usize]) -> f64 {
        let directed = |from: &[usize], to: &[usize]| {
            from.iter()
                .map(|&x| to.iter().map(|&y| self.get(x, y)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        directed(a, b).max(directed(b, a))
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n {
            Err(Error::IndexOutOfRange { index, n: self.n })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_indices(&self, indices: &[usize]) -> Result<()> {
        indices.iter().try_for_each(|&i| self.check_index(i))
    }
}

fn check_point_dims(points: &[Vec<f64>]) -> Result<()> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyMatrix);
    };
    for p in points {
        if p.len() != first.len() {
            return Err(Error::DimensionMismatch {
                what: "point",
                got: p.len(),
                expected: first.len(),
            });
        }
        if let Some(&bad) = p.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite coordinate {bad}")));
        }
    }
    Ok(())
}

/// Checks the pseudo-metric axioms by brute force over all pairs and triples.
///
/// Triangle violations are reported as `(i, j, k)` with `i < k`, meaning
/// `d[i][k] > d[i][j] + d[j][k] + tol`.
pub fn validate_metric(m: &FiniteMetric, tol: f64) -> ValidationReport {
    let n = m.len();
    let mut report = ValidationReport::default();
    for i in 0..n {
        let value = m.get(i, i);
        if value > tol {
            report.push(Violation::Diagonal { i, value });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = (m.get(i, j) - m.get(j, i)).abs();
            if gap > tol {
                report.push(Violation::Asymmetry { i, j, gap });
            }
        }
    }
    for i in 0..n {
        for k in i + 1..n {
            let direct = m.get(i, k);
            for j in 0..n {
                let slack = direct - m.get(i, j) - m.get(j, k);
                if slack > tol {
                    report.push(Violation::Triangle { i, j, k, slack });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> FiniteMetric {
        FiniteMetric::from_rows(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn trivial_metrics_are_valid() {
        let one = FiniteMetric::from_rows(vec![vec![0.0]]).unwrap();
        assert!(validate_metric(&one, DEFAULT_TOL).is_valid());
        let two = FiniteMetric::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(validate_metric(&two, DEFAULT_TOL).is_valid());
    }

    #[test]
    fn reports_triangle_violation() {
        let m = FiniteMetric::from_rows(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ])
        .unwrap();
        let report = validate_metric(&m, DEFAULT_TOL);
        assert_eq!(report.total, 1);
        assert_eq!(report.violations[0], Violation::Triangle { i: 0, j: 1, k: 2, slack: 1.0 });
    }

    #[test]
    fn reports_diagonal_and_asymmetry() {
        let m = FiniteMetric::from_rows(vec![vec![0.5, 1.0], vec![2.0, 0.0]]).unwrap();
        let report = validate_metric(&m, DEFAULT_TOL);
        assert!(report.violations.contains(&Violation::Diagonal { i: 0, value: 0.5 }));
        assert!(report.violations.contains(&Violation::Asymmetry { i: 0, j: 1, gap: 1.0 }));
    }

    #[test]
    fn pseudo_metric_zero_distance_is_fine() {
        let m = FiniteMetric::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(validate_metric(&m, 0.0).is_valid());
    }

    #[test]
    fn report_is_capped() {
        // Every off-diagonal pair is asymmetric.
        let m = FiniteMetric::from_fn(20, |i, j| if i < j { 1.0 } else if i > j { 2.0 } else { 0.0 })
            .unwrap();
        let report = validate_metric(&m, DEFAULT_TOL);
        assert_eq!(report.violations.len(), crate::report::MAX_VIOLATIONS);
        assert!(report.total > crate::report::MAX_VIOLATIONS);
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert_eq!(FiniteMetric::from_rows(vec![]), Err(Error::EmptyMatrix));
        assert!(matches!(
            FiniteMetric::from_rows(vec![vec![0.0, 1.0], vec![1.0]]),
            Err(Error::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            FiniteMetric::from_rows(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(Error::BadEntry { .. })
        ));
        assert!(matches!(
            FiniteMetric::from_rows(vec![vec![0.0, f64::NAN], vec![1.0, 0.0]]),
            Err(Error::BadEntry { .. })
        ));
    }

    #[test]
    fn hausdorff_examples() {
        let m = path3();
        assert_eq!(m.hausdorff(&[0, 1], &[0, 1]).unwrap(), 0.0);
        assert_eq!(m.hausdorff(&[0, 1], &[1, 2]).unwrap(), 1.0);
        assert_eq!(m.hausdorff(&[0], &[2]).unwrap(), 2.0);
        assert_eq!(m.hausdorff(&[], &[2]), Err(Error::EmptySet));
        assert!(matches!(m.hausdorff(&[0], &[7]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn diameter_and_submetric() {
        let one = FiniteMetric::from_rows(vec![vec![0.0]]).unwrap();
        assert_eq!(one.diameter(), 0.0);
        let m = path3();
        assert_eq!(m.diameter(), 2.0);
        let sub = m.submetric(&[0, 2]).unwrap();
        assert_eq!(sub.rows(), vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
        assert!(m.submetric(&[3]).is_err());
    }

    #[test]
    fn point_cloud_metrics() {
        let pts = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        assert_eq!(FiniteMetric::euclidean(&pts).unwrap().get(0, 1), 5.0);
        assert_eq!(FiniteMetric::sup_norm(&pts).unwrap().get(0, 1), 4.0);
        assert!(FiniteMetric::euclidean(&[vec![0.0], vec![1.0, 2.0]]).is_err());
    }
}
