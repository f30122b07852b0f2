//! Target spaces for field values.

use crate::error::{Error, Result};
use crate::metric::{validate_metric, FiniteMetric};

/// The metric space a field takes values in.
///
/// The set of kinds is closed so that the file format stays deterministic.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpace {
    /// `R^dim` with the Euclidean norm.
    Euclidean { dim: usize },
    /// `R^dim` with the sup norm.
    Sup { dim: usize },
    /// A finite metric space; points are indices into it.
    Finite(FiniteMetric),
    /// Binary words of length `len` with the Hamming (l1) distance.
    Hamming { len: usize },
}

/// A point of some [`TargetSpace`].
#[derive(Debug, Clone, PartialEq)]
pub enum TargetPoint {
    Vector(Vec<f64>),
    Index(usize),
    Bits(Vec<bool>),
}

impl TargetPoint {
    /// A point of the real line.
    pub fn real(x: f64) -> Self {
        TargetPoint::Vector(vec![x])
    }
}

impl TargetSpace {
    /// The real line, the most common target.
    pub fn real_line() -> Self {
        TargetSpace::Euclidean { dim: 1 }
    }

    /// A finite target; the matrix must be a pseudo-metric within `tol`.
    pub fn finite(metric: FiniteMetric, tol: f64) -> Result<Self> {
        let report = validate_metric(&metric, tol);
        if !report.is_valid() {
            return Err(Error::InvalidMetric(report.to_string()));
        }
        Ok(TargetSpace::Finite(metric))
    }

    pub fn check_point(&self, p: &TargetPoint) -> Result<()> {
        let ok = match (self, p) {
            (TargetSpace::Euclidean { dim } | TargetSpace::Sup { dim }, TargetPoint::Vector(v)) => {
                v.len() == *dim && v.iter().all(|x| x.is_finite())
            }
            (TargetSpace::Finite(m), TargetPoint::Index(i)) => *i < m.len(),
            (TargetSpace::Hamming { len }, TargetPoint::Bits(bits)) => bits.len() == *len,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadTargetPoint(format!("{p:?}")))
        }
    }

    /// Distance between two points of this space.
    ///
    /// # Panics
    ///
    /// If either point is not well formed for this space. Fields check their
    /// values on construction, so this only fires on hand-built points.
    pub fn distance(&self, a: &TargetPoint, b: &TargetPoint) -> f64 {
        match (self, a, b) {
            (TargetSpace::Euclidean { .. }, TargetPoint::Vector(x), TargetPoint::Vector(y)) => {
                assert_eq!(x.len(), y.len(), "target dimension mismatch");
                x.iter().zip(y).map(|(s, t)| (s - t) * (s - t)).sum::<f64>().sqrt()
            }
            (TargetSpace::Sup { .. }, TargetPoint::Vector(x), TargetPoint::Vector(y)) => {
                assert_eq!(x.len(), y.len(), "target dimension mismatch");
                x.iter().zip(y).map(|(s, t)| (s - t).abs()).fold(0.0, f64::max)
            }
            (TargetSpace::Finite(m), TargetPoint::Index(i), TargetPoint::Index(j)) => m.get(*i, *j),
            (TargetSpace::Hamming { .. }, TargetPoint::Bits(x), TargetPoint::Bits(y)) => {
                assert_eq!(x.len(), y.len(), "word length mismatch");
                x.iter().zip(y).filter(|(s, t)| s != t).count() as f64
            }
            _ => panic!("target point kind does not match target space {self:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn built_in_distances() {
        let e = TargetSpace::Euclidean { dim: 2 };
        let a = TargetPoint::Vector(vec![0.0, 0.0]);
        let b = TargetPoint::Vector(vec![3.0, 4.0]);
        assert_eq!(e.distance(&a, &b), 5.0);
        assert_eq!(TargetSpace::Sup { dim: 2 }.distance(&a, &b), 4.0);

        let h = TargetSpace::Hamming { len: 4 };
        let x = TargetPoint::Bits(vec![true, false, true, true]);
        let y = TargetPoint::Bits(vec![false, false, true, false]);
        assert_eq!(h.distance(&x, &y), 2.0);
        assert_eq!(h.distance(&x, &x), 0.0);

        let m = FiniteMetric::from_rows(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let f = TargetSpace::finite(m, 1e-9).unwrap();
        assert_eq!(f.distance(&TargetPoint::Index(0), &TargetPoint::Index(1)), 2.0);
    }

    #[test]
    fn point_checks() {
        let e = TargetSpace::Euclidean { dim: 2 };
        assert!(e.check_point(&TargetPoint::Vector(vec![1.0, 2.0])).is_ok());
        assert!(e.check_point(&TargetPoint::Vector(vec![1.0])).is_err());
        assert!(e.check_point(&TargetPoint::Index(0)).is_err());
        let h = TargetSpace::Hamming { len: 2 };
        assert!(h.check_point(&TargetPoint::Bits(vec![true])).is_err());
        let m = FiniteMetric::from_rows(vec![vec![0.0]]).unwrap();
        let f = TargetSpace::Finite(m);
        assert!(f.check_point(&TargetPoint::Index(1)).is_err());
    }

    #[test]
    fn finite_target_must_be_a_metric() {
        let bad = FiniteMetric::from_rows(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(TargetSpace::finite(bad, 1e-9).is_err());
    }
}
