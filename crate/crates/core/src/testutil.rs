use crate::field::MMField;
use crate::metric::FiniteMetric;

/// Two points at distance 1; values (0, 1) against (0, 0), uniform weights.
pub(crate) fn worked_pair() -> (MMField, MMField) {
    let d = FiniteMetric::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    (
        MMField::real_uniform(d.clone(), &[0.0, 1.0]).unwrap(),
        MMField::real_uniform(d, &[0.0, 0.0]).unwrap(),
    )
}
