//! Lipschitz functions on finite metric spaces: membership tests for the
//! 1-Lipschitz functions, the distance-like functions `Δ(X)` and their
//! intersection `Δ¹(X)`, Whitney-McShane extension, the Kuratowski embedding,
//! and one-point extensions of fields.
//!
//! A function `f` on `X` lies in `Δ¹(X)` exactly when setting
//! `d(x*, x) = f(x)` defines a one-point pseudo-metric extension `X ∪ {x*}`.

use std::ops::Index;

use crate::error::{Error, Result};
use crate::field::MMField;
use crate::metric::FiniteMetric;
use crate::target::TargetPoint;

/// A real function on the points of a [`FiniteMetric`], stored by index.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFunction(Vec<f64>);

impl RealFunction {
    pub fn new(values: Vec<f64>) -> Self {
        RealFunction(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Restriction to `indices`, in the order given.
    pub fn restrict(&self, indices: &[usize]) -> RealFunction {
        RealFunction(indices.iter().map(|&i| self.0[i]).collect())
    }

    /// The sup distance `max_x |f(x) - g(x)|`.
    pub fn sup_distance(&self, other: &RealFunction) -> Result<f64> {
        check_len(other, self.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

impl Index<usize> for RealFunction {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for RealFunction {
    fn from(values: Vec<f64>) -> Self {
        RealFunction(values)
    }
}

fn check_len(f: &RealFunction, n: usize) -> Result<()> {
    if f.len() != n {
        return Err(Error::DimensionMismatch { what: "function", got: f.len(), expected: n });
    }
    Ok(())
}

/// First pair `(i, j)` with `|f(i) - f(j)| > d(i, j) + tol`, with its excess.
fn lipschitz_violation(f: &RealFunction, m: &FiniteMetric, tol: f64) -> Option<(usize, usize, f64)> {
    let n = m.len();
    for i in 0..n {
        for j in i + 1..n {
            let excess = (f[i] - f[j]).abs() - m.get(i, j);
            if excess > tol {
                return Some((i, j, excess));
            }
        }
    }
    None
}

pub fn is_one_lipschitz(f: &RealFunction, m: &FiniteMetric, tol: f64) -> Result<bool> {
    check_len(f, m.len())?;
    Ok(lipschitz_violation(f, m, tol).is_none())
}

/// `d(x, y) <= f(x) + f(y) + tol` for all `x, y`, including `x = y`.
pub fn is_delta(f: &RealFunction, m: &FiniteMetric, tol: f64) -> Result<bool> {
    check_len(f, m.len())?;
    let n = m.len();
    Ok((0..n).all(|i| (i..n).all(|j| m.get(i, j) <= f[i] + f[j] + tol)))
}

pub fn is_delta1(f: &RealFunction, m: &FiniteMetric, tol: f64) -> Result<bool> {
    Ok(is_one_lipschitz(f, m, tol)? && is_delta(f, m, tol)?)
}

/// Whitney-McShane extension of `f`, given on the points `support`, to the
/// whole space: `f~(x) = min_a f(a) + d(a, x)`.
///
/// `f[k]` is the value at `support[k]`. The result is the largest 1-Lipschitz
/// function agreeing with `f` on `support`. Fails if `f` is not 1-Lipschitz
/// on `support` within `tol`.
pub fn whitney_mcshane(
    f: &RealFunction,
    m: &FiniteMetric,
    support: &[usize],
    tol: f64,
) -> Result<RealFunction> {
    if support.is_empty() {
        return Err(Error::EmptySet);
    }
    check_len(f, support.len())?;
    m.check_indices(support)?;
    let sub = m.submetric(support)?;
    if let Some((i, j, excess)) = lipschitz_violation(f, &sub, tol) {
        return Err(Error::NotLipschitz { i: support[i], j: support[j], excess });
    }
    let values = (0..m.len())
        .map(|x| {
            support
                .iter()
                .zip(f.values())
                .map(|(&a, &fa)| fa + m.get(a, x))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(RealFunction(values))
}

/// The Kuratowski row `d(x, ·)`.
pub fn kuratowski_row(m: &FiniteMetric, x: usize) -> Result<RealFunction> {
    m.check_index(x)?;
    Ok(RealFunction(m.row(x).to_vec()))
}

/// Coordinatewise maximum of a non-empty family.
pub fn pointwise_sup(fs: &[RealFunction]) -> Result<RealFunction> {
    let (first, rest) = fs.split_first().ok_or(Error::EmptyList)?;
    let mut out = first.clone();
    for f in rest {
        check_len(f, out.len())?;
        for (o, &v) in out.0.iter_mut().zip(f.values()) {
            *o = o.max(v);
        }
    }
    Ok(out)
}

/// Proposed new point for a field: its distances to the existing points and
/// its value in the target.
#[derive(Debug, Clone, PartialEq)]
pub struct OnePointCandidate {
    pub f: RealFunction,
    pub b: TargetPoint,
}

/// How mass is assigned after adding a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MassMode {
    /// The new point carries no mass; all transport quantities are unchanged.
    #[default]
    ZeroMass,
    /// Every point, old and new, gets mass `1/(n+1)`.
    UniformReweight,
}

fn check_candidate(field: &MMField, c: &OnePointCandidate) -> Result<()> {
    check_len(&c.f, field.len())?;
    field.target().check_point(&c.b)
}

/// True iff `c.f` is in `Δ¹` of the field's metric and
/// `d_B(c.b, pi(i)) <= c.f[i] + tol` for every point `i`.
pub fn field_one_point_feasible(field: &MMField, c: &OnePointCandidate, tol: f64) -> Result<bool> {
    check_candidate(field, c)?;
    if !is_delta1(&c.f, field.metric(), tol)? {
        return Ok(false);
    }
    Ok(field
        .values()
        .iter()
        .zip(c.f.values())
        .all(|(v, &fi)| field.target().distance(&c.b, v) <= fi + tol))
}

/// Adds the candidate as point `n` of a new `(n+1)`-point field.
pub fn field_one_point_extend(
    field: &MMField,
    c: &OnePointCandidate,
    mode: MassMode,
    tol: f64,
) -> Result<MMField> {
    if !field_one_point_feasible(field, c, tol)? {
        return Err(Error::Infeasible(
            "distances must form a one-point extension that dominates the value gaps".into(),
        ));
    }
    let n = field.len();
    let m = field.metric();
    // Clamp tiny negative entries that tolerance let through.
    let fx = |i: usize| c.f[i].max(0.0);
    let metric = FiniteMetric::from_fn(n + 1, |i, j| match (i == n, j == n) {
        (true, true) => 0.0,
        (true, false) => fx(j),
        (false, true) => fx(i),
        (false, false) => m.get(i, j),
    })?;
    let measure = match mode {
        MassMode::ZeroMass => {
            let mut mu = field.measure().to_vec();
            mu.push(0.0);
            mu
        }
        MassMode::UniformReweight => vec![1.0 / (n + 1) as f64; n + 1],
    };
    let mut values = field.values().to_vec();
    values.push(c.b.clone());
    MMField::new(metric, measure, field.target().clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::validate_field;
    use crate::metric::{validate_metric, DEFAULT_TOL};

    const TOL: f64 = DEFAULT_TOL;

    fn two_point(d: f64) -> FiniteMetric {
        FiniteMetric::from_rows(vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    // a1, a2 at distance 2 with x at distance 1 from both.
    fn wedge() -> FiniteMetric {
        FiniteMetric::from_rows(vec![
            vec![0.0, 2.0, 1.0],
            vec![2.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn zero_function_membership() {
        let zero = RealFunction::new(vec![0.0, 0.0]);
        assert!(is_one_lipschitz(&zero, &two_point(1.0), TOL).unwrap());
        assert!(!is_delta(&zero, &two_point(1.0), TOL).unwrap());
        assert!(is_delta(&zero, &two_point(0.0), TOL).unwrap());
    }

    #[test]
    fn lipschitz_but_not_delta() {
        let f = RealFunction::new(vec![0.0, 1.0]);
        let m = two_point(2.0);
        assert!(is_one_lipschitz(&f, &m, TOL).unwrap());
        assert!(!is_delta(&f, &m, TOL).unwrap());
        assert!(!is_delta1(&f, &m, TOL).unwrap());
    }

    #[test]
    fn kuratowski_rows_are_delta1_and_isometric() {
        let m = wedge();
        for x in 0..3 {
            let row = kuratowski_row(&m, x).unwrap();
            assert!(is_delta1(&row, &m, 0.0).unwrap());
            for y in 0..3 {
                let other = kuratowski_row(&m, y).unwrap();
                assert_eq!(row.sup_distance(&other).unwrap(), m.get(x, y));
            }
        }
        let m3 = two_point(3.0);
        let gap = kuratowski_row(&m3, 0).unwrap().sup_distance(&kuratowski_row(&m3, 1).unwrap());
        assert_eq!(gap.unwrap(), 3.0);
        assert!(kuratowski_row(&m3, 2).is_err());
    }

    #[test]
    fn sup_distance_to_kuratowski_row_recovers_value() {
        let m = wedge();
        // f = max(d(0,.), d(1,.)) lies in Δ¹.
        let f = pointwise_sup(&[kuratowski_row(&m, 0).unwrap(), kuratowski_row(&m, 1).unwrap()])
            .unwrap();
        assert!(is_delta1(&f, &m, 0.0).unwrap());
        for x in 0..3 {
            let row = kuratowski_row(&m, x).unwrap();
            assert_eq!(f.sup_distance(&row).unwrap(), f[x]);
        }
    }

    #[test]
    fn whitney_mcshane_examples() {
        let m = wedge();
        let ext = whitney_mcshane(&RealFunction::new(vec![0.0, 2.0]), &m, &[0, 1], TOL).unwrap();
        assert_eq!(ext.values(), &[0.0, 2.0, 1.0]);

        let full = RealFunction::new(vec![0.5, 1.0, 0.25]);
        assert_eq!(whitney_mcshane(&full, &m, &[0, 1, 2], TOL).unwrap(), full);

        let single = whitney_mcshane(&RealFunction::new(vec![4.0]), &m, &[2], TOL).unwrap();
        assert_eq!(single.values(), &[5.0, 5.0, 4.0]);
    }

    #[test]
    fn whitney_mcshane_rejects_bad_input() {
        let m = wedge();
        assert_eq!(
            whitney_mcshane(&RealFunction::new(vec![]), &m, &[], TOL),
            Err(Error::EmptySet)
        );
        assert!(matches!(
            whitney_mcshane(&RealFunction::new(vec![0.0, 3.0]), &m, &[0, 1], TOL),
            Err(Error::NotLipschitz { i: 0, j: 1, .. })
        ));
        assert!(whitney_mcshane(&RealFunction::new(vec![0.0]), &m, &[9], TOL).is_err());
    }

    #[test]
    fn pointwise_sup_basics() {
        let a = RealFunction::new(vec![0.0, 1.0]);
        let b = RealFunction::new(vec![1.0, 0.0]);
        assert_eq!(pointwise_sup(std::slice::from_ref(&a)).unwrap(), a);
        assert_eq!(pointwise_sup(&[a, b]).unwrap().values(), &[1.0, 1.0]);
        assert_eq!(pointwise_sup(&[]), Err(Error::EmptyList));
        assert!(pointwise_sup(&[RealFunction::new(vec![0.0]), RealFunction::new(vec![])]).is_err());
    }

    fn real_field(m: FiniteMetric, values: &[f64]) -> MMField {
        MMField::real_uniform(m, values).unwrap()
    }

    #[test]
    fn one_point_feasibility() {
        let m = wedge();
        let field = real_field(m.clone(), &[0.0, 2.0, 1.0]);
        let repeat = OnePointCandidate {
            f: kuratowski_row(&m, 0).unwrap(),
            b: TargetPoint::real(0.0),
        };
        assert!(field_one_point_feasible(&field, &repeat, TOL).unwrap());

        let single = real_field(FiniteMetric::from_rows(vec![vec![0.0]]).unwrap(), &[0.0]);
        let far = |f: f64| OnePointCandidate { f: RealFunction::new(vec![f]), b: TargetPoint::real(2.0) };
        assert!(!field_one_point_feasible(&single, &far(1.0), TOL).unwrap());
        assert!(field_one_point_feasible(&single, &far(2.0), TOL).unwrap());

        let wrong_len = OnePointCandidate { f: RealFunction::new(vec![1.0, 1.0]), b: TargetPoint::real(0.0) };
        assert!(field_one_point_feasible(&single, &wrong_len, TOL).is_err());
    }

    #[test]
    fn extend_by_repeating_a_point() {
        let m = wedge();
        let field = real_field(m.clone(), &[0.0, 2.0, 1.0]);
        let c = OnePointCandidate { f: kuratowski_row(&m, 0).unwrap(), b: TargetPoint::real(0.0) };
        let ext = field_one_point_extend(&field, &c, MassMode::ZeroMass, TOL).unwrap();
        assert_eq!(ext.len(), 4);
        assert_eq!(ext.metric().get(3, 0), 0.0);
        assert_eq!(ext.values()[3], TargetPoint::real(0.0));
        assert_eq!(&ext.measure()[..3], field.measure());
        assert_eq!(ext.measure()[3], 0.0);
        assert!(validate_metric(ext.metric(), TOL).is_valid());
        assert!(validate_field(&ext, TOL).is_valid());
    }

    #[test]
    fn extend_two_anchor_field() {
        // Field on {a1, a2} with d = 2, values 0 and 2; new point at distance
        // 1 from both with value 1 is feasible.
        let field = real_field(two_point(2.0), &[0.0, 2.0]);
        let c = OnePointCandidate { f: RealFunction::new(vec![1.0, 1.0]), b: TargetPoint::real(1.0) };
        let ext = field_one_point_extend(&field, &c, MassMode::UniformReweight, TOL).unwrap();
        assert!(validate_metric(ext.metric(), TOL).is_valid());
        assert!(validate_field(&ext, TOL).is_valid());
        assert_eq!(ext.measure(), &[1.0 / 3.0; 3]);

        let bad = OnePointCandidate { f: RealFunction::new(vec![1.0, 1.0]), b: TargetPoint::real(0.0) };
        assert!(matches!(
            field_one_point_extend(&field, &bad, MassMode::ZeroMass, TOL),
            Err(Error::Infeasible(_))
        ));
    }
}
