//! Gluing two fields along a coupling, and the embedding bound
//! `d_GW,p(X, Y) <= d_W,p` of the two measures inside any common field.

use super::{gw_distance, Exponent, FieldPairCosts, GwOptions};
use crate::error::{Error, Result};
use crate::field::MMField;
use crate::matrix::Matrix;
use crate::metric::{FiniteMetric, DEFAULT_TOL};
use crate::transport::{wasserstein_inf, wasserstein_p, Coupling, DEFAULT_SUPPORT_EPS, MARGINAL_TOL};

/// Result of [`glue`]: a field on the disjoint union `X ⊔ Y`, with the points
/// of `X` first.
#[derive(Debug, Clone, PartialEq)]
pub struct Glued {
    pub field: MMField,
    /// The `p = ∞` objective of the coupling; every cross distance is at
    /// least this.
    pub r: f64,
    /// Number of points that came from `X`.
    pub split: usize,
}

impl Glued {
    /// Cross-distance block `d_Z(x, y)`, `x` in `X`, `y` in `Y`.
    pub fn cross_costs(&self) -> Matrix {
        let n = self.split;
        let m = self.field.len() - n;
        Matrix::from_fn(n, m, |i, j| self.field.metric().get(i, n + j))
    }
}

/// Glues with mass split evenly between the halves.
pub fn glue(fx: &MMField, fy: &MMField, coupling: &Coupling) -> Result<Glued> {
    glue_weighted(fx, fy, coupling, 0.5)
}

/// Glues `fx` and `fy` along `coupling`:
/// `d_Z(x, y) = r + min over (x', y') in supp P of d_X(x, x') + d_Y(y', y)`,
/// with `r` the `p = ∞` objective of the coupling. The measure is
/// `weight_x * mu_X ⊔ (1 - weight_x) * mu_Y`.
pub fn glue_weighted(fx: &MMField, fy: &MMField, coupling: &Coupling, weight_x: f64) -> Result<Glued> {
    if !(0.0..=1.0).contains(&weight_x) {
        return Err(Error::InvalidParameter(format!("weight {weight_x} not in [0, 1]")));
    }
    let costs = FieldPairCosts::new(fx, fy)?;
    coupling.check(fx.measure(), fy.measure(), MARGINAL_TOL)?;
    let support = coupling.support(DEFAULT_SUPPORT_EPS);
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let m = fy.len();
    let cells: Vec<usize> = support.iter().map(|&(i, j)| i * m + j).collect();
    let r = costs.support_objective(&cells);

    let n = fx.len();
    let (dx, dy) = (fx.metric(), fy.metric());
    let cross = Matrix::from_fn(n, m, |x, y| {
        r + support
            .iter()
            .map(|&(a, b)| dx.get(x, a) + dy.get(b, y))
            .fold(f64::INFINITY, f64::min)
    });
    let metric = FiniteMetric::from_fn(n + m, |i, j| match (i < n, j < n) {
        (true, true) => dx.get(i, j),
        (false, false) => dy.get(i - n, j - n),
        (true, false) => cross.get(i, j - n),
        (false, true) => cross.get(j, i - n),
    })?;
    let measure = fx
        .measure()
        .iter()
        .map(|w| w * weight_x)
        .chain(fy.measure().iter().map(|w| w * (1.0 - weight_x)))
        .collect();
    let values = fx.values().iter().chain(fy.values()).cloned().collect();
    let field = MMField::new(metric, measure, fx.target().clone(), values)?;
    Ok(Glued { field, r, split: n })
}

/// Both sides of the embedding bound for one exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingBound {
    pub p: Exponent,
    /// Exact-oracle `d_GW,p(X, Y)`.
    pub lhs: f64,
    /// `d_W,p` between the two embedded measures in the glued space.
    pub rhs: f64,
    /// Oracle error bound carried over from the left-hand side.
    pub error_bound: f64,
    pub ok: bool,
}

/// Glues along `coupling` and compares `d_GW,p` with the Wasserstein distance
/// between the embedded measures.
pub fn embedding_bound_check(
    fx: &MMField,
    fy: &MMField,
    coupling: &Coupling,
    p: Exponent,
    options: &GwOptions,
) -> Result<EmbeddingBound> {
    fx.require_valid(DEFAULT_TOL)?;
    fy.require_valid(DEFAULT_TOL)?;
    let glued = glue(fx, fy, coupling)?;
    let lhs = gw_distance(fx, fy, p, options)?;
    let cross = glued.cross_costs();
    let rhs = match p {
        Exponent::Finite(q) => wasserstein_p(&cross, fx.measure(), fy.measure(), q)?.0,
        Exponent::Infinity => wasserstein_inf(&cross, fx.measure(), fy.measure(), options.support_eps)?.0,
    };
    Ok(EmbeddingBound {
        p,
        lhs: lhs.value,
        rhs,
        error_bound: lhs.error_bound,
        ok: lhs.value <= rhs + 1e-8,
    })
}
