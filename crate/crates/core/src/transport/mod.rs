//! Exact discrete optimal transport: `p`-Wasserstein distances for finite
//! `p`, the bottleneck (`p = ∞`) distance, and vertex enumeration of the
//! transportation polytope for small oracle instances.

mod extreme;
mod flow;
mod mincost;

pub use extreme::{enumerate_extreme_couplings, DEFAULT_MAX_ORACLE_SIZE};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Entries at or below this are outside the support of a coupling.
pub const DEFAULT_SUPPORT_EPS: f64 = 1e-12;

/// Largest allowed gap between the total masses of the two marginals.
pub const MARGINAL_TOL: f64 = 1e-9;

/// A nonnegative `n x m` matrix whose row and column sums are the two
/// marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    plan: Matrix,
}

impl Coupling {
    /// Wraps a plan, checking its marginals against `mu` and `nu` within
    /// [`MARGINAL_TOL`].
    pub fn new(plan: Matrix, mu: &[f64], nu: &[f64]) -> Result<Self> {
        let c = Coupling { plan };
        c.check(mu, nu, MARGINAL_TOL)?;
        Ok(c)
    }

    pub(crate) fn from_plan_unchecked(plan: Matrix) -> Self {
        Coupling { plan }
    }

    /// The product coupling `mu ⊗ nu`.
    pub fn product(mu: &[f64], nu: &[f64]) -> Self {
        Coupling { plan: Matrix::from_fn(mu.len(), nu.len(), |i, j| mu[i] * nu[j]) }
    }

    /// The diagonal coupling of a measure with itself.
    pub fn diagonal(mu: &[f64]) -> Self {
        Coupling { plan: Matrix::from_fn(mu.len(), mu.len(), |i, j| if i == j { mu[i] } else { 0.0 }) }
    }

    pub fn plan(&self) -> &Matrix {
        &self.plan
    }

    pub fn rows(&self) -> usize {
        self.plan.rows()
    }

    pub fn cols(&self) -> usize {
        self.plan.cols()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.plan.get(i, j)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows()).map(|i| self.plan.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols()];
        for i in 0..self.rows() {
            for (s, v) in sums.iter_mut().zip(self.plan.row(i)) {
                *s += v;
            }
        }
        sums
    }

    /// Cells with mass above `eps`, in row-major order.
    pub fn support(&self, eps: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if self.get(i, j) > eps {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn check(&self, mu: &[f64], nu: &[f64], tol: f64) -> Result<()> {
        if self.rows() != mu.len() || self.cols() != nu.len() {
            return Err(Error::DimensionMismatch {
                what: "coupling",
                got: self.rows() * self.cols(),
                expected: mu.len() * nu.len(),
            });
        }
        if let Some(&v) = self.plan.as_slice().iter().find(|v| !(**v >= -tol) || !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling entry {v} is negative")));
        }
        for (i, (s, m)) in self.row_sums().iter().zip(mu).enumerate() {
            if (s - m).abs() > tol {
                return Err(Error::InvalidParameter(format!("row {i} sums to {s}, expected {m}")));
            }
        }
        for (j, (s, m)) in self.col_sums().iter().zip(nu).enumerate() {
            if (s - m).abs() > tol {
                return Err(Error::InvalidParameter(format!("column {j} sums to {s}, expected {m}")));
            }
        }
        Ok(())
    }

    /// `sum_ij P_ij c_ij`.
    pub fn cost(&self, cost: &Matrix) -> f64 {
        self.plan.as_slice().iter().zip(cost.as_slice()).map(|(p, c)| p * c).sum()
    }

    /// Largest cost over the support.
    pub fn bottleneck_cost(&self, cost: &Matrix, support_eps: f64) -> f64 {
        self.support(support_eps).into_iter().map(|(i, j)| cost.get(i, j)).fold(0.0, f64::max)
    }
}

pub(crate) fn check_marginals(mu: &[f64], nu: &[f64]) -> Result<()> {
    if mu.is_empty() || nu.is_empty() {
        return Err(Error::InfeasibleMarginals("empty marginal".into()));
    }
    for &v in mu.iter().chain(nu) {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InfeasibleMarginals(format!("mass {v} is not a nonnegative number")));
        }
    }
    let (a, b): (f64, f64) = (mu.iter().sum(), nu.iter().sum());
    if (a - b).abs() > MARGINAL_TOL {
        return Err(Error::InfeasibleMarginals(format!("total masses {a} and {b} differ")));
    }
    if a <= 0.0 {
        return Err(Error::InfeasibleMarginals("zero total mass".into()));
    }
    Ok(())
}

fn check_cost(cost: &Matrix, mu: &[f64], nu: &[f64]) -> Result<()> {
    if cost.rows() != mu.len() || cost.cols() != nu.len() {
        return Err(Error::DimensionMismatch {
            what: "cost matrix",
            got: cost.rows() * cost.cols(),
            expected: mu.len() * nu.len(),
        });
    }
    if let Some(&c) = cost.as_slice().iter().find(|c| !c.is_finite() || **c < 0.0) {
        return Err(Error::InvalidParameter(format!("cost entry {c} must be finite and nonnegative")));
    }
    Ok(())
}

fn is_uniform(w: &[f64]) -> bool {
    let first = w[0];
    w.iter().all(|&x| x == first)
}

/// Solves `min_P sum P_ij cost_ij` exactly over couplings of `mu` and `nu`.
pub fn min_cost_coupling(cost: &Matrix, mu: &[f64], nu: &[f64]) -> Result<(f64, Coupling)> {
    check_marginals(mu, nu)?;
    check_cost(cost, mu, nu)?;
    let plan = if mu.len() == nu.len() && is_uniform(mu) && is_uniform(nu) {
        let perm = mincost::assignment(cost);
        let w = mu[0];
        let mut plan = Matrix::zeros(mu.len(), nu.len());
        for (i, &j) in perm.iter().enumerate() {
            plan.set(i, j, w);
        }
        plan
    } else {
        mincost::transport(cost, mu, nu)
    };
    let coupling = Coupling::from_plan_unchecked(plan);
    Ok((coupling.cost(cost), coupling))
}

/// `p`-Wasserstein distance for finite `p >= 1` with ground cost `cost`,
/// together with an optimal coupling.
pub fn wasserstein_p(cost: &Matrix, mu: &[f64], nu: &[f64], p: f64) -> Result<(f64, Coupling)> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("p = {p} must be finite and >= 1")));
    }
    check_cost(cost, mu, nu)?;
    let powered = if p == 1.0 { cost.clone() } else { cost.map(|c| c.powf(p)) };
    let (total, coupling) = min_cost_coupling(&powered, mu, nu)?;
    Ok((total.max(0.0).powf(1.0 / p), coupling))
}

/// Bottleneck transport: the least `t` such that some coupling is supported
/// on cells of cost `<= t`, with a witness coupling.
///
/// The candidate thresholds are the distinct cost values, so the search is
/// exact.
pub fn wasserstein_inf(
    cost: &Matrix,
    mu: &[f64],
    nu: &[f64],
    support_eps: f64,
) -> Result<(f64, Coupling)> {
    check_marginals(mu, nu)?;
    check_cost(cost, mu, nu)?;
    let mut levels: Vec<f64> = cost.as_slice().to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    // Mass that must never be left unrouted; a small fraction of the smallest
    // positive mass keeps degenerate instances from passing spuriously.
    let total: f64 = mu.iter().sum();
    let min_mass = mu.iter().chain(nu).copied().filter(|&x| x > support_eps).fold(total, f64::min);
    let slack = (1e-10 * total).min(0.5 * min_mass);
    let feasible = |t: f64| flow::threshold_flow(cost, mu, nu, t, support_eps, slack);

    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    let mut best: Option<(usize, Matrix)> = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(levels[mid]) {
            Some(plan) => {
                hi = mid;
                best = Some((mid, plan));
            }
            None => lo = mid + 1,
        }
    }
    let witness = match best {
        Some((level, plan)) if level == lo => plan,
        _ => feasible(levels[lo])
            .ok_or_else(|| Error::InfeasibleMarginals("no coupling fits under any threshold".into()))?,
    };
    let coupling = Coupling::from_plan_unchecked(witness);
    let value = coupling.bottleneck_cost(cost, support_eps);
    Ok((value, coupling))
}

/// Some coupling of `mu` and `nu` whose support lies in the cells marked
/// `allowed` (row-major), if one exists.
pub(crate) fn coupling_within(
    mu: &[f64],
    nu: &[f64],
    allowed: &[bool],
    support_eps: f64,
) -> Option<Coupling> {
    let m = nu.len();
    let mask = Matrix::from_fn(mu.len(), m, |i, j| if allowed[i * m + j] { 0.0 } else { 1.0 });
    let total: f64 = mu.iter().sum();
    let min_mass = mu.iter().chain(nu).copied().filter(|&x| x > support_eps).fold(total, f64::min);
    let slack = (1e-10 * total).min(0.5 * min_mass);
    flow::threshold_flow(&mask, mu, nu, 0.0, support_eps, slack).map(Coupling::from_plan_unchecked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn line_cost(xs: &[f64], ys: &[f64]) -> Matrix {
        Matrix::from_fn(xs.len(), ys.len(), |i, j| (xs[i] - ys[j]).abs())
    }

    #[test]
    fn dirac_to_dirac() {
        let cost = Matrix::from_rows(vec![vec![0.0, 3.0], vec![3.0, 0.0]]).unwrap();
        for p in [1.0, 2.0, 7.5] {
            let (w, _) = wasserstein_p(&cost, &[1.0, 0.0], &[0.0, 1.0], p).unwrap();
            assert_abs_diff_eq!(w, 3.0, epsilon = 1e-12);
        }
        let (w, _) = wasserstein_inf(&cost, &[1.0, 0.0], &[0.0, 1.0], DEFAULT_SUPPORT_EPS).unwrap();
        assert_eq!(w, 3.0);
    }

    #[test]
    fn equal_measures_cost_nothing() {
        let cost = line_cost(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]);
        let mu = [0.2, 0.3, 0.5];
        let (w, c) = wasserstein_p(&cost, &mu, &mu, 1.0).unwrap();
        assert_abs_diff_eq!(w, 0.0, epsilon = 1e-12);
        assert_eq!(c.support(DEFAULT_SUPPORT_EPS), vec![(0, 0), (1, 1), (2, 2)]);
        let (w, _) = wasserstein_inf(&cost, &mu, &mu, DEFAULT_SUPPORT_EPS).unwrap();
        assert_eq!(w, 0.0);
    }

    #[test]
    fn two_point_line() {
        let cost = line_cost(&[0.0, 1.0], &[0.0, 1.0]);
        let (mu, nu) = ([0.75, 0.25], [0.25, 0.75]);
        let (w1, c) = wasserstein_p(&cost, &mu, &nu, 1.0).unwrap();
        assert_abs_diff_eq!(w1, 0.5, epsilon = 1e-12);
        c.check(&mu, &nu, 1e-9).unwrap();
        let (winf, c) = wasserstein_inf(&cost, &mu, &nu, DEFAULT_SUPPORT_EPS).unwrap();
        assert_eq!(winf, 1.0);
        c.check(&mu, &nu, 1e-9).unwrap();
    }

    #[test]
    fn singleton_spaces() {
        let cost = Matrix::from_rows(vec![vec![2.5]]).unwrap();
        let (w, _) = wasserstein_inf(&cost, &[1.0], &[1.0], DEFAULT_SUPPORT_EPS).unwrap();
        assert_eq!(w, 2.5);
        let (w, _) = wasserstein_p(&cost, &[1.0], &[1.0], 3.0).unwrap();
        assert_abs_diff_eq!(w, 2.5, epsilon = 1e-12);
    }

    #[test]
    fn rejects_mismatched_marginals() {
        let cost = line_cost(&[0.0, 1.0], &[0.0, 1.0]);
        assert!(matches!(
            wasserstein_p(&cost, &[0.5, 0.5], &[0.5, 0.6], 1.0),
            Err(Error::InfeasibleMarginals(_))
        ));
        assert!(matches!(
            wasserstein_inf(&cost, &[0.5, 0.5], &[0.2, 0.2], DEFAULT_SUPPORT_EPS),
            Err(Error::InfeasibleMarginals(_))
        ));
        assert!(wasserstein_p(&cost, &[0.5, 0.5], &[0.5, 0.5], 0.5).is_err());
        assert!(wasserstein_p(&cost, &[1.0], &[0.5, 0.5], 1.0).is_err());
    }

    #[test]
    fn uniform_assignment_matches_general_solver() {
        let xs = [0.1, 0.7, 0.2, 0.9, 0.4];
        let ys = [0.3, 0.8, 0.05, 0.6, 0.5];
        let cost = line_cost(&xs, &ys);
        let u = [0.2; 5];
        let (a, ca) = min_cost_coupling(&cost, &u, &u).unwrap();
        let b_plan = mincost::transport(&cost, &u, &u);
        let b = Coupling::from_plan_unchecked(b_plan);
        assert_abs_diff_eq!(a, b.cost(&cost), epsilon = 1e-12);
        ca.check(&u, &u, 1e-12).unwrap();
        b.check(&u, &u, 1e-12).unwrap();
        // 1-d sorted matching.
        let mut sx = xs.to_vec();
        let mut sy = ys.to_vec();
        sx.sort_by(f64::total_cmp);
        sy.sort_by(f64::total_cmp);
        let sorted: f64 = sx.iter().zip(&sy).map(|(x, y)| 0.2 * (x - y).abs()).sum();
        assert_abs_diff_eq!(a, sorted, epsilon = 1e-12);
    }
}
