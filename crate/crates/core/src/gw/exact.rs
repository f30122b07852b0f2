//! Exact oracles for small instances.

use rayon::prelude::*;

use super::costs::{objective_from_powers, FieldPairCosts};
use super::{gw_objective, Exponent, GwOptions, GwResult, SolverKind};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::transport::{coupling_within, enumerate_extreme_couplings, Coupling};

/// `p = ∞`: the objective of a coupling depends only on its support and grows
/// with it, so the minimum over couplings is the minimum over every cell set
/// `S` that some coupling fits inside of the support objective of `S`.
///
/// Candidate sets are ranked by (objective, sorted cell list) and checked for
/// feasibility in that order; the first feasible one is optimal, and its
/// witness coupling has the lexicographically smallest optimal cell set.
pub(super) fn infinity(
    costs: &FieldPairCosts,
    mu: &[f64],
    nu: &[f64],
    options: &GwOptions,
) -> Result<GwResult> {
    let m = nu.len();
    let live: Vec<usize> = (0..costs.cells())
        .filter(|&a| mu[a / m] > options.support_eps && nu[a % m] > options.support_eps)
        .collect();
    if live.len() > options.max_exact_cells {
        return Err(Error::SizeLimit { size: live.len(), limit: options.max_exact_cells });
    }
    let k = live.len();
    let cells_of = |mask: u64| -> Vec<usize> {
        (0..k).filter(|&b| mask >> b & 1 == 1).map(|b| live[b]).collect()
    };
    let mut ranked: Vec<(f64, Vec<usize>)> = (1..1u64 << k)
        .into_par_iter()
        .map(|mask| {
            let cells = cells_of(mask);
            (costs.support_objective(&cells), cells)
        })
        .collect();
    let candidates = ranked.len();
    ranked.par_sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    let mut allowed = vec![false; costs.cells()];
    for (_, cells) in &ranked {
        allowed.iter_mut().for_each(|x| *x = false);
        for &a in cells {
            allowed[a] = true;
        }
        if let Some(coupling) = coupling_within(mu, nu, &allowed, options.support_eps) {
            let value = gw_objective(&coupling, costs, Exponent::Infinity, options.support_eps);
            return Ok(GwResult {
                value,
                coupling,
                p: Exponent::Infinity,
                solver: SolverKind::ExactOracle,
                error_bound: 0.0,
                candidates,
            });
        }
    }
    Err(Error::InfeasibleMarginals("no coupling exists".into()))
}

/// Finite `p`: minimum over the polytope vertices and a grid of step
/// `options.grid_step` on every segment between two vertices.
pub(super) fn finite(
    costs: &FieldPairCosts,
    mu: &[f64],
    nu: &[f64],
    p: f64,
    options: &GwOptions,
) -> Result<GwResult> {
    if !(options.grid_step > 0.0 && options.grid_step <= 1.0) {
        return Err(Error::InvalidParameter(format!("grid step {} not in (0, 1]", options.grid_step)));
    }
    let vertices = enumerate_extreme_couplings(mu, nu, options.max_exact_side)?;
    let plans: Vec<&[f64]> = vertices.iter().map(|v| v.plan().as_slice()).collect();
    let mp = costs.powered_distortion(p);
    let gp = costs.powered_gaps(p);
    let steps = (1.0 / options.grid_step).round().max(1.0) as usize;

    // Candidate (u, v, s) is (1 - s/steps) * u + (s/steps) * v; vertices
    // themselves are (u, u, 0).
    let mut jobs: Vec<(usize, usize)> = (0..plans.len()).map(|u| (u, u)).collect();
    for u in 0..plans.len() {
        for v in u + 1..plans.len() {
            jobs.push((u, v));
        }
    }
    let blend = |u: usize, v: usize, s: usize, buf: &mut Vec<f64>| {
        let t = s as f64 / steps as f64;
        buf.clear();
        buf.extend(plans[u].iter().zip(plans[v]).map(|(a, b)| (1.0 - t) * a + t * b));
    };
    let best = jobs
        .par_iter()
        .enumerate()
        .map(|(job, &(u, v))| {
            let mut buf = Vec::with_capacity(costs.cells());
            let range = if u == v { 0..1 } else { 1..steps };
            let mut best = (f64::INFINITY, job, 0usize);
            for s in range {
                blend(u, v, s, &mut buf);
                let value = objective_from_powers(&buf, &mp, &gp, p);
                if value < best.0 {
                    best = (value, job, s);
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::INFINITY, 0, 0), |acc, x| if x.0 < acc.0 { x } else { acc });

    let (value, job, s) = best;
    let (u, v) = jobs[job];
    let mut buf = Vec::new();
    blend(u, v, s, &mut buf);
    let plan = Matrix::from_fn(mu.len(), nu.len(), |i, j| buf[i * nu.len() + j]);
    let candidates = plans.len() + (jobs.len() - plans.len()) * steps.saturating_sub(1);
    Ok(GwResult {
        value,
        coupling: Coupling::from_plan_unchecked(plan),
        p: Exponent::Finite(p),
        solver: SolverKind::ExactOracle,
        error_bound: 4.0 * costs.scale() * options.grid_step,
        candidates,
    })
}
