//! Conditional-gradient local search with random restarts.
//!
//! Each restart starts at a vertex of the transportation polytope (the LP
//! optimum of a random cost) and repeats: linearize the active term of the
//! objective, solve the linear transport problem for a descent vertex, and
//! line-search along the segment. Every visited coupling is feasible, so the
//! best value found is an upper bound on the distance.

use rand::Rng;

use super::costs::{objective_from_powers, FieldPairCosts};
use super::{gw_objective, Exponent, GwOptions, GwResult, SolverKind};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::rng::stream_rng;
use crate::transport::{min_cost_coupling, Coupling};

const MAX_ITERS: usize = 200;
const LINE_STEPS: usize = 32;
/// Exponent used to steer the search when the target is `p = ∞`.
const SURROGATE_P: f64 = 16.0;

pub(super) fn search(
    costs: &FieldPairCosts,
    mu: &[f64],
    nu: &[f64],
    p: Exponent,
    options: &GwOptions,
) -> Result<GwResult> {
    let q = match p {
        Exponent::Finite(q) => q,
        Exponent::Infinity => SURROGATE_P,
    };
    let mp = costs.powered_distortion(q);
    let gp = costs.powered_gaps(q);
    let score = |plan: &[f64]| -> f64 {
        match p {
            Exponent::Finite(q) => objective_from_powers(plan, &mp, &gp, q),
            Exponent::Infinity => gw_objective(
                &Coupling::from_plan_unchecked(Matrix::from_fn(mu.len(), nu.len(), |i, j| {
                    plan[i * nu.len() + j]
                })),
                costs,
                p,
                options.support_eps,
            ),
        }
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut candidates = 0usize;
    let restarts = options.restarts.max(1);
    for restart in 0..restarts {
        let start = if restart == 0 {
            Coupling::product(mu, nu)
        } else {
            let mut rng = stream_rng(options.seed, restart as u64);
            let noise = Matrix::from_fn(mu.len(), nu.len(), |_, _| rng.gen::<f64>());
            min_cost_coupling(&noise, mu, nu)?.1
        };
        let mut plan = start.plan().as_slice().to_vec();
        let mut visited = vec![plan.clone()];
        let mut current = objective_from_powers(&plan, &mp, &gp, q);
        for _ in 0..MAX_ITERS {
            let gradient = linearize(&plan, &mp, &gp, q, costs);
            let (_, target) = min_cost_coupling(&gradient, mu, nu)?;
            let target = target.plan().as_slice().to_vec();
            visited.push(target.clone());
            let mut step_best = (current, 0.0);
            for s in 1..=LINE_STEPS {
                let t = s as f64 / LINE_STEPS as f64;
                let trial: Vec<f64> = plan.iter().zip(&target).map(|(a, b)| (1.0 - t) * a + t * b).collect();
                let v = objective_from_powers(&trial, &mp, &gp, q);
                if v < step_best.0 {
                    step_best = (v, t);
                }
            }
            if step_best.0 >= current - 1e-13 {
                break;
            }
            let t = step_best.1;
            plan = plan.iter().zip(&target).map(|(a, b)| (1.0 - t) * a + t * b).collect();
            current = step_best.0;
            visited.push(plan.clone());
        }
        for cand in visited {
            candidates += 1;
            let v = score(&cand);
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, cand));
            }
        }
    }
    let (value, plan) = best.expect("at least one restart");
    let coupling = Coupling::from_plan_unchecked(Matrix::from_fn(mu.len(), nu.len(), |i, j| {
        plan[i * nu.len() + j]
    }));
    Ok(GwResult {
        value,
        coupling,
        p,
        solver: SolverKind::LocalSearch,
        error_bound: f64::INFINITY,
        candidates,
    })
}

/// Gradient of the larger of the two terms (both when they tie), as a
/// nonnegative cost matrix.
fn linearize(plan: &[f64], mp: &[f64], gp: &[f64], p: f64, costs: &FieldPairCosts) -> Matrix {
    let c = plan.len();
    let mp_plan: Vec<f64> = (0..c)
        .map(|x| mp[x * c..(x + 1) * c].iter().zip(plan).map(|(v, py)| v * py).sum())
        .collect();
    let a: f64 = plan.iter().zip(&mp_plan).map(|(px, v)| px * v).sum();
    let b: f64 = plan.iter().zip(gp).map(|(px, g)| px * g).sum();
    let first = 0.5 * a.max(0.0).powf(1.0 / p);
    let second = b.max(0.0).powf(1.0 / p);
    let scale = |s: f64| if s > 0.0 { s.powf(1.0 / p - 1.0) / p } else { 1.0 };
    let (wa, wb) = if (first - second).abs() <= 1e-12 {
        (0.5 * scale(a) * 2.0, scale(b))
    } else if first > second {
        (0.5 * scale(a) * 2.0, 0.0)
    } else {
        (0.0, scale(b))
    };
    Matrix::from_fn(costs.rows(), costs.cols(), |i, j| {
        let x = i * costs.cols() + j;
        (wa * mp_plan[x] + wb * gp[x]).max(0.0)
    })
}
