//! Vertices of the transportation polytope, by enumerating spanning trees of
//! the complete bipartite graph on rows and columns.
//!
//! Every vertex is a basic feasible solution, whose support lies inside a
//! spanning tree with `n + m - 1` cells. On a tree the flows are determined
//! by peeling leaves, so each tree yields at most one candidate; the
//! candidates with nonnegative flows are exactly the vertices (degenerate
//! vertices show up once per tree that contains them and are deduplicated).

use super::{check_marginals, Coupling};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest side length accepted by default.
pub const DEFAULT_MAX_ORACLE_SIZE: usize = 4;

const NEG_TOL: f64 = 1e-12;

pub fn enumerate_extreme_couplings(mu: &[f64], nu: &[f64], max_n: usize) -> Result<Vec<Coupling>> {
    let (n, m) = (mu.len(), nu.len());
    let size = n.max(m);
    if size > max_n {
        return Err(Error::SizeLimit { size, limit: max_n });
    }
    check_marginals(mu, nu)?;
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let k = n + m - 1;
    let mut out: Vec<Coupling> = Vec::new();
    let mut keys: Vec<Vec<i64>> = Vec::new();
    let mut chosen = Vec::with_capacity(k);
    for_each_combination(cells.len(), k, &mut chosen, &mut |subset| {
        let tree: Vec<(usize, usize)> = subset.iter().map(|&c| cells[c]).collect();
        if let Some(plan) = solve_tree(&tree, mu, nu) {
            // Dedupe on a fine grid; vertices of the same polytope that differ
            // by less than this are numerically the same point.
            let key: Vec<i64> = plan.as_slice().iter().map(|v| (v * 1e10).round() as i64).collect();
            if !keys.contains(&key) {
                keys.push(key);
                out.push(Coupling::from_plan_unchecked(plan));
            }
        }
    });
    Ok(out)
}

fn for_each_combination(
    total: usize,
    k: usize,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    let start = chosen.last().map_or(0, |&c| c + 1);
    let remaining = k - chosen.len();
    for c in start..=total.saturating_sub(remaining) {
        chosen.push(c);
        for_each_combination(total, k, chosen, visit);
        chosen.pop();
    }
}

/// Flows on a spanning tree, or `None` if the cells contain a cycle or the
/// flows are negative.
fn solve_tree(tree: &[(usize, usize)], mu: &[f64], nu: &[f64]) -> Option<Matrix> {
    let (n, m) = (mu.len(), nu.len());
    // Nodes: rows 0..n, columns n..n+m. A forest with n+m-1 edges and no
    // cycle is a spanning tree.
    let mut parent: Vec<usize> = (0..n + m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(i, j) in tree {
        let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
        if a == b {
            return None;
        }
        parent[a] = b;
    }

    let mut residual: Vec<f64> = mu.iter().chain(nu).copied().collect();
    let mut degree = vec![0usize; n + m];
    for &(i, j) in tree {
        degree[i] += 1;
        degree[n + j] += 1;
    }
    let mut alive = vec![true; tree.len()];
    let mut plan = Matrix::zeros(n, m);
    for _ in 0..tree.len() {
        // Find an edge with a leaf endpoint.
        let (e, leaf) = tree.iter().enumerate().find_map(|(e, &(i, j))| {
            if !alive[e] {
                None
            } else if degree[i] == 1 {
                Some((e, i))
            } else if degree[n + j] == 1 {
                Some((e, n + j))
            } else {
                None
            }
        })?;
        let (i, j) = tree[e];
        let other = if leaf == i { n + j } else { i };
        let amount = residual[leaf];
        if amount < -NEG_TOL {
            return None;
        }
        let amount = amount.max(0.0);
        plan.set(i, j, amount);
        residual[leaf] = 0.0;
        residual[other] -= amount;
        degree[i] -= 1;
        degree[n + j] -= 1;
        alive[e] = false;
    }
    if residual.iter().any(|r| r.abs() > 1e-9) {
        return None;
    }
    Some(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::{min_cost_coupling, MARGINAL_TOL};

    #[test]
    fn birkhoff_counts() {
        assert_eq!(enumerate_extreme_couplings(&[0.5; 2], &[0.5; 2], 4).unwrap().len(), 2);
        let three = enumerate_extreme_couplings(&[1.0 / 3.0; 3], &[1.0 / 3.0; 3], 4).unwrap();
        assert_eq!(three.len(), 6);
        for c in &three {
            assert_eq!(c.support(1e-12).len(), 3);
        }
        assert_eq!(enumerate_extreme_couplings(&[0.25; 4], &[0.25; 4], 4).unwrap().len(), 24);
        let one = enumerate_extreme_couplings(&[1.0], &[1.0], 4).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].get(0, 0), 1.0);
    }

    #[test]
    fn size_limit() {
        assert_eq!(
            enumerate_extreme_couplings(&[0.2; 5], &[0.2; 5], 4).unwrap_err(),
            Error::SizeLimit { size: 5, limit: 4 }
        );
    }

    #[test]
    fn vertices_are_couplings_and_contain_lp_optimum() {
        let mu = [0.4, 0.6];
        let nu = [0.1, 0.3, 0.6];
        let cost = Matrix::from_rows(vec![vec![1.0, 2.0, 3.0], vec![2.0, 1.0, 0.5]]).unwrap();
        let vertices = enumerate_extreme_couplings(&mu, &nu, 4).unwrap();
        assert!(!vertices.is_empty());
        for v in &vertices {
            v.check(&mu, &nu, MARGINAL_TOL).unwrap();
        }
        let best = vertices.iter().map(|v| v.cost(&cost)).fold(f64::INFINITY, f64::min);
        let (lp, _) = min_cost_coupling(&cost, &mu, &nu).unwrap();
        assert!((best - lp).abs() < 1e-12);
    }
}
