//! Community hypergraphs of a finite metric space.
//!
//! At scale `r` the communities are the maximal sets whose points are
//! pairwise within `r` (maximal cliques of the graph with an edge whenever
//! `d(x, y) <= r`). They form a metric space under the Hausdorff distance,
//! carry the mass `mu(sigma) = |sigma| / N` with `N` the sum of all sizes,
//! and the `p`-centrality
//! `lambda_p(sigma) = ((1/N) sum_tau d_H(sigma, tau)^p |tau|)^(1/p)`
//! turns them into a field over the real line.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{validate_field, MMField};
use crate::metric::{FiniteMetric, DEFAULT_TOL};
use crate::target::{TargetPoint, TargetSpace};

/// Largest space the brute-force clique oracle accepts.
pub const BRUTEFORCE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityHypergraph {
    pub base: FiniteMetric,
    pub r: f64,
    /// Maximal cliques, each sorted, in lexicographic order.
    pub simplices: Vec<Vec<usize>>,
    /// Hausdorff distances between simplices.
    pub metric: FiniteMetric,
    /// `N`, the sum of the simplex sizes.
    pub total: usize,
    /// `lambda_p` for each requested `p`.
    pub centrality: Vec<(f64, Vec<f64>)>,
}

impl CommunityHypergraph {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Exact mass of simplex `i` as `(|sigma|, N)`.
    pub fn mass(&self, i: usize) -> (usize, usize) {
        (self.simplices[i].len(), self.total)
    }

    pub fn measure(&self) -> Vec<f64> {
        self.simplices.iter().map(|s| s.len() as f64 / self.total as f64).collect()
    }

    pub fn centrality(&self, p: f64) -> Option<&[f64]> {
        self.centrality.iter().find(|(q, _)| (q - p).abs() <= 1e-12).map(|(_, v)| v.as_slice())
    }
}

fn adjacency(m: &FiniteMetric, r: f64) -> Vec<Vec<bool>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| i != j && m.get(i, j) <= r).collect()).collect()
}

fn check_scale(r: f64) -> Result<()> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::InvalidParameter(format!("scale {r} must be nonnegative")));
    }
    Ok(())
}

/// Bron-Kerbosch with pivoting. `p` and `x` are the candidate and excluded
/// sets.
fn bron_kerbosch(adj: &[Vec<bool>], r: &mut Vec<usize>, p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
        }
        return;
    }
    let pivot = *p
        .iter()
        .chain(&x)
        .max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count())
        .expect("p is non-empty");
    let mut p = p;
    let branch: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in branch {
        let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
        r.push(v);
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Maximal cliques of the `d <= r` graph, sorted.
pub fn maximal_cliques(m: &FiniteMetric, r: f64) -> Result<Vec<Vec<usize>>> {
    check_scale(r)?;
    let adj = adjacency(m, r);
    let n = m.len();
    // Branch on each vertex v with the earlier vertices excluded; the
    // subtrees are disjoint, so they run independently.
    let mut cliques: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .flat_map_iter(|v| {
            let p = (v + 1..n).filter(|&w| adj[v][w]).collect();
            let x = (0..v).filter(|&w| adj[v][w]).collect();
            let mut out = Vec::new();
            bron_kerbosch(&adj, &mut vec![v], p, x, &mut out);
            out
        })
        .collect();
    cliques.sort();
    Ok(cliques)
}

/// Exhaustive oracle: every subset is checked for being a clique and for
/// maximality. Limited to [`BRUTEFORCE_LIMIT`] points.
pub fn maximal_cliques_bruteforce(m: &FiniteMetric, r: f64) -> Result<Vec<Vec<usize>>> {
    check_scale(r)?;
    let n = m.len();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::SizeLimit { size: n, limit: BRUTEFORCE_LIMIT });
    }
    let adj = adjacency(m, r);
    let members = |mask: u32| (0..n).filter(move |&i| mask >> i & 1 == 1);
    let is_clique = |mask: u32| members(mask).all(|i| members(mask).all(|j| i == j || adj[i][j]));
    let mut out: Vec<Vec<usize>> = (1..1u32 << n)
        .filter(|&mask| is_clique(mask))
        .filter(|&mask| (0..n).all(|k| mask >> k & 1 == 1 || !is_clique(mask | 1 << k)))
        .map(|mask| members(mask).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// `lambda_p` of every simplex given the Hausdorff matrix and sizes.
fn centrality(metric: &FiniteMetric, sizes: &[usize], total: usize, p: f64) -> Vec<f64> {
    (0..metric.len())
        .map(|s| {
            let sum: f64 = (0..metric.len()).map(|t| metric.get(s, t).powf(p) * sizes[t] as f64).sum();
            (sum / total as f64).powf(1.0 / p)
        })
        .collect()
}

/// Builds the community hypergraph of `m` at scale `r`, with centralities for
/// every exponent in `p_list`.
pub fn build_hypergraph(m: &FiniteMetric, r: f64, p_list: &[f64]) -> Result<CommunityHypergraph> {
    if m.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    if let Some(p) = p_list.iter().find(|p| !(**p >= 1.0 && p.is_finite())) {
        return Err(Error::InvalidParameter(format!("centrality exponent {p} must be finite and >= 1")));
    }
    let simplices = maximal_cliques(m, r)?;
    let k = simplices.len();
    let rows: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|a| (0..k).map(|b| m.hausdorff_unchecked(&simplices[a], &simplices[b])).collect())
        .collect();
    let metric = FiniteMetric::from_rows(rows)?;
    let sizes: Vec<usize> = simplices.iter().map(Vec::len).collect();
    let total = sizes.iter().sum();
    let centrality = p_list.iter().map(|&p| (p, centrality(&metric, &sizes, total, p))).collect();
    Ok(CommunityHypergraph { base: m.clone(), r, simplices, metric, total, centrality })
}

/// The field `(K, d_H, mu, lambda_p)`.
pub fn hypergraph_to_field(h: &CommunityHypergraph, p: f64) -> Result<MMField> {
    let values = h
        .centrality(p)
        .ok_or_else(|| Error::InvalidParameter(format!("centrality for p = {p} was not computed")))?;
    let field = MMField::new(
        h.metric.clone(),
        h.measure(),
        TargetSpace::real_line(),
        values.iter().map(|&v| TargetPoint::real(v)).collect(),
    )?;
    let report = validate_field(&field, DEFAULT_TOL);
    if !report.is_valid() {
        return Err(Error::InvalidField(report.to_string()));
    }
    Ok(field)
}
