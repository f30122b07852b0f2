//! Exact min-cost transport: successive shortest paths with Dijkstra on
//! reduced costs, and a dense Hungarian solver for the uniform square case.

use crate::matrix::Matrix;

/// Remaining supply below this is treated as exhausted.
const MASS_EPS: f64 = 1e-15;

/// Successive shortest augmenting paths on the bipartite transport network.
///
/// Sources are rows (supply `mu`), sinks are columns (demand `nu`). Forward
/// edges are uncapacitated; residual reverse edges carry the current flow.
pub(crate) fn transport(cost: &Matrix, mu: &[f64], nu: &[f64]) -> Matrix {
    let (n, m) = (mu.len(), nu.len());
    let v = n + m;
    let mut flow = Matrix::zeros(n, m);
    let mut supply = mu.to_vec();
    let mut demand = nu.to_vec();
    let mut potential = vec![0.0f64; v];

    let mut dist = vec![f64::INFINITY; v];
    let mut done = vec![false; v];
    let mut parent = vec![usize::MAX; v];

    while let Some(src) = (0..n).find(|&i| supply[i] > MASS_EPS) {
        if !demand.iter().any(|&d| d > MASS_EPS) {
            break;
        }
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        done.iter_mut().for_each(|d| *d = false);
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        dist[src] = 0.0;

        // Dense Dijkstra; the first settled column with open demand ends it.
        let target = loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for (k, (&d, &fin)) in dist.iter().zip(&done).enumerate() {
                if !fin && d < best {
                    best = d;
                    u = k;
                }
            }
            if u == usize::MAX {
                break None;
            }
            done[u] = true;
            if u >= n && demand[u - n] > MASS_EPS {
                break Some(u);
            }
            if u < n {
                let row = cost.row(u);
                for j in 0..m {
                    let w = n + j;
                    if done[w] {
                        continue;
                    }
                    let reduced = (row[j] + potential[u] - potential[w]).max(0.0);
                    let nd = best + reduced;
                    if nd < dist[w] {
                        dist[w] = nd;
                        parent[w] = u;
                    }
                }
            } else {
                let j = u - n;
                for i in 0..n {
                    if done[i] || flow.get(i, j) <= MASS_EPS {
                        continue;
                    }
                    let reduced = (potential[u] - cost.get(i, j) - potential[i]).max(0.0);
                    let nd = best + reduced;
                    if nd < dist[i] {
                        dist[i] = nd;
                        parent[i] = u;
                    }
                }
            }
        };
        let Some(target) = target else {
            // Unreachable only with inconsistent marginals; stop with what we have.
            break;
        };

        // Shortest distances, capped at the target's, keep every residual
        // reduced cost nonnegative.
        let cap = dist[target];
        for k in 0..v {
            potential[k] += if done[k] { dist[k] } else { cap };
        }

        // Bottleneck along the path.
        let mut amount = supply[src].min(demand[target - n]);
        let mut w = target;
        while w != src {
            let u = parent[w];
            if u >= n {
                // Reverse edge: column u back to row w.
                amount = amount.min(flow.get(w, u - n));
            }
            w = u;
        }
        let mut w = target;
        while w != src {
            let u = parent[w];
            if u < n {
                flow.add(u, w - n, amount);
            } else {
                let cur = flow.get(w, u - n) - amount;
                flow.set(w, u - n, if cur > MASS_EPS { cur } else { 0.0 });
            }
            w = u;
        }
        supply[src] -= amount;
        demand[target - n] -= amount;
    }
    flow
}

/// Min-cost perfect assignment of rows to columns of a square matrix
/// (Hungarian method with potentials, `O(n^3)`). Returns `perm[row] = col`.
pub(crate) fn assignment(cost: &Matrix) -> Vec<usize> {
    let n = cost.rows();
    debug_assert_eq!(n, cost.cols());
    // 1-based arrays; index 0 is the virtual unmatched column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|x| *x = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let row = cost.row(i0 - 1);
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = row[j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[matched_row[j] - 1] = j - 1;
    }
    perm
}
