//! Max-flow feasibility for bottleneck transport (Dinic on real capacities).

use std::collections::VecDeque;

use crate::matrix::Matrix;

const CAP_EPS: f64 = 1e-15;

struct Edge {
    to: usize,
    cap: f64,
}

struct Dinic {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic { edges: Vec::new(), adj: vec![Vec::new(); n], level: vec![0; n], iter: vec![0; n] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap });
        self.adj[from].push(id);
        self.edges.push(Edge { to: from, cap: 0.0 });
        self.adj[to].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let edge = &self.edges[e];
                if edge.cap > CAP_EPS && self.level[edge.to] < 0 {
                    self.level[edge.to] = self.level[u] + 1;
                    queue.push_back(edge.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: f64) -> f64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.adj[u].len() {
            let e = self.adj[u][self.iter[u]];
            let (to, cap) = (self.edges[e].to, self.edges[e].cap);
            if cap > CAP_EPS && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0.0 {
                    self.edges[e].cap -= got;
                    self.edges[e ^ 1].cap += got;
                    return got;
                }
            }
            self.iter[u] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut flow = 0.0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, f64::INFINITY);
                if f <= 0.0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }
}

/// Routes `mu` to `nu` using only cells with `cost <= threshold`. Returns the
/// plan when at most `slack` mass is left unrouted.
pub(crate) fn threshold_flow(
    cost: &Matrix,
    mu: &[f64],
    nu: &[f64],
    threshold: f64,
    support_eps: f64,
    slack: f64,
) -> Option<Matrix> {
    let (n, m) = (mu.len(), nu.len());
    let source = n + m;
    let sink = n + m + 1;
    let total: f64 = mu.iter().sum();
    let mut g = Dinic::new(n + m + 2);
    for (i, &a) in mu.iter().enumerate() {
        if a > support_eps {
            g.add_edge(source, i, a);
        }
    }
    for (j, &b) in nu.iter().enumerate() {
        if b > support_eps {
            g.add_edge(n + j, sink, b);
        }
    }
    let mut cells = Vec::new();
    for i in 0..n {
        if mu[i] <= support_eps {
            continue;
        }
        for j in 0..m {
            if nu[j] > support_eps && cost.get(i, j) <= threshold {
                let id = g.add_edge(i, n + j, total * 2.0);
                cells.push((i, j, id));
            }
        }
    }
    let routed = g.max_flow(source, sink);
    if routed < total - slack {
        return None;
    }
    let mut plan = Matrix::zeros(n, m);
    for (i, j, id) in cells {
        // Flow on a forward edge is the capacity of its reverse edge.
        let f = g.edges[id ^ 1].cap;
        if f > 0.0 {
            plan.set(i, j, f);
        }
    }
    Some(plan)
}
