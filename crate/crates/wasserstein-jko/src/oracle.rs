//! Exhaustive transport oracle: min-cost flow over the complete bipartite
//! graph of cell pairs, solved by successive shortest paths.

use economy_core::CircleGrid;

use crate::circle::{check_masses, TransportPlan};
use crate::error::{OtError, Result};

pub const ORACLE_MAX_CELLS: usize = 32;

const EPS: f64 = 1e-15;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: f64,
    cost: f64,
    rev: usize,
}

struct Network {
    adj: Vec<Vec<Edge>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network { adj: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, from: usize, to: usize, cap: f64, cost: f64) {
        let rf = self.adj[to].len();
        let rt = self.adj[from].len();
        self.adj[from].push(Edge { to, cap, cost, rev: rf });
        self.adj[to].push(Edge { to: from, cap: 0.0, cost: -cost, rev: rt });
    }

    /// Bellman-Ford shortest path tree over edges with residual capacity.
    fn shortest_paths(&self, src: usize) -> (Vec<f64>, Vec<Option<(usize, usize)>>) {
        let n = self.adj.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![None; n];
        dist[src] = 0.0;
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                if dist[u].is_infinite() {
                    continue;
                }
                for (k, e) in self.adj[u].iter().enumerate() {
                    if e.cap > EPS && dist[u] + e.cost < dist[e.to] - 1e-15 {
                        dist[e.to] = dist[u] + e.cost;
                        prev[e.to] = Some((u, k));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (dist, prev)
    }
}

/// Exact optimal plan by min-cost flow; limited to small grids.
pub fn brute_force_ot(mu: &[f64], nu: &[f64], grid: &CircleGrid) -> Result<TransportPlan> {
    let cells = grid.cells();
    if cells > ORACLE_MAX_CELLS {
        return Err(OtError::TooLarge { cells, limit: ORACLE_MAX_CELLS });
    }
    check_masses(mu, grid, "mu")?;
    check_masses(nu, grid, "nu")?;
    let (src, sink) = (0, 2 * cells + 1);
    let mut net = Network::new(2 * cells + 2);
    for i in 0..cells {
        net.add(src, 1 + i, mu[i], 0.0);
        net.add(1 + cells + i, sink, nu[i], 0.0);
        for j in 0..cells {
            net.add(1 + i, 1 + cells + j, f64::INFINITY, grid.cell_distance(i, j).powi(2));
        }
    }
    let total: f64 = mu.iter().sum::<f64>().min(nu.iter().sum());
    let mut sent = 0.0;
    while total - sent > 1e-14 {
        let (dist, prev) = net.shortest_paths(src);
        if dist[sink].is_infinite() {
            break;
        }
        let mut push = f64::INFINITY;
        let mut v = sink;
        while let Some((u, k)) = prev[v] {
            push = push.min(net.adj[u][k].cap);
            v = u;
        }
        let mut v = sink;
        while let Some((u, k)) = prev[v] {
            net.adj[u][k].cap -= push;
            let rev = net.adj[u][k].rev;
            net.adj[v][rev].cap += push;
            v = u;
        }
        sent += push;
    }
    let mut entries = Vec::new();
    let mut cost = 0.0;
    for i in 0..cells {
        for e in &net.adj[1 + i] {
            // forward edges into the sink layer; their reverse carries the flow
            if e.to > cells && e.to <= 2 * cells {
                let flow = net.adj[e.to][e.rev].cap;
                if flow > EPS {
                    let j = e.to - 1 - cells;
                    cost += flow * e.cost;
                    entries.push((i, j, flow));
                }
            }
        }
    }
    Ok(TransportPlan { cost, entries })
}
