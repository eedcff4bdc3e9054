//! Discretely geodesic spaces from graphs, and the coarse-geometric checks run
//! on them: interval stability, cone types and four-point hyperbolicity.

mod cones;
mod generate;
mod hyperbolicity;
mod stability;

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::{FinMetric, PointId};

pub use cones::{cone_types, ConeTypeTable};
pub use generate::{generate, Family, Generated, Norm, DEFAULT_MAX_VERTICES};
pub use hyperbolicity::delta_hyperbolicity;
pub use stability::{check_stable_intervals, interval_point_near, min_beta, Scope, StabilityReport, StabilityWitness};

/// A finite simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph on `0..n`; duplicate edges are merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::PointOutOfRange(a.max(b)));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.adj.len() {
            return Err(Error::InvalidArgument(format!("{} labels for {} vertices", labels.len(), self.adj.len())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    /// Hop distances from `src`; `None` for unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<Option<i64>> {
        let mut dist = vec![None; self.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices are reached");
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMetric {
    pub metric: FinMetric,
    pub discretely_geodesic: bool,
}

/// All-pairs shortest-path metric of a connected graph.
pub fn graph_metric(g: &Graph) -> Result<GraphMetric> {
    let n = g.len();
    if n == 0 {
        return Err(Error::InvalidArgument("graph has no vertices".into()));
    }
    let rows: Vec<Vec<Option<i64>>> = (0..n).into_par_iter().map(|s| g.bfs(s)).collect();
    let mut flat = Vec::with_capacity(n * n);
    for row in rows {
        for d in row {
            flat.push(d.ok_or(Error::Disconnected)?);
        }
    }
    let mut metric = FinMetric::from_trusted_ints(n, flat);
    if let Some(labels) = g.labels() {
        metric = metric.with_labels(labels.to_vec())?;
    }
    Ok(GraphMetric { metric, discretely_geodesic: true })
}

/// Whether the metric is integer-valued and every pair at distance `k ≥ 2`
/// has a point at distance 1 from the first and `k − 1` from the second,
/// which yields a discrete geodesic by induction.
pub fn is_discretely_geodesic(m: &FinMetric) -> bool {
    let Some(d) = m.int_matrix() else { return false };
    let n = m.len();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let k = d[x * n + y];
            k <= 1 || (0..n).any(|u| d[x * n + u] == 1 && d[u * n + y] == k - 1)
        })
    })
}

/// Points at distance exactly 1, for integer metrics.
pub(crate) fn unit_neighbors(m: &FinMetric, x: PointId) -> Vec<PointId> {
    let d = m.int_matrix().expect("integer metric");
    let n = m.len();
    (0..n).filter(|&y| d[x * n + y] == 1).collect()
}
