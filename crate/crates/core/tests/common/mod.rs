//! Shared fixtures for the integration and acceptance tests: a corpus of
//! small spaces, unlabeled trees, and brute-force oracles.

#![allow(dead_code)]

pub mod oracle;
pub mod trees;

use tightspan::graph::{generate, graph_metric, Family, Graph, DEFAULT_MAX_VERTICES};
use tightspan::FinMetric;

pub struct Space {
    pub name: String,
    pub metric: FinMetric,
}

pub fn generated(spec: &str) -> FinMetric {
    let family: Family = spec.parse().unwrap();
    graph_metric(&generate(&family, DEFAULT_MAX_VERTICES).unwrap().graph).unwrap().metric
}

pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> FinMetric {
    graph_metric(&Graph::new(n, edges).unwrap()).unwrap().metric
}

pub fn int_metric(rows: &[&[i64]]) -> FinMetric {
    FinMetric::from_int_matrix(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// `x1, x2, y1, y2, y3` with `d(x1,x2) = 2`, `d(xi,yj) = 1`, `d(yj,yk) = 2`.
pub fn five_point() -> FinMetric {
    int_metric(&[&[0, 2, 1, 1, 1], &[2, 0, 1, 1, 1], &[1, 1, 0, 2, 2], &[1, 1, 2, 0, 2], &[1, 1, 2, 2, 0]])
        .with_labels(["x1", "x2", "y1", "y2", "y3"].map(String::from).to_vec())
        .unwrap()
}

/// `x1, x2, y1, y2, y3, z`: all distances 1 except `d(xi,z) = 2` and
/// `d(yj,yk) = 2`.
pub fn six_point() -> FinMetric {
    int_metric(&[
        &[0, 1, 1, 1, 1, 2],
        &[1, 0, 1, 1, 1, 2],
        &[1, 1, 0, 2, 2, 1],
        &[1, 1, 2, 0, 2, 1],
        &[1, 1, 2, 2, 0, 1],
        &[2, 2, 1, 1, 1, 0],
    ])
    .with_labels(["x1", "x2", "y1", "y2", "y3", "z"].map(String::from).to_vec())
    .unwrap()
}

fn petersen() -> FinMetric {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    from_edges(10, &edges)
}

/// Small discretely geodesic spaces used across the property checks.
pub fn corpus() -> Vec<Space> {
    let mut out: Vec<Space> = [
        "path:2",
        "path:3",
        "path:4",
        "path:5",
        "path:6",
        "cycle:3",
        "cycle:4",
        "cycle:5",
        "cycle:6",
        "cycle:7",
        "cycle:8",
        "complete:2",
        "complete:3",
        "complete:4",
        "complete:5",
        "hypercube:1",
        "hypercube:2",
        "hypercube:3",
        "chained_cubes:2",
        "zn_ball:2,1,l1",
        "zn_ball:2,1,linf",
        "free_ball:2,1",
    ]
    .iter()
    .map(|s| Space { name: s.to_string(), metric: generated(s) })
    .collect();
    out.push(Space { name: "five_point".into(), metric: five_point() });
    out.push(Space { name: "six_point".into(), metric: six_point() });
    out.push(Space { name: "petersen".into(), metric: petersen() });
    out.push(Space { name: "k23".into(), metric: from_edges(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]) });
    out.push(Space { name: "spider".into(), metric: from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]) });
    out.push(Space { name: "house".into(), metric: from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)]) });
    out.push(Space {
        name: "theta".into(),
        metric: from_edges(6, &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 5), (0, 4), (4, 5)]),
    });
    out
}

/// Every connected graph on `n` vertices, as edge lists.
pub fn connected_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect())
        .filter(|edges: &Vec<(usize, usize)>| {
            let g = Graph::new(n, edges).unwrap();
            g.bfs(0).iter().all(Option::is_some)
        })
        .collect()
}
