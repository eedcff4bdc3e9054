//! Unlabeled trees, generated by leaf addition and deduplicated through the
//! center-rooted canonical encoding.

use std::collections::BTreeSet;

pub type Edges = Vec<(usize, usize)>;

fn adjacency(n: usize, edges: &Edges) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn encode(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
    let mut children: Vec<String> =
        adj[v].iter().filter(|&&w| Some(w) != parent).map(|&w| encode(adj, w, Some(v))).collect();
    children.sort();
    format!("({})", children.concat())
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

fn canonical(n: usize, edges: &Edges) -> String {
    let adj = adjacency(n, edges);
    centers(&adj).into_iter().map(|c| encode(&adj, c, None)).min().unwrap()
}

/// One representative of every tree on `n` vertices, `1 ≤ n`.
pub fn trees(n: usize) -> Vec<Edges> {
    let mut level: Vec<Edges> = vec![Vec::new()];
    for size in 1..n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..size {
                let mut e = t.clone();
                e.push((v, size));
                if seen.insert(canonical(size + 1, &e)) {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    level
}
