//! Assembly of the polyhedral complex from the vertex set.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::equality::{rank_of, tight_pairs, tight_pairs_doubled, EqualityGraph};
use super::system::isometry_classes;
use super::vertices::enumerate_vertices_doubled;
use crate::error::{Error, Result};
use crate::function::{sup_distance, MetricFunction};
use crate::metric::FinMetric;
use crate::rational::{self, Rational};

/// One cell `P(A)` of the hull.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub admissible_set: EqualityGraph,
    /// Indices of the hull vertices `v` with `A ⊆ A(v)`, ascending.
    pub vertex_ids: Vec<usize>,
    pub dim: usize,
    /// Barycenter of the vertices; its equality graph is exactly `A`.
    pub representative: MetricFunction,
}

#[derive(Debug, Clone)]
pub struct HullComplex {
    pub metric: FinMetric,
    pub vertices: Vec<MetricFunction>,
    /// `A(v)` for every vertex.
    pub vertex_graphs: Vec<EqualityGraph>,
    /// Cells sorted by dimension, then vertex list. The first cells are the
    /// vertices, in vertex order.
    pub cells: Vec<Cell>,
    /// Covering pairs `(face, cell)` of the face poset.
    pub faces: Vec<(usize, usize)>,
    pub isometry_class: Vec<usize>,
    pub(crate) doubled: Vec<Vec<i64>>,
    index: HashMap<EqualityGraph, usize>,
}

fn barycenter(doubled: &[Vec<i64>], ids: &[usize]) -> MetricFunction {
    let n = doubled[ids[0]].len();
    let denom = 2 * ids.len() as i64;
    MetricFunction::new((0..n).map(|x| rational::ratio(ids.iter().map(|&v| doubled[v][x]).sum(), denom)).collect())
}

/// Closes the vertex equality graphs under intersection, keeping only sets
/// that still cover every point.
fn admissible_closure(vertex_graphs: &[EqualityGraph]) -> HashSet<EqualityGraph> {
    let mut seen: HashSet<EqualityGraph> = vertex_graphs.iter().cloned().collect();
    let mut queue: Vec<EqualityGraph> = vertex_graphs.to_vec();
    while let Some(g) = queue.pop() {
        for a in vertex_graphs {
            let h = g.intersection(a);
            if h != g && h.is_admissible_cover() && !seen.contains(&h) {
                seen.insert(h.clone());
                queue.push(h);
            }
        }
    }
    seen
}

/// Builds every cell of `E(X)` for an integer-valued metric.
pub fn build_complex(m: &FinMetric, budget: u128) -> Result<HullComplex> {
    let doubled = enumerate_vertices_doubled(m, budget)?;
    let n = m.len();
    let dist2: Vec<i64> = m.int_matrix().expect("integer metric").iter().map(|d| 2 * d).collect();
    let vertex_graphs: Vec<EqualityGraph> = doubled.iter().map(|f| tight_pairs_doubled(n, &dist2, f)).collect();
    let graphs = admissible_closure(&vertex_graphs);

    let mut cells: Vec<Cell> = graphs
        .into_iter()
        .map(|a| {
            let vertex_ids: Vec<usize> = (0..doubled.len()).filter(|&v| a.is_subset(&vertex_graphs[v])).collect();
            let dim = rank_of(&a);
            let representative = barycenter(&doubled, &vertex_ids);
            Cell { admissible_set: a, vertex_ids, dim, representative }
        })
        .collect();
    cells.sort_by(|a, b| (a.dim, &a.vertex_ids).cmp(&(b.dim, &b.vertex_ids)));

    for (i, c) in cells.iter().enumerate() {
        if tight_pairs(m, &c.representative) != c.admissible_set {
            return Err(Error::Inconsistent(format!("barycenter of cell {i} is not in its relative interior")));
        }
        if c.dim == 0 && c.vertex_ids.len() != 1 {
            return Err(Error::Inconsistent(format!("zero-dimensional cell {i} has several vertices")));
        }
    }
    let index: HashMap<EqualityGraph, usize> =
        cells.iter().enumerate().map(|(i, c)| (c.admissible_set.clone(), i)).collect();

    let max_dim = cells.iter().map(|c| c.dim).max().unwrap_or(0);
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); max_dim + 1];
    for (i, c) in cells.iter().enumerate() {
        by_dim[c.dim].push(i);
    }
    let mut faces = Vec::new();
    for k in 1..=max_dim {
        for &j in &by_dim[k] {
            for &i in &by_dim[k - 1] {
                if cells[j].admissible_set.is_subset(&cells[i].admissible_set) {
                    faces.push((i, j));
                }
            }
        }
    }
    faces.sort_unstable();

    let mut complex = HullComplex {
        metric: m.clone(),
        vertices: doubled.iter().map(|f| MetricFunction::from_doubled(f)).collect(),
        vertex_graphs,
        cells,
        faces,
        isometry_class: Vec::new(),
        doubled,
        index,
    };
    complex.check_intersections()?;
    complex.isometry_class = isometry_classes(&complex);
    Ok(complex)
}

impl HullComplex {
    /// Highest cell dimension.
    pub fn dimension(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    /// Number of cells in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut v = vec![0; self.dimension() + 1];
        for c in &self.cells {
            v[c.dim] += 1;
        }
        v
    }

    /// Number of distinct isometry classes in each dimension.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut per_dim: Vec<HashSet<usize>> = vec![HashSet::new(); self.dimension() + 1];
        for (c, &label) in self.cells.iter().zip(&self.isometry_class) {
            per_dim[c.dim].insert(label);
        }
        per_dim.iter().map(|s| s.len()).collect()
    }

    pub fn cell_of(&self, a: &EqualityGraph) -> Option<usize> {
        self.index.get(a).copied()
    }

    /// Index of the zero-dimensional cell of vertex `v`.
    pub fn vertex_cell(&self, v: usize) -> usize {
        self.cell_of(&self.vertex_graphs[v]).expect("every vertex is a cell")
    }

    pub fn vertex_index(&self, f: &MetricFunction) -> Option<usize> {
        self.vertices.binary_search_by(|v| self.cmp_doubled(v, f)).ok()
    }

    fn cmp_doubled(&self, a: &MetricFunction, b: &MetricFunction) -> std::cmp::Ordering {
        a.to_doubled().cmp(&b.to_doubled())
    }

    /// Whether cell `i` is a face of cell `j` (not necessarily proper).
    pub fn is_face(&self, i: usize, j: usize) -> bool {
        self.cells[j].admissible_set.is_subset(&self.cells[i].admissible_set)
    }

    /// Every cell containing cell `i` as a proper face.
    pub fn cofaces(&self, i: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&j| j != i && self.is_face(i, j)).collect()
    }

    /// `‖u − v‖∞` between the endpoints of an edge.
    pub fn edge_length(&self, cell: usize) -> Option<Rational> {
        let c = &self.cells[cell];
        (c.dim == 1 && c.vertex_ids.len() == 2).then(|| {
            sup_distance(&self.vertices[c.vertex_ids[0]], &self.vertices[c.vertex_ids[1]]).expect("same length")
        })
    }

    pub fn cells_of_dim(&self, k: usize) -> impl Iterator<Item = (usize, &Cell)> {
        self.cells.iter().enumerate().filter(move |(_, c)| c.dim == k)
    }

    /// Maximal cells, i.e. those that are not a proper face of another cell.
    pub fn maximal_cells(&self) -> Vec<usize> {
        let mut has_parent = vec![false; self.cells.len()];
        for &(i, _) in &self.faces {
            has_parent[i] = true;
        }
        (0..self.cells.len()).filter(|&i| !has_parent[i]).collect()
    }

    /// The intersection of two cells with a common vertex is the cell spanned
    /// by the common vertices.
    fn check_intersections(&self) -> Result<()> {
        let words = self.vertices.len().div_ceil(64);
        let sets: Vec<Vec<u64>> = self
            .cells
            .iter()
            .map(|c| {
                let mut s = vec![0u64; words];
                for &v in &c.vertex_ids {
                    s[v / 64] |= 1 << (v % 64);
                }
                s
            })
            .collect();
        let maximal = self.maximal_cells();
        for (a, &i) in maximal.iter().enumerate() {
            for &j in &maximal[a + 1..] {
                let common: Vec<usize> = (0..self.vertices.len())
                    .filter(|&v| ((sets[i][v / 64] & sets[j][v / 64]) >> (v % 64)) & 1 == 1)
                    .collect();
                if common.is_empty() {
                    continue;
                }
                let graph = common[1..]
                    .iter()
                    .fold(self.vertex_graphs[common[0]].clone(), |g, &v| g.intersection(&self.vertex_graphs[v]));
                match self.cell_of(&graph) {
                    Some(c) if self.cells[c].vertex_ids == common => {}
                    _ => return Err(Error::Inconsistent(format!("intersection of cells {i} and {j} is not a cell"))),
                }
            }
        }
        Ok(())
    }
}

/// Largest cell dimension.
pub fn hull_dimension(complex: &HullComplex) -> usize {
    complex.dimension()
}
