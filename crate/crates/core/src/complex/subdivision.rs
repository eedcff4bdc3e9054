//! First barycentric subdivision of a hull complex.

use serde::Serialize;

use super::build::HullComplex;
use crate::function::MetricFunction;

/// Simplicial complex whose vertices are cell barycenters and whose simplices
/// are chains of cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subdivision {
    /// Barycenter of each cell, indexed by cell id.
    pub barycenters: Vec<MetricFunction>,
    /// Chains `c_0 ⊂ c_1 ⊂ …` of cell ids, ordered by size then lexicographically.
    pub simplices: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn simplices_of_dim(&self, k: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter().filter(move |s| s.len() == k + 1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.simplices.iter().map(|s| s.len()).max().unwrap_or(0);
        (1..=top).map(|len| self.simplices.iter().filter(|s| s.len() == len).count()).collect()
    }

    /// Simplices that are not contained in a larger chain.
    pub fn maximal_simplices(&self, complex: &HullComplex) -> Vec<&Vec<usize>> {
        let maximal = complex.maximal_cells();
        self.simplices
            .iter()
            .filter(|s| {
                let top = *s.last().expect("non-empty chain");
                maximal.binary_search(&top).is_ok() && complex.cells[s[0]].dim == 0 && is_saturated(complex, s)
            })
            .collect()
    }
}

fn is_saturated(complex: &HullComplex, chain: &[usize]) -> bool {
    chain.windows(2).all(|w| complex.cells[w[1]].dim == complex.cells[w[0]].dim + 1)
}

fn extend(up: &[Vec<usize>], chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(chain.clone());
    let last = *chain.last().expect("non-empty chain");
    for &next in &up[last] {
        chain.push(next);
        extend(up, chain, out);
        chain.pop();
    }
}

/// Barycenters of all cells together with every chain of cells.
pub fn barycentric_subdivision(complex: &HullComplex) -> Subdivision {
    let up: Vec<Vec<usize>> = (0..complex.cells.len()).map(|i| complex.cofaces(i)).collect();
    let mut simplices = Vec::new();
    for c in 0..complex.cells.len() {
        extend(&up, &mut vec![c], &mut simplices);
    }
    simplices.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Subdivision { barycenters: complex.cells.iter().map(|c| c.representative.clone()).collect(), simplices }
}
