//! Equality graphs `A(f)` and their parity decomposition.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::MetricFunction;
use crate::metric::{require_extremal, FinMetric, PointId};

/// A set of unordered point pairs, loops included, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EqualityGraph {
    n: usize,
    bits: Vec<u64>,
}

fn pair_index(x: PointId, y: PointId) -> usize {
    let (i, j) = if x <= y { (x, y) } else { (y, x) };
    j * (j + 1) / 2 + i
}

impl EqualityGraph {
    pub fn empty(n: usize) -> Self {
        let pairs = n * (n + 1) / 2;
        EqualityGraph { n, bits: vec![0; pairs.div_ceil(64)] }
    }

    pub fn from_pairs(n: usize, pairs: &[(PointId, PointId)]) -> Self {
        let mut g = EqualityGraph::empty(n);
        for &(x, y) in pairs {
            g.insert(x, y);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: PointId, y: PointId) {
        let i = pair_index(x, y);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, x: PointId, y: PointId) -> bool {
        let i = pair_index(x, y);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Pairs `(x, y)` with `x ≤ y`, sorted.
    pub fn pairs(&self) -> Vec<(PointId, PointId)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in x..self.n {
                if self.contains(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &EqualityGraph) -> EqualityGraph {
        EqualityGraph { n: self.n, bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect() }
    }

    pub fn union(&self, other: &EqualityGraph) -> EqualityGraph {
        EqualityGraph { n: self.n, bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect() }
    }

    pub fn is_subset(&self, other: &EqualityGraph) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// The least point not touched by any pair.
    pub fn uncovered(&self) -> Option<PointId> {
        let mut covered = vec![false; self.n];
        for (x, y) in self.pairs() {
            covered[x] = true;
            covered[y] = true;
        }
        covered.iter().position(|&c| !c)
    }

    /// Whether every point lies in some pair (`∪A = X`).
    pub fn is_admissible_cover(&self) -> bool {
        self.uncovered().is_none()
    }

    /// Applies a point permutation: `{x,y} ↦ {L(x),L(y)}`.
    pub fn map_points(&self, perm: &[PointId]) -> EqualityGraph {
        let mut g = EqualityGraph::empty(self.n);
        for (x, y) in self.pairs() {
            g.insert(perm[x], perm[y]);
        }
        g
    }
}

impl fmt::Debug for EqualityGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

impl Serialize for EqualityGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

/// Pairs with `f(x) + f(y) = d(x,y)`, without checking extremality.
pub(crate) fn tight_pairs(m: &FinMetric, f: &MetricFunction) -> EqualityGraph {
    let mut g = EqualityGraph::empty(m.len());
    for x in m.points() {
        for y in x..m.len() {
            if &(&f[x] + &f[y]) == m.d(x, y) {
                g.insert(x, y);
            }
        }
    }
    g
}

/// Tight pairs for doubled values against a doubled distance matrix.
pub(crate) fn tight_pairs_doubled(n: usize, dist2: &[i64], f2: &[i64]) -> EqualityGraph {
    let mut g = EqualityGraph::empty(n);
    for x in 0..n {
        for y in x..n {
            if f2[x] + f2[y] == dist2[x * n + y] {
                g.insert(x, y);
            }
        }
    }
    g
}

/// `A(f)` for an extremal function `f`.
pub fn equality_graph(m: &FinMetric, f: &MetricFunction) -> Result<EqualityGraph> {
    require_extremal(m, f)?;
    Ok(tight_pairs(m, f))
}

/// Union-find where every element also carries its parity relative to the root.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
    odd: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n], odd: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, par) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= par;
        (root, self.parity[x])
    }

    /// Records an edge `{x, y}`, whose endpoints have opposite parity.
    fn union(&mut self, x: usize, y: usize) {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            if px == py {
                self.odd[rx] = true;
            }
            return;
        }
        let (child, root) = if rx < ry { (ry, rx) } else { (rx, ry) };
        self.parent[child] = root;
        self.parity[child] = !(px ^ py);
        self.odd[root] |= self.odd[child];
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityComponent {
    /// Points of the component, ascending.
    pub points: Vec<PointId>,
    pub odd: bool,
    /// For even components, the bipartition; the first side holds the least point.
    pub sides: Option<(Vec<PointId>, Vec<PointId>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityPartition {
    /// Components ordered by least point.
    pub components: Vec<ParityComponent>,
    pub rank: usize,
}

impl ParityPartition {
    pub fn even_components(&self) -> impl Iterator<Item = &ParityComponent> {
        self.components.iter().filter(|c| !c.odd)
    }

    /// Union of the odd components.
    pub fn odd_points(&self) -> Vec<PointId> {
        let mut v: Vec<PointId> =
            self.components.iter().filter(|c| c.odd).flat_map(|c| c.points.iter().copied()).collect();
        v.sort_unstable();
        v
    }
}

/// Splits the points into `A`-components, marks each odd (contains an odd
/// cycle, loops included) or even, and reports the rank.
pub fn parity_analysis(a: &EqualityGraph) -> Result<ParityPartition> {
    if let Some(x) = a.uncovered() {
        return Err(Error::NotAdmissible(x));
    }
    let n = a.n();
    let mut uf = ParityUnionFind::new(n);
    for (x, y) in a.pairs() {
        uf.union(x, y);
    }
    let mut components: Vec<ParityComponent> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let (root, par) = uf.find(x);
        if slot[root] == usize::MAX {
            slot[root] = components.len();
            let odd = uf.odd[root];
            components.push(ParityComponent {
                points: Vec::new(),
                odd,
                sides: (!odd).then(|| (Vec::new(), Vec::new())),
            });
        }
        let c = &mut components[slot[root]];
        c.points.push(x);
        if let Some((s1, s2)) = &mut c.sides {
            if par == uf.find(c.points[0]).1 {
                s1.push(x);
            } else {
                s2.push(x);
            }
        }
    }
    let rank = components.iter().filter(|c| !c.odd).count();
    Ok(ParityPartition { components, rank })
}

/// Number of even components, for a graph already known to cover all points.
pub(crate) fn rank_of(a: &EqualityGraph) -> usize {
    let mut uf = ParityUnionFind::new(a.n());
    for (x, y) in a.pairs() {
        uf.union(x, y);
    }
    (0..a.n()).filter(|&x| uf.find(x).0 == x && !uf.odd[x]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::embed;

    #[test]
    fn bitset_operations() {
        let mut g = EqualityGraph::empty(12);
        g.insert(3, 1);
        g.insert(11, 11);
        assert!(g.contains(1, 3) && g.contains(11, 11) && !g.contains(1, 1));
        assert_eq!(g.pairs(), vec![(1, 3), (11, 11)]);
        let h = EqualityGraph::from_pairs(12, &[(1, 3)]);
        assert!(h.is_subset(&g) && !g.is_subset(&h));
        assert_eq!(g.intersection(&h), h);
        assert_eq!(g.len(), 2);
        assert_eq!(g.uncovered(), Some(0));
        assert_eq!(format!("{h:?}"), "{(1, 3)}");
    }

    #[test]
    fn distance_function_graph() {
        let m = FinMetric::from_int_matrix(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        let a = equality_graph(&m, &embed(&m, 1)).unwrap();
        assert!(a.contains(1, 1) && a.contains(0, 1) && a.contains(1, 2));
        let p = parity_analysis(&a).unwrap();
        assert_eq!(p.rank, 0);
        assert_eq!(p.components.len(), 1);
        let a = equality_graph(&m, &MetricFunction::from_doubled(&[1, 1, 1])).unwrap();
        assert_eq!(a.pairs(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(equality_graph(&m, &MetricFunction::from_ints(&[1, 1, 1])).is_err());
    }

    #[test]
    fn even_components_and_sides() {
        let a = EqualityGraph::from_pairs(4, &[(0, 2), (1, 3)]);
        let p = parity_analysis(&a).unwrap();
        assert_eq!(p.rank, 2);
        assert_eq!(p.components[0].sides, Some((vec![0], vec![2])));
        assert_eq!(p.components[1].sides, Some((vec![1], vec![3])));
        assert_eq!(rank_of(&a), 2);
        let path = EqualityGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3)]);
        let p = parity_analysis(&path).unwrap();
        assert_eq!(p.components[0].sides, Some((vec![0, 2], vec![1, 3])));
        let triangle = EqualityGraph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(parity_analysis(&triangle).unwrap().rank, 0);
        let square = EqualityGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(parity_analysis(&square).unwrap().rank, 1);
        assert_eq!(parity_analysis(&EqualityGraph::from_pairs(3, &[(0, 1)])), Err(Error::NotAdmissible(2)));
    }
}
