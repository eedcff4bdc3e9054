//! Inequality descriptions of cells and their isometry-class canonical forms.

use num_integer::Integer;
use serde::Serialize;

use super::build::HullComplex;
use super::equality::{parity_analysis, tight_pairs, EqualityGraph};
use crate::error::{Error, Result};
use crate::function::MetricFunction;
use crate::metric::{FinMetric, PointId};
use crate::rational::{self, Rational};

/// `σ·t_k + τ·t_l ≥ constant`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairConstraint {
    pub k: usize,
    pub sigma: i8,
    pub l: usize,
    pub tau: i8,
    #[serde(with = "rational::as_string")]
    pub constant: Rational,
}

/// The polytope `Q ⊂ l∞^n` that a cell is isometric to, written as
/// `σ·t_k ≥ C̄_kσ` and `σ·t_k + τ·t_l ≥ C_kσlτ`, in coordinates
/// `t_k = g(x_k) − f(x_k)` around the offset function `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolytopeSystem {
    pub n: usize,
    /// Reference point `x_k` of each even component.
    pub reference_points: Vec<PointId>,
    /// Bipartition `(X_k,+1, X_k,-1)` of each even component.
    pub sides: Vec<(Vec<PointId>, Vec<PointId>)>,
    /// Union of the odd components.
    pub fixed_points: Vec<PointId>,
    pub offset: MetricFunction,
    /// `[C̄_k,+1, C̄_k,-1]` for each `k`.
    #[serde(serialize_with = "serialize_cbar")]
    pub cbar: Vec<[Rational; 2]>,
    pub pairs: Vec<PairConstraint>,
}

fn serialize_cbar<S: serde::Serializer>(v: &[[Rational; 2]], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<[String; 2]> = v.iter().map(|[a, b]| [rational::format(a), rational::format(b)]).collect();
    strings.serialize(s)
}

fn sign_index(sigma: i8) -> usize {
    if sigma > 0 {
        0
    } else {
        1
    }
}

impl PolytopeSystem {
    /// Always `2n²`.
    pub fn inequality_count(&self) -> usize {
        2 * self.n + self.pairs.len()
    }

    /// Every inequality as `(coefficients, constant)` meaning `a·t ≥ c`.
    pub fn inequalities(&self) -> Vec<(Vec<i64>, Rational)> {
        let mut out = Vec::with_capacity(self.inequality_count());
        for k in 0..self.n {
            for sigma in [1i8, -1] {
                let mut a = vec![0; self.n];
                a[k] = sigma as i64;
                out.push((a, self.cbar[k][sign_index(sigma)].clone()));
            }
        }
        for p in &self.pairs {
            let mut a = vec![0; self.n];
            a[p.k] = p.sigma as i64;
            a[p.l] = p.tau as i64;
            out.push((a, p.constant.clone()));
        }
        out
    }

    /// `I_f(g) = (g(x_k) − f(x_k))_k`.
    pub fn coordinates(&self, g: &MetricFunction) -> Vec<Rational> {
        self.reference_points.iter().map(|&x| &g[x] - &self.offset[x]).collect()
    }

    /// Inverse of [`coordinates`](Self::coordinates) on the affine space `H(A)`.
    pub fn lift(&self, t: &[Rational]) -> MetricFunction {
        let mut g = self.offset.clone();
        for (k, (plus, minus)) in self.sides.iter().enumerate() {
            for &x in plus {
                g.set(x, &self.offset[x] + &t[k]);
            }
            for &x in minus {
                g.set(x, &self.offset[x] - &t[k]);
            }
        }
        g
    }

    pub fn contains(&self, t: &[Rational]) -> bool {
        self.inequalities().iter().all(|(a, c)| &dot(a, t) >= c)
    }

    /// Length of a one-dimensional cell, `−(C̄_1,+1 + C̄_1,-1)`.
    pub fn edge_length(&self) -> Option<Rational> {
        (self.n == 1).then(|| -(&self.cbar[0][0] + &self.cbar[0][1]))
    }
}

fn dot(a: &[i64], t: &[Rational]) -> Rational {
    a.iter().zip(t).filter(|(c, _)| **c != 0).map(|(&c, v)| v * rational::int(c)).sum()
}

fn block_max<'a>(
    m: &FinMetric,
    f: &MetricFunction,
    pairs: impl Iterator<Item = (&'a PointId, &'a PointId)>,
) -> Option<Rational> {
    pairs.map(|(&x, &y)| m.d(x, y) - &f[x] - &f[y]).max()
}

/// Builds the inequality system of the cell `P(A)` around a function `f`
/// with `A(f) = A`.
pub fn polytope_system(m: &FinMetric, a: &EqualityGraph, f: &MetricFunction) -> Result<PolytopeSystem> {
    if &tight_pairs(m, f) != a {
        return Err(Error::InvalidArgument("offset function does not have equality graph A".into()));
    }
    let parity = parity_analysis(a)?;
    if parity.rank == 0 {
        return Err(Error::ZeroDimensional);
    }
    let sides: Vec<(Vec<PointId>, Vec<PointId>)> =
        parity.even_components().map(|c| c.sides.clone().expect("even component")).collect();
    let reference_points: Vec<PointId> = sides.iter().map(|(plus, _)| plus[0]).collect();
    let fixed = parity.odd_points();
    let two = rational::int(2);
    let side = |k: usize, sigma: i8| if sigma > 0 { &sides[k].0 } else { &sides[k].1 };
    let mut cbar = Vec::with_capacity(sides.len());
    for k in 0..sides.len() {
        let mut entry: [Rational; 2] = Default::default();
        for sigma in [1i8, -1] {
            let s = side(k, sigma);
            let within =
                block_max(m, f, s.iter().flat_map(|x| s.iter().map(move |y| (x, y)))).expect("non-empty side") / &two;
            let against_fixed = block_max(m, f, s.iter().flat_map(|x| fixed.iter().map(move |y| (x, y))));
            entry[sign_index(sigma)] = match against_fixed {
                Some(c) => within.max(c),
                None => within,
            };
        }
        cbar.push(entry);
    }
    let mut pairs = Vec::new();
    for k in 0..sides.len() {
        for l in k + 1..sides.len() {
            for sigma in [1i8, -1] {
                for tau in [1i8, -1] {
                    let (sk, sl) = (side(k, sigma), side(l, tau));
                    let constant = block_max(m, f, sk.iter().flat_map(|x| sl.iter().map(move |y| (x, y))))
                        .expect("non-empty sides");
                    pairs.push(PairConstraint { k, sigma, l, tau, constant });
                }
            }
        }
    }
    Ok(PolytopeSystem { n: sides.len(), reference_points, sides, fixed_points: fixed, offset: f.clone(), cbar, pairs })
}

/// Pairs of points whose tightness corresponds to each inequality, in the
/// order of [`PolytopeSystem::inequalities`].
fn inequality_blocks(sys: &PolytopeSystem) -> Vec<Vec<(PointId, PointId)>> {
    let side = |k: usize, sigma: i8| if sigma > 0 { &sys.sides[k].0 } else { &sys.sides[k].1 };
    let mut blocks = Vec::new();
    for k in 0..sys.n {
        for sigma in [1i8, -1] {
            let s = side(k, sigma);
            let mut b: Vec<(PointId, PointId)> = s.iter().flat_map(|&x| s.iter().map(move |&y| (x, y))).collect();
            b.extend(s.iter().flat_map(|&x| sys.fixed_points.iter().map(move |&y| (x, y))));
            blocks.push(b);
        }
    }
    for p in &sys.pairs {
        let (sk, sl) = (side(p.k, p.sigma), side(p.l, p.tau));
        blocks.push(sk.iter().flat_map(|&x| sl.iter().map(move |&y| (x, y))).collect());
    }
    blocks
}

/// Rank of a small integer matrix by fraction-free elimination.
pub(crate) fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for j in 0..cols {
                    m[r][j] = m[r][j] * a - m[rank][j] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &v| g.gcd(&v));
                if g > 1 {
                    m[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The inequality system of a cell, checked against the cell's vertices: each
/// vertex satisfies the system, an inequality is tight exactly when the
/// vertex's equality graph contains a pair of the matching block, and the tight
/// normals at every vertex span `ℝ^n`.
pub fn cell_system(complex: &HullComplex, cell: usize) -> Result<PolytopeSystem> {
    let c = &complex.cells[cell];
    let m = &complex.metric;
    let sys = polytope_system(m, &c.admissible_set, &c.representative)?;
    let inequalities = sys.inequalities();
    let blocks = inequality_blocks(&sys);
    for &v in &c.vertex_ids {
        let t = sys.coordinates(&complex.vertices[v]);
        let graph = &complex.vertex_graphs[v];
        let mut tight_normals = Vec::new();
        for ((a, constant), block) in inequalities.iter().zip(&blocks) {
            let lhs = dot(a, &t);
            if &lhs < constant {
                return Err(Error::Inconsistent(format!("vertex {v} violates an inequality of cell {cell}")));
            }
            let tight = &lhs == constant;
            if tight != block.iter().any(|&(x, y)| graph.contains(x, y)) {
                return Err(Error::Inconsistent(format!("tight pattern of vertex {v} in cell {cell}")));
            }
            if tight {
                tight_normals.push(a.clone());
            }
        }
        if integer_rank(&tight_normals) != sys.n {
            return Err(Error::Inconsistent(format!("vertex {v} is not a vertex of the polytope of cell {cell}")));
        }
    }
    Ok(sys)
}

/// Unit directions of the inequality system, grouped by largest coordinate so
/// that a key prefix only depends on the first coordinates.
fn directions(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for k in 0..n {
        for sigma in [1, -1] {
            let mut a = vec![0; n];
            a[k] = sigma;
            out.push(a);
        }
        for l in 0..k {
            for sigma in [1, -1] {
                for tau in [1, -1] {
                    let mut a = vec![0; n];
                    a[l] = sigma;
                    a[k] = tau;
                    out.push(a);
                }
            }
        }
    }
    out
}

struct CanonicalSearch<'a> {
    n: usize,
    points: &'a [Vec<i64>],
    dirs: Vec<Vec<i64>>,
    /// `dir_end[j]`: number of directions supported on coordinates `< j`.
    dir_end: Vec<usize>,
    best: Option<Vec<i64>>,
}

impl CanonicalSearch<'_> {
    fn support(&self, dir: &[i64], image: &[(usize, i64)]) -> i64 {
        self.points
            .iter()
            .map(|p| dir.iter().zip(image).map(|(&a, &(src, s))| a * s * p[src]).sum::<i64>())
            .min()
            .expect("non-empty cell")
    }

    fn descend(&mut self, image: &mut Vec<(usize, i64)>, used: &mut [bool], key: &mut Vec<i64>) {
        let j = image.len();
        if j == self.n {
            if self.best.as_ref().is_none_or(|b| key[..] < b[..]) {
                self.best = Some(key.clone());
            }
            return;
        }
        for src in 0..self.n {
            if used[src] {
                continue;
            }
            for sign in [1, -1] {
                image.push((src, sign));
                used[src] = true;
                let start = key.len();
                for d in self.dir_end[j]..self.dir_end[j + 1] {
                    let dir = &self.dirs[d][..=j];
                    let v = self.support(dir, image);
                    key.push(v);
                }
                let prune = self.best.as_ref().is_some_and(|b| key[..] > b[..key.len()]);
                if !prune {
                    self.descend(image, used, key);
                }
                key.truncate(start);
                used[src] = false;
                image.pop();
            }
        }
    }
}

/// Canonical form of a polytope given by vertex coordinates: the
/// lexicographically least vector of support values in the system's
/// directions, over all signed coordinate permutations.
pub(crate) fn canonical_polytope(n: usize, points: &[Vec<i64>]) -> Vec<i64> {
    let dirs = directions(n);
    let mut dir_end = vec![0];
    for j in 0..n {
        dir_end.push(dir_end[j] + 2 + 4 * j);
    }
    let mut search = CanonicalSearch { n, points, dirs, dir_end, best: None };
    search.descend(&mut Vec::new(), &mut vec![false; n], &mut Vec::new());
    search.best.unwrap_or_default()
}

/// Canonical form of a cell: dimension, vertex count and the canonical support
/// vector of its vertex images centred at the barycenter (scaled to integers).
pub fn canonical_form(complex: &HullComplex, cell: usize) -> Vec<i64> {
    let c = &complex.cells[cell];
    let mut key = vec![c.dim as i64, c.vertex_ids.len() as i64];
    if c.dim == 0 {
        return key;
    }
    let parity = parity_analysis(&c.admissible_set).expect("cells are admissible");
    let refs: Vec<PointId> = parity.even_components().map(|comp| comp.sides.as_ref().expect("even").0[0]).collect();
    let count = c.vertex_ids.len() as i64;
    let sums: Vec<i64> = refs.iter().map(|&x| c.vertex_ids.iter().map(|&v| complex.doubled[v][x]).sum()).collect();
    let points: Vec<Vec<i64>> = c
        .vertex_ids
        .iter()
        .map(|&v| refs.iter().zip(&sums).map(|(&x, s)| count * complex.doubled[v][x] - s).collect())
        .collect();
    key.extend(canonical_polytope(c.dim, &points));
    key
}

/// Class label per cell: cells share a label iff their canonical forms agree.
/// Labels are numbered in order of first appearance.
pub fn isometry_classes(complex: &HullComplex) -> Vec<usize> {
    let mut seen: std::collections::HashMap<Vec<i64>, usize> = std::collections::HashMap::new();
    (0..complex.cells.len())
        .map(|i| {
            let key = canonical_form(complex, i);
            let next = seen.len();
            *seen.entry(key).or_insert(next)
        })
        .collect()
}
