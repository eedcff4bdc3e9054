//! Named families of graphs: balls in `ℤ^n` and free groups, hypercubes,
//! cycles, chained cubes, paths and complete graphs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};
use crate::metric::PointId;

/// Default cap on the number of generated vertices.
pub const DEFAULT_MAX_VERTICES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    /// Generators `±e_i`.
    L1,
    /// Generators `{-1,0,1}^n \ {0}`.
    Linf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    ZnBall { n: usize, radius: u32, norm: Norm },
    Hypercube { n: usize },
    Cycle { m: usize },
    FreeBall { rank: usize, radius: u32 },
    ChainedCubes { count: usize },
    Path { m: usize },
    Complete { m: usize },
}

/// A generated graph; balls also carry their center and radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub graph: Graph,
    pub center: Option<PointId>,
    pub radius: Option<i64>,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::ZnBall { n, radius, norm } => {
                let norm = if norm == Norm::L1 { "l1" } else { "linf" };
                write!(f, "zn_ball:{n},{radius},{norm}")
            }
            Family::Hypercube { n } => write!(f, "hypercube:{n}"),
            Family::Cycle { m } => write!(f, "cycle:{m}"),
            Family::FreeBall { rank, radius } => write!(f, "free_ball:{rank},{radius}"),
            Family::ChainedCubes { count } => write!(f, "chained_cubes:{count}"),
            Family::Path { m } => write!(f, "path:{m}"),
            Family::Complete { m } => write!(f, "complete:{m}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses `name:p1,p2,…`, e.g. `hypercube:3` or `zn_ball:2,3,l1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("generator `{s}`: {msg}"));
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let params: Vec<&str> = params.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
        let num = |i: usize| -> Result<usize> {
            params
                .get(i)
                .ok_or_else(|| bad("missing parameter"))?
                .parse::<usize>()
                .map_err(|_| bad("parameters must be non-negative integers"))
        };
        let arity = |k: usize| if params.len() == k { Ok(()) } else { Err(bad(&format!("expected {k} parameters"))) };
        let family = match name.trim() {
            "zn_ball" => {
                arity(3)?;
                let norm = match params[2] {
                    "l1" => Norm::L1,
                    "linf" => Norm::Linf,
                    _ => return Err(bad("norm must be l1 or linf")),
                };
                let radius = u32::try_from(num(1)?).map_err(|_| bad("radius too large"))?;
                Family::ZnBall { n: num(0)?, radius, norm }
            }
            "free_ball" => {
                arity(2)?;
                let radius = u32::try_from(num(1)?).map_err(|_| bad("radius too large"))?;
                Family::FreeBall { rank: num(0)?, radius }
            }
            "hypercube" => {
                arity(1)?;
                Family::Hypercube { n: num(0)? }
            }
            "cycle" => {
                arity(1)?;
                Family::Cycle { m: num(0)? }
            }
            "chained_cubes" => {
                arity(1)?;
                Family::ChainedCubes { count: num(0)? }
            }
            "path" => {
                arity(1)?;
                Family::Path { m: num(0)? }
            }
            "complete" => {
                arity(1)?;
                Family::Complete { m: num(0)? }
            }
            _ => return Err(bad("unknown family")),
        };
        Ok(family)
    }
}

impl Family {
    /// Number of vertices, or `None` on overflow.
    pub fn vertex_count(&self) -> Option<u128> {
        match *self {
            Family::ZnBall { n, radius, norm } => {
                let r = radius as u128;
                match norm {
                    Norm::Linf => (2 * r + 1).checked_pow(n as u32),
                    Norm::L1 => {
                        // Lattice points of the cross-polytope: Σ_k 2^k C(n,k) C(r,k).
                        let mut total: u128 = 0;
                        let (mut cn, mut cr, mut pow) = (1u128, 1u128, 1u128);
                        for k in 0..=n.min(radius as usize) as u128 {
                            if k > 0 {
                                cn = cn.checked_mul(n as u128 - k + 1)? / k;
                                cr = cr.checked_mul(r - k + 1)? / k;
                                pow = pow.checked_mul(2)?;
                            }
                            total = total.checked_add(pow.checked_mul(cn)?.checked_mul(cr)?)?;
                        }
                        Some(total)
                    }
                }
            }
            Family::Hypercube { n } => 1u128.checked_shl(n as u32).filter(|_| n < 128),
            Family::Cycle { m } | Family::Path { m } | Family::Complete { m } => Some(m as u128),
            Family::FreeBall { rank, radius } => {
                let mut total: u128 = 1;
                let mut layer: u128 = 2 * rank as u128;
                for _ in 0..radius {
                    if rank == 0 {
                        break;
                    }
                    total = total.checked_add(layer)?;
                    layer = layer.checked_mul(2 * rank as u128 - 1)?;
                }
                Some(total)
            }
            Family::ChainedCubes { count } => {
                let mut total: u128 = 1;
                for k in 1..=count {
                    if k >= 127 {
                        return None;
                    }
                    total = total.checked_add((1u128 << k) - 1)?;
                }
                Some(total)
            }
        }
    }
}

fn zn_ball(n: usize, radius: u32, norm: Norm) -> Result<Generated> {
    let r = radius as i64;
    let mut points: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        points = points
            .into_iter()
            .flat_map(|p| {
                (-r..=r).filter_map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    let size = match norm {
                        Norm::L1 => q.iter().map(|v| v.abs()).sum::<i64>(),
                        Norm::Linf => q.iter().map(|v| v.abs()).max().unwrap_or(0),
                    };
                    (size <= r).then_some(q)
                })
            })
            .collect();
    }
    let origin = vec![0; n];
    points.sort_by(|a, b| (a != &origin).cmp(&(b != &origin)).then_with(|| a.cmp(b)));
    let index: HashMap<&[i64], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let steps: Vec<Vec<i64>> = match norm {
        Norm::L1 => (0..n)
            .flat_map(|i| {
                [1, -1].into_iter().map(move |s| {
                    let mut e = vec![0; n];
                    e[i] = s;
                    e
                })
            })
            .collect(),
        Norm::Linf => {
            let mut all: Vec<Vec<i64>> = vec![Vec::new()];
            for _ in 0..n {
                all = all
                    .into_iter()
                    .flat_map(|p| {
                        (-1..=1).map(move |c| {
                            let mut q = p.clone();
                            q.push(c);
                            q
                        })
                    })
                    .collect();
            }
            all.retain(|s| s.iter().any(|&c| c != 0));
            all
        }
    };
    let mut edges = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for s in &steps {
            let q: Vec<i64> = p.iter().zip(s).map(|(a, b)| a + b).collect();
            if let Some(&j) = index.get(q.as_slice()) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    let labels =
        points.iter().map(|p| format!("({})", p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))).collect();
    Ok(Generated { graph: Graph::new(points.len(), &edges)?.with_labels(labels)?, center: Some(0), radius: Some(r) })
}

fn bits(v: usize, n: usize) -> String {
    (0..n).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Vertex `v` is the 0/1 vector whose `i`-th coordinate is bit `i` of `v`.
fn hypercube(n: usize) -> Result<Graph> {
    let size = 1usize << n;
    let edges: Vec<(usize, usize)> =
        (0..size).flat_map(|v| (0..n).map(move |i| (v, v ^ (1 << i))).filter(|&(a, b)| a < b)).collect();
    Graph::new(size, &edges)?.with_labels((0..size).map(|v| bits(v, n)).collect())
}

fn cycle(m: usize) -> Result<Graph> {
    let edges: Vec<(usize, usize)> =
        if m < 2 { Vec::new() } else { (0..m).map(|i| (i, (i + 1) % m)).filter(|&(a, b)| a != b).collect() };
    Graph::new(m, &edges)?.with_labels((0..m).map(|i| i.to_string()).collect())
}

fn path(m: usize) -> Result<Graph> {
    let edges: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
    Graph::new(m, &edges)?.with_labels((0..m).map(|i| format!("p{i}")).collect())
}

fn complete(m: usize) -> Result<Graph> {
    let edges: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    Graph::new(m, &edges)?.with_labels((0..m).map(|i| format!("k{i}")).collect())
}

/// Reduced words of length at most `radius` in shortlex order; generator `i`
/// is the letter `a + i` and its inverse the matching capital.
fn free_ball(rank: usize, radius: u32) -> Result<Generated> {
    if rank > 26 {
        return Err(Error::InvalidArgument("free group rank must be at most 26".into()));
    }
    let inverse = |g: usize| g ^ 1;
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut layer_start = 0;
    for _ in 0..radius {
        let layer_end = words.len();
        for w in layer_start..layer_end {
            for g in 0..2 * rank {
                if words[w].last().is_some_and(|&l| l == inverse(g)) {
                    continue;
                }
                let mut next = words[w].clone();
                next.push(g);
                words.push(next);
            }
        }
        layer_start = layer_end;
    }
    let index: HashMap<&[usize], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let edges: Vec<(usize, usize)> =
        words.iter().enumerate().filter(|(_, w)| !w.is_empty()).map(|(i, w)| (index[&w[..w.len() - 1]], i)).collect();
    let letter = |g: usize| {
        let c = (b'a' + (g / 2) as u8) as char;
        if g % 2 == 1 {
            c.to_ascii_uppercase()
        } else {
            c
        }
    };
    let labels = words
        .iter()
        .map(|w| if w.is_empty() { "e".to_string() } else { w.iter().map(|&g| letter(g)).collect() })
        .collect();
    Ok(Generated {
        graph: Graph::new(words.len(), &edges)?.with_labels(labels)?,
        center: Some(0),
        radius: Some(radius as i64),
    })
}

/// Three-cubes `Q_1, …, Q_count`, with the all-ones vertex of `Q_k` identified with the
/// all-zeros vertex of `Q_{k+1}`.
fn chained_cubes(count: usize) -> Result<Graph> {
    let mut labels = vec!["c1:0".to_string()];
    let mut edges = Vec::new();
    let mut origin = 0;
    for k in 1..=count {
        let size = 1usize << k;
        let mut ids = vec![origin; size];
        for (v, id) in ids.iter_mut().enumerate().skip(1) {
            *id = labels.len();
            labels.push(format!("c{k}:{}", bits(v, k)));
        }
        for v in 0..size {
            for i in 0..k {
                let w = v ^ (1 << i);
                if v < w {
                    edges.push((ids[v], ids[w]));
                }
            }
        }
        origin = ids[size - 1];
    }
    Graph::new(labels.len(), &edges)?.with_labels(labels)
}

/// Builds the named graph, refusing families with more than `max_vertices`
/// vertices.
pub fn generate(family: &Family, max_vertices: usize) -> Result<Generated> {
    let cap = max_vertices as u128;
    let required = family.vertex_count().unwrap_or(u128::MAX);
    if required > cap {
        return Err(Error::BudgetExceeded { required, cap });
    }
    if required == 0 {
        return Err(Error::InvalidArgument(format!("{family} has no vertices")));
    }
    let plain = |graph: Graph| Generated { graph, center: None, radius: None };
    match *family {
        Family::ZnBall { n, radius, norm } => zn_ball(n, radius, norm),
        Family::FreeBall { rank, radius } => free_ball(rank, radius),
        Family::Hypercube { n } => hypercube(n).map(plain),
        Family::Cycle { m } => cycle(m).map(plain),
        Family::ChainedCubes { count } => chained_cubes(count).map(plain),
        Family::Path { m } => path(m).map(plain),
        Family::Complete { m } => complete(m).map(plain),
    }
}
