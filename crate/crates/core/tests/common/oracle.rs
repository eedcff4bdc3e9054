//! Brute-force hull oracle over small integer metrics. Vertices are the
//! unique solutions of `n` tight equations `f(x) + f(y) = d(x,y)` that are
//! extremal; cells are the covering pair sets that equal the intersection of
//! the equality graphs of all vertices containing them.

use std::collections::BTreeMap;

use num_rational::Ratio;

pub type Q = Ratio<i64>;

/// Pair list `(x, y)` with `x ≤ y`, in the order used for bitmasks.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect()
}

/// Unique solution of the square system `f(x) + f(y) = d(x,y)` over the
/// chosen pairs, if the system is nonsingular.
fn solve(n: usize, chosen: &[(usize, usize)], d: &[Vec<i64>]) -> Option<Vec<Q>> {
    let mut rows: Vec<Vec<Q>> = chosen
        .iter()
        .map(|&(x, y)| {
            let mut r = vec![Q::from_integer(0); n + 1];
            r[x] += 1;
            r[y] += 1;
            r[n] = Q::from_integer(d[x][y]);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| rows[r][col] != Q::from_integer(0))?;
        rows.swap(col, pivot);
        let p = rows[col][col];
        for v in rows[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col && rows[r][col] != Q::from_integer(0) {
                let factor = rows[r][col];
                let pivot_row = rows[col].clone();
                for (v, pv) in rows[r].iter_mut().zip(pivot_row) {
                    *v -= factor * pv;
                }
            }
        }
    }
    Some(rows.into_iter().map(|r| r[n]).collect())
}

pub fn is_extremal(d: &[Vec<i64>], f: &[Q]) -> bool {
    let n = f.len();
    (0..n).all(|x| {
        (0..n).all(|y| f[x] + f[y] >= Q::from_integer(d[x][y]))
            && (0..n).any(|y| f[x] + f[y] == Q::from_integer(d[x][y]))
    })
}

/// Bitmask over [`pairs`] of the tight pairs of `f`.
pub fn tight_mask(d: &[Vec<i64>], f: &[Q]) -> u64 {
    pairs(f.len())
        .iter()
        .enumerate()
        .filter(|(_, &(x, y))| f[x] + f[y] == Q::from_integer(d[x][y]))
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn combinations(k: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        out(cur);
        return;
    }
    for i in start..n {
        cur.push(i);
        combinations(k, n, i + 1, cur, out);
        cur.pop();
    }
}

/// Every vertex of `E(X)`, sorted.
pub fn vertices(d: &[Vec<i64>]) -> Vec<Vec<Q>> {
    let n = d.len();
    let all = pairs(n);
    let mut found = std::collections::BTreeSet::new();
    combinations(n, all.len(), 0, &mut Vec::new(), &mut |idx| {
        let chosen: Vec<(usize, usize)> = idx.iter().map(|&i| all[i]).collect();
        if let Some(f) = solve(n, &chosen, d) {
            if is_extremal(d, &f) {
                found.insert(f);
            }
        }
    });
    found.into_iter().collect()
}

/// Rank of the linear system of a pair set, by elimination.
fn equation_rank(n: usize, mask: u64) -> usize {
    let mut rows: Vec<Vec<Q>> = pairs(n)
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &(x, y))| {
            let mut r = vec![Q::from_integer(0); n];
            r[x] += 1;
            r[y] += 1;
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != Q::from_integer(0)) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != Q::from_integer(0) {
                let factor = rows[r][col] / rows[rank][col];
                let pivot_row = rows[rank].clone();
                for (v, pv) in rows[r].iter_mut().zip(pivot_row) {
                    *v -= factor * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn covers(n: usize, all: &[(usize, usize)], mask: u64) -> bool {
    let seen =
        all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0u64, |s, (_, &(x, y))| s | 1 << x | 1 << y);
    seen == (1 << n) - 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCell {
    pub vertex_ids: Vec<usize>,
    pub dim: usize,
}

/// Every cell, keyed by its admissible pair set.
pub fn cells(d: &[Vec<i64>], vertices: &[Vec<Q>]) -> BTreeMap<u64, OracleCell> {
    let n = d.len();
    let masks: Vec<u64> = vertices.iter().map(|v| tight_mask(d, v)).collect();
    let all = pairs(n);
    let mut out = BTreeMap::new();
    for a in 0u64..1 << all.len() {
        if !covers(n, &all, a) {
            continue;
        }
        let ids: Vec<usize> = (0..masks.len()).filter(|&v| masks[v] & a == a).collect();
        if ids.is_empty() {
            continue;
        }
        let meet = ids.iter().fold(u64::MAX, |acc, &v| acc & masks[v]);
        if meet == a {
            out.insert(a, OracleCell { vertex_ids: ids, dim: n - equation_rank(n, a) });
        }
    }
    out
}

/// Lexicographically least upper triangle over all relabelings.
pub fn canonical_upper(d: &[Vec<i64>]) -> Vec<i64> {
    let n = d.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<i64>> = None;
    permute(&mut perm, 0, &mut |p| {
        let key: Vec<i64> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| d[p[i]][p[j]]).collect();
        if best.as_ref().is_none_or(|b| &key < b) {
            best = Some(key);
        }
    });
    best.unwrap_or_default()
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Every metric on `n` points with distances in `1..=max`, one per
/// isomorphism class.
pub fn small_metrics(n: usize, max: i64) -> Vec<Vec<Vec<i64>>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = (max as u64).pow(slots.len() as u32);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for code in 0..total {
        let mut d = vec![vec![0; n]; n];
        let mut c = code;
        for &(i, j) in &slots {
            let v = (c % max as u64) as i64 + 1;
            c /= max as u64;
            d[i][j] = v;
            d[j][i] = v;
        }
        let triangle = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| d[x][z] <= d[x][y] + d[y][z])));
        if triangle && seen.insert(canonical_upper(&d)) {
            out.push(d);
        }
    }
    out
}

fn to_q(r: &tightspan::Rational) -> Q {
    use num_traits::ToPrimitive;
    Q::new(r.numer().to_i64().unwrap(), r.denom().to_i64().unwrap())
}

fn pair_mask(n: usize, a: &tightspan::complex::EqualityGraph) -> u64 {
    let all = pairs(n);
    a.pairs().iter().fold(0, |m, p| m | 1 << all.iter().position(|q| q == p).unwrap())
}

/// Compares vertex enumeration and the full complex against the oracle.
pub fn compare_with_oracle(d: &[Vec<i64>]) -> Result<(), String> {
    use tightspan::complex::{build_complex, enumerate_vertices, DEFAULT_BUDGET};
    let m = tightspan::FinMetric::from_int_matrix(d).map_err(|e| e.to_string())?;
    let expected = vertices(d);
    let got: Vec<Vec<Q>> = enumerate_vertices(&m, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|f| f.iter().map(to_q).collect())
        .collect();
    let mut sorted = got.clone();
    sorted.sort();
    if sorted != expected {
        return Err(format!("{d:?}: vertices {got:?} but oracle has {expected:?}"));
    }
    let complex = build_complex(&m, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let index: Vec<usize> = complex
        .vertices
        .iter()
        .map(|f| {
            let q: Vec<Q> = f.iter().map(to_q).collect();
            expected.binary_search(&q).unwrap()
        })
        .collect();
    let oracle_cells = cells(d, &expected);
    if oracle_cells.len() != complex.cells.len() {
        return Err(format!("{d:?}: {} cells but oracle has {}", complex.cells.len(), oracle_cells.len()));
    }
    for cell in &complex.cells {
        let key = pair_mask(d.len(), &cell.admissible_set);
        let Some(o) = oracle_cells.get(&key) else {
            return Err(format!("{d:?}: cell {:?} unknown to the oracle", cell.admissible_set));
        };
        let mut ids: Vec<usize> = cell.vertex_ids.iter().map(|&v| index[v]).collect();
        ids.sort();
        if ids != o.vertex_ids || cell.dim != o.dim {
            return Err(format!("{d:?}: cell {:?} disagrees with the oracle", cell.admissible_set));
        }
    }
    Ok(())
}
