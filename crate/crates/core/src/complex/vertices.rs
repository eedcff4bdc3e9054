//! Exhaustive enumeration of the vertices of `E(X)` on the half-integer grid.

use rayon::prelude::*;

use super::equality::{rank_of, tight_pairs_doubled};
use crate::error::{Error, Result};
use crate::function::MetricFunction;
use crate::metric::FinMetric;

/// Default cap on the number of grid candidates.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Number of grid candidates `∏ (2·ecc(x) + 1)`, saturating.
pub fn grid_size(m: &FinMetric) -> Result<u128> {
    let ints = m.int_matrix().ok_or(Error::NotIntegerMetric)?;
    let n = m.len();
    Ok((0..n)
        .map(|x| (0..n).map(|y| ints[x * n + y]).max().unwrap_or(0) as u128 * 2 + 1)
        .fold(1u128, |acc, k| acc.saturating_mul(k)))
}

struct Search<'a> {
    n: usize,
    dist2: &'a [i64],
    ecc2: Vec<i64>,
}

impl Search<'_> {
    /// Admissible range for the next coordinate given the assigned prefix.
    fn range(&self, f: &[i64]) -> (i64, i64) {
        let x = f.len();
        let mut lo = 0;
        let mut hi = self.ecc2[x];
        for (y, &fy) in f.iter().enumerate() {
            let d = self.dist2[x * self.n + y];
            lo = lo.max(d - fy);
            hi = hi.min(fy + d);
        }
        (lo, hi)
    }

    fn is_vertex(&self, f: &[i64]) -> bool {
        let n = self.n;
        let tight = (0..n).all(|x| (0..n).any(|y| f[x] + f[y] == self.dist2[x * n + y]));
        tight && rank_of(&tight_pairs_doubled(n, self.dist2, f)) == 0
    }

    fn descend(&self, f: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if f.len() == self.n {
            if self.is_vertex(f) {
                out.push(f.clone());
            }
            return;
        }
        let (lo, hi) = self.range(f);
        for v in lo..=hi {
            f.push(v);
            self.descend(f, out);
            f.pop();
        }
    }
}

/// All vertices of `E(X)` as doubled integer vectors, in lexicographic order.
pub(crate) fn enumerate_vertices_doubled(m: &FinMetric, budget: u128) -> Result<Vec<Vec<i64>>> {
    let required = grid_size(m)?;
    if required > budget {
        return Err(Error::BudgetExceeded { required, cap: budget });
    }
    let n = m.len();
    let dist2: Vec<i64> = m.int_matrix().expect("checked above").iter().map(|d| 2 * d).collect();
    let ecc2 = (0..n).map(|x| (0..n).map(|y| dist2[x * n + y]).max().unwrap_or(0)).collect();
    let search = Search { n, dist2: &dist2, ecc2 };
    let (lo, hi) = search.range(&[]);
    let chunks: Vec<Vec<Vec<i64>>> = (lo..=hi)
        .into_par_iter()
        .map(|v| {
            let mut out = Vec::new();
            let mut f = vec![v];
            search.descend(&mut f, &mut out);
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Every rank-0 extremal function, i.e. every vertex of the hull, with values
/// in `½ℤ` and `0 ≤ f(x) ≤ ecc(x)`.
pub fn enumerate_vertices(m: &FinMetric, budget: u128) -> Result<Vec<MetricFunction>> {
    Ok(enumerate_vertices_doubled(m, budget)?.iter().map(|f| MetricFunction::from_doubled(f)).collect())
}
