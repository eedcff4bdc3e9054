//! The four-point hyperbolicity constant.

use rayon::prelude::*;

use crate::metric::FinMetric;
use crate::rational::{self, Rational};

fn delta_int(d: &[i64], n: usize) -> i64 {
    (0..n)
        .into_par_iter()
        .map(|w| {
            let mut best = 0;
            for x in 0..n {
                let wx = d[w * n + x];
                for y in 0..n {
                    let (wy, xy) = (d[w * n + y], d[x * n + y]);
                    for z in 0..n {
                        let lhs = wx + d[y * n + z];
                        let rhs = (wy + d[x * n + z]).max(xy + d[w * n + z]);
                        best = best.max(lhs - rhs);
                    }
                }
            }
            best
        })
        .max()
        .unwrap_or(0)
}

fn delta_rational(m: &FinMetric) -> Rational {
    let n = m.len();
    (0..n)
        .into_par_iter()
        .map(|w| {
            let mut best = rational::int(0);
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let lhs = m.d(w, x) + m.d(y, z);
                        let a = m.d(w, y) + m.d(x, z);
                        let b = m.d(x, y) + m.d(w, z);
                        let gap = lhs - a.max(b);
                        if gap > best {
                            best = gap;
                        }
                    }
                }
            }
            best
        })
        .max()
        .unwrap_or_else(|| rational::int(0))
}

/// Least `δ ≥ 0` with
/// `d(w,x) + d(y,z) ≤ max{d(w,y) + d(x,z), d(x,y) + d(w,z)} + δ`
/// for all ordered quadruples.
pub fn delta_hyperbolicity(m: &FinMetric) -> Rational {
    match m.int_matrix() {
        Some(d) => rational::int(delta_int(d, m.len())),
        None => delta_rational(m),
    }
}
