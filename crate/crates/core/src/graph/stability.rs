//! Interval stability: `d_H(I(x,y), I(x,y')) ≤ β` whenever `d(y,y') = 1`.

use rayon::prelude::*;
use serde::Serialize;

use super::unit_neighbors;
use crate::error::{Error, Result};
use crate::metric::{FinMetric, PointId};

/// Which triples `(x, y, y')` a stability check ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    All,
    /// Only triples with `d(c,x) + max(d(x,y), d(x,y')) ≤ radius`, so every
    /// geodesic involved stays inside the ball `B(c, radius)`.
    Interior {
        center: PointId,
        radius: i64,
    },
}

/// A point `v ∈ I(x,y)` with no point of `I(x,y2)` within the checked β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StabilityWitness {
    pub x: PointId,
    pub y: PointId,
    pub y2: PointId,
    pub v: PointId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub beta_checked: u64,
    pub holds: bool,
    pub triples_checked: usize,
    pub witness: Option<StabilityWitness>,
}

struct Triples<'a> {
    d: &'a [i64],
    n: usize,
    neighbors: Vec<Vec<PointId>>,
    scope: Scope,
}

impl<'a> Triples<'a> {
    fn new(m: &'a FinMetric, scope: Scope) -> Result<Self> {
        let d = m.int_matrix().ok_or(Error::NotIntegerMetric)?;
        if let Scope::Interior { center, .. } = scope {
            m.check_point(center)?;
        }
        let neighbors = m.points().map(|x| unit_neighbors(m, x)).collect();
        Ok(Triples { d, n: m.len(), neighbors, scope })
    }

    fn d(&self, a: PointId, b: PointId) -> i64 {
        self.d[a * self.n + b]
    }

    fn included(&self, x: PointId, y: PointId, y2: PointId) -> bool {
        match self.scope {
            Scope::All => true,
            Scope::Interior { center, radius } => self.d(center, x) + self.d(x, y).max(self.d(x, y2)) <= radius,
        }
    }

    fn interval(&self, x: PointId, y: PointId) -> Vec<PointId> {
        (0..self.n).filter(|&v| self.d(x, v) + self.d(v, y) == self.d(x, y)).collect()
    }

    /// Triples from a fixed base point `x`, as `(y, y2)` in ascending order.
    fn from(&self, x: PointId) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        (0..self.n).flat_map(move |y| {
            self.neighbors[y].iter().filter(move |&&y2| self.included(x, y, y2)).map(move |&y2| (y, y2))
        })
    }

    /// `max_{v ∈ I(x,y)} min_{v' ∈ I(x,y2)} d(v,v')` together with the
    /// maximizing `v`.
    fn directed_gap(&self, a: &[PointId], b: &[PointId]) -> (i64, PointId) {
        a.iter()
            .map(|&v| (b.iter().map(|&w| self.d(v, w)).min().expect("intervals are non-empty"), v))
            .fold((i64::MIN, 0), |best, (g, v)| if g > best.0 { (g, v) } else { best })
    }
}

/// Largest directed gap over the included triples with base point `x`, with
/// the first triple attaining it.
fn worst_from(t: &Triples, x: PointId) -> (usize, Option<(i64, StabilityWitness)>) {
    let intervals: Vec<Vec<PointId>> = (0..t.n).map(|y| t.interval(x, y)).collect();
    let mut count = 0;
    let mut worst: Option<(i64, StabilityWitness)> = None;
    for (y, y2) in t.from(x) {
        count += 1;
        let (gap, v) = t.directed_gap(&intervals[y], &intervals[y2]);
        if worst.as_ref().is_none_or(|w| gap > w.0) {
            worst = Some((gap, StabilityWitness { x, y, y2, v }));
        }
    }
    (count, worst)
}

fn scan(m: &FinMetric, scope: Scope) -> Result<(usize, Option<(i64, StabilityWitness)>)> {
    let t = Triples::new(m, scope)?;
    let per_x: Vec<_> = (0..t.n).into_par_iter().map(|x| worst_from(&t, x)).collect();
    let mut count = 0;
    let mut worst: Option<(i64, StabilityWitness)> = None;
    for (c, w) in per_x {
        count += c;
        if let Some(w) = w {
            if worst.as_ref().is_none_or(|b| w.0 > b.0) {
                worst = Some(w);
            }
        }
    }
    Ok((count, worst))
}

/// Exhaustive check over every included ordered triple `(x, y, y')` with
/// `d(y,y') = 1`; both directions of the Hausdorff bound are covered because
/// `(x, y', y)` is checked too. The witness is the first violating triple in
/// `(x, y, y')` order.
pub fn check_stable_intervals(m: &FinMetric, beta: u64, scope: Scope) -> Result<StabilityReport> {
    let t = Triples::new(m, scope)?;
    let beta_i = i64::try_from(beta).unwrap_or(i64::MAX);
    let per_x: Vec<(usize, Option<StabilityWitness>)> = (0..t.n)
        .into_par_iter()
        .map(|x| {
            let intervals: Vec<Vec<PointId>> = (0..t.n).map(|y| t.interval(x, y)).collect();
            let mut count = 0;
            for (y, y2) in t.from(x) {
                count += 1;
                let (gap, v) = t.directed_gap(&intervals[y], &intervals[y2]);
                if gap > beta_i {
                    return (count, Some(StabilityWitness { x, y, y2, v }));
                }
            }
            (count, None)
        })
        .collect();
    let witness = per_x.iter().find_map(|(_, w)| *w);
    let triples_checked = per_x.iter().map(|(c, _)| c).sum();
    Ok(StabilityReport { beta_checked: beta, holds: witness.is_none(), triples_checked, witness })
}

/// Least β for which the included triples satisfy the stability bound;
/// at most the diameter, and 0 when no triple is included.
pub fn min_beta(m: &FinMetric, scope: Scope) -> Result<u64> {
    let (_, worst) = scan(m, scope)?;
    Ok(worst.map_or(0, |(gap, _)| gap.max(0) as u64))
}

/// A point `v ∈ I(x,y)` with `d(z,v) ≤ β·2(x|y)_z`, found by walking a
/// discrete geodesic from `z` towards `y` and re-anchoring in `I(x,y')`
/// through the stability bound at each step. Ties are broken towards the
/// nearest, then least-index, point.
pub fn interval_point_near(m: &FinMetric, x: PointId, y: PointId, z: PointId, beta: u64) -> Result<PointId> {
    let d = m.int_matrix().ok_or(Error::NotIntegerMetric)?;
    for p in [x, y, z] {
        m.check_point(p)?;
    }
    let n = m.len();
    let dist = |a: PointId, b: PointId| d[a * n + b];
    let between = |a: PointId, v: PointId, b: PointId| dist(a, v) + dist(v, b) == dist(a, b);
    let beta_i = i64::try_from(beta).unwrap_or(i64::MAX);
    let bound = beta_i.saturating_mul(dist(z, x) + dist(z, y) - dist(x, y));
    let start = z;
    let mut z = z;
    while !between(x, z, y) {
        let mut prev = z;
        let mut next = z;
        while between(x, z, next) {
            prev = next;
            next = (0..n)
                .find(|&u| dist(prev, u) == 1 && dist(u, y) == dist(prev, y) - 1)
                .ok_or_else(|| Error::InvalidArgument("metric is not discretely geodesic".into()))?;
        }
        let anchor = (0..n)
            .filter(|&w| between(x, w, next) && dist(z, w) <= beta_i)
            .min_by_key(|&w| (dist(z, w), w))
            .ok_or(Error::StabilityHypothesisFails { beta, x, y: prev, y2: next })?;
        z = anchor;
    }
    if dist(start, z) > bound {
        return Err(Error::Inconsistent(format!(
            "interval point {z} lies at distance {} from {start}, above the bound {bound}",
            dist(start, z)
        )));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, graph_metric, Family, DEFAULT_MAX_VERTICES};

    fn space(f: &str) -> FinMetric {
        let g = generate(&f.parse::<Family>().unwrap(), DEFAULT_MAX_VERTICES).unwrap();
        graph_metric(&g.graph).unwrap().metric
    }

    #[test]
    fn path_and_cube_are_one_stable() {
        let p = space("path:5");
        assert!(check_stable_intervals(&p, 1, Scope::All).unwrap().holds);
        let r = check_stable_intervals(&p, 0, Scope::All).unwrap();
        assert!(!r.holds);
        assert_eq!(min_beta(&p, Scope::All).unwrap(), 1);
        let w3 = space("hypercube:3");
        assert_eq!(min_beta(&w3, Scope::All).unwrap(), 1);
        let diam = crate::rational::to_i64(&w3.diameter()).unwrap() as u64;
        assert!(check_stable_intervals(&w3, diam, Scope::All).unwrap().holds);
    }

    #[test]
    fn witness_recomputes() {
        let p = space("path:4");
        let r = check_stable_intervals(&p, 0, Scope::All).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(p.int_d(w.y, w.y2), Some(1));
        assert!(p.between(w.x, w.v, w.y));
        assert!(crate::metric::interval(&p, w.x, w.y2).iter().all(|&u| u != w.v));
    }

    #[test]
    fn interior_scope_restricts_triples() {
        let b = space("zn_ball:2,2,l1");
        let all = check_stable_intervals(&b, 2, Scope::All).unwrap();
        let inner = check_stable_intervals(&b, 2, Scope::Interior { center: 0, radius: 2 }).unwrap();
        assert!(inner.triples_checked < all.triples_checked);
        let none = check_stable_intervals(&b, 0, Scope::Interior { center: 0, radius: 0 }).unwrap();
        assert_eq!(none.triples_checked, 0);
        assert!(none.holds);
    }

    #[test]
    fn near_point_in_interval() {
        let w3 = space("hypercube:3");
        let (x, y, z) = (0b000, 0b110, 0b011);
        let v = interval_point_near(&w3, x, y, z, 1).unwrap();
        assert!(w3.between(x, v, y));
        assert!(w3.int_d(z, v).unwrap() <= w3.int_d(z, x).unwrap() + w3.int_d(z, y).unwrap() - w3.int_d(x, y).unwrap());
        assert_eq!(interval_point_near(&w3, x, y, 0b010, 1).unwrap(), 0b010);
    }
}
