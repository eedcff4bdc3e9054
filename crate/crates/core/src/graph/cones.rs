//! Cone types `C(x,v) = {y : v ∈ I(x,y)}` at a fixed apex and the local
//! functions `F_xv(u) = d(x,u) − d(x,v)` on `B(v,β)` that determine them.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{FinMetric, PointId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeTypeTable {
    pub apex: PointId,
    pub beta: u64,
    /// `B(v,β)`, ascending.
    pub ball: Vec<PointId>,
    /// Distinct cones, in order of first appearance over `x = 0, 1, …`.
    pub cones: Vec<Vec<PointId>>,
    /// Index into `cones` for each `x`.
    pub cone_of: Vec<usize>,
    /// Distinct restrictions of `F_xv` to `ball`, in order of first appearance.
    pub f_classes: Vec<Vec<i64>>,
    pub f_class_of: Vec<usize>,
    /// Equal `F`-classes always came with equal cones.
    pub classes_determine_cones: bool,
    /// `F_xv ≤ F_x'v` pointwise always came with `C(x,v) ⊂ C(x',v)`.
    pub monotone_consistent: bool,
}

impl ConeTypeTable {
    pub fn cone_count(&self) -> usize {
        self.cones.len()
    }

    pub fn f_class_count(&self) -> usize {
        self.f_classes.len()
    }
}

fn intern<T: Clone + Eq + std::hash::Hash>(items: Vec<T>) -> (Vec<T>, Vec<usize>) {
    let mut seen: HashMap<T, usize> = HashMap::new();
    let mut distinct = Vec::new();
    let of = items
        .into_iter()
        .map(|item| {
            *seen.entry(item.clone()).or_insert_with(|| {
                distinct.push(item);
                distinct.len() - 1
            })
        })
        .collect();
    (distinct, of)
}

fn is_subset(a: &[PointId], b: &[PointId]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Every cone with apex `v` and every `F`-class on `B(v,β)`, with flags that
/// record whether the comparison principle between them held on this space.
/// The flags can be false only when the space lacks β-stable intervals.
pub fn cone_types(m: &FinMetric, v: PointId, beta: u64) -> Result<ConeTypeTable> {
    let d = m.int_matrix().ok_or(Error::NotIntegerMetric)?;
    m.check_point(v)?;
    let n = m.len();
    let beta_i = i64::try_from(beta).unwrap_or(i64::MAX);
    let ball: Vec<PointId> = (0..n).filter(|&u| d[v * n + u] <= beta_i).collect();
    let raw_cones: Vec<Vec<PointId>> = (0..n).map(|x| crate::metric::cone(m, x, v)).collect();
    let raw_f: Vec<Vec<i64>> = (0..n).map(|x| ball.iter().map(|&u| d[x * n + u] - d[x * n + v]).collect()).collect();
    let (cones, cone_of) = intern(raw_cones);
    let (f_classes, f_class_of) = intern(raw_f);

    let mut class_cone = vec![None; f_classes.len()];
    let mut classes_determine_cones = true;
    for x in 0..n {
        let slot = &mut class_cone[f_class_of[x]];
        match slot {
            None => *slot = Some(cone_of[x]),
            Some(c) if *c != cone_of[x] => classes_determine_cones = false,
            _ => {}
        }
    }
    let mut monotone_consistent = true;
    for (i, fi) in f_classes.iter().enumerate() {
        for (j, fj) in f_classes.iter().enumerate() {
            let le = fi.iter().zip(fj).all(|(a, b)| a <= b);
            if i != j && le {
                let (ci, cj) = (class_cone[i].expect("class used"), class_cone[j].expect("class used"));
                if !is_subset(&cones[ci], &cones[cj]) {
                    monotone_consistent = false;
                }
            }
        }
    }
    Ok(ConeTypeTable {
        apex: v,
        beta,
        ball,
        cones,
        cone_of,
        f_classes,
        f_class_of,
        classes_determine_cones,
        monotone_consistent,
    })
}
