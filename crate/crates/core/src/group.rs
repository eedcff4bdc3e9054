//! Isometries of a finite metric space and their action on the hull.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::complex::{barycentric_subdivision, HullComplex};
use crate::error::{Error, Result};
use crate::function::MetricFunction;
use crate::metric::{is_extremal, FinMetric, PointId};
use crate::rational::{self, Rational};

/// A distance-preserving permutation, stored as the image list `x ↦ perm[x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Isometry(Vec<PointId>);

impl Isometry {
    pub fn new(m: &FinMetric, perm: Vec<PointId>) -> Result<Self> {
        let n = m.len();
        if perm.len() != n {
            return Err(Error::NotAnIsometry(format!("{} images for {n} points", perm.len())));
        }
        let mut seen = vec![false; n];
        for &y in &perm {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(Error::NotAnIsometry(format!("{perm:?} is not a permutation")));
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if m.d(perm[x], perm[y]) != m.d(x, y) {
                    return Err(Error::NotAnIsometry(format!("d({x},{y}) is not preserved")));
                }
            }
        }
        Ok(Isometry(perm))
    }

    pub fn identity(n: usize) -> Self {
        Isometry((0..n).collect())
    }

    pub fn apply(&self, x: PointId) -> PointId {
        self.0[x]
    }

    pub fn perm(&self) -> &[PointId] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Isometry {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Isometry(inv)
    }
}

/// Every isometry of `m`, in lexicographic order of image lists.
pub fn isometry_group(m: &FinMetric) -> Vec<Isometry> {
    let n = m.len();
    let profiles: Vec<Vec<Rational>> = m
        .points()
        .map(|x| {
            let mut row: Vec<Rational> = m.points().map(|y| m.d(x, y).clone()).collect();
            row.sort();
            row
        })
        .collect();
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(m, &profiles, &mut perm, &mut used, &mut out);
    out
}

fn extend(
    m: &FinMetric,
    profiles: &[Vec<Rational>],
    perm: &mut Vec<PointId>,
    used: &mut [bool],
    out: &mut Vec<Isometry>,
) {
    let x = perm.len();
    if x == m.len() {
        out.push(Isometry(perm.clone()));
        return;
    }
    for y in 0..m.len() {
        if used[y] || profiles[y] != profiles[x] {
            continue;
        }
        if (0..x).all(|x2| m.d(perm[x2], y) == m.d(x2, x)) {
            used[y] = true;
            perm.push(y);
            extend(m, profiles, perm, used, out);
            perm.pop();
            used[y] = false;
        }
    }
}

/// `f ∘ L⁻¹`, i.e. the value of `f` at `y` moves to `L(y)`.
pub fn induced_map(l: &Isometry, f: &MetricFunction) -> MetricFunction {
    let mut values = vec![rational::int(0); f.len()];
    for (y, v) in f.iter().enumerate() {
        values[l.apply(y)] = v.clone();
    }
    MetricFunction::new(values)
}

/// The subgroup generated by `generators`, sorted.
pub fn closure(m: &FinMetric, generators: &[Isometry]) -> Vec<Isometry> {
    let mut seen: HashSet<Isometry> = HashSet::from([Isometry::identity(m.len())]);
    let mut queue: Vec<Isometry> = seen.iter().cloned().collect();
    while let Some(g) = queue.pop() {
        for s in generators {
            let h = s.compose(&g);
            if seen.insert(h.clone()) {
                queue.push(h);
            }
        }
    }
    let mut out: Vec<Isometry> = seen.into_iter().collect();
    out.sort();
    out
}

/// Checks that every element is an isometry of `m` and that the set contains
/// the identity and is closed under composition; finite closed sets are then
/// closed under inverses as well.
pub fn check_group(m: &FinMetric, group: &[Isometry]) -> Result<()> {
    for g in group {
        Isometry::new(m, g.0.clone())?;
    }
    let set: HashSet<&Isometry> = group.iter().collect();
    if set.len() != group.len() {
        return Err(Error::NotAGroup("repeated element".into()));
    }
    if !group.iter().any(Isometry::is_identity) {
        return Err(Error::NotAGroup("identity missing".into()));
    }
    for a in group {
        for b in group {
            let c = a.compose(b);
            if !set.contains(&c) {
                return Err(Error::NotAGroup(format!("{:?} ∘ {:?} = {:?} is missing", a.0, b.0, c.0)));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: usize,
    pub size: usize,
    pub stabilizer_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionOrbits {
    pub dim: usize,
    pub orbits: Vec<Orbit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub group_order: usize,
    /// Orbits of hull cells, representatives being the least cell id.
    pub cell_orbits: Vec<DimensionOrbits>,
    /// Orbits of simplices of the barycentric subdivision, by dimension.
    pub simplex_orbits: Vec<DimensionOrbits>,
    /// Every group element that maps a subdivision simplex onto itself fixes
    /// each of its vertices.
    pub simplicial_rigidity: bool,
}

fn orbits(items: &[usize], order: usize, image: impl Fn(usize, usize) -> usize) -> Result<Vec<Orbit>> {
    let position: HashMap<usize, usize> = items.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut done = vec![false; items.len()];
    let mut out = Vec::new();
    for (i, &c) in items.iter().enumerate() {
        if done[i] {
            continue;
        }
        let mut members = HashSet::new();
        let mut stabilizer_order = 0;
        for g in 0..order {
            let d = image(g, c);
            if d == c {
                stabilizer_order += 1;
            }
            members.insert(d);
            done[position[&d]] = true;
        }
        if members.len() * stabilizer_order != order {
            return Err(Error::Inconsistent(format!("orbit of {c} violates orbit-stabilizer")));
        }
        out.push(Orbit { representative: c, size: members.len(), stabilizer_order });
    }
    Ok(out)
}

/// Lets `group` act on the cells of `complex` and on its barycentric
/// subdivision through the induced maps `f ↦ f ∘ L⁻¹`.
pub fn act_on_complex(complex: &HullComplex, group: &[Isometry]) -> Result<ActionReport> {
    let m = &complex.metric;
    check_group(m, group)?;
    let order = group.len();
    let mut cell_image = vec![vec![0; complex.cells.len()]; order];
    for (gi, g) in group.iter().enumerate() {
        let vertex_image: Vec<usize> = complex
            .vertices
            .iter()
            .map(|v| {
                complex
                    .vertex_index(&induced_map(g, v))
                    .ok_or_else(|| Error::NotCellular(format!("{:?} maps a vertex outside the hull", g.0)))
            })
            .collect::<Result<_>>()?;
        for (c, cell) in complex.cells.iter().enumerate() {
            let target = complex
                .cell_of(&cell.admissible_set.map_points(g.perm()))
                .ok_or_else(|| Error::NotCellular(format!("{:?} maps cell {c} to a non-cell", g.0)))?;
            let mut ids: Vec<usize> = cell.vertex_ids.iter().map(|&v| vertex_image[v]).collect();
            ids.sort_unstable();
            if ids != complex.cells[target].vertex_ids {
                return Err(Error::NotCellular(format!("{:?} moves the vertices of cell {c} off cell {target}", g.0)));
            }
            cell_image[gi][c] = target;
        }
    }

    let top = complex.dimension();
    let mut cell_orbits = Vec::new();
    for dim in 0..=top {
        let ids: Vec<usize> = complex.cells_of_dim(dim).map(|(i, _)| i).collect();
        cell_orbits.push(DimensionOrbits { dim, orbits: orbits(&ids, order, |g, c| cell_image[g][c])? });
    }

    let sub = barycentric_subdivision(complex);
    let index: HashMap<&[usize], usize> = sub.simplices.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mut simplex_image = vec![vec![0; sub.simplices.len()]; order];
    let mut simplicial_rigidity = true;
    for (gi, g) in group.iter().enumerate() {
        for (s, chain) in sub.simplices.iter().enumerate() {
            let mapped: Vec<usize> = chain.iter().map(|&c| cell_image[gi][c]).collect();
            let t = *index
                .get(mapped.as_slice())
                .ok_or_else(|| Error::NotCellular(format!("{:?} breaks a chain of faces", g.0)))?;
            simplex_image[gi][s] = t;
            if t == s && chain.iter().any(|&c| induced_map(g, &sub.barycenters[c]) != sub.barycenters[c]) {
                simplicial_rigidity = false;
            }
        }
    }
    let mut simplex_orbits = Vec::new();
    for dim in 0..=top {
        let ids: Vec<usize> = (0..sub.simplices.len()).filter(|&s| sub.simplices[s].len() == dim + 1).collect();
        simplex_orbits.push(DimensionOrbits { dim, orbits: orbits(&ids, order, |g, s| simplex_image[g][s])? });
    }
    Ok(ActionReport { group_order: order, cell_orbits, simplex_orbits, simplicial_rigidity })
}

/// An extremal function fixed by every element of `subgroup`: the minimal
/// element of `Δ` over the orbit space, where the distance between orbits is
/// the largest distance between their members, lifted back to `X`. The
/// minimal element is found by one greedy pass over the orbits in order of
/// their least point.
pub fn fixed_point_function(m: &FinMetric, subgroup: &[Isometry]) -> Result<MetricFunction> {
    check_group(m, subgroup)?;
    let n = m.len();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<PointId>> = Vec::new();
    for x in 0..n {
        if orbit_of[x] != usize::MAX {
            continue;
        }
        let mut members: Vec<PointId> = subgroup.iter().map(|g| g.apply(x)).collect();
        members.sort_unstable();
        members.dedup();
        for &y in &members {
            orbit_of[y] = orbits.len();
        }
        orbits.push(members);
    }
    let k = orbits.len();
    let far: Vec<Vec<Rational>> = (0..k)
        .map(|o| {
            (0..k)
                .map(|p| {
                    rational::max_of(orbits[o].iter().flat_map(|&x| orbits[p].iter().map(move |&y| m.d(x, y))))
                        .expect("orbits are non-empty")
                })
                .collect()
        })
        .collect();
    let mut value: Vec<Rational> =
        (0..k).map(|o| rational::max_of(far[o].iter()).expect("at least one orbit")).collect();
    for o in 0..k {
        let mut best = &far[o][o] / rational::int(2);
        for p in (0..k).filter(|&p| p != o) {
            let t = &far[o][p] - &value[p];
            if t > best {
                best = t;
            }
        }
        value[o] = best;
    }
    let f = MetricFunction::new((0..n).map(|x| value[orbit_of[x]].clone()).collect());
    if !is_extremal(m, &f) {
        return Err(Error::Inconsistent("lifted orbit function is not extremal".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, DEFAULT_BUDGET};
    use crate::metric::embed;
    use crate::rational::{half, int};

    fn metric(rows: &[&[i64]]) -> FinMetric {
        FinMetric::from_int_matrix(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn c4() -> FinMetric {
        metric(&[&[0, 1, 2, 1], &[1, 0, 1, 2], &[2, 1, 0, 1], &[1, 2, 1, 0]])
    }

    fn k3() -> FinMetric {
        metric(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])
    }

    #[test]
    fn group_orders() {
        assert_eq!(isometry_group(&k3()).len(), 6);
        let p3 = metric(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        let g = isometry_group(&p3);
        assert_eq!(g.iter().map(|g| g.perm().to_vec()).collect::<Vec<_>>(), vec![vec![0, 1, 2], vec![2, 1, 0]]);
        let d4 = isometry_group(&c4());
        assert_eq!(d4.len(), 8);
        assert!(check_group(&c4(), &d4).is_ok());
    }

    #[test]
    fn induced_map_moves_distance_functions() {
        let m = c4();
        let rot = Isometry::new(&m, vec![1, 2, 3, 0]).unwrap();
        for v in 0..4 {
            assert_eq!(induced_map(&rot, &embed(&m, v)), embed(&m, rot.apply(v)));
        }
        let one = MetricFunction::constant(4, int(1));
        assert_eq!(induced_map(&rot, &one), one);
        assert!(Isometry::new(&m, vec![1, 0, 2, 3]).is_err());
    }

    #[test]
    fn group_checks() {
        let m = c4();
        let rot = Isometry::new(&m, vec![1, 2, 3, 0]).unwrap();
        assert_eq!(closure(&m, std::slice::from_ref(&rot)).len(), 4);
        let err = check_group(&m, &[Isometry::identity(4), rot]).unwrap_err();
        assert!(matches!(err, Error::NotAGroup(_)));
    }

    #[test]
    fn square_and_tripod_actions() {
        let m = c4();
        let sq = build_complex(&m, DEFAULT_BUDGET).unwrap();
        let r = act_on_complex(&sq, &isometry_group(&m)).unwrap();
        assert_eq!(r.cell_orbits.iter().map(|d| d.orbits.len()).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert!(r.simplicial_rigidity);
        let trivial = act_on_complex(&sq, &[Isometry::identity(4)]).unwrap();
        assert_eq!(trivial.cell_orbits.iter().map(|d| d.orbits.len()).sum::<usize>(), sq.cells.len());

        let t = build_complex(&k3(), DEFAULT_BUDGET).unwrap();
        let r = act_on_complex(&t, &isometry_group(&k3())).unwrap();
        let sizes: Vec<Vec<usize>> = r.cell_orbits.iter().map(|d| d.orbits.iter().map(|o| o.size).collect()).collect();
        assert_eq!(sizes, vec![vec![3, 1], vec![3]]);
    }

    #[test]
    fn fixed_points() {
        let m = c4();
        let rot = closure(&m, &[Isometry::new(&m, vec![1, 2, 3, 0]).unwrap()]);
        assert_eq!(fixed_point_function(&m, &rot).unwrap(), MetricFunction::constant(4, int(1)));
        let k = k3();
        assert_eq!(fixed_point_function(&k, &isometry_group(&k)).unwrap(), MetricFunction::constant(3, half()));
        let trivial = fixed_point_function(&m, &[Isometry::identity(4)]).unwrap();
        let ecc = MetricFunction::new(m.points().map(|x| m.eccentricity(x).clone()).collect());
        assert_eq!(trivial, crate::hull::extremalize_greedy(&m, &ecc, &[0, 1, 2, 3]).unwrap());
    }
}
