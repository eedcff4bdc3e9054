mod common;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tightspan::complex::{build_complex, enumerate_vertices, DEFAULT_BUDGET};
use tightspan::group::{
    act_on_complex, check_group, closure, fixed_point_function, induced_map, isometry_group, Isometry,
};
use tightspan::hull::{p_map, PMapLimits};
use tightspan::metric::{embed, is_extremal};
use tightspan::rational::ratio;
use tightspan::{sup_distance, FinMetric, MetricFunction};

/// Every subgroup generated by at most two elements with order at most `max`.
fn small_subgroups(m: &FinMetric, max: usize) -> Vec<Vec<Isometry>> {
    let g = isometry_group(m);
    let mut seen = BTreeSet::new();
    for a in &g {
        for b in &g {
            let h = closure(m, &[a.clone(), b.clone()]);
            if h.len() <= max {
                seen.insert(h);
            }
        }
    }
    seen.into_iter().collect()
}

#[test]
fn fixed_points_of_small_subgroups() {
    let spaces =
        ["cycle:4", "cycle:5", "cycle:6", "complete:4", "hypercube:2", "hypercube:3", "path:5", "zn_ball:2,1,l1"];
    let mut checked = 0;
    for spec in spaces {
        let m = common::generated(spec);
        for h in small_subgroups(&m, 12) {
            check_group(&m, &h).unwrap();
            let f = fixed_point_function(&m, &h).unwrap();
            assert!(is_extremal(&m, &f), "{spec}");
            for l in &h {
                assert_eq!(induced_map(l, &f), f, "{spec}");
            }
            checked += 1;
        }
    }
    assert!(checked > 40);
}

#[test]
fn induced_maps_are_isometries_of_the_hull() {
    for spec in ["cycle:6", "hypercube:3", "complete:4"] {
        let m = common::generated(spec);
        let vertices = enumerate_vertices(&m, DEFAULT_BUDGET).unwrap();
        for l in isometry_group(&m) {
            for f in &vertices {
                let image = induced_map(&l, f);
                assert!(is_extremal(&m, &image));
                assert!(vertices.contains(&image));
                for g in &vertices {
                    assert_eq!(sup_distance(&image, &induced_map(&l, g)).unwrap(), sup_distance(f, g).unwrap());
                }
            }
            for x in m.points() {
                assert_eq!(induced_map(&l, &embed(&m, x)), embed(&m, l.apply(x)));
            }
        }
    }
}

#[test]
fn retraction_commutes_with_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let limits = PMapLimits::default();
    for spec in ["cycle:5", "cycle:6", "hypercube:2", "complete:4"] {
        let m = common::generated(spec);
        let group = isometry_group(&m);
        for _ in 0..20 {
            let diam = m.diameter();
            let f = MetricFunction::new(m.points().map(|_| &diam + ratio(rng.gen_range(0..12), 4)).collect());
            let pf = p_map(&m, &f, &limits).unwrap();
            for l in &group {
                let plf = p_map(&m, &induced_map(l, &f), &limits).unwrap();
                assert_eq!(plf.result, induced_map(l, &pf.result), "{spec}");
            }
        }
    }
}

#[test]
fn orbits_partition_cells() {
    for spec in ["cycle:6", "hypercube:3", "complete:4", "path:4"] {
        let m = common::generated(spec);
        let c = build_complex(&m, DEFAULT_BUDGET).unwrap();
        let group = isometry_group(&m);
        let report = act_on_complex(&c, &group).unwrap();
        assert_eq!(report.group_order, group.len());
        for dim_orbits in &report.cell_orbits {
            let total: usize = dim_orbits.orbits.iter().map(|o| o.size).sum();
            assert_eq!(total, c.cells_of_dim(dim_orbits.dim).count());
            for o in &dim_orbits.orbits {
                assert_eq!(o.size * o.stabilizer_order, group.len());
            }
        }
        assert!(report.simplicial_rigidity, "{spec}");
    }
}
