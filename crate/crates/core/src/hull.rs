//! Operators that produce extremal functions: Dress's retraction, a greedy
//! extremalizer, the geodesic bicombing, grid rounding and extensions.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::enumerate_vertices;
use crate::error::{Error, Result};
use crate::function::{sup_distance, MetricFunction};
use crate::metric::{
    cone, embed, is_extremal, lipschitz_violation, require_delta, require_extremal, sup_term, FinMetric, PointId,
};
use crate::rational::{self, Rational};

/// Stopping rule for the `q`-iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMapLimits {
    pub max_iter: usize,
    /// Stop early once `‖q(g) − g‖∞` drops to this value or below.
    pub residual_cap: Rational,
}

impl Default for PMapLimits {
    fn default() -> Self {
        PMapLimits { max_iter: 64, residual_cap: rational::dyadic(40) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PMapReport {
    pub result: MetricFunction,
    /// Number of `q` applications performed.
    pub iterations: usize,
    /// True when the iteration reached an exact fixed point of `q`; false
    /// when the result came from the greedy fallback.
    pub converged_exactly: bool,
    #[serde(with = "rational::as_string")]
    pub residual: Rational,
}

fn star_unchecked(m: &FinMetric, f: &MetricFunction) -> MetricFunction {
    MetricFunction::new(m.points().map(|x| sup_term(m, f, x)).collect())
}

/// `f*(x) = max_z (d(x,z) − f(z))`.
pub fn star(m: &FinMetric, f: &MetricFunction) -> Result<MetricFunction> {
    require_delta(m, f)?;
    Ok(star_unchecked(m, f))
}

fn average(f: &MetricFunction, g: &MetricFunction) -> MetricFunction {
    let two = rational::int(2);
    MetricFunction::new(f.iter().zip(g.iter()).map(|(a, b)| (a + b) / &two).collect())
}

/// `q(f) = ½(f + f*)`.
pub fn q_step(m: &FinMetric, f: &MetricFunction) -> Result<MetricFunction> {
    let s = star(m, f)?;
    Ok(average(f, &s))
}

/// Iterates `q` towards `p(f)`. If no exact fixed point is reached within the
/// limits, the last iterate is finished with [`extremalize_greedy`].
pub fn p_map(m: &FinMetric, f: &MetricFunction, limits: &PMapLimits) -> Result<PMapReport> {
    require_delta(m, f)?;
    if limits.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    let mut g = f.clone();
    let mut iterations = 0;
    loop {
        let s = star_unchecked(m, &g);
        if s == g {
            return Ok(PMapReport { result: g, iterations, converged_exactly: true, residual: Rational::zero() });
        }
        let next = average(&g, &s);
        let residual = sup_distance(&next, &g)?;
        iterations += 1;
        g = next;
        if residual <= limits.residual_cap || iterations >= limits.max_iter {
            if star_unchecked(m, &g) == g {
                return Ok(PMapReport { result: g, iterations, converged_exactly: true, residual: Rational::zero() });
            }
            let order: Vec<PointId> = m.points().collect();
            let result = greedy_pass(m, &g, &order);
            return Ok(PMapReport { result, iterations, converged_exactly: false, residual });
        }
    }
}

fn greedy_pass(m: &FinMetric, f: &MetricFunction, order: &[PointId]) -> MetricFunction {
    let mut g = f.clone();
    for &x in order {
        let v = m
            .points()
            .filter(|&y| y != x)
            .map(|y| m.d(x, y) - &g[y])
            .max()
            .unwrap_or_else(Rational::zero)
            .max(Rational::zero());
        g.set(x, v);
    }
    g
}

/// One pass lowering each coordinate, in `order`, to `max_y (d(x,y) − f(y))`.
/// The output is extremal and below `f`.
pub fn extremalize_greedy(m: &FinMetric, f: &MetricFunction, order: &[PointId]) -> Result<MetricFunction> {
    require_delta(m, f)?;
    let mut seen = vec![false; m.len()];
    if order.len() != m.len() || !order.iter().all(|&x| x < m.len() && !std::mem::replace(&mut seen[x], true)) {
        return Err(Error::InvalidArgument("order is not a permutation of the points".into()));
    }
    Ok(greedy_pass(m, f, order))
}

/// [`extremalize_greedy`] in ascending point order.
pub fn extremalize(m: &FinMetric, f: &MetricFunction) -> Result<MetricFunction> {
    let order: Vec<PointId> = m.points().collect();
    extremalize_greedy(m, f, &order)
}

/// `γ_xy(t) = p((1 − t)·d_x + t·d_y)`.
pub fn bicombing(m: &FinMetric, x: PointId, y: PointId, t: &Rational, limits: &PMapLimits) -> Result<PMapReport> {
    m.check_point(x)?;
    m.check_point(y)?;
    if t < &Rational::zero() || t > &Rational::one() {
        return Err(Error::InvalidArgument(format!("t = {t} is outside [0, 1]")));
    }
    let f = embed(m, x).lerp(&embed(m, y), t)?;
    p_map(m, &f, limits)
}

/// Rounds an extremal function to a `(1/m)ℤ`-valued extremal function within
/// distance `1/(2m)`.
pub fn round_extremal(m: &FinMetric, f: &MetricFunction, denom: u64) -> Result<MetricFunction> {
    if !m.is_integer_valued() {
        return Err(Error::NotIntegerMetric);
    }
    if denom == 0 {
        return Err(Error::InvalidArgument("denominator must be positive".into()));
    }
    require_extremal(m, f)?;
    let mm = Rational::from_integer(denom.into());
    let eps = Rational::new(One::one(), (2 * denom).into());
    let step = Rational::new(One::one(), denom.into());
    let mut g = MetricFunction::new(
        f.iter().map(|v| Rational::from_integer(((v + &eps) * &mm).floor().to_integer()) / &mm).collect(),
    );
    while let Some(x) = m.points().find(|&x| !covered(m, &g, x)) {
        let lowered = &g[x] - &step;
        g.set(x, lowered);
    }
    debug_assert!(is_extremal(m, &g));
    Ok(g)
}

fn covered(m: &FinMetric, g: &MetricFunction, x: PointId) -> bool {
    m.points().any(|y| &(&g[x] + &g[y]) == m.d(x, y))
}

/// Extends a 1-Lipschitz map `A → Δ1(X)` to all of `B` by
/// `f̄_b(x) = min_a (f_a(x) + d(a,b))`. Returns one function per point of `B`.
pub fn lipschitz_extend(
    m: &FinMetric,
    b: &FinMetric,
    domain: &[(PointId, MetricFunction)],
) -> Result<Vec<MetricFunction>> {
    if domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    for (a, f) in domain {
        b.check_point(*a)?;
        require_delta(m, f)?;
        if let Some((x, y)) = lipschitz_violation(m, f) {
            return Err(Error::NotLipschitz { x, y });
        }
    }
    for (i, (a, f)) in domain.iter().enumerate() {
        for (a2, g) in &domain[i + 1..] {
            if &sup_distance(f, g)? > b.d(*a, *a2) {
                return Err(Error::NotLipschitz { x: *a, y: *a2 });
            }
        }
    }
    Ok(b.points()
        .map(|bp| {
            MetricFunction::new(
                m.points()
                    .map(|x| domain.iter().map(|(a, f)| &f[x] + b.d(*a, bp)).min().expect("non-empty domain"))
                    .collect(),
            )
        })
        .collect())
}

fn check_inclusion(m: &FinMetric, big: &FinMetric, inclusion: &[PointId]) -> Result<()> {
    if inclusion.len() != m.len() {
        return Err(Error::NotSubspace(format!("inclusion has {} entries for {} points", inclusion.len(), m.len())));
    }
    let mut seen = vec![false; big.len()];
    for &i in inclusion {
        if i >= big.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::NotSubspace(format!("inclusion entry {i} is out of range or repeated")));
        }
    }
    for x in m.points() {
        for y in m.points() {
            if m.d(x, y) != big.d(inclusion[x], inclusion[y]) {
                return Err(Error::NotSubspace(format!("distance between points {x} and {y} differs")));
            }
        }
    }
    Ok(())
}

/// Extends `f ∈ E(X)` to `E(X′)` as `p` of its smallest 1-Lipschitz extension;
/// `inclusion[x]` is the index of `x` in `X′`.
pub fn extend_extremal(
    m: &FinMetric,
    big: &FinMetric,
    inclusion: &[PointId],
    f: &MetricFunction,
    limits: &PMapLimits,
) -> Result<PMapReport> {
    check_inclusion(m, big, inclusion)?;
    require_extremal(m, f)?;
    let ext = MetricFunction::new(
        big.points()
            .map(|p| m.points().map(|x| &f[x] + big.d(inclusion[x], p)).min().expect("non-empty space"))
            .collect(),
    );
    p_map(big, &ext, limits)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    /// Every cone `C(x,y)` of `Y` meets `X`.
    pub hypothesis_holds: bool,
    /// A pair `(x,y)` whose cone misses `X`.
    pub witness: Option<(PointId, PointId)>,
    /// Comparison of the computed hulls; present for integer metrics when the
    /// hypothesis holds.
    pub vertex_check: Option<RestrictionVertexCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionVertexCheck {
    /// Every vertex of `E(Y)` restricts to an extremal function on `X`.
    pub restrictions_extremal: bool,
    /// Sup distances between vertices of `E(Y)` survive restriction.
    pub isometric: bool,
    /// Every vertex of `E(X)` is the restriction of a point of `E(Y)`.
    pub onto: bool,
    /// Restriction maps the vertex set of `E(Y)` bijectively onto that of `E(X)`.
    pub vertex_bijection: bool,
    /// Vertices of `E(Y)` whose restriction is not a vertex of `E(X)`.
    pub unmatched: Vec<MetricFunction>,
}

/// Checks the cone condition under which restriction `E(Y) → E(X)` is an
/// isometry, and when it holds, compares the two hulls' vertices.
pub fn restrict_hull_check(big: &FinMetric, subset: &[PointId], budget: u128) -> Result<RestrictionReport> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &x in subset {
        big.check_point(x)?;
    }
    let mut in_subset = vec![false; big.len()];
    for &x in subset {
        in_subset[x] = true;
    }
    let witness = big
        .points()
        .flat_map(|x| big.points().map(move |y| (x, y)))
        .find(|&(x, y)| !cone(big, x, y).iter().any(|&z| in_subset[z]));
    if witness.is_some() || !big.is_integer_valued() {
        return Ok(RestrictionReport { hypothesis_holds: witness.is_none(), witness, vertex_check: None });
    }
    let small = big.submetric(subset);
    let restrict = |f: &MetricFunction| MetricFunction::new(subset.iter().map(|&x| f[x].clone()).collect());
    let big_vertices = enumerate_vertices(big, budget)?;
    let small_vertices = enumerate_vertices(&small, budget)?;
    let restricted: Vec<MetricFunction> = big_vertices.iter().map(restrict).collect();
    let restrictions_extremal = restricted.iter().all(|f| is_extremal(&small, f));
    let mut isometric = true;
    for i in 0..big_vertices.len() {
        for j in i + 1..big_vertices.len() {
            if sup_distance(&big_vertices[i], &big_vertices[j])? != sup_distance(&restricted[i], &restricted[j])? {
                isometric = false;
            }
        }
    }
    let limits = PMapLimits::default();
    let mut onto = true;
    for u in &small_vertices {
        let lifted = extend_extremal(&small, big, subset, u, &limits)?;
        if &restrict(&lifted.result) != u {
            onto = false;
        }
    }
    let unmatched: Vec<MetricFunction> = big_vertices
        .iter()
        .zip(&restricted)
        .filter(|(_, r)| !small_vertices.contains(r))
        .map(|(v, _)| v.clone())
        .collect();
    let mut images = restricted.clone();
    images.sort();
    images.dedup();
    let vertex_bijection =
        unmatched.is_empty() && images.len() == restricted.len() && images.len() == small_vertices.len();
    Ok(RestrictionReport {
        hypothesis_holds: true,
        witness: None,
        vertex_check: Some(RestrictionVertexCheck {
            restrictions_extremal,
            isometric,
            onto,
            vertex_bijection,
            unmatched,
        }),
    })
}
