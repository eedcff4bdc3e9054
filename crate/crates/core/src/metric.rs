//! Finite metric spaces and the elementary predicates built on them.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::MetricFunction;
use crate::rational::{self, Rational};

/// Dense index of a point, `0..n`.
pub type PointId = usize;

/// One failed metric axiom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    NonSquare { row: usize, len: usize, expected: usize },
    NegativeEntry { x: PointId, y: PointId },
    NonZeroDiagonal { x: PointId },
    ZeroDistance { x: PointId, y: PointId },
    AsymmetricPair { x: PointId, y: PointId },
    TriangleViolation { x: PointId, z: PointId, via: PointId },
    LabelCount { found: usize, expected: usize },
    DuplicateLabel { label: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "matrix is empty"),
            Violation::NonSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            Violation::NegativeEntry { x, y } => write!(f, "d({x},{y}) is negative"),
            Violation::NonZeroDiagonal { x } => write!(f, "d({x},{x}) is not zero"),
            Violation::ZeroDistance { x, y } => write!(f, "d({x},{y}) = 0 for distinct points"),
            Violation::AsymmetricPair { x, y } => write!(f, "d({x},{y}) != d({y},{x})"),
            Violation::TriangleViolation { x, z, via } => {
                write!(f, "d({x},{z}) > d({x},{via}) + d({via},{z})")
            }
            Violation::LabelCount { found, expected } => {
                write!(f, "{found} labels for {expected} points")
            }
            Violation::DuplicateLabel { label } => write!(f, "duplicate label {label:?}"),
        }
    }
}

/// A finite metric space with exact rational distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinMetric {
    n: usize,
    dist: Vec<Rational>,
    ints: Option<Vec<i64>>,
    labels: Option<Vec<String>>,
}

/// Checks every metric axiom and returns the space, or all violations found.
pub fn validate_metric(matrix: &[Vec<Rational>]) -> Result<FinMetric> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::InvalidMetric(vec![Violation::Empty]));
    }
    let shape: Vec<Violation> = matrix
        .iter()
        .enumerate()
        .filter(|(_, row)| row.len() != n)
        .map(|(row, r)| Violation::NonSquare { row, len: r.len(), expected: n })
        .collect();
    if !shape.is_empty() {
        return Err(Error::InvalidMetric(shape));
    }
    let mut violations = Vec::new();
    for x in 0..n {
        if !matrix[x][x].is_zero() {
            violations.push(Violation::NonZeroDiagonal { x });
        }
        for y in 0..n {
            if matrix[x][y].is_negative() {
                violations.push(Violation::NegativeEntry { x, y });
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if matrix[x][y] != matrix[y][x] {
                violations.push(Violation::AsymmetricPair { x, y });
            } else if matrix[x][y].is_zero() {
                violations.push(Violation::ZeroDistance { x, y });
            }
        }
    }
    for x in 0..n {
        for z in x + 1..n {
            for via in 0..n {
                if via != x && via != z && matrix[x][z] > &matrix[x][via] + &matrix[via][z] {
                    violations.push(Violation::TriangleViolation { x, z, via });
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidMetric(violations));
    }
    let dist: Vec<Rational> = matrix.iter().flatten().cloned().collect();
    let ints = dist.iter().map(rational::to_i64).collect();
    Ok(FinMetric { n, dist, ints, labels: None })
}

impl FinMetric {
    pub fn from_matrix(matrix: &[Vec<Rational>]) -> Result<Self> {
        validate_metric(matrix)
    }

    pub fn from_int_matrix(matrix: &[Vec<i64>]) -> Result<Self> {
        let m: Vec<Vec<Rational>> = matrix.iter().map(|row| row.iter().map(|&v| rational::int(v)).collect()).collect();
        validate_metric(&m)
    }

    /// Builds a metric from a flat row-major integer matrix that is already
    /// known to be valid (e.g. BFS distances of a connected graph).
    pub(crate) fn from_trusted_ints(n: usize, flat: Vec<i64>) -> Self {
        debug_assert_eq!(flat.len(), n * n);
        let dist = flat.iter().map(|&v| rational::int(v)).collect();
        FinMetric { n, dist, ints: Some(flat), labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidMetric(vec![Violation::LabelCount { found: labels.len(), expected: self.n }]));
        }
        let mut seen = HashSet::new();
        let dups: Vec<Violation> = labels
            .iter()
            .filter(|l| !seen.insert(l.as_str()))
            .map(|l| Violation::DuplicateLabel { label: l.clone() })
            .collect();
        if !dups.is_empty() {
            return Err(Error::InvalidMetric(dups));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.n
    }

    pub fn d(&self, x: PointId, y: PointId) -> &Rational {
        &self.dist[x * self.n + y]
    }

    pub fn is_integer_valued(&self) -> bool {
        self.ints.is_some()
    }

    /// Integer distance matrix, row-major, when every entry is an integer.
    pub fn int_matrix(&self) -> Option<&[i64]> {
        self.ints.as_deref()
    }

    pub fn int_d(&self, x: PointId, y: PointId) -> Option<i64> {
        self.ints.as_ref().map(|m| m[x * self.n + y])
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: PointId) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn find_label(&self, label: &str) -> Option<PointId> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn check_point(&self, x: PointId) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::PointOutOfRange(x))
        }
    }

    pub fn check_function(&self, f: &MetricFunction) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: f.len() });
        }
        Ok(())
    }

    pub fn eccentricity(&self, x: PointId) -> &Rational {
        self.points().map(|y| self.d(x, y)).max().expect("non-empty space")
    }

    pub fn diameter(&self) -> Rational {
        self.dist.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        self.dist.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// The subspace on `ids`, in the given order.
    pub fn submetric(&self, ids: &[PointId]) -> FinMetric {
        let k = ids.len();
        let mut dist = Vec::with_capacity(k * k);
        for &x in ids {
            for &y in ids {
                dist.push(self.d(x, y).clone());
            }
        }
        let ints = dist.iter().map(rational::to_i64).collect();
        let labels = self.labels.as_ref().map(|l| ids.iter().map(|&x| l[x].clone()).collect());
        FinMetric { n: k, dist, ints, labels }
    }

    /// Whether `d(x,v) + d(v,y) = d(x,y)`.
    pub fn between(&self, x: PointId, v: PointId, y: PointId) -> bool {
        match &self.ints {
            Some(m) => {
                let n = self.n;
                m[x * n + v] + m[v * n + y] == m[x * n + y]
            }
            None => self.d(x, v) + self.d(v, y) == *self.d(x, y),
        }
    }
}

/// `I(x,y)`: every point on some geodesic between `x` and `y`, ascending.
pub fn interval(m: &FinMetric, x: PointId, y: PointId) -> Vec<PointId> {
    m.points().filter(|&v| m.between(x, v, y)).collect()
}

/// `C(x,v)`: every `y` with `v ∈ I(x,y)`, ascending.
pub fn cone(m: &FinMetric, x: PointId, v: PointId) -> Vec<PointId> {
    m.points().filter(|&y| m.between(x, v, y)).collect()
}

/// `(x|y)_z = ½(d(z,x) + d(z,y) − d(x,y))`.
pub fn gromov_product(m: &FinMetric, x: PointId, y: PointId, z: PointId) -> Rational {
    (m.d(z, x) + m.d(z, y) - m.d(x, y)) / rational::int(2)
}

/// The distance function `d_z`.
pub fn embed(m: &FinMetric, z: PointId) -> MetricFunction {
    MetricFunction::new(m.points().map(|y| m.d(z, y).clone()).collect())
}

/// `I(x,y) ∩ I(y,z) ∩ I(z,x)`.
pub fn median_points(m: &FinMetric, x: PointId, y: PointId, z: PointId) -> Vec<PointId> {
    m.points().filter(|&v| m.between(x, v, y) && m.between(y, v, z) && m.between(z, v, x)).collect()
}

/// Why a function fails one of the membership tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionWitness {
    /// `f(x) + f(y) < d(x,y)`.
    DeltaViolation { x: PointId, y: PointId },
    /// `f(x) > max_y (d(x,y) − f(y))`.
    Slack { x: PointId },
    /// `|f(x) − f(y)| > d(x,y)`.
    LipschitzViolation { x: PointId, y: PointId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub in_delta: bool,
    pub lip1: bool,
    pub extremal: bool,
    pub witness: Option<FunctionWitness>,
}

/// `max_y (d(x,y) − f(y))`, with `y = x` included.
pub(crate) fn sup_term(m: &FinMetric, f: &MetricFunction, x: PointId) -> Rational {
    m.points().map(|y| m.d(x, y) - &f[y]).max().expect("non-empty space")
}

pub(crate) fn delta_violation(m: &FinMetric, f: &MetricFunction) -> Option<(PointId, PointId)> {
    for x in m.points() {
        for y in x..m.len() {
            if &(&f[x] + &f[y]) < m.d(x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

pub(crate) fn lipschitz_violation(m: &FinMetric, f: &MetricFunction) -> Option<(PointId, PointId)> {
    for x in m.points() {
        for y in x + 1..m.len() {
            if &(&f[x] - &f[y]).abs() > m.d(x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

pub(crate) fn require_delta(m: &FinMetric, f: &MetricFunction) -> Result<()> {
    m.check_function(f)?;
    match delta_violation(m, f) {
        Some((x, y)) => Err(Error::NotInDelta { x, y }),
        None => Ok(()),
    }
}

pub(crate) fn require_extremal(m: &FinMetric, f: &MetricFunction) -> Result<()> {
    require_delta(m, f)?;
    match m.points().find(|&x| sup_term(m, f, x) != f[x]) {
        Some(x) => Err(Error::NotExtremal { x }),
        None => Ok(()),
    }
}

/// Tests membership of `f` in `Δ(X)`, `Lip1` and `E(X)`.
pub fn classify_function(m: &FinMetric, f: &MetricFunction) -> Result<Classification> {
    m.check_function(f)?;
    let delta = delta_violation(m, f);
    let lip = lipschitz_violation(m, f);
    let slack = if delta.is_none() { m.points().find(|&x| sup_term(m, f, x) != f[x]) } else { None };
    let witness = match (delta, slack, lip) {
        (Some((x, y)), _, _) => Some(FunctionWitness::DeltaViolation { x, y }),
        (None, Some(x), _) => Some(FunctionWitness::Slack { x }),
        (None, None, Some((x, y))) => Some(FunctionWitness::LipschitzViolation { x, y }),
        (None, None, None) => None,
    };
    Ok(Classification {
        in_delta: delta.is_none(),
        lip1: lip.is_none(),
        extremal: delta.is_none() && slack.is_none(),
        witness,
    })
}

pub fn is_extremal(m: &FinMetric, f: &MetricFunction) -> bool {
    classify_function(m, f).map(|c| c.extremal).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::sup_distance;
    use crate::rational::{int, ratio};

    fn two_point() -> FinMetric {
        FinMetric::from_int_matrix(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn k3() -> FinMetric {
        FinMetric::from_int_matrix(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap()
    }

    fn path3() -> FinMetric {
        FinMetric::from_int_matrix(&[vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]]).unwrap()
    }

    fn c4() -> FinMetric {
        let d = |i: i64, j: i64| {
            let k = (i - j).rem_euclid(4);
            k.min(4 - k)
        };
        let m: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| d(i, j)).collect()).collect();
        FinMetric::from_int_matrix(&m).unwrap()
    }

    fn violations(r: Result<FinMetric>) -> Vec<Violation> {
        match r {
            Err(Error::InvalidMetric(v)) => v,
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn validation() {
        assert_eq!(two_point().len(), 2);
        assert!(two_point().is_integer_valued());
        let v = violations(FinMetric::from_int_matrix(&[vec![0, 1], vec![2, 0]]));
        assert_eq!(v, vec![Violation::AsymmetricPair { x: 0, y: 1 }]);
        let v = violations(FinMetric::from_int_matrix(&[vec![0, 1, 3], vec![1, 0, 1], vec![3, 1, 0]]));
        assert_eq!(v, vec![Violation::TriangleViolation { x: 0, z: 2, via: 1 }]);
        let v = violations(FinMetric::from_int_matrix(&[vec![0, 1], vec![1]]));
        assert_eq!(v, vec![Violation::NonSquare { row: 1, len: 1, expected: 2 }]);
        let v = violations(FinMetric::from_int_matrix(&[vec![0, -1], vec![-1, 0]]));
        assert!(v.contains(&Violation::NegativeEntry { x: 0, y: 1 }));
        let v = violations(FinMetric::from_int_matrix(&[vec![0, 0], vec![0, 0]]));
        assert_eq!(v, vec![Violation::ZeroDistance { x: 0, y: 1 }]);
        let v = violations(FinMetric::from_int_matrix(&[]));
        assert_eq!(v, vec![Violation::Empty]);
    }

    #[test]
    fn rational_metric_is_not_integer_valued() {
        let m = FinMetric::from_matrix(&[vec![int(0), ratio(1, 2)], vec![ratio(1, 2), int(0)]]).unwrap();
        assert!(!m.is_integer_valued());
        assert_eq!(interval(&m, 0, 1), vec![0, 1]);
    }

    #[test]
    fn labels_must_be_unique() {
        assert!(two_point().with_labels(vec!["a".into(), "a".into()]).is_err());
        let m = two_point().with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(m.find_label("b"), Some(1));
    }

    #[test]
    fn intervals_and_cones() {
        assert_eq!(interval(&two_point(), 0, 1), vec![0, 1]);
        assert_eq!(interval(&k3(), 0, 1), vec![0, 1]);
        assert_eq!(interval(&path3(), 0, 2), vec![0, 1, 2]);
        assert_eq!(cone(&path3(), 1, 1), vec![0, 1, 2]);
        assert_eq!(cone(&path3(), 0, 1), vec![1, 2]);
        assert_eq!(cone(&k3(), 0, 1), vec![1]);
    }

    #[test]
    fn gromov_products() {
        assert_eq!(gromov_product(&k3(), 0, 1, 0), int(0));
        assert_eq!(gromov_product(&k3(), 0, 1, 2), ratio(1, 2));
        assert_eq!(gromov_product(&path3(), 0, 2, 1), int(0));
    }

    #[test]
    fn classification() {
        let c = classify_function(&two_point(), &MetricFunction::from_doubled(&[1, 1])).unwrap();
        assert!(c.extremal && c.in_delta && c.lip1);
        let c = classify_function(&two_point(), &MetricFunction::from_ints(&[2, 2])).unwrap();
        assert!(c.in_delta && !c.extremal);
        assert_eq!(c.witness, Some(FunctionWitness::Slack { x: 0 }));
        assert!(classify_function(&k3(), &MetricFunction::from_ints(&[0, 1, 1])).unwrap().extremal);
        let c = classify_function(&k3(), &MetricFunction::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(c.witness, Some(FunctionWitness::DeltaViolation { x: 0, y: 1 }));
        assert!(!c.in_delta);
        let c = classify_function(&two_point(), &MetricFunction::from_ints(&[0, 3])).unwrap();
        assert!(c.in_delta && !c.lip1 && !c.extremal);
        assert!(classify_function(&k3(), &MetricFunction::from_ints(&[0])).is_err());
    }

    #[test]
    fn embeddings() {
        assert_eq!(embed(&two_point(), 0), MetricFunction::from_ints(&[0, 1]));
        assert_eq!(embed(&k3(), 0), MetricFunction::from_ints(&[0, 1, 1]));
        assert_eq!(embed(&c4(), 0), MetricFunction::from_ints(&[0, 1, 2, 1]));
        let m = c4();
        for y in m.points() {
            assert!(is_extremal(&m, &embed(&m, y)));
            for z in m.points() {
                assert_eq!(&sup_distance(&embed(&m, y), &embed(&m, z)).unwrap(), m.d(y, z));
            }
        }
    }

    #[test]
    fn medians() {
        assert_eq!(median_points(&k3(), 1, 1, 1), vec![1]);
        assert!(median_points(&k3(), 0, 1, 2).is_empty());
        assert_eq!(median_points(&path3(), 0, 1, 2), vec![1]);
    }
}
