use std::fmt;
use std::ops::Index;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A real-valued function on the points of a finite space, stored exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MetricFunction(#[serde(with = "rational::vec_as_strings")] Vec<Rational>);

impl MetricFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        MetricFunction(values)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        MetricFunction(values.iter().map(|&v| rational::int(v)).collect())
    }

    /// Builds a function from doubled values, so `[1, 3]` is `(1/2, 3/2)`.
    pub fn from_doubled(values: &[i64]) -> Self {
        MetricFunction(values.iter().map(|&v| rational::from_doubled(v)).collect())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        MetricFunction(vec![c; n])
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn set(&mut self, x: usize, value: Rational) {
        self.0[x] = value;
    }

    /// Doubled values, if every value lies in `½ℤ` and fits in `i64`.
    pub fn to_doubled(&self) -> Option<Vec<i64>> {
        self.0.iter().map(rational::to_doubled).collect()
    }

    /// Returns `(1 - t)·self + t·other`.
    pub fn lerp(&self, other: &MetricFunction, t: &Rational) -> Result<MetricFunction> {
        check_len(self, other)?;
        let s = Rational::from_integer(1.into()) - t;
        Ok(MetricFunction(self.0.iter().zip(&other.0).map(|(a, b)| a * &s + b * t).collect()))
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &MetricFunction) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add_constant(&self, c: &Rational) -> MetricFunction {
        MetricFunction(self.0.iter().map(|v| v + c).collect())
    }

    pub fn min(&self) -> Option<&Rational> {
        self.0.iter().min()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.0.iter().max()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rational::format).collect()
    }
}

impl Index<usize> for MetricFunction {
    type Output = Rational;

    fn index(&self, x: usize) -> &Rational {
        &self.0[x]
    }
}

impl From<Vec<Rational>> for MetricFunction {
    fn from(values: Vec<Rational>) -> Self {
        MetricFunction(values)
    }
}

impl fmt::Display for MetricFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

pub(crate) fn check_len(f: &MetricFunction, g: &MetricFunction) -> Result<()> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch { expected: f.len(), found: g.len() });
    }
    Ok(())
}

/// `‖f − g‖∞`, computed exactly.
pub fn sup_distance(f: &MetricFunction, g: &MetricFunction) -> Result<Rational> {
    check_len(f, g)?;
    Ok(f.0.iter().zip(&g.0).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Rational::zero))
}
