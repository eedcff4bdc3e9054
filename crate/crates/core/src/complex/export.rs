//! JSON and OFF views of a hull complex.

use std::cmp::Ordering;
use std::fmt::Write;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::build::HullComplex;
use super::system::polytope_system;
use crate::error::Result;
use crate::function::MetricFunction;
use crate::metric::PointId;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Serialize)]
pub struct VertexRecord {
    pub id: usize,
    pub values: MetricFunction,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub id: usize,
    pub dim: usize,
    pub vertex_ids: Vec<usize>,
    pub admissible_pairs: Vec<(PointId, PointId)>,
    pub isometry_class: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexRecord {
    pub points: Vec<String>,
    pub vertices: Vec<VertexRecord>,
    pub cells: Vec<CellRecord>,
    /// `[face, cell]` covering pairs of the face poset.
    pub faces: Vec<[usize; 2]>,
}

pub fn complex_record(complex: &HullComplex) -> ComplexRecord {
    let m = &complex.metric;
    ComplexRecord {
        points: m.points().map(|x| m.label(x)).collect(),
        vertices: complex.vertices.iter().enumerate().map(|(id, v)| VertexRecord { id, values: v.clone() }).collect(),
        cells: complex
            .cells
            .iter()
            .enumerate()
            .map(|(id, c)| CellRecord {
                id,
                dim: c.dim,
                vertex_ids: c.vertex_ids.clone(),
                admissible_pairs: c.admissible_set.pairs(),
                isometry_class: complex.isometry_class[id],
            })
            .collect(),
        faces: complex.faces.iter().map(|&(a, b)| [a, b]).collect(),
    }
}

/// Exact decimal rendering of a value with a power-of-two-times-five
/// denominator; other values fall back to `p/q`.
fn decimal(r: &Rational) -> String {
    let mut denom = r.denom().clone();
    let two = num_bigint::BigInt::from(2);
    let five = num_bigint::BigInt::from(5);
    let mut digits = 0u32;
    let mut scale = num_bigint::BigInt::from(1);
    while denom != num_bigint::BigInt::from(1) {
        if (&denom % &two).is_zero() {
            denom /= &two;
        } else if (&denom % &five).is_zero() {
            denom /= &five;
        } else {
            return rational::format(r);
        }
        digits += 1;
        scale *= 10;
    }
    if digits == 0 {
        return r.numer().to_string();
    }
    let scaled = (r * Rational::from_integer(scale)).to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let s = scaled.abs().to_string();
    let s = format!("{s:0>width$}", width = digits as usize + 1);
    let (int, frac) = s.split_at(s.len() - digits as usize);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Orders points of the plane counter-clockwise around the origin, exactly.
fn angular_cmp(a: &[Rational; 2], b: &[Rational; 2]) -> Ordering {
    let half = |p: &[Rational; 2]| !(p[1].is_positive() || (p[1].is_zero() && p[0].is_positive()));
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        Rational::zero().cmp(&cross)
    })
}

/// The 2-skeleton as an `nOFF` file in the ambient `ℝ^X`. Two-cells are
/// polygons ordered by angle in their cell coordinates; edges that bound no
/// two-cell are written as two-vertex faces.
pub fn off_2_skeleton(complex: &HullComplex) -> Result<String> {
    let m = &complex.metric;
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for (_, cell) in complex.cells_of_dim(2) {
        let sys = polytope_system(m, &cell.admissible_set, &cell.representative)?;
        let mut pts: Vec<([Rational; 2], usize)> = cell
            .vertex_ids
            .iter()
            .map(|&v| {
                let t = sys.coordinates(&complex.vertices[v]);
                ([t[0].clone(), t[1].clone()], v)
            })
            .collect();
        pts.sort_by(|a, b| angular_cmp(&a.0, &b.0));
        faces.push(pts.into_iter().map(|(_, v)| v).collect());
    }
    let mut bounded = vec![false; complex.cells.len()];
    for &(e, c) in &complex.faces {
        if complex.cells[c].dim == 2 {
            bounded[e] = true;
        }
    }
    for (i, cell) in complex.cells_of_dim(1) {
        if !bounded[i] {
            faces.push(cell.vertex_ids.clone());
        }
    }
    let mut out = String::new();
    writeln!(out, "nOFF").unwrap();
    writeln!(out, "{}", m.len()).unwrap();
    writeln!(out, "{} {} 0", complex.vertices.len(), faces.len()).unwrap();
    for v in &complex.vertices {
        let coords: Vec<String> = v.iter().map(decimal).collect();
        writeln!(out, "{}", coords.join(" ")).unwrap();
    }
    for f in &faces {
        let ids: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{} {}", f.len(), ids.join(" ")).unwrap();
    }
    Ok(out)
}
