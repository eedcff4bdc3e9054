//! JSON input formats: metrics, graphs, functions and permutation groups.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::function::MetricFunction;
use crate::graph::Graph;
use crate::group::Isometry;
use crate::metric::{validate_metric, FinMetric, PointId};
use crate::rational::{self, Rational};

/// A parsed input document.
#[derive(Debug, Clone)]
pub enum Input {
    /// `{"points": [labels], "distances": [[…]]}`
    Metric(FinMetric),
    /// `{"vertices": n or [labels], "edges": [[i, j], …]}`
    Graph(Graph),
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn labels(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("`{what}` must be an array of labels")))?
        .iter()
        .map(|l| match l {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(parse_err(format!("`{what}` entries must be strings"))),
        })
        .collect()
}

fn parse_metric(obj: &serde_json::Map<String, Value>) -> Result<FinMetric> {
    let rows = obj["distances"].as_array().ok_or_else(|| parse_err("`distances` must be an array of rows"))?;
    let matrix: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .ok_or_else(|| parse_err(format!("row {i} of `distances` is not an array")))?
                .iter()
                .map(rational::from_json)
                .collect()
        })
        .collect::<Result<_>>()?;
    let m = validate_metric(&matrix)?;
    match obj.get("points") {
        Some(p) => m.with_labels(labels(p, "points")?),
        None => Ok(m),
    }
}

fn parse_graph(obj: &serde_json::Map<String, Value>) -> Result<Graph> {
    let (n, names) = match &obj["vertices"] {
        Value::Number(k) => {
            let k = k.as_u64().ok_or_else(|| parse_err("`vertices` must be a non-negative integer"))?;
            (k as usize, None)
        }
        v @ Value::Array(_) => {
            let l = labels(v, "vertices")?;
            (l.len(), Some(l))
        }
        _ => return Err(parse_err("`vertices` must be a count or a list of labels")),
    };
    let endpoint = |v: &Value| -> Result<usize> {
        match v {
            Value::Number(k) => {
                k.as_u64().map(|k| k as usize).ok_or_else(|| parse_err("edge endpoints must be indices"))
            }
            Value::String(s) => names
                .as_ref()
                .and_then(|l| l.iter().position(|x| x == s))
                .ok_or_else(|| parse_err(format!("unknown vertex label `{s}`"))),
            _ => Err(parse_err("edge endpoints must be indices or labels")),
        }
    };
    let edges: Vec<(usize, usize)> = match obj.get("edges") {
        None => Vec::new(),
        Some(e) => e
            .as_array()
            .ok_or_else(|| parse_err("`edges` must be an array of pairs"))?
            .iter()
            .map(|pair| match pair.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok((endpoint(a)?, endpoint(b)?)),
                _ => Err(parse_err("each edge must be a pair")),
            })
            .collect::<Result<_>>()?,
    };
    let g = Graph::new(n, &edges)?;
    match names {
        Some(l) => g.with_labels(l),
        None => Ok(g),
    }
}

/// Parses a metric or graph document, telling them apart by their keys.
pub fn parse_input(text: &str) -> Result<Input> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("malformed JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| parse_err("input must be a JSON object"))?;
    if obj.contains_key("distances") {
        parse_metric(obj).map(Input::Metric)
    } else if obj.contains_key("vertices") {
        parse_graph(obj).map(Input::Graph)
    } else {
        Err(parse_err("input needs either `distances` or `vertices`"))
    }
}

/// A subgroup given as a JSON list of image arrays.
pub fn parse_subgroup(text: &str, m: &FinMetric) -> Result<Vec<Isometry>> {
    let perms: Vec<Vec<PointId>> =
        serde_json::from_str(text).map_err(|e| parse_err(format!("subgroup must be a list of permutations: {e}")))?;
    perms.into_iter().map(|p| Isometry::new(m, p)).collect()
}

/// A point given by label or index.
pub fn parse_point(m: &FinMetric, s: &str) -> Result<PointId> {
    if let Some(x) = m.find_label(s) {
        return Ok(x);
    }
    let x: PointId = s.parse().map_err(|_| parse_err(format!("`{s}` is neither a point label nor an index")))?;
    m.check_point(x)?;
    Ok(x)
}

/// A function given as comma-separated rationals, optionally in parentheses
/// or brackets, or as a point whose distance function is meant.
pub fn parse_function(m: &FinMetric, s: &str) -> Result<MetricFunction> {
    if let Ok(x) = parse_point(m, s) {
        return Ok(crate::metric::embed(m, x));
    }
    let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let values: Vec<Rational> = inner.split(',').map(|t| rational::parse(t.trim())).collect::<Result<_>>()?;
    let f = MetricFunction::new(values);
    m.check_function(&f)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Violation;
    use crate::rational::ratio;

    #[test]
    fn metric_documents() {
        let text = r#"{"points": ["a", "b", "c"], "distances": [[0, 1, "3/2"], [1, 0, 1], ["3/2", 1, 0]]}"#;
        let Input::Metric(m) = parse_input(text).unwrap() else { panic!("expected metric") };
        assert_eq!(m.d(0, 2), &ratio(3, 2));
        assert_eq!(m.label(2), "c");
        let bad = r#"{"distances": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]}"#;
        match parse_input(bad) {
            Err(Error::InvalidMetric(v)) => assert!(v.iter().any(|v| matches!(v, Violation::TriangleViolation { .. }))),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_input(r#"{"distances": [[0, "2/4"], ["2/4", 0]]}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn graph_documents() {
        let Input::Graph(g) = parse_input(r#"{"vertices": 3, "edges": [[0, 1], [1, 2]]}"#).unwrap() else {
            panic!("expected graph")
        };
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        let Input::Graph(g) = parse_input(r#"{"vertices": ["u", "v"], "edges": [["u", "v"]]}"#).unwrap() else {
            panic!("expected graph")
        };
        assert_eq!(g.labels().unwrap(), ["u", "v"]);
        assert!(parse_input(r#"{"vertices": 2, "edges": [[0, 5]]}"#).is_err());
        assert!(parse_input("[1]").is_err());
    }

    #[test]
    fn functions_points_and_groups() {
        let m = FinMetric::from_int_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(parse_point(&m, "1").unwrap(), 1);
        assert_eq!(parse_function(&m, "0").unwrap(), MetricFunction::from_ints(&[0, 1]));
        assert_eq!(parse_function(&m, "(1/2, 1/2)").unwrap(), MetricFunction::from_doubled(&[1, 1]));
        assert!(parse_function(&m, "1,2,3").is_err());
        assert_eq!(parse_subgroup("[[0,1],[1,0]]", &m).unwrap().len(), 2);
        assert!(parse_subgroup("[[0,0]]", &m).is_err());
    }
}
