//! Command implementations for the `tightspan` binary. Each command returns
//! the document to write and a short human summary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tightspan::complex::export::{complex_record, off_2_skeleton};
use tightspan::complex::{barycentric_subdivision, build_complex, enumerate_vertices, HullComplex, DEFAULT_BUDGET};
use tightspan::graph::{
    check_stable_intervals, cone_types, delta_hyperbolicity, generate, graph_metric, is_discretely_geodesic, min_beta,
    Family, Scope, DEFAULT_MAX_VERTICES,
};
use tightspan::group::{act_on_complex, fixed_point_function, isometry_group};
use tightspan::hull::{bicombing, PMapLimits};
use tightspan::io::{parse_input, parse_point, parse_subgroup, Input};
use tightspan::rational::{self, Rational};
use tightspan::{Error, FinMetric, Result};

#[derive(Debug, Parser)]
#[command(name = "tightspan", version, about = "Exact injective hulls of finite metric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the polyhedral complex of the hull.
    Hull,
    /// List the hull vertices.
    Vertices,
    /// Interval stability, hyperbolicity and cone types of the space.
    Space,
    /// Point `T` of the geodesic from the distance function of `X` to that of `Y`.
    Bicombing { x: String, y: String, t: String },
    /// Action of a group of isometries on the hull, plus a fixed point.
    /// Without a file the full isometry group is used.
    Action { subgroup: Option<PathBuf> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Off,
    Csv,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Metric or graph JSON document.
    #[arg(long, global = true, conflicts_with = "generator")]
    pub input: Option<PathBuf>,
    /// Generated space, e.g. `hypercube:3`, `cycle:6`, `zn_ball:2,3,l1`.
    #[arg(long = "gen", global = true, value_name = "FAMILY:PARAMS")]
    pub generator: Option<String>,
    /// Write the document here and the summary to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Cap on the vertex-search grid size.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Cap on `q`-iterations in the bicombing.
    #[arg(long, global = true, default_value_t = 64)]
    pub max_iter: usize,
    /// Residual at which the `q`-iteration stops early: `p/q` or `2^-k`.
    #[arg(long, global = true, value_name = "P/Q|2^-K")]
    pub residual_cap: Option<String>,
    /// Only check stability on triples whose geodesics stay inside the
    /// generated ball.
    #[arg(long, global = true)]
    pub interior_only: bool,
    /// Include the barycentric subdivision in the hull document.
    #[arg(long, global = true)]
    pub subdivide: bool,
}

/// Result of a command: the document and a human-readable summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub document: String,
    pub summary: String,
}

struct Space {
    metric: FinMetric,
    source: String,
    ball: Option<(usize, i64)>,
}

fn load(options: &Options) -> Result<Space> {
    match (&options.input, &options.generator) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
            let metric = match parse_input(&text)? {
                Input::Metric(m) => m,
                Input::Graph(g) => graph_metric(&g)?.metric,
            };
            Ok(Space { metric, source: path.display().to_string(), ball: None })
        }
        (None, Some(spec)) => {
            let family: Family = spec.parse()?;
            let g = generate(&family, DEFAULT_MAX_VERTICES)?;
            let ball = g.center.zip(g.radius);
            Ok(Space { metric: graph_metric(&g.graph)?.metric, source: family.to_string(), ball })
        }
        _ => Err(Error::InvalidArgument("exactly one of --input and --gen is required".into())),
    }
}

fn limits(options: &Options) -> Result<PMapLimits> {
    let mut limits = PMapLimits { max_iter: options.max_iter, ..PMapLimits::default() };
    if let Some(s) = &options.residual_cap {
        let cap = match s.strip_prefix("2^-") {
            Some(k) => rational::dyadic(k.parse().map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?),
            None => rational::parse(s)?,
        };
        if cap <= rational::int(0) {
            return Err(Error::InvalidArgument("--residual-cap must be positive".into()));
        }
        limits.residual_cap = cap;
    }
    Ok(limits)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn labels(m: &FinMetric) -> Vec<String> {
    m.points().map(|x| m.label(x)).collect()
}

fn csv_table(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 records")
}

fn vertex_csv(m: &FinMetric, vertices: &[tightspan::MetricFunction]) -> String {
    let mut header = vec!["id".to_string()];
    header.extend(labels(m));
    csv_table(
        &header,
        vertices.iter().enumerate().map(|(i, v)| std::iter::once(i.to_string()).chain(v.to_strings()).collect()),
    )
}

fn require_format(options: &Options, allowed: &[Format]) -> Result<()> {
    if allowed.contains(&options.format) {
        Ok(())
    } else {
        let name = options.format.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        Err(Error::InvalidArgument(format!("format `{name}` is not available for this command")))
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `Some(n)` when the complex is a single `n`-cell with the face numbers of
/// the `n`-cube.
pub fn combinatorial_cube(complex: &HullComplex) -> Option<usize> {
    let n = complex.dimension();
    if n >= usize::BITS as usize - 1 || complex.maximal_cells().len() != 1 {
        return None;
    }
    let cube: Vec<usize> = (0..=n).map(|k| binomial(n, k) << (n - k)).collect();
    (complex.f_vector() == cube).then_some(n)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn cmd_hull(options: &Options) -> Result<Outcome> {
    require_format(options, &[Format::Json, Format::Off, Format::Csv])?;
    let space = load(options)?;
    let complex = build_complex(&space.metric, options.budget)?;
    let f_vector = complex.f_vector();
    let class_counts = complex.class_counts();
    let cube = combinatorial_cube(&complex);
    let mut summary = format!(
        "points={} vertices={}\ndim={}\ncells per dim: {}\nisometry classes per dim: {}\n",
        space.metric.len(),
        complex.vertices.len(),
        complex.dimension(),
        join(&f_vector),
        join(&class_counts)
    );
    if let Some(n) = cube {
        summary.push_str(&format!("combinatorial {n}-cube\n"));
    }
    let document = match options.format {
        Format::Off => off_2_skeleton(&complex)?,
        Format::Csv => vertex_csv(&space.metric, &complex.vertices),
        Format::Json => {
            let subdivision = options.subdivide.then(|| {
                let s = barycentric_subdivision(&complex);
                summary.push_str(&format!("subdivision simplices per dim: {}\n", join(&s.f_vector())));
                json!({ "f_vector": s.f_vector(), "simplices": s.simplices })
            });
            to_json(&json!({
                "source": space.source,
                "dimension": complex.dimension(),
                "f_vector": f_vector,
                "class_counts": class_counts,
                "combinatorial_cube": cube,
                "complex": complex_record(&complex),
                "subdivision": subdivision,
            }))
        }
    };
    Ok(Outcome { document, summary })
}

pub fn cmd_vertices(options: &Options) -> Result<Outcome> {
    require_format(options, &[Format::Json, Format::Csv])?;
    let space = load(options)?;
    let vertices = enumerate_vertices(&space.metric, options.budget)?;
    let summary = format!("points={} vertices={}\n", space.metric.len(), vertices.len());
    let document = match options.format {
        Format::Csv => vertex_csv(&space.metric, &vertices),
        _ => to_json(&json!({
            "source": space.source,
            "points": labels(&space.metric),
            "vertices": vertices,
        })),
    };
    Ok(Outcome { document, summary })
}

#[derive(Serialize)]
struct ConeSummary {
    apex: usize,
    label: String,
    cone_count: usize,
    f_class_count: usize,
    classes_determine_cones: bool,
    monotone_consistent: bool,
    cones: Vec<Vec<usize>>,
}

pub fn cmd_space(options: &Options) -> Result<Outcome> {
    require_format(options, &[Format::Json])?;
    let space = load(options)?;
    let m = &space.metric;
    if !m.is_integer_valued() {
        return Err(Error::NotIntegerMetric);
    }
    let scope = match (options.interior_only, space.ball) {
        (false, _) => Scope::All,
        (true, Some((center, radius))) => Scope::Interior { center, radius },
        (true, None) => {
            return Err(Error::InvalidArgument("--interior-only needs a ball generator (zn_ball or free_ball)".into()))
        }
    };
    let delta = delta_hyperbolicity(m);
    let beta = min_beta(m, scope)?;
    let at_min = check_stable_intervals(m, beta, scope)?;
    let below = if beta > 0 { Some(check_stable_intervals(m, beta - 1, scope)?) } else { None };
    let hyperbolic_beta = rational::to_i64(&delta.ceil()).expect("integer distances") as u64 + 1;
    let hyperbolic = check_stable_intervals(m, hyperbolic_beta, scope)?;
    let cones: Vec<ConeSummary> = m
        .points()
        .map(|v| {
            let t = cone_types(m, v, beta)?;
            Ok(ConeSummary {
                apex: v,
                label: m.label(v),
                cone_count: t.cone_count(),
                f_class_count: t.f_class_count(),
                classes_determine_cones: t.classes_determine_cones,
                monotone_consistent: t.monotone_consistent,
                cones: t.cones,
            })
        })
        .collect::<Result<_>>()?;
    let counts: Vec<usize> = cones.iter().map(|c| c.cone_count).collect();
    let summary = format!(
        "points={} diameter={}\ndelta={}\nmin_beta={}\ncone types per apex: min={} max={}\n",
        m.len(),
        rational::format(&m.diameter()),
        rational::format(&delta),
        beta,
        counts.iter().min().expect("non-empty space"),
        counts.iter().max().expect("non-empty space"),
    );
    let document = to_json(&json!({
        "source": space.source,
        "points": labels(m),
        "discretely_geodesic": is_discretely_geodesic(m),
        "diameter": rational::format(&m.diameter()),
        "delta": rational::format(&delta),
        "scope": scope,
        "min_beta": beta,
        "stability_at_min_beta": at_min,
        "stability_below_min_beta": below,
        "stability_at_delta_plus_one": hyperbolic,
        "cone_types": cones,
    }));
    Ok(Outcome { document, summary })
}

pub fn cmd_bicombing(options: &Options, x: &str, y: &str, t: &str) -> Result<Outcome> {
    require_format(options, &[Format::Json])?;
    let space = load(options)?;
    let m = &space.metric;
    let (x, y) = (parse_point(m, x)?, parse_point(m, y)?);
    let t: Rational = rational::parse(t)?;
    let report = bicombing(m, x, y, &t, &limits(options)?)?;
    let summary = format!(
        "gamma({}) = {}\niterations={} converged_exactly={}\n",
        rational::format(&t),
        report.result,
        report.iterations,
        report.converged_exactly
    );
    let document = to_json(&json!({
        "source": space.source,
        "points": labels(m),
        "x": x,
        "y": y,
        "t": rational::format(&t),
        "report": report,
    }));
    Ok(Outcome { document, summary })
}

pub fn cmd_action(options: &Options, subgroup: Option<&PathBuf>) -> Result<Outcome> {
    require_format(options, &[Format::Json])?;
    let space = load(options)?;
    let m = &space.metric;
    let group = match subgroup {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
            parse_subgroup(&text, m)?
        }
        None => isometry_group(m),
    };
    let complex = build_complex(m, options.budget)?;
    let report = act_on_complex(&complex, &group)?;
    let fixed = fixed_point_function(m, &group)?;
    let orbit_counts: Vec<usize> = report.cell_orbits.iter().map(|d| d.orbits.len()).collect();
    let summary = format!(
        "group order={}\ncell orbits per dim: {}\nsimplicial rigidity: {}\nfixed point: {}\n",
        report.group_order,
        join(&orbit_counts),
        report.simplicial_rigidity,
        fixed
    );
    let document = to_json(&json!({
        "source": space.source,
        "points": labels(m),
        "group": group,
        "fixed_point": fixed,
        "action": report,
    }));
    Ok(Outcome { document, summary })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if cli.options.budget == 0 {
        return Err(Error::InvalidArgument("--budget must be positive".into()));
    }
    match &cli.command {
        Command::Hull => cmd_hull(&cli.options),
        Command::Vertices => cmd_vertices(&cli.options),
        Command::Space => cmd_space(&cli.options),
        Command::Bicombing { x, y, t } => cmd_bicombing(&cli.options, x, y, t),
        Command::Action { subgroup } => cmd_action(&cli.options, subgroup.as_ref()),
    }
}

/// 2 for exceeded budgets, 1 for every other failure.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_budget() {
        2
    } else {
        1
    }
}

/// Machine-readable error document.
pub fn error_document(err: &Error) -> String {
    let violations = match err {
        Error::InvalidMetric(v) => serde_json::to_value(v).expect("violations serialize"),
        _ => serde_json::Value::Null,
    };
    to_json(&json!({ "error": err.to_string(), "violations": violations }))
}
