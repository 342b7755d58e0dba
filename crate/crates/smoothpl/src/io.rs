//! JSON file formats with exact rationals, job specifications, and the batch runner used
//! by the command line.
//!
//! Rationals are written as `["num", "den"]`.  On input a rational may also be a JSON
//! integer or a string such as `"3/4"`, `"0.05"` or `"1e-3"`; JSON floats are rejected.

use crate::approx::{is_simplicial, OpaqueMap, star_condition, EvaluableMap, PlMap, DEFAULT_SUBDIVISION_CAP};
use crate::complex::{build_complex, Point, Simplex, SimplexId, SimplicialComplex, VertexId};
use crate::cover::{build_cover, shrink, CoverElement, ElementShape, SkeletonCover, WideningTube};
use crate::crossings::{retraction_products, weak_retraction, CoordinateDivisor, WeakRetraction};
use crate::rational::{from_pair, int, parse, pow2_inv, to_f64, to_pair, Q};
use crate::sampling;
use crate::smoother::{
    approximate_map, iota, smooth_map, ApproximationOptions, CarrierAssignment, PiecewiseMap, Polynomial,
    PolynomialMap, SeamReport, SmoothedMap, SmoothingCertificate,
};
use num::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Default number of sample points for grid certificates.
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Largest ambient dimension for CSV export.
pub const MAX_PLOT_DIM: usize = 3;

/// Input errors; all map to exit code 2.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },
    #[error("parameter `{name}` out of range: {message}")]
    Range { name: String, message: String },
    #[error("cannot access {path}: {message}")]
    File { path: String, message: String },
}

impl IoError {
    pub fn exit_code(&self) -> i32 {
        2
    }

    fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        IoError::Parse { context: context.into(), message: message.to_string() }
    }

    fn range(name: &str, message: impl ToString) -> Self {
        IoError::Range { name: name.to_string(), message: message.to_string() }
    }
}

/// An exact rational in a JSON document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Q);

impl From<Q> for Rational {
    fn from(q: Q) -> Self {
        Rational(q)
    }
}

impl From<&Q> for Rational {
    fn from(q: &Q) -> Self {
        Rational(q.clone())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_pair(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        rational_from_value(&v).map(Rational).map_err(D::Error::custom)
    }
}

/// Reads a rational from a JSON value.
pub fn rational_from_value(v: &Value) -> Result<Q, String> {
    let part = |p: &Value| -> Result<String, String> {
        match p {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
            other => Err(format!("expected an integer string, found {other}")),
        }
    };
    match v {
        Value::String(s) => parse(s).map_err(|e| e.to_string()),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse(&n.to_string()).map_err(|e| e.to_string()),
        Value::Number(n) => Err(format!("float {n} rejected: write it as a string such as \"{n}\"")),
        Value::Array(a) if a.len() == 2 => from_pair(&part(&a[0])?, &part(&a[1])?).map_err(|e| e.to_string()),
        other => Err(format!("expected a rational, found {other}")),
    }
}

fn rationals(v: &[Rational]) -> Vec<Q> {
    v.iter().map(|r| r.0.clone()).collect()
}

fn to_rationals(v: &[Q]) -> Vec<Rational> {
    v.iter().map(Rational::from).collect()
}

/// `{ "ambient_dim": p, "vertices": [[r, ...], ...], "simplices": [[i, ...], ...] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
    pub vertices: Vec<Vec<Rational>>,
    pub simplices: Vec<Vec<usize>>,
}

impl ComplexFile {
    /// Vertices in id order and the maximal simplices.
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        ComplexFile {
            ambient_dim: Some(k.ambient_dim()),
            vertices: k.vertices().iter().map(|p| to_rationals(p)).collect(),
            simplices: k
                .maximal_simplices()
                .iter()
                .map(|m| k.simplex(*m).vertices().iter().map(|v| v.0).collect())
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex, IoError> {
        if let Some(p) = self.ambient_dim {
            if let Some(v) = self.vertices.iter().find(|v| v.len() != p) {
                return Err(IoError::parse("complex", format!("vertex with {} coordinates, ambient_dim is {p}", v.len())));
            }
        }
        let points = self.vertices.iter().map(|v| Point(rationals(v))).collect();
        build_complex(points, &self.simplices).map_err(|e| IoError::parse("complex", e))
    }
}

/// One monomial `coefficient * x^exponents`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub exponents: Vec<u32>,
    pub coefficient: Rational,
}

/// A map file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapFile {
    /// Vertex images, extended affinely.  `domain` defaults to the job's complex; a
    /// different domain turns the file into a table map on its own triangulation.
    Pl {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<ComplexFile>,
        #[serde(alias = "images")]
        vertex_map: Vec<Vec<Rational>>,
    },
    /// A continuous map known only through a table of vertex images on its own
    /// triangulation, with a declared Lipschitz modulus.
    Opaque {
        lipschitz: Rational,
        /// Only `"table"` is accepted.
        samples: String,
        domain: ComplexFile,
        vertex_map: Vec<Vec<Rational>>,
    },
    /// One polynomial per output coordinate per maximal simplex.
    Polynomial {
        pieces: Vec<Vec<Vec<TermFile>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lipschitz: Option<Rational>,
        /// Carrier simplex of `L` (vertex ids) for every simplex of `K`, in simplex order.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        carriers: Option<Vec<Vec<usize>>>,
    },
}

impl MapFile {
    fn pl(&self, k: &SimplicialComplex) -> Result<Option<PlMap>, IoError> {
        match self {
            MapFile::Pl { domain, vertex_map: images } => {
                let domain = match domain {
                    Some(d) => d.to_complex()?,
                    None => k.clone(),
                };
                let images = images.iter().map(|v| Point(rationals(v))).collect();
                Ok(Some(PlMap::new(domain, images).map_err(|e| IoError::parse("map", e))?))
            }
            MapFile::Opaque { .. } | MapFile::Polynomial { .. } => Ok(None),
        }
    }

    fn table(&self) -> Result<Option<(PlMap, Q)>, IoError> {
        let MapFile::Opaque { lipschitz, samples, domain, vertex_map } = self else { return Ok(None) };
        if samples != "table" {
            return Err(IoError::parse("map", format!("opaque samples `{samples}`: only \"table\" can be read from a file")));
        }
        if lipschitz.0.is_negative() {
            return Err(IoError::range("lipschitz", "must be nonnegative"));
        }
        let images = vertex_map.iter().map(|v| Point(rationals(v))).collect();
        let table = PlMap::new(domain.to_complex()?, images).map_err(|e| IoError::parse("map", e))?;
        Ok(Some((table, lipschitz.0.clone())))
    }

    /// The map as a piecewise map on `k` itself.
    pub fn to_piecewise(&self, k: &SimplicialComplex) -> Result<PiecewiseMap, IoError> {
        if let Some(pl) = self.pl(k)? {
            if pl.domain() != k {
                return Err(IoError::parse("map", "domain differs from the job's complex"));
            }
            return Ok(PiecewiseMap::Pl(pl));
        }
        let MapFile::Polynomial { pieces, lipschitz, .. } = self else {
            return Err(IoError::parse("map", "opaque maps go through `approximate`"));
        };
        let pieces = pieces
            .iter()
            .map(|coords| {
                coords
                    .iter()
                    .map(|terms| Polynomial::new(terms.iter().map(|t| (t.exponents.clone(), t.coefficient.0.clone())).collect()))
                    .collect()
            })
            .collect();
        let map = PolynomialMap::new(k.clone(), pieces, lipschitz.as_ref().map(|r| r.0.clone()))
            .map_err(|e| IoError::parse("map", e))?;
        Ok(PiecewiseMap::Polynomial(map))
    }

    /// The map as an evaluable map for the approximation pipeline.
    pub fn to_evaluable(&self, k: &SimplicialComplex) -> Result<EvaluableMap, IoError> {
        if let Some(pl) = self.pl(k)? {
            return Ok(EvaluableMap::Pl(pl));
        }
        match self.table()? {
            Some((table, lipschitz)) => Ok(EvaluableMap::Opaque(OpaqueMap::new(lipschitz, move |x| {
                table.evaluate(x).unwrap_or_else(|_| Point(vec![Q::zero(); table.target_dim()]))
            }))),
            None => Err(IoError::parse("map", "the approximation pipeline takes PL or opaque maps")),
        }
    }

    /// Carriers for [`MapFile::to_piecewise`] into `l`.
    pub fn carriers(&self, k: &SimplicialComplex, l: &SimplicialComplex) -> Result<CarrierAssignment, IoError> {
        match self {
            MapFile::Pl { .. } => {
                let pl = self.pl(k)?.expect("pl map");
                CarrierAssignment::from_pl(&pl, l).map_err(|e| IoError::parse("map carriers", e))
            }
            MapFile::Opaque { .. } => Err(IoError::parse("map", "opaque maps go through `approximate`")),
            MapFile::Polynomial { carriers, .. } => {
                let list = carriers.as_ref().ok_or_else(|| IoError::parse("map", "polynomial maps need `carriers`"))?;
                let ids = list
                    .iter()
                    .map(|c| {
                        l.simplex_id(&Simplex::new(c.iter().map(|v| VertexId(*v)).collect()))
                            .ok_or_else(|| IoError::parse("map carriers", format!("{c:?} is not a simplex of L")))
                    })
                    .collect::<Result<_, _>>()?;
                Ok(CarrierAssignment::new(ids))
            }
        }
    }
}

/// Affine projection `x -> matrix x + offset` onto a simplex's hull.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionFile {
    pub matrix: Vec<Vec<Rational>>,
    pub offset: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ElementFile {
    Ball {
        simplex: Vec<usize>,
        radius: Rational,
    },
    /// `projection` is informative; readers recompute it from the simplex.
    Tube {
        simplex: Vec<usize>,
        epsilon: Rational,
        delta: Rational,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        projection: Option<ProjectionFile>,
    },
}

/// A serialized [`SkeletonCover`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverFile {
    pub complex: ComplexFile,
    pub delta: Rational,
    pub elements: Vec<ElementFile>,
}

impl CoverFile {
    pub fn from_cover(cover: &SkeletonCover) -> Self {
        let k = cover.complex();
        let elements = cover
            .elements()
            .iter()
            .map(|e| {
                let simplex: Vec<usize> = k.simplex(e.simplex).vertices().iter().map(|v| v.0).collect();
                match &e.shape {
                    ElementShape::Ball { radius, .. } => ElementFile::Ball { simplex, radius: radius.into() },
                    ElementShape::Tube(t) => {
                        let frame = t.base().frame();
                        let p = k.ambient_dim();
                        let offset = frame.project(&vec![Q::zero(); p]);
                        let columns: Vec<Vec<Q>> = (0..p)
                            .map(|i| {
                                let e: Vec<Q> = (0..p).map(|j| if i == j { int(1) } else { Q::zero() }).collect();
                                frame.project(&e).iter().zip(&offset).map(|(a, b)| a - b).collect()
                            })
                            .collect();
                        let matrix = (0..p).map(|r| (0..p).map(|c| Rational(columns[c][r].clone())).collect()).collect();
                        ElementFile::Tube {
                            simplex,
                            epsilon: t.base().epsilon().into(),
                            delta: t.delta().into(),
                            projection: Some(ProjectionFile { matrix, offset: to_rationals(&offset) }),
                        }
                    }
                }
            })
            .collect();
        CoverFile { complex: ComplexFile::from_complex(k), delta: cover.delta().into(), elements }
    }

    pub fn to_cover(&self) -> Result<SkeletonCover, IoError> {
        let k = self.complex.to_complex()?;
        let mut slots: Vec<Option<CoverElement>> = vec![None; k.simplices().len()];
        for e in &self.elements {
            let (ids, shape) = match e {
                ElementFile::Ball { simplex, radius } => {
                    if simplex.len() != 1 || simplex[0] >= k.num_vertices() {
                        return Err(IoError::parse("cover", format!("ball on {simplex:?} is not on a vertex")));
                    }
                    (simplex, ElementShape::Ball { center: k.vertex(VertexId(simplex[0])).clone(), radius: radius.0.clone() })
                }
                ElementFile::Tube { simplex, epsilon, delta, .. } => {
                    if simplex.iter().any(|v| *v >= k.num_vertices()) {
                        return Err(IoError::parse("cover", format!("unknown vertex in {simplex:?}")));
                    }
                    let base: Vec<Point> = simplex.iter().map(|v| k.vertex(VertexId(*v)).clone()).collect();
                    let shrunk = shrink(&base, &epsilon.0).map_err(|e| IoError::parse("cover", e))?;
                    (simplex, ElementShape::Tube(WideningTube::new(shrunk, delta.0.clone())))
                }
            };
            let id = k
                .simplex_id(&Simplex::new(ids.iter().map(|v| VertexId(*v)).collect()))
                .ok_or_else(|| IoError::parse("cover", format!("{ids:?} is not a simplex")))?;
            slots[id.0] = Some(CoverElement { simplex: id, shape });
        }
        let elements = slots
            .into_iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| IoError::parse("cover", format!("no element for simplex {i}"))))
            .collect::<Result<_, _>>()?;
        Ok(SkeletonCover::from_elements(k, self.delta.0.clone(), elements))
    }
}

/// `{ "dim": d, "components": [j...], "eta": r, "nu": v, "box": [[lo, hi], ...] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorFile {
    pub dim: usize,
    pub components: Vec<usize>,
    pub eta: Rational,
    pub nu: usize,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[Rational; 2]>>,
    /// Application order of the squashes, first to last (written on output).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

impl DivisorFile {
    pub fn to_divisor(&self) -> Result<CoordinateDivisor, IoError> {
        let x = CoordinateDivisor::new(self.dim, &self.components).map_err(|e| IoError::parse("divisor", e))?;
        let bounds = match &self.bounds {
            Some(b) => b.iter().map(|[lo, hi]| (lo.0.clone(), hi.0.clone())).collect(),
            None => vec![(int(-1), int(1)); self.dim],
        };
        if bounds.iter().any(|(lo, hi)| lo >= hi) {
            return Err(IoError::range("box", "empty interval"));
        }
        x.with_box(bounds).map_err(|e| IoError::parse("divisor", e))
    }
}

/// One failed certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub property: String,
    pub detail: String,
}

/// Job echo, certificates and violations.  Passes iff there are no violations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub job: Value,
    pub certificates: Value,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Subdivide,
    Approximate,
    Smooth,
    Iota,
    Retraction,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Subdivide => "subdivide",
            Command::Approximate => "approximate",
            Command::Smooth => "smooth",
            Command::Iota => "iota",
            Command::Retraction => "retraction",
            Command::Verify => "verify",
        }
    }
}

/// Everything a run needs.  Numeric parameters are kept as text and parsed exactly.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::File { path: path.display().to_string(), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| IoError::parse(path.display().to_string(), e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    std::fs::write(path, text + "\n").map_err(|e| IoError::File { path: path.display().to_string(), message: e.to_string() })
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|e| IoError::File { path: path.display().to_string(), message: e.to_string() })
}

fn required<'a, T>(value: &'a Option<T>, name: &str) -> Result<&'a T, IoError> {
    value.as_ref().ok_or_else(|| IoError::range(name, "required"))
}

fn positive(text: &Option<String>, name: &str) -> Result<Q, IoError> {
    let q = parse(required(text, name)?).map_err(|e| IoError::parse(name, e))?;
    if !q.is_positive() {
        return Err(IoError::range(name, format!("{q} must be positive")));
    }
    Ok(q)
}

fn order(nu: &Option<usize>) -> Result<usize, IoError> {
    match nu {
        None => Ok(1),
        Some(0) => Err(IoError::range("nu", "must be at least 1")),
        Some(v) if *v > 8 => Err(IoError::range("nu", "at most 8 is supported")),
        Some(v) => Ok(*v),
    }
}

fn samples_of(job: &JobSpec, k: &SimplicialComplex) -> Result<Vec<Point>, IoError> {
    let count = job.samples.unwrap_or(DEFAULT_SAMPLES);
    if count == 0 {
        return Err(IoError::range("samples", "must be positive"));
    }
    Ok(match job.seed {
        Some(seed) => sampling::random(k, count, seed),
        None => sampling::lattice(k, count),
    })
}

/// Runs a job: reads inputs, writes requested artifacts, returns the report.
pub fn run(job: &JobSpec) -> Result<Report, IoError> {
    let command = *required(&job.command, "command")?;
    if job.csv.is_some() && matches!(command, Command::Subdivide | Command::Verify) {
        return Err(IoError::range("csv", format!("no plot export for `{}`", command.name())));
    }
    let mut certificates = serde_json::Map::new();
    let mut violations = Vec::new();
    match command {
        Command::Subdivide => run_subdivide(job, &mut certificates, &mut violations)?,
        Command::Approximate => run_approximate(job, &mut certificates, &mut violations)?,
        Command::Smooth => run_smooth(job, &mut certificates, &mut violations)?,
        Command::Iota => run_iota(job, &mut certificates, &mut violations)?,
        Command::Retraction => run_retraction(job, &mut certificates, &mut violations)?,
        Command::Verify => run_verify(job, &mut certificates, &mut violations)?,
    }
    Ok(Report {
        command: command.name().to_string(),
        job: serde_json::to_value(job).expect("serializable"),
        certificates: Value::Object(certificates),
        passed: violations.is_empty(),
        violations,
    })
}

type Certs = serde_json::Map<String, Value>;

fn violation(violations: &mut Vec<Violation>, property: &str, detail: impl ToString) {
    violations.push(Violation { property: property.to_string(), detail: detail.to_string() });
}

fn run_subdivide(job: &JobSpec, certs: &mut Certs, violations: &mut Vec<Violation>) -> Result<(), IoError> {
    let k: ComplexFile = read_json(required(&job.complex, "complex")?)?;
    let k = k.to_complex()?;
    let level = *required(&job.k, "k")?;
    if level > DEFAULT_SUBDIVISION_CAP {
        return Err(IoError::range("k", format!("at most {DEFAULT_SUBDIVISION_CAP}")));
    }
    let sub = k.barycentric_subdivide(level);
    let base = k.mesh_size().map_err(|e| IoError::parse("complex", e))?.squared;
    let mesh = sub.mesh_size().map_err(|e| IoError::parse("complex", e))?.squared;
    let d = k.dim() as i64;
    let ratio = int(d) / int(d + 1);
    let bound = num::pow(ratio.clone() * ratio, level) * &base;
    certs.insert("level".into(), json!(level));
    certs.insert("f_vector".into(), json!(sub.f_vector()));
    certs.insert("mesh_squared".into(), json!(Rational(mesh.clone())));
    certs.insert("mesh".into(), json!(to_f64(&mesh).sqrt()));
    certs.insert("mesh_squared_bound".into(), json!(Rational(bound.clone())));
    if mesh > bound {
        violation(violations, "mesh decay", format!("mesh^2 {mesh} exceeds {bound}"));
    }
    if let Some(out) = &job.out {
        write_json(out, &ComplexFile::from_complex(&sub))?;
    }
    Ok(())
}

fn smoothing_certs(
    certs: &mut Certs,
    violations: &mut Vec<Violation>,
    cert: &SmoothingCertificate,
    seams: &[SeamReport],
    nu: usize,
) {
    certs.insert(
        "error".into(),
        json!({ "samples": cert.samples, "sup_error": cert.sup_error, "bound": cert.bound, "passed": cert.error_ok() }),
    );
    certs.insert(
        "carrier".into(),
        json!({
            "min_barycentric": cert.min_barycentric,
            "max_normal": cert.max_normal,
            "carriers_checked": cert.carriers_checked,
            "passed": cert.carrier_ok(),
        }),
    );
    certs.insert("partition".into(), json!({ "max_weight_defect": cert.max_weight_defect, "passed": cert.partition_ok() }));
    let min_order = seams.iter().map(|s| s.order.map_or(-1, |o| o as i64)).min();
    let failing: Vec<&SeamReport> = seams.iter().filter(|s| s.order.is_none_or(|o| o < nu)).collect();
    certs.insert(
        "smoothness".into(),
        json!({ "seams": seams.len(), "min_order": min_order, "required": nu, "passed": failing.is_empty() }),
    );
    if !cert.error_ok() {
        violation(violations, "error", format!("sup error {} >= {}", cert.sup_error, cert.bound));
    }
    if !cert.carrier_ok() {
        violation(violations, "carrier", format!("min barycentric {}, normal {}", cert.min_barycentric, cert.max_normal));
    }
    if !cert.partition_ok() {
        violation(violations, "partition", format!("weight defect {}", cert.max_weight_defect));
    }
    for s in failing {
        violation(violations, "smoothness", format!("{} measured order {:?}", s.probe.label, s.order));
    }
}

fn map_artifact(h: &SmoothedMap) -> Value {
    json!({
        "complex": ComplexFile::from_complex(h.complex()),
        "target": ComplexFile::from_complex(h.target()),
        "nu": h.nu(),
        "eta": Rational(h.eta().clone()),
        "delta": Rational(h.delta().clone()),
        "carriers": h.carriers().as_slice().iter().map(|s| {
            h.target().simplex(*s).vertices().iter().map(|v| v.0).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

fn write_map_outputs(job: &JobSpec, h: &SmoothedMap, samples: &[Point], extra: Value) -> Result<(), IoError> {
    if let Some(out) = &job.out {
        let mut artifact = map_artifact(h);
        artifact["certificates"] = extra;
        write_json(out, &artifact)?;
    }
    if let (Some(path), Some(cover)) = (&job.cover_out, h.cover()) {
        write_json(path, &CoverFile::from_cover(cover))?;
    }
    if let Some(path) = &job.csv {
        let p = h.complex().ambient_dim();
        if p > MAX_PLOT_DIM {
            return Err(IoError::range("csv", format!("plot export needs ambient dimension <= {MAX_PLOT_DIM}")));
        }
        let q = h.target().ambient_dim();
        let mut text = String::new();
        let head: Vec<String> =
            (1..=p).map(|i| format!("x{i}")).chain((1..=q).map(|i| format!("h{i}"))).collect();
        let _ = writeln!(text, "{},carrier,min_barycentric", head.join(","));
        for x in samples {
            let Ok(c) = h.certify_point(x) else { continue };
            let carrier = c
                .minimal_carrier
                .map(|t| h.complex().simplex(t).vertices().iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(" "))
                .unwrap_or_default();
            let cols: Vec<String> = x.to_f64().iter().chain(&c.h).map(|v| format!("{v:e}")).collect();
            let _ = writeln!(text, "{},{carrier},{:e}", cols.join(","), c.min_barycentric);
        }
        write_text(path, &text)?;
    }
    Ok(())
}

fn run_smooth(job: &JobSpec, certs: &mut Certs, violations: &mut Vec<Violation>) -> Result<(), IoError> {
    let k = read_json::<ComplexFile>(required(&job.complex, "complex")?)?.to_complex()?;
    let l = read_json::<ComplexFile>(required(&job.target, "target")?)?.to_complex()?;
    let file: MapFile = read_json(required(&job.map, "map")?)?;
    let g = file.to_piecewise(&k)?;
    let eta = positive(&job.eta, "eta")?;
    let nu = order(&job.nu)?;
    let carriers = file.carriers(&k, &l)?;
    let samples = samples_of(job, &k)?;
    let h = match smooth_map(&g, &l, carriers, &eta, nu) {
        Ok(h) => h,
        Err(e) => {
            violation(violations, "smoothing", e);
            return Ok(());
        }
    };
    finish_smoothing(job, &h, &samples, certs, violations)
}

fn finish_smoothing(
    job: &JobSpec,
    h: &SmoothedMap,
    samples: &[Point],
    certs: &mut Certs,
    violations: &mut Vec<Violation>,
) -> Result<(), IoError> {
    if let Some(cover) = h.cover() {
        let report = cover.verify();
        certs.insert("covering".into(), json!({ "pieces_checked": report.pieces_checked, "passed": report.passed() }));
        for v in &report.violations {
            violation(violations, &v.property.to_string(), &v.detail);
        }
    }
    let cert = match h.certify(samples) {
        Ok(c) => c,
        Err(e) => {
            violation(violations, "carrier", e);
            return Ok(());
        }
    };
    let seams = match h.smoothness(h.nu()) {
        Ok(s) => s,
        Err(e) => {
            violation(violations, "smoothness", e);
            Vec::new()
        }
    };
    smoothing_certs(certs, violations, &cert, &seams, h.nu());
    write_map_outputs(job, h, samples, Value::Object(certs.clone()))
}

fn run_iota(job: &JobSpec, certs: &mut Certs, violations: &mut Vec<Violation>) -> Result<(), IoError> {
    let k = read_json::<ComplexFile>(required(&job.complex, "complex")?)?.to_complex()?;
    let nu = order(&job.nu)?;
    let n = *required(&job.n, "n")?;
    if n > 40 {
        return Err(IoError::range("n", "at most 40"));
    }
    let samples = samples_of(job, &k)?;
    let i = match iota(&k, nu, n) {
        Ok(i) => i,
        Err(e) => {
            violation(violations, "smoothing", e);
            return Ok(());
        }
    };
    let defect = i.vertex_defect().unwrap_or(f64::INFINITY);
    certs.insert("eta".into(), json!(Rational(pow2_inv(n))));
    certs.insert("vertex_defect".into(), json!(defect));
    if defect > 1e-12 {
        violation(violations, "fixed vertices", format!("|iota(v) - v| = {defect}"));
    }
    finish_smoothing(job, &i.map, &samples, certs, violations)
}

fn run_approximate(job: &JobSpec, certs: &mut Certs, violations: &mut Vec<Violation>) -> Result<(), IoError> {
    let k = read_json::<ComplexFile>(required(&job.complex, "complex")?)?.to_complex()?;
    let l = read_json::<ComplexFile>(required(&job.target, "target")?)?.to_complex()?;
    let f = read_json::<MapFile>(required(&job.map, "map")?)?.to_evaluable(&k)?;
    let eps = positive(&job.eps, "eps")?;
    let nu = order(&job.nu)?;
    let mut options = ApproximationOptions::default();
    if let Some(r) = &job.ratio {
        options.ratio = parse(r).map_err(|e| IoError::parse("ratio", e))?;
        if !options.ratio.is_positive() || options.ratio >= int(1) {
            return Err(IoError::range("ratio", "must lie in (0, 1)"));
        }
    }
    if let Some(cap) = job.cap {
        options.cap = cap;
    }
    let samples = samples_of(job, &k)?;
    let approx = match approximate_map(&k, &l, &f, &eps, nu, &options) {
        Ok(a) => a,
        Err(e) => {
            violation(violations, "approximation", e);
            return Ok(());
        }
    };
    let map = &approx.simplicial.map;
    let spanned = is_simplicial(map.vertex_map(), map.source(), map.target()).is_ok();
    let star = star_condition(map.source(), map.target(), &f, map.vertex_map()).unwrap_or(false);
    certs.insert(
        "simplicial".into(),
        json!({
            "k": approx.simplicial.k,
            "l": approx.simplicial.l,
            "target_mesh_squared": Rational(approx.simplicial.target_mesh2.clone()),
            "spanned_simplex": spanned,
            "star_condition": star,
        }),
    );
    if !spanned {
        violation(violations, "spanned simplex", "vertex map is not simplicial");
    }
    if !star {
        violation(violations, "star condition", "f(star(v)) not inside star(g(v))");
    }
    let cert = match approx.certify(&f, &samples) {
        Ok(c) => c,
        Err(e) => {
            violation(violations, "carrier", e);
            return Ok(());
        }
    };
    let seams = approx.smoothed.smoothness(nu).unwrap_or_default();
    smoothing_certs(certs, violations, &cert, &seams, nu);
    write_map_outputs(job, &approx.smoothed, &samples, Value::Object(certs.clone()))
}

/// Lattice of `[lo, hi]^d` with about `count` points.
fn box_lattice(x: &CoordinateDivisor, count: usize) -> Vec<Vec<Q>> {
    let d = x.dim();
    let bounds = x.bounds().expect("box set on read");
    let mut per = 2usize;
    while per.pow(d as u32) < count {
        per += 1;
    }
    let axis: Vec<Vec<Q>> = bounds
        .iter()
        .map(|(lo, hi)| (0..per).map(|i| lo + (hi - lo) * int(i as i64) / int(per as i64 - 1)).collect())
        .collect();
    let mut out = vec![Vec::new()];
    for coords in &axis {
        out = out.into_iter().flat_map(|p| coords.iter().map(move |c| [p.clone(), vec![c.clone()]].concat())).collect();
    }
    out
}

/// Lattice points with coordinate `j` moved to `eta * i/12` for `|i| <= 6`, for every
/// component `j`: resolves the collars at any `eta`.
fn collar_samples(x: &CoordinateDivisor, grid: &[Vec<Q>], eta: &Q) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for p in grid {
        for &j in x.components() {
            for i in -6..=6 {
                let mut q = p.clone();
                q[j - 1] = eta * int(i) / int(12);
                if x.in_box(&q) {
                    out.push(q);
                }
            }
        }
    }
    out
}

fn run_retraction(job: &JobSpec, certs: &mut Certs, violations: &mut Vec<Violation>) -> Result<(), IoError> {
    let mut file: DivisorFile = read_json(required(&job.divisor, "divisor")?)?;
    let x = file.to_divisor()?;
    if !file.eta.0.is_positive() {
        return Err(IoError::range("eta", "must be positive"));
    }
    let nu = order(&Some(file.nu))?;
    let rho = weak_retraction(&x, &file.eta.0, nu).map_err(|e| IoError::parse("divisor", e))?;
    let count = job.samples.unwrap_or(DEFAULT_SAMPLES);
    let grid = box_lattice(&x, count);
    let collars = collar_samples(&x, &grid[..grid.len().min(count / 4 + 1)], &file.eta.0);
    let domain: Vec<Vec<Q>> = grid.iter().chain(&collars).filter(|p| rho.in_domain(p)).cloned().collect();
    let products = retraction_products(&rho, &domain).map_err(|e| IoError::parse("divisor", e))?;
    certs.insert(
        "image".into(),
        json!({ "samples": products.checked, "exact_zero": products.exact_zero, "max_product": products.max_product }),
    );
    if !products.exact_zero || products.max_product > 1e-12 {
        violation(violations, "image", "rho(W) leaves X");
    }
    let on_x: Vec<Vec<Q>> = grid
        .iter()
        .chain(&collars)
        .flat_map(|p| {
            x.components().iter().map(move |&j| {
                let mut q = p.clone();
                q[j - 1] = Q::zero();
                q
            })
        })
        .collect();
    let (displacement, histogram, preserved) = displacement_and_preservation(&rho, &on_x);
    let bound = to_f64(&file.eta.0) * x.components().len() as f64 / 2.0;
    certs.insert(
        "displacement".into(),
        json!({
            "samples": on_x.len(),
            "sup": displacement,
            "bound": bound,
            "histogram": { "upper": bound, "counts": histogram },
            "components_preserved": preserved,
        }),
    );
    if displacement > bound {
        violation(violations, "displacement", format!("{displacement} > {bound}"));
    }
    if !preserved {
        violation(violations, "components", "some Psi_j moved a point off its component");
    }
    let base: Vec<f64> = x.bounds().expect("box").iter().map(|(lo, hi)| to_f64(&(lo + (hi - lo) * int(7) / int(8)))).collect();
    let seams = rho.seam_smoothness(&base, nu + 1).map_err(|e| IoError::parse("divisor", e))?;
    let min_order = seams.iter().map(|s| s.report.order.map_or(-1, |o| o as i64)).min();
    let sharp = seams.iter().all(|s| s.report.first_failure == Some(nu + 1));
    certs.insert("smoothness".into(), json!({ "seams": seams.len(), "min_order": min_order, "required": nu, "sharp": sharp }));
    for s in seams.iter().filter(|s| !s.report.at_least(nu)) {
        violation(violations, "smoothness", format!("seam x{} = {} has order {:?}", s.j, s.t0, s.report.order));
    }
    file.order = Some(rho.order());
    if let Some(out) = &job.out {
        write_json(out, &file)?;
    }
    if let Some(path) = &job.csv {
        let d = x.dim();
        if d > MAX_PLOT_DIM {
            return Err(IoError::range("csv", format!("plot export needs dimension <= {MAX_PLOT_DIM}")));
        }
        let head: Vec<String> = (1..=d).map(|i| format!("x{i}")).chain((1..=d).map(|i| format!("rho{i}"))).collect();
        let mut text = head.join(",") + "\n";
        for p in &grid {
            let pf: Vec<f64> = p.iter().map(to_f64).collect();
            let y = rho.evaluate_f64(&pf).map_err(|e| IoError::parse("divisor", e))?;
            let cols: Vec<String> = pf.iter().chain(&y).map(|v| format!("{v:e}")).collect();
            text += &(cols.join(",") + "\n");
        }
        write_text(path, &text)?;
    }
    Ok(())
}

fn displacement_and_preservation(rho: &WeakRetraction, on_x: &[Vec<Q>]) -> (f64, Vec<usize>, bool) {
    const BINS: usize = 10;
    let bound = to_f64(rho.eta()) * rho.divisor().components().len() as f64 / 2.0;
    let mut sup: f64 = 0.0;
    let mut histogram = vec![0usize; BINS + 1];
    let mut preserved = true;
    for p in on_x {
        let pf: Vec<f64> = p.iter().map(to_f64).collect();
        let y = rho.evaluate_f64(&pf).expect("dimension checked");
        let d = pf.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        sup = sup.max(d);
        histogram[((d / bound * BINS as f64) as usize).min(BINS)] += 1;
        for s in rho.squashes() {
            let img = s.evaluate(p);
            for &k in rho.divisor().components() {
                if p[k - 1].is_zero() && !img[k - 1].is_zero() {
                    preserved = false;
                }
            }
        }
    }
    (sup, histogram, preserved)
}

fn run_verify(job: &JobSpec, certs: &mut Certs, violations: &mut Vec<Violation>) -> Result<(), IoError> {
    let file: CoverFile = read_json(required(&job.cover, "cover")?)?;
    let cover = file.to_cover()?;
    let report = cover.verify();
    certs.insert(
        "covering".into(),
        json!({ "elements": cover.elements().len(), "pieces_checked": report.pieces_checked, "passed": report.passed() }),
    );
    for v in report.violations {
        let mut detail = format!("simplex {:?}", v.simplex);
        if let Some(o) = v.other {
            let _ = write!(detail, " vs {o:?}");
        }
        let _ = write!(detail, ": {}", v.detail);
        violation(violations, &v.property.to_string(), detail);
    }
    Ok(())
}

/// Builds and serializes a cover directly, for callers that want the artifact only.
pub fn cover_file(k: &SimplicialComplex, delta: &Q) -> Result<CoverFile, IoError> {
    let cover = build_cover(k, delta).map_err(|e| IoError::range("delta", e))?;
    Ok(CoverFile::from_cover(&cover))
}

/// Id of a simplex given by vertex ids.
pub fn simplex_by_ids(k: &SimplicialComplex, ids: &[usize]) -> Option<SimplexId> {
    k.simplex_id(&Simplex::new(ids.iter().map(|v| VertexId(*v)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn rational_forms() {
        for (text, q) in [
            (r#""3/4""#, frac(3, 4)),
            (r#"["-7", "4"]"#, frac(-7, 4)),
            ("5", int(5)),
            (r#""0.05""#, frac(1, 20)),
            (r#"[1, 3]"#, frac(1, 3)),
        ] {
            let r: Rational = serde_json::from_str(text).unwrap();
            assert_eq!(r.0, q);
        }
        assert!(serde_json::from_str::<Rational>("0.5").is_err());
        let back: Rational = serde_json::from_str(&serde_json::to_string(&Rational(frac(-2, 6))).unwrap()).unwrap();
        assert_eq!(back.0, frac(-1, 3));
    }

    #[test]
    fn cover_round_trip() {
        let k = build_complex(vec![Point(vec![int(0)]), Point(vec![int(1)])], &[vec![0, 1]]).unwrap();
        let file = cover_file(&k, &frac(1, 5)).unwrap();
        let text = serde_json::to_string(&file).unwrap();
        let back: CoverFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        let cover = back.to_cover().unwrap();
        assert!(cover.verify().passed());
        assert_eq!(CoverFile::from_cover(&cover), file);
    }

    #[test]
    fn range_errors() {
        let job = JobSpec { command: Some(Command::Iota), ..Default::default() };
        assert!(matches!(run(&job), Err(IoError::Range { .. })));
        assert!(matches!(positive(&Some("-1".into()), "eta"), Err(IoError::Range { .. })));
        assert!(matches!(positive(&Some("x".into()), "eta"), Err(IoError::Parse { .. })));
        assert!(matches!(order(&Some(0)), Err(IoError::Range { .. })));
    }
}
