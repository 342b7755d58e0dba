//! The smoothing operator `H = sum theta_s * g(r_s)`, the maps `iota_n`, pullbacks, and
//! the simplicial-then-smooth approximation pipeline.

use crate::approx::{
    simplicial_approximation, ApproxError, EvaluableMap, PlMap, SimplicialApproximation, SimplicialMap,
    DEFAULT_SUBDIVISION_CAP,
};
use crate::complex::{ComplexError, Point, Simplex, SimplexId, SimplicialComplex, VertexId};
use crate::cover::{build_cover, CoverError, ElementShape, Region, SkeletonCover};
use crate::linalg::FloatFrame;
use crate::rational::{from_f64, frac, pow2_inv, sqrt_above, to_f64, Q};
use crate::sampling::compositions;
use crate::smooth::{partition_of_unity, smoothness_across, smoothstep, PartitionOfUnity, SmoothError};
use num::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

/// Hard failure threshold for float barycentric coordinates.
pub const CARRIER_ABORT: f64 = -1e-6;
/// Reporting tolerance for float barycentric coordinates.
pub const CARRIER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SmootherError {
    #[error("carrier violation on simplex {simplex:?}: {detail}")]
    CarrierViolation { simplex: Vec<usize>, detail: String },
    #[error("no modulus of continuity: {0}")]
    ModulusUnavailable(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Smooth(#[from] SmoothError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
}

/// A polynomial in the ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    terms: Vec<(Vec<u32>, Q)>,
    float: Vec<(Vec<i32>, f64)>,
}

impl Polynomial {
    /// `terms` are `(exponents, coefficient)` pairs.
    pub fn new(terms: Vec<(Vec<u32>, Q)>) -> Self {
        let float = terms.iter().map(|(e, c)| (e.iter().map(|&k| k as i32).collect(), to_f64(c))).collect();
        Polynomial { terms, float }
    }

    pub fn terms(&self) -> &[(Vec<u32>, Q)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: &[Q]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (e, c)| {
            let m = e.iter().zip(x).fold(c.clone(), |m, (k, xi)| m * num::pow(xi.clone(), *k as usize));
            acc + m
        })
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> f64 {
        self.float.iter().map(|(e, c)| e.iter().zip(x).fold(*c, |m, (k, xi)| m * xi.powi(*k))).sum()
    }
}

/// A map given by one polynomial tuple per maximal simplex.
#[derive(Clone, Debug)]
pub struct PolynomialMap {
    complex: SimplicialComplex,
    pieces: Vec<Vec<Polynomial>>,
    lipschitz: Option<Q>,
}

impl PolynomialMap {
    /// `pieces[i]` belongs to `complex.maximal_simplices()[i]`.  Pieces must agree exactly
    /// on shared faces.
    pub fn new(complex: SimplicialComplex, pieces: Vec<Vec<Polynomial>>, lipschitz: Option<Q>) -> Result<Self, SmootherError> {
        let maximal = complex.maximal_simplices().to_vec();
        if pieces.len() != maximal.len() {
            return Err(SmootherError::InvalidMap(format!("{} pieces for {} maximal simplices", pieces.len(), maximal.len())));
        }
        let width = pieces.first().map(|p| p.len()).unwrap_or(0);
        for p in &pieces {
            if p.len() != width || width == 0 {
                return Err(SmootherError::InvalidMap("pieces of mixed or zero target dimension".into()));
            }
            for poly in p {
                if poly.terms().iter().any(|(e, _)| e.len() != complex.ambient_dim()) {
                    return Err(SmootherError::InvalidMap("exponent vector of wrong length".into()));
                }
            }
        }
        let map = PolynomialMap { complex, pieces, lipschitz };
        map.check_agreement()?;
        Ok(map)
    }

    fn check_agreement(&self) -> Result<(), SmootherError> {
        let k = &self.complex;
        let maximal = k.maximal_simplices();
        for i in 0..maximal.len() {
            for j in i + 1..maximal.len() {
                let a = k.simplex(maximal[i]).vertices();
                let b = k.simplex(maximal[j]).vertices();
                let shared: Vec<VertexId> = a.iter().filter(|v| b.contains(v)).copied().collect();
                if shared.is_empty() {
                    continue;
                }
                let degree = self.pieces[i].iter().chain(&self.pieces[j]).map(|p| p.degree()).max().unwrap_or(0).max(1);
                let mut comps = Vec::new();
                compositions(degree as usize, shared.len(), &mut Vec::new(), &mut comps);
                for c in comps {
                    let d = Q::from_integer((degree as i64).into());
                    let mut x = vec![Q::zero(); k.ambient_dim()];
                    for (v, w) in shared.iter().zip(&c) {
                        let w = Q::from_integer((*w as i64).into()) / &d;
                        for (o, ci) in x.iter_mut().zip(k.vertex(*v).iter()) {
                            *o += &w * ci;
                        }
                    }
                    for (p, q) in self.pieces[i].iter().zip(&self.pieces[j]) {
                        if p.evaluate(&x) != q.evaluate(&x) {
                            return Err(SmootherError::InvalidMap(format!(
                                "pieces {i} and {j} disagree at {}",
                                Point(x.clone())
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn pieces(&self) -> &[Vec<Polynomial>] {
        &self.pieces
    }

    pub fn lipschitz(&self) -> Option<&Q> {
        self.lipschitz.as_ref()
    }
}

/// A continuous map on `|K|`, polynomial on each closed simplex.
#[derive(Clone, Debug)]
pub enum PiecewiseMap {
    Pl(PlMap),
    Polynomial(PolynomialMap),
}

impl PiecewiseMap {
    pub fn complex(&self) -> &SimplicialComplex {
        match self {
            PiecewiseMap::Pl(g) => g.domain(),
            PiecewiseMap::Polynomial(g) => g.complex(),
        }
    }

    pub fn target_dim(&self) -> usize {
        match self {
            PiecewiseMap::Pl(g) => g.target_dim(),
            PiecewiseMap::Polynomial(g) => g.pieces[0].len(),
        }
    }

    /// Lipschitz bound: exact Frobenius bound for PL maps, the declared one otherwise.
    pub fn lipschitz(&self) -> Option<Q> {
        match self {
            PiecewiseMap::Pl(g) => Some(sqrt_above(&g.lipschitz2_bound())),
            PiecewiseMap::Polynomial(g) => g.lipschitz.clone(),
        }
    }

    fn piece_index(&self, m: SimplexId) -> usize {
        self.complex().maximal_simplices().iter().position(|x| *x == m).expect("maximal simplex")
    }

    /// Exact value on the closed maximal simplex `m` (the point is not checked to lie in it).
    pub fn evaluate_on(&self, m: SimplexId, x: &[Q]) -> Point {
        match self {
            PiecewiseMap::Pl(g) => {
                let k = g.domain();
                let coords = k.frame(m).coords(x);
                let mut out = vec![Q::zero(); g.target_dim()];
                for (v, c) in k.simplex(m).vertices().iter().zip(&coords) {
                    for (o, y) in out.iter_mut().zip(g.image(*v).iter()) {
                        *o += c * y;
                    }
                }
                Point(out)
            }
            PiecewiseMap::Polynomial(g) => Point(g.pieces[self.piece_index(m)].iter().map(|p| p.evaluate(x)).collect()),
        }
    }

    pub fn evaluate_on_f64(&self, m: SimplexId, x: &[f64]) -> Vec<f64> {
        match self {
            PiecewiseMap::Pl(g) => {
                let k = g.domain();
                let (coords, _) = k.frame(m).float().coords_and_projection(x);
                let values: Vec<&[f64]> = k.simplex(m).vertices().iter().map(|v| g.image_f64(*v)).collect();
                affine_combination(&coords, &values)
            }
            PiecewiseMap::Polynomial(g) => g.pieces[self.piece_index(m)].iter().map(|p| p.evaluate_f64(x)).collect(),
        }
    }

    /// Exact evaluation at a point of `|K|`.
    pub fn evaluate(&self, x: &[Q]) -> Result<Point, ComplexError> {
        let k = self.complex();
        let bc = k.locate(x)?;
        let m = top_coface(k, bc.simplex);
        Ok(self.evaluate_on(m, x))
    }

    /// Float evaluation on the best-fitting maximal simplex.
    pub fn evaluate_f64(&self, x: &[f64]) -> Result<Vec<f64>, ComplexError> {
        let (m, low, normal) = self
            .complex()
            .locate_f64(x)
            .ok_or_else(|| ComplexError::NotInComplex(format!("{x:?}")))?;
        if low < -1e-9 || normal > 1e-9 {
            return Err(ComplexError::NotInComplex(format!("{x:?}")));
        }
        Ok(self.evaluate_on_f64(m, x))
    }
}

/// `y_0 + sum_i c_i (y_i - y_0)`, exact when all `y_i` agree.
fn affine_combination(coords: &[f64], values: &[&[f64]]) -> Vec<f64> {
    let mut out = values[0].to_vec();
    for (c, v) in coords.iter().zip(values).skip(1) {
        for ((o, y), y0) in out.iter_mut().zip(v.iter()).zip(values[0]) {
            *o += c * (y - y0);
        }
    }
    out
}

fn top_coface(k: &SimplicialComplex, s: SimplexId) -> SimplexId {
    let simplex = k.simplex(s);
    *k.maximal_simplices()
        .iter()
        .find(|m| simplex.is_face_of(k.simplex(**m)))
        .expect("every simplex lies in a maximal one")
}

/// `t -> xi_t`, indexed by the simplex ids of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierAssignment {
    carriers: Vec<SimplexId>,
}

impl CarrierAssignment {
    pub fn new(carriers: Vec<SimplexId>) -> Self {
        CarrierAssignment { carriers }
    }

    pub fn get(&self, t: SimplexId) -> SimplexId {
        self.carriers[t.0]
    }

    pub fn as_slice(&self) -> &[SimplexId] {
        &self.carriers
    }

    /// Smallest simplex of `L` containing `g(t)`, for each `t`.
    pub fn from_pl(g: &PlMap, l: &SimplicialComplex) -> Result<Self, SmootherError> {
        let k = g.domain();
        let mut vertex_carriers = Vec::with_capacity(k.num_vertices());
        for v in 0..k.num_vertices() {
            let bc = l.locate(g.image(VertexId(v))).map_err(|_| SmootherError::CarrierViolation {
                simplex: vec![v],
                detail: format!("image {} is not in |L|", g.image(VertexId(v))),
            })?;
            vertex_carriers.push(l.simplex(bc.simplex).vertices().to_vec());
        }
        let mut carriers = Vec::with_capacity(k.simplices().len());
        for t in k.simplex_ids() {
            let ids: Vec<VertexId> =
                k.simplex(t).vertices().iter().flat_map(|v| vertex_carriers[v.0].iter().copied()).collect();
            let span = Simplex::new(ids);
            let xi = l.simplex_id(&span).ok_or_else(|| SmootherError::CarrierViolation {
                simplex: k.simplex(t).vertices().iter().map(|v| v.0).collect(),
                detail: "vertex images do not lie in a common simplex of L".into(),
            })?;
            carriers.push(xi);
        }
        Ok(CarrierAssignment { carriers })
    }

    /// `xi_t = g(t)` for a simplicial map.
    pub fn from_simplicial(map: &SimplicialMap) -> Self {
        CarrierAssignment { carriers: map.source().simplex_ids().map(|t| map.image_simplex(t)).collect() }
    }

    /// Exact check of `g(t) ⊂ xi_t`: at the vertices for PL maps, on a lattice of
    /// resolution `resolution` otherwise.
    pub fn validate(&self, g: &PiecewiseMap, l: &SimplicialComplex, resolution: usize) -> Result<(), SmootherError> {
        let k = g.complex();
        if self.carriers.len() != k.simplices().len() {
            return Err(SmootherError::InvalidMap(format!("{} carriers for {} simplices", self.carriers.len(), k.simplices().len())));
        }
        let res = if matches!(g, PiecewiseMap::Pl(_)) { 1 } else { resolution.max(1) };
        for t in k.simplex_ids() {
            let xi = self.carriers[t.0];
            let frame = l.frame(xi);
            let vs = k.simplex(t).vertices();
            let m = top_coface(k, t);
            let mut comps = Vec::new();
            compositions(res, vs.len(), &mut Vec::new(), &mut comps);
            for c in comps {
                let d = Q::from_integer((res as i64).into());
                let mut x = vec![Q::zero(); k.ambient_dim()];
                for (v, w) in vs.iter().zip(&c) {
                    let w = Q::from_integer((*w as i64).into()) / &d;
                    for (o, ci) in x.iter_mut().zip(k.vertex(*v).iter()) {
                        *o += &w * ci;
                    }
                }
                let y = g.evaluate_on(m, &x);
                if !in_simplex(frame, &y) {
                    return Err(SmootherError::CarrierViolation {
                        simplex: vs.iter().map(|v| v.0).collect(),
                        detail: format!("g({}) = {y} escapes its carrier", Point(x)),
                    });
                }
            }
        }
        Ok(())
    }
}

fn in_simplex(frame: &crate::linalg::AffineFrame, y: &[Q]) -> bool {
    frame.normal2(y).is_zero() && frame.coords(y).iter().all(|c| !c.is_negative())
}

/// `W_t`, described by the cover elements whose closures it avoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierNeighborhood {
    pub simplex: SimplexId,
    pub excluded: Vec<SimplexId>,
}

impl CarrierNeighborhood {
    /// Exact membership for `x ∈ |K|`.
    pub fn contains(&self, cover: &SkeletonCover, x: &[Q]) -> bool {
        self.excluded.iter().all(|s| !cover.element(*s).contains(x, Region::Closure))
    }
}

pub fn carrier_neighborhoods(cover: &SkeletonCover) -> Vec<CarrierNeighborhood> {
    cover
        .complex()
        .simplex_ids()
        .map(|t| CarrierNeighborhood { simplex: t, excluded: cover.carrier_exclusions(t) })
        .collect()
}

#[derive(Clone, Debug)]
enum Retracted {
    Vertex(Vec<f64>),
    Face { frame: FloatFrame, values: Option<Vec<Vec<f64>>>, top: SimplexId },
}

/// `H` with everything needed to evaluate and certify it.
#[derive(Clone, Debug)]
pub struct SmoothedMap {
    source: PiecewiseMap,
    target: SimplicialComplex,
    carriers: CarrierAssignment,
    pou: Option<PartitionOfUnity>,
    eta: Q,
    delta: Q,
    nu: usize,
    retracted: Vec<Retracted>,
    closure_boxes: Vec<(Vec<f64>, Vec<f64>)>,
}

/// `delta = eta / (2 Lip(g))`, or 1 for constant maps.
pub fn uniform_radius(g: &PiecewiseMap, eta: &Q) -> Result<Q, SmootherError> {
    let lip = g.lipschitz().ok_or_else(|| SmootherError::ModulusUnavailable("polynomial map without a Lipschitz bound".into()))?;
    if lip.is_zero() {
        Ok(Q::one())
    } else {
        Ok(eta / (Q::from_integer(2.into()) * lip))
    }
}

/// Smooths `g` with accuracy `eta`, building the cover for the radius of [`uniform_radius`].
pub fn smooth_map(
    g: &PiecewiseMap,
    l: &SimplicialComplex,
    carriers: CarrierAssignment,
    eta: &Q,
    nu: usize,
) -> Result<SmoothedMap, SmootherError> {
    if !eta.is_positive() {
        return Err(SmootherError::InvalidMap(format!("eta must be positive, got {eta}")));
    }
    let delta = uniform_radius(g, eta)?;
    let k = g.complex();
    if k.dim() == 0 {
        carriers.validate(g, l, 1)?;
        return Ok(SmoothedMap {
            source: g.clone(),
            target: l.clone(),
            carriers,
            pou: None,
            eta: eta.clone(),
            delta,
            nu,
            retracted: Vec::new(),
            closure_boxes: Vec::new(),
        });
    }
    let cover = build_cover(k, &delta)?;
    let pou = partition_of_unity(&cover, &smoothstep(nu)?);
    smooth_map_with_cover(g, l, carriers, pou, eta, nu)
}

/// Smooths `g` over a given partition of unity.
pub fn smooth_map_with_cover(
    g: &PiecewiseMap,
    l: &SimplicialComplex,
    carriers: CarrierAssignment,
    pou: PartitionOfUnity,
    eta: &Q,
    nu: usize,
) -> Result<SmoothedMap, SmootherError> {
    carriers.validate(g, l, 4)?;
    let cover = pou.cover();
    if cover.complex() != g.complex() {
        return Err(SmootherError::InvalidMap("cover and map live on different complexes".into()));
    }
    let k = cover.complex();
    let mut retracted = Vec::with_capacity(k.simplices().len());
    let mut closure_boxes = Vec::with_capacity(k.simplices().len());
    for e in cover.elements() {
        let s = e.simplex;
        let top = top_coface(k, s);
        match &e.shape {
            ElementShape::Ball { center, radius } => {
                retracted.push(Retracted::Vertex(g.evaluate_on_f64(top, &center.to_f64())));
                let c = center.to_f64();
                let r = to_f64(radius) * (1.0 + 1e-9);
                closure_boxes.push((c.iter().map(|x| x - r).collect(), c.iter().map(|x| x + r).collect()));
            }
            ElementShape::Tube(t) => {
                let values = match g {
                    PiecewiseMap::Pl(pl) => Some(k.simplex(s).vertices().iter().map(|v| pl.image_f64(*v).to_vec()).collect()),
                    PiecewiseMap::Polynomial(_) => None,
                };
                retracted.push(Retracted::Face { frame: k.frame(s).float().clone(), values, top });
                let (lo, hi) = k.bbox(s);
                let r = to_f64(t.delta()) * (1.0 + 1e-9);
                closure_boxes.push((lo.iter().map(|x| x - r).collect(), hi.iter().map(|x| x + r).collect()));
            }
        }
    }
    let delta = cover.delta().clone();
    Ok(SmoothedMap {
        source: g.clone(),
        target: l.clone(),
        carriers,
        pou: Some(pou),
        eta: eta.clone(),
        delta,
        nu,
        retracted,
        closure_boxes,
    })
}

/// Per-sample certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCertificate {
    pub h: Vec<f64>,
    /// `|H(x) - g(x)|`.
    pub error: f64,
    pub weight_sum: f64,
    pub active: usize,
    /// Smallest `t` with `x ∈ W_t`.
    pub minimal_carrier: Option<SimplexId>,
    /// Minimum float barycentric coordinate of `H(x)` over all `xi_t` with `x ∈ W_t`.
    pub min_barycentric: f64,
    /// Largest distance of `H(x)` from the affine hull of those `xi_t`.
    pub max_normal: f64,
    pub carriers_checked: usize,
}

/// Summary over a sample set.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothingCertificate {
    pub samples: usize,
    pub sup_error: f64,
    pub bound: f64,
    pub min_barycentric: f64,
    pub max_normal: f64,
    pub max_weight_defect: f64,
    pub carriers_checked: usize,
}

impl SmoothingCertificate {
    pub fn error_ok(&self) -> bool {
        self.sup_error < self.bound
    }

    pub fn carrier_ok(&self) -> bool {
        self.min_barycentric >= -CARRIER_TOLERANCE && self.max_normal <= CARRIER_TOLERANCE
    }

    pub fn partition_ok(&self) -> bool {
        self.max_weight_defect <= 1e-12
    }

    pub fn passed(&self) -> bool {
        self.error_ok() && self.carrier_ok() && self.partition_ok()
    }
}

/// One probe line of the smoothness check.
#[derive(Clone, Debug, PartialEq)]
pub struct SeamProbe {
    pub label: String,
    pub point: Vec<f64>,
    pub direction: Vec<f64>,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeamReport {
    pub probe: SeamProbe,
    pub order: Option<usize>,
    pub first_failure: Option<usize>,
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

impl SmoothedMap {
    pub fn source(&self) -> &PiecewiseMap {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.source.complex()
    }

    pub fn carriers(&self) -> &CarrierAssignment {
        &self.carriers
    }

    pub fn partition(&self) -> Option<&PartitionOfUnity> {
        self.pou.as_ref()
    }

    pub fn cover(&self) -> Option<&SkeletonCover> {
        self.pou.as_ref().map(|p| p.cover())
    }

    pub fn eta(&self) -> &Q {
        &self.eta
    }

    pub fn delta(&self) -> &Q {
        &self.delta
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    fn retracted_value(&self, s: SimplexId, x: &[f64]) -> Vec<f64> {
        match &self.retracted[s.0] {
            Retracted::Vertex(v) => v.clone(),
            Retracted::Face { frame, values, top } => {
                let (coords, proj) = frame.coords_and_projection(x);
                match values {
                    Some(vals) => {
                        let values: Vec<&[f64]> = vals.iter().map(|v| &v[..]).collect();
                        affine_combination(&coords, &values)
                    }
                    None => self.source.evaluate_on_f64(*top, &proj),
                }
            }
        }
    }

    /// Exact `g(r_s(x))` for `x ∈ U_s`.
    fn retracted_exact(&self, s: SimplexId, x: &[Q]) -> Result<Point, SmootherError> {
        let cover = self.cover().expect("positive-dimensional complex");
        let r = cover.element(s).retract(x)?;
        Ok(self.source.evaluate_on(top_coface(self.complex(), s), &r))
    }

    /// Active `(s, theta_s(x))`.
    pub fn weights(&self, x: &[f64]) -> Result<Vec<(SimplexId, f64)>, SmootherError> {
        match &self.pou {
            Some(p) => Ok(p.evaluate(x)?),
            None => Ok(Vec::new()),
        }
    }

    fn combine(&self, active: &[(SimplexId, f64)], x: &[f64]) -> Vec<f64> {
        let values: Vec<Vec<f64>> = active.iter().map(|(s, _)| self.retracted_value(*s, x)).collect();
        let anchor = active
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut out = values[anchor].clone();
        for ((_, w), v) in active.iter().zip(&values) {
            for ((o, y), y0) in out.iter_mut().zip(v).zip(&values[anchor]) {
                *o += w * (y - y0);
            }
        }
        out
    }

    /// `H(x)` without checking `x ∈ |K|`.
    pub fn evaluate_f64(&self, x: &[f64]) -> Result<Vec<f64>, SmootherError> {
        if self.pou.is_none() {
            return Ok(self.source.evaluate_f64(x)?);
        }
        let active = self.weights(x)?;
        Ok(self.combine(&active, x))
    }

    /// `H(x)` for an exact point of `|K|`.
    pub fn evaluate(&self, x: &[Q]) -> Result<Vec<f64>, SmootherError> {
        self.complex().locate(x)?;
        if self.pou.is_none() {
            return Ok(self.source.evaluate(x)?.to_f64());
        }
        self.evaluate_f64(&x.iter().map(to_f64).collect::<Vec<_>>())
    }

    /// Exact membership of `x ∈ |K|` in `W_t`.
    pub fn in_neighborhood(&self, t: SimplexId, x: &[Q]) -> bool {
        match self.cover() {
            Some(c) => c.in_carrier_neighborhood(t, x),
            None => true,
        }
    }

    fn closure_elements(&self, x: &[Q], xf: &[f64]) -> Vec<SimplexId> {
        let cover = self.cover().expect("positive-dimensional complex");
        self.closure_boxes
            .iter()
            .enumerate()
            .filter(|(_, (lo, hi))| xf.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *v >= l - 1e-12 && *v <= h + 1e-12))
            .map(|(i, _)| SimplexId(i))
            .filter(|s| cover.element(*s).contains(x, Region::Closure))
            .collect()
    }

    /// Evaluates `H` at `x ∈ |K|` and checks the convexity argument exactly: every active
    /// element's `U` contains `x`, and every active value `g(r_s(x))` lies in `xi_t` for
    /// each `t` with `x ∈ W_t`.
    pub fn certify_point(&self, x: &[Q]) -> Result<PointCertificate, SmootherError> {
        let k = self.complex();
        let xf: Vec<f64> = x.iter().map(to_f64).collect();
        let g = self.source.evaluate(x)?.to_f64();
        if self.pou.is_none() {
            return Ok(PointCertificate {
                h: g.clone(),
                error: 0.0,
                weight_sum: 1.0,
                active: 1,
                minimal_carrier: k.locate(x).ok().map(|b| b.simplex),
                min_barycentric: 0.0,
                max_normal: 0.0,
                carriers_checked: 0,
            });
        }
        let cover = self.cover().expect("positive-dimensional complex");
        let active = self.weights(&xf)?;
        let h = self.combine(&active, &xf);
        let weight_sum: f64 = active.iter().map(|(_, w)| w).sum();
        let mut exact_values = Vec::with_capacity(active.len());
        for (s, _) in &active {
            if !cover.element(*s).contains(x, Region::Open) {
                return Err(SmootherError::CarrierViolation {
                    simplex: self.ids(*s),
                    detail: format!("bump positive outside U at {}", Point(x.to_vec())),
                });
            }
            exact_values.push(self.retracted_exact(*s, x)?);
        }
        let error = h.iter().zip(&g).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let closures = self.closure_elements(x, &xf);
        let span = Simplex::new(closures.iter().flat_map(|s| k.simplex(*s).vertices().iter().copied()).collect());
        let minimal = k.simplex_id(&span);
        let mut min_bary = f64::INFINITY;
        let mut max_normal: f64 = 0.0;
        let mut checked = 0;
        if let Some(t0) = minimal {
            let hq: Vec<Q> = h.iter().map(|c| from_f64(*c)).collect();
            let cofaces = k.star(span.vertices()[0])?.iter().copied().filter(|t| span.is_face_of(k.simplex(*t)));
            for t in cofaces {
                let xi = self.carriers.get(t);
                let frame = self.target.frame(xi);
                for y in &exact_values {
                    if !in_simplex(frame, y) {
                        return Err(SmootherError::CarrierViolation {
                            simplex: self.ids(t),
                            detail: format!("active value {y} at {} leaves xi_t", Point(x.to_vec())),
                        });
                    }
                }
                let coords = frame.coords(&hq);
                let low = coords.iter().map(to_f64).fold(f64::INFINITY, f64::min);
                let normal = to_f64(&frame.normal2(&hq)).sqrt();
                if low < CARRIER_ABORT || normal > -CARRIER_ABORT {
                    return Err(SmootherError::CarrierViolation {
                        simplex: self.ids(t),
                        detail: format!("H({}) has barycentric coordinate {low}, normal {normal}", Point(x.to_vec())),
                    });
                }
                min_bary = min_bary.min(low);
                max_normal = max_normal.max(normal);
                checked += 1;
            }
            debug_assert!(span.is_face_of(k.simplex(t0)));
        }
        Ok(PointCertificate {
            h,
            error,
            weight_sum,
            active: active.len(),
            minimal_carrier: minimal,
            min_barycentric: min_bary,
            max_normal,
            carriers_checked: checked,
        })
    }

    fn ids(&self, s: SimplexId) -> Vec<usize> {
        self.complex().simplex(s).vertices().iter().map(|v| v.0).collect()
    }

    /// Certifies every sample in parallel.
    pub fn certify(&self, samples: &[Point]) -> Result<SmoothingCertificate, SmootherError> {
        let certs: Vec<PointCertificate> =
            samples.par_iter().map(|x| self.certify_point(x)).collect::<Result<_, _>>()?;
        Ok(summarize(&certs, to_f64(&self.eta)))
    }

    /// Probe lines across the faces of `K` and the bump seams along edges.
    pub fn seam_probes(&self) -> Vec<SeamProbe> {
        let Some(cover) = self.cover() else { return Vec::new() };
        let k = self.complex();
        let length = feature_length(cover);
        let mut out = Vec::new();
        for f in k.simplex_ids() {
            if k.maximal_simplices().contains(&f) {
                continue;
            }
            let fs = k.simplex(f);
            let cofaces: Vec<SimplexId> =
                k.maximal_simplices().iter().copied().filter(|m| fs.is_face_of(k.simplex(*m))).collect();
            let bf = k.barycenter(f).to_f64();
            for pair in cofaces.windows(2) {
                let b1 = k.barycenter(pair[0]).to_f64();
                let b2 = k.barycenter(pair[1]).to_f64();
                out.push(SeamProbe {
                    label: format!("face {:?}", self.ids(f)),
                    point: bf.clone(),
                    direction: unit(b2.iter().zip(&b1).map(|(a, b)| a - b).collect()),
                    length,
                });
            }
        }
        for e in k.simplices_of_dim(1) {
            let vs = k.simplex(e).vertices();
            let (a, b) = (k.vertex(vs[0]).to_f64(), k.vertex(vs[1]).to_f64());
            let len = a.iter().zip(&b).map(|(x, y)| (y - x) * (y - x)).sum::<f64>().sqrt();
            let dir: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (y - x) / len).collect();
            let at = |s: f64| -> Vec<f64> { a.iter().zip(&dir).map(|(p, d)| p + s * d).collect() };
            let mut stations = Vec::new();
            for (end, sign) in [(0usize, 1.0), (1usize, -1.0)] {
                let v = k.simplex_id(&Simplex::new(vec![vs[end]])).expect("vertex simplex");
                let r = to_f64(cover.element(v).radius());
                for frac in [1.0 / 3.0, 2.0 / 3.0] {
                    let s = if sign > 0.0 { r * frac } else { len - r * frac };
                    stations.push((format!("ball {} seam", vs[end].0), s));
                }
            }
            if let Some(eps) = cover.element(e).epsilon() {
                let a3 = to_f64(eps) / 2.0 / 3.0;
                for m in [4.0, 5.0] {
                    stations.push((format!("tube {:?} seam", self.ids(e)), len * m * a3));
                    stations.push((format!("tube {:?} seam", self.ids(e)), len * (1.0 - m * a3)));
                }
            }
            for (label, s) in stations {
                if s > 0.0 && s < len {
                    out.push(SeamProbe { label, point: at(s), direction: dir.clone(), length });
                }
            }
        }
        out
    }

    /// Measured smoothness along every probe line.
    pub fn smoothness(&self, nu_max: usize) -> Result<Vec<SeamReport>, SmootherError> {
        self.seam_probes()
            .into_par_iter()
            .map(|probe| {
                let r = smoothness_across(
                    |y| self.evaluate_f64(y).map_err(|e| e.to_string()),
                    &probe.point,
                    &probe.direction,
                    nu_max,
                    probe.length,
                )?;
                Ok(SeamReport { probe, order: r.order, first_failure: r.first_failure })
            })
            .collect()
    }
}

/// The smallest transition width among the bumps, restricted to widths that matter
/// inside `|K|`.
pub fn feature_length(cover: &SkeletonCover) -> f64 {
    let k = cover.complex();
    let mut best = f64::INFINITY;
    for e in cover.elements() {
        let w = match &e.shape {
            ElementShape::Ball { radius, .. } => to_f64(radius) / 3.0,
            ElementShape::Tube(t) => {
                let (lo, hi) = k.bbox(e.simplex);
                let span = lo.iter().zip(hi).map(|(a, b)| b - a).fold(0.0, f64::max);
                let base = to_f64(&t.base().threshold()) / 3.0 * span;
                if k.simplex(e.simplex).dim() < k.dim() {
                    base.min(to_f64(t.delta()) / 3.0)
                } else {
                    base
                }
            }
        };
        best = best.min(w);
    }
    best
}

fn summarize(certs: &[PointCertificate], bound: f64) -> SmoothingCertificate {
    SmoothingCertificate {
        samples: certs.len(),
        sup_error: certs.iter().map(|c| c.error).fold(0.0, f64::max),
        bound,
        min_barycentric: certs.iter().map(|c| c.min_barycentric).fold(f64::INFINITY, f64::min),
        max_normal: certs.iter().map(|c| c.max_normal).fold(0.0, f64::max),
        max_weight_defect: certs.iter().map(|c| (c.weight_sum - 1.0).abs()).fold(0.0, f64::max),
        carriers_checked: certs.iter().map(|c| c.carriers_checked).sum(),
    }
}

/// `iota_n`: the identity of `|K|` smoothed with `eta = 2^-n`.
#[derive(Clone, Debug)]
pub struct IotaMap {
    pub map: SmoothedMap,
    pub n: u32,
}

pub fn iota(k: &SimplicialComplex, nu: usize, n: u32) -> Result<IotaMap, SmootherError> {
    let g = PlMap::identity(k.clone());
    let carriers = CarrierAssignment::new(k.simplex_ids().collect());
    let map = smooth_map(&PiecewiseMap::Pl(g), k, carriers, &pow2_inv(n), nu)?;
    Ok(IotaMap { map, n })
}

impl IotaMap {
    pub fn evaluate_f64(&self, x: &[f64]) -> Result<Vec<f64>, SmootherError> {
        self.map.evaluate_f64(x)
    }

    /// `2^-n`.
    pub fn bound(&self) -> Q {
        pow2_inv(self.n)
    }

    /// Largest `|iota(v) - v|` over the vertices.
    pub fn vertex_defect(&self) -> Result<f64, SmootherError> {
        let k = self.map.complex();
        let mut worst: f64 = 0.0;
        for v in k.vertices() {
            let vf = v.to_f64();
            let y = self.map.evaluate_f64(&vf)?;
            worst = worst.max(y.iter().zip(&vf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
        Ok(worst)
    }

    /// Radius around each vertex on which `iota` is constant.
    pub fn plateau_radius(&self, v: VertexId) -> Option<Q> {
        let cover = self.map.cover()?;
        let s = cover.complex().simplex_id(&Simplex::new(vec![v]))?;
        Some(cover.element(s).radius() * frac(1, 3))
    }
}

/// `f ∘ iota`, evaluated with the piece of `f` on the maximal simplex holding `x`.
#[derive(Clone, Debug)]
pub struct Pullback {
    f: PiecewiseMap,
    iota: IotaMap,
}

pub fn pullback_smooth(f: &PiecewiseMap, iota: &IotaMap) -> Result<Pullback, SmootherError> {
    if f.complex() != iota.map.complex() {
        return Err(SmootherError::InvalidMap("f and iota live on different complexes".into()));
    }
    Ok(Pullback { f: f.clone(), iota: iota.clone() })
}

impl Pullback {
    pub fn evaluate_f64(&self, x: &[f64]) -> Result<Vec<f64>, SmootherError> {
        let k = self.f.complex();
        let (m, _, _) = k.locate_f64(x).ok_or_else(|| ComplexError::NotInComplex(format!("{x:?}")))?;
        let y = self.iota.evaluate_f64(x)?;
        Ok(self.f.evaluate_on_f64(m, &y))
    }

    pub fn iota(&self) -> &IotaMap {
        &self.iota
    }

    /// `Lip(f) 2^-n`, bounding `sup |f∘iota - f|`.
    pub fn convergence_bound(&self) -> Result<Q, SmootherError> {
        let lip = self.f.lipschitz().ok_or_else(|| SmootherError::ModulusUnavailable("f has no Lipschitz bound".into()))?;
        Ok(lip * self.iota.bound())
    }
}

/// Budget split and subdivision cap of [`approximate_map`].
#[derive(Clone, Debug)]
pub struct ApproximationOptions {
    /// Share of `eps` given to the simplicial stage.
    pub ratio: Q,
    pub cap: usize,
}

impl Default for ApproximationOptions {
    fn default() -> Self {
        ApproximationOptions { ratio: frac(1, 2), cap: DEFAULT_SUBDIVISION_CAP }
    }
}

/// The two stages of [`approximate_map`].
#[derive(Clone, Debug)]
pub struct MapApproximation {
    pub simplicial: SimplicialApproximation,
    pub smoothed: SmoothedMap,
    pub eps: Q,
}

/// Simplicial approximation at `ratio * eps`, then smoothing at the remaining budget.
pub fn approximate_map(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    f: &EvaluableMap,
    eps: &Q,
    nu: usize,
    options: &ApproximationOptions,
) -> Result<MapApproximation, SmootherError> {
    if !eps.is_positive() || !options.ratio.is_positive() || options.ratio >= Q::one() {
        return Err(SmootherError::InvalidMap(format!("eps {eps} and ratio {} out of range", options.ratio)));
    }
    let eps1 = eps * &options.ratio;
    let eta = eps - &eps1;
    let simplicial = simplicial_approximation(k, l, f, &eps1, options.cap)?;
    let g = PiecewiseMap::Pl(simplicial.map.to_pl());
    let carriers = CarrierAssignment::from_simplicial(&simplicial.map);
    let smoothed = smooth_map(&g, simplicial.map.target(), carriers, &eta, nu)?;
    Ok(MapApproximation { simplicial, smoothed, eps: eps.clone() })
}

impl MapApproximation {
    pub fn evaluate_f64(&self, x: &[f64]) -> Result<Vec<f64>, SmootherError> {
        self.smoothed.evaluate_f64(x)
    }

    /// Certificates of the smoothing stage, with `sup_error` and `bound` measured against
    /// `f` and `eps`.
    pub fn certify(&self, f: &EvaluableMap, samples: &[Point]) -> Result<SmoothingCertificate, SmootherError> {
        let certs: Vec<PointCertificate> = samples
            .par_iter()
            .map(|x| {
                let mut c = self.smoothed.certify_point(x)?;
                let fx = f.evaluate(x)?.to_f64();
                c.error = c.h.iter().zip(&fx).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                Ok(c)
            })
            .collect::<Result<_, SmootherError>>()?;
        Ok(summarize(&certs, to_f64(&self.eps)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::rational::int;
    use crate::sampling::lattice;

    fn split() -> SimplicialComplex {
        let pts = [int(0), frac(1, 2), int(1)].into_iter().map(|x| Point(vec![x])).collect();
        build_complex(pts, &[vec![0, 1], vec![1, 2]]).unwrap()
    }

    fn unit() -> SimplicialComplex {
        build_complex(vec![Point(vec![int(0)]), Point(vec![int(1)])], &[vec![0, 1]]).unwrap()
    }

    #[test]
    fn identity_on_split_segment() {
        let k = split();
        let g = PiecewiseMap::Pl(PlMap::identity(k.clone()));
        let carriers = CarrierAssignment::from_pl(&PlMap::identity(k.clone()), &k).unwrap();
        assert_eq!(carriers.as_slice(), k.simplex_ids().collect::<Vec<_>>().as_slice());
        let h = smooth_map(&g, &k, carriers, &frac(1, 10), 2).unwrap();
        let cert = h.certify(&lattice(&k, 2000)).unwrap();
        assert!(cert.passed(), "{cert:?}");
        assert!(cert.sup_error < 0.1);
    }

    #[test]
    fn constants_are_reproduced_exactly() {
        let k = split();
        let c = Point(vec![frac(1, 3), frac(2, 7)]);
        let l = build_complex(vec![c.clone()], &[]).unwrap();
        let g = PlMap::constant(k.clone(), c.clone());
        let carriers = CarrierAssignment::from_pl(&g, &l).unwrap();
        let h = smooth_map(&PiecewiseMap::Pl(g), &l, carriers, &frac(1, 10), 1).unwrap();
        for i in 0..=200 {
            assert_eq!(h.evaluate_f64(&[i as f64 / 200.0]).unwrap(), c.to_f64());
        }
    }

    #[test]
    fn tent_smoothing_is_smooth_at_the_kink() {
        let k = split();
        let l = unit();
        let tent = PlMap::new(k.clone(), vec![Point(vec![int(0)]), Point(vec![int(1)]), Point(vec![int(0)])]).unwrap();
        let carriers = CarrierAssignment::from_pl(&tent, &l).unwrap();
        let h = smooth_map(&PiecewiseMap::Pl(tent), &l, carriers, &frac(1, 20), 2).unwrap();
        let cert = h.certify(&lattice(&k, 2000)).unwrap();
        assert!(cert.passed(), "{cert:?}");
        for r in h.smoothness(2).unwrap() {
            assert!(r.order.is_some_and(|o| o >= 2), "{r:?}");
        }
    }

    #[test]
    fn iota_fixes_vertices() {
        let k = split();
        let i4 = iota(&k, 1, 4).unwrap();
        assert!(i4.vertex_defect().unwrap() < 1e-12);
        let cert = i4.map.certify(&lattice(&k, 1000)).unwrap();
        assert!(cert.sup_error < 1.0 / 16.0);
        let r = to_f64(&i4.plateau_radius(VertexId(1)).unwrap());
        assert_eq!(i4.evaluate_f64(&[0.5 + 0.99 * r]).unwrap(), vec![0.5]);
    }

    #[test]
    fn pullback_of_kink() {
        let k = split();
        let f = PlMap::new(k.clone(), vec![Point(vec![frac(1, 2)]), Point(vec![int(0)]), Point(vec![frac(1, 2)])]).unwrap();
        let f = PiecewiseMap::Pl(f);
        let i = iota(&k, 2, 5).unwrap();
        let p = pullback_smooth(&f, &i).unwrap();
        let delta = to_f64(i.map.delta());
        let r = crate::smooth::smoothness_order(|t| p.evaluate_f64(&[t]).map_err(|e| e.to_string()), 0.5, 3, delta).unwrap();
        assert!(r.at_least(2), "{r:?}");
        assert_eq!(p.convergence_bound().unwrap(), frac(1, 32));
    }

    #[test]
    fn polynomial_pieces() {
        let k = split();
        let sq = Polynomial::new(vec![(vec![2], int(1))]);
        let lin = Polynomial::new(vec![(vec![1], int(1)), (vec![0], frac(-1, 4))]);
        let map = PolynomialMap::new(k.clone(), vec![vec![sq.clone()], vec![lin]], Some(int(2))).unwrap();
        let g = PiecewiseMap::Polynomial(map);
        assert_eq!(g.evaluate(&[frac(3, 4)]).unwrap(), Point(vec![frac(1, 2)]));
        let bad = Polynomial::new(vec![(vec![1], int(1))]);
        assert!(PolynomialMap::new(k.clone(), vec![vec![sq.clone()], vec![bad]], None).is_err());
        let no_lip = PolynomialMap::new(k.clone(), vec![vec![sq.clone()], vec![sq]], None).unwrap();
        let l = unit();
        let carriers = CarrierAssignment::new(k.simplex_ids().map(|_| SimplexId(2)).collect());
        let err = smooth_map(&PiecewiseMap::Polynomial(no_lip), &l, carriers.clone(), &frac(1, 10), 1);
        assert!(matches!(err, Err(SmootherError::ModulusUnavailable(_))));
        let h = smooth_map(&g, &l, carriers, &frac(1, 10), 1).unwrap();
        assert!(h.certify(&lattice(&k, 500)).unwrap().passed());
    }

    #[test]
    fn carrier_neighborhood_of_a_vertex() {
        let cover = build_cover(&unit(), &frac(1, 5)).unwrap();
        let w = carrier_neighborhoods(&cover);
        assert_eq!(w[0].excluded, vec![SimplexId(1), SimplexId(2)]);
        assert!(w[2].excluded.is_empty());
        assert!(w[0].contains(&cover, &[frac(1, 100)]));
        assert!(!w[0].contains(&cover, &[frac(1, 2)]));
    }

    #[test]
    fn zero_dimensional_short_circuit() {
        let k = build_complex(vec![Point(vec![int(2)])], &[]).unwrap();
        let g = PlMap::identity(k.clone());
        let carriers = CarrierAssignment::from_pl(&g, &k).unwrap();
        let h = smooth_map(&PiecewiseMap::Pl(g), &k, carriers, &frac(1, 10), 1).unwrap();
        assert_eq!(h.evaluate(&[int(2)]).unwrap(), vec![2.0]);
        assert!(h.cover().is_none());
    }
}
