//! Simplicial maps, the star condition and finite simplicial approximation.

use crate::complex::{ComplexError, Point, SimplexId, SimplicialComplex, VertexId};
use crate::linalg::{dist2, dot, hull_dist2, inverse, sub, Mat};
use crate::lp::{maximize, LpOutcome};
use crate::rational::{sqrt_above, to_f64, Q};
use num::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Default cap on the source subdivision level.
pub const DEFAULT_SUBDIVISION_CAP: usize = 12;

/// Errors of the simplicial approximation module.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ApproxError {
    /// A source simplex whose image vertices span no target simplex.
    #[error("simplex {0:?} is not mapped onto a simplex of the target")]
    NotSimplicial(Vec<usize>),
    /// No valid vertex assignment up to the subdivision cap.
    #[error("no simplicial approximation with k <= {cap}; vertex {vertex} has no admissible image")]
    SubdivisionLimit { cap: usize, vertex: String },
    /// Sampling could not certify the star condition of an opaque map.
    #[error("star condition undecided near vertex {vertex}")]
    Undecided { vertex: String },
    /// Malformed map data.
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A map given by its values at the vertices of a complex, extended affinely.
#[derive(Clone, Debug)]
pub struct PlMap {
    domain: SimplicialComplex,
    images: Vec<Point>,
    images_f64: Vec<Vec<f64>>,
}

impl PlMap {
    pub fn new(domain: SimplicialComplex, images: Vec<Point>) -> Result<Self, ApproxError> {
        if images.len() != domain.num_vertices() {
            return Err(ApproxError::InvalidMap(format!(
                "{} images for {} vertices",
                images.len(),
                domain.num_vertices()
            )));
        }
        if images.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(ApproxError::InvalidMap("images of mixed dimension".into()));
        }
        let images_f64 = images.iter().map(|p| p.to_f64()).collect();
        Ok(PlMap { domain, images, images_f64 })
    }

    /// The identity of `|K|`.
    pub fn identity(domain: SimplicialComplex) -> Self {
        let images = domain.vertices().to_vec();
        PlMap::new(domain, images).expect("one image per vertex")
    }

    /// The constant map with value `c`.
    pub fn constant(domain: SimplicialComplex, c: Point) -> Self {
        let images = vec![c; domain.num_vertices()];
        PlMap::new(domain, images).expect("one image per vertex")
    }

    pub fn domain(&self) -> &SimplicialComplex {
        &self.domain
    }

    pub fn image(&self, v: VertexId) -> &Point {
        &self.images[v.0]
    }

    pub fn image_f64(&self, v: VertexId) -> &[f64] {
        &self.images_f64[v.0]
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn target_dim(&self) -> usize {
        self.images.first().map_or(0, |p| p.len())
    }

    /// `g(x) = sum w_i g(v_i)` over the carrier of `x`.
    pub fn evaluate(&self, x: &[Q]) -> Result<Point, ComplexError> {
        let bc = self.domain.locate(x)?;
        let mut out = vec![Q::zero(); self.target_dim()];
        for (v, w) in self.domain.simplex(bc.simplex).vertices().iter().zip(&bc.weights) {
            for (o, c) in out.iter_mut().zip(self.images[v.0].iter()) {
                *o += w * c;
            }
        }
        Ok(Point(out))
    }

    /// Float evaluation through an exact location of `x`.
    pub fn evaluate_f64(&self, x: &[f64]) -> Result<Vec<f64>, ComplexError> {
        Ok(self.evaluate(&Point::from_f64(x))?.to_f64())
    }

    /// Upper bound on the squared Lipschitz constant: the largest squared Frobenius norm
    /// of the linear part over all simplices.
    pub fn lipschitz2_bound(&self) -> Q {
        let mut best = Q::zero();
        for &m in self.domain.maximal_simplices() {
            let vs = self.domain.simplex(m).vertices();
            if vs.len() < 2 {
                continue;
            }
            let p0 = self.domain.vertex(vs[0]);
            let w0 = &self.images[vs[0].0];
            let basis: Vec<Vec<Q>> = vs[1..].iter().map(|v| sub(self.domain.vertex(*v), p0)).collect();
            let imgs: Vec<Vec<Q>> = vs[1..].iter().map(|v| sub(&self.images[v.0], w0)).collect();
            let d = basis.len();
            let gram: Mat = (0..d).map(|i| (0..d).map(|j| dot(&basis[i], &basis[j])).collect()).collect();
            let ginv = inverse(&gram).expect("nondegenerate simplex");
            let mut f2 = Q::zero();
            for i in 0..d {
                for j in 0..d {
                    f2 += &ginv[i][j] * dot(&imgs[i], &imgs[j]);
                }
            }
            if f2 > best {
                best = f2;
            }
        }
        best
    }
}

type Evaluator = dyn Fn(&[Q]) -> Point + Send + Sync;

/// A continuous map known only through evaluation and a Lipschitz constant.
#[derive(Clone)]
pub struct OpaqueMap {
    eval: Arc<Evaluator>,
    lipschitz: Q,
}

impl fmt::Debug for OpaqueMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OpaqueMap").field("lipschitz", &self.lipschitz).finish()
    }
}

impl OpaqueMap {
    pub fn new(lipschitz: Q, eval: impl Fn(&[Q]) -> Point + Send + Sync + 'static) -> Self {
        OpaqueMap { eval: Arc::new(eval), lipschitz }
    }

    pub fn lipschitz(&self) -> &Q {
        &self.lipschitz
    }

    pub fn evaluate(&self, x: &[Q]) -> Point {
        (self.eval)(x)
    }
}

/// A continuous map `|K| -> |L|` as accepted by the approximation algorithms.
#[derive(Clone, Debug)]
pub enum EvaluableMap {
    Pl(PlMap),
    Opaque(OpaqueMap),
}

impl EvaluableMap {
    pub fn evaluate(&self, x: &[Q]) -> Result<Point, ComplexError> {
        match self {
            EvaluableMap::Pl(g) => g.evaluate(x),
            EvaluableMap::Opaque(g) => Ok(g.evaluate(x)),
        }
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> Result<Vec<f64>, ComplexError> {
        Ok(self.evaluate(&Point::from_f64(x))?.to_f64())
    }
}

/// Checks the spanned-simplex condition; on failure returns the offending source simplex.
pub fn is_simplicial(vertex_map: &[VertexId], k: &SimplicialComplex, l: &SimplicialComplex) -> Result<(), SimplexId> {
    for id in k.simplex_ids() {
        let image = crate::complex::Simplex::new(k.simplex(id).vertices().iter().map(|v| vertex_map[v.0]).collect());
        if image.vertices().iter().any(|w| w.0 >= l.num_vertices()) || l.simplex_id(&image).is_none() {
            return Err(id);
        }
    }
    Ok(())
}

/// A vertex map satisfying the spanned-simplex condition.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: Vec<VertexId>,
}

impl SimplicialMap {
    pub fn new(source: SimplicialComplex, target: SimplicialComplex, vertex_map: Vec<VertexId>) -> Result<Self, ApproxError> {
        if vertex_map.len() != source.num_vertices() {
            return Err(ApproxError::InvalidMap("vertex map is not total".into()));
        }
        is_simplicial(&vertex_map, &source, &target)
            .map_err(|id| ApproxError::NotSimplicial(source.simplex(id).vertices().iter().map(|v| v.0).collect()))?;
        Ok(SimplicialMap { source, target, vertex_map })
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    pub fn image(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    /// The target simplex spanned by the images of a source simplex.
    pub fn image_simplex(&self, id: SimplexId) -> SimplexId {
        let s = crate::complex::Simplex::new(self.source.simplex(id).vertices().iter().map(|v| self.vertex_map[v.0]).collect());
        self.target.simplex_id(&s).expect("checked at construction")
    }

    /// The affine extension.
    pub fn to_pl(&self) -> PlMap {
        let images = self.vertex_map.iter().map(|w| self.target.vertex(*w).clone()).collect();
        PlMap::new(self.source.clone(), images).expect("one image per vertex")
    }
}

/// Target simplices whose union is `|L|` minus the open star of `w`.
fn star_complement(l: &SimplicialComplex, w: VertexId) -> Vec<Vec<&[Q]>> {
    l.maximal_simplices()
        .iter()
        .filter_map(|&m| {
            let vs = l.simplex(m).vertices();
            let kept: Vec<&[Q]> = vs.iter().filter(|v| **v != w).map(|v| &l.vertex(*v)[..]).collect();
            (!kept.is_empty()).then_some(kept)
        })
        .collect()
}

fn float_box(points: &[&[Q]]) -> (Vec<f64>, Vec<f64>) {
    let n = points[0].len();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for p in points {
        for k in 0..n {
            let c = to_f64(&p[k]);
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    (lo, hi)
}

fn boxes_within(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>), gap: f64) -> bool {
    (0..a.0.len()).all(|k| a.0[k] <= b.1[k] + gap && b.0[k] <= a.1[k] + gap)
}

/// Whether some point with all `alpha > 0` over `sigma` maps into `rho`.
///
/// `pieces` lists `(tau, images of tau)`: `f` is affine on each `tau`.
fn open_image_meets(sigma: &[&[Q]], tau: Option<(&[&[Q]], &[&[Q]])>, image: &[&[Q]], rho: &[&[Q]]) -> bool {
    let ns = sigma.len();
    let nr = rho.len();
    let nt = tau.map_or(0, |(t, _)| t.len());
    // variables: t, s (ns), gamma (nt), beta (nr)
    let n = 1 + ns + nt + nr;
    let mut rows: Mat = Vec::new();
    let mut rhs = Vec::new();
    let zero_row = || vec![Q::zero(); n];
    let mut r = zero_row();
    r[0] = Q::from_integer((ns as i64).into());
    for i in 0..ns {
        r[1 + i] = Q::one();
    }
    rows.push(r);
    rhs.push(Q::one());
    let mut r = zero_row();
    for j in 0..nr {
        r[1 + ns + nt + j] = Q::one();
    }
    rows.push(r);
    rhs.push(Q::one());
    match tau {
        None => {
            let q = image[0].len();
            for k in 0..q {
                let mut r = zero_row();
                for i in 0..ns {
                    r[0] += &image[i][k];
                    r[1 + i] = image[i][k].clone();
                }
                for j in 0..nr {
                    r[1 + ns + j] = -&rho[j][k];
                }
                rows.push(r);
                rhs.push(Q::zero());
            }
        }
        Some((tau_pts, tau_imgs)) => {
            let mut r = zero_row();
            for g in 0..nt {
                r[1 + ns + g] = Q::one();
            }
            rows.push(r);
            rhs.push(Q::one());
            for k in 0..sigma[0].len() {
                let mut r = zero_row();
                for i in 0..ns {
                    r[0] += &sigma[i][k];
                    r[1 + i] = sigma[i][k].clone();
                }
                for g in 0..nt {
                    r[1 + ns + g] = -&tau_pts[g][k];
                }
                rows.push(r);
                rhs.push(Q::zero());
            }
            for k in 0..tau_imgs[0].len() {
                let mut r = zero_row();
                for g in 0..nt {
                    r[1 + ns + g] = tau_imgs[g][k].clone();
                }
                for j in 0..nr {
                    r[1 + ns + nt + j] = -&rho[j][k];
                }
                rows.push(r);
                rhs.push(Q::zero());
            }
        }
    }
    let mut cost = vec![Q::zero(); n];
    cost[0] = Q::one();
    matches!(maximize(&cost, &rows, &rhs), LpOutcome::Optimal(t) if t.is_positive())
}

/// Number of lattice refinements tried when certifying opaque maps.
const OPAQUE_LATTICE: [usize; 6] = [2, 4, 8, 16, 32, 64];

/// `f(Star(v, K)) ⊂ Star(w, L)` for one vertex pair.
///
/// `Ok(false)` is a proof of failure; `Err` means sampling was inconclusive.
pub fn star_condition_at(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    f: &EvaluableMap,
    v: VertexId,
    w: VertexId,
) -> Result<bool, ApproxError> {
    let complement = star_complement(l, w);
    let boxes: Vec<_> = complement.iter().map(|c| float_box(c)).collect();
    let star = k.star(v)?;
    match f {
        EvaluableMap::Pl(g) => {
            for &sigma in star {
                let pts = k.points(sigma);
                let containing = g.domain().maximal_simplices().iter().copied().find(|&tau| {
                    pts.iter().all(|p| g.domain().locate_in(tau, p).is_some())
                });
                let pieces: Vec<(Option<SimplexId>, Vec<Point>)> = match containing {
                    Some(_) => vec![(None, pts.iter().map(|p| g.evaluate(p)).collect::<Result<_, _>>()?)],
                    None => {
                        let sb = float_box(&pts);
                        g.domain()
                            .maximal_simplices()
                            .iter()
                            .filter(|&&tau| {
                                let (lo, hi) = g.domain().bbox(tau);
                                boxes_within(&sb, &(lo.to_vec(), hi.to_vec()), 1e-12)
                            })
                            .map(|&tau| {
                                let imgs = g.domain().simplex(tau).vertices().iter().map(|u| g.image(*u).clone()).collect();
                                (Some(tau), imgs)
                            })
                            .collect()
                    }
                };
                for (tau, imgs) in &pieces {
                    let img_refs: Vec<&[Q]> = imgs.iter().map(|p| &p[..]).collect();
                    let ib = float_box(&img_refs);
                    let tau_pts = tau.map(|t| g.domain().points(t));
                    for (rho, rb) in complement.iter().zip(&boxes) {
                        if !boxes_within(&ib, rb, 1e-9) {
                            continue;
                        }
                        let hit = match &tau_pts {
                            None => open_image_meets(&pts, None, &img_refs, rho),
                            Some(tp) => open_image_meets(&pts, Some((tp, &img_refs)), &img_refs, rho),
                        };
                        if hit {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
        EvaluableMap::Opaque(g) => {
            let lip = g.lipschitz().clone();
            'lattice: for &n in &OPAQUE_LATTICE {
                for &sigma in star {
                    let pts = k.points(sigma);
                    let mut diam2 = Q::zero();
                    for a in &pts {
                        for b in &pts {
                            let d = dist2(a, b);
                            if d > diam2 {
                                diam2 = d;
                            }
                        }
                    }
                    let radius = sqrt_above(&diam2) / Q::from_integer((n as i64).into());
                    let reach = &lip * &radius;
                    let reach2 = &reach * &reach;
                    for weights in lattice(pts.len(), n) {
                        let y: Vec<Q> = (0..k.ambient_dim())
                            .map(|c| {
                                weights.iter().zip(&pts).fold(Q::zero(), |acc, (wi, p)| {
                                    acc + Q::new((*wi as i64).into(), (n as i64).into()) * &p[c]
                                })
                            })
                            .collect();
                        let z = g.evaluate(&y);
                        let interior = weights.iter().all(|&wi| wi > 0);
                        let zf = z.to_f64();
                        let zb = (zf.clone(), zf);
                        let reach_f = to_f64(&reach) + 1e-9;
                        let mut clear = true;
                        for (rho, rb) in complement.iter().zip(&boxes) {
                            if !boxes_within(&zb, rb, reach_f) {
                                continue;
                            }
                            let d = hull_dist2(&[&z[..]], rho);
                            if d.is_zero() && interior {
                                return Ok(false);
                            }
                            if d <= reach2 {
                                clear = false;
                            }
                        }
                        if !clear {
                            continue 'lattice;
                        }
                    }
                }
                return Ok(true);
            }
            Err(ApproxError::Undecided { vertex: k.vertex(v).to_string() })
        }
    }
}

/// Barycentric lattice points of resolution `n` on a simplex with `m` vertices.
fn lattice(m: usize, n: usize) -> Vec<Vec<usize>> {
    if m == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in lattice(m - 1, n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The star condition for every vertex of `K`.
pub fn star_condition(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    f: &EvaluableMap,
    vertex_map: &[VertexId],
) -> Result<bool, ApproxError> {
    for v in 0..k.num_vertices() {
        if !star_condition_at(k, l, f, VertexId(v), vertex_map[v])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Output of [`simplicial_approximation`].
#[derive(Clone, Debug)]
pub struct SimplicialApproximation {
    /// Source subdivision level.
    pub k: usize,
    /// Target subdivision level.
    pub l: usize,
    /// The map `K^(k) -> L^(l)`.
    pub map: SimplicialMap,
    /// Squared mesh of `L^(l)`.
    pub target_mesh2: Q,
}

/// Smallest `l` with `mesh(L^(l)) < eps`, and that subdivision.
pub fn target_level(l: &SimplicialComplex, eps: &Q, cap: usize) -> Result<(usize, SimplicialComplex, Q), ApproxError> {
    let eps2 = eps * eps;
    let mut cur = l.clone();
    for level in 0..=cap {
        let m = cur.mesh_size()?.squared;
        if m < eps2 {
            return Ok((level, cur, m));
        }
        cur = cur.barycentric_subdivide(1);
    }
    Err(ApproxError::SubdivisionLimit { cap, vertex: "target mesh".into() })
}

/// Finds `k`, `l` and a simplicial approximation `g: K^(k) -> L^(l)` of `f` with
/// `sup |g - f| <= mesh(L^(l)) < eps`.
pub fn simplicial_approximation(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    f: &EvaluableMap,
    eps: &Q,
    cap: usize,
) -> Result<SimplicialApproximation, ApproxError> {
    let (level, target, target_mesh2) = target_level(l, eps, cap)?;
    let mut source = k.clone();
    let mut last_failure = String::new();
    let mut undecided = false;
    for depth in 0..=cap {
        if depth > 0 {
            source = source.barycentric_subdivide(1);
        }
        let mut assignment = Vec::with_capacity(source.num_vertices());
        let mut failed = None;
        undecided = false;
        for vi in 0..source.num_vertices() {
            let v = VertexId(vi);
            let fv = f.evaluate(source.vertex(v))?;
            let carrier = target.locate(&fv)?;
            let mut candidates: Vec<(Q, VertexId)> = target
                .simplex(carrier.simplex)
                .vertices()
                .iter()
                .map(|w| (dist2(&fv, target.vertex(*w)), *w))
                .collect();
            candidates.sort();
            let mut chosen = None;
            for (_, w) in candidates {
                match star_condition_at(&source, &target, f, v, w) {
                    Ok(true) => {
                        chosen = Some(w);
                        break;
                    }
                    Ok(false) => {}
                    Err(ApproxError::Undecided { .. }) => undecided = true,
                    Err(e) => return Err(e),
                }
            }
            match chosen {
                Some(w) => assignment.push(w),
                None => {
                    failed = Some(source.vertex(v).to_string());
                    break;
                }
            }
        }
        match failed {
            None => {
                let map = SimplicialMap::new(source, target, assignment)?;
                return Ok(SimplicialApproximation { k: depth, l: level, map, target_mesh2 });
            }
            Some(v) => last_failure = v,
        }
    }
    if undecided {
        Err(ApproxError::Undecided { vertex: last_failure })
    } else {
        Err(ApproxError::SubdivisionLimit { cap, vertex: last_failure })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::rational::{frac, int};

    fn pt(x: Q) -> Point {
        Point(vec![x])
    }

    fn unit() -> SimplicialComplex {
        build_complex(vec![pt(int(0)), pt(int(1))], &[vec![0, 1]]).unwrap()
    }

    fn split() -> SimplicialComplex {
        build_complex(vec![pt(int(0)), pt(frac(1, 2)), pt(int(1))], &[vec![0, 1], vec![1, 2]]).unwrap()
    }

    fn tent() -> PlMap {
        PlMap::new(split(), vec![pt(int(0)), pt(int(1)), pt(int(0))]).unwrap()
    }

    #[test]
    fn evaluate_pl_examples() {
        let id = PlMap::identity(unit());
        assert_eq!(id.evaluate(&[frac(1, 3)]).unwrap(), pt(frac(1, 3)));
        let c = PlMap::constant(unit(), pt(frac(2, 7)));
        assert_eq!(c.evaluate(&[frac(5, 9)]).unwrap(), pt(frac(2, 7)));
        assert_eq!(tent().evaluate(&[frac(1, 4)]).unwrap(), pt(frac(1, 2)));
        assert!(tent().evaluate(&[int(3)]).is_err());
    }

    #[test]
    fn simpliciality_examples() {
        let k = unit();
        assert!(is_simplicial(&[VertexId(0), VertexId(1)], &k, &k).is_ok());
        let two_points = build_complex(vec![pt(int(0)), pt(int(1))], &[]).unwrap();
        let err = is_simplicial(&[VertexId(0), VertexId(1)], &k, &two_points).unwrap_err();
        assert_eq!(k.simplex(err).dim(), 1);
        let tri = build_complex(
            vec![Point(vec![int(0), int(0)]), Point(vec![int(1), int(0)]), Point(vec![int(0), int(1)])],
            &[vec![0, 1, 2]],
        )
        .unwrap();
        assert!(is_simplicial(&[VertexId(0), VertexId(0), VertexId(1)], &tri, &tri).is_ok());
    }

    #[test]
    fn lipschitz_bound_of_tent() {
        assert_eq!(tent().lipschitz2_bound(), int(4));
        assert_eq!(PlMap::identity(unit()).lipschitz2_bound(), int(1));
    }

    #[test]
    fn star_condition_tent_fails_unsubdivided() {
        let f = EvaluableMap::Pl(tent());
        assert!(!star_condition(&unit(), &unit(), &f, &[VertexId(0), VertexId(0)]).unwrap());
    }

    #[test]
    fn star_condition_identity_on_refinement() {
        let k1 = unit().barycentric_subdivide(1);
        let f = EvaluableMap::Pl(PlMap::identity(unit()));
        // K^(1) vertices: 0, 1, then 1/2 as vertex 2
        assert_eq!(k1.vertex(VertexId(2)), &pt(frac(1, 2)));
        assert!(star_condition(&k1, &unit(), &f, &[VertexId(0), VertexId(1), VertexId(0)]).unwrap());
        let id = EvaluableMap::Pl(PlMap::identity(unit()));
        assert!(star_condition(&unit(), &unit(), &id, &[VertexId(0), VertexId(1)]).unwrap());
    }

    #[test]
    fn identity_approximation_levels() {
        let f = EvaluableMap::Pl(PlMap::identity(unit()));
        let sa = simplicial_approximation(&unit(), &unit(), &f, &frac(3, 10), DEFAULT_SUBDIVISION_CAP).unwrap();
        assert_eq!(sa.l, 2);
        assert_eq!(sa.target_mesh2, frac(1, 16));
        assert_eq!(sa.k, 2);
        for v in 0..sa.map.source().num_vertices() {
            let w = sa.map.image(VertexId(v));
            assert_eq!(sa.map.source().vertex(VertexId(v)), sa.map.target().vertex(w));
        }
    }

    #[test]
    fn constant_at_vertex_needs_no_subdivision() {
        let f = EvaluableMap::Pl(PlMap::constant(unit(), pt(int(1))));
        let sa = simplicial_approximation(&unit(), &unit(), &f, &int(2), DEFAULT_SUBDIVISION_CAP).unwrap();
        assert_eq!(sa.k, 0);
        assert!(sa.map.vertex_map().iter().all(|w| w == &VertexId(1)));
    }

    #[test]
    fn tent_approximation_example() {
        let f = EvaluableMap::Pl(tent());
        let sa = simplicial_approximation(&split(), &unit(), &f, &frac(6, 10), DEFAULT_SUBDIVISION_CAP).unwrap();
        assert_eq!((sa.k, sa.l), (1, 1));
        let g = sa.map.to_pl();
        for (x, y) in [(int(0), int(0)), (frac(1, 2), int(1)), (int(1), int(0))] {
            assert_eq!(g.evaluate(&[x]).unwrap(), pt(y));
        }
    }

    #[test]
    fn tent_on_unsplit_source() {
        let f = EvaluableMap::Pl(tent());
        let sa = simplicial_approximation(&unit(), &unit(), &f, &frac(6, 10), DEFAULT_SUBDIVISION_CAP).unwrap();
        assert!(star_condition(sa.map.source(), sa.map.target(), &f, sa.map.vertex_map()).unwrap());
    }

    #[test]
    fn opaque_identity_is_certified() {
        let f = EvaluableMap::Opaque(OpaqueMap::new(int(1), |x: &[Q]| Point(x.to_vec())));
        let sa = simplicial_approximation(&unit(), &unit(), &f, &frac(3, 10), DEFAULT_SUBDIVISION_CAP).unwrap();
        assert_eq!(sa.l, 2);
        let exact = EvaluableMap::Pl(PlMap::identity(unit()));
        assert!(star_condition(sa.map.source(), sa.map.target(), &exact, sa.map.vertex_map()).unwrap());
    }

    #[test]
    fn subdivision_cap_reported() {
        let f = EvaluableMap::Pl(tent());
        let err = simplicial_approximation(&split(), &unit(), &f, &frac(1, 10), 0).unwrap_err();
        assert!(matches!(err, ApproxError::SubdivisionLimit { .. }));
    }
}
