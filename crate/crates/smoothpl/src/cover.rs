//! Shrinkings, widening tubes, and the skeleton-induction covering of a complex.

use crate::complex::{ComplexError, Point, SimplexId, SimplicialComplex, VertexId};
use crate::linalg::{dist2, hull_dist2, AffineFrame};
use crate::rational::{frac, sqrt_below, to_f64, Q};
use itertools::Itertools;
use num::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

/// Slab depth certified at each level, as a multiple of the shrink threshold `eps/(d+1)`.
pub const SLAB_FACTOR: (i64, i64) = (3, 2);
/// Bumps vanish below this multiple of the shrink threshold.
pub const CORE_BASE: (i64, i64) = (4, 3);
/// Bumps vanish beyond this fraction of a tube or ball radius.
pub const CORE_RADIUS: (i64, i64) = (2, 3);
/// Recursion cap of the coverage certificate.
pub const COVERAGE_DEPTH: usize = 16;
/// Smallest shrink parameter tried before giving up.
const EPSILON_FLOOR: u32 = 64;

fn q((n, d): (i64, i64)) -> Q {
    frac(n, d)
}

/// Errors of the cover builder.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    /// Shrink parameter outside `(0, 1)`.
    #[error("shrink parameter {0} is not in (0, 1)")]
    EpsilonOutOfRange(String),
    /// The point is not in the tube.
    #[error("point {0} is outside the tube")]
    OutsideTube(String),
    /// No admissible parameters before the halving floor.
    #[error("no admissible cover parameters for simplex {simplex:?} at level {level} (delta {delta})")]
    DeltaTooLarge { simplex: Vec<usize>, level: usize, delta: String },
    /// `delta` must be positive.
    #[error("delta must be positive, got {0}")]
    NonPositiveDelta(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `h_eps(sigma^0)`: the open simplex shrunk by `1 - eps` about its barycenter.
#[derive(Clone, Debug)]
pub struct ShrunkSimplex {
    base: Vec<Point>,
    epsilon: Q,
    frame: AffineFrame,
}

/// Shrinks a simplex given by its vertices.
pub fn shrink(base: &[Point], epsilon: &Q) -> Result<ShrunkSimplex, CoverError> {
    if !epsilon.is_positive() || epsilon >= &Q::one() {
        return Err(CoverError::EpsilonOutOfRange(epsilon.to_string()));
    }
    let refs: Vec<&[Q]> = base.iter().map(|p| &p[..]).collect();
    let frame = AffineFrame::new(&refs).ok_or(ComplexError::AffineDependence((0..base.len()).collect()))?;
    Ok(ShrunkSimplex { base: base.to_vec(), epsilon: epsilon.clone(), frame })
}

impl ShrunkSimplex {
    pub fn epsilon(&self) -> &Q {
        &self.epsilon
    }

    pub fn base(&self) -> &[Point] {
        &self.base
    }

    pub fn frame(&self) -> &AffineFrame {
        &self.frame
    }

    /// The barycentric threshold `eps/(d+1)`: the open shrink is `{min lambda > threshold}`.
    pub fn threshold(&self) -> Q {
        &self.epsilon / Q::from_integer((self.base.len() as i64).into())
    }

    pub fn barycenter(&self) -> Point {
        let n = Q::from_integer((self.base.len() as i64).into());
        Point((0..self.base[0].len()).map(|k| self.base.iter().fold(Q::zero(), |a, p| a + &p[k]) / &n).collect())
    }

    /// Vertices `b + (1 - eps)(v - b)` of the closure.
    pub fn vertices(&self) -> Vec<Point> {
        shrink_points(&self.base, &self.epsilon)
    }

    /// Exact membership in the open shrunk simplex.
    pub fn contains(&self, x: &[Q]) -> bool {
        let t = self.threshold();
        self.frame.normal2(x).is_zero() && self.frame.coords(x).iter().all(|c| c > &t)
    }
}

fn shrink_points(base: &[Point], epsilon: &Q) -> Vec<Point> {
    let n = Q::from_integer((base.len() as i64).into());
    let b: Vec<Q> = (0..base[0].len()).map(|k| base.iter().fold(Q::zero(), |a, p| a + &p[k]) / &n).collect();
    let ratio = Q::one() - epsilon;
    base.iter().map(|v| Point(v.iter().zip(&b).map(|(vi, bi)| bi + &ratio * (vi - bi)).collect())).collect()
}

/// `{x : proj(x) in sigma^0_eps, |x - proj(x)| < delta}`.
#[derive(Clone, Debug)]
pub struct WideningTube {
    base: ShrunkSimplex,
    delta: Q,
}

impl WideningTube {
    pub fn new(base: ShrunkSimplex, delta: Q) -> Self {
        WideningTube { base, delta }
    }

    pub fn base(&self) -> &ShrunkSimplex {
        &self.base
    }

    pub fn delta(&self) -> &Q {
        &self.delta
    }

    /// Membership in the tube with its threshold scaled by `base` and its radius by `radius`.
    pub fn contains_scaled(&self, x: &[Q], base: &Q, radius: &Q, closed: bool) -> bool {
        let t = self.base.threshold() * base;
        let r = &self.delta * radius;
        let n2 = self.base.frame.normal2(x);
        let coords = self.base.frame.coords(x);
        if closed {
            n2 <= &r * &r && coords.iter().all(|c| c >= &t)
        } else {
            n2 < &r * &r && coords.iter().all(|c| c > &t)
        }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.contains_scaled(x, &Q::one(), &Q::one(), false)
    }

    /// The orthogonal projection onto the base's affine hull.
    pub fn retract(&self, x: &[Q]) -> Result<Point, CoverError> {
        if !self.contains(x) {
            return Err(CoverError::OutsideTube(Point(x.to_vec()).to_string()));
        }
        Ok(Point(self.base.frame.project(x)))
    }
}

/// The open set `U` of one cover element.
#[derive(Clone, Debug)]
pub enum ElementShape {
    /// `B(v, radius)`; the retraction is constant.
    Ball { center: Point, radius: Q },
    /// A widening tube; the retraction is the orthogonal projection.
    Tube(WideningTube),
}

/// One open simplex's `U`, `V = U ∩ s^0` and retraction.
#[derive(Clone, Debug)]
pub struct CoverElement {
    pub simplex: SimplexId,
    pub shape: ElementShape,
}

impl CoverElement {
    /// Membership in `U` (`open`), its closure, or the bump support (`core`).
    pub fn contains(&self, x: &[Q], region: Region) -> bool {
        match &self.shape {
            ElementShape::Ball { center, radius } => {
                let d2 = dist2(x, center);
                match region {
                    Region::Open => d2 < radius * radius,
                    Region::Closure => d2 <= radius * radius,
                    Region::Core => {
                        let r = radius * q(CORE_RADIUS);
                        d2 < &r * &r
                    }
                }
            }
            ElementShape::Tube(t) => match region {
                Region::Open => t.contains(x),
                Region::Closure => t.contains_scaled(x, &Q::one(), &Q::one(), true),
                Region::Core => t.contains_scaled(x, &q(CORE_BASE), &q(CORE_RADIUS), false),
            },
        }
    }

    /// `r(x)`.
    pub fn retract(&self, x: &[Q]) -> Result<Point, CoverError> {
        match &self.shape {
            ElementShape::Ball { center, radius } => {
                if dist2(x, center) < radius * radius {
                    Ok(center.clone())
                } else {
                    Err(CoverError::OutsideTube(Point(x.to_vec()).to_string()))
                }
            }
            ElementShape::Tube(t) => t.retract(x),
        }
    }

    /// Tube radius or ball radius.
    pub fn radius(&self) -> &Q {
        match &self.shape {
            ElementShape::Ball { radius, .. } => radius,
            ElementShape::Tube(t) => t.delta(),
        }
    }

    /// Shrink parameter of a tube.
    pub fn epsilon(&self) -> Option<&Q> {
        match &self.shape {
            ElementShape::Ball { .. } => None,
            ElementShape::Tube(t) => Some(t.base().epsilon()),
        }
    }

    /// Vertices of `Cl(V)`.
    pub fn closed_core_points(&self) -> Vec<Point> {
        match &self.shape {
            ElementShape::Ball { center, .. } => vec![center.clone()],
            ElementShape::Tube(t) => t.base().vertices(),
        }
    }
}

/// Which set of an element a membership test refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Open,
    Closure,
    /// Where the element's bump is positive.
    Core,
}

/// The covering `{U_s}` of `|K|`, one element per open simplex.
#[derive(Clone, Debug)]
pub struct SkeletonCover {
    complex: SimplicialComplex,
    delta: Q,
    elements: Vec<CoverElement>,
}

/// A convex polytope given by vertices, and the simplex whose element should hold it.
#[derive(Clone, Debug)]
struct Piece {
    points: Vec<Vec<Q>>,
    owner: SimplexId,
}

impl SkeletonCover {
    /// Assembles a cover from explicit elements without checking it.
    pub fn from_elements(complex: SimplicialComplex, delta: Q, elements: Vec<CoverElement>) -> Self {
        SkeletonCover { complex, delta, elements }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn delta(&self) -> &Q {
        &self.delta
    }

    pub fn elements(&self) -> &[CoverElement] {
        &self.elements
    }

    pub fn element(&self, s: SimplexId) -> &CoverElement {
        &self.elements[s.0]
    }

    /// Slab depth `c = (3/2) eps/(d+1)` used in the decomposition of `s`.
    fn slab(&self, s: SimplexId) -> Q {
        match &self.elements[s.0].shape {
            ElementShape::Tube(t) => t.base().threshold() * q(SLAB_FACTOR),
            ElementShape::Ball { .. } => Q::zero(),
        }
    }

    /// Convex pieces whose union is the closed simplex `s`.
    ///
    /// The middle piece belongs to `s`; every other piece is a lift of a facet piece
    /// towards the opposite vertex and belongs to the facet piece's owner.
    fn pieces(&self, s: SimplexId, slab: Option<&Q>) -> Vec<Piece> {
        let k = &self.complex;
        let vs = k.simplex(s).vertices().to_vec();
        if vs.len() == 1 {
            return vec![Piece { points: vec![k.vertex(vs[0]).to_vec()], owner: s }];
        }
        let c = slab.cloned().unwrap_or_else(|| self.slab(s));
        let base: Vec<Point> = vs.iter().map(|v| k.vertex(*v).clone()).collect();
        let inner_eps = &c * Q::from_integer((vs.len() as i64).into());
        let mut out = vec![Piece { points: shrink_points(&base, &inner_eps).into_iter().map(|p| p.0).collect(), owner: s }];
        for (i, apex) in vs.iter().enumerate() {
            let facet: Vec<VertexId> = vs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| *v).collect();
            let fid = k.simplex_id(&crate::complex::Simplex::new(facet)).expect("face closure");
            let apex = k.vertex(*apex);
            for piece in self.pieces(fid, None) {
                let mut points = piece.points.clone();
                for p in &piece.points {
                    points.push(p.iter().zip(apex.iter()).map(|(x, a)| (Q::one() - &c) * x + &c * a).collect());
                }
                out.push(Piece { points, owner: piece.owner });
            }
        }
        out
    }

    fn piece_inside(&self, piece: &[Vec<Q>], s: SimplexId, region: Region) -> bool {
        let e = &self.elements[s.0];
        piece.iter().all(|p| e.contains(p, region))
    }

    /// Lower-level check for `s`: every slab piece lies in the core of a proper face.
    fn slabs_covered(&self, s: SimplexId, slab: &Q) -> bool {
        let faces: Vec<SimplexId> = self.complex.faces(s).into_iter().filter(|f| *f != s).collect();
        self.pieces(s, Some(slab)).iter().skip(1).all(|piece| {
            self.piece_inside(&piece.points, piece.owner, Region::Core)
                || faces.iter().any(|f| self.piece_inside(&piece.points, *f, Region::Core))
        })
    }

    /// Checks (i) covering, (ii) separation and (iii) displacement, plus coverage by the
    /// bump supports.
    pub fn verify(&self) -> CoverReport {
        let mut report = CoverReport::default();
        self.verify_covering(Region::Open, &mut report);
        self.verify_covering(Region::Core, &mut report);
        self.verify_separation(&mut report);
        for e in &self.elements {
            if e.radius() >= &self.delta || !e.radius().is_positive() {
                report.violations.push(CoverViolation {
                    property: Property::Displacement,
                    simplex: self.ids(e.simplex),
                    other: None,
                    detail: format!("radius {} not in (0, delta = {})", e.radius(), self.delta),
                });
            }
        }
        report
    }

    fn ids(&self, s: SimplexId) -> Vec<usize> {
        self.complex.simplex(s).vertices().iter().map(|v| v.0).collect()
    }

    fn verify_covering(&self, region: Region, report: &mut CoverReport) {
        let parts: Vec<CoverReport> =
            self.complex.maximal_simplices().par_iter().map(|&m| self.covering_of(m, region)).collect();
        for part in parts {
            report.pieces_checked += part.pieces_checked;
            report.violations.extend(part.violations);
        }
    }

    fn covering_of(&self, m: SimplexId, region: Region) -> CoverReport {
        let property = if region == Region::Open { Property::Covering } else { Property::Support };
        let mut report = CoverReport::default();
        let faces = self.complex.faces(m);
        for piece in self.pieces(m, None) {
            report.pieces_checked += 1;
            if self.piece_inside(&piece.points, piece.owner, region)
                || faces.iter().any(|f| self.piece_inside(&piece.points, *f, region))
            {
                continue;
            }
            let simplices: Vec<Vec<Vec<Q>>> = piece
                .points
                .iter()
                .cloned()
                .combinations((self.complex.simplex(m).dim() + 1).min(piece.points.len()))
                .collect();
            for simplex in simplices {
                if let Err(detail) = self.certify(&simplex, &faces, region, 0, &mut report) {
                    report.violations.push(CoverViolation { property, simplex: self.ids(m), other: None, detail });
                    return report;
                }
            }
        }
        report
    }

    fn certify(
        &self,
        simplex: &[Vec<Q>],
        candidates: &[SimplexId],
        region: Region,
        depth: usize,
        report: &mut CoverReport,
    ) -> Result<(), String> {
        report.pieces_checked += 1;
        if candidates.iter().any(|f| self.piece_inside(simplex, *f, region)) {
            return Ok(());
        }
        for p in simplex {
            if !candidates.iter().any(|f| self.elements[f.0].contains(p, region)) {
                return Err(format!("uncovered point {}", Point(p.clone())));
            }
        }
        if depth >= COVERAGE_DEPTH {
            return Err(format!("undecided at depth {depth} near {}", Point(simplex[0].clone())));
        }
        for child in subdivide_points(simplex) {
            self.certify(&child, candidates, region, depth + 1, report)?;
        }
        Ok(())
    }

    fn verify_separation(&self, report: &mut CoverReport) {
        let parts: Vec<Vec<CoverViolation>> = self.elements.par_iter().map(|e| self.separation_of(e)).collect();
        report.violations.extend(parts.into_iter().flatten());
    }

    fn separation_of(&self, e: &CoverElement) -> Vec<CoverViolation> {
        let k = &self.complex;
        let s = k.simplex(e.simplex);
        let core = e.closed_core_points();
        let core_refs: Vec<&[Q]> = core.iter().map(|p| &p[..]).collect();
        let reach = to_f64(e.radius());
        let (lo, hi) = point_box(&core);
        let mut out = Vec::new();
        for t in k.simplex_ids() {
            if s.is_face_of(k.simplex(t)) {
                continue;
            }
            let (tl, th) = k.bbox(t);
            let gap2: f64 = (0..k.ambient_dim()).map(|i| (tl[i] - hi[i]).max(lo[i] - th[i]).max(0.0).powi(2)).sum();
            if gap2.sqrt() > reach * (1.0 + 1e-9) + 1e-300 {
                continue;
            }
            let d2 = hull_dist2(&core_refs, &k.points(t));
            if d2 <= e.radius() * e.radius() {
                out.push(CoverViolation {
                    property: Property::Separation,
                    simplex: self.ids(e.simplex),
                    other: Some(self.ids(t)),
                    detail: format!("squared distance {d2} <= squared radius {}", e.radius() * e.radius()),
                });
            }
        }
        out
    }

    /// Membership of `x` in `W_t = |K| \ ∪{Cl(U_s) : s not a face of t}`, given `x ∈ |K|`.
    pub fn in_carrier_neighborhood(&self, t: SimplexId, x: &[Q]) -> bool {
        let ts = self.complex.simplex(t);
        self.elements.iter().all(|e| self.complex.simplex(e.simplex).is_face_of(ts) || !e.contains(x, Region::Closure))
    }

    /// The elements excluded from `W_t`.
    pub fn carrier_exclusions(&self, t: SimplexId) -> Vec<SimplexId> {
        let ts = self.complex.simplex(t);
        self.elements
            .iter()
            .filter(|e| !self.complex.simplex(e.simplex).is_face_of(ts))
            .map(|e| e.simplex)
            .collect()
    }
}

fn point_box(points: &[Point]) -> (Vec<f64>, Vec<f64>) {
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

/// Barycentric subdivision of a simplex given by (possibly dependent) points.
fn subdivide_points(simplex: &[Vec<Q>]) -> Vec<Vec<Vec<Q>>> {
    let n = simplex.len();
    let bary = |idx: &[usize]| -> Vec<Q> {
        let m = Q::from_integer((idx.len() as i64).into());
        (0..simplex[0].len()).map(|k| idx.iter().fold(Q::zero(), |a, &i| a + &simplex[i][k]) / &m).collect()
    };
    (0..n)
        .permutations(n)
        .map(|perm| (1..=n).map(|len| bary(&perm[..len])).collect())
        .collect()
}

/// Which property of the covering lemma a violation concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    /// (i) the `U`'s cover `|K|`.
    Covering,
    /// (ii) `Cl(U_s) ∩ t = ∅` when `s^0 ∩ t = ∅`.
    Separation,
    /// (iii) `|x - r(x)| < delta`.
    Displacement,
    /// The bump supports cover `|K|`.
    Support,
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Property::Covering => "(i) covering",
            Property::Separation => "(ii) separation",
            Property::Displacement => "(iii) displacement",
            Property::Support => "(i) bump support covering",
        })
    }
}

/// One failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverViolation {
    pub property: Property,
    pub simplex: Vec<usize>,
    pub other: Option<Vec<usize>>,
    pub detail: String,
}

/// Result of [`SkeletonCover::verify`].
#[derive(Clone, Debug, Default)]
pub struct CoverReport {
    pub violations: Vec<CoverViolation>,
    pub pieces_checked: usize,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, property: Property) -> usize {
        self.violations.iter().filter(|v| v.property == property).count()
    }
}

/// Runs the skeleton induction for `K` and radius `delta`.
pub fn build_cover(k: &SimplicialComplex, delta: &Q) -> Result<SkeletonCover, CoverError> {
    if k.num_vertices() == 0 {
        return Err(ComplexError::EmptyComplex.into());
    }
    if !delta.is_positive() {
        return Err(CoverError::NonPositiveDelta(delta.to_string()));
    }
    let delta2 = delta * delta;
    let mut elements: Vec<Option<CoverElement>> = vec![None; k.simplices().len()];
    for v in k.simplices_of_dim(0) {
        let vid = k.simplex(v).vertices()[0];
        let center = k.vertex(vid).clone();
        let mut best = delta2.clone();
        for &m in k.maximal_simplices() {
            let opposite: Vec<&[Q]> =
                k.simplex(m).vertices().iter().filter(|u| **u != vid).map(|u| &k.vertex(*u)[..]).collect();
            if opposite.is_empty() {
                continue;
            }
            let (lo, hi) = k.bbox(m);
            let cf = center.to_f64();
            let gap2: f64 = (0..k.ambient_dim()).map(|i| (lo[i] - cf[i]).max(cf[i] - hi[i]).max(0.0).powi(2)).sum();
            if gap2 > to_f64(&best) * (1.0 + 1e-9) {
                continue;
            }
            let d2 = hull_dist2(&[&center[..]], &opposite);
            if d2 < best {
                best = d2;
            }
        }
        let radius = sqrt_below(&(best / Q::from_integer(4.into())));
        elements[v.0] = Some(CoverElement { simplex: v, shape: ElementShape::Ball { center, radius } });
    }
    let mut cover = SkeletonCover {
        complex: k.clone(),
        delta: delta.clone(),
        elements: elements.iter().map(|e| e.clone().unwrap_or_else(placeholder)).collect(),
    };
    for level in 1..=k.dim() {
        let ids: Vec<SimplexId> = k.simplices_of_dim(level).collect();
        if ids.is_empty() {
            continue;
        }
        let mut epsilon = frac(1, 2);
        let mut halvings = 1;
        let slab_of = |eps: &Q| eps * q(SLAB_FACTOR) / Q::from_integer(((level + 1) as i64).into());
        while !ids.iter().all(|&s| cover.slabs_covered(s, &slab_of(&epsilon))) {
            epsilon /= Q::from_integer(2.into());
            halvings += 1;
            if halvings > EPSILON_FLOOR {
                let s = ids.iter().copied().find(|&s| !cover.slabs_covered(s, &slab_of(&epsilon))).unwrap_or(ids[0]);
                return Err(CoverError::DeltaTooLarge { simplex: cover.ids(s), level, delta: delta.to_string() });
            }
        }
        let mut min_gap2: Option<Q> = None;
        let half = delta / Q::from_integer(2.into());
        for &s in &ids {
            let base: Vec<Point> = k.simplex(s).vertices().iter().map(|v| k.vertex(*v).clone()).collect();
            let core = shrink_points(&base, &epsilon);
            let core_refs: Vec<&[Q]> = core.iter().map(|p| &p[..]).collect();
            let (lo, hi) = point_box(&core);
            let ss = k.simplex(s);
            for t in k.simplex_ids() {
                if ss.is_face_of(k.simplex(t)) {
                    continue;
                }
                let (tl, th) = k.bbox(t);
                let gap2: f64 =
                    (0..k.ambient_dim()).map(|i| (tl[i] - hi[i]).max(lo[i] - th[i]).max(0.0).powi(2)).sum();
                if gap2.sqrt() > to_f64(&half) * (1.0 + 1e-9) {
                    continue;
                }
                let d2 = hull_dist2(&core_refs, &k.points(t));
                if min_gap2.as_ref().is_none_or(|m| &d2 < m) {
                    min_gap2 = Some(d2);
                }
            }
        }
        let mut radius = half;
        if let Some(m) = min_gap2 {
            let mut steps = 1;
            while &radius * &radius >= m {
                radius /= Q::from_integer(2.into());
                steps += 1;
                if steps > EPSILON_FLOOR || !m.is_positive() {
                    return Err(CoverError::DeltaTooLarge { simplex: cover.ids(ids[0]), level, delta: delta.to_string() });
                }
            }
        }
        for &s in &ids {
            let base: Vec<Point> = k.simplex(s).vertices().iter().map(|v| k.vertex(*v).clone()).collect();
            let tube = WideningTube::new(shrink(&base, &epsilon)?, radius.clone());
            cover.elements[s.0] = CoverElement { simplex: s, shape: ElementShape::Tube(tube) };
        }
    }
    Ok(cover)
}

fn placeholder() -> CoverElement {
    CoverElement { simplex: SimplexId(usize::MAX), shape: ElementShape::Ball { center: Point(vec![]), radius: Q::zero() } }
}

/// Exact `(eps, delta)` of each skeleton level, `None` for levels without simplices.
pub fn level_parameters(cover: &SkeletonCover) -> Vec<Option<(Q, Q)>> {
    let k = cover.complex();
    (1..=k.dim())
        .map(|level| {
            k.simplices_of_dim(level).next().and_then(|s| {
                let e = cover.element(s);
                e.epsilon().map(|eps| (eps.clone(), e.radius().clone()))
            })
        })
        .collect()
}


#[cfg(test)]
mod square {
    use super::*;
    use crate::complex::build_complex;
    use crate::rational::int;

    #[test]
    fn square_cover_verifies() {
        let pts = [(0, 0), (1, 0), (1, 1), (0, 1)].iter().map(|&(a, b)| Point(vec![int(a), int(b)])).collect();
        let k = build_complex(pts, &[vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
        for d in [frac(1, 4), frac(1, 64), frac(1, 1024)] {
            let cover = build_cover(&k, &d).unwrap();
            let r = cover.verify();
            assert!(r.passed(), "{d}: {:?}", r.violations);
            for (eps, delta) in level_parameters(&cover).into_iter().flatten() {
                assert!(eps.is_positive() && delta < d);
            }
        }
    }
}
