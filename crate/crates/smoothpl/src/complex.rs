//! Finite simplicial complexes with exact rational vertices.

use crate::linalg::{dist2, AffineFrame};
use crate::lp::{maximize, LpOutcome};
use crate::rational::{to_f64, Q};
use itertools::Itertools;
use num::{One, Signed, Zero};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Deref;
use std::sync::OnceLock;
use thiserror::Error;

/// A point of `R^p` with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point(pub Vec<Q>);

impl Point {
    pub fn new(coords: Vec<Q>) -> Self {
        Point(coords)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    pub fn from_f64(x: &[f64]) -> Self {
        Point(x.iter().map(|&v| crate::rational::from_f64(v)).collect())
    }
}

impl Deref for Point {
    type Target = [Q];
    fn deref(&self) -> &[Q] {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|q| q.to_string()).join(", "))
    }
}

/// Index of a vertex in its complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

/// Index of a simplex in its complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexId(pub usize);

/// A simplex as a strictly increasing list of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts and deduplicates.
    pub fn new(mut ids: Vec<VertexId>) -> Self {
        ids.sort();
        ids.dedup();
        Simplex(ids)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True when `self` is a face of `other` (possibly equal).
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }
}

/// Barycentric coordinates of a point in the open simplex carrying it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarycentricCoords {
    pub simplex: SimplexId,
    /// Strictly positive, summing to one, aligned with the simplex's vertex list.
    pub weights: Vec<Q>,
}

/// Errors of complex construction and queries.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    /// The vertices of an input simplex are affinely dependent.
    #[error("simplex {0:?} is affinely degenerate")]
    AffineDependence(Vec<usize>),
    /// Two simplices meet outside their common face.
    #[error("simplices {0:?} and {1:?} meet outside a common face")]
    BadGluing(Vec<usize>, Vec<usize>),
    /// Two vertices share coordinates.
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    /// A coordinate list has the wrong length.
    #[error("vertex {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    /// A simplex references a missing vertex or repeats one.
    #[error("invalid simplex {0:?}")]
    InvalidSimplex(Vec<usize>),
    /// The point lies outside the realization.
    #[error("point {0} is not in the complex")]
    NotInComplex(String),
    /// The complex has no vertices.
    #[error("the complex is empty")]
    EmptyComplex,
    /// No such vertex.
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
}

/// Squared mesh size, with a float view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshSize {
    pub squared: Q,
}

impl MeshSize {
    pub fn value(&self) -> f64 {
        to_f64(&self.squared).sqrt()
    }
}

/// A finite simplicial complex in `R^p`, closed under faces.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    ambient_dim: usize,
    vertices: Vec<Point>,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, SimplexId>,
    maximal: Vec<SimplexId>,
    cofaces: Vec<Vec<SimplexId>>,
    frames: Vec<OnceLock<AffineFrame>>,
    boxes: Vec<(Vec<f64>, Vec<f64>)>,
    provenance: Vec<SimplexId>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices && self.simplices == other.simplices
    }
}

/// Validates input and returns the face closure of `top_simplices`.
///
/// Vertices not used by any simplex become 0-simplices.
pub fn build_complex(vertices: Vec<Point>, top_simplices: &[Vec<usize>]) -> Result<SimplicialComplex, ComplexError> {
    let ambient_dim = vertices.first().map_or(0, |p| p.len());
    for (i, p) in vertices.iter().enumerate() {
        if p.len() != ambient_dim {
            return Err(ComplexError::DimensionMismatch { index: i, expected: ambient_dim, found: p.len() });
        }
    }
    let mut seen: HashMap<&Point, usize> = HashMap::new();
    for (i, p) in vertices.iter().enumerate() {
        if let Some(&j) = seen.get(p) {
            return Err(ComplexError::DuplicateVertex(j, i));
        }
        seen.insert(p, i);
    }
    let mut tops = Vec::new();
    for ids in top_simplices {
        let set: HashSet<usize> = ids.iter().copied().collect();
        if ids.is_empty() || set.len() != ids.len() || ids.iter().any(|&i| i >= vertices.len()) {
            return Err(ComplexError::InvalidSimplex(ids.clone()));
        }
        let s = Simplex::new(ids.iter().map(|&i| VertexId(i)).collect());
        let pts: Vec<&[Q]> = s.vertices().iter().map(|v| &vertices[v.0][..]).collect();
        if AffineFrame::new(&pts).is_none() {
            return Err(ComplexError::AffineDependence(s.vertices().iter().map(|v| v.0).collect()));
        }
        tops.push(s);
    }
    let used: HashSet<VertexId> = tops.iter().flat_map(|s| s.vertices().iter().copied()).collect();
    for i in 0..vertices.len() {
        if !used.contains(&VertexId(i)) {
            tops.push(Simplex::new(vec![VertexId(i)]));
        }
    }
    let k = SimplicialComplex::from_tops(vertices, tops, None);
    k.check_gluing()?;
    Ok(k)
}

impl SimplicialComplex {
    /// Face closure without validation.
    fn from_tops(vertices: Vec<Point>, tops: Vec<Simplex>, provenance: Option<&dyn Fn(&Simplex) -> SimplexId>) -> Self {
        let ambient_dim = vertices.first().map_or(0, |p| p.len());
        let mut all: HashSet<Simplex> = HashSet::new();
        for t in &tops {
            let vs = t.vertices();
            for mask in 1..(1usize << vs.len()) {
                let face: Vec<VertexId> = (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
                all.insert(Simplex(face));
            }
        }
        let mut simplices: Vec<Simplex> = all.into_iter().collect();
        simplices.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.cmp(b)));
        let index: HashMap<Simplex, SimplexId> =
            simplices.iter().enumerate().map(|(i, s)| (s.clone(), SimplexId(i))).collect();
        let mut cofaces = vec![Vec::new(); vertices.len()];
        for (i, s) in simplices.iter().enumerate() {
            for v in s.vertices() {
                cofaces[v.0].push(SimplexId(i));
            }
        }
        let mut is_max = vec![true; simplices.len()];
        for s in &simplices {
            let vs = s.vertices();
            if vs.len() > 1 {
                for skip in 0..vs.len() {
                    let face: Vec<VertexId> =
                        vs.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| *v).collect();
                    is_max[index[&Simplex(face)].0] = false;
                }
            }
        }
        let maximal: Vec<SimplexId> = (0..simplices.len()).filter(|&i| is_max[i]).map(SimplexId).collect();
        let boxes = simplices
            .iter()
            .map(|s| {
                let mut lo = vec![f64::INFINITY; ambient_dim];
                let mut hi = vec![f64::NEG_INFINITY; ambient_dim];
                for v in s.vertices() {
                    for (k, c) in vertices[v.0].iter().enumerate() {
                        let c = to_f64(c);
                        lo[k] = lo[k].min(c);
                        hi[k] = hi[k].max(c);
                    }
                }
                (lo, hi)
            })
            .collect();
        let provenance = match provenance {
            Some(f) => simplices.iter().map(f).collect(),
            None => (0..simplices.len()).map(SimplexId).collect(),
        };
        let frames = (0..simplices.len()).map(|_| OnceLock::new()).collect();
        SimplicialComplex { ambient_dim, vertices, simplices, index, maximal, cofaces, frames, boxes, provenance }
    }

    fn check_gluing(&self) -> Result<(), ComplexError> {
        for (a, b) in self.maximal.iter().tuple_combinations() {
            if !self.boxes_meet(*a, *b, 0.0) {
                continue;
            }
            let sa = self.simplex(*a);
            let sb = self.simplex(*b);
            let na = sa.vertices().len();
            let nb = sb.vertices().len();
            let p = self.ambient_dim;
            let mut rows = Vec::with_capacity(p + 2);
            for k in 0..p {
                let mut row: Vec<Q> = sa.vertices().iter().map(|v| self.vertices[v.0][k].clone()).collect();
                row.extend(sb.vertices().iter().map(|v| -&self.vertices[v.0][k]));
                rows.push(row);
            }
            let mut ones_a: Vec<Q> = vec![Q::one(); na];
            ones_a.extend(vec![Q::zero(); nb]);
            let mut ones_b: Vec<Q> = vec![Q::zero(); na];
            ones_b.extend(vec![Q::one(); nb]);
            rows.push(ones_a);
            rows.push(ones_b);
            let mut rhs = vec![Q::zero(); p];
            rhs.push(Q::one());
            rhs.push(Q::one());
            let mut cost: Vec<Q> = sa.vertices().iter().map(|v| if sb.contains(*v) { Q::zero() } else { Q::one() }).collect();
            cost.extend(vec![Q::zero(); nb]);
            if let LpOutcome::Optimal(v) = maximize(&cost, &rows, &rhs) {
                if v.is_positive() {
                    return Err(ComplexError::BadGluing(
                        sa.vertices().iter().map(|v| v.0).collect(),
                        sb.vertices().iter().map(|v| v.0).collect(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn boxes_meet(&self, a: SimplexId, b: SimplexId, slack: f64) -> bool {
        let (la, ha) = &self.boxes[a.0];
        let (lb, hb) = &self.boxes[b.0];
        (0..self.ambient_dim).all(|k| la[k] <= hb[k] + slack && lb[k] <= ha[k] + slack)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Largest simplex dimension; `0` for an empty complex.
    pub fn dim(&self) -> usize {
        self.simplices.last().map_or(0, |s| s.dim())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Point {
        &self.vertices[v.0]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// All simplices, ordered by dimension then vertex ids.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, id: SimplexId) -> &Simplex {
        &self.simplices[id.0]
    }

    pub fn simplex_ids(&self) -> impl Iterator<Item = SimplexId> {
        (0..self.simplices.len()).map(SimplexId)
    }

    pub fn simplex_id(&self, s: &Simplex) -> Option<SimplexId> {
        self.index.get(s).copied()
    }

    /// Simplices not a proper face of another.
    pub fn maximal_simplices(&self) -> &[SimplexId] {
        &self.maximal
    }

    pub fn simplices_of_dim(&self, d: usize) -> impl Iterator<Item = SimplexId> + '_ {
        self.simplex_ids().filter(move |id| self.simplices[id.0].dim() == d)
    }

    /// Count of simplices of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 1];
        for s in &self.simplices {
            f[s.dim()] += 1;
        }
        f
    }

    /// Vertex coordinates of a simplex.
    pub fn points(&self, id: SimplexId) -> Vec<&[Q]> {
        self.simplices[id.0].vertices().iter().map(|v| &self.vertices[v.0][..]).collect()
    }

    /// Affine frame of a simplex, computed on first use.
    pub fn frame(&self, id: SimplexId) -> &AffineFrame {
        self.frames[id.0].get_or_init(|| AffineFrame::new(&self.points(id)).expect("simplices are nondegenerate"))
    }

    /// Float bounding box of a simplex.
    pub fn bbox(&self, id: SimplexId) -> (&[f64], &[f64]) {
        let (lo, hi) = &self.boxes[id.0];
        (lo, hi)
    }

    /// Barycenter of a simplex.
    pub fn barycenter(&self, id: SimplexId) -> Point {
        let pts = self.points(id);
        let n = Q::from_integer((pts.len() as i64).into());
        Point((0..self.ambient_dim).map(|k| pts.iter().fold(Q::zero(), |acc, p| acc + &p[k]) / &n).collect())
    }

    /// Smallest simplex of the complex this one was subdivided from that contains it.
    pub fn provenance(&self, id: SimplexId) -> SimplexId {
        self.provenance[id.0]
    }

    /// All faces of a simplex, itself included.
    pub fn faces(&self, id: SimplexId) -> Vec<SimplexId> {
        let vs = self.simplices[id.0].vertices();
        let mut out: Vec<SimplexId> = (1..(1usize << vs.len()))
            .map(|mask| {
                let f: Vec<VertexId> = (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
                self.index[&Simplex(f)]
            })
            .collect();
        out.sort();
        out
    }

    /// The open star: simplices having `v` as a vertex.
    pub fn star(&self, v: VertexId) -> Result<&[SimplexId], ComplexError> {
        self.cofaces.get(v.0).map(|c| &c[..]).ok_or(ComplexError::UnknownVertex(v.0))
    }

    /// Largest squared edge length.
    pub fn mesh_size(&self) -> Result<MeshSize, ComplexError> {
        if self.vertices.is_empty() {
            return Err(ComplexError::EmptyComplex);
        }
        let squared = self
            .simplices_of_dim(1)
            .map(|e| {
                let p = self.points(e);
                dist2(p[0], p[1])
            })
            .max()
            .unwrap_or_else(Q::zero);
        Ok(MeshSize { squared })
    }

    /// The open simplex containing `x`, with its positive barycentric weights.
    pub fn locate(&self, x: &[Q]) -> Result<BarycentricCoords, ComplexError> {
        let not_in = || ComplexError::NotInComplex(Point(x.to_vec()).to_string());
        if x.len() != self.ambient_dim {
            return Err(not_in());
        }
        let xf: Vec<f64> = x.iter().map(to_f64).collect();
        for &m in &self.maximal {
            let (lo, hi) = &self.boxes[m.0];
            let inside = (0..self.ambient_dim).all(|k| {
                let slack = 1e-9 * (1.0 + xf[k].abs());
                xf[k] >= lo[k] - slack && xf[k] <= hi[k] + slack
            });
            if !inside {
                continue;
            }
            if let Some(bc) = self.locate_in(m, x) {
                return Ok(bc);
            }
        }
        Err(not_in())
    }

    /// Barycentric location of `x` relative to the closed simplex `id`, if inside.
    pub fn locate_in(&self, id: SimplexId, x: &[Q]) -> Option<BarycentricCoords> {
        let frame = self.frame(id);
        let w = frame.coords(x);
        if w.iter().any(|c| c.is_negative()) || frame.point(&w) != x {
            return None;
        }
        let vs = self.simplices[id.0].vertices();
        let (ids, weights): (Vec<VertexId>, Vec<Q>) =
            vs.iter().zip(w).filter(|(_, c)| c.is_positive()).map(|(v, c)| (*v, c)).unzip();
        Some(BarycentricCoords { simplex: self.index[&Simplex(ids)], weights })
    }

    /// The maximal simplex whose float barycentric coordinates of `x` have the largest
    /// minimum, with that minimum and the normal distance to its hull.
    pub fn locate_f64(&self, x: &[f64]) -> Option<(SimplexId, f64, f64)> {
        let mut best: Option<(SimplexId, f64, f64)> = None;
        for &m in &self.maximal {
            let (lo, hi) = &self.boxes[m.0];
            let gap = (0..self.ambient_dim).map(|k| (lo[k] - x[k]).max(x[k] - hi[k]).max(0.0)).fold(0.0, f64::max);
            if let Some((_, b, _)) = best {
                if b >= 0.0 && gap > 1e-9 {
                    continue;
                }
            }
            let (coords, proj) = self.frame(m).float().coords_and_projection(x);
            let low = coords.iter().copied().fold(f64::INFINITY, f64::min);
            let normal = x.iter().zip(&proj).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let score = low - normal;
            if best.is_none_or(|(_, b, n)| score > b - n) {
                best = Some((m, low, normal));
            }
        }
        best
    }

    /// Reconstructs a point from barycentric coordinates.
    pub fn point_from_coords(&self, bc: &BarycentricCoords) -> Point {
        let mut out = vec![Q::zero(); self.ambient_dim];
        for (v, w) in self.simplices[bc.simplex.0].vertices().iter().zip(&bc.weights) {
            for (o, c) in out.iter_mut().zip(self.vertices[v.0].iter()) {
                *o += w * c;
            }
        }
        Point(out)
    }

    /// One round of barycentric subdivision, keeping original vertex ids.
    fn subdivide_once(&self) -> SimplicialComplex {
        let mut points = self.vertices.clone();
        let mut bary_vertex: Vec<VertexId> = Vec::with_capacity(self.simplices.len());
        let mut origin: Vec<SimplexId> = (0..self.vertices.len()).map(|_| SimplexId(0)).collect();
        for (i, s) in self.simplices.iter().enumerate() {
            if s.dim() == 0 {
                bary_vertex.push(s.vertices()[0]);
                origin[s.vertices()[0].0] = SimplexId(i);
            } else {
                bary_vertex.push(VertexId(points.len()));
                points.push(self.barycenter(SimplexId(i)));
                origin.push(SimplexId(i));
            }
        }
        let mut tops = Vec::new();
        for &m in &self.maximal {
            let vs = self.simplices[m.0].vertices();
            for perm in vs.iter().permutations(vs.len()) {
                let chain: Vec<VertexId> = (1..=perm.len())
                    .map(|len| {
                        let face = Simplex::new(perm[..len].iter().map(|v| **v).collect());
                        bary_vertex[self.index[&face].0]
                    })
                    .collect();
                tops.push(Simplex::new(chain));
            }
        }
        let parent = |s: &Simplex| {
            let p = s
                .vertices()
                .iter()
                .map(|v| origin[v.0])
                .max_by_key(|o| self.simplices[o.0].dim())
                .expect("nonempty simplex");
            self.provenance[p.0]
        };
        SimplicialComplex::from_tops(points, tops, Some(&parent))
    }

    /// The `k`-th iterated barycentric subdivision.
    pub fn barycentric_subdivide(&self, k: usize) -> SimplicialComplex {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.subdivide_once();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn p(c: &[(i64, i64)]) -> Point {
        Point(c.iter().map(|&(n, d)| frac(n, d)).collect())
    }

    fn segment() -> SimplicialComplex {
        build_complex(vec![p(&[(0, 1)]), p(&[(1, 1)])], &[vec![0, 1]]).unwrap()
    }

    fn triangle() -> SimplicialComplex {
        build_complex(vec![p(&[(0, 1), (0, 1)]), p(&[(1, 1), (0, 1)]), p(&[(0, 1), (1, 1)])], &[vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn face_closure_of_segment() {
        let k = segment();
        assert_eq!(k.f_vector(), vec![2, 1]);
        assert_eq!(k.simplices().len(), 3);
    }

    #[test]
    fn tetrahedron_boundary_counts() {
        let v = vec![
            p(&[(0, 1), (0, 1), (0, 1)]),
            p(&[(1, 1), (0, 1), (0, 1)]),
            p(&[(0, 1), (1, 1), (0, 1)]),
            p(&[(0, 1), (0, 1), (1, 1)]),
        ];
        let k = build_complex(v, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(k.f_vector(), vec![4, 6, 4]);
        let star = k.star(VertexId(0)).unwrap();
        assert_eq!(star.len(), 1 + 3 + 3);
    }

    #[test]
    fn half_edge_overlap_is_bad_gluing() {
        let v = vec![
            p(&[(0, 1), (0, 1)]),
            p(&[(2, 1), (0, 1)]),
            p(&[(0, 1), (1, 1)]),
            p(&[(1, 1), (0, 1)]),
            p(&[(3, 1), (0, 1)]),
            p(&[(2, 1), (-1, 1)]),
        ];
        let err = build_complex(v, &[vec![0, 1, 2], vec![3, 4, 5]]).unwrap_err();
        assert!(matches!(err, ComplexError::BadGluing(..)));
    }

    #[test]
    fn vertex_inside_edge_is_bad_gluing() {
        let v = vec![p(&[(0, 1)]), p(&[(1, 1)]), p(&[(1, 2)])];
        assert!(matches!(build_complex(v, &[vec![0, 1]]), Err(ComplexError::BadGluing(..))));
    }

    #[test]
    fn construction_errors() {
        let v = vec![p(&[(0, 1), (0, 1)]), p(&[(1, 1), (1, 1)]), p(&[(2, 1), (2, 1)])];
        assert!(matches!(build_complex(v, &[vec![0, 1, 2]]), Err(ComplexError::AffineDependence(_))));
        let v = vec![p(&[(0, 1)]), p(&[(0, 1)])];
        assert_eq!(build_complex(v, &[vec![0, 1]]).unwrap_err(), ComplexError::DuplicateVertex(0, 1));
        let v = vec![p(&[(0, 1)]), p(&[(1, 1), (0, 1)])];
        assert!(matches!(build_complex(v, &[]), Err(ComplexError::DimensionMismatch { .. })));
        assert!(matches!(build_complex(vec![p(&[(0, 1)])], &[vec![0, 3]]), Err(ComplexError::InvalidSimplex(_))));
    }

    #[test]
    fn segment_subdivision() {
        let k = segment().barycentric_subdivide(1);
        assert_eq!(k.f_vector(), vec![3, 2]);
        assert_eq!(k.vertex(VertexId(2)), &p(&[(1, 2)]));
        assert_eq!(k.mesh_size().unwrap().squared, frac(1, 4));
        let k4 = segment().barycentric_subdivide(4);
        assert_eq!(k4.mesh_size().unwrap().squared, frac(1, 256));
    }

    #[test]
    fn triangle_subdivision_counts() {
        let base = triangle();
        let k = base.barycentric_subdivide(1);
        assert_eq!(k.f_vector()[0], 7);
        assert_eq!(k.f_vector()[2], 6);
        let last = SimplexId(k.simplices().len() - 1);
        assert_eq!(base.simplex(k.provenance(last)).dim(), 2);
    }

    #[test]
    fn provenance_of_subdivided_vertices() {
        let k = segment().barycentric_subdivide(2);
        let base = segment();
        for v in 0..k.num_vertices() {
            let id = k.simplex_id(&Simplex::new(vec![VertexId(v)])).unwrap();
            let parent = base.simplex(k.provenance(id));
            let bc = base.locate(k.vertex(VertexId(v))).unwrap();
            assert_eq!(base.simplex(bc.simplex), parent);
        }
    }

    #[test]
    fn mesh_of_unit_triangle() {
        assert_eq!(triangle().mesh_size().unwrap().squared, int(2));
        let empty = build_complex(vec![], &[]).unwrap();
        assert_eq!(empty.mesh_size().unwrap_err(), ComplexError::EmptyComplex);
    }

    #[test]
    fn star_queries() {
        let k = segment();
        let s = k.star(VertexId(0)).unwrap();
        assert_eq!(s.len(), 2);
        let k1 = segment().barycentric_subdivide(1);
        assert_eq!(k1.star(VertexId(2)).unwrap().len(), 3);
        assert_eq!(k.star(VertexId(9)).unwrap_err(), ComplexError::UnknownVertex(9));
    }

    #[test]
    fn locate_examples() {
        let k = segment();
        let bc = k.locate(&[frac(1, 4)]).unwrap();
        assert_eq!(k.simplex(bc.simplex).dim(), 1);
        assert_eq!(bc.weights, vec![frac(3, 4), frac(1, 4)]);
        let bc = k.locate(&[int(0)]).unwrap();
        assert_eq!(bc.weights, vec![int(1)]);
        assert_eq!(k.simplex(bc.simplex).vertices(), &[VertexId(0)]);
        assert!(matches!(k.locate(&[int(2)]), Err(ComplexError::NotInComplex(_))));
    }

    #[test]
    fn locate_off_plane_fails() {
        let k = build_complex(vec![p(&[(0, 1), (0, 1)]), p(&[(1, 1), (0, 1)])], &[vec![0, 1]]).unwrap();
        assert!(k.locate(&[frac(1, 2), frac(1, 100)]).is_err());
        assert!(k.locate(&[frac(1, 2), int(0)]).is_ok());
    }
}
