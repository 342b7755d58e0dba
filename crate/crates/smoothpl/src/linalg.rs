//! Small dense linear algebra over the rationals, and affine frames of simplices.

use crate::rational::{to_f64, Q};
use num::{Signed, Zero};

/// Row-major dense matrix.
pub type Mat = Vec<Vec<Q>>;

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn norm2(a: &[Q]) -> Q {
    dot(a, a)
}

pub fn dist2(a: &[Q], b: &[Q]) -> Q {
    norm2(&sub(a, b))
}

/// Solves `a x = b` for square `a`; `None` when singular.
pub fn solve(a: &Mat, b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Mat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * pv;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Inverse of a square matrix; `None` when singular.
pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Q> = (0..n).map(|i| if i == j { Q::from_integer(1.into()) } else { Q::zero() }).collect();
        cols.push(solve(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Affine coordinates on the hull of a simplex `v_0..v_d` in `R^p`.
///
/// `coords(x)` gives the barycentric coordinates of the orthogonal projection of `x`
/// onto the affine hull.
#[derive(Clone, Debug)]
pub struct AffineFrame {
    origin: Vec<Q>,
    /// Columns `v_i - v_0`, `i = 1..d`.
    basis: Vec<Vec<Q>>,
    /// `G^-1 V^T`, a `d x p` matrix.
    pseudo: Mat,
    float: FloatFrame,
}

/// The same frame in double precision.
#[derive(Clone, Debug)]
pub struct FloatFrame {
    pub origin: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
    pub pseudo: Vec<Vec<f64>>,
}

impl AffineFrame {
    /// `None` when the points are affinely dependent.
    pub fn new(points: &[&[Q]]) -> Option<Self> {
        let origin = points[0].to_vec();
        let basis: Vec<Vec<Q>> = points[1..].iter().map(|p| sub(p, &origin)).collect();
        let d = basis.len();
        let gram: Mat = (0..d).map(|i| (0..d).map(|j| dot(&basis[i], &basis[j])).collect()).collect();
        let ginv = inverse(&gram)?;
        let p = origin.len();
        let pseudo: Mat = (0..d)
            .map(|i| {
                (0..p)
                    .map(|k| (0..d).fold(Q::zero(), |acc, j| acc + &ginv[i][j] * &basis[j][k]))
                    .collect()
            })
            .collect();
        let float = FloatFrame {
            origin: origin.iter().map(to_f64).collect(),
            basis: basis.iter().map(|c| c.iter().map(to_f64).collect()).collect(),
            pseudo: pseudo.iter().map(|r| r.iter().map(to_f64).collect()).collect(),
        };
        Some(AffineFrame { origin, basis, pseudo, float })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    /// Barycentric coordinates (length `d+1`) of the projection of `x`.
    pub fn coords(&self, x: &[Q]) -> Vec<Q> {
        let rel = sub(x, &self.origin);
        let tail: Vec<Q> = self.pseudo.iter().map(|row| dot(row, &rel)).collect();
        let first = tail.iter().fold(Q::from_integer(1.into()), |acc, t| acc - t);
        std::iter::once(first).chain(tail).collect()
    }

    /// The point with barycentric coordinates `w`.
    pub fn point(&self, w: &[Q]) -> Vec<Q> {
        let mut out = self.origin.clone();
        for (wi, col) in w[1..].iter().zip(&self.basis) {
            for (o, c) in out.iter_mut().zip(col) {
                *o += wi * c;
            }
        }
        out
    }

    /// Orthogonal projection onto the affine hull.
    pub fn project(&self, x: &[Q]) -> Vec<Q> {
        self.point(&self.coords(x))
    }

    /// Squared distance from `x` to the affine hull.
    pub fn normal2(&self, x: &[Q]) -> Q {
        dist2(x, &self.project(x))
    }

    pub fn float(&self) -> &FloatFrame {
        &self.float
    }
}

impl FloatFrame {
    /// Barycentric coordinates of the projection, and the projected point.
    pub fn coords_and_projection(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let rel: Vec<f64> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        let tail: Vec<f64> = self.pseudo.iter().map(|row| row.iter().zip(&rel).map(|(a, b)| a * b).sum()).collect();
        let mut proj = self.origin.clone();
        for (t, col) in tail.iter().zip(&self.basis) {
            for (o, c) in proj.iter_mut().zip(col) {
                *o += t * c;
            }
        }
        let first = 1.0 - tail.iter().sum::<f64>();
        (std::iter::once(first).chain(tail).collect(), proj)
    }
}

/// Squared distance between the convex hulls of two finite point sets, exactly.
///
/// Every pair of vertex subsets is tried: the unconstrained minimizer between the two
/// affine hulls is kept when it is unique and lies in both hulls.  The global minimum is
/// attained by such a pair.
pub fn hull_dist2(a: &[&[Q]], b: &[&[Q]]) -> Q {
    let mut best: Option<Q> = None;
    for ma in 1..(1u32 << a.len()) {
        let fa: Vec<&[Q]> = (0..a.len()).filter(|i| ma >> i & 1 == 1).map(|i| a[i]).collect();
        for mb in 1..(1u32 << b.len()) {
            let fb: Vec<&[Q]> = (0..b.len()).filter(|i| mb >> i & 1 == 1).map(|i| b[i]).collect();
            if let Some(d) = face_pair_dist2(&fa, &fb) {
                if best.as_ref().is_none_or(|b| &d < b) {
                    best = Some(d);
                }
            }
        }
    }
    best.expect("vertex pairs always yield a candidate")
}

fn face_pair_dist2(fa: &[&[Q]], fb: &[&[Q]]) -> Option<Q> {
    let a0 = fa[0];
    let b0 = fb[0];
    let mut cols: Vec<Vec<Q>> = fa[1..].iter().map(|p| sub(p, a0)).collect();
    cols.extend(fb[1..].iter().map(|p| sub(b0, p)));
    let base = sub(a0, b0);
    let n = cols.len();
    let z = if n == 0 {
        Vec::new()
    } else {
        let gram: Mat = (0..n).map(|i| (0..n).map(|j| dot(&cols[i], &cols[j])).collect()).collect();
        let rhs: Vec<Q> = cols.iter().map(|c| -dot(c, &base)).collect();
        solve(&gram, &rhs)?
    };
    let (za, zb) = z.split_at(fa.len() - 1);
    for part in [za, zb] {
        let s = part.iter().fold(Q::zero(), |acc, v| acc + v);
        if part.iter().any(|v| v.is_negative()) || s > Q::from_integer(1.into()) {
            return None;
        }
    }
    let mut diff = base;
    for (zi, c) in z.iter().zip(&cols) {
        for (d, ci) in diff.iter_mut().zip(c) {
            *d += zi * ci;
        }
    }
    Some(norm2(&diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn pt(v: &[(i64, i64)]) -> Vec<Q> {
        v.iter().map(|&(n, d)| frac(n, d)).collect()
    }

    #[test]
    fn solve_and_inverse() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![frac(4, 5), frac(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], frac(3, 5));
        assert!(inverse(&vec![vec![int(1), int(2)], vec![int(2), int(4)]]).is_none());
    }

    #[test]
    fn frame_projection_drops_normal_component() {
        let a = pt(&[(0, 1), (0, 1)]);
        let b = pt(&[(1, 1), (0, 1)]);
        let f = AffineFrame::new(&[&a, &b]).unwrap();
        let x = pt(&[(1, 2), (3, 10)]);
        assert_eq!(f.project(&x), pt(&[(1, 2), (0, 1)]));
        assert_eq!(f.coords(&x), vec![frac(1, 2), frac(1, 2)]);
        assert_eq!(f.normal2(&x), frac(9, 100));
    }

    #[test]
    fn degenerate_frame_rejected() {
        let a = pt(&[(0, 1), (0, 1)]);
        let b = pt(&[(1, 1), (1, 1)]);
        let c = pt(&[(2, 1), (2, 1)]);
        assert!(AffineFrame::new(&[&a, &b, &c]).is_none());
    }

    #[test]
    fn hull_distances() {
        let p = pt(&[(0, 1), (1, 1)]);
        let a = pt(&[(-1, 1), (0, 1)]);
        let b = pt(&[(1, 1), (0, 1)]);
        assert_eq!(hull_dist2(&[&p], &[&a, &b]), int(1));
        let q = pt(&[(3, 1), (0, 1)]);
        assert_eq!(hull_dist2(&[&q], &[&a, &b]), int(4));
        let c = pt(&[(0, 1), (2, 1)]);
        let d = pt(&[(0, 1), (3, 1)]);
        assert_eq!(hull_dist2(&[&c, &d], &[&a, &b]), int(4));
        assert_eq!(hull_dist2(&[&a, &b], &[&pt(&[(0, 1), (-1, 1)]), &p]), int(0));
    }
}
