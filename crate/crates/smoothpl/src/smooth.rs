//! C^nu smoothstep profiles, bumps on cover elements, partitions of unity, and a
//! finite-difference smoothness meter.

use crate::complex::SimplexId;
use crate::cover::{CoverElement, ElementShape, SkeletonCover};
use crate::linalg::FloatFrame;
use crate::rational::{to_f64, Q};
use num::{BigInt, One, Zero};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SmoothError {
    /// No bump is positive at the point.
    #[error("partition of unity denominator vanishes at {0:?}")]
    ZeroDenominator(Vec<f64>),
    #[error("evaluation failed at t = {t}: {reason}")]
    EvaluationFailure { t: f64, reason: String },
    #[error("smoothness order must be at least 1")]
    ZeroOrder,
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `P_nu`: degree `2nu+1`, `P(0)=0`, `P(1)=1`, derivatives `1..nu` vanishing at both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothstepProfile {
    nu: usize,
    coeffs: Vec<Q>,
    float: Vec<f64>,
}

pub fn smoothstep(nu: usize) -> Result<SmoothstepProfile, SmoothError> {
    if nu == 0 {
        return Err(SmoothError::ZeroOrder);
    }
    let mut coeffs = vec![Q::zero(); 2 * nu + 2];
    let n64 = nu as u64;
    for n in 0..=n64 {
        let c = binomial(n64 + n, n) * binomial(2 * n64 + 1, n64 - n);
        let c = if n % 2 == 1 { -c } else { c };
        coeffs[nu + 1 + n as usize] = Q::from_integer(c);
    }
    let float = coeffs.iter().map(to_f64).collect();
    Ok(SmoothstepProfile { nu, coeffs, float })
}

impl SmoothstepProfile {
    pub fn order(&self) -> usize {
        self.nu
    }

    /// Exact coefficients, lowest degree first.
    pub fn coefficients(&self) -> &[Q] {
        &self.coeffs
    }

    /// Clamped value: 0 below 0, 1 above 1.
    pub fn value(&self, u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else if u >= 1.0 {
            1.0
        } else if u > 0.5 {
            1.0 - self.horner(1.0 - u)
        } else {
            self.horner(u)
        }
    }

    fn horner(&self, u: f64) -> f64 {
        self.float.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    pub fn value_exact(&self, u: &Q) -> Q {
        if u <= &Q::zero() {
            Q::zero()
        } else if u >= &Q::one() {
            Q::one()
        } else {
            self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * u + c)
        }
    }

    /// `k`-th derivative of the clamped profile (one-sided values at the seams are the
    /// interior polynomial's).
    pub fn derivative(&self, u: f64, k: usize) -> f64 {
        if k == 0 {
            return self.value(u);
        }
        if !(0.0..=1.0).contains(&u) {
            return 0.0;
        }
        if u > 0.5 {
            let sign = if k.is_multiple_of(2) { -1.0 } else { 1.0 };
            return sign * self.derivative(1.0 - u, k);
        }
        let mut acc = 0.0;
        for (p, c) in self.float.iter().enumerate().rev() {
            if p < k {
                break;
            }
            let falling: f64 = (0..k).map(|i| (p - i) as f64).product();
            acc += c * falling * u.powi((p - k) as i32);
        }
        acc
    }
}

/// `1 - P(3s - 1)`: one for `s <= 1/3`, zero for `s >= 2/3`.
fn fall(profile: &SmoothstepProfile, s: f64) -> f64 {
    1.0 - profile.value(3.0 * s - 1.0)
}

#[derive(Clone, Debug)]
enum BumpShape {
    Ball { center: Vec<f64>, radius: f64 },
    Tube { frame: FloatFrame, threshold: f64, delta: f64 },
}

/// The unnormalized bump of one cover element.
///
/// Positive exactly on the element's core; one on the plateau
/// `{lambda_i >= 5a/3, n <= delta/3}` (or `|x - v| <= r/3`).
#[derive(Clone, Debug)]
pub struct BumpFunction {
    pub simplex: SimplexId,
    profile: SmoothstepProfile,
    shape: BumpShape,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

pub fn bump(elem: &CoverElement, profile: &SmoothstepProfile) -> BumpFunction {
    let (shape, lo, hi) = match &elem.shape {
        ElementShape::Ball { center, radius } => {
            let c = center.to_f64();
            let r = to_f64(radius);
            let reach = r * 2.0 / 3.0 * (1.0 + 1e-9);
            let lo = c.iter().map(|x| x - reach).collect();
            let hi = c.iter().map(|x| x + reach).collect();
            (BumpShape::Ball { center: c, radius: r }, lo, hi)
        }
        ElementShape::Tube(t) => {
            let delta = to_f64(t.delta());
            let reach = delta * 2.0 / 3.0 * (1.0 + 1e-9);
            let pts: Vec<Vec<f64>> = t.base().vertices().iter().map(|p| p.to_f64()).collect();
            let n = pts[0].len();
            let lo = (0..n).map(|k| pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min) - reach).collect();
            let hi = (0..n).map(|k| pts.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max) + reach).collect();
            let shape = BumpShape::Tube {
                frame: t.base().frame().float().clone(),
                threshold: to_f64(&t.base().threshold()),
                delta,
            };
            (shape, lo, hi)
        }
    };
    BumpFunction { simplex: elem.simplex, profile: profile.clone(), shape, lo, hi }
}

impl BumpFunction {
    fn in_box(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| v >= l && v <= h)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        if !self.in_box(x) {
            return 0.0;
        }
        match &self.shape {
            BumpShape::Ball { center, radius } => {
                let d = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                fall(&self.profile, d / radius)
            }
            BumpShape::Tube { frame, threshold, delta } => {
                let (coords, proj) = frame.coords_and_projection(x);
                let mut v = 1.0;
                for l in coords {
                    v *= self.profile.value(3.0 * l / threshold - 4.0);
                    if v == 0.0 {
                        return 0.0;
                    }
                }
                let n = x.iter().zip(&proj).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                v * fall(&self.profile, n / delta)
            }
        }
    }
}

/// `theta_s = bump_s / sum of bumps` over a cover.
#[derive(Clone, Debug)]
pub struct PartitionOfUnity {
    cover: SkeletonCover,
    profile: SmoothstepProfile,
    bumps: Vec<BumpFunction>,
    index: BucketIndex,
}

/// Buckets along the first coordinate.
#[derive(Clone, Debug)]
struct BucketIndex {
    origin: f64,
    width: f64,
    buckets: Vec<Vec<usize>>,
}

impl BucketIndex {
    fn new(bumps: &[BumpFunction]) -> Self {
        let lo = bumps.iter().map(|b| b.lo.first().copied().unwrap_or(0.0)).fold(f64::INFINITY, f64::min);
        let hi = bumps.iter().map(|b| b.hi.first().copied().unwrap_or(0.0)).fold(f64::NEG_INFINITY, f64::max);
        let count = (bumps.len() / 4).clamp(1, 4096);
        let width = ((hi - lo) / count as f64).max(f64::MIN_POSITIVE);
        let mut buckets = vec![Vec::new(); count];
        for (i, b) in bumps.iter().enumerate() {
            let (a, z) = match (b.lo.first(), b.hi.first()) {
                (Some(a), Some(z)) => (*a, *z),
                _ => (lo, hi),
            };
            let first = (((a - lo) / width).floor().max(0.0) as usize).min(count - 1);
            let last = (((z - lo) / width).floor().max(0.0) as usize).min(count - 1);
            for bucket in &mut buckets[first..=last] {
                bucket.push(i);
            }
        }
        BucketIndex { origin: lo, width, buckets }
    }

    fn candidates(&self, x: &[f64]) -> &[usize] {
        let c = x.first().copied().unwrap_or(self.origin);
        let k = ((c - self.origin) / self.width).floor();
        if !(k >= 0.0 && (k as usize) < self.buckets.len()) {
            return &[];
        }
        &self.buckets[k as usize]
    }
}

pub fn partition_of_unity(cover: &SkeletonCover, profile: &SmoothstepProfile) -> PartitionOfUnity {
    let bumps: Vec<BumpFunction> = cover.elements().iter().map(|e| bump(e, profile)).collect();
    let index = BucketIndex::new(&bumps);
    PartitionOfUnity { cover: cover.clone(), profile: profile.clone(), bumps, index }
}

impl PartitionOfUnity {
    pub fn cover(&self) -> &SkeletonCover {
        &self.cover
    }

    pub fn profile(&self) -> &SmoothstepProfile {
        &self.profile
    }

    pub fn bumps(&self) -> &[BumpFunction] {
        &self.bumps
    }

    /// Nonzero `(s, theta_s(x))` pairs, in element order.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<(SimplexId, f64)>, SmoothError> {
        let mut active: Vec<(SimplexId, f64)> = Vec::new();
        let mut idx: Vec<usize> = self.index.candidates(x).to_vec();
        idx.sort_unstable();
        for i in idx {
            let v = self.bumps[i].evaluate(x);
            if v > 0.0 {
                active.push((self.bumps[i].simplex, v));
            }
        }
        let total: f64 = active.iter().map(|(_, v)| v).sum();
        if total <= 0.0 {
            return Err(SmoothError::ZeroDenominator(x.to_vec()));
        }
        for (_, v) in &mut active {
            *v /= total;
        }
        Ok(active)
    }
}

/// Step ladder of [`smoothness_order`], in units of the length scale.
pub const STEP_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Result of [`smoothness_order`].
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessReport {
    /// Largest `k` with all orders `0..=k` matching; `None` when discontinuous.
    pub order: Option<usize>,
    /// First order whose one-sided differences disagree.
    pub first_failure: Option<usize>,
    /// `mismatches[k][r]`: jump of the `k`-th derivative estimate at ladder rung `r`.
    pub mismatches: Vec<Vec<f64>>,
    pub tolerances: Vec<Vec<f64>>,
}

impl SmoothnessReport {
    pub fn at_least(&self, k: usize) -> bool {
        self.order.is_some_and(|o| o >= k)
    }
}

fn binomial_f(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Measures the order of contact of a curve across `t0`.
///
/// `f` is sampled at `t0 ± m h L`; one-sided `k`-th differences (which never touch `t0`)
/// are compared for `k = 0..=nu_max`.  Order `k` passes when the jump stays below
/// `10 h (max_j<=k+1 |D_j|) + 10 * roundoff` at every rung of the ladder.
pub fn smoothness_order<F>(f: F, t0: f64, nu_max: usize, length: f64) -> Result<SmoothnessReport, SmoothError>
where
    F: Fn(f64) -> Result<Vec<f64>, String>,
{
    let sample = |t: f64| -> Result<Vec<f64>, SmoothError> {
        let v = f(t).map_err(|reason| SmoothError::EvaluationFailure { t, reason })?;
        if v.iter().any(|c| !c.is_finite()) {
            return Err(SmoothError::EvaluationFailure { t, reason: "non-finite value".into() });
        }
        Ok(v)
    };
    let kmax = nu_max + 1;
    let mut mismatches = vec![Vec::new(); nu_max + 1];
    let mut tolerances = vec![Vec::new(); nu_max + 1];
    let mut failed = vec![false; nu_max + 1];
    for &h in &STEP_LADDER {
        let step = h * length;
        let right: Vec<Vec<f64>> = (1..=kmax + 1).map(|m| sample(t0 + m as f64 * step)).collect::<Result<_, _>>()?;
        let left: Vec<Vec<f64>> = (1..=kmax + 1).map(|m| sample(t0 - m as f64 * step)).collect::<Result<_, _>>()?;
        let dim = right[0].len();
        let fmax = right.iter().chain(&left).flat_map(|v| v.iter().map(|c| c.abs())).fold(0.0, f64::max);
        let diff = |side: &[Vec<f64>], k: usize, sign: f64| -> Vec<f64> {
            (0..dim)
                .map(|c| {
                    let s: f64 = (0..=k)
                        .map(|i| {
                            let w = binomial_f(k, i) * if (k - i) % 2 == 1 { -1.0 } else { 1.0 };
                            w * side[i][c]
                        })
                        .sum();
                    s / h.powi(k as i32) * sign.powi(k as i32)
                })
                .collect()
        };
        let dr: Vec<Vec<f64>> = (0..=kmax).map(|k| diff(&right, k, 1.0)).collect();
        let dl: Vec<Vec<f64>> = (0..=kmax).map(|k| diff(&left, k, -1.0)).collect();
        for k in 0..=nu_max {
            let m = dr[k].iter().zip(&dl[k]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let scale = (0..=k + 1)
                .flat_map(|j| dr[j].iter().chain(&dl[j]).map(|c| c.abs()))
                .fold(0.0, f64::max);
            let noise = 2f64.powi(k as i32 + 1) * 4.0 * f64::EPSILON * fmax / h.powi(k as i32);
            let tol = 10.0 * h * scale + 10.0 * noise;
            if m > tol {
                failed[k] = true;
            }
            mismatches[k].push(m);
            tolerances[k].push(tol);
        }
    }
    let first_failure = failed.iter().position(|f| *f);
    let order = match first_failure {
        Some(0) => None,
        Some(k) => Some(k - 1),
        None => Some(nu_max),
    };
    Ok(SmoothnessReport { order, first_failure, mismatches, tolerances })
}

/// [`smoothness_order`] along the line `point + t * direction` across `t = 0`.
pub fn smoothness_across<F>(
    f: F,
    point: &[f64],
    direction: &[f64],
    nu_max: usize,
    length: f64,
) -> Result<SmoothnessReport, SmoothError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, String>,
{
    smoothness_order(
        |t| {
            let x: Vec<f64> = point.iter().zip(direction).map(|(p, d)| p + t * d).collect();
            f(&x)
        },
        0.0,
        nu_max,
        length,
    )
}
