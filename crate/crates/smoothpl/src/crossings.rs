//! Coordinate normal-crossings divisors `X = ∪_{j∈J} {x_j = 0}`: strata, compatible
//! retractions, collar squashes and the weak retraction `rho = Psi_1 ∘ ... ∘ Psi_s`.

use crate::rational::{frac, to_f64, Q};
use crate::smooth::{smoothness_order, smoothstep, SmoothError, SmoothnessReport, SmoothstepProfile};
use itertools::Itertools;
use num::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CrossingsError {
    #[error("a divisor needs at least one component")]
    EmptyIndexSet,
    #[error("component {index} is not in 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("eta must be positive, got {0}")]
    NonPositiveEta(String),
    #[error("point {0} is outside the retraction domain")]
    OutsideDomain(String),
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Smooth(#[from] SmoothError),
}

/// `X = ∪_{j∈J} {x_j = 0}` in `R^d`, with `J` 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateDivisor {
    dim: usize,
    components: Vec<usize>,
    bounds: Option<Vec<(Q, Q)>>,
}

impl CoordinateDivisor {
    pub fn new(dim: usize, components: &[usize]) -> Result<Self, CrossingsError> {
        let mut components: Vec<usize> = components.to_vec();
        components.sort_unstable();
        components.dedup();
        if components.is_empty() {
            return Err(CrossingsError::EmptyIndexSet);
        }
        if let Some(&bad) = components.iter().find(|&&j| j == 0 || j > dim) {
            return Err(CrossingsError::IndexOutOfRange { index: bad, dim });
        }
        Ok(CoordinateDivisor { dim, components, bounds: None })
    }

    /// Restricts attention to a box `∏ [lo_i, hi_i]`.
    pub fn with_box(mut self, bounds: Vec<(Q, Q)>) -> Result<Self, CrossingsError> {
        if bounds.len() != self.dim {
            return Err(CrossingsError::DimensionMismatch { expected: self.dim, found: bounds.len() });
        }
        self.bounds = Some(bounds);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn bounds(&self) -> Option<&[(Q, Q)]> {
        self.bounds.as_deref()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.components.iter().any(|&j| x[j - 1].is_zero())
    }

    pub fn contains_f64(&self, x: &[f64]) -> bool {
        self.components.iter().any(|&j| x[j - 1] == 0.0)
    }

    pub fn in_box(&self, x: &[Q]) -> bool {
        self.bounds.as_ref().is_none_or(|b| x.iter().zip(b).all(|(v, (lo, hi))| v >= lo && v <= hi))
    }
}

/// `{x_i = 0 : i ∈ I}`, a component of `Sing_l(X)` with `|I| = l + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stratum {
    pub level: usize,
    pub indices: Vec<usize>,
}

impl Stratum {
    pub fn dim(&self, ambient: usize) -> usize {
        ambient - self.indices.len()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.indices.iter().all(|&i| x[i - 1].is_zero())
    }
}

/// The components of `Sing_level(X)`; empty once `level + 1 > |J|`.
pub fn sing_stratification(x: &CoordinateDivisor, level: usize) -> Vec<Stratum> {
    x.components
        .iter()
        .copied()
        .combinations(level + 1)
        .map(|indices| Stratum { level, indices })
        .collect()
}

/// The coordinate projection onto a stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleRetraction {
    pub stratum: Stratum,
}

pub fn compatible_retraction(z: &Stratum, x: &CoordinateDivisor) -> Result<CompatibleRetraction, CrossingsError> {
    if let Some(&bad) = z.indices.iter().find(|i| !x.components.contains(i)) {
        return Err(CrossingsError::IndexOutOfRange { index: bad, dim: x.dim });
    }
    Ok(CompatibleRetraction { stratum: z.clone() })
}

impl CompatibleRetraction {
    pub fn evaluate(&self, x: &[Q]) -> Vec<Q> {
        let mut y = x.to_vec();
        for &i in &self.stratum.indices {
            y[i - 1] = Q::zero();
        }
        y
    }
}

/// `Psi_j`: `x_j -> f(x_j / eta) x_j` with `f = 0` on `|t| <= 1/3` and `f = 1` on `|t| >= 1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CollarSquash {
    pub j: usize,
    eta: Q,
    eta_f: f64,
    profile: SmoothstepProfile,
}

pub fn collar_squash(j: usize, eta: &Q, nu: usize) -> Result<CollarSquash, CrossingsError> {
    if !eta.is_positive() {
        return Err(CrossingsError::NonPositiveEta(eta.to_string()));
    }
    Ok(CollarSquash { j, eta: eta.clone(), eta_f: to_f64(eta), profile: smoothstep(nu)? })
}

impl CollarSquash {
    pub fn eta(&self) -> &Q {
        &self.eta
    }

    /// `f(t)`, even, from the smoothstep on `[1/3, 1/2]`.
    pub fn transition(&self, t: f64) -> f64 {
        self.profile.value((t.abs() - 1.0 / 3.0) * 6.0)
    }

    pub fn transition_exact(&self, t: &Q) -> Q {
        self.profile.value_exact(&((t.abs() - frac(1, 3)) * Q::from_integer(6.into())))
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        let t = x[self.j - 1];
        y[self.j - 1] = if t.abs() * 3.0 <= self.eta_f { 0.0 } else { self.transition(t / self.eta_f) * t };
        y
    }

    pub fn evaluate(&self, x: &[Q]) -> Vec<Q> {
        let mut y = x.to_vec();
        let t = &x[self.j - 1];
        y[self.j - 1] = self.transition_exact(&(t / &self.eta)) * t;
        y
    }

    /// `W*_j = {|x_j| <= eta/3}`, where coordinate `j` is flattened to 0.
    pub fn collapses(&self, x: &[Q]) -> bool {
        x[self.j - 1].abs() * Q::from_integer(3.into()) <= self.eta
    }
}

/// `rho = Psi_{j_1} ∘ ... ∘ Psi_{j_s}` with `j_1 < ... < j_s`, so `Psi_{j_s}` acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakRetraction {
    divisor: CoordinateDivisor,
    squashes: Vec<CollarSquash>,
    eta: Q,
}

pub fn weak_retraction(x: &CoordinateDivisor, eta: &Q, nu: usize) -> Result<WeakRetraction, CrossingsError> {
    let squashes = x.components.iter().map(|&j| collar_squash(j, eta, nu)).collect::<Result<_, _>>()?;
    Ok(WeakRetraction { divisor: x.clone(), squashes, eta: eta.clone() })
}

impl WeakRetraction {
    pub fn divisor(&self) -> &CoordinateDivisor {
        &self.divisor
    }

    pub fn eta(&self) -> &Q {
        &self.eta
    }

    pub fn squashes(&self) -> &[CollarSquash] {
        &self.squashes
    }

    /// Composition order as applied, first to last.
    pub fn order(&self) -> Vec<usize> {
        self.squashes.iter().rev().map(|s| s.j).collect()
    }

    fn check(&self, n: usize) -> Result<(), CrossingsError> {
        if n != self.divisor.dim {
            return Err(CrossingsError::DimensionMismatch { expected: self.divisor.dim, found: n });
        }
        Ok(())
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> Result<Vec<f64>, CrossingsError> {
        self.check(x.len())?;
        Ok(self.squashes.iter().rev().fold(x.to_vec(), |y, s| s.evaluate_f64(&y)))
    }

    pub fn evaluate(&self, x: &[Q]) -> Result<Vec<Q>, CrossingsError> {
        self.check(x.len())?;
        Ok(self.squashes.iter().rev().fold(x.to_vec(), |y, s| s.evaluate(&y)))
    }

    /// `W = ∪_j (Psi_{j+1} ∘ ... ∘ Psi_s)^{-1}(W*_j)`, propagated back through the
    /// composition exactly.
    pub fn in_domain(&self, x: &[Q]) -> bool {
        let mut y = x.to_vec();
        for s in self.squashes.iter().rev() {
            if s.collapses(&y) {
                return true;
            }
            y = s.evaluate(&y);
        }
        false
    }

    /// Smoothness of `rho` along `e_j` through `base`, across each seam `x_j = ±eta/3, ±eta/2`.
    pub fn seam_smoothness(&self, base: &[f64], nu_max: usize) -> Result<Vec<SeamSmoothness>, CrossingsError> {
        self.check(base.len())?;
        let eta = to_f64(&self.eta);
        let seams: Vec<(usize, f64)> = self
            .divisor
            .components
            .iter()
            .flat_map(|&j| [-0.5, -1.0 / 3.0, 1.0 / 3.0, 0.5].map(|c| (j, c * eta)))
            .collect();
        seams
            .into_par_iter()
            .map(|(j, t0)| {
                let report = smoothness_order(
                    |t| {
                        let mut x = base.to_vec();
                        x[j - 1] = t;
                        self.evaluate_f64(&x).map_err(|e| e.to_string())
                    },
                    t0,
                    nu_max,
                    eta / 6.0,
                )?;
                Ok(SeamSmoothness { j, t0, report })
            })
            .collect()
    }
}

/// Smoothness across one seam of one squash.
#[derive(Clone, Debug, PartialEq)]
pub struct SeamSmoothness {
    pub j: usize,
    pub t0: f64,
    pub report: SmoothnessReport,
}

/// Output of [`retraction_products`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProductReport {
    pub checked: usize,
    /// `(sample index, diagnostic)` for samples outside `W`.
    pub rejected: Vec<(usize, String)>,
    /// Largest `|∏_j rho(x)_j|` in float mode.
    pub max_product: f64,
    /// Whether the exact product vanished at every accepted sample.
    pub exact_zero: bool,
    /// Largest `|rho(x) - x|`.
    pub max_displacement: f64,
}

/// Checks `rho(x) ∈ X` at each sample of `W`, exactly and in floats.
pub fn retraction_products(rho: &WeakRetraction, samples: &[Vec<Q>]) -> Result<ProductReport, CrossingsError> {
    let results: Vec<Result<(bool, f64, f64), String>> = samples
        .par_iter()
        .map(|x| {
            if x.len() != rho.divisor.dim || !rho.in_domain(x) {
                return Err(format!("{} is outside W", crate::complex::Point(x.clone())));
            }
            let exact = rho.evaluate(x).map_err(|e| e.to_string())?;
            let xf: Vec<f64> = x.iter().map(to_f64).collect();
            let yf = rho.evaluate_f64(&xf).map_err(|e| e.to_string())?;
            let zero = rho.divisor.components.iter().any(|&j| exact[j - 1].is_zero());
            let product = rho.divisor.components.iter().map(|&j| yf[j - 1]).product::<f64>().abs();
            let disp = xf.iter().zip(&yf).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            Ok((zero, product, disp))
        })
        .collect();
    let mut report = ProductReport { exact_zero: true, ..Default::default() };
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Err(diag) => report.rejected.push((i, diag)),
            Ok((zero, product, disp)) => {
                report.checked += 1;
                report.exact_zero &= zero;
                report.max_product = report.max_product.max(product);
                report.max_displacement = report.max_displacement.max(disp);
            }
        }
    }
    Ok(report)
}

/// Largest `|rho(x) - x|` over samples of `X`.
pub fn displacement_on(rho: &WeakRetraction, samples: &[Vec<f64>]) -> Result<f64, CrossingsError> {
    samples.iter().try_fold(0.0f64, |acc, x| {
        let y = rho.evaluate_f64(x)?;
        Ok(acc.max(x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_f64, int};

    fn q(x: f64) -> Q {
        from_f64(x)
    }

    #[test]
    fn strata_of_three_planes() {
        let x = CoordinateDivisor::new(3, &[1, 2, 3]).unwrap();
        let lines = sing_stratification(&x, 1);
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|s| s.dim(3) == 1));
        let origin = sing_stratification(&x, 2);
        assert_eq!(origin, vec![Stratum { level: 2, indices: vec![1, 2, 3] }]);
        assert!(sing_stratification(&x, 3).is_empty());
        assert_eq!(CoordinateDivisor::new(3, &[]), Err(CrossingsError::EmptyIndexSet));
        assert_eq!(CoordinateDivisor::new(2, &[3]), Err(CrossingsError::IndexOutOfRange { index: 3, dim: 2 }));
    }

    #[test]
    fn compatible_retraction_examples() {
        let x = CoordinateDivisor::new(3, &[1, 2, 3]).unwrap();
        let z = Stratum { level: 1, indices: vec![1, 2] };
        let r = compatible_retraction(&z, &x).unwrap();
        assert_eq!(r.evaluate(&[int(4), int(5), int(6)]), vec![int(0), int(0), int(6)]);
        assert_eq!(r.evaluate(&[int(0), int(5), int(6)]), vec![int(0), int(0), int(6)]);
        let fixed = vec![int(0), int(0), int(7)];
        assert_eq!(r.evaluate(&fixed), fixed);
    }

    #[test]
    fn squash_thresholds() {
        let s = collar_squash(1, &frac(3, 10), 1).unwrap();
        assert_eq!(s.evaluate_f64(&[0.05]), vec![0.0]);
        assert_eq!(s.evaluate_f64(&[0.2]), vec![0.2]);
        assert_eq!(s.evaluate(&[frac(1, 20)]), vec![int(0)]);
        assert_eq!(s.evaluate(&[frac(1, 5)]), vec![frac(1, 5)]);
        for i in -100..=100 {
            let t = i as f64 * 0.0015;
            let y = s.evaluate_f64(&[t])[0];
            assert!((y - t).abs() <= t.abs() + 1e-15);
            if t.abs() < 0.15 {
                assert!((y - t).abs() < 0.15);
            }
        }
        let s1 = collar_squash(1, &frac(3, 10), 2).unwrap();
        assert_eq!(s1.evaluate(&[q(0.01), int(0)])[1], int(0));
    }

    #[test]
    fn weak_retraction_examples() {
        let x = CoordinateDivisor::new(2, &[1, 2]).unwrap();
        let rho = weak_retraction(&x, &frac(3, 10), 1).unwrap();
        assert_eq!(rho.evaluate(&[frac(1, 20), frac(1, 20)]).unwrap(), vec![int(0), int(0)]);
        assert_eq!(rho.evaluate(&[frac(1, 20), int(0)]).unwrap(), vec![int(0), int(0)]);
        assert_eq!(rho.evaluate(&[int(1), int(1)]).unwrap(), vec![int(1), int(1)]);
        assert!(!rho.in_domain(&[int(1), int(1)]));
        assert!(rho.in_domain(&[frac(1, 20), int(1)]));
        let report = retraction_products(&rho, &[vec![frac(1, 20), int(1)], vec![int(1), int(1)]]).unwrap();
        assert_eq!(report.checked, 1);
        assert_eq!(report.rejected.len(), 1);
        assert!(report.exact_zero);
        assert_eq!(rho.order(), vec![2, 1]);
    }

    #[test]
    fn seams_have_order_nu() {
        let x = CoordinateDivisor::new(2, &[1, 2]).unwrap();
        for nu in 1..=3 {
            let rho = weak_retraction(&x, &frac(1, 10), nu).unwrap();
            for seam in rho.seam_smoothness(&[0.3, 0.7], nu + 1).unwrap() {
                assert_eq!(seam.report.order, Some(nu), "{seam:?}");
            }
        }
    }
}
