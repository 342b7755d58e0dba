//! Certified `C^nu` smoothing of piecewise-linear maps between compact polyhedra, and
//! smooth weak retractions onto coordinate normal-crossings divisors.
//!
//! All geometric predicates run in exact rational arithmetic ([`rational::Q`]); floats are
//! used only to evaluate smooth maps and their finite-difference smoothness checks.
//!
//! The pipeline:
//!
//! * [`complex`]: simplicial complexes, barycentric subdivision, point location.
//! * [`approx`]: PL maps and simplicial approximation under the star condition.
//! * [`cover`]: the skeleton cover of balls and widening tubes, with exact verification.
//! * [`smooth`]: smoothstep profiles, bump functions, partitions of unity, and the
//!   smoothness-order measurement.
//! * [`smoother`]: `H = sum theta_s g(r_s)`, carrier certificates, `iota_n`, pullbacks and
//!   the end-to-end [`smoother::approximate_map`].
//! * [`crossings`]: strata, compatible retractions, collar squashes, the weak retraction.
//! * [`io`]: JSON formats with exact rationals and the batch runner behind the `smoothpl`
//!   binary.
//!
//! Runnable examples: `subdivide`, `simplicial_approx`, `cover`, `partition`,
//! `smooth_tent`, `iota`, `cone_pipeline`, `weak_retraction`.
//!
//! ```
//! use smoothpl::approx::PlMap;
//! use smoothpl::complex::{build_complex, Point};
//! use smoothpl::rational::{frac, int};
//! use smoothpl::smoother::{smooth_map, CarrierAssignment, PiecewiseMap};
//!
//! let k = build_complex(
//!     vec![Point(vec![int(0)]), Point(vec![frac(1, 2)]), Point(vec![int(1)])],
//!     &[vec![0, 1], vec![1, 2]],
//! )
//! .unwrap();
//! let l = build_complex(vec![Point(vec![int(0)]), Point(vec![int(1)])], &[vec![0, 1]]).unwrap();
//! let tent = PlMap::new(k.clone(), vec![Point(vec![int(0)]), Point(vec![int(1)]), Point(vec![int(0)])]).unwrap();
//! let carriers = CarrierAssignment::from_pl(&tent, &l).unwrap();
//! let h = smooth_map(&PiecewiseMap::Pl(tent), &l, carriers, &frac(1, 10), 2).unwrap();
//! assert!((h.evaluate_f64(&[0.5]).unwrap()[0] - 1.0).abs() < 0.1);
//! ```

pub mod complex;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod approx;
pub mod cover;
pub mod smooth;
pub mod sampling;
pub mod smoother;
pub mod crossings;
pub mod io;
