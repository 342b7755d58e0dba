//! The smooth self-maps iota_n of a triangulated square, and smoothing `|x - 1/2|` by
//! precomposition.

use smoothpl::approx::PlMap;
use smoothpl::complex::{build_complex, Point};
use smoothpl::rational::{frac, int, to_f64};
use smoothpl::sampling::lattice;
use smoothpl::smooth::smoothness_order;
use smoothpl::smoother::{iota, pullback_smooth, PiecewiseMap};

fn main() {
    let pts = [(0, 0), (1, 0), (1, 1), (0, 1)].map(|(a, b)| Point(vec![int(a), int(b)]));
    let square = build_complex(pts.to_vec(), &[vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
    let samples = lattice(&square, 500);
    for n in [1, 3, 5, 8] {
        let i = iota(&square, 1, n).unwrap();
        let mut sup: f64 = 0.0;
        for x in &samples {
            let xf = x.to_f64();
            let y = i.evaluate_f64(&xf).unwrap();
            sup = sup.max(xf.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt());
        }
        println!("n={n}: sup |x - iota(x)| = {sup:.3e} < {:.3e}, vertex defect {:e}", to_f64(&i.bound()), i.vertex_defect().unwrap());
    }

    let k = build_complex(vec![Point(vec![int(0)]), Point(vec![frac(1, 2)]), Point(vec![int(1)])], &[vec![0, 1], vec![1, 2]])
        .unwrap();
    let f = PiecewiseMap::Pl(PlMap::new(k.clone(), vec![Point(vec![frac(1, 2)]), Point(vec![int(0)]), Point(vec![frac(1, 2)])]).unwrap());
    for nu in 1..=2 {
        let pb = pullback_smooth(&f, &iota(&k, nu, 5).unwrap()).unwrap();
        let report = smoothness_order(|t| pb.evaluate_f64(&[t]).map_err(|e| e.to_string()), 0.5, nu, 0.01).unwrap();
        println!("nu={nu}: f o iota_5 at the kink has order {:?}, |f o iota - f| < {}", report.order, pb.convergence_bound().unwrap());
    }
}
