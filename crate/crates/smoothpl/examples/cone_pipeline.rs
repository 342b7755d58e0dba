//! `f(t) = (t, |t|)` from `[-1, 1]` into the cone `{|y| = |x|, |x| <= 1}`: simplicial
//! approximation, then smoothing, with exact image containment.

use smoothpl::approx::{EvaluableMap, PlMap};
use smoothpl::complex::{build_complex, Point};
use smoothpl::rational::{frac, int};
use smoothpl::sampling::lattice;
use smoothpl::smoother::{approximate_map, ApproximationOptions};

fn main() {
    let k = build_complex(vec![Point(vec![int(-1)]), Point(vec![int(0)]), Point(vec![int(1)])], &[vec![0, 1], vec![1, 2]])
        .unwrap();
    let cone_pts = [(0, 0), (1, 1), (-1, 1), (-1, -1), (1, -1)].map(|(a, b)| Point(vec![int(a), int(b)]));
    let cone = build_complex(cone_pts.to_vec(), &[vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4]]).unwrap();
    let f = EvaluableMap::Pl(
        PlMap::new(k.clone(), vec![Point(vec![int(-1), int(1)]), Point(vec![int(0), int(0)]), Point(vec![int(1), int(1)])]).unwrap(),
    );

    let a = approximate_map(&k, &cone, &f, &frac(1, 20), 1, &ApproximationOptions::default()).unwrap();
    println!("simplicial stage: K^({}) -> L^({})", a.simplicial.k, a.simplicial.l);
    let cert = a.certify(&f, &lattice(&k, 4000)).unwrap();
    println!(
        "sup |H - f| = {:.4e} < {}, min barycentric {:.1e}, normal distance {:.1e}",
        cert.sup_error, cert.bound, cert.min_barycentric, cert.max_normal
    );
    for t in [-0.5, -0.01, 0.0, 0.01, 0.5] {
        let y = a.evaluate_f64(&[t]).unwrap();
        println!("H({t:+.2}) = ({:+.5}, {:+.5})  |x|-|y| = {:+.1e}", y[0], y[1], y[0].abs() - y[1].abs());
    }
}
