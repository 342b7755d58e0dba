//! Weak retraction onto `{x1 x2 x3 = 0}` and the strata of its singular locus.

use smoothpl::crossings::{sing_stratification, weak_retraction, CoordinateDivisor};
use smoothpl::rational::{frac, int};

fn main() {
    let x = CoordinateDivisor::new(3, &[1, 2, 3]).unwrap();
    for level in 0..3 {
        let strata = sing_stratification(&x, level);
        let dims: Vec<usize> = strata.iter().map(|s| s.dim(3)).collect();
        println!("Sing_{level}: {} strata of dims {dims:?}", strata.len());
    }

    for eta in [frac(3, 10), frac(1, 10), frac(1, 100)] {
        let rho = weak_retraction(&x, &eta, 2).unwrap();
        let p = vec![eta.clone() / int(4), frac(1, 2), frac(-7, 10)];
        let y = rho.evaluate(&p).unwrap();
        let mut sup: f64 = 0.0;
        for i in -200..=200 {
            let t = i as f64 / 200.0;
            let q = [0.0, t, t * 0.5];
            let r = rho.evaluate_f64(&q).unwrap();
            sup = sup.max(q.iter().zip(&r).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt());
        }
        let seams = rho.seam_smoothness(&[0.8, 0.7, -0.6], 3).unwrap();
        let orders: Vec<Option<usize>> = seams.iter().map(|s| s.report.order).collect();
        println!(
            "eta={eta}: order {:?}, rho({}, 1/2, -7/10) = ({}, {}, {}), sup displacement on X {sup:.4}, seam orders {orders:?}",
            rho.order(),
            p[0],
            y[0],
            y[1],
            y[2]
        );
    }
}
