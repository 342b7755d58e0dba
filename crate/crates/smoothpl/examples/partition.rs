//! Smoothstep bumps and the partition of unity on a split segment.

use smoothpl::complex::{build_complex, Point};
use smoothpl::cover::build_cover;
use smoothpl::rational::{frac, int};
use smoothpl::smooth::{partition_of_unity, smoothness_order, smoothstep};

fn main() {
    for nu in 1..=3 {
        let p = smoothstep(nu).unwrap();
        let coeffs: Vec<String> = p.coefficients().iter().map(|c| c.to_string()).collect();
        println!("P_{nu} = [{}]", coeffs.join(", "));
    }

    let k = build_complex(vec![Point(vec![int(0)]), Point(vec![frac(1, 2)]), Point(vec![int(1)])], &[vec![0, 1], vec![1, 2]])
        .unwrap();
    let cover = build_cover(&k, &frac(1, 8)).unwrap();
    let pou = partition_of_unity(&cover, &smoothstep(2).unwrap());

    let mut defect: f64 = 0.0;
    for i in 0..=10_000 {
        let w = pou.evaluate(&[i as f64 / 10_000.0]).unwrap();
        defect = defect.max((w.iter().map(|(_, t)| t).sum::<f64>() - 1.0).abs());
    }
    println!("max |sum theta - 1| = {defect:e}");

    let r = cover.elements()[1].radius().clone();
    let r = smoothpl::rational::to_f64(&r);
    let theta = |t: f64| pou.bumps()[1].evaluate(&[t]);
    for (label, t0) in [("plateau edge", 0.5 + r / 3.0), ("support edge", 0.5 + 2.0 * r / 3.0)] {
        let report = smoothness_order(|t| Ok(vec![theta(t)]), t0, 3, r / 6.0).unwrap();
        println!("{label} at {t0:.5}: order {:?}, first failure {:?}", report.order, report.first_failure);
    }
}
