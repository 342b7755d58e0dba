//! Smooths the tent map on the split segment and certifies error, carriers and seams.

use smoothpl::approx::PlMap;
use smoothpl::complex::{build_complex, Point};
use smoothpl::rational::{frac, int};
use smoothpl::sampling::lattice;
use smoothpl::smoother::{smooth_map, CarrierAssignment, PiecewiseMap};

fn main() {
    let k = build_complex(vec![Point(vec![int(0)]), Point(vec![frac(1, 2)]), Point(vec![int(1)])], &[vec![0, 1], vec![1, 2]])
        .unwrap();
    let l = build_complex(vec![Point(vec![int(0)]), Point(vec![int(1)])], &[vec![0, 1]]).unwrap();
    let tent = PlMap::new(k.clone(), vec![Point(vec![int(0)]), Point(vec![int(1)]), Point(vec![int(0)])]).unwrap();
    let carriers = CarrierAssignment::from_pl(&tent, &l).unwrap();
    let g = PiecewiseMap::Pl(tent);

    for eta in [frac(1, 10), frac(1, 100)] {
        let h = smooth_map(&g, &l, carriers.clone(), &eta, 2).unwrap();
        let cert = h.certify(&lattice(&k, 2000)).unwrap();
        let seams = h.smoothness(2).unwrap();
        let min_order = seams.iter().filter_map(|s| s.order).min();
        println!(
            "eta={eta}: delta={} sup error {:.3e} < {}, min barycentric {:.1e}, seams {} min order {min_order:?}",
            h.delta(),
            cert.sup_error,
            cert.bound,
            cert.min_barycentric,
            seams.len()
        );
    }
    let h = smooth_map(&g, &l, carriers, &frac(1, 10), 2).unwrap();
    for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("H({x}) = {:.6}", h.evaluate_f64(&[x]).unwrap()[0]);
    }
}
