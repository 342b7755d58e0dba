//! Simplicial approximation of the tent map `[0, 1] -> [0, 1]`.

use smoothpl::approx::{simplicial_approximation, star_condition, EvaluableMap, PlMap, DEFAULT_SUBDIVISION_CAP};
use smoothpl::complex::{build_complex, Point};
use smoothpl::rational::{frac, int, to_f64};

fn main() {
    let k = build_complex(vec![Point(vec![int(0)]), Point(vec![frac(1, 2)]), Point(vec![int(1)])], &[vec![0, 1], vec![1, 2]])
        .unwrap();
    let l = build_complex(vec![Point(vec![int(0)]), Point(vec![int(1)])], &[vec![0, 1]]).unwrap();
    let tent = EvaluableMap::Pl(PlMap::new(k.clone(), vec![Point(vec![int(0)]), Point(vec![int(1)]), Point(vec![int(0)])]).unwrap());

    for eps in [frac(3, 5), frac(3, 10), frac(1, 10)] {
        let a = simplicial_approximation(&k, &l, &tent, &eps, DEFAULT_SUBDIVISION_CAP).unwrap();
        let star = star_condition(a.map.source(), a.map.target(), &tent, a.map.vertex_map()).unwrap();
        let g = a.map.to_pl();
        let mut sup: f64 = 0.0;
        for i in 0..=1000 {
            let x = [i as f64 / 1000.0];
            sup = sup.max((g.evaluate_f64(&x).unwrap()[0] - tent.evaluate_f64(&x).unwrap()[0]).abs());
        }
        println!(
            "eps={eps}: K^({}) -> L^({}), star condition {star}, mesh(L) {:.4}, sup error {sup:.4}",
            a.k,
            a.l,
            to_f64(&a.target_mesh2).sqrt()
        );
    }
}
