use num::{Signed, Zero};
use proptest::prelude::*;
use smoothpl::approx::PlMap;
use smoothpl::complex::{build_complex, Point, SimplicialComplex};
use smoothpl::cover::build_cover;
use smoothpl::crossings::{compatible_retraction, sing_stratification, weak_retraction, CoordinateDivisor};
use smoothpl::io::{CoverFile, Rational};
use smoothpl::rational::{frac, int, to_f64, Q};
use smoothpl::sampling::lattice;
use smoothpl::smooth::{partition_of_unity, smoothstep};
use smoothpl::smoother::{smooth_map, CarrierAssignment, PiecewiseMap};

fn segment(cuts: &[i64]) -> SimplicialComplex {
    let mut xs: Vec<i64> = cuts.to_vec();
    xs.push(0);
    xs.push(64);
    xs.sort_unstable();
    xs.dedup();
    let pts = xs.iter().map(|&x| Point(vec![frac(x, 64)])).collect();
    let simplices: Vec<Vec<usize>> = (0..xs.len() - 1).map(|i| vec![i, i + 1]).collect();
    build_complex(pts, &simplices).unwrap()
}

fn triangle() -> impl Strategy<Value = SimplicialComplex> {
    prop::array::uniform6(-8i64..=8)
        .prop_filter("non-degenerate", |c| (c[2] - c[0]) * (c[5] - c[1]) != (c[4] - c[0]) * (c[3] - c[1]))
        .prop_map(|c| {
            let pts = (0..3).map(|i| Point(vec![int(c[2 * i]), int(c[2 * i + 1])])).collect();
            build_complex(pts, &[vec![0, 1, 2]]).unwrap()
        })
}

fn rational() -> impl Strategy<Value = Q> {
    (-1000i64..=1000, 1i64..=1000).prop_map(|(n, d)| frac(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subdivision_mesh_decays(k in triangle(), level in 1usize..=3) {
        let base = k.mesh_size().unwrap().squared;
        let sub = k.barycentric_subdivide(level);
        let mesh = sub.mesh_size().unwrap().squared;
        prop_assert!(mesh <= num::pow(frac(4, 9), level) * base);
        let f = sub.f_vector();
        prop_assert_eq!(f[0] as i64 - f[1] as i64 + f[2] as i64, 1);
        for v in sub.vertices() {
            prop_assert!(k.locate(v).is_ok());
        }
    }

    #[test]
    fn rational_json_round_trip(q in rational()) {
        let text = serde_json::to_string(&Rational(q.clone())).unwrap();
        let back: Rational = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.0, q);
    }

    #[test]
    fn smoothstep_symmetric_and_monotone(nu in 1usize..=5, n in 0i64..=256) {
        let p = smoothstep(nu).unwrap();
        let u = frac(n, 256);
        prop_assert_eq!(p.value_exact(&u) + p.value_exact(&(int(1) - &u)), int(1));
        let next = frac((n + 1).min(256), 256);
        prop_assert!(p.value_exact(&next) >= p.value_exact(&u));
        prop_assert!(p.value(to_f64(&u)) >= 0.0 && p.value(to_f64(&u)) <= 1.0);
    }

    #[test]
    fn weights_sum_to_one(cuts in prop::collection::vec(1i64..64, 0..4), nu in 1usize..=3, t in 0.0f64..=1.0) {
        let k = segment(&cuts);
        let cover = build_cover(&k, &frac(1, 32)).unwrap();
        let pou = partition_of_unity(&cover, &smoothstep(nu).unwrap());
        let w = pou.evaluate(&[t]).unwrap();
        prop_assert!(w.iter().all(|(_, v)| *v >= 0.0));
        prop_assert!((w.iter().map(|(_, v)| v).sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cover_serialization_round_trips(cuts in prop::collection::vec(1i64..64, 0..3), d in 2i64..40) {
        let k = segment(&cuts);
        let cover = build_cover(&k, &frac(1, d)).unwrap();
        prop_assert!(cover.verify().passed());
        let file = CoverFile::from_cover(&cover);
        let back: CoverFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(CoverFile::from_cover(&back.to_cover().unwrap()), file);
    }

    #[test]
    fn squashes_shrink_and_land_in_x(
        d in 2usize..=3,
        eta_den in 2i64..=100,
        coords in prop::collection::vec((-100i64..=100, 0usize..3), 3),
        nu in 1usize..=3,
    ) {
        let x = CoordinateDivisor::new(d, &(1..=d).collect::<Vec<_>>()).unwrap();
        let eta = frac(1, eta_den);
        let rho = weak_retraction(&x, &eta, nu).unwrap();
        // mix of far points and collar points
        let p: Vec<Q> = coords[..d]
            .iter()
            .map(|&(c, kind)| if kind == 0 { frac(c, 100) } else { &eta * frac(c, 200) })
            .collect();
        let y = rho.evaluate(&p).unwrap();
        for j in 0..d {
            prop_assert!(y[j].abs() <= p[j].abs());
            prop_assert!(p[j].is_zero() <= y[j].is_zero());
        }
        if rho.in_domain(&p) {
            prop_assert!(x.contains(&y));
        }
        let disp: f64 = p.iter().zip(&y).map(|(a, b)| to_f64(&(a - b)).powi(2)).sum::<f64>().sqrt();
        prop_assert!(disp <= to_f64(&eta) * d as f64 / 2.0 + 1e-15);
    }

    #[test]
    fn compatible_retractions_preserve_components(
        coords in prop::collection::vec(-5i64..=5, 4),
        level in 0usize..3,
        pick in 0usize..4,
    ) {
        let x = CoordinateDivisor::new(4, &[1, 2, 4]).unwrap();
        let strata = sing_stratification(&x, level);
        let z = &strata[pick % strata.len()];
        let r = compatible_retraction(z, &x).unwrap();
        let p: Vec<Q> = coords.iter().map(|&c| int(c)).collect();
        let y = r.evaluate(&p);
        prop_assert!(z.contains(&y));
        prop_assert_eq!(r.evaluate(&y), y.clone());
        for &k in x.components() {
            if p[k - 1].is_zero() {
                prop_assert!(y[k - 1].is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn smoothing_stays_in_carriers(images in prop::collection::vec(0i64..=8, 3), eta_den in 8i64..=40, nu in 1usize..=2) {
        let k = segment(&[32]);
        let l = build_complex(
            (0..=4).map(|i| Point(vec![frac(i, 4)])).collect(),
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]],
        )
        .unwrap();
        let g = PlMap::new(k.clone(), images.iter().map(|&v| Point(vec![frac(v, 8)])).collect()).unwrap();
        let carriers = CarrierAssignment::from_pl(&g, &l);
        prop_assume!(carriers.is_ok());
        let carriers = carriers.unwrap();
        let eta = frac(1, eta_den);
        let h = smooth_map(&PiecewiseMap::Pl(g), &l, carriers, &eta, nu).unwrap();
        let cert = h.certify(&lattice(&k, 400)).unwrap();
        prop_assert!(cert.passed(), "{:?}", cert);
    }
}
