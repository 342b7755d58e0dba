//! Acceptance criteria 1-9.  One line per criterion; all criteria run sequentially so the
//! wall-clock budgets are measured without contention.  Runs without the libtest harness,
//! so the lines always print; exits nonzero when any criterion fails.

use num::{One, Zero};
use smoothpl::approx::{
    is_simplicial, simplicial_approximation, star_condition, EvaluableMap, PlMap, DEFAULT_SUBDIVISION_CAP,
};
use smoothpl::complex::{build_complex, Point, SimplicialComplex};
use smoothpl::cover::{build_cover, ElementShape, Region};
use smoothpl::crossings::{retraction_products, sing_stratification, weak_retraction, CoordinateDivisor};
use smoothpl::io::simplex_by_ids;
use smoothpl::rational::{frac, int, to_f64, Q};
use smoothpl::sampling::{lattice, random};
use smoothpl::smooth::{partition_of_unity, smoothness_order, smoothstep};
use smoothpl::smoother::{
    approximate_map, iota, pullback_smooth, smooth_map, ApproximationOptions, CarrierAssignment, PiecewiseMap,
};
use std::time::{Duration, Instant};

const GRID: usize = 10_000;
const WEIGHT_TOL: f64 = 1e-12;
const CARRIER_TOL: f64 = 1e-9;
const VERTEX_TOL: f64 = 1e-12;
const FLOAT_PRODUCT_TOL: f64 = 1e-12;
const CONE_EPS: (i64, i64) = (1, 20);

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass_if(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn q(v: i64) -> Point {
    Point(vec![int(v)])
}

fn split_segment() -> SimplicialComplex {
    build_complex(vec![q(0), Point(vec![frac(1, 2)]), q(1)], &[vec![0, 1], vec![1, 2]]).unwrap()
}

fn unit_interval() -> SimplicialComplex {
    build_complex(vec![q(0), q(1)], &[vec![0, 1]]).unwrap()
}

fn plane(pts: &[(i64, i64)], simplices: &[Vec<usize>]) -> SimplicialComplex {
    build_complex(pts.iter().map(|&(a, b)| Point(vec![int(a), int(b)])).collect(), simplices).unwrap()
}

fn square() -> SimplicialComplex {
    plane(&[(0, 0), (1, 0), (1, 1), (0, 1)], &[vec![0, 1, 2], vec![0, 2, 3]])
}

fn pl(k: &SimplicialComplex, images: Vec<Point>) -> PlMap {
    PlMap::new(k.clone(), images).unwrap()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Points on short lines through every vertex and barycenter, spaced at `scale / 20`,
/// kept when they lie in `|K|`.
fn probes(k: &SimplicialComplex, scale: f64) -> Vec<Vec<f64>> {
    let p = k.ambient_dim();
    let mut dirs: Vec<Vec<f64>> = (0..p).map(|i| (0..p).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    if p == 2 {
        dirs.push(vec![std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2]);
    }
    let mut out = Vec::new();
    for id in k.simplex_ids() {
        let c = k.barycenter(id).to_f64();
        for d in &dirs {
            for i in -40..=40 {
                let x: Vec<f64> = c.iter().zip(d).map(|(a, b)| a + b * scale * i as f64 / 20.0).collect();
                if let Some((_, low, normal)) = k.locate_f64(&x) {
                    if low >= 0.0 && normal == 0.0 {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let k = plane(&[(0, 0), (1, 0), (0, 1)], &[vec![0, 1, 2]]);
    let base = k.mesh_size().unwrap().squared;
    let mut worst = Vec::new();
    let mut ok = base == int(2);
    for level in 1..=5usize {
        let mesh = k.barycentric_subdivide(level).mesh_size().unwrap().squared;
        let bound = num::pow(frac(4, 9), level) * int(2);
        ok &= mesh <= bound;
        worst.push(format!("k={level}: {:.4}<={:.4}", to_f64(&mesh).sqrt(), to_f64(&bound).sqrt()));
    }
    pass_if(ok, format!("mesh(K^(k)) <= (2/3)^k sqrt(2) exact; {}", worst.join(", ")))
}

fn criterion_2() -> Outcome {
    let k = split_segment();
    let l = unit_interval();
    let tent = EvaluableMap::Pl(pl(&k, vec![q(0), q(1), q(0)]));
    let mut ok = true;
    let mut parts = Vec::new();
    for eps in [frac(3, 5), frac(3, 10), frac(1, 10)] {
        let a = simplicial_approximation(&k, &l, &tent, &eps, DEFAULT_SUBDIVISION_CAP).unwrap();
        let star = star_condition(a.map.source(), a.map.target(), &tent, a.map.vertex_map()).unwrap();
        let spanned = is_simplicial(a.map.vertex_map(), a.map.source(), a.map.target()).is_ok();
        let g = a.map.to_pl();
        let sup = (0..GRID)
            .map(|i| {
                let x = [i as f64 / (GRID - 1) as f64];
                (g.evaluate_f64(&x).unwrap()[0] - tent.evaluate_f64(&x).unwrap()[0]).abs()
            })
            .fold(0.0, f64::max);
        let mesh = to_f64(&a.target_mesh2).sqrt();
        ok &= star && spanned && sup <= mesh && a.target_mesh2 < &eps * &eps;
        parts.push(format!("eps={}: star {star}, spanned {spanned}, sup {sup:.2e} <= mesh {mesh:.4}", to_f64(&eps)));
    }
    pass_if(ok, parts.join("; "))
}

fn criterion_3() -> Outcome {
    let complexes = [
        ("unit segment", unit_interval()),
        ("two-edge path", plane(&[(0, 0), (1, 0), (1, 1)], &[vec![0, 1], vec![1, 2]])),
        ("triangle boundary", plane(&[(0, 0), (1, 0), (0, 1)], &[vec![0, 1], vec![1, 2], vec![0, 2]])),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, k) in complexes {
        for delta in [frac(1, 4), frac(1, 100)] {
            let start = Instant::now();
            let report = build_cover(&k, &delta).unwrap().verify();
            let t = start.elapsed();
            ok &= report.passed() && report.pieces_checked > 0 && t < Duration::from_secs(10);
            parts.push(format!("{name} delta={delta}: {} violations ({:.2}s)", report.violations.len(), t.as_secs_f64()));
        }
    }
    pass_if(ok, parts.join("; "))
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, k, delta) in [("split segment", split_segment(), frac(1, 8)), ("square", square(), frac(1, 16))] {
        let cover = build_cover(&k, &delta).unwrap();
        let pou = partition_of_unity(&cover, &smoothstep(2).unwrap());
        let mut defect: f64 = 0.0;
        let mut leaks = 0usize;
        for x in lattice(&k, GRID) {
            let xf = x.to_f64();
            let w = pou.evaluate(&xf).unwrap();
            defect = defect.max((w.iter().map(|(_, t)| t).sum::<f64>() - 1.0).abs());
            for (e, b) in cover.elements().iter().zip(pou.bumps()) {
                if !e.contains(&x, Region::Open) && b.evaluate(&xf) != 0.0 {
                    leaks += 1;
                }
            }
        }
        ok &= defect <= WEIGHT_TOL && leaks == 0;
        parts.push(format!("{name}: |sum-1| {defect:.1e}, {leaks} nonzero outside support"));
    }

    let k = split_segment();
    let sq = square();
    let diagonal = simplex_by_ids(&sq, &[0, 2]).unwrap();
    let mut orders = Vec::new();
    for nu in 1..=3 {
        let profile = smoothstep(nu).unwrap();
        let cover = build_cover(&k, &frac(1, 8)).unwrap();
        let pou = partition_of_unity(&cover, &profile);
        let r = to_f64(cover.elements()[1].radius());
        let ball = &pou.bumps()[1];
        for t0 in [0.5 + r / 3.0, 0.5 + 2.0 * r / 3.0] {
            let rep = smoothness_order(|t| Ok(vec![ball.evaluate(&[t])]), t0, nu + 1, r / 6.0).unwrap();
            ok &= rep.at_least(nu) && rep.first_failure == Some(nu + 1);
            orders.push(rep.order);
        }
        let sq_cover = build_cover(&sq, &frac(1, 16)).unwrap();
        let sq_pou = partition_of_unity(&sq_cover, &profile);
        let ElementShape::Tube(tube) = &sq_cover.element(diagonal).shape else { unreachable!() };
        let d = to_f64(tube.delta());
        let tube_bump = &sq_pou.bumps()[diagonal.0];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for n0 in [d / 3.0, 2.0 * d / 3.0] {
            let rep =
                smoothness_order(|n| Ok(vec![tube_bump.evaluate(&[0.5 + n * s, 0.5 - n * s])]), n0, nu + 1, d / 6.0).unwrap();
            ok &= rep.at_least(nu) && rep.first_failure == Some(nu + 1);
            orders.push(rep.order);
        }
    }
    parts.push(format!("plateau seam orders for nu=1,2,3: {orders:?}"));
    pass_if(ok, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let k = split_segment();
    let l = unit_interval();
    let samples = lattice(&k, GRID);
    let identity = pl(&k, vec![q(0), Point(vec![frac(1, 2)]), q(1)]);
    let tent = pl(&k, vec![q(0), q(1), q(0)]);
    let cases = [
        ("identity", identity.clone(), k.clone(), CarrierAssignment::new(k.simplex_ids().collect())),
        ("tent", tent.clone(), l.clone(), CarrierAssignment::from_pl(&tent, &l).unwrap()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, target, carriers) in cases {
        for eta in [frac(1, 10), frac(1, 100)] {
            let h = smooth_map(&PiecewiseMap::Pl(g.clone()), &target, carriers.clone(), &eta, 2).unwrap();
            let c = h.certify(&samples).unwrap();
            ok &= c.sup_error < to_f64(&eta) && c.min_barycentric >= -CARRIER_TOL && c.carriers_checked > 0;
            parts.push(format!(
                "{name} eta={}: sup {:.2e}, min bary {:.1e} over {} carriers",
                to_f64(&eta),
                c.sup_error,
                c.min_barycentric,
                c.carriers_checked
            ));
        }
    }
    let third = frac(1, 3);
    let constant = PlMap::constant(k.clone(), Point(vec![third.clone()]));
    let carriers = CarrierAssignment::from_pl(&constant, &k).unwrap();
    let h = smooth_map(&PiecewiseMap::Pl(constant), &k, carriers, &frac(1, 10), 2).unwrap();
    let exact = (0..GRID).all(|i| h.evaluate_f64(&[i as f64 / (GRID - 1) as f64]).unwrap()[0] == to_f64(&third));
    ok &= exact;
    parts.push(format!("constant 1/3 reproduced exactly: {exact}"));
    pass_if(ok, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, k) in [("split segment", split_segment()), ("square", square())] {
        let mut grid: Vec<Vec<f64>> = lattice(&k, 2000).iter().chain(&random(&k, 2000, 17)).map(|p| p.to_f64()).collect();
        let mut worst_ratio: f64 = 0.0;
        let mut worst_vertex: f64 = 0.0;
        for n in 1..=10 {
            let i = iota(&k, 1, n).unwrap();
            let bound = to_f64(&i.bound());
            grid.truncate(4000);
            grid.extend(probes(&k, to_f64(i.map.delta())));
            let sup = grid.iter().map(|x| dist(x, &i.evaluate_f64(x).unwrap())).fold(0.0, f64::max);
            worst_ratio = worst_ratio.max(sup / bound);
            worst_vertex = worst_vertex.max(i.vertex_defect().unwrap());
        }
        ok &= worst_ratio < 1.0 && worst_vertex <= VERTEX_TOL;
        parts.push(format!("{name}: max sup|x-iota_n x| / 2^-n = {worst_ratio:.3}, vertex defect {worst_vertex:.1e}"));
    }
    let k = split_segment();
    let f = PiecewiseMap::Pl(pl(&k, vec![Point(vec![frac(1, 2)]), q(0), Point(vec![frac(1, 2)])]));
    let mut orders = Vec::new();
    for nu in 1..=2 {
        let i = iota(&k, nu, 5).unwrap();
        let plateau = to_f64(&i.plateau_radius(smoothpl::complex::VertexId(1)).unwrap());
        let pb = pullback_smooth(&f, &i).unwrap();
        let rep = smoothness_order(|t| pb.evaluate_f64(&[t]).map_err(|e| e.to_string()), 0.5, nu, plateau / 2.0).unwrap();
        ok &= rep.at_least(nu);
        orders.push(rep.order);
    }
    parts.push(format!("|x-1/2| o iota_5 kink orders for nu=1,2: {orders:?}"));
    pass_if(ok, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let k = build_complex(vec![q(-1), q(0), q(1)], &[vec![0, 1], vec![1, 2]]).unwrap();
    let cone = plane(&[(0, 0), (1, 1), (-1, 1), (-1, -1), (1, -1)], &[vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4]]);
    let f = EvaluableMap::Pl(pl(
        &k,
        vec![Point(vec![int(-1), int(1)]), Point(vec![int(0), int(0)]), Point(vec![int(1), int(1)])],
    ));
    let eps = frac(CONE_EPS.0, CONE_EPS.1);
    let a = approximate_map(&k, &cone, &f, &eps, 1, &ApproximationOptions::default()).unwrap();
    let c = a.certify(&f, &lattice(&k, GRID)).unwrap();
    let on_cone = (0..GRID).all(|i| {
        let t = -1.0 + 2.0 * i as f64 / (GRID - 1) as f64;
        let y = a.evaluate_f64(&[t]).unwrap();
        y[0].abs() == y[1].abs() && y[0].abs() <= 1.0
    });
    let ok = c.sup_error < to_f64(&eps) && c.min_barycentric >= 0.0 && c.max_normal == 0.0 && on_cone;
    pass_if(
        ok,
        format!(
            "K^({}) -> L^({}); sup |H-f| {:.3e} < {}; carrier min bary {:.1e}, normal {:.1e}; |x| = |y| exactly on grid: {on_cone}",
            a.simplicial.k,
            a.simplicial.l,
            c.sup_error,
            to_f64(&eps),
            c.min_barycentric,
            c.max_normal
        ),
    )
}

fn axis_values(eta: &Q) -> Vec<Q> {
    let mut v: Vec<Q> = (-5..=5).map(|i| frac(i, 5)).collect();
    v.extend((-6..=6).map(|i| eta * frac(i, 12)));
    v.extend((-6..=6).map(|i| eta * frac(i, 6)));
    v.sort();
    v.dedup();
    v
}

fn cube(values: &[Q], d: usize) -> Vec<Vec<Q>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|p: Vec<Q>| values.iter().map(move |c| [p.clone(), vec![c.clone()]].concat())).collect();
    }
    out
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [2usize, 3] {
        let components: Vec<usize> = (1..=d).collect();
        let x = CoordinateDivisor::new(d, &components).unwrap();
        let mut sups = Vec::new();
        for eta in [frac(3, 10), frac(1, 10), frac(1, 100)] {
            let nu = 2;
            let rho = weak_retraction(&x, &eta, nu).unwrap();
            let pts = cube(&axis_values(&eta), d);
            let w: Vec<Vec<Q>> = pts.iter().filter(|p| rho.in_domain(p)).cloned().collect();
            let products = retraction_products(&rho, &w).unwrap();
            let on_x: Vec<&Vec<Q>> = pts.iter().filter(|p| x.contains(p)).collect();
            let sup = on_x
                .iter()
                .map(|p| {
                    let pf: Vec<f64> = p.iter().map(to_f64).collect();
                    dist(&pf, &rho.evaluate_f64(&pf).unwrap())
                })
                .fold(0.0, f64::max);
            let components_kept = on_x.iter().all(|p| {
                rho.squashes().iter().all(|s| {
                    let img = s.evaluate(p);
                    components.iter().all(|&k| !p[k - 1].is_zero() || img[k - 1].is_zero())
                })
            });
            let base: Vec<f64> = (0..d).map(|i| 0.8 - 0.15 * i as f64).collect();
            let seams = rho.seam_smoothness(&base, nu + 1).unwrap();
            let smooth = seams.iter().all(|s| s.report.at_least(nu));
            let bound = to_f64(&eta) * d as f64 / 2.0;
            ok &= products.rejected.is_empty()
                && products.checked == w.len()
                && products.exact_zero
                && products.max_product <= FLOAT_PRODUCT_TOL
                && sup <= bound
                && components_kept
                && smooth;
            sups.push(sup);
            parts.push(format!(
                "d={d} eta={}: {} W samples exact, sup disp {sup:.4} <= {bound:.3}, {} seams >= {nu}: {smooth}",
                to_f64(&eta),
                products.checked,
                seams.len()
            ));
        }
        ok &= sups.windows(2).all(|s| s[1] < s[0]);
    }
    pass_if(ok, parts.join("; "))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_9() -> Outcome {
    let d = 5;
    let mut ok = true;
    let mut checked = 0;
    for mask in 1u32..(1 << d) {
        let j: Vec<usize> = (1..=d).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let x = CoordinateDivisor::new(d, &j).unwrap();
        for level in 0..=j.len() {
            let strata = sing_stratification(&x, level);
            let expected = if level < j.len() { binomial(j.len(), level + 1) } else { 0 };
            ok &= strata.len() == expected;
            for s in &strata {
                let mut p = vec![Q::one(); d];
                for &i in &s.indices {
                    p[i - 1] = Q::zero();
                }
                ok &= s.dim(d) == d - level - 1 && s.contains(&p) && x.contains(&p);
                checked += 1;
            }
        }
    }
    pass_if(ok, format!("{checked} strata over 31 index sets; count C(|J|, l+1), dim d-l-1"))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> std::process::ExitCode {
    let criteria: [Criterion; 9] = [
        ("mesh decay", criterion_1, 2),
        ("simplicial approximation", criterion_2, 5),
        ("covering lemma", criterion_3, 60),
        ("partition of unity", criterion_4, 10),
        ("approximation lemma", criterion_5, 20),
        ("iota_n convergence", criterion_6, 30),
        ("cone density", criterion_7, 60),
        ("weak retraction", criterion_8, 30),
        ("stratification law", criterion_9, 1),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        let passed = outcome.passed && t < Duration::from_secs(*budget);
        println!(
            "criterion {}: {} {name} ({:.2}s / {budget}s) {}",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            t.as_secs_f64(),
            outcome.detail
        );
        if !passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria passed");
        std::process::ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
