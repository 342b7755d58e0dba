//! Deterministic lattices and seeded random samples of `|K|` with rational coordinates.

use crate::complex::{Point, SimplicialComplex};
use crate::rational::Q;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

pub(crate) fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for c in 0..=total {
        prefix.push(c);
        compositions(total - c, parts - 1, prefix, out);
        prefix.pop();
    }
}

fn combine(k: &SimplicialComplex, vs: &[crate::complex::VertexId], weights: &[usize], denom: usize) -> Point {
    let d = Q::from_integer((denom as i64).into());
    let mut out = vec![Q::zero(); k.ambient_dim()];
    for (v, w) in vs.iter().zip(weights) {
        if *w == 0 {
            continue;
        }
        let w = Q::from_integer((*w as i64).into()) / &d;
        for (o, c) in out.iter_mut().zip(k.vertex(*v).iter()) {
            *o += &w * c;
        }
    }
    Point(out)
}

/// Barycentric lattice points of every maximal simplex, at least `count` in total.
///
/// Points on shared faces appear once per maximal simplex containing them.
pub fn lattice(k: &SimplicialComplex, count: usize) -> Vec<Point> {
    let maximal = k.maximal_simplices();
    let mut out = Vec::new();
    for &m in maximal {
        let vs = k.simplex(m).vertices();
        let d = vs.len() - 1;
        if d == 0 {
            out.push(k.vertex(vs[0]).clone());
            continue;
        }
        let per = count.div_ceil(maximal.len()).max(1);
        let mut res = 1;
        while binomial(res + d, d) < per {
            res += 1;
        }
        let mut comps = Vec::new();
        compositions(res, d + 1, &mut Vec::new(), &mut comps);
        out.extend(comps.iter().map(|c| combine(k, vs, c, res)));
    }
    out
}

/// `count` seeded random points, uniform in barycentric coordinates over a uniformly
/// chosen maximal simplex, with dyadic coordinates.
pub fn random(k: &SimplicialComplex, count: usize, seed: u64) -> Vec<Point> {
    const RES: usize = 1 << 20;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maximal = k.maximal_simplices();
    (0..count)
        .map(|_| {
            let m = maximal[rng.random_range(0..maximal.len())];
            let vs = k.simplex(m).vertices();
            let mut cuts: Vec<usize> = (0..vs.len() - 1).map(|_| rng.random_range(0..=RES)).collect();
            cuts.push(0);
            cuts.push(RES);
            cuts.sort_unstable();
            let weights: Vec<usize> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
            combine(k, vs, &weights, RES)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::rational::int;

    #[test]
    fn lattice_sizes() {
        let pts = [(0, 0), (1, 0), (0, 1)].iter().map(|&(a, b)| Point(vec![int(a), int(b)])).collect();
        let k = build_complex(pts, &[vec![0, 1, 2]]).unwrap();
        let s = lattice(&k, 100);
        assert!(s.len() >= 100);
        assert!(s.iter().all(|p| k.locate(p).is_ok()));
        let r = random(&k, 50, 7);
        assert_eq!(r, random(&k, 50, 7));
        assert!(r.iter().all(|p| k.locate(p).is_ok()));
    }
}
