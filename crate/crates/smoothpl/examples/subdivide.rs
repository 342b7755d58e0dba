//! Barycentric subdivisions of the standard 2-simplex and their mesh sizes.

use smoothpl::complex::{build_complex, Point};
use smoothpl::rational::int;

fn main() {
    let pts = [(0, 0), (1, 0), (0, 1)].map(|(a, b)| Point(vec![int(a), int(b)]));
    let k = build_complex(pts.to_vec(), &[vec![0, 1, 2]]).expect("triangle");
    let base = k.mesh_size().unwrap().value();
    for level in 0..=4 {
        let sub = k.barycentric_subdivide(level);
        let mesh = sub.mesh_size().unwrap();
        let bound = (2.0f64 / 3.0).powi(level as i32) * base;
        println!(
            "k={level}  f={:?}  mesh^2={}  mesh={:.6}  bound={bound:.6}",
            sub.f_vector(),
            mesh.squared,
            mesh.value()
        );
    }
}
