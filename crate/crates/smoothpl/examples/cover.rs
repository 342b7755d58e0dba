//! Builds and certifies the skeleton cover of a triangulated square.

use smoothpl::complex::{build_complex, Point};
use smoothpl::cover::{build_cover, level_parameters, Property};
use smoothpl::io::CoverFile;
use smoothpl::rational::{frac, int};

fn main() {
    let pts = [(0, 0), (1, 0), (1, 1), (0, 1)].map(|(a, b)| Point(vec![int(a), int(b)]));
    let k = build_complex(pts.to_vec(), &[vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
    let cover = build_cover(&k, &frac(1, 16)).unwrap();

    for (d, params) in level_parameters(&cover).iter().enumerate() {
        match params {
            Some((eps, delta)) => println!("dim {d}: epsilon {eps}, tube radius {delta}"),
            None => println!("dim {d}: vertex balls"),
        }
    }
    let report = cover.verify();
    for p in [Property::Covering, Property::Separation, Property::Displacement, Property::Support] {
        println!("{p}: {} violations", report.count(p));
    }
    println!("pieces checked: {}", report.pieces_checked);

    let json = serde_json::to_string(&CoverFile::from_cover(&cover)).unwrap();
    println!("serialized cover: {} bytes", json.len());
}
