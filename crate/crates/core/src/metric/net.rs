//! Direction nets on the unit sphere, parameterized by a resolution level.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::vector::{self, norm};
use crate::Real;

/// Shrink applied after normalization so that every vertex norm is
/// certifiably at most one in floating point.
const SHRINK: f64 = 1.0 - 1e-14;

/// Regular `m`-gon starting at `(1, 0)`.
pub fn polygon<T: Real>(m: usize) -> Vec<Vec<T>> {
    (0..m)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / m as f64;
            let (s, c) = a.sin_cos();
            // snap exact zeros so the square is (±1,0),(0,±1)
            let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
            vec![T::lit(snap(c)), T::lit(snap(s))]
        })
        .collect()
}

/// Smallest even `m >= 4` with `cos(pi / m) >= 1 / (1 + eps)`.
pub fn polygon_size(eps: f64) -> usize {
    let target = 1.0 / (1.0 + eps);
    let mut m = 4;
    while (std::f64::consts::PI / m as f64).cos() < target {
        m += 2;
    }
    m
}

/// Icosahedron with every face subdivided `freq` times, projected to the
/// sphere.
pub fn icosphere(freq: usize) -> Vec<Vec<f64>> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let base: [[f64; 3]; 12] = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let faces: [[usize; 3]; 20] = [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let f = freq.max(1);
    let mut seen: BTreeMap<[i64; 3], Vec<f64>> = BTreeMap::new();
    for face in faces {
        let [a, b, c] = face.map(|i| base[i]);
        for i in 0..=f {
            for j in 0..=f - i {
                let l = f - i - j;
                let p: Vec<f64> = (0..3)
                    .map(|t| (i as f64 * a[t] + j as f64 * b[t] + l as f64 * c[t]) / f as f64)
                    .collect();
                let n = norm(&p);
                let u: Vec<f64> = p.iter().map(|x| x / n).collect();
                let key = [0, 1, 2].map(|t| (u[t] * 1e9).round() as i64);
                seen.entry(key).or_insert(u);
            }
        }
    }
    seen.into_values().collect()
}

/// Lattice points on the surface of the cube `[-g, g]^d`, projected to the
/// sphere.
pub fn cube_lattice(d: usize, g: usize) -> Vec<Vec<f64>> {
    let g = g.max(1) as i64;
    let side = (2 * g + 1) as usize;
    let total = side.pow(d as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut p = Vec::with_capacity(d);
        for _ in 0..d {
            p.push((c % side) as i64 - g);
            c /= side;
        }
        if p.iter().any(|x| x.abs() == g) {
            let v: Vec<f64> = p.iter().map(|&x| x as f64).collect();
            let n = norm(&v);
            out.push(v.iter().map(|x| x / n).collect());
        }
    }
    out
}

/// Moves each direction by a seeded random offset of relative size
/// `amount`, renormalizes, and shrinks by [`SHRINK`]. Breaks the
/// cospherical-coplanar coincidences of symmetric nets so that the hull is
/// simplicial.
pub fn jitter_and_normalize<T: Real>(dirs: &[Vec<f64>], amount: f64, seed: u64) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    dirs.iter()
        .map(|u| {
            let v: Vec<f64> = u.iter().map(|&x| x + amount * rng.gen_range(-1.0..1.0)).collect();
            let n = vector::norm(&v);
            let shrink = T::lit(SHRINK).min(T::one() - T::epsilon() * T::lit(4.0));
            v.iter().map(|&x| T::lit(x / n) * shrink).collect()
        })
        .collect()
}
