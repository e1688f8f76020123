//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subflat::hyperplane::nearest_hyperplane_exact;
use subflat::metric::{build_polytope, QuerySimplex, VERTEX_CONSTANT};
use subflat::oracle::{
    brute_count, brute_degeneracy, brute_nearest_flat, brute_nearest_simplex, distance_to_flat, distance_to_simplex,
    DEFAULT_BUDGET,
};
use subflat::range::{AxisRange, RangeCounter};
use subflat::search::{count_intersecting, count_intersecting_convex, degeneracy_test, nearest_flat_approx, nearest_simplex_approx};
use subflat::util::loglog_slope;
use subflat::{NumericPolicy, PointSet, SubsetKind};

struct Outcome {
    ok: bool,
    detail: String,
}

fn cube(rng: &mut ChaCha8Rng, n: usize, d: usize) -> PointSet<f64> {
    PointSet::from_rows((0..n).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()).unwrap()
}

fn point(rng: &mut ChaCha8Rng, d: usize, r: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-r..r)).collect()
}

fn unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v = point(rng, d, 1.0);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

const ORACLE_TOL: f64 = f64::EPSILON * 64.0;

/// Distance to the hull of `ids`, measured the way the oracles measure it.
fn oracle_distance(s: &PointSet<f64>, y: &[f64], ids: &[usize], kind: SubsetKind) -> f64 {
    let origin = vec![0.0; s.dim()];
    let mut pts: Vec<&[f64]> = Vec::new();
    if kind == SubsetKind::Linear {
        pts.push(&origin);
    }
    pts.extend(ids.iter().map(|&i| s.point(i)));
    match kind {
        SubsetKind::Convex => distance_to_simplex(y, &pts, ORACLE_TOL),
        _ => distance_to_flat(y, &pts, ORACLE_TOL),
    }
    .unwrap()
}

fn in_bracket(got: f64, opt: f64, eps: f64, slack: f64) -> bool {
    got >= opt && got <= (1.0 + eps) * opt + slack
}

fn counting_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let polys: Vec<_> = [2, 3, 4].iter().map(|&d| build_polytope::<f64>(d, 0.5).unwrap()).collect();
    let (mut checked, mut bad, mut singular) = (0, 0, 0);
    for trial in 0..500 {
        let d = 2 + trial % 3;
        let k = rng.gen_range(2..=d);
        let n = rng.gen_range(k..=25);
        let s = cube(&mut rng, n, d);
        let q = &polys[d - 2];
        let faces = q.faces(d - k);
        let face = q.face_directions(&faces[rng.gen_range(0..faces.len())]);
        let delta = QuerySimplex::new(&point(&mut rng, d, 0.8), face, rng.gen_range(0.05..3.0)).vertices;
        let tol = 1e-11;
        let affine = brute_count(&s, k, &delta, SubsetKind::Affine, DEFAULT_BUDGET).unwrap();
        let convex = brute_count(&s, k, &delta, SubsetKind::Convex, DEFAULT_BUDGET).unwrap();
        if affine.singular + convex.singular > 0 {
            singular += 1;
            continue;
        }
        let fa = count_intersecting(&s, k, &delta, SubsetKind::Affine, tol).unwrap().total_unordered();
        let fc = count_intersecting_convex(&s, k, &delta, tol).unwrap().total_unordered();
        checked += 1;
        if fa != affine.count || fc != convex.count {
            bad += 1;
            eprintln!("  counting trial {trial}: d={d} k={k} n={n} affine {fa}/{} convex {fc}/{}", affine.count, convex.count);
        }
    }
    Outcome { ok: bad == 0 && checked + singular == 500, detail: format!("{checked} instances, {bad} mismatches, {singular} singular skipped") }
}

fn flat_guarantee() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut runs, mut bad, mut worst) = (0, 0, 1.0f64);
    for kind in [SubsetKind::Affine, SubsetKind::Linear] {
        for trial in 0..100 {
            let k = 2 + trial % 2;
            let eps = [0.1, 0.25][(trial / 2) % 2];
            let s = cube(&mut rng, 200, 3);
            let y = point(&mut rng, 3, 1.5);
            let slack = 1e-7 * s.scale().max(1.0);
            let opt = brute_nearest_flat(&s, &y, k, kind, DEFAULT_BUDGET, false).unwrap().optimum;
            let a = nearest_flat_approx(&s, &y, k, eps, kind, &NumericPolicy::with_seed(trial as u64)).unwrap();
            let got = oracle_distance(&s, &y, &a.subset.indices, kind);
            runs += 1;
            if opt > 0.0 {
                worst = worst.max(got / opt);
            }
            if !in_bracket(got, opt, eps, slack) {
                bad += 1;
                eprintln!("  flat {kind:?} trial {trial}: k={k} eps={eps} got {got} opt {opt}");
            }
        }
    }
    Outcome { ok: bad == 0, detail: format!("{runs} runs, {bad} outside bracket, worst ratio {worst:.4}") }
}

fn simplex_guarantee() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut bad, mut at_vertex, mut worst) = (0, 0, 1.0f64);
    let eps = 0.1;
    for trial in 0..100 {
        let k = 2 + trial % 2;
        let s = cube(&mut rng, 150, 3);
        let y = if trial < 20 {
            let u = unit(&mut rng, 3);
            let top = (0..s.len()).max_by(|&i, &j| dot(s.point(i), &u).total_cmp(&dot(s.point(j), &u))).unwrap();
            let t = rng.gen_range(0.2..1.0);
            s.point(top).iter().zip(&u).map(|(p, v)| p + t * v).collect()
        } else {
            point(&mut rng, 3, 1.5)
        };
        let slack = 1e-7 * s.scale().max(1.0);
        let report = brute_nearest_simplex(&s, &y, k, DEFAULT_BUDGET, false).unwrap();
        let opt = report.optimum;
        let a = nearest_simplex_approx(&s, &y, k, eps, &NumericPolicy::with_seed(trial as u64)).unwrap();
        if trial < 20 && a.subset.indices.len() == 1 {
            at_vertex += 1;
        }
        let got = oracle_distance(&s, &y, &a.subset.indices, SubsetKind::Convex);
        if opt > 0.0 {
            worst = worst.max(got / opt);
        }
        if !in_bracket(got, opt, eps, slack) {
            bad += 1;
            eprintln!("  simplex trial {trial}: k={k} got {got} opt {opt}");
        }
    }
    Outcome {
        ok: bad == 0,
        detail: format!("100 runs, {bad} outside bracket, {at_vertex}/20 vertex optima returned as single points, worst ratio {worst:.4}"),
    }
}

fn hyperplane_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    let mut ties = 0;
    for n in [100, 500, 1500] {
        for trial in 0..50 {
            let s = cube(&mut rng, n, 2);
            let y = point(&mut rng, 2, 1.5);
            let a = nearest_hyperplane_exact(&s, &y, &NumericPolicy::with_seed(trial)).unwrap();
            let b = brute_nearest_flat(&s, &y, 2, SubsetKind::Affine, DEFAULT_BUDGET, false).unwrap();
            let ours = oracle_distance(&s, &y, &a.subset.indices, SubsetKind::Affine);
            if a.subset.indices != b.optimizers[0] {
                ties += 1;
            }
            if ours != b.optimum {
                bad += 1;
                eprintln!("  hyperplane n={n} trial {trial}: {:?} at {ours} vs {:?} at {}", a.subset.indices, b.optimizers, b.optimum);
            }
        }
    }
    Outcome { ok: bad == 0, detail: format!("150 instances, {bad} value mismatches, {ties} answered with a tied subset") }
}

fn mean_seconds(sizes: &[usize], k: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sizes
        .iter()
        .map(|&n| {
            let mut total = Duration::ZERO;
            for trial in 0..3 {
                let s = cube(&mut rng, n, 3);
                let y = point(&mut rng, 3, 1.5);
                let t = Instant::now();
                nearest_flat_approx(&s, &y, k, 0.25, SubsetKind::Affine, &NumericPolicy::with_seed(trial)).unwrap();
                total += t.elapsed();
            }
            (n as f64, total.as_secs_f64() / 3.0)
        })
        .collect()
}

fn scaling_slope() -> Outcome {
    let pairs = mean_seconds(&[1000, 2000, 4000, 8000], 2, 5);
    let triples = mean_seconds(&[100, 200, 400], 3, 6);
    let s2 = loglog_slope(&pairs).unwrap_or(f64::INFINITY);
    let s3 = loglog_slope(&triples).unwrap_or(f64::INFINITY);
    let fmt = |v: &[(f64, f64)]| v.iter().map(|(n, t)| format!("{n}:{t:.2}s")).collect::<Vec<_>>().join(" ");
    Outcome {
        ok: s2 <= 1.35 && s3 <= 2.4,
        detail: format!("k=2 slope {s2:.3} ({}), k=3 slope {s3:.3} ({})", fmt(&pairs), fmt(&triples)),
    }
}

/// Normal of the hyperplane through `d` points, from cofactors.
fn cofactor_normal(pts: &[&[f64]]) -> Vec<f64> {
    fn det(m: Vec<Vec<f64>>) -> f64 {
        match m.len() {
            0 => 1.0,
            1 => m[0][0],
            _ => (0..m.len())
                .map(|c| {
                    let minor = m[1..].iter().map(|r| [&r[..c], &r[c + 1..]].concat()).collect();
                    let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                    sign * m[0][c] * det(minor)
                })
                .sum(),
        }
    }
    let d = pts.len();
    let rows: Vec<Vec<f64>> = pts[1..].iter().map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect()).collect();
    (0..d)
        .map(|c| {
            let minor = rows.iter().map(|r| [&r[..c], &r[c + 1..]].concat()).collect();
            if c % 2 == 0 { det(minor) } else { -det(minor) }
        })
        .collect()
}

fn dudley_sandwich() -> Outcome {
    const ROUNDING: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut problems = Vec::new();
    let mut worst_c = 0.0f64;
    for d in [2usize, 3, 4] {
        for eps in [0.05, 0.1, 0.5] {
            let q = build_polytope::<f64>(d, eps).unwrap();
            let verts = q.vertices();
            let mut planes = Vec::new();
            let mut ridges = std::collections::BTreeMap::<Vec<usize>, usize>::new();
            for f in q.facets() {
                let pts: Vec<&[f64]> = f.vertices.iter().map(|&v| verts[v].as_slice()).collect();
                let mut n = cofactor_normal(&pts);
                let len = dot(&n, &n).sqrt();
                n.iter_mut().for_each(|x| *x /= len);
                let mut h = dot(&n, pts[0]);
                if h < 0.0 {
                    n.iter_mut().for_each(|x| *x = -*x);
                    h = -h;
                }
                if verts.iter().any(|v| dot(&n, v) > h + ROUNDING) {
                    problems.push(format!("d={d} eps={eps}: facet {:?} is not supporting", f.vertices));
                }
                if h < 1.0 / (1.0 + eps) {
                    problems.push(format!("d={d} eps={eps}: facet at {h} cuts the inner ball"));
                }
                for skip in 0..d {
                    let mut r = f.vertices.clone();
                    r.remove(skip);
                    *ridges.entry(r).or_default() += 1;
                }
                planes.push((n, h));
            }
            if let Some((r, c)) = ridges.iter().find(|(_, &c)| c != 2) {
                problems.push(format!("d={d} eps={eps}: ridge {r:?} lies on {c} facets"));
            }
            if let Some(v) = verts.iter().find(|v| dot(v, v) > 1.0 + ROUNDING) {
                problems.push(format!("d={d} eps={eps}: vertex {v:?} outside the unit ball"));
            }
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for _ in 0..100_000 {
                let u = unit(&mut rng, d);
                let g = planes.iter().map(|(n, h)| dot(n, &u) / h).fold(f64::NEG_INFINITY, f64::max);
                lo = lo.min(g);
                hi = hi.max(g);
            }
            if lo < 1.0 - ROUNDING || hi > 1.0 + eps {
                problems.push(format!("d={d} eps={eps}: gauge of unit directions spans [{lo}, {hi}]"));
            }
            let c = verts.len() as f64 * eps.powf((d as f64 - 1.0) / 2.0);
            worst_c = worst_c.max(c);
            println!("  dudley d={d} eps={eps}: {} vertices, C = {c:.2}, gauge in [{lo:.6}, {hi:.6}]", verts.len());
        }
    }
    if worst_c > VERTEX_CONSTANT {
        problems.push(format!("vertex constant {worst_c:.2} above {VERTEX_CONSTANT}"));
    }
    for p in &problems {
        eprintln!("  {p}");
    }
    Outcome { ok: problems.is_empty(), detail: format!("max C = {worst_c:.2} (bound {VERTEX_CONSTANT}), {} problems", problems.len()) }
}

fn degeneracy_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0;
    for trial in 0..100 {
        let d = 2 + trial % 2;
        let n = 40;
        let mut rows: Vec<Vec<f64>> = (0..n).map(|_| point(&mut rng, d, 1.0)).collect();
        let planted = trial < 50;
        if planted {
            let mut ids: Vec<usize> = (0..n).collect();
            ids.shuffle(&mut rng);
            let w: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.5..1.5)).collect();
            let sum: f64 = w.iter().sum();
            rows[ids[d]] = (0..d).map(|c| (0..d).map(|i| w[i] / sum * rows[ids[i]][c]).sum()).collect();
        }
        let s = PointSet::from_rows(rows).unwrap();
        let fast = degeneracy_test(&s, &NumericPolicy::default()).unwrap();
        let slow = brute_degeneracy(&s, 1e-9, DEFAULT_BUDGET).unwrap();
        if fast.positive != slow.is_some() || slow.is_some() != planted {
            bad += 1;
            eprintln!("  degeneracy trial {trial}: planted {planted}, test {}, oracle {:?}", fast.positive, slow);
        }
    }
    Outcome { ok: bad == 0, detail: format!("100 instances, {bad} disagreements") }
}

fn range_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    for _ in 0..20 {
        let m = rng.gen_range(1..=2000u32);
        let g = rng.gen_range(1..=5usize);
        let mut pts = vec![0u32; m as usize * g];
        for axis in 0..g {
            let mut perm: Vec<u32> = (0..m).collect();
            perm.shuffle(&mut rng);
            for (i, v) in perm.into_iter().enumerate() {
                pts[i * g + axis] = v;
            }
        }
        let rc = RangeCounter::build(g, &pts);
        for _ in 0..1000 {
            let rect: Vec<AxisRange> = (0..g)
                .map(|_| {
                    let a = rng.gen_range(0..2 * m);
                    let b = a + rng.gen_range(0..=m.min(2 * m - a));
                    let lo_open = a > 0 && rng.gen_bool(0.5);
                    let hi_open = b == a || rng.gen_bool(0.5);
                    AxisRange { lo: a - lo_open as u32, hi: if hi_open { b } else { b - 1 }, lo_open, hi_open }
                })
                .collect();
            let inside = |x: u32, r: &AxisRange| {
                let a = r.lo as u64 + r.lo_open as u64;
                let b = r.hi as u64 + !r.hi_open as u64;
                [x as u64, (x + m) as u64].iter().any(|&v| v >= a && v < b)
            };
            let naive = pts.chunks_exact(g).filter(|p| p.iter().zip(&rect).all(|(&x, r)| inside(x, r))).count() as u64;
            match rc.count(&rect) {
                Ok(c) if c == naive => {}
                other => {
                    bad += 1;
                    eprintln!("  range m={m} g={g} {rect:?}: {other:?} vs {naive}");
                }
            }
        }
    }
    Outcome { ok: bad == 0, detail: format!("20000 queries, {bad} mismatches") }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("counting exactness", counting_exactness, 300),
        ("flat approximation guarantee", flat_guarantee, 600),
        ("simplex approximation guarantee", simplex_guarantee, 900),
        ("hyperplane exactness", hyperplane_exactness, 300),
        ("scaling slope", scaling_slope, 1200),
        ("polytope sandwich", dudley_sandwich, 60),
        ("degeneracy reduction", degeneracy_reduction, 300),
        ("range counter equivalence", range_oracle, 60),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|o| o == &(i + 1).to_string()) {
            continue;
        }
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        let ok = out.ok && secs < *limit as f64;
        failed += !ok as usize;
        println!(
            "criterion {}: {} {name}: {} [{secs:.1}s of {limit}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
