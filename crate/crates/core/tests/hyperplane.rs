use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subflat::hyperplane::{dualize, dualize_point, nearest_hyperplane_exact, refined_zone_vertices};
use subflat::oracle::{brute_nearest_flat, distance_to_flat, DEFAULT_BUDGET};
use subflat::{NumericPolicy, PointSet, SubsetKind};

fn square(rng: &mut ChaCha8Rng, n: usize) -> PointSet<f64> {
    PointSet::from_rows((0..n).map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect()).unwrap()
}

fn oracle_distance(s: &PointSet<f64>, y: &[f64], ids: &[usize]) -> f64 {
    let pts: Vec<&[f64]> = ids.iter().map(|&i| s.point(i)).collect();
    distance_to_flat(y, &pts, f64::EPSILON * 64.0).unwrap()
}

#[test]
fn square_corners() {
    let s: PointSet<f64> = PointSet::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let y = [0.4, 0.55];
    let a = nearest_hyperplane_exact(&s, &y, &NumericPolicy::default()).unwrap();
    let b = brute_nearest_flat(&s, &y, 2, SubsetKind::Affine, DEFAULT_BUDGET, false).unwrap();
    assert_eq!(b.optimizers, vec![vec![1, 2]]);
    assert_eq!(a.subset.indices, vec![1, 2]);
    assert!((a.distance - b.optimum).abs() < 1e-15);
}

#[test]
fn matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..40 {
        let n = rng.gen_range(2..250);
        let s = square(&mut rng, n);
        let y = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
        let a = nearest_hyperplane_exact(&s, &y, &NumericPolicy::with_seed(trial)).unwrap();
        let b = brute_nearest_flat(&s, &y, 2, SubsetKind::Affine, DEFAULT_BUDGET, false).unwrap();
        assert_eq!(oracle_distance(&s, &y, &a.subset.indices), b.optimum, "trial {trial} n={n}");
    }
}

#[test]
fn zone_holds_the_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let s = square(&mut rng, 150);
        let y = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
        let b = brute_nearest_flat(&s, &y, 2, SubsetKind::Affine, DEFAULT_BUDGET, false).unwrap();
        let lines = dualize(&s).unwrap();
        let z = refined_zone_vertices(&dualize_point(&y).unwrap(), &lines, 4, 1e-9, &mut rng).unwrap();
        assert!(z.vertices.iter().any(|v| v.ids.to_vec() == b.optimizers[0]));
    }
}

#[test]
fn zone_grows_slowly() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let sizes = [250usize, 500, 1000, 2000];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &n in &sizes {
        let mut total = 0.0;
        for _ in 0..3 {
            let s = square(&mut rng, n);
            let y = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
            let lines = dualize(&s).unwrap();
            total += refined_zone_vertices(&dualize_point(&y).unwrap(), &lines, 4, 1e-9, &mut rng).unwrap().vertices.len() as f64;
        }
        xs.push((n as f64).ln());
        ys.push((total / 3.0).ln());
    }
    let mx = xs.iter().sum::<f64>() / 4.0;
    let my = ys.iter().sum::<f64>() / 4.0;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!(slope <= 1.3, "slope {slope}");
}
