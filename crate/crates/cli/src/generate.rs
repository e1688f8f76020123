use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{CliError, Result};
use crate::ingest::{InstanceFile, Meta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Generator {
    UniformCube,
    Gaussian,
    /// Uniform points with the query planted near the hull of `k` of them.
    PlantedFlat,
    /// Uniform points with `d + 1` of them on a common hyperplane.
    PlantedDegenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Plant {
    /// Move one point onto the hyperplane through `d` others.
    Collinear,
    /// Put the query near a convex combination of `k` points.
    Flat,
}

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub generator: Generator,
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub k: usize,
    pub plant: Option<Plant>,
    /// Standard deviation of the offset added to a planted query.
    pub noise: f64,
}

fn name(g: Generator) -> &'static str {
    match g {
        Generator::UniformCube => "uniform-cube",
        Generator::Gaussian => "gaussian",
        Generator::PlantedFlat => "planted-flat",
        Generator::PlantedDegenerate => "planted-degenerate",
    }
}

fn weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn combine(points: &[Vec<f64>], ids: &[usize], w: &[f64]) -> Vec<f64> {
    let d = points[ids[0]].len();
    (0..d).map(|c| ids.iter().zip(w).map(|(&i, wi)| wi * points[i][c]).sum()).collect()
}

pub fn generate(spec: &GenSpec) -> Result<InstanceFile> {
    let (n, d) = (spec.n, spec.dim);
    if d == 0 {
        return Err(CliError::Usage("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let gaussian = spec.generator == Generator::Gaussian;
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..d)
            .map(|_| if gaussian { rng.sample::<f64, _>(StandardNormal) } else { rng.gen_range(-1.0..1.0) })
            .collect()
    };
    let mut points: Vec<Vec<f64>> = (0..n).map(|_| draw(&mut rng)).collect();
    let mut query = draw(&mut rng);

    let plant = spec.plant.or(match spec.generator {
        Generator::PlantedFlat => Some(Plant::Flat),
        Generator::PlantedDegenerate => Some(Plant::Collinear),
        _ => None,
    });
    match plant {
        Some(Plant::Collinear) => {
            if n < d + 1 {
                return Err(CliError::Usage(format!("planting {} cohyperplanar points needs n >= {}", d + 1, d + 1)));
            }
            let ids = sample(&mut rng, n, d + 1).into_vec();
            let w = weights(&mut rng, d);
            points[ids[d]] = combine(&points, &ids[..d], &w);
        }
        Some(Plant::Flat) => {
            if spec.k == 0 || spec.k > n {
                return Err(CliError::Usage(format!("cannot plant a {}-point flat among {n} points", spec.k)));
            }
            let ids = sample(&mut rng, n, spec.k).into_vec();
            let w = weights(&mut rng, spec.k);
            query = combine(&points, &ids, &w);
            for q in &mut query {
                *q += spec.noise * rng.sample::<f64, _>(StandardNormal);
            }
        }
        None => {}
    }
    Ok(InstanceFile {
        dim: d,
        points,
        query: Some(query),
        meta: Some(Meta { n, seed: spec.seed, generator: name(spec.generator).into() }),
    })
}
