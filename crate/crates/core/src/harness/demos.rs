use super::{mean_stderr, HarnessError};
use crate::geometry::{hull_contains, squared_distance, PointSet};
use crate::rng::{self, Purpose};
use crate::synthetic::SyntheticProblem;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

/// Vertices `e_1, ..., e_d` and `c * (1, ..., 1)` with `c = (1 - sqrt(d + 1)) / d`;
/// all pairwise distances are `sqrt 2`.
pub fn regular_simplex(d: usize) -> PointSet {
    let c = (1.0 - ((d + 1) as f64).sqrt()) / d as f64;
    let mut coords = vec![0.0; (d + 1) * d];
    for i in 0..d {
        coords[i * d + i] = 1.0;
    }
    coords[d * d..].fill(c);
    PointSet::new(d, coords).expect("finite vertices")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexDemo {
    /// Volume share where simplicial interpolation exceeds 1/2.
    pub simplicial_fraction: f64,
    /// Volume share whose nearest vertex carries label 1.
    pub nn_fraction: f64,
    pub samples: usize,
}

/// Regular `d`-simplex labeled 0 on every vertex except the last.
pub fn simplex_noise_demo(d: usize, samples: usize, seed: u64) -> Result<SimplexDemo, HarnessError> {
    if d == 0 || samples == 0 {
        return Err(HarnessError::InvalidSpec("need d >= 1 and samples >= 1".into()));
    }
    let vertices = regular_simplex(d);
    let mut rng = rng::seeded(seed);
    let (mut interp, mut nearest) = (0usize, 0usize);
    let mut w = vec![0.0; d + 1];
    let mut x = vec![0.0; d];
    for _ in 0..samples {
        // Normalized exponentials are uniform on the simplex.
        for wi in w.iter_mut() {
            *wi = Exp1.sample(&mut rng);
        }
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|wi| *wi /= total);
        x.fill(0.0);
        for (wi, v) in w.iter().zip(vertices.iter()) {
            for (xj, vj) in x.iter_mut().zip(v) {
                *xj += wi * vj;
            }
        }
        interp += usize::from(w[d] > 0.5);
        let closest = (0..=d)
            .min_by(|&a, &b| {
                squared_distance(&x, vertices.point(a)).total_cmp(&squared_distance(&x, vertices.point(b)))
            })
            .expect("d + 1 vertices");
        nearest += usize::from(closest == d);
    }
    Ok(SimplexDemo {
        simplicial_fraction: interp as f64 / samples as f64,
        nn_fraction: nearest as f64 / samples as f64,
        samples,
    })
}

pub const HULL_PROBES_PER_TRIAL: usize = 256;

/// Probability that a fresh domain point falls outside the convex hull of
/// `n` samples, as `(mean, stderr)` over trials.
pub fn hull_miss_mass(
    problem: &SyntheticProblem,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64), HarnessError> {
    hull_miss_mass_with(problem, n, trials, HULL_PROBES_PER_TRIAL, seed)
}

pub fn hull_miss_mass_with(
    problem: &SyntheticProblem,
    n: usize,
    trials: usize,
    probes: usize,
    seed: u64,
) -> Result<(f64, f64), HarnessError> {
    if n == 0 || trials == 0 || probes == 0 {
        return Err(HarnessError::InvalidSpec("n, trials and probes must be positive".into()));
    }
    let per_trial: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let points = problem.sample_points(n, &mut rng::stream(seed, t as u64, Purpose::Training));
            let queries = problem.sample_points(probes, &mut rng::stream(seed, t as u64, Purpose::Test));
            let mut outside = 0usize;
            for q in queries.iter() {
                outside += usize::from(!hull_contains(&points, q)?);
            }
            Ok(outside as f64 / probes as f64)
        })
        .collect::<Result<_, HarnessError>>()?;
    Ok(mean_stderr(&per_trial))
}
