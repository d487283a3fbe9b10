//! Density of points where an interpolating classifier disagrees with the
//! Bayes rule.

use super::HarnessError;
use crate::estimators::{EstimatorConfig, Predictor};
use crate::geometry::PointSet;
use crate::neighbors::NeighborIndex;
use crate::synthetic::SyntheticProblem;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversarialReport {
    /// Share of grid points within `2 * epsilon` of a detected disagreement.
    pub covered_fraction: f64,
    /// Share of grid points where the classifiers disagree.
    pub adversarial_mass: f64,
    /// Grid points plus training points found in the disagreement set.
    pub detected: usize,
    pub grid_points: usize,
}

/// Cell centers of a `resolution^d` grid over the domain's bounding box,
/// keeping those inside the domain.
fn domain_grid(problem: &SyntheticProblem, resolution: usize) -> PointSet {
    let domain = problem.domain();
    let d = domain.dim();
    let (lo, hi) = domain.bounds();
    let step = (hi - lo) / resolution as f64;
    let total = resolution.pow(d as u32);
    let mut coords = Vec::new();
    let mut x = vec![0.0; d];
    for cell in 0..total {
        let mut rest = cell;
        for xi in x.iter_mut() {
            *xi = lo + (rest % resolution) as f64 * step + 0.5 * step;
            rest /= resolution;
        }
        if domain.contains(&x) {
            coords.extend_from_slice(&x);
        }
    }
    PointSet::new(d, coords).expect("grid is finite")
}

/// Evaluates the fitted classifier against the Bayes rule on a grid and at
/// the training points, then measures how much of the grid lies within
/// `2 * epsilon` of the disagreement set found.
///
/// The training points matter: an interpolating rule flips its decision on
/// small neighborhoods of noisy labels that a coarse grid rarely hits.
pub fn adversarial_density(
    problem: &SyntheticProblem,
    config: &EstimatorConfig,
    n: usize,
    epsilon: f64,
    resolution: usize,
    seed: u64,
) -> Result<AdversarialReport, HarnessError> {
    if !problem.is_binary() {
        return Err(HarnessError::InvalidSpec("adversarial density needs a binary problem".into()));
    }
    if !(epsilon >= 0.0) || resolution == 0 {
        return Err(HarnessError::InvalidSpec("need epsilon >= 0 and resolution >= 1".into()));
    }
    let data = problem.sample_dataset(n, seed);
    let model = config.fit(&data)?;
    let grid = domain_grid(problem, resolution);

    let mut detected = Vec::new();
    let mut in_set = 0usize;
    for x in grid.iter() {
        if model.classify(x)? != problem.bayes_classify(x) {
            in_set += 1;
            detected.extend_from_slice(x);
        }
    }
    for x in data.points().iter() {
        if model.classify(x)? != problem.bayes_classify(x) {
            detected.extend_from_slice(x);
        }
    }
    let m = grid.len();
    let d = problem.dim();
    let count = detected.len() / d;
    let covered = if count == 0 {
        0
    } else {
        let index = NeighborIndex::build(Arc::new(PointSet::new(d, detected)?))
            .expect("detected set is non-empty");
        let radius = 2.0 * epsilon;
        grid.iter()
            .filter(|x| index.nearest(x, 1).expect("k = 1 fits")[0].distance <= radius)
            .count()
    };
    Ok(AdversarialReport {
        covered_fraction: covered as f64 / m as f64,
        adversarial_mass: in_set as f64 / m as f64,
        detected: count,
        grid_points: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{NeighborCount, Scheme};
    use crate::synthetic::{Domain, EtaKind};

    #[test]
    fn grid_respects_domain() {
        let p = SyntheticProblem::binary(Domain::UnitCube(2), EtaKind::Constant { p: 0.9 }).unwrap();
        assert_eq!(domain_grid(&p, 10).len(), 100);
        let p = SyntheticProblem::binary(Domain::Simplex(2), EtaKind::Constant { p: 0.9 }).unwrap();
        assert_eq!(domain_grid(&p, 10).len(), 55);
    }

    #[test]
    fn huge_epsilon_covers_everything() {
        let p = SyntheticProblem::binary(Domain::UnitCube(2), EtaKind::Constant { p: 0.7 }).unwrap();
        let cfg = EstimatorConfig::new(Scheme::UnweightedKnn {
            k: NeighborCount::Fixed(1),
        });
        let r = adversarial_density(&p, &cfg, 200, 2.0, 20, 1).unwrap();
        assert!(r.detected > 0);
        assert_eq!(r.covered_fraction, 1.0);
    }

    #[test]
    fn noiseless_disagreement_stays_near_boundary() {
        let p = SyntheticProblem::binary(Domain::UnitCube(2), EtaKind::LinearBoundary { h: 0.5 })
            .unwrap();
        let cfg = EstimatorConfig::new(Scheme::UnweightedKnn {
            k: NeighborCount::Fixed(1),
        });
        let data = p.sample_dataset(500, 3);
        let model = cfg.fit(&data).unwrap();
        for x in domain_grid(&p, 40).iter() {
            if model.classify(x).unwrap() != p.bayes_classify(x) {
                assert!((x[0] - 0.5).abs() < 0.15, "{x:?}");
            }
        }
    }
}
