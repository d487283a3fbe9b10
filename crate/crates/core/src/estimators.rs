//! Interpolating predictors behind one fit/predict contract.
//!
//! * simplicial interpolation over the implicit Delaunay triangulation,
//!   constant outside the convex hull;
//! * wiNN: k-NN averaging with singular weights `phi(|x - x_i| / |x - x_(k+1)|)`;
//! * the Hilbert kernel estimate, wiNN with `k = n - 1` and `delta = d`;
//! * unweighted k-NN, interpolating only for `k = 1`.

use crate::dataset::LabeledDataset;
use crate::geometry::{locate_delaunay_cell, GeometryError, Location};
use crate::neighbors::{NeighborError, NeighborIndex};

/// Distances at or below this count as hitting a training point.
pub const EXACT_HIT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EstimatorError {
    #[error("weight function needs t > 0, got {0}")]
    NonPositiveArgument(f64),
    #[error("invalid estimator configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Neighbors(#[from] NeighborError),
}

/// Singular radial profile `phi` with `phi(0) = +inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFunction {
    /// `t^(-delta)`.
    PowerLaw { delta: f64 },
    /// `-ln t`.
    NegLog,
}

impl WeightFunction {
    /// `PowerLaw` with `delta = d/4`, the middle of the admissible `(0, d/2)`.
    pub fn default_for_dim(d: usize) -> Self {
        WeightFunction::PowerLaw {
            delta: d as f64 / 4.0,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64, EstimatorError> {
        phi_eval(*self, t)
    }

    fn check_for_dim(&self, d: usize) {
        if let WeightFunction::PowerLaw { delta } = *self {
            if !(delta > 0.0 && delta < d as f64 / 2.0) {
                log::warn!(
                    "power-law exponent {delta} is outside (0, d/2) = (0, {}); rate guarantees do not apply",
                    d as f64 / 2.0
                );
            }
        }
    }
}

pub fn phi_eval(w: WeightFunction, t: f64) -> Result<f64, EstimatorError> {
    if !(t > 0.0) {
        return Err(EstimatorError::NonPositiveArgument(t));
    }
    Ok(match w {
        WeightFunction::PowerLaw { delta } => t.powf(-delta),
        WeightFunction::NegLog => -t.ln(),
    })
}

/// How many neighbors to use as a function of the sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NeighborCount {
    Fixed(usize),
    /// `ceil(n^exponent)`.
    Power(f64),
    /// `ceil(n^(2 alpha / (2 alpha + d)))`.
    RateOptimal { alpha: f64 },
}

impl NeighborCount {
    /// `k` for `n` points in `d` dimensions, at least 1. Rules (but not
    /// `Fixed`) are capped at `cap`.
    pub fn resolve(&self, n: usize, d: usize, cap: usize) -> usize {
        let from_exponent = |e: f64| ((n as f64).powf(e).ceil() as usize).clamp(1, cap.max(1));
        match *self {
            NeighborCount::Fixed(k) => k,
            NeighborCount::Power(e) => from_exponent(e),
            NeighborCount::RateOptimal { alpha } => {
                from_exponent(2.0 * alpha / (2.0 * alpha + d as f64))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    Simplicial,
    WiNN {
        k: NeighborCount,
        weight: WeightFunction,
    },
    /// Expands to `WiNN { k: n - 1, weight: PowerLaw { delta: d } }` when fitted.
    Hilbert,
    UnweightedKnn { k: NeighborCount },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub scheme: Scheme,
    /// Simplicial prediction outside the convex hull.
    pub outside_hull_value: f64,
}

impl EstimatorConfig {
    pub fn new(scheme: Scheme) -> Self {
        Self {
            scheme,
            outside_hull_value: 0.5,
        }
    }

    pub fn fit(&self, data: &LabeledDataset) -> Result<FittedEstimator, EstimatorError> {
        let n = data.len();
        let d = data.dim();
        let index = || NeighborIndex::build(data.shared_points());
        let model = match self.scheme {
            Scheme::Simplicial => Model::Simplicial {
                outside_hull_value: self.outside_hull_value,
            },
            Scheme::WiNN { k, weight } => {
                let k = k.resolve(n, d, n.saturating_sub(1));
                if k == 0 {
                    return Err(EstimatorError::InvalidConfig("k must be at least 1".into()));
                }
                if k + 1 > n {
                    return Err(NeighborError::KTooLarge { k, needed: k + 1, n }.into());
                }
                weight.check_for_dim(d);
                Model::WiNN {
                    index: index()?,
                    k,
                    weight,
                }
            }
            Scheme::Hilbert => {
                if n < 2 {
                    return Err(NeighborError::KTooLarge { k: 1, needed: 2, n }.into());
                }
                Model::WiNN {
                    index: index()?,
                    k: n - 1,
                    weight: WeightFunction::PowerLaw { delta: d as f64 },
                }
            }
            Scheme::UnweightedKnn { k } => {
                let k = k.resolve(n, d, n);
                if k == 0 {
                    return Err(EstimatorError::InvalidConfig("k must be at least 1".into()));
                }
                if k > n {
                    return Err(NeighborError::KTooLarge { k, needed: k, n }.into());
                }
                Model::Knn { index: index()?, k }
            }
        };
        Ok(FittedEstimator {
            data: data.clone(),
            model,
        })
    }
}

/// Anything that maps a query to an estimate of `eta`.
pub trait Predictor: Send + Sync {
    fn predict(&self, x: &[f64]) -> Result<f64, EstimatorError>;

    /// Plug-in classifier `1{predict(x) > 1/2}`.
    fn classify(&self, x: &[f64]) -> Result<u8, EstimatorError> {
        self.predict(x).map(plugin_classify)
    }
}

#[derive(Debug, Clone)]
enum Model {
    Simplicial {
        outside_hull_value: f64,
    },
    WiNN {
        index: NeighborIndex,
        k: usize,
        weight: WeightFunction,
    },
    Knn {
        index: NeighborIndex,
        k: usize,
    },
}

/// An immutable fitted estimator; safe to share across threads.
#[derive(Debug, Clone)]
pub struct FittedEstimator {
    data: LabeledDataset,
    model: Model,
}

impl FittedEstimator {
    pub fn dataset(&self) -> &LabeledDataset {
        &self.data
    }

    /// Resolved neighbor count, for nearest-neighbor schemes.
    pub fn k(&self) -> Option<usize> {
        match self.model {
            Model::WiNN { k, .. } | Model::Knn { k, .. } => Some(k),
            Model::Simplicial { .. } => None,
        }
    }
}

impl Predictor for FittedEstimator {
    fn predict(&self, x: &[f64]) -> Result<f64, EstimatorError> {
        match &self.model {
            Model::Simplicial { outside_hull_value } => {
                simplicial_predict(&self.data, *outside_hull_value, x)
            }
            Model::WiNN { index, k, weight } => winn_predict(&self.data, index, *k, *weight, x),
            Model::Knn { index, k } => knn_baseline_predict(&self.data, index, *k, x),
        }
    }
}

/// Singular-weight nearest-neighbor average. Returns the training label when
/// the query coincides with a training point (lowest index among duplicates).
pub fn winn_predict(
    data: &LabeledDataset,
    index: &NeighborIndex,
    k: usize,
    weight: WeightFunction,
    query: &[f64],
) -> Result<f64, EstimatorError> {
    let list = index.knn_query(query, k)?;
    let labels = data.labels();
    let nearest = list.neighbors[0];
    if nearest.distance <= EXACT_HIT {
        return Ok(labels[nearest.index]);
    }
    let ys: Vec<f64> = list.neighbors.iter().map(|nb| labels[nb.index]).collect();
    let weights: Vec<f64> = match weight {
        // Scaled by t_1^delta so the largest weight is 1; the ratio is unchanged.
        WeightFunction::PowerLaw { delta } => list
            .neighbors
            .iter()
            .map(|nb| (nearest.distance / nb.distance).powf(delta))
            .collect(),
        WeightFunction::NegLog => list
            .neighbors
            .iter()
            .map(|nb| phi_eval(weight, nb.distance / list.r_next))
            .collect::<Result<_, _>>()?,
    };
    let total: f64 = weights.iter().sum();
    let estimate = if total > 0.0 {
        weights.iter().zip(&ys).map(|(w, y)| w * y).sum::<f64>() / total
    } else {
        // Every neighbor sits exactly at r_next, where -ln(1) = 0.
        ys.iter().sum::<f64>() / ys.len() as f64
    };
    Ok(clamp_to_labels(estimate, &ys))
}

/// Linear interpolation in the Delaunay cell containing the query, or
/// `outside_hull_value` outside the convex hull.
pub fn simplicial_predict(
    data: &LabeledDataset,
    outside_hull_value: f64,
    query: &[f64],
) -> Result<f64, EstimatorError> {
    match locate_delaunay_cell(data.points(), query)? {
        Location::OutsideHull => Ok(outside_hull_value),
        Location::Cell { cell, weights } => {
            let labels = data.labels();
            let ys: Vec<f64> = cell.vertex_indices().iter().map(|&i| labels[i]).collect();
            let value = weights.as_slice().iter().zip(&ys).map(|(w, y)| w * y).sum();
            Ok(clamp_to_labels(value, &ys))
        }
    }
}

/// Nearest label for `k = 1`, otherwise the unweighted mean of `k` labels.
pub fn knn_baseline_predict(
    data: &LabeledDataset,
    index: &NeighborIndex,
    k: usize,
    query: &[f64],
) -> Result<f64, EstimatorError> {
    let neighbors = index.nearest(query, k)?;
    let labels = data.labels();
    Ok(neighbors.iter().map(|nb| labels[nb.index]).sum::<f64>() / k as f64)
}

/// `1{eta_hat > 1/2}`.
pub fn plugin_classify(eta_hat: f64) -> u8 {
    u8::from(eta_hat > 0.5)
}

/// Round-off can leave a convex combination a few ulps outside its labels.
fn clamp_to_labels(value: f64, ys: &[f64]) -> f64 {
    let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    value.clamp(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointSet;

    fn dataset(rows: &[&[f64]], labels: &[f64]) -> LabeledDataset {
        LabeledDataset::new(PointSet::from_rows(rows).unwrap(), labels.to_vec(), false).unwrap()
    }

    fn index_of(data: &LabeledDataset) -> NeighborIndex {
        NeighborIndex::build(data.shared_points()).unwrap()
    }

    #[test]
    fn phi_values() {
        let p = WeightFunction::PowerLaw { delta: 1.0 };
        assert_eq!(phi_eval(p, 0.25).unwrap(), 4.0);
        assert!((phi_eval(WeightFunction::NegLog, (-1f64).exp()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(phi_eval(WeightFunction::NegLog, 1.0).unwrap(), 0.0);
        assert_eq!(
            phi_eval(p, 0.0).unwrap_err(),
            EstimatorError::NonPositiveArgument(0.0)
        );
        assert!(phi_eval(WeightFunction::NegLog, -1.0).is_err());
    }

    #[test]
    fn winn_direct_formula() {
        // Query 0; neighbors at 1 (label 1) and 2 (label 0); third at 4.
        let data = dataset(&[&[1.0], &[-2.0], &[4.0]], &[1.0, 0.0, 1.0]);
        let idx = index_of(&data);
        let v = winn_predict(&data, &idx, 2, WeightFunction::PowerLaw { delta: 1.0 }, &[0.0])
            .unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn winn_interpolates_and_respects_constants() {
        let data = dataset(&[&[0.0], &[1.0], &[3.0], &[4.5]], &[0.3, 0.9, 0.1, 0.7]);
        let idx = index_of(&data);
        for (i, x) in [0.0, 1.0, 3.0, 4.5].iter().enumerate() {
            let v = winn_predict(&data, &idx, 2, WeightFunction::NegLog, &[*x]).unwrap();
            assert_eq!(v, data.labels()[i]);
        }
        let flat = dataset(&[&[0.0], &[1.0], &[3.0]], &[0.35, 0.35, 0.35]);
        let fidx = index_of(&flat);
        let v = winn_predict(&flat, &fidx, 2, WeightFunction::PowerLaw { delta: 0.7 }, &[0.37])
            .unwrap();
        assert_eq!(v, 0.35);
    }

    #[test]
    fn neglog_all_weights_zero_falls_back_to_mean() {
        // Both neighbors and the (k+1)-st at distance 1 from the query.
        let data = dataset(&[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0]], &[1.0, 0.0, 1.0]);
        let idx = index_of(&data);
        let v = winn_predict(&data, &idx, 2, WeightFunction::NegLog, &[0.0, 0.0]).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn coincident_points_use_lowest_index() {
        let data = dataset(&[&[0.5], &[0.5], &[2.0]], &[0.0, 1.0, 1.0]);
        let idx = index_of(&data);
        let v = winn_predict(&data, &idx, 1, WeightFunction::NegLog, &[0.5]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn simplicial_examples() {
        let data = dataset(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]], &[0.0, 0.0, 1.0]);
        let v = simplicial_predict(&data, 0.5, &[0.25, 0.25]).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        assert_eq!(simplicial_predict(&data, 0.5, &[2.0, 2.0]).unwrap(), 0.5);
        assert_eq!(simplicial_predict(&data, 0.5, &[0.0, 1.0]).unwrap(), 1.0);
        let fitted = EstimatorConfig::new(Scheme::Simplicial).fit(&data).unwrap();
        assert_eq!(fitted.predict(&[5.0, 5.0]).unwrap(), 0.5);
    }

    #[test]
    fn knn_baseline_examples() {
        let data = dataset(&[&[0.0], &[1.0]], &[0.0, 1.0]);
        let idx = index_of(&data);
        assert_eq!(knn_baseline_predict(&data, &idx, 1, &[0.4]).unwrap(), 0.0);
        assert_eq!(knn_baseline_predict(&data, &idx, 2, &[0.4]).unwrap(), 0.5);
        assert_eq!(knn_baseline_predict(&data, &idx, 1, &[0.5]).unwrap(), 0.0);
        assert!(knn_baseline_predict(&data, &idx, 3, &[0.4]).is_err());
    }

    #[test]
    fn plugin_threshold_is_strict() {
        assert_eq!(plugin_classify(0.7), 1);
        assert_eq!(plugin_classify(0.5), 0);
        assert_eq!(plugin_classify(0.2), 0);
    }

    #[test]
    fn hilbert_matches_expanded_winn() {
        let data = dataset(
            &[&[0.1, 0.2], &[0.8, 0.3], &[0.4, 0.9], &[0.6, 0.6], &[0.2, 0.7]],
            &[1.0, 0.0, 1.0, 0.0, 1.0],
        );
        let hilbert = EstimatorConfig::new(Scheme::Hilbert).fit(&data).unwrap();
        let winn = EstimatorConfig::new(Scheme::WiNN {
            k: NeighborCount::Fixed(4),
            weight: WeightFunction::PowerLaw { delta: 2.0 },
        })
        .fit(&data)
        .unwrap();
        assert_eq!(hilbert.k(), Some(4));
        for q in [[0.5, 0.5], [0.3, 0.3], [0.9, 0.9]] {
            assert_eq!(hilbert.predict(&q).unwrap(), winn.predict(&q).unwrap());
        }
    }

    #[test]
    fn neighbor_count_rules() {
        assert_eq!(NeighborCount::Power(0.5).resolve(2000, 2, 1999), 45);
        assert_eq!(NeighborCount::RateOptimal { alpha: 1.0 }.resolve(256, 2, 255), 16);
        assert_eq!(NeighborCount::Power(1.0).resolve(10, 2, 9), 9);
        assert_eq!(NeighborCount::Fixed(7).resolve(5, 2, 4), 7);
    }

    #[test]
    fn fit_rejects_oversized_k() {
        let data = dataset(&[&[0.0], &[1.0]], &[0.0, 1.0]);
        let cfg = EstimatorConfig::new(Scheme::WiNN {
            k: NeighborCount::Fixed(2),
            weight: WeightFunction::NegLog,
        });
        assert!(matches!(
            cfg.fit(&data),
            Err(EstimatorError::Neighbors(NeighborError::KTooLarge { .. }))
        ));
    }
}
