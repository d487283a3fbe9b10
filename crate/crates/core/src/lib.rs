//! Interpolating predictors and the experiments around them.
//!
//! * [`geometry`]: Delaunay point location by linear programming, simplex
//!   barycentric interpolation.
//! * [`neighbors`]: exact k-nearest-neighbor search.
//! * [`estimators`]: simplicial interpolation, singular-weight nearest
//!   neighbors, the Hilbert kernel rule and a plain k-NN baseline.
//! * [`synthetic`]: problems with known regression function and Bayes risk.
//! * [`graph_ssl`]: Laplacian interpolation on partially labeled graphs.
//! * [`harness`]: seeded Monte Carlo experiments and rate fitting.

// NaN-rejecting `!(x > 0.0)` guards and indexed loops in the dense solvers.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dataset;
pub mod estimators;
pub mod geometry;
pub mod graph_ssl;
pub mod harness;
mod linalg;
pub mod neighbors;
pub mod rng;
pub mod synthetic;

pub use dataset::{DatasetError, LabeledDataset};
pub use estimators::{
    EstimatorConfig, EstimatorError, FittedEstimator, NeighborCount, Predictor, Scheme,
    WeightFunction,
};
pub use geometry::{GeometryError, Point, PointSet};
pub use graph_ssl::{GraphError, GraphInterpolant, LabeledGraph};
pub use harness::{ExperimentResult, ExperimentSpec, HarnessError, RateFit, Statistic};
pub use neighbors::{Neighbor, NeighborError, NeighborIndex};
pub use synthetic::{Domain, EtaKind, SyntheticError, SyntheticProblem};
