//! Graph-based semi-supervised interpolation.
//!
//! Labeled vertices keep their labels; every unlabeled vertex `i` satisfies
//!
//! ```text
//! sum_j w_ij (f_i - f_j) + kappa^2 f_i = 0,   i.e.   f_i = z_i / (kappa^2 + z_i) * fbar_i
//! ```
//!
//! with `z_i = sum_j w_ij` and `fbar_i` the weighted neighbor average. With the
//! unnormalized Laplacian `L = D - W` this reads `(L f)_i = -kappa^2 f_i`.
//! `kappa = 0` is label propagation (the harmonic extension).
//!
//! Class labels in this module follow the `{-1, +1}` convention.

mod io;

pub use io::{parse_edge_list, parse_labels, write_interpolant_csv};

use crate::geometry::PointSet;
use crate::linalg::Lu;
use crate::neighbors::{NeighborError, NeighborIndex};
use crate::rng;
use rand::Rng as _;
use std::collections::VecDeque;
use std::sync::Arc;

/// Graphs up to this size are solved directly; larger ones iterate.
pub const DIRECT_SOLVE_LIMIT: usize = 2000;
const ITERATIVE_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 1_000_000;

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("kappa must be nonnegative, got {0}")]
    NegativeKappa(f64),
    #[error("with kappa = 0 every connected component needs a labeled vertex (vertex {0} has none)")]
    SingularSystem(usize),
    #[error("no labeled vertices")]
    NoLabels,
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("iterative solve stalled at residual {0:e}")]
    NotConverged(f64),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Weighted undirected graph with a partial labeling.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    labels: Vec<Option<f64>>,
    kappa: f64,
}

impl LabeledGraph {
    /// Each edge `(i, j, w)` adds `w` to both `w_ij` and `w_ji`.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        labeled: impl IntoIterator<Item = (usize, f64)>,
        kappa: f64,
    ) -> Result<Self, GraphError> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(GraphError::NegativeKappa(kappa));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, j, w) in edges {
            if i >= n || j >= n {
                return Err(GraphError::Invalid(format!("edge ({i}, {j}) outside 0..{n}")));
            }
            if i == j {
                return Err(GraphError::Invalid(format!("self loop at vertex {i}")));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(GraphError::Invalid(format!("edge ({i}, {j}) has weight {w}")));
            }
            if w > 0.0 {
                adjacency[i].push((j, w));
                adjacency[j].push((i, w));
            }
        }
        let mut labels = vec![None; n];
        for (i, y) in labeled {
            if i >= n {
                return Err(GraphError::Invalid(format!("label for vertex {i} outside 0..{n}")));
            }
            if !y.is_finite() {
                return Err(GraphError::Invalid(format!("label {y} at vertex {i}")));
            }
            labels[i] = Some(y);
        }
        if labels.iter().all(Option::is_none) {
            return Err(GraphError::NoLabels);
        }
        Ok(Self {
            adjacency,
            labels,
            kappa,
        })
    }

    /// Complete graph on `n` vertices with unit weights.
    pub fn fully_connected(
        n: usize,
        labeled: impl IntoIterator<Item = (usize, f64)>,
        kappa: f64,
    ) -> Result<Self, GraphError> {
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j, 1.0)));
        Self::new(n, edges, labeled, kappa)
    }

    /// Symmetrized k-nearest-neighbor graph with unit weights.
    pub fn knn_graph(
        points: Arc<PointSet>,
        k: usize,
        labeled: impl IntoIterator<Item = (usize, f64)>,
        kappa: f64,
    ) -> Result<Self, GraphError> {
        let n = points.len();
        let index = NeighborIndex::build(Arc::clone(&points)).map_err(neighbor_err)?;
        let mut edges = std::collections::BTreeSet::new();
        for i in 0..n {
            let near = index.nearest(points.point(i), (k + 1).min(n)).map_err(neighbor_err)?;
            for nb in near.into_iter().filter(|nb| nb.index != i).take(k) {
                edges.insert((i.min(nb.index), i.max(nb.index)));
            }
        }
        Self::new(n, edges.into_iter().map(|(i, j)| (i, j, 1.0)), labeled, kappa)
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn label(&self, i: usize) -> Option<f64> {
        self.labels[i]
    }

    /// Weighted degree `z_i`.
    pub fn degree(&self, i: usize) -> f64 {
        self.adjacency[i].iter().map(|&(_, w)| w).sum()
    }

    /// Largest `|sum_j w_ij (f_i - f_j) + kappa^2 f_i|` over unlabeled vertices.
    pub fn stationarity_residual(&self, values: &[f64]) -> f64 {
        let k2 = self.kappa * self.kappa;
        (0..self.len())
            .filter(|&i| self.labels[i].is_none())
            .map(|i| {
                let lap: f64 = self.adjacency[i]
                    .iter()
                    .map(|&(j, w)| w * (values[i] - values[j]))
                    .sum();
                (lap + k2 * values[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// With `kappa = 0`, find an unlabeled vertex not connected to any label.
    fn unanchored_vertex(&self) -> Option<usize> {
        let mut seen: Vec<bool> = self.labels.iter().map(Option::is_some).collect();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&i| seen[i]).collect();
        while let Some(i) = queue.pop_front() {
            for &(j, _) in &self.adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.iter().position(|s| !s)
    }
}

fn neighbor_err(e: NeighborError) -> GraphError {
    GraphError::Invalid(e.to_string())
}

/// Interpolant values, one per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInterpolant {
    pub values: Vec<f64>,
}

pub fn solve_graph_interpolant(graph: &LabeledGraph) -> Result<GraphInterpolant, GraphError> {
    if graph.kappa == 0.0 {
        if let Some(v) = graph.unanchored_vertex() {
            return Err(GraphError::SingularSystem(v));
        }
    }
    let values = if graph.len() <= DIRECT_SOLVE_LIMIT {
        solve_direct(graph)?
    } else {
        solve_jacobi(graph)?
    };
    Ok(GraphInterpolant { values })
}

fn solve_direct(graph: &LabeledGraph) -> Result<Vec<f64>, GraphError> {
    let n = graph.len();
    let k2 = graph.kappa * graph.kappa;
    let unlabeled: Vec<usize> = (0..n).filter(|&i| graph.labels[i].is_none()).collect();
    let mut slot = vec![usize::MAX; n];
    for (s, &i) in unlabeled.iter().enumerate() {
        slot[i] = s;
    }
    let u = unlabeled.len();
    let mut values: Vec<f64> = graph.labels.iter().map(|y| y.unwrap_or(0.0)).collect();
    if u == 0 {
        return Ok(values);
    }
    let mut a = vec![0.0; u * u];
    let mut b = vec![0.0; u];
    for (s, &i) in unlabeled.iter().enumerate() {
        a[s * u + s] = k2 + graph.degree(i);
        for &(j, w) in &graph.adjacency[i] {
            match graph.labels[j] {
                Some(y) => b[s] += w * y,
                None => a[s * u + slot[j]] -= w,
            }
        }
    }
    let lu = Lu::factor(&a, u).map_err(|_| GraphError::SingularSystem(unlabeled[0]))?;
    for (s, v) in lu.solve(&b).into_iter().enumerate() {
        values[unlabeled[s]] = v;
    }
    Ok(values)
}

/// Jacobi sweeps of the fixed-point form.
fn solve_jacobi(graph: &LabeledGraph) -> Result<Vec<f64>, GraphError> {
    let n = graph.len();
    let k2 = graph.kappa * graph.kappa;
    let mut values: Vec<f64> = graph.labels.iter().map(|y| y.unwrap_or(0.0)).collect();
    let mut next = values.clone();
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        for i in 0..n {
            if graph.labels[i].is_none() {
                let denom = k2 + graph.degree(i);
                let pull: f64 = graph.adjacency[i].iter().map(|&(j, w)| w * values[j]).sum();
                next[i] = if denom > 0.0 { pull / denom } else { 0.0 };
            }
        }
        std::mem::swap(&mut values, &mut next);
        residual = graph.stationarity_residual(&values);
        if residual <= ITERATIVE_TOL {
            return Ok(values);
        }
    }
    Err(GraphError::NotConverged(residual))
}

/// Common value `(n_plus - n_minus) / (k + kappa^2)` at every unlabeled
/// vertex of the complete unit-weight graph with `k = n_plus + n_minus`
/// labels in `{-1, +1}`.
pub fn fully_connected_eta(
    n: usize,
    n_plus: usize,
    n_minus: usize,
    kappa: f64,
) -> Result<f64, GraphError> {
    let k = n_plus + n_minus;
    if k == 0 {
        return Err(GraphError::NoLabels);
    }
    if n <= k {
        return Err(GraphError::Invalid(format!(
            "need an unlabeled vertex: n = {n}, labeled = {k}"
        )));
    }
    if !(kappa >= 0.0) {
        return Err(GraphError::NegativeKappa(kappa));
    }
    Ok((n_plus as f64 - n_minus as f64) / (k as f64 + kappa * kappa))
}

/// `exp(-2 (p - 1/2)^2 k)`, bounding `P(n_plus < n_minus)` when each of `k`
/// labels is `+1` with probability `p >= 1/2`.
pub fn hoeffding_excess_bound(p: f64, k: usize) -> f64 {
    (-2.0 * (p - 0.5).powi(2) * k as f64).exp()
}

/// Monte Carlo frequency of `n_plus < n_minus` and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignFlipEstimate {
    pub frequency: f64,
    pub stderr: f64,
    pub trials: usize,
}

pub fn sign_flip_frequency(p: f64, k: usize, trials: usize, seed: u64) -> SignFlipEstimate {
    let mut rng = rng::seeded(seed);
    let mut hits = 0usize;
    for _ in 0..trials {
        let plus = (0..k).filter(|_| rng.random::<f64>() < p).count();
        if 2 * plus < k {
            hits += 1;
        }
    }
    let f = hits as f64 / trials.max(1) as f64;
    SignFlipEstimate {
        frequency: f,
        stderr: (f * (1.0 - f) / trials.max(1) as f64).sqrt(),
        trials,
    }
}
