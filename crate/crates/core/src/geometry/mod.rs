//! Point location in the implicit Delaunay triangulation, barycentric
//! coordinates, simplex-local linear interpolation and convex-hull membership.
//!
//! No triangulation is ever materialized: every query solves its own small
//! linear program over the lifted points.

mod delaunay;
pub mod lp;
mod simplex;

pub use delaunay::{hull_contains, locate_delaunay_cell, max_cell_diameter, Location};
pub use lp::{solve_small_lp, LinearProgram, LpError, LpSolution};
pub use simplex::{barycentric_coordinates, interpolate_simplex, BarycentricWeights, SimplexCell};

/// Tolerance on barycentric weights for "the query lies in the cell".
pub const CONTAINMENT_TOL: f64 = 1e-9;
/// Lifted systems with a larger 1-norm condition number are treated as degenerate.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("simplex is degenerate (lifted system singular or condition number above 1e12)")]
    DegenerateSimplex,
    #[error("no non-degenerate Delaunay cell contains the query")]
    DegenerateConfiguration,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("coordinates must be finite")]
    NonFinite,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// A single point with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// `n` points in `d` dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                got: coords.len() % dim,
            });
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, GeometryError> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            coords.extend_from_slice(r);
        }
        Self::new(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    /// Multiplies every coordinate by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub(crate) fn check_query(&self, query: &[f64]) -> Result<(), GeometryError> {
        if query.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                got: query.len(),
            });
        }
        if !query.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(())
    }
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}
