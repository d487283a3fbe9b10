use super::{GeometryError, PointSet, CONTAINMENT_TOL, MAX_CONDITION};
use crate::linalg::{condition1, Lu};

/// A non-degenerate d-simplex with its lifted system `[1; v_j]` factored.
#[derive(Debug, Clone)]
pub struct SimplexCell {
    vertex_indices: Vec<usize>,
    /// Row-major `(d+1) x d`.
    vertex_coords: Vec<f64>,
    dim: usize,
    lifted: Lu,
}

impl SimplexCell {
    /// `vertex_coords` is row-major with `d+1` rows of `d` coordinates.
    pub fn new(vertex_indices: Vec<usize>, vertex_coords: Vec<f64>) -> Result<Self, GeometryError> {
        let k = vertex_indices.len();
        if k < 2 {
            return Err(GeometryError::TooFewPoints { needed: 2, got: k });
        }
        let dim = k - 1;
        if vertex_coords.len() != k * dim {
            return Err(GeometryError::DimensionMismatch {
                expected: k * dim,
                got: vertex_coords.len(),
            });
        }
        if !vertex_coords.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        // Column j is (1, v_j).
        let mut lifted = vec![0.0; k * k];
        for j in 0..k {
            lifted[j] = 1.0;
            for i in 0..dim {
                lifted[(i + 1) * k + j] = vertex_coords[j * dim + i];
            }
        }
        let lu = Lu::factor(&lifted, k).map_err(|_| GeometryError::DegenerateSimplex)?;
        if !(condition1(&lifted, &lu) <= MAX_CONDITION) {
            return Err(GeometryError::DegenerateSimplex);
        }
        Ok(Self {
            vertex_indices,
            vertex_coords,
            dim,
            lifted: lu,
        })
    }

    /// Cell spanned by `indices` of `points`.
    pub fn from_points(points: &PointSet, indices: &[usize]) -> Result<Self, GeometryError> {
        if indices.len() != points.dim() + 1 {
            return Err(GeometryError::DimensionMismatch {
                expected: points.dim() + 1,
                got: indices.len(),
            });
        }
        let coords = indices
            .iter()
            .flat_map(|&i| points.point(i).iter().copied())
            .collect();
        Self::new(indices.to_vec(), coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_indices(&self) -> &[usize] {
        &self.vertex_indices
    }

    pub fn vertex(&self, j: usize) -> &[f64] {
        &self.vertex_coords[j * self.dim..(j + 1) * self.dim]
    }

    /// Longest edge length.
    pub fn diameter(&self) -> f64 {
        let k = self.dim + 1;
        let mut best = 0.0_f64;
        for a in 0..k {
            for b in (a + 1)..k {
                best = best.max(super::distance(self.vertex(a), self.vertex(b)));
            }
        }
        best
    }
}

/// Barycentric coordinates `w` with `sum w = 1` and `sum w_j v_j = x`.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricWeights(Vec<f64>);

impl BarycentricWeights {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// True when every weight is at least `-1e-9`.
    pub fn is_inside(&self) -> bool {
        self.0.iter().all(|&w| w >= -CONTAINMENT_TOL)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

pub fn barycentric_coordinates(
    cell: &SimplexCell,
    query: &[f64],
) -> Result<BarycentricWeights, GeometryError> {
    if query.len() != cell.dim {
        return Err(GeometryError::DimensionMismatch {
            expected: cell.dim,
            got: query.len(),
        });
    }
    let mut rhs = Vec::with_capacity(cell.dim + 1);
    rhs.push(1.0);
    rhs.extend_from_slice(query);
    Ok(BarycentricWeights(cell.lifted.solve(&rhs)))
}

/// Value at `query` of the affine function through `(v_j, labels[j])`.
pub fn interpolate_simplex(
    cell: &SimplexCell,
    labels: &[f64],
    query: &[f64],
) -> Result<f64, GeometryError> {
    if labels.len() != cell.dim + 1 {
        return Err(GeometryError::DimensionMismatch {
            expected: cell.dim + 1,
            got: labels.len(),
        });
    }
    let w = barycentric_coordinates(cell, query)?;
    Ok(w.0.iter().zip(labels).map(|(w, y)| w * y).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SimplexCell {
        SimplexCell::new(vec![0, 1, 2], vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn weights_of_interior_point() {
        let w = barycentric_coordinates(&triangle(), &[0.25, 0.25]).unwrap();
        for (got, want) in w.as_slice().iter().zip([0.5, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(w.is_inside());
    }

    #[test]
    fn weights_at_vertex() {
        let w = barycentric_coordinates(&triangle(), &[0.0, 0.0]).unwrap();
        assert_eq!(w.as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn collinear_simplex_is_degenerate() {
        let err = SimplexCell::new(vec![0, 1, 2], vec![0.0, 0.0, 1.0, 1.0, 2.0, 2.0]).unwrap_err();
        assert_eq!(err, GeometryError::DegenerateSimplex);
        // Nearly collinear also fails the condition bound.
        let err =
            SimplexCell::new(vec![0, 1, 2], vec![0.0, 0.0, 1.0, 1.0, 2.0, 2.0 + 1e-14]).unwrap_err();
        assert_eq!(err, GeometryError::DegenerateSimplex);
    }

    #[test]
    fn interpolates_affine_labels() {
        let v = interpolate_simplex(&triangle(), &[0.0, 0.0, 1.0], &[0.25, 0.25]).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        let c = interpolate_simplex(&triangle(), &[0.7, 0.7, 0.7], &[0.1, 0.3]).unwrap();
        assert!((c - 0.7).abs() < 1e-15);
    }

    #[test]
    fn diameter_is_longest_edge() {
        assert!((triangle().diameter() - 2f64.sqrt()).abs() < 1e-15);
        let seg = SimplexCell::new(vec![4, 9], vec![0.5, 1.0]).unwrap();
        assert_eq!(seg.diameter(), 0.5);
    }
}
