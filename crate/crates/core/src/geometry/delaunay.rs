//! Delaunay point location through the paraboloid lifting.
//!
//! Each point `p_i` is lifted to `(p_i, |p_i|^2)`. For a query `x` inside the
//! hull, the lower-hull facet above `x` is found by
//!
//! ```text
//! maximize a.x + b   subject to   a.p_i + b <= |p_i|^2   for all i
//! ```
//!
//! and the constraints tight at the optimum are the vertices of the Delaunay
//! cell containing `x`. The LP is unbounded exactly when `x` is outside the
//! hull. Coordinates are centered on the query first, which turns the
//! objective into `maximize b` and keeps the lifted values small.

use super::lp::{convex_combination, solve_small_lp, LinearProgram, LpError};
use super::simplex::{barycentric_coordinates, BarycentricWeights, SimplexCell};
use super::{squared_distance, GeometryError, PointSet};

/// Upper bound on `(d+1)`-subsets examined when breaking cospherical ties.
const MAX_TIE_SUBSETS: usize = 100_000;

#[derive(Debug, Clone)]
pub enum Location {
    /// The containing cell and the query's barycentric weights in it.
    Cell {
        cell: SimplexCell,
        weights: BarycentricWeights,
    },
    OutsideHull,
}

/// Point indices sorted by distance to `query`, ties by index. Used as the
/// pricing order so Bland's rule looks at nearby points first.
fn nearest_first(points: &PointSet, query: &[f64]) -> Vec<usize> {
    let mut keyed: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (squared_distance(p, query), i))
        .collect();
    keyed.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, i)| i).collect()
}

pub fn locate_delaunay_cell(points: &PointSet, query: &[f64]) -> Result<Location, GeometryError> {
    points.check_query(query)?;
    let d = points.dim();
    let n = points.len();
    if n < d + 1 {
        return Err(GeometryError::TooFewPoints {
            needed: d + 1,
            got: n,
        });
    }
    let order = nearest_first(points, query);
    let m = d + 1;
    let mut matrix = Vec::with_capacity(n * m);
    let mut rhs = Vec::with_capacity(n);
    for &i in &order {
        let mut lifted = 0.0;
        for (p, q) in points.point(i).iter().zip(query) {
            let c = p - q;
            matrix.push(c);
            lifted += c * c;
        }
        matrix.push(1.0);
        rhs.push(lifted);
    }
    let mut objective = vec![0.0; m];
    objective[d] = 1.0;
    let lp = LinearProgram::new(objective, matrix, rhs)?;
    let solution = match solve_small_lp(&lp) {
        Ok(s) => s,
        Err(LpError::Unbounded) => return Ok(Location::OutsideHull),
        Err(e) => return Err(e.into()),
    };

    let mut tight: Vec<usize> = solution.tight.iter().map(|&s| order[s]).collect();
    tight.sort_unstable();
    if tight.len() < m {
        return Err(GeometryError::DegenerateConfiguration);
    }
    if let Some(found) = first_containing_subset(points, &tight, query) {
        return Ok(found);
    }
    // Too many cospherical points to enumerate: the LP basis is itself a
    // containing cell whenever it is full.
    if solution.basis.len() == m {
        let mut basis: Vec<usize> = solution.basis.iter().map(|&s| order[s]).collect();
        basis.sort_unstable();
        if let Some(found) = containing_cell(points, &basis, query) {
            return Ok(found);
        }
    }
    Err(GeometryError::DegenerateConfiguration)
}

fn containing_cell(points: &PointSet, indices: &[usize], query: &[f64]) -> Option<Location> {
    let cell = SimplexCell::from_points(points, indices).ok()?;
    let weights = barycentric_coordinates(&cell, query).ok()?;
    weights.is_inside().then_some(Location::Cell { cell, weights })
}

/// Lexicographically smallest `(d+1)`-subset of `tight` (ascending) that is
/// non-degenerate and contains the query.
fn first_containing_subset(points: &PointSet, tight: &[usize], query: &[f64]) -> Option<Location> {
    let k = points.dim() + 1;
    let n = tight.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut chosen = vec![0; k];
    for _ in 0..MAX_TIE_SUBSETS {
        for (c, &i) in chosen.iter_mut().zip(&idx) {
            *c = tight[i];
        }
        if let Some(found) = containing_cell(points, &chosen, query) {
            return Some(found);
        }
        // Advance to the next combination in lexicographic order.
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if idx[pos] < n - k + pos {
                break;
            }
        }
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    None
}

/// Closed convex-hull membership via LP feasibility of a convex combination.
pub fn hull_contains(points: &PointSet, query: &[f64]) -> Result<bool, GeometryError> {
    points.check_query(query)?;
    if points.is_empty() {
        return Ok(false);
    }
    let order = nearest_first(points, query);
    let found = convex_combination(points.as_slice(), points.dim(), query, &order)?;
    Ok(found.is_some())
}

/// Largest diameter over the cells located at `probes`; probes outside the
/// hull are skipped. A lower bound on the maximum cell diameter of the
/// triangulation.
pub fn max_cell_diameter<P: AsRef<[f64]>>(points: &PointSet, probes: &[P]) -> Result<f64, GeometryError> {
    let mut best = 0.0_f64;
    let mut seen = std::collections::HashSet::new();
    for probe in probes {
        if let Location::Cell { cell, .. } = locate_delaunay_cell(points, probe.as_ref())? {
            if seen.insert(cell.vertex_indices().to_vec()) {
                best = best.max(cell.diameter());
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell_of(points: &PointSet, q: &[f64]) -> Vec<usize> {
        match locate_delaunay_cell(points, q).unwrap() {
            Location::Cell { cell, .. } => cell.vertex_indices().to_vec(),
            Location::OutsideHull => panic!("expected a cell"),
        }
    }

    #[test]
    fn interval_location_in_one_dimension() {
        let pts = PointSet::new(1, vec![0.0, 1.0, 3.0]).unwrap();
        assert_eq!(cell_of(&pts, &[2.0]), vec![1, 2]);
        assert_eq!(cell_of(&pts, &[0.5]), vec![0, 1]);
        assert!(matches!(
            locate_delaunay_cell(&pts, &[3.5]).unwrap(),
            Location::OutsideHull
        ));
    }

    #[test]
    fn single_triangle() {
        let pts = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(cell_of(&pts, &[0.2, 0.2]), vec![0, 1, 2]);
    }

    #[test]
    fn cocircular_square_uses_index_tie_break() {
        let pts = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
        let q = [0.5, 0.25];
        match locate_delaunay_cell(&pts, &q).unwrap() {
            Location::Cell { cell, weights } => {
                // {0,1,2} is the first subset and contains the query.
                assert_eq!(cell.vertex_indices(), &[0, 1, 2]);
                assert!(weights.is_inside());
                let total: f64 = weights.as_slice().iter().sum();
                assert!((total - 1.0).abs() < 1e-9);
            }
            Location::OutsideHull => panic!(),
        }
        // (0.75, 0.75) is not in {0,1,2}; next subset {0,1,3} contains it.
        assert_eq!(cell_of(&pts, &[0.75, 0.75]), vec![0, 1, 3]);
    }

    #[test]
    fn hull_membership() {
        let pts = PointSet::new(1, vec![0.0, 1.0]).unwrap();
        assert!(hull_contains(&pts, &[0.5]).unwrap());
        assert!(!hull_contains(&pts, &[1.5]).unwrap());
        assert!(hull_contains(&pts, &[1.0]).unwrap());
        let tri = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(hull_contains(&tri, &[0.5, 0.5]).unwrap());
        assert!(!hull_contains(&tri, &[0.5, 0.5 + 1e-6]).unwrap());
    }

    #[test]
    fn cell_diameters() {
        let pts = PointSet::new(1, vec![0.0, 0.5, 1.0]).unwrap();
        let probes: Vec<[f64; 1]> = (0..=20).map(|i| [i as f64 / 20.0]).collect();
        assert_eq!(max_cell_diameter(&pts, &probes).unwrap(), 0.5);

        let tri = PointSet::from_rows(&[[0.0, 0.0], [3.0, 0.0], [0.0, 1.0]]).unwrap();
        let d = max_cell_diameter(&tri, &[[0.5, 0.2]]).unwrap();
        assert!((d - 10f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn too_few_points() {
        let pts = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            locate_delaunay_cell(&pts, &[0.5, 0.0]),
            Err(GeometryError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn collinear_points_have_no_cell() {
        let pts = PointSet::from_rows(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        let r = locate_delaunay_cell(&pts, &[1.0, 1.0]);
        assert!(matches!(r, Err(GeometryError::DegenerateConfiguration)), "{r:?}");
    }
}
