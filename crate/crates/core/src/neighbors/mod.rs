//! Exact Euclidean k-nearest-neighbor queries.
//!
//! Neighbors are ordered by `(distance, dataset index)`, so equidistant points
//! come back lowest index first and results never depend on tree layout.

mod kdtree;

use crate::geometry::{squared_distance, PointSet};
use kdtree::KdTree;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NeighborError {
    #[error("cannot index an empty dataset")]
    EmptyDataset,
    #[error("k = {k} needs {needed} points but the dataset has {n}")]
    KTooLarge { k: usize, needed: usize, n: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("query has dimension {got}, index has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// The `k` nearest neighbors plus the distance to the `(k+1)`-st.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    pub neighbors: Vec<Neighbor>,
    pub r_next: f64,
}

/// Immutable search structure over a shared point set.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    points: Arc<PointSet>,
    tree: KdTree,
}

impl NeighborIndex {
    pub fn build(points: Arc<PointSet>) -> Result<Self, NeighborError> {
        if points.is_empty() {
            return Err(NeighborError::EmptyDataset);
        }
        let tree = KdTree::build(&points);
        Ok(Self { points, tree })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    /// The `k` nearest points, `1 <= k <= n`, in `(distance, index)` order.
    pub fn nearest(&self, query: &[f64], k: usize) -> Result<Vec<Neighbor>, NeighborError> {
        self.check(query)?;
        if k == 0 {
            return Err(NeighborError::ZeroK);
        }
        if k > self.len() {
            return Err(NeighborError::KTooLarge {
                k,
                needed: k,
                n: self.len(),
            });
        }
        Ok(self
            .tree
            .k_nearest(&self.points, query, k)
            .into_iter()
            .map(|(d2, index)| Neighbor {
                index,
                distance: d2.sqrt(),
            })
            .collect())
    }

    /// The `k` nearest neighbors and `r_next`; needs `k + 1 <= n`.
    pub fn knn_query(&self, query: &[f64], k: usize) -> Result<NeighborList, NeighborError> {
        if k == 0 {
            return Err(NeighborError::ZeroK);
        }
        if k + 1 > self.len() {
            return Err(NeighborError::KTooLarge {
                k,
                needed: k + 1,
                n: self.len(),
            });
        }
        let mut neighbors = self.nearest(query, k + 1)?;
        let next = neighbors.pop().expect("k + 1 >= 2 neighbors");
        Ok(NeighborList {
            neighbors,
            r_next: next.distance,
        })
    }

    fn check(&self, query: &[f64]) -> Result<(), NeighborError> {
        if query.len() != self.points.dim() {
            return Err(NeighborError::DimensionMismatch {
                expected: self.points.dim(),
                got: query.len(),
            });
        }
        Ok(())
    }
}

/// Exhaustive scan with the same ordering contract as [`NeighborIndex::nearest`].
pub fn brute_force_nearest(points: &PointSet, query: &[f64], k: usize) -> Vec<Neighbor> {
    let mut all: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (squared_distance(p, query), i))
        .collect();
    all.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    all.truncate(k);
    all.into_iter()
        .map(|(d2, index)| Neighbor {
            index,
            distance: d2.sqrt(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(coords: &[f64], dim: usize) -> NeighborIndex {
        NeighborIndex::build(Arc::new(PointSet::new(dim, coords.to_vec()).unwrap())).unwrap()
    }

    #[test]
    fn three_points_on_a_line() {
        let idx = index(&[0.0, 1.0, 3.0], 1);
        assert_eq!(idx.len(), 3);
        let list = idx.knn_query(&[2.5], 2).unwrap();
        let got: Vec<(usize, f64)> = list.neighbors.iter().map(|n| (n.index, n.distance)).collect();
        assert_eq!(got, vec![(2, 0.5), (1, 1.5)]);
        assert_eq!(list.r_next, 2.5);
    }

    #[test]
    fn equidistant_points_lowest_index_first() {
        let idx = index(&[1.0, -1.0, 3.0], 1);
        let list = idx.nearest(&[0.0], 2).unwrap();
        assert_eq!(list[0].index, 0);
        assert_eq!(list[1].index, 1);
    }

    #[test]
    fn duplicates_are_both_returned() {
        let idx = index(&[0.5, 0.5, 2.0], 1);
        let list = idx.nearest(&[0.5], 2).unwrap();
        assert_eq!(list.iter().map(|n| n.index).collect::<Vec<_>>(), vec![0, 1]);
        assert!(list.iter().all(|n| n.distance == 0.0));
    }

    #[test]
    fn k_too_large() {
        let idx = index(&[0.0, 1.0], 1);
        assert!(matches!(
            idx.knn_query(&[0.2], 2),
            Err(NeighborError::KTooLarge { .. })
        ));
        assert!(idx.nearest(&[0.2], 2).is_ok());
        assert!(matches!(idx.nearest(&[0.2], 3), Err(NeighborError::KTooLarge { .. })));
    }

    #[test]
    fn empty_dataset() {
        let pts = Arc::new(PointSet::new(2, vec![]).unwrap());
        assert_eq!(NeighborIndex::build(pts).unwrap_err(), NeighborError::EmptyDataset);
    }
}
