//! Shared fixtures for the benchmarks.

use interp_core::{Domain, EtaKind, LabeledDataset, PointSet, SyntheticProblem};

/// Binary `Constant(0.2)` data, uniform on the unit cube.
pub fn cube_dataset(d: usize, n: usize, seed: u64) -> LabeledDataset {
    problem(d).sample_dataset(n, seed)
}

/// Uniform query points in the unit cube.
pub fn cube_queries(d: usize, m: usize, seed: u64) -> PointSet {
    problem(d).sample_points(m, &mut interp_core::rng::seeded(seed))
}

fn problem(d: usize) -> SyntheticProblem {
    SyntheticProblem::binary(Domain::UnitCube(d), EtaKind::Constant { p: 0.2 }).expect("valid problem")
}
