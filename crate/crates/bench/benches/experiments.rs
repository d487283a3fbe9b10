use criterion::{criterion_group, criterion_main, Criterion};
use interp_core::graph_ssl::solve_graph_interpolant;
use interp_core::harness::{self, ExperimentSpec};
use interp_core::{Domain, EstimatorConfig, EtaKind, LabeledGraph, NeighborCount, Scheme, SyntheticProblem, WeightFunction};
use std::hint::black_box;

fn monte_carlo(c: &mut Criterion) {
    let spec = ExperimentSpec {
        problem: SyntheticProblem::binary(Domain::UnitCube(2), EtaKind::Constant { p: 0.2 }).unwrap(),
        estimator: EstimatorConfig::new(Scheme::WiNN {
            k: NeighborCount::Power(0.5),
            weight: WeightFunction::PowerLaw { delta: 0.5 },
        }),
        n_list: vec![1024],
        trials: 8,
        test_points: 200,
        master_seed: 1,
    };
    let mut group = c.benchmark_group("harness");
    group.sample_size(10);
    group.bench_function("mc_mse_winn_n1024", |b| b.iter(|| black_box(harness::mc_mse(&spec).unwrap())));
    group.finish();
}

fn graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph_ssl");
    group.sample_size(10);
    for n in [500usize, 5000] {
        let edges: Vec<_> = (0..n).flat_map(|i| [(i, (i + 1) % n, 1.0), (i, (i + 7) % n, 0.5)]).collect();
        let g = LabeledGraph::new(n, edges, [(0, -1.0), (n / 2, 1.0)], 0.1).unwrap();
        group.bench_function(format!("ring_n{n}"), |b| b.iter(|| black_box(solve_graph_interpolant(&g).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, graph);
criterion_main!(benches);
