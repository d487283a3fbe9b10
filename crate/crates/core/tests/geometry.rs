use interp_core::geometry::{
    hull_contains, interpolate_simplex, locate_delaunay_cell, Location, SimplexCell,
};
use interp_core::rng;
use interp_core::PointSet;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

/// Affine fit through the vertices by a direct solve of `[1 v_j^T] beta = y_j`.
fn affine_oracle(vertices: &[Vec<f64>], labels: &[f64], q: &[f64]) -> Option<f64> {
    let m = vertices.len();
    let a = DMatrix::from_fn(m, m, |i, j| if j == 0 { 1.0 } else { vertices[i][j - 1] });
    let beta = a.lu().solve(&DVector::from_column_slice(labels))?;
    Some(beta[0] + q.iter().enumerate().map(|(j, x)| beta[j + 1] * x).sum::<f64>())
}

fn simplex_case() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
    (1usize..=5).prop_flat_map(|d| {
        (
            prop::collection::vec(prop::collection::vec(-10.0f64..10.0, d), d + 1),
            prop::collection::vec(-5.0f64..5.0, d + 1),
            prop::collection::vec(0.01f64..1.0, d + 1),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplex_interpolation_matches_affine_solve((vertices, labels, raw) in simplex_case()) {
        let d = vertices.len() - 1;
        let coords: Vec<f64> = vertices.iter().flatten().copied().collect();
        let cell = SimplexCell::new((0..=d).collect(), coords);
        prop_assume!(cell.is_ok());
        let cell = cell.unwrap();
        let total: f64 = raw.iter().sum();
        let mut q = vec![0.0; d];
        for (w, v) in raw.iter().zip(&vertices) {
            for (qj, vj) in q.iter_mut().zip(v) {
                *qj += w / total * vj;
            }
        }
        let ours = interpolate_simplex(&cell, &labels, &q).unwrap();
        let oracle = affine_oracle(&vertices, &labels, &q).unwrap();
        prop_assert!((ours - oracle).abs() <= 1e-8 * (1.0 + oracle.abs()), "{} vs {}", ours, oracle);
    }

    #[test]
    fn vertices_reproduce_labels((vertices, labels, _w) in simplex_case()) {
        let d = vertices.len() - 1;
        let coords: Vec<f64> = vertices.iter().flatten().copied().collect();
        let cell = SimplexCell::new((0..=d).collect(), coords);
        prop_assume!(cell.is_ok());
        let cell = cell.unwrap();
        for (v, y) in vertices.iter().zip(&labels) {
            let got = interpolate_simplex(&cell, &labels, v).unwrap();
            prop_assert!((got - y).abs() < 1e-9);
        }
    }
}

fn circumcircle(a: &[f64], b: &[f64], c: &[f64]) -> Option<([f64; 2], f64)> {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d.abs() < 1e-12 {
        return None;
    }
    let sq = |p: &[f64]| p[0] * p[0] + p[1] * p[1];
    let ux = (sq(a) * (b[1] - c[1]) + sq(b) * (c[1] - a[1]) + sq(c) * (a[1] - b[1])) / d;
    let uy = (sq(a) * (c[0] - b[0]) + sq(b) * (a[0] - c[0]) + sq(c) * (b[0] - a[0])) / d;
    let r2 = (a[0] - ux).powi(2) + (a[1] - uy).powi(2);
    Some(([ux, uy], r2))
}

/// Every triangle with an empty circumcircle; the Delaunay triangulation of
/// points in general position.
fn brute_delaunay(points: &PointSet) -> Vec<[usize; 3]> {
    let n = points.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let Some((c, r2)) = circumcircle(points.point(i), points.point(j), points.point(k)) else {
                    continue;
                };
                let empty = (0..n).filter(|&l| l != i && l != j && l != k).all(|l| {
                    let p = points.point(l);
                    (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) > r2 * (1.0 + 1e-12)
                });
                if empty {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

#[test]
fn locator_agrees_with_empty_circumcircle_oracle() {
    let mut r = rng::seeded(11);
    for n in [3usize, 5, 12, 25] {
        let coords: Vec<f64> = (0..2 * n).map(|_| r.random::<f64>()).collect();
        let points = PointSet::new(2, coords).unwrap();
        let labels: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
        let triangles = brute_delaunay(&points);
        for _ in 0..100 {
            let q = [r.random::<f64>(), r.random::<f64>()];
            let oracle = triangles.iter().find_map(|t| {
                let cell = SimplexCell::from_points(&points, t).ok()?;
                let w = interp_core::geometry::barycentric_coordinates(&cell, &q).ok()?;
                w.is_inside().then(|| {
                    let ys: Vec<f64> = t.iter().map(|&i| labels[i]).collect();
                    interpolate_simplex(&cell, &ys, &q).unwrap()
                })
            });
            match (locate_delaunay_cell(&points, &q).unwrap(), oracle) {
                (Location::Cell { cell, .. }, Some(expected)) => {
                    let ys: Vec<f64> = cell.vertex_indices().iter().map(|&i| labels[i]).collect();
                    let got = interpolate_simplex(&cell, &ys, &q).unwrap();
                    assert!((got - expected).abs() < 1e-8, "n={n} q={q:?}: {got} vs {expected}");
                }
                (Location::OutsideHull, None) => {}
                (loc, oracle) => panic!("n={n} q={q:?}: {loc:?} vs {oracle:?}"),
            }
        }
    }
}

#[test]
fn hull_membership_matches_triangle_cover() {
    let mut r = rng::seeded(5);
    let coords: Vec<f64> = (0..2 * 15).map(|_| r.random::<f64>()).collect();
    let points = PointSet::new(2, coords).unwrap();
    let triangles = brute_delaunay(&points);
    for _ in 0..300 {
        let q = [r.random::<f64>() * 1.2 - 0.1, r.random::<f64>() * 1.2 - 0.1];
        let covered = triangles.iter().any(|t| {
            let cell = SimplexCell::from_points(&points, t).unwrap();
            interp_core::geometry::barycentric_coordinates(&cell, &q)
                .unwrap()
                .is_inside()
        });
        assert_eq!(hull_contains(&points, &q).unwrap(), covered, "{q:?}");
    }
}

#[test]
fn locator_handles_higher_dimensions() {
    let mut r = rng::seeded(8);
    for d in 1..=5 {
        let n = 4 * (d + 1);
        let coords: Vec<f64> = (0..n * d).map(|_| r.random::<f64>()).collect();
        let points = PointSet::new(d, coords).unwrap();
        let centroid: Vec<f64> = (0..d)
            .map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n as f64)
            .collect();
        match locate_delaunay_cell(&points, &centroid).unwrap() {
            Location::Cell { cell, weights } => {
                assert_eq!(cell.vertex_indices().len(), d + 1);
                assert!(weights.is_inside());
            }
            Location::OutsideHull => panic!("centroid is inside the hull"),
        }
        let far = vec![5.0; d];
        assert!(matches!(locate_delaunay_cell(&points, &far).unwrap(), Location::OutsideHull));
    }
}
