//! One-dimensional limits: the Laplace-kernel interpolant and the expected
//! random-threshold stump, both of which approach linear interpolation.

use super::HarnessError;
use crate::linalg::Lu;

fn check_pairs(xs: &[f64], ys: &[f64]) -> Result<(), HarnessError> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(HarnessError::InvalidSpec(format!(
            "need matching non-empty x and y, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(HarnessError::InvalidSpec("data must be finite".into()));
    }
    Ok(())
}

fn sorted_pairs(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let mut pairs: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Minimum-norm interpolant for the kernel `exp(-kappa |x - z|)`, evaluated
/// at each query.
pub fn laplace1d_interpolant(
    xs: &[f64],
    ys: &[f64],
    kappa: f64,
    queries: &[f64],
) -> Result<Vec<f64>, HarnessError> {
    check_pairs(xs, ys)?;
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(HarnessError::InvalidSpec(format!("kappa must be positive, got {kappa}")));
    }
    let pairs = sorted_pairs(xs, ys);
    if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(HarnessError::SingularKernelMatrix(w[0].0));
    }
    let n = pairs.len();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            k[i * n + j] = (-kappa * (pairs[i].0 - pairs[j].0).abs()).exp();
        }
    }
    let lu = Lu::factor(&k, n).map_err(|_| HarnessError::SingularKernelMatrix(pairs[0].0))?;
    let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let alpha = lu.solve(&y);
    Ok(queries
        .iter()
        .map(|&q| {
            pairs
                .iter()
                .zip(&alpha)
                .map(|(p, a)| a * (-kappa * (p.0 - q).abs()).exp())
                .sum()
        })
        .collect())
}

/// Linear between adjacent data points, constant beyond the extremes.
pub fn piecewise_linear_interpolant(xs: &[f64], ys: &[f64], query: f64) -> Result<f64, HarnessError> {
    check_pairs(xs, ys)?;
    let pairs = sorted_pairs(xs, ys);
    Ok(linear_on(&pairs, query))
}

fn linear_on(pairs: &[(f64, f64)], q: f64) -> f64 {
    let (first, last) = (pairs[0], pairs[pairs.len() - 1]);
    if q <= first.0 {
        return first.1;
    }
    if q >= last.0 {
        return last.1;
    }
    let b = pairs.partition_point(|p| p.0 <= q);
    let (lo, hi) = (pairs[b - 1], pairs[b]);
    lo.1 + (hi.1 - lo.1) * ((q - lo.0) / (hi.0 - lo.0))
}

/// Expected prediction of a stump `1{x > t}` (or `1{x < t}` for decreasing
/// labels) with threshold uniform between the two data points where the
/// label switches. Labels must be 0/1 and change at most once in x order.
pub fn pert1d_expectation(xs: &[f64], ys: &[f64], query: f64) -> Result<f64, HarnessError> {
    check_pairs(xs, ys)?;
    if ys.iter().any(|&y| y != 0.0 && y != 1.0) {
        return Err(HarnessError::InvalidSpec("labels must be 0 or 1".into()));
    }
    let pairs = sorted_pairs(xs, ys);
    let switches: Vec<usize> = (1..pairs.len()).filter(|&i| pairs[i].1 != pairs[i - 1].1).collect();
    match switches.as_slice() {
        [] => Ok(pairs[0].1),
        &[b] => {
            let (lo, hi) = (pairs[b - 1], pairs[b]);
            if lo.0 == hi.0 {
                return Err(HarnessError::NonMonotoneLabels);
            }
            Ok(if query <= lo.0 {
                lo.1
            } else if query >= hi.0 {
                hi.1
            } else {
                lo.1 + (hi.1 - lo.1) * ((query - lo.0) / (hi.0 - lo.0))
            })
        }
        _ => Err(HarnessError::NonMonotoneLabels),
    }
}
