//! Seeded Monte Carlo experiments on synthetic problems.
//!
//! Every trial draws from its own random streams, keyed by the master seed,
//! the sample size and the trial index. Trials run on the current rayon pool
//! and are reduced in trial order, so results do not depend on the number of
//! worker threads.

mod adversarial;
mod demos;
mod oned;
mod rates;

pub use adversarial::{adversarial_density, AdversarialReport};
pub use demos::{
    hull_miss_mass, hull_miss_mass_with, regular_simplex, simplex_noise_demo, SimplexDemo,
    HULL_PROBES_PER_TRIAL,
};
pub use oned::{laplace1d_interpolant, pert1d_expectation, piecewise_linear_interpolant};
pub use rates::{fit_rate, RateFit};

use crate::dataset::LabeledDataset;
use crate::estimators::{EstimatorConfig, EstimatorError, Predictor};
use crate::geometry::PointSet;
use crate::rng::{self, Purpose, Rng};
use crate::synthetic::SyntheticProblem;
use rayon::prelude::*;
use std::io::Write;
use std::time::{Duration, Instant};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error("n = {n}, trial {trial}: {source}")]
    Trial {
        n: usize,
        trial: usize,
        #[source]
        source: EstimatorError,
    },
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error("rate fit needs positive values, got ({0}, {1})")]
    NonPositiveValue(f64, f64),
    #[error("kernel matrix is singular (repeated x = {0})")]
    SingularKernelMatrix(f64),
    #[error("labels are not a single threshold in x")]
    NonMonotoneLabels,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One Monte Carlo experiment.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub problem: SyntheticProblem,
    pub estimator: EstimatorConfig,
    /// Strictly increasing sample sizes.
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub test_points: usize,
    pub master_seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(HarnessError::InvalidSpec("n_list must be non-empty and positive".into()));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::InvalidSpec("n_list must be strictly increasing".into()));
        }
        if self.trials == 0 || self.test_points == 0 {
            return Err(HarnessError::InvalidSpec(
                "trials and test_points must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn seed_for(&self, n: usize) -> u64 {
        rng::derive_seed(self.master_seed, n as u64, Purpose::Misc)
    }
}

/// Mean and trial-level standard error at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct RowResult {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<RowResult>,
}

impl ExperimentResult {
    /// CSV `n,mean,stderr,trials`. Timing is left out so output is reproducible.
    pub fn to_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,mean,stderr,trials")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.n, r.mean, r.stderr, r.trials)?;
        }
        Ok(())
    }

    pub fn fit_rate(&self) -> Result<RateFit, HarnessError> {
        let pts: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.n as f64, r.mean)).collect();
        fit_rate(&pts)
    }
}

/// Disagreement with the Bayes classifier and risk against fresh labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub disagreement: ExperimentResult,
    pub risk: ExperimentResult,
}

/// Sample mean and standard error of the mean, summed in slice order.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Training set, test points and test labels for one trial.
pub struct Trial {
    pub data: LabeledDataset,
    pub test: PointSet,
    pub test_labels: Vec<f64>,
}

pub fn draw_trial(spec: &ExperimentSpec, n: usize, trial: usize) -> Trial {
    let seed = spec.seed_for(n);
    let p = &spec.problem;
    let mut r: Rng = rng::stream(seed, trial as u64, Purpose::Training);
    let points = p.sample_points(n, &mut r);
    let labels = p.sample_labels(&points, &mut r);
    let data = LabeledDataset::new(points, labels, p.is_binary()).expect("sampled dataset is valid");
    let test = p.sample_points(spec.test_points, &mut rng::stream(seed, trial as u64, Purpose::Test));
    let test_labels = p.sample_labels(
        &test,
        &mut rng::stream(seed, trial as u64, Purpose::TestLabels),
    );
    Trial {
        data,
        test,
        test_labels,
    }
}

/// Runs `stat` on every trial at every `n` and aggregates each output
/// component separately.
fn run<const K: usize, F>(spec: &ExperimentSpec, stat: F) -> Result<[ExperimentResult; K], HarnessError>
where
    F: Fn(&Trial) -> Result<[f64; K], EstimatorError> + Sync,
{
    spec.validate()?;
    let mut out: [ExperimentResult; K] = std::array::from_fn(|_| ExperimentResult { rows: vec![] });
    for &n in &spec.n_list {
        let start = Instant::now();
        let per_trial: Vec<[f64; K]> = (0..spec.trials)
            .into_par_iter()
            .map(|t| stat(&draw_trial(spec, n, t)).map_err(|source| HarnessError::Trial { n, trial: t, source }))
            .collect::<Result<_, _>>()?;
        let elapsed = start.elapsed();
        for (c, result) in out.iter_mut().enumerate() {
            let column: Vec<f64> = per_trial.iter().map(|v| v[c]).collect();
            let (mean, stderr) = mean_stderr(&column);
            result.rows.push(RowResult {
                n,
                mean,
                stderr,
                trials: spec.trials,
                elapsed,
            });
        }
        log::info!("n = {n}: {} trials in {:.2?}", spec.trials, elapsed);
    }
    Ok(out)
}

/// Mean squared error `E (eta_hat(X) - eta(X))^2` of the configured estimator.
pub fn mc_mse(spec: &ExperimentSpec) -> Result<ExperimentResult, HarnessError> {
    let cfg = spec.estimator;
    mc_mse_with(spec, |data| cfg.fit(data))
}

/// As [`mc_mse`], with `fit` in place of `spec.estimator`.
pub fn mc_mse_with<P, F>(spec: &ExperimentSpec, fit: F) -> Result<ExperimentResult, HarnessError>
where
    P: Predictor,
    F: Fn(&LabeledDataset) -> Result<P, EstimatorError> + Sync,
{
    let problem = &spec.problem;
    let [mse] = run(spec, |trial| {
        let model = fit(&trial.data)?;
        let mut sum = 0.0;
        for x in trial.test.iter() {
            sum += (model.predict(x)? - problem.eta_unchecked(x)).powi(2);
        }
        Ok([sum / trial.test.len() as f64])
    })?;
    Ok(mse)
}

/// `P(f_hat(X) != f*(X))` and the empirical risk of the plug-in classifier.
pub fn mc_disagreement(spec: &ExperimentSpec) -> Result<ClassificationResult, HarnessError> {
    let cfg = spec.estimator;
    mc_disagreement_with(spec, |data| cfg.fit(data))
}

pub fn mc_disagreement_with<P, F>(
    spec: &ExperimentSpec,
    fit: F,
) -> Result<ClassificationResult, HarnessError>
where
    P: Predictor,
    F: Fn(&LabeledDataset) -> Result<P, EstimatorError> + Sync,
{
    let problem = &spec.problem;
    if !problem.is_binary() {
        return Err(HarnessError::InvalidSpec("classification needs a binary problem".into()));
    }
    let [disagreement, risk] = run(spec, |trial| {
        let model = fit(&trial.data)?;
        let (mut disagree, mut wrong) = (0usize, 0usize);
        for (x, &y) in trial.test.iter().zip(&trial.test_labels) {
            let c = model.classify(x)?;
            disagree += usize::from(c != problem.bayes_classify(x));
            wrong += usize::from(f64::from(c) != y);
        }
        let m = trial.test.len() as f64;
        Ok([disagree as f64 / m, wrong as f64 / m])
    })?;
    Ok(ClassificationResult { disagreement, risk })
}

/// Which statistic a rate experiment tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Mse,
    Risk,
    Disagreement,
}

/// Runs `statistic` over `spec.n_list` and fits a log-log slope.
pub fn run_rates(
    spec: &ExperimentSpec,
    statistic: Statistic,
) -> Result<(ExperimentResult, Option<RateFit>), HarnessError> {
    let result = match statistic {
        Statistic::Mse => mc_mse(spec)?,
        Statistic::Risk => mc_disagreement(spec)?.risk,
        Statistic::Disagreement => mc_disagreement(spec)?.disagreement,
    };
    let fit = if result.rows.len() >= 2 {
        match result.fit_rate() {
            Ok(f) => Some(f),
            Err(HarnessError::NonPositiveValue(..)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok((result, fit))
}

/// Predictor returning the true `eta`.
pub struct Oracle<'a>(pub &'a SyntheticProblem);

impl Predictor for Oracle<'_> {
    fn predict(&self, x: &[f64]) -> Result<f64, EstimatorError> {
        Ok(self.0.eta_unchecked(x))
    }
}

/// Predictor returning a fixed value.
pub struct ConstantPredictor(pub f64);

impl Predictor for ConstantPredictor {
    fn predict(&self, _x: &[f64]) -> Result<f64, EstimatorError> {
        Ok(self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{NeighborCount, Scheme, WeightFunction};
    use crate::synthetic::{Domain, EtaKind};

    fn spec(eta: EtaKind, scheme: Scheme, n_list: Vec<usize>) -> ExperimentSpec {
        ExperimentSpec {
            problem: SyntheticProblem::binary(Domain::UnitCube(2), eta).unwrap(),
            estimator: EstimatorConfig::new(scheme),
            n_list,
            trials: 20,
            test_points: 200,
            master_seed: 9,
        }
    }

    fn winn() -> Scheme {
        Scheme::WiNN {
            k: NeighborCount::Power(0.5),
            weight: WeightFunction::PowerLaw { delta: 0.5 },
        }
    }

    #[test]
    fn validation() {
        let mut s = spec(EtaKind::Constant { p: 0.2 }, winn(), vec![10, 10]);
        assert!(s.validate().is_err());
        s.n_list = vec![10, 20];
        s.validate().unwrap();
        s.trials = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn oracle_and_constant_predictors() {
        let s = spec(EtaKind::Constant { p: 0.2 }, winn(), vec![50]);
        let exact = mc_mse_with(&s, |_| Ok(Oracle(&s.problem))).unwrap();
        assert_eq!(exact.rows[0].mean, 0.0);
        let half = mc_mse_with(&s, |_| Ok(ConstantPredictor(0.5))).unwrap();
        assert!((half.rows[0].mean - 0.09).abs() < 1e-12);

        let zero = mc_disagreement_with(&s, |_| Ok(ConstantPredictor(0.0))).unwrap();
        assert_eq!(zero.disagreement.rows[0].mean, 0.0);
        let r = &zero.risk.rows[0];
        assert!((r.mean - 0.2).abs() < 3.0 * r.stderr + 1e-3);
    }

    #[test]
    fn bayes_classifier_never_disagrees() {
        let s = spec(EtaKind::LinearBoundary { h: 0.3 }, winn(), vec![30]);
        let res = mc_disagreement_with(&s, |_| Ok(Oracle(&s.problem))).unwrap();
        assert_eq!(res.disagreement.rows[0].mean, 0.0);
    }

    #[test]
    fn independent_of_thread_count() {
        let s = spec(EtaKind::Constant { p: 0.2 }, winn(), vec![64, 128]);
        let in_pool = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_mse(&s).unwrap())
        };
        let mut a = Vec::new();
        in_pool(1).to_csv(&mut a).unwrap();
        let mut b = Vec::new();
        in_pool(4).to_csv(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_layout() {
        let res = ExperimentResult {
            rows: vec![RowResult {
                n: 10,
                mean: 0.25,
                stderr: 0.5,
                trials: 3,
                elapsed: Duration::from_secs(1),
            }],
        };
        let mut buf = Vec::new();
        res.to_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,mean,stderr,trials\n10,0.25,0.5,3\n");
    }

    #[test]
    fn trial_errors_are_reported() {
        let s = spec(
            EtaKind::Constant { p: 0.2 },
            Scheme::WiNN {
                k: NeighborCount::Fixed(10),
                weight: WeightFunction::NegLog,
            },
            vec![5],
        );
        assert!(matches!(mc_mse(&s), Err(HarnessError::Trial { n: 5, trial: 0, .. })));
    }

    #[test]
    fn mean_stderr_small_cases() {
        assert_eq!(mean_stderr(&[2.0]), (2.0, 0.0));
        let (m, se) = mean_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - 1.0).abs() < 1e-15);
    }
}
