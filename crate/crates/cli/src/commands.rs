use crate::svg::{line_plot, Axes, Series};
use crate::{
    params, AdversarialArgs, CliError, EstimatorArgs, ExperimentArgs, GenArgs, HullMissArgs,
    OneDimArgs, PredictArgs, ProblemArgs, RatesArgs, SimplexDemoArgs, SslArgs,
};
use interp_core::dataset::{read_numeric_csv, read_points_csv};
use interp_core::graph_ssl::{parse_edge_list, parse_labels, solve_graph_interpolant, write_interpolant_csv};
use interp_core::harness::{self, ExperimentResult, Statistic};
use interp_core::rng::{derive_seed, Purpose};
use interp_core::{EstimatorConfig, ExperimentSpec, LabeledDataset, LabeledGraph, Predictor, SyntheticProblem};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

pub struct Context {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Context {
    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| io_err(path, e)),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }

    /// Human-readable summary; kept off stdout when stdout carries the CSV.
    fn note(&self, text: &str) {
        if self.out.is_some() {
            println!("{text}");
        } else {
            eprintln!("{text}");
        }
    }

    fn plot(&self, make: impl FnOnce() -> String) -> Result<(), CliError> {
        if let Some(path) = &self.svg {
            std::fs::write(path, make()).map_err(|e| io_err(path, e))?;
        }
        Ok(())
    }

    fn no_plot(&self, command: &str) {
        if self.svg.is_some() {
            log::warn!("--svg is not supported by `{command}`; ignored");
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

fn open(path: &Option<PathBuf>, flag: &str) -> Result<BufReader<File>, CliError> {
    let path = path
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("--{flag} is required")))?;
    Ok(BufReader::new(File::open(path).map_err(|e| io_err(path, e))?))
}

fn problem(a: &ProblemArgs) -> Result<SyntheticProblem, CliError> {
    let domain = params::domain(a.domain.as_deref().unwrap_or("cube:2"))?;
    let eta = params::eta(a.eta.as_deref().unwrap_or("constant:0.2"))?;
    Ok(match a.noise {
        Some(sd) => SyntheticProblem::regression(domain, eta, sd)?,
        None => SyntheticProblem::binary(domain, eta)?,
    })
}

fn estimator(a: &EstimatorArgs, dim: usize) -> Result<EstimatorConfig, CliError> {
    let scheme = params::scheme(
        a.estimator.as_deref().unwrap_or("winn"),
        a.k.as_deref().unwrap_or("sqrt"),
        a.weight.as_deref().unwrap_or("power"),
        dim,
    )?;
    let mut cfg = EstimatorConfig::new(scheme);
    if let Some(v) = a.outside {
        cfg.outside_hull_value = v;
    }
    Ok(cfg)
}

fn experiment(ctx: &Context, a: &ExperimentArgs) -> Result<ExperimentSpec, CliError> {
    let problem = problem(&a.problem)?;
    let spec = ExperimentSpec {
        estimator: estimator(&a.estimator, problem.dim())?,
        problem,
        n_list: params::list("n_list", a.n_list.as_deref().unwrap_or("256,1024,4096"))?,
        trials: a.trials.unwrap_or(20),
        test_points: a.test_points.unwrap_or(500),
        master_seed: ctx.seed,
    };
    spec.validate()?;
    Ok(spec)
}

fn result_csv(result: &ExperimentResult) -> String {
    let mut buf = Vec::new();
    result.to_csv(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii csv")
}

fn rate_plot(title: &str, y_label: &str, results: &[(&str, &ExperimentResult)]) -> String {
    let series: Vec<Series> = results
        .iter()
        .map(|(name, r)| Series {
            name: (*name).to_owned(),
            points: r.rows.iter().map(|row| (row.n as f64, row.mean)).collect(),
        })
        .collect();
    line_plot(title, "n", y_label, Axes::LogLog, &series)
}

pub fn gen(ctx: &Context, a: GenArgs) -> Result<(), CliError> {
    ctx.no_plot("gen");
    let p = problem(&a.problem)?;
    let data = p.sample_dataset(a.n.unwrap_or(100), ctx.seed);
    let mut buf = Vec::new();
    data.write_csv(&mut buf)?;
    ctx.emit(&String::from_utf8(buf).expect("ascii csv"))
}

pub fn predict(ctx: &Context, a: PredictArgs) -> Result<(), CliError> {
    ctx.no_plot("predict");
    let data = LabeledDataset::read_csv(open(&a.data, "data")?)?;
    let queries = read_points_csv(open(&a.queries, "queries")?)?;
    if queries.dim() != data.dim() {
        return Err(CliError::Config(format!(
            "queries have {} coordinates, data has {}",
            queries.dim(),
            data.dim()
        )));
    }
    let model = estimator(&a.estimator, data.dim())?.fit(&data)?;
    let preds: Vec<f64> = (0..queries.len())
        .into_par_iter()
        .map(|i| model.predict(queries.point(i)))
        .collect::<Result<_, _>>()?;
    let mut out = String::new();
    for j in 0..queries.dim() {
        let _ = write!(out, "x{j},");
    }
    out.push_str("eta_hat\n");
    for (q, p) in queries.iter().zip(&preds) {
        for v in q {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{p}");
    }
    ctx.emit(&out)
}

pub fn mse(ctx: &Context, a: ExperimentArgs) -> Result<(), CliError> {
    let spec = experiment(ctx, &a)?;
    let result = harness::mc_mse(&spec)?;
    ctx.emit(&result_csv(&result))?;
    ctx.plot(|| rate_plot("Mean squared error", "mse", &[("mse", &result)]))
}

pub fn risk(ctx: &Context, a: ExperimentArgs) -> Result<(), CliError> {
    let spec = experiment(ctx, &a)?;
    let res = harness::mc_disagreement(&spec)?;
    let mut out = String::from("n,risk,risk_stderr,disagreement,disagreement_stderr,trials\n");
    for (r, d) in res.risk.rows.iter().zip(&res.disagreement.rows) {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.n, r.mean, r.stderr, d.mean, d.stderr, r.trials);
    }
    let bq = spec.problem.bayes_quantities();
    ctx.note(&format!(
        "bayes risk {}, nearest-neighbor limit {}",
        bq.bayes_risk, bq.nn_limit_risk
    ));
    ctx.emit(&out)?;
    ctx.plot(|| {
        rate_plot(
            "Classification",
            "rate",
            &[("risk", &res.risk), ("disagreement", &res.disagreement)],
        )
    })
}

pub fn rates(ctx: &Context, a: RatesArgs) -> Result<(), CliError> {
    let spec = experiment(ctx, &a.experiment)?;
    let statistic = match a.statistic.as_deref().unwrap_or("mse") {
        "mse" => Statistic::Mse,
        "risk" => Statistic::Risk,
        "disagreement" => Statistic::Disagreement,
        other => return Err(CliError::Config(format!("unknown statistic `{other}`"))),
    };
    let (result, fit) = harness::run_rates(&spec, statistic)?;
    ctx.emit(&result_csv(&result))?;
    match fit {
        Some(f) => ctx.note(&format!(
            "slope {:.4} intercept {:.4} r2 {:.4}",
            f.slope, f.intercept, f.r_squared
        )),
        None => ctx.note("slope unavailable (need two sample sizes with positive means)"),
    }
    ctx.plot(|| rate_plot("Convergence", "mean", &[("mean", &result)]))
}

pub fn adversarial(ctx: &Context, a: AdversarialArgs) -> Result<(), CliError> {
    ctx.no_plot("adversarial");
    let p = problem(&a.problem)?;
    let cfg = estimator(&a.estimator, p.dim())?;
    let repeats = a.repeats.unwrap_or(20);
    let (n, eps, res) = (a.n.unwrap_or(5000), a.epsilon.unwrap_or(0.05), a.resolution.unwrap_or(50));
    let reports: Vec<_> = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let seed = derive_seed(ctx.seed, r as u64, Purpose::Misc);
            harness::adversarial_density(&p, &cfg, n, eps, res, seed)
        })
        .collect::<Result<_, _>>()?;
    let mut out = String::from("repeat,covered_fraction,adversarial_mass,detected\n");
    for (r, rep) in reports.iter().enumerate() {
        let _ = writeln!(
            out,
            "{r},{},{},{}",
            rep.covered_fraction, rep.adversarial_mass, rep.detected
        );
    }
    let m = reports.len().max(1) as f64;
    ctx.note(&format!(
        "mean covered_fraction {:.4}, mean adversarial_mass {:.4}",
        reports.iter().map(|r| r.covered_fraction).sum::<f64>() / m,
        reports.iter().map(|r| r.adversarial_mass).sum::<f64>() / m
    ));
    ctx.emit(&out)
}

pub fn simplex_demo(ctx: &Context, a: SimplexDemoArgs) -> Result<(), CliError> {
    ctx.no_plot("simplex-demo");
    let dims: Vec<usize> = params::list("dims", a.dims.as_deref().unwrap_or("2,3,4"))?;
    let samples = a.samples.unwrap_or(1_000_000);
    let mut out = String::from("d,simplicial_fraction,nn_fraction,half_power_d,samples\n");
    for d in dims {
        let r = harness::simplex_noise_demo(d, samples, derive_seed(ctx.seed, d as u64, Purpose::Misc))?;
        let _ = writeln!(
            out,
            "{d},{},{},{},{}",
            r.simplicial_fraction,
            r.nn_fraction,
            0.5f64.powi(d as i32),
            r.samples
        );
    }
    ctx.emit(&out)
}

pub fn hull_miss(ctx: &Context, a: HullMissArgs) -> Result<(), CliError> {
    let p = problem(&a.problem)?;
    let n_list: Vec<usize> = params::list("n_list", a.n_list.as_deref().unwrap_or("100,1000"))?;
    let trials = a.trials.unwrap_or(50);
    let probes = a.probes.unwrap_or(harness::HULL_PROBES_PER_TRIAL);
    let mut rows = Vec::new();
    for n in n_list {
        let seed = derive_seed(ctx.seed, n as u64, Purpose::Misc);
        let (mean, stderr) = harness::hull_miss_mass_with(&p, n, trials, probes, seed)?;
        rows.push(harness::RowResult {
            n,
            mean,
            stderr,
            trials,
            elapsed: Default::default(),
        });
    }
    let result = ExperimentResult { rows };
    ctx.emit(&result_csv(&result))?;
    ctx.plot(|| rate_plot("Mass outside the convex hull", "miss", &[("miss", &result)]))
}

pub fn ssl(ctx: &Context, a: SslArgs) -> Result<(), CliError> {
    let edges = parse_edge_list(open(&a.edges, "edges")?)?;
    let labels = parse_labels(open(&a.labels, "labels")?)?;
    let seen = edges
        .iter()
        .flat_map(|&(i, j, _)| [i, j])
        .chain(labels.iter().map(|l| l.0))
        .max()
        .map_or(0, |m| m + 1);
    let n = a.vertices.unwrap_or(seen);
    let graph = LabeledGraph::new(n, edges, labels, a.kappa.unwrap_or(0.0))?;
    let sol = solve_graph_interpolant(&graph)?;
    let mut buf = Vec::new();
    write_interpolant_csv(&sol.values, &mut buf)?;
    ctx.emit(&String::from_utf8(buf).expect("ascii csv"))?;
    ctx.plot(|| {
        let points = sol.values.iter().enumerate().map(|(i, v)| (i as f64, *v)).collect();
        line_plot(
            "Graph interpolant",
            "vertex",
            "eta_hat",
            Axes::Linear,
            &[Series {
                name: "eta_hat".into(),
                points,
            }],
        )
    })
}

type OneDimInputs = (Vec<f64>, Vec<f64>, Vec<f64>);

/// Data columns `x0,y` and the query points.
fn one_dim_inputs(a: &OneDimArgs) -> Result<OneDimInputs, CliError> {
    let (header, rows) = read_numeric_csv(open(&a.data, "data")?)?;
    if header != ["x0", "y"] {
        return Err(CliError::Config(format!("expected columns x0,y, found {}", header.join(","))));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    if xs.is_empty() {
        return Err(CliError::Config("no data rows".into()));
    }
    let queries = match &a.queries {
        Some(_) => {
            let pts = read_points_csv(open(&a.queries, "queries")?)?;
            if pts.dim() != 1 {
                return Err(CliError::Config("queries must have the single column x0".into()));
            }
            pts.as_slice().to_vec()
        }
        None => {
            let m = a.grid.unwrap_or(201);
            let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if m < 2 || lo == hi {
                vec![lo]
            } else {
                (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
            }
        }
    };
    Ok((xs, ys, queries))
}

fn emit_curve(ctx: &Context, title: &str, queries: &[f64], values: &[f64]) -> Result<(), CliError> {
    let mut out = String::from("x,value\n");
    for (q, v) in queries.iter().zip(values) {
        let _ = writeln!(out, "{q},{v}");
    }
    ctx.emit(&out)?;
    ctx.plot(|| {
        let points = queries.iter().copied().zip(values.iter().copied()).collect();
        line_plot(title, "x", "value", Axes::Linear, &[Series { name: "value".into(), points }])
    })
}

pub fn laplace1d(ctx: &Context, a: OneDimArgs) -> Result<(), CliError> {
    let (xs, ys, queries) = one_dim_inputs(&a)?;
    let values = harness::laplace1d_interpolant(&xs, &ys, a.kappa.unwrap_or(1e-3), &queries)?;
    emit_curve(ctx, "Laplace kernel interpolant", &queries, &values)
}

pub fn pert1d(ctx: &Context, a: OneDimArgs) -> Result<(), CliError> {
    let (xs, ys, queries) = one_dim_inputs(&a)?;
    let values = queries
        .iter()
        .map(|&q| harness::pert1d_expectation(&xs, &ys, q))
        .collect::<Result<Vec<_>, _>>()?;
    emit_curve(ctx, "Expected random stump", &queries, &values)
}
