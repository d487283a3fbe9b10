//! Synthetic problems with analytically known regression function and Bayes
//! quantities.
//!
//! The marginal is uniform on the domain. `eta` depends on the first
//! coordinate only, which makes every Bayes quantity a one-dimensional
//! integral against the marginal density of `x0`.
//!
//! The `(c0, r0)`-regularity constants of the domains are not tracked; for the
//! unit ball `c0` is about one half with `r0 >= 1`.

use crate::dataset::LabeledDataset;
use crate::geometry::PointSet;
use crate::rng::{self, Rng};
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SyntheticError {
    #[error("point is outside the problem domain")]
    OutsideDomain,
    #[error("point has dimension {got}, domain has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid problem: {0}")]
    Invalid(String),
}

/// Support of the uniform marginal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[0, 1]^d`.
    UnitCube(usize),
    /// Closed unit ball centered at the origin.
    UnitBall(usize),
    /// Standard simplex `{x >= 0, sum x <= 1}`.
    Simplex(usize),
}

const DOMAIN_TOL: f64 = 1e-12;

impl Domain {
    pub fn dim(&self) -> usize {
        match *self {
            Domain::UnitCube(d) | Domain::UnitBall(d) | Domain::Simplex(d) => d,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::UnitCube(_) => x.iter().all(|&v| (-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&v)),
            Domain::UnitBall(_) => x.iter().map(|v| v * v).sum::<f64>() <= 1.0 + DOMAIN_TOL,
            Domain::Simplex(_) => {
                x.iter().all(|&v| v >= -DOMAIN_TOL) && x.iter().sum::<f64>() <= 1.0 + DOMAIN_TOL
            }
        }
    }

    /// Axis-aligned bounding box `(lo, hi)`, identical on every axis.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Domain::UnitBall(_) => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn diameter(&self) -> f64 {
        let d = self.dim() as f64;
        match self {
            Domain::UnitCube(_) => d.sqrt(),
            Domain::UnitBall(_) => 2.0,
            Domain::Simplex(_) => {
                if self.dim() == 1 {
                    1.0
                } else {
                    2f64.sqrt()
                }
            }
        }
    }

    /// Uniform draw by rejection from the bounding cube.
    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        let (lo, hi) = self.bounds();
        let mut x = vec![0.0; self.dim()];
        loop {
            for v in x.iter_mut() {
                *v = lo + (hi - lo) * rng.random::<f64>();
            }
            if self.contains(&x) {
                return x;
            }
        }
    }

    /// Density of the first coordinate and its support.
    fn first_coordinate_marginal(&self) -> (f64, f64, Box<dyn Fn(f64) -> f64>) {
        let d = self.dim() as f64;
        match self {
            Domain::UnitCube(_) => (0.0, 1.0, Box::new(|_| 1.0)),
            Domain::UnitBall(_) => (
                -1.0,
                1.0,
                Box::new(move |t: f64| (1.0 - t * t).max(0.0).powf((d - 1.0) / 2.0)),
            ),
            Domain::Simplex(_) => (0.0, 1.0, Box::new(move |t: f64| (1.0 - t).max(0.0).powf(d - 1.0))),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::UnitCube(d) => write!(f, "cube({d})"),
            Domain::UnitBall(d) => write!(f, "ball({d})"),
            Domain::Simplex(d) => write!(f, "simplex({d})"),
        }
    }
}

/// Conditional mean `eta(x) = E[Y | X = x]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaKind {
    /// `eta = p` everywhere.
    Constant { p: f64 },
    /// `eta = 1/2 + h sign(x0 - 1/2)`: satisfies the h-hard margin condition
    /// off the measure-zero boundary, where `eta = 1/2`.
    LinearBoundary { h: f64 },
    /// `eta = 1/2 + a sin(2 pi w x0)`: Lipschitz with constant `2 pi a w`.
    LipschitzSine { amplitude: f64, frequency: f64 },
}

/// Margin metadata for documentation and reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Margin {
    /// `|eta - 1/2| >= h` on the support.
    Hard { h: f64 },
    /// `mu(|eta - 1/2| <= t) <= B t^beta`.
    Tsybakov { b: f64, beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticProblem {
    domain: Domain,
    eta: EtaKind,
    binary: bool,
    noise_sd: f64,
}

/// Closed-form or quadrature values of the Bayes-side quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesQuantities {
    /// `E[min(eta, 1 - eta)]`.
    pub bayes_risk: f64,
    /// Asymptotic 1-NN risk `E[2 eta (1 - eta)]`.
    pub nn_limit_risk: f64,
    /// `E[(Y - eta(X))^2]`.
    pub noise_mse: f64,
}

impl SyntheticProblem {
    /// Binary problem, `Y ~ Bernoulli(eta(X))`.
    pub fn binary(domain: Domain, eta: EtaKind) -> Result<Self, SyntheticError> {
        Self::validate(domain, eta)?;
        Ok(Self {
            domain,
            eta,
            binary: true,
            noise_sd: 0.0,
        })
    }

    /// Regression problem, `Y = eta(X) + N(0, noise_sd^2)`.
    pub fn regression(domain: Domain, eta: EtaKind, noise_sd: f64) -> Result<Self, SyntheticError> {
        Self::validate(domain, eta)?;
        if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
            return Err(SyntheticError::Invalid(format!("noise sd {noise_sd}")));
        }
        Ok(Self {
            domain,
            eta,
            binary: false,
            noise_sd,
        })
    }

    fn validate(domain: Domain, eta: EtaKind) -> Result<(), SyntheticError> {
        if domain.dim() == 0 {
            return Err(SyntheticError::Invalid("dimension must be at least 1".into()));
        }
        match eta {
            EtaKind::Constant { p } if !(p > 0.0 && p < 1.0) => Err(SyntheticError::Invalid(
                format!("constant eta needs 0 < p < 1, got {p}"),
            )),
            EtaKind::LinearBoundary { h } if !(h > 0.0 && h <= 0.5) => Err(SyntheticError::Invalid(
                format!("margin h must be in (0, 1/2], got {h}"),
            )),
            EtaKind::LipschitzSine {
                amplitude,
                frequency,
            } if !((0.0..=0.5).contains(&amplitude) && frequency > 0.0 && frequency.is_finite()) => {
                Err(SyntheticError::Invalid(format!(
                    "sine needs 0 <= a <= 1/2 and w > 0, got a={amplitude}, w={frequency}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn eta_kind(&self) -> EtaKind {
        self.eta
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn is_binary(&self) -> bool {
        self.binary
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    /// `(A, alpha)` Holder constants, when `eta` is continuous.
    pub fn smoothness(&self) -> Option<(f64, f64)> {
        match self.eta {
            EtaKind::Constant { .. } => Some((0.0, 1.0)),
            EtaKind::LinearBoundary { .. } => None,
            EtaKind::LipschitzSine {
                amplitude,
                frequency,
            } => Some((2.0 * PI * amplitude * frequency, 1.0)),
        }
    }

    /// Margin condition satisfied by `eta`. The sine bound `B = 1/a` holds on
    /// the cube when `2w` is an integer.
    pub fn margin(&self) -> Option<Margin> {
        match self.eta {
            EtaKind::Constant { p } if p != 0.5 => Some(Margin::Hard { h: (p - 0.5).abs() }),
            EtaKind::Constant { .. } => None,
            EtaKind::LinearBoundary { h } => Some(Margin::Hard { h }),
            EtaKind::LipschitzSine { amplitude, .. } if amplitude > 0.0 => Some(Margin::Tsybakov {
                b: 1.0 / amplitude,
                beta: 1.0,
            }),
            EtaKind::LipschitzSine { .. } => None,
        }
    }

    /// `eta` without the domain check.
    pub(crate) fn eta_unchecked(&self, x: &[f64]) -> f64 {
        let x0 = x[0];
        match self.eta {
            EtaKind::Constant { p } => p,
            EtaKind::LinearBoundary { h } => {
                if x0 > 0.5 {
                    0.5 + h
                } else if x0 < 0.5 {
                    0.5 - h
                } else {
                    0.5
                }
            }
            EtaKind::LipschitzSine {
                amplitude,
                frequency,
            } => 0.5 + amplitude * (2.0 * PI * frequency * x0).sin(),
        }
    }

    pub fn eta_eval(&self, x: &[f64]) -> Result<f64, SyntheticError> {
        if x.len() != self.dim() {
            return Err(SyntheticError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if !self.domain.contains(x) {
            return Err(SyntheticError::OutsideDomain);
        }
        Ok(self.eta_unchecked(x))
    }

    /// Bayes classifier `1{eta(x) > 1/2}`.
    pub fn bayes_classify(&self, x: &[f64]) -> u8 {
        u8::from(self.eta_unchecked(x) > 0.5)
    }

    pub fn sample_points(&self, n: usize, rng: &mut Rng) -> PointSet {
        let d = self.dim();
        let mut coords = Vec::with_capacity(n * d);
        for _ in 0..n {
            coords.extend(self.domain.sample(rng));
        }
        PointSet::new(d, coords).expect("sampled points are finite")
    }

    pub fn sample_label(&self, x: &[f64], rng: &mut Rng) -> f64 {
        let eta = self.eta_unchecked(x);
        if self.binary {
            if rng.random::<f64>() < eta {
                1.0
            } else {
                0.0
            }
        } else {
            let z: f64 = StandardNormal.sample(rng);
            eta + self.noise_sd * z
        }
    }

    pub fn sample_labels(&self, points: &PointSet, rng: &mut Rng) -> Vec<f64> {
        points.iter().map(|x| self.sample_label(x, rng)).collect()
    }

    /// `n` iid examples. Same `(problem, n, seed)`, same dataset, bit for bit.
    pub fn sample_dataset(&self, n: usize, seed: u64) -> LabeledDataset {
        let mut rng = rng::seeded(seed);
        let points = self.sample_points(n, &mut rng);
        let labels = self.sample_labels(&points, &mut rng);
        LabeledDataset::new(points, labels, self.binary).expect("sampled dataset is valid")
    }

    pub fn bayes_quantities(&self) -> BayesQuantities {
        let noise = |q: f64| if self.binary { q } else { self.noise_sd * self.noise_sd };
        match self.eta {
            EtaKind::Constant { p } => BayesQuantities {
                bayes_risk: p.min(1.0 - p),
                nn_limit_risk: 2.0 * p * (1.0 - p),
                noise_mse: noise(p * (1.0 - p)),
            },
            EtaKind::LinearBoundary { h } => BayesQuantities {
                bayes_risk: 0.5 - h,
                nn_limit_risk: 2.0 * (0.5 + h) * (0.5 - h),
                noise_mse: noise((0.5 + h) * (0.5 - h)),
            },
            EtaKind::LipschitzSine { .. } => {
                let (lo, hi, density) = self.domain.first_coordinate_marginal();
                let eta = |t: f64| {
                    let mut x = vec![0.0; self.dim()];
                    x[0] = t;
                    self.eta_unchecked(&x)
                };
                let breaks = self.kinks(lo, hi);
                let mass = integrate_piecewise(&*density, &breaks);
                let expect = |g: &dyn Fn(f64) -> f64| {
                    integrate_piecewise(&|t| g(eta(t)) * density(t), &breaks) / mass
                };
                let q = expect(&|e| e * (1.0 - e));
                BayesQuantities {
                    bayes_risk: expect(&|e| e.min(1.0 - e)),
                    nn_limit_risk: 2.0 * q,
                    noise_mse: noise(q),
                }
            }
        }
    }

    /// Zeros of the sine inside `[lo, hi]`, plus the endpoints.
    fn kinks(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = vec![lo];
        if let EtaKind::LipschitzSine { frequency, .. } = self.eta {
            let step = 0.5 / frequency;
            let mut j = (lo / step).floor() as i64 + 1;
            while (j as f64) * step < hi {
                out.push(j as f64 * step);
                j += 1;
            }
        }
        out.push(hi);
        out
    }
}

const QUAD_TOL: f64 = 1e-9;

fn integrate_piecewise(f: &dyn Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    breaks
        .windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], QUAD_TOL))
        .sum()
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 48)
}
