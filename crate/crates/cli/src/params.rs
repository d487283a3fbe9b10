//! Text forms of problem and estimator parameters.
//!
//! * domain: `cube:D`, `ball:D`, `simplex:D`
//! * eta: `constant:P`, `linear:H`, `sine:A:W`
//! * estimator: `simplicial`, `winn`, `hilbert`, `knn`
//! * k: an integer, `sqrt`, `pow:E`, `rate` or `rate:ALPHA`
//! * weight: `power`, `power:DELTA`, `neglog`

use crate::CliError;
use interp_core::{Domain, EtaKind, NeighborCount, Scheme, WeightFunction};

fn bad(what: &str, text: &str) -> CliError {
    CliError::Config(format!("cannot parse {what} `{text}`"))
}

fn number<T: std::str::FromStr>(what: &str, text: &str) -> Result<T, CliError> {
    text.trim().parse().map_err(|_| bad(what, text))
}

pub fn domain(text: &str) -> Result<Domain, CliError> {
    let (kind, d) = text.split_once(':').ok_or_else(|| bad("domain", text))?;
    let d: usize = number("domain dimension", d)?;
    match kind {
        "cube" => Ok(Domain::UnitCube(d)),
        "ball" => Ok(Domain::UnitBall(d)),
        "simplex" => Ok(Domain::Simplex(d)),
        _ => Err(bad("domain", text)),
    }
}

pub fn eta(text: &str) -> Result<EtaKind, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["constant", p] => Ok(EtaKind::Constant { p: number("p", p)? }),
        ["linear", h] => Ok(EtaKind::LinearBoundary { h: number("h", h)? }),
        ["sine", a, w] => Ok(EtaKind::LipschitzSine {
            amplitude: number("amplitude", a)?,
            frequency: number("frequency", w)?,
        }),
        _ => Err(bad("eta", text)),
    }
}

pub fn neighbor_count(text: &str) -> Result<NeighborCount, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["sqrt"] => Ok(NeighborCount::Power(0.5)),
        ["pow", e] => Ok(NeighborCount::Power(number("exponent", e)?)),
        ["rate"] => Ok(NeighborCount::RateOptimal { alpha: 1.0 }),
        ["rate", a] => Ok(NeighborCount::RateOptimal {
            alpha: number("alpha", a)?,
        }),
        [k] => Ok(NeighborCount::Fixed(number("k", k)?)),
        _ => Err(bad("k", text)),
    }
}

pub fn weight(text: &str, dim: usize) -> Result<WeightFunction, CliError> {
    match text.split_once(':') {
        None if text == "power" => Ok(WeightFunction::default_for_dim(dim)),
        None if text == "neglog" => Ok(WeightFunction::NegLog),
        Some(("power", delta)) => Ok(WeightFunction::PowerLaw {
            delta: number("delta", delta)?,
        }),
        _ => Err(bad("weight", text)),
    }
}

pub fn scheme(name: &str, k: &str, weight_text: &str, dim: usize) -> Result<Scheme, CliError> {
    match name {
        "simplicial" => Ok(Scheme::Simplicial),
        "hilbert" => Ok(Scheme::Hilbert),
        "winn" => Ok(Scheme::WiNN {
            k: neighbor_count(k)?,
            weight: weight(weight_text, dim)?,
        }),
        "knn" => Ok(Scheme::UnweightedKnn {
            k: neighbor_count(k)?,
        }),
        _ => Err(bad("estimator", name)),
    }
}

/// Comma-separated list, e.g. `256,512,1024`.
pub fn list<T: std::str::FromStr>(what: &str, text: &str) -> Result<Vec<T>, CliError> {
    text.split(',').map(|s| number(what, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(domain("ball:3").unwrap(), Domain::UnitBall(3));
        assert_eq!(
            eta("sine:0.3:1").unwrap(),
            EtaKind::LipschitzSine {
                amplitude: 0.3,
                frequency: 1.0
            }
        );
        assert_eq!(neighbor_count("sqrt").unwrap(), NeighborCount::Power(0.5));
        assert_eq!(neighbor_count("7").unwrap(), NeighborCount::Fixed(7));
        assert_eq!(
            weight("power", 2).unwrap(),
            WeightFunction::PowerLaw { delta: 0.5 }
        );
        assert_eq!(list::<usize>("n", "1,2, 3").unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(domain("torus:2").is_err());
        assert!(eta("sine:0.3").is_err());
        assert!(neighbor_count("lots").is_err());
        assert!(scheme("forest", "1", "power", 2).is_err());
    }
}
