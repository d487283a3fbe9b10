//! Plain-text graph formats.
//!
//! Edge list: one `i j w` per line. Labels: one `i y` per line. Vertices are
//! 0-based; blank lines and lines starting with `#` are skipped. Output is CSV
//! `vertex,eta_hat`.

use super::GraphError;
use std::io::{BufRead, Write};

fn fields<R: BufRead>(
    input: R,
    width: usize,
) -> impl Iterator<Item = Result<(usize, Vec<String>), GraphError>> {
    input.lines().enumerate().filter_map(move |(lineno, line)| {
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(e.into())),
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let parts: Vec<String> = trimmed.split_whitespace().map(str::to_owned).collect();
        if parts.len() != width {
            return Some(Err(GraphError::Parse {
                line: lineno + 1,
                message: format!("expected {width} fields, found {}", parts.len()),
            }));
        }
        Some(Ok((lineno + 1, parts)))
    })
}

fn parse<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, GraphError> {
    s.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("cannot parse `{s}`"),
    })
}

pub fn parse_edge_list<R: BufRead>(input: R) -> Result<Vec<(usize, usize, f64)>, GraphError> {
    fields(input, 3)
        .map(|r| {
            let (line, p) = r?;
            Ok((parse(&p[0], line)?, parse(&p[1], line)?, parse(&p[2], line)?))
        })
        .collect()
}

pub fn parse_labels<R: BufRead>(input: R) -> Result<Vec<(usize, f64)>, GraphError> {
    fields(input, 2)
        .map(|r| {
            let (line, p) = r?;
            Ok((parse(&p[0], line)?, parse(&p[1], line)?))
        })
        .collect()
}

pub fn write_interpolant_csv<W: Write>(values: &[f64], mut out: W) -> Result<(), GraphError> {
    writeln!(out, "vertex,eta_hat")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(out, "{i},{v}")?;
    }
    Ok(())
}
