//! Labeled training samples and their CSV form.
//!
//! CSV layout: header `x0,...,x{d-1},y`, one example per row, every value in
//! shortest round-trip decimal, newline terminated.

use crate::geometry::{GeometryError, PointSet};
use std::io::{Read, Write};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("dataset must contain at least one example")]
    Empty,
    #[error("{points} points but {labels} labels")]
    LengthMismatch { points: usize, labels: usize },
    #[error("labels must be finite")]
    NonFiniteLabel,
    #[error("binary dataset has label {0}, expected 0 or 1")]
    NonBinaryLabel(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad csv: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    points: Arc<PointSet>,
    labels: Vec<f64>,
    binary: bool,
}

impl LabeledDataset {
    pub fn new(points: PointSet, labels: Vec<f64>, binary: bool) -> Result<Self, DatasetError> {
        Self::from_shared(Arc::new(points), labels, binary)
    }

    pub fn from_shared(
        points: Arc<PointSet>,
        labels: Vec<f64>,
        binary: bool,
    ) -> Result<Self, DatasetError> {
        if points.is_empty() {
            return Err(DatasetError::Empty);
        }
        if points.len() != labels.len() {
            return Err(DatasetError::LengthMismatch {
                points: points.len(),
                labels: labels.len(),
            });
        }
        if labels.iter().any(|y| !y.is_finite()) {
            return Err(DatasetError::NonFiniteLabel);
        }
        if binary {
            if let Some(&bad) = labels.iter().find(|&&y| y != 0.0 && y != 1.0) {
                return Err(DatasetError::NonBinaryLabel(bad));
            }
        }
        Ok(Self {
            points,
            labels,
            binary,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn shared_points(&self) -> Arc<PointSet> {
        Arc::clone(&self.points)
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn is_binary(&self) -> bool {
        self.binary
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), DatasetError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header: Vec<String> = (0..self.dim()).map(|i| format!("x{i}")).collect();
        header.push("y".into());
        w.write_record(&header)?;
        for (p, y) in self.points.iter().zip(&self.labels) {
            let row = p.iter().chain(std::iter::once(y)).map(|v| v.to_string());
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV layout written by [`write_csv`](Self::write_csv). The
    /// dataset is marked binary when every label is 0 or 1.
    pub fn read_csv<R: Read>(input: R) -> Result<Self, DatasetError> {
        let (header, rows) = read_numeric_csv(input)?;
        let dim = header.len().checked_sub(1).filter(|&d| d > 0).ok_or_else(|| {
            DatasetError::Format("need at least one coordinate column and a label column".into())
        })?;
        if header[dim] != "y" {
            return Err(DatasetError::Format(format!(
                "last column must be `y`, found `{}`",
                header[dim]
            )));
        }
        let mut coords = Vec::with_capacity(rows.len() * dim);
        let mut labels = Vec::with_capacity(rows.len());
        for row in rows {
            coords.extend_from_slice(&row[..dim]);
            labels.push(row[dim]);
        }
        let binary = labels.iter().all(|&y| y == 0.0 || y == 1.0);
        Self::new(PointSet::new(dim, coords)?, labels, binary)
    }
}

/// Parses a headed CSV of numbers; every row must match the header width.
pub fn read_numeric_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>), DatasetError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| DatasetError::Format(format!("row {}: `{f}` is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Reads query points: every column whose name starts with `x`, in order.
pub fn read_points_csv<R: Read>(input: R) -> Result<PointSet, DatasetError> {
    let (header, rows) = read_numeric_csv(input)?;
    let cols: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with('x'))
        .map(|(i, _)| i)
        .collect();
    if cols.is_empty() {
        return Err(DatasetError::Format("no x* coordinate columns".into()));
    }
    let coords = rows
        .iter()
        .flat_map(|r| cols.iter().map(move |&c| r[c]))
        .collect();
    Ok(PointSet::new(cols.len(), coords)?)
}
