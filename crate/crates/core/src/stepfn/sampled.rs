use std::io::Read;

use super::{Atom, StepFunction};
use crate::error::{domain, Error, Result};

/// Uniformly sampled function: `samples[i]` is the value on
/// `[origin + i·h, origin + (i+1)·h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub origin: f64,
    pub cell_width: f64,
    pub samples: Vec<f64>,
}

const SPACING_TOL: f64 = 1e-9;

impl SampledFunction {
    pub fn new(origin: f64, cell_width: f64, samples: Vec<f64>) -> Result<Self> {
        if !(cell_width > 0.0 && cell_width.is_finite()) {
            return Err(domain(format!(
                "cell width must be finite and > 0, got {cell_width}"
            )));
        }
        if !origin.is_finite() || samples.iter().any(|s| !s.is_finite()) {
            return Err(domain("origin and samples must be finite"));
        }
        Ok(Self {
            origin,
            cell_width,
            samples,
        })
    }

    /// Cells with `|sample| > threshold` become atoms; equal neighbours merge.
    pub fn ingest(&self, threshold: f64) -> Result<StepFunction> {
        if !(threshold >= 0.0) {
            return Err(domain(format!("threshold must be >= 0, got {threshold}")));
        }
        if !(self.cell_width > 0.0) {
            return Err(domain(format!(
                "cell width must be > 0, got {}",
                self.cell_width
            )));
        }
        let edge = |i: usize| self.origin + i as f64 * self.cell_width;
        let mut atoms: Vec<Atom> = Vec::new();
        for (i, &value) in self.samples.iter().enumerate() {
            if value.abs() <= threshold {
                continue;
            }
            let (a, b) = (edge(i), edge(i + 1));
            match atoms.last_mut() {
                Some(last) if last.b == a && last.value == value => last.b = b,
                _ => atoms.push(Atom { a, b, value }),
            }
        }
        StepFunction::new(atoms)
    }

    /// Reads `x,value` CSV with strictly increasing, uniformly spaced `x`.
    ///
    /// The spacing comes from the first two rows; any later gap differing from
    /// it by more than `1e-9` relative is a parse error.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "value" {
            return Err(Error::Parse(format!(
                "expected header \"x,value\", got {headers:?}"
            )));
        }
        let mut xs = Vec::new();
        let mut samples = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let field = |k: usize| -> Result<f64> {
                record
                    .get(k)
                    .ok_or_else(|| Error::Parse(format!("row {}: missing column", row + 2)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", row + 2)))
            };
            xs.push(field(0)?);
            samples.push(field(1)?);
        }
        if xs.len() < 2 {
            return Err(Error::Parse(
                "need at least two rows to infer the spacing".into(),
            ));
        }
        let h = xs[1] - xs[0];
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Parse("x must be strictly increasing".into()));
        }
        for (i, w) in xs.windows(2).enumerate() {
            let gap = w[1] - w[0];
            if !(gap > 0.0) {
                return Err(Error::Parse(format!(
                    "x not strictly increasing at row {}",
                    i + 3
                )));
            }
            if (gap - h).abs() > SPACING_TOL * h {
                return Err(Error::Parse(format!(
                    "nonuniform spacing at row {}: {gap} vs {h}",
                    i + 3
                )));
            }
        }
        Self::new(xs[0], h, samples).map_err(|e| Error::Parse(e.to_string()))
    }
}
