use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gvm_core::{ComplexSeries, GvMParams};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `{"k": .., "sigma2": .., "mus": [..], "kappas": [..]}`, angles in radians.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub k: usize,
    pub sigma2: f64,
    pub mus: Vec<f64>,
    pub kappas: Vec<f64>,
}

impl ParamsFile {
    pub fn from_params(p: &GvMParams) -> Self {
        ParamsFile {
            k: p.order(),
            sigma2: p.sigma2(),
            mus: p.mus().to_vec(),
            kappas: p.kappas().to_vec(),
        }
    }

    pub fn to_params(&self) -> Result<GvMParams> {
        if self.mus.len() != self.k || self.kappas.len() != self.k {
            return Err(gvm_core::GvmError::InvalidParameter(format!(
                "k = {} but mus has {} and kappas {} entries",
                self.k,
                self.mus.len(),
                self.kappas.len()
            ))
            .into());
        }
        Ok(GvMParams::new(self.sigma2, self.mus.clone(), self.kappas.clone())?)
    }
}

/// Input the user supplied in the wrong format; exits with the parse code.
#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

pub fn read_params(path: &Path) -> Result<GvMParams> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let file: ParamsFile = serde_json::from_str(&text).map_err(|e| {
        ParseError(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    file.to_params()
        .with_context(|| format!("invalid parameters in {}", path.display()))
}

#[derive(Deserialize)]
struct Row {
    re: f64,
    im: f64,
}

/// CSV with header `re,im`.
pub fn read_series(path: &Path) -> Result<ComplexSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let headers = reader
        .headers()
        .map_err(|e| ParseError(format!("{}: {e}", path.display())))?
        .clone();
    if headers.len() != 2 || &headers[0] != "re" || &headers[1] != "im" {
        return Err(ParseError(format!(
            "{}: expected header `re,im`, found `{}`",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        ))
        .into());
    }
    let mut values = Vec::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        // header is line 1
        let line = i + 2;
        let row = row.map_err(|e| ParseError(format!("{}: line {line}: {e}", path.display())))?;
        if !row.re.is_finite() || !row.im.is_finite() {
            bail!(ParseError(format!("{}: line {line}: value is not finite", path.display())));
        }
        values.push(Complex64::new(row.re, row.im));
    }
    Ok(ComplexSeries::new(values)?)
}

/// Destination file, or standard output when absent.
pub fn writer(out: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(out: Option<&PathBuf>, header: &str, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = writer(out)?;
    writeln!(w, "{header}")?;
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(num).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(out: Option<&PathBuf>, value: &T) -> Result<()> {
    let mut w = writer(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
