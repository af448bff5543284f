//! File formats: series/periodogram/maxima CSV and model/run JSON.
//!
//! Every produced file embeds a provenance block — tool version, master
//! seed and the flattened run configuration. CSV files carry it as leading
//! `#` comment lines before the required header row and readers skip such
//! lines, so outputs feed back into the ingestion path unchanged. JSON
//! files carry it as a `meta` object.
//!
//! All numbers are written in shortest round-trip form, so a reloaded file
//! reproduces the original values bit for bit.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::armodel::{ArModel, ResidualDiagnostics};
use crate::bootstrap::{BootstrapConfig, FaRun, ReplicateRecord};
use crate::error::{Error, Result};
use crate::gev::{GevFitReport, GevParams};
use crate::sampling::{validate_on_grid, SamplingScheme, TimeSeries};
use crate::spectral::Periodogram;

/// Provenance block embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileMeta {
    pub tool: String,
    pub master_seed: u64,
    /// Flattened effective configuration, sorted by key.
    pub config: BTreeMap<String, String>,
}

impl FileMeta {
    pub fn new(master_seed: u64, config: BTreeMap<String, String>) -> Self {
        Self {
            tool: format!("pfacal {}", env!("CARGO_PKG_VERSION")),
            master_seed,
            config,
        }
    }

    fn comment_block(&self) -> String {
        let mut s = format!("# {}\n# master_seed = {}\n", self.tool, self.master_seed);
        for (k, v) in &self.config {
            s.push_str(&format!("# {k} = {v}\n"));
        }
        s
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, record: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        record,
        message: message.into(),
    }
}

fn open_writer(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

/// Write a `t,x` series file.
pub fn write_series_csv(path: &Path, series: &TimeSeries, meta: &FileMeta) -> Result<()> {
    let mut w = open_writer(path)?;
    write!(w, "{}", meta.comment_block()).map_err(io_err(path))?;
    writeln!(w, "t,x").map_err(io_err(path))?;
    for (&t, &x) in series.scheme().times().iter().zip(series.values()) {
        writeln!(w, "{t},{x}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Read a `t,x` series file (comment lines skipped, header required).
pub fn read_series_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    {
        let headers = reader
            .headers()
            .map_err(|e| parse_err(path, 0, e.to_string()))?;
        if headers.len() < 2 || &headers[0] != "t" || &headers[1] != "x" {
            return Err(parse_err(path, 0, "expected header `t,x`"));
        }
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        let t: f64 = record[0]
            .parse()
            .map_err(|_| parse_err(path, i + 1, format!("bad time `{}`", &record[0])))?;
        let x: f64 = record[1]
            .parse()
            .map_err(|_| parse_err(path, i + 1, format!("bad value `{}`", &record[1])))?;
        times.push(t);
        values.push(x);
    }
    Ok((times, values))
}

/// Load a list of series files that must all share one sampling scheme
/// (instants snapped onto the `delta_t` grid).
pub fn read_training_set(
    paths: &[PathBuf],
    delta_t: f64,
) -> Result<(Arc<SamplingScheme>, Vec<TimeSeries>)> {
    if paths.is_empty() {
        return Err(Error::InvalidArgument("no training files given".into()));
    }
    let mut scheme: Option<Arc<SamplingScheme>> = None;
    let mut series = Vec::with_capacity(paths.len());
    for (index, path) in paths.iter().enumerate() {
        let (times, values) = read_series_csv(path)?;
        let this = validate_on_grid(&times, delta_t)?;
        match &scheme {
            None => scheme = Some(Arc::new(this)),
            Some(s) => {
                if this != **s {
                    return Err(Error::MixedSchemes { index });
                }
            }
        }
        series.push(TimeSeries::new(
            Arc::clone(scheme.as_ref().unwrap()),
            values,
        )?);
    }
    Ok((scheme.unwrap(), series))
}

/// Write a `nu,ordinate` periodogram file.
pub fn write_periodogram_csv(path: &Path, p: &Periodogram, meta: &FileMeta) -> Result<()> {
    let mut w = open_writer(path)?;
    write!(w, "{}", meta.comment_block()).map_err(io_err(path))?;
    writeln!(w, "nu,ordinate").map_err(io_err(path))?;
    for (&nu, &o) in p.grid().frequencies().iter().zip(p.ordinates()) {
        writeln!(w, "{nu},{o}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Write a single-column value file (sorted maxima, for instance).
pub fn write_column_csv(path: &Path, column: &str, values: &[f64], meta: &FileMeta) -> Result<()> {
    let mut w = open_writer(path)?;
    write!(w, "{}", meta.comment_block()).map_err(io_err(path))?;
    writeln!(w, "{column}").map_err(io_err(path))?;
    for v in values {
        writeln!(w, "{v}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Read a single-column value file.
pub fn read_column_csv(path: &Path) -> Result<Vec<f64>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        let v: f64 = record[0]
            .parse()
            .map_err(|_| parse_err(path, i + 1, format!("bad value `{}`", &record[0])))?;
        values.push(v);
    }
    Ok(values)
}

/// Maxima matrix, one row per replicate.
fn write_maxima_csv(path: &Path, replicates: &[ReplicateRecord], meta: &FileMeta) -> Result<()> {
    let mut w = open_writer(path)?;
    write!(w, "{}", meta.comment_block()).map_err(io_err(path))?;
    let width = replicates.first().map_or(0, |r| r.maxima.len());
    let header: Vec<String> = std::iter::once("replicate".to_string())
        .chain((1..=width).map(|j| format!("m{j}")))
        .collect();
    writeln!(w, "{}", header.join(",")).map_err(io_err(path))?;
    for (i, r) in replicates.iter().enumerate() {
        write!(w, "{i}").map_err(io_err(path))?;
        for m in &r.maxima {
            write!(w, ",{m}").map_err(io_err(path))?;
        }
        writeln!(w).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn read_maxima_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        let mut row = Vec::with_capacity(record.len().saturating_sub(1));
        for field in record.iter().skip(1) {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(path, i + 1, format!("bad maximum `{field}`")))?;
            if !v.is_finite() {
                return Err(parse_err(path, i + 1, "non-finite maximum"));
            }
            row.push(v);
        }
        row.sort_by(f64::total_cmp);
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Serialize, Deserialize)]
struct ReplicateManifest {
    gev: Option<GevParams>,
    gev_report: Option<GevFitReport>,
}

/// JSON side of a persisted run; the maxima matrix lives in the referenced
/// CSV next to it.
#[derive(Serialize, Deserialize)]
struct FaRunManifest {
    meta: FileMeta,
    config: BootstrapConfig,
    scheme: SamplingScheme,
    gamma_grid: Vec<f64>,
    maxima_csv: String,
    replicates: Vec<ReplicateManifest>,
}

/// Persist a run as `{stem}.json` plus `{stem}_maxima.csv` in `dir`.
pub fn save_fa_run(dir: &Path, stem: &str, run: &FaRun, meta: &FileMeta) -> Result<PathBuf> {
    let maxima_name = format!("{stem}_maxima.csv");
    write_maxima_csv(&dir.join(&maxima_name), &run.replicates, meta)?;
    let manifest = FaRunManifest {
        meta: meta.clone(),
        config: run.config.clone(),
        scheme: run.scheme.clone(),
        gamma_grid: run.gamma_grid.clone(),
        maxima_csv: maxima_name,
        replicates: run
            .replicates
            .iter()
            .map(|r| ReplicateManifest {
                gev: r.gev,
                gev_report: r.gev_report,
            })
            .collect(),
    };
    let json_path = dir.join(format!("{stem}.json"));
    write_json(&json_path, &manifest)?;
    Ok(json_path)
}

/// Load a run persisted by [`save_fa_run`]; the maxima CSV is resolved
/// relative to the manifest's directory.
pub fn load_fa_run(json_path: &Path) -> Result<(FaRun, FileMeta)> {
    let manifest: FaRunManifest = read_json(json_path)?;
    let dir = json_path.parent().unwrap_or_else(|| Path::new("."));
    let rows = read_maxima_csv(&dir.join(&manifest.maxima_csv))?;
    if rows.len() != manifest.replicates.len() {
        return Err(parse_err(
            json_path,
            0,
            format!(
                "maxima file has {} rows but the manifest lists {} replicates",
                rows.len(),
                manifest.replicates.len()
            ),
        ));
    }
    let replicates = rows
        .into_iter()
        .zip(manifest.replicates)
        .map(|(maxima, r)| ReplicateRecord {
            maxima,
            gev: r.gev,
            gev_report: r.gev_report,
        })
        .collect();
    Ok((
        FaRun {
            config: manifest.config,
            scheme: manifest.scheme,
            gamma_grid: manifest.gamma_grid,
            replicates,
        },
        manifest.meta,
    ))
}

#[derive(Serialize, Deserialize)]
struct ArModelFile {
    meta: FileMeta,
    order: usize,
    coeffs: Vec<f64>,
    innovation_variance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<crate::armodel::FitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<ResidualDiagnostics>,
}

/// Persist a fitted AR model (order, coefficients, innovation variance)
/// with optional fit and residual-whiteness diagnostics.
pub fn save_ar_model(
    path: &Path,
    model: &ArModel,
    fit: Option<&crate::armodel::FitReport>,
    diagnostics: Option<&ResidualDiagnostics>,
    meta: &FileMeta,
) -> Result<()> {
    write_json(
        path,
        &ArModelFile {
            meta: meta.clone(),
            order: model.order(),
            coeffs: model.coeffs().to_vec(),
            innovation_variance: model.innovation_variance(),
            fit: fit.cloned(),
            diagnostics: diagnostics.cloned(),
        },
    )
}

pub fn load_ar_model(path: &Path) -> Result<(ArModel, FileMeta)> {
    let file: ArModelFile = read_json(path)?;
    if file.order != file.coeffs.len() {
        return Err(parse_err(
            path,
            0,
            format!(
                "order field {} disagrees with {} coefficients",
                file.order,
                file.coeffs.len()
            ),
        ));
    }
    Ok((
        ArModel::new(file.coeffs, file.innovation_variance)?,
        file.meta,
    ))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = open_writer(path)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| parse_err(path, 0, e.to_string()))?;
    writeln!(w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|e| parse_err(path, 0, e.to_string()))
}
