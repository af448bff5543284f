//! One module per subcommand, plus shared output helpers.

pub mod baseline;
pub mod calibrate;
pub mod oracle;
pub mod simulate;
pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use pfacal::FileMeta;

use crate::config::ExperimentConfig;
use crate::CliError;

/// Resolved run context: effective config, output directory, provenance.
pub struct Context {
    pub config: ExperimentConfig,
    pub out: PathBuf,
    pub meta: FileMeta,
}

impl Context {
    pub fn new(config: ExperimentConfig) -> Result<Self, CliError> {
        let out = config.out_dir();
        std::fs::create_dir_all(&out)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;
        let meta = FileMeta::new(config.master_seed(), config.echo());
        Ok(Self { config, out, meta })
    }
}

/// Write a CSV table with the provenance comment block and a header row.
pub fn write_table(
    path: &Path,
    meta: &FileMeta,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut w = std::io::BufWriter::new(file);
    write!(w, "# {}\n# master_seed = {}\n", meta.tool, meta.master_seed).map_err(io_err)?;
    for (k, v) in &meta.config {
        writeln!(w, "# {k} = {v}").map_err(io_err)?;
    }
    writeln!(w, "{}", header.join(",")).map_err(io_err)?;
    for row in rows {
        writeln!(w, "{}", row.join(",")).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// FA curve of a sorted maxima vector over its own quantile grid.
pub fn write_empirical_fa_curve(
    path: &Path,
    maxima: &[f64],
    meta: &FileMeta,
) -> Result<(), CliError> {
    let n = maxima.len();
    let rows = (0..=200usize).map(|i| {
        let idx = ((i as f64 / 200.0) * (n - 1) as f64).round() as usize;
        let gamma = maxima[idx];
        let pfa = pfacal::empirical_pfa(maxima, gamma);
        vec![gamma.to_string(), pfa.to_string()]
    });
    write_table(path, meta, &["gamma", "pfa"], rows)
}
