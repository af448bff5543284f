//! Experiment configuration: one flat TOML file per run, command-line
//! overrides, and a full echo of the effective settings into every output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use pfacal::{
    make_uneven, rng, ArModel, BootstrapConfig, FrequencyGrid, OrderSelectionConfig,
    SamplingScheme, Variant,
};

use crate::CliError;

/// All recognized keys. Unknown keys are rejected at parse time so a typo
/// cannot silently fall back to a default.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Free-form scenario label echoed into outputs.
    pub scenario: Option<String>,

    // Noise model: explicit coefficients, or fitted from training files.
    pub ar_coeffs: Option<Vec<f64>>,
    pub innovation_variance: Option<f64>,

    // Sampling: a random subset of a regular grid, or explicit instants.
    pub n_grid: Option<usize>,
    pub n_keep: Option<usize>,
    pub delta_t: Option<f64>,
    /// Single-column CSV (header `t`) of observation instants.
    pub times_file: Option<PathBuf>,

    // Frequency grid.
    pub oversample: Option<usize>,

    // Bootstrap settings.
    pub train_size: Option<usize>,
    pub n_replicates: Option<usize>,
    pub n_maxima: Option<usize>,
    pub max_order: Option<usize>,
    pub variant: Option<String>,
    pub master_seed: Option<u64>,

    // Oracle and baseline sizes.
    pub n_mc: Option<usize>,
    pub n_perm: Option<usize>,

    // Optional injected sinusoid (observation only).
    pub inject_amplitude: Option<f64>,
    pub inject_frequency: Option<f64>,
    pub inject_phase: Option<f64>,

    // Detection targets for thresholds and verdicts.
    pub targets: Option<Vec<f64>>,

    // Sweep settings.
    pub sweep_n_maxima: Option<Vec<usize>>,
    pub gamma_ref: Option<f64>,

    // Training files (calibrate/test/sweep) when not given on the command
    // line.
    pub train_files: Option<Vec<PathBuf>>,

    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
    }

    /// Apply command-line overrides (flags win over file keys).
    pub fn apply_overrides(
        &mut self,
        seed: Option<u64>,
        variant: Option<&str>,
        out: Option<&Path>,
    ) {
        if let Some(s) = seed {
            self.master_seed = Some(s);
        }
        if let Some(v) = variant {
            self.variant = Some(v.to_string());
        }
        if let Some(o) = out {
            self.out_dir = Some(o.to_path_buf());
        }
    }

    /// Flattened effective configuration for the output provenance block.
    /// Runtime knobs (thread count) are deliberately absent: they must not
    /// change any output byte.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let value = toml::Value::try_from(self).expect("config serializes");
        if let toml::Value::Table(table) = value {
            for (k, v) in table {
                map.insert(k, v.to_string());
            }
        }
        map
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed.unwrap_or(0)
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t.unwrap_or(1.0)
    }

    pub fn oversample(&self) -> usize {
        self.oversample.unwrap_or(1)
    }

    pub fn targets(&self) -> Vec<f64> {
        self.targets.clone().unwrap_or_else(|| vec![0.1, 0.5, 0.9])
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn variant(&self) -> Result<Variant, CliError> {
        match self.variant.as_deref() {
            None | Some("b0") => Ok(Variant::B0),
            Some("bstar") => Ok(Variant::BStar),
            Some(other) => Err(CliError::Config(format!(
                "variant must be `b0` or `bstar`, got `{other}`"
            ))),
        }
    }

    pub fn order_config(&self) -> OrderSelectionConfig {
        OrderSelectionConfig {
            max_order: self.max_order.unwrap_or(20),
        }
    }

    fn require<T: Copy>(&self, field: Option<T>, name: &str) -> Result<T, CliError> {
        field.ok_or_else(|| CliError::Config(format!("missing required config key `{name}`")))
    }

    pub fn train_size(&self) -> Result<usize, CliError> {
        self.require(self.train_size, "train_size")
    }

    pub fn n_replicates(&self) -> Result<usize, CliError> {
        self.require(self.n_replicates, "n_replicates")
    }

    pub fn n_maxima(&self) -> Result<usize, CliError> {
        self.require(self.n_maxima, "n_maxima")
    }

    pub fn n_mc(&self) -> Result<usize, CliError> {
        self.require(self.n_mc, "n_mc")
    }

    pub fn n_perm(&self) -> Result<usize, CliError> {
        self.require(self.n_perm, "n_perm")
    }

    /// Explicit noise model from the config.
    pub fn model(&self) -> Result<ArModel, CliError> {
        let coeffs = self
            .ar_coeffs
            .clone()
            .ok_or_else(|| CliError::Config("missing required config key `ar_coeffs`".into()))?;
        Ok(ArModel::new(
            coeffs,
            self.innovation_variance.unwrap_or(1.0),
        )?)
    }

    /// Sampling scheme: explicit instants file when given, otherwise a
    /// seeded random subset of the regular grid.
    pub fn scheme(&self) -> Result<Arc<SamplingScheme>, CliError> {
        if let Some(times_file) = &self.times_file {
            let times = pfacal::io::read_column_csv(times_file)?;
            return Ok(Arc::new(pfacal::validate_on_grid(&times, self.delta_t())?));
        }
        let n_grid = self.require(self.n_grid, "n_grid")?;
        let n_keep = self.n_keep.unwrap_or(n_grid);
        let mut r = rng::stream(self.master_seed(), &[rng::tag::SIMULATE, 0]);
        let scheme = make_uneven(n_grid, n_keep, &mut r)?;
        Ok(Arc::new(scheme.with_delta_t(self.delta_t())?))
    }

    pub fn grid_for(&self, scheme: &SamplingScheme) -> Result<Arc<FrequencyGrid>, CliError> {
        Ok(Arc::new(FrequencyGrid::for_scheme(
            scheme,
            self.oversample(),
        )?))
    }

    pub fn bootstrap_config(
        &self,
        grid: Arc<FrequencyGrid>,
    ) -> Result<BootstrapConfig, CliError> {
        let cfg = BootstrapConfig {
            train_size: self.train_size()?,
            n_replicates: self.n_replicates()?,
            n_maxima: self.n_maxima()?,
            order: self.order_config(),
            grid,
            variant: self.variant()?,
            master_seed: self.master_seed(),
        };
        cfg.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Training files: command-line paths win, config list second.
    pub fn train_paths(&self, cli_paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
        if !cli_paths.is_empty() {
            return Ok(cli_paths.to_vec());
        }
        self.train_files.clone().ok_or_else(|| {
            CliError::Config(
                "no training files: pass them as arguments or set `train_files`".into(),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = toml::from_str::<ExperimentConfig>("typo_key = 3").unwrap_err();
        assert!(err.to_string().contains("typo_key"));
    }

    #[test]
    fn overrides_win() {
        let mut cfg: ExperimentConfig =
            toml::from_str("master_seed = 1\nvariant = \"b0\"").unwrap();
        cfg.apply_overrides(Some(7), Some("bstar"), Some(Path::new("elsewhere")));
        assert_eq!(cfg.master_seed(), 7);
        assert_eq!(cfg.variant().unwrap(), Variant::BStar);
        assert_eq!(cfg.out_dir(), PathBuf::from("elsewhere"));
    }

    #[test]
    fn echo_is_sorted_and_complete() {
        let cfg: ExperimentConfig =
            toml::from_str("master_seed = 5\nar_coeffs = [0.5, -0.25]\nn_grid = 64").unwrap();
        let echo = cfg.echo();
        assert_eq!(echo["master_seed"], "5");
        assert_eq!(echo["ar_coeffs"], "[0.5, -0.25]");
        assert!(!echo.contains_key("n_keep"));
    }
}
