//! `sweep`: dispersion of the FA estimate at a reference threshold as a
//! function of the inner sample count, for both variants.
//!
//! The deterministic table (`sweep.csv`) uses the number of simulated
//! series as its compute proxy; wall-clock seconds are hardware-dependent
//! and therefore go to a separate file excluded from reproducibility
//! guarantees.

use std::path::PathBuf;
use std::time::Instant;

use pfacal::{bootstrap, io, rng, Variant};

use super::{write_table, Context};
use crate::CliError;

pub fn run(ctx: &Context, cli_train: &[PathBuf]) -> Result<(), CliError> {
    let paths = ctx.config.train_paths(cli_train)?;
    let (scheme, train) = io::read_training_set(&paths, ctx.config.delta_t())?;
    let grid = ctx.config.grid_for(&scheme)?;
    let gamma_ref = ctx
        .config
        .gamma_ref
        .ok_or_else(|| CliError::Config("sweep needs `gamma_ref`".into()))?;
    let inner_counts = ctx
        .config
        .sweep_n_maxima
        .clone()
        .ok_or_else(|| CliError::Config("sweep needs `sweep_n_maxima`".into()))?;
    if inner_counts.iter().any(|&b| b < 20) {
        return Err(CliError::Config(
            "sweep_n_maxima entries must be >= 20 (the extreme-value variant runs too)".into(),
        ));
    }
    let base = ctx.config.bootstrap_config(grid)?;

    let mut rows = Vec::new();
    let mut wall = Vec::new();
    for (variant_id, variant) in [(0u64, Variant::B0), (1u64, Variant::BStar)] {
        for &n_maxima in &inner_counts {
            let cfg = bootstrap::BootstrapConfig {
                n_maxima,
                variant,
                master_seed: rng::derive_seed(
                    base.master_seed,
                    &[rng::tag::SWEEP, variant_id, n_maxima as u64],
                ),
                ..base.clone()
            };
            let started = Instant::now();
            let run = bootstrap::run_b0(&train, &cfg)?;
            let seconds = started.elapsed().as_secs_f64();
            let summary = bootstrap::fa_distribution(&run, gamma_ref);
            let series_simulated =
                cfg.n_replicates * (cfg.train_size + cfg.n_maxima * (cfg.train_size + 1));
            let label = match variant {
                Variant::B0 => "b0",
                Variant::BStar => "bstar",
            };
            rows.push(vec![
                label.to_string(),
                n_maxima.to_string(),
                cfg.n_replicates.to_string(),
                series_simulated.to_string(),
                summary.mean.to_string(),
                summary.std.to_string(),
            ]);
            wall.push(vec![
                label.to_string(),
                n_maxima.to_string(),
                format!("{seconds:.3}"),
            ]);
        }
    }
    write_table(
        &ctx.out.join("sweep.csv"),
        &ctx.meta,
        &["variant", "n_maxima", "n_replicates", "series_simulated", "mean_pfa", "std_pfa"],
        rows,
    )?;
    write_table(
        &ctx.out.join("sweep_wallclock.csv"),
        &ctx.meta,
        &["variant", "n_maxima", "seconds"],
        wall,
    )
}
