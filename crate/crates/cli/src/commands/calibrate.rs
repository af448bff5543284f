//! `calibrate`: fit the noise model, run the bootstrap, and emit the FA
//! curve, threshold tables and diagnostics.

use std::path::PathBuf;

use pfacal::{armodel, bootstrap, io, rng};
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use super::{write_table, Context};
use crate::CliError;

/// Draws used for the even-sampling marginal-distribution check table.
const MARGINAL_DRAWS: usize = 2000;
const MARGINAL_LEVELS: [f64; 4] = [0.5, 0.9, 0.99, 0.999];

pub fn run(ctx: &Context, cli_train: &[PathBuf]) -> Result<(), CliError> {
    let paths = ctx.config.train_paths(cli_train)?;
    let (scheme, train) = io::read_training_set(&paths, ctx.config.delta_t())?;
    let grid = ctx.config.grid_for(&scheme)?;
    let bcfg = ctx.config.bootstrap_config(grid.clone())?;
    if bcfg.train_size != train.len() {
        return Err(CliError::Config(format!(
            "config train_size = {} but {} training files were given",
            bcfg.train_size,
            train.len()
        )));
    }

    // First-stage model with diagnostics (run_b0 refits identically).
    let (model, fit_report) = armodel::fit_with_report(&train, &bcfg.order)?;
    let diagnostics = armodel::residual_diagnostics(&model, &train, 10)?;
    io::save_ar_model(
        &ctx.out.join("ar_model.json"),
        &model,
        Some(&fit_report),
        Some(&diagnostics),
        &ctx.meta,
    )?;

    let run = bootstrap::run_b0(&train, &bcfg)?;
    io::save_fa_run(&ctx.out, "calibration", &run, &ctx.meta)?;

    // FA curve table over the run's threshold grid.
    let rows = run.gamma_grid.iter().map(|&gamma| {
        let s = bootstrap::fa_distribution(&run, gamma);
        let band_min = s.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let band_max = s.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        vec![
            gamma.to_string(),
            s.mean.to_string(),
            s.std.to_string(),
            s.ci95.0.to_string(),
            s.ci95.1.to_string(),
            band_min.to_string(),
            band_max.to_string(),
        ]
    });
    write_table(
        &ctx.out.join("fa_curve.csv"),
        &ctx.meta,
        &["gamma", "mean", "std", "lo95", "hi95", "band_min", "band_max"],
        rows,
    )?;

    // Threshold table for the configured targets.
    let mut threshold_rows = Vec::new();
    for target in ctx.config.targets() {
        let t = bootstrap::threshold_for(&run, target)?;
        threshold_rows.push(vec![
            target.to_string(),
            t.mean.to_string(),
            t.std.to_string(),
            t.ci95.0.to_string(),
            t.ci95.1.to_string(),
        ]);
    }
    write_table(
        &ctx.out.join("thresholds.csv"),
        &ctx.meta,
        &["target_pfa", "gamma_mean", "gamma_std", "gamma_lo95", "gamma_hi95"],
        threshold_rows,
    )?;

    // On even sampling the standardized ordinates have a known marginal
    // law; emit the quantile comparison table.
    if scheme.is_even() {
        let k = grid.len();
        let spot = [k / 8, k / 2, 7 * k / 8];
        let samples = bootstrap::standardized_ordinate_samples(
            &model,
            &scheme,
            &grid,
            &spot,
            bcfg.train_size,
            MARGINAL_DRAWS,
            rng::derive_seed(bcfg.master_seed, &[rng::tag::MARGINAL]),
        )?;
        let f = FisherSnedecor::new(2.0, 2.0 * bcfg.train_size as f64)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let mut rows = Vec::new();
        for (i, &freq_index) in spot.iter().enumerate() {
            let mut sorted = samples[i].clone();
            sorted.sort_by(f64::total_cmp);
            for level in MARGINAL_LEVELS {
                let idx = ((level * (sorted.len() - 1) as f64).round() as usize)
                    .min(sorted.len() - 1);
                rows.push(vec![
                    freq_index.to_string(),
                    grid.frequencies()[freq_index].to_string(),
                    level.to_string(),
                    f.inverse_cdf(level).to_string(),
                    sorted[idx].to_string(),
                ]);
            }
        }
        write_table(
            &ctx.out.join("f_marginal_check.csv"),
            &ctx.meta,
            &["freq_index", "nu", "level", "f_quantile", "empirical_quantile"],
            rows,
        )?;
    }
    Ok(())
}
