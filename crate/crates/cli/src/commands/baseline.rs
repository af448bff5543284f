//! `baseline`: permutation-resampling FA curve for one observation,
//! normalized by the sample variance (the correlation-blind comparator).

use std::path::Path;
use std::sync::Arc;

use pfacal::{bootstrap, io, rng, validate_on_grid, TimeSeries};

use super::{write_empirical_fa_curve, Context};
use crate::CliError;

pub fn run(ctx: &Context, observation: &Path) -> Result<(), CliError> {
    let (times, values) = io::read_series_csv(observation)?;
    let scheme = Arc::new(validate_on_grid(&times, ctx.config.delta_t())?);
    let x_obs = TimeSeries::new(Arc::clone(&scheme), values)?;
    let grid = ctx.config.grid_for(&scheme)?;
    let maxima = bootstrap::permutation_baseline(
        &x_obs,
        &grid,
        ctx.config.n_perm()?,
        rng::derive_seed(ctx.config.master_seed(), &[rng::tag::BASELINE]),
    )?;
    io::write_column_csv(
        &ctx.out.join("baseline_maxima.csv"),
        "max",
        &maxima,
        &ctx.meta,
    )?;
    write_empirical_fa_curve(&ctx.out.join("baseline_fa_curve.csv"), &maxima, &ctx.meta)
}
