//! `simulate`: synthetic training set and observation from the configured
//! model, optionally with an injected sinusoid in the observation.

use std::f64::consts::TAU;
use std::sync::Arc;

use pfacal::{io, periodogram, rng, TimeSeries};

use super::Context;
use crate::CliError;

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let model = ctx.config.model()?;
    let scheme = ctx.config.scheme()?;
    let train_size = ctx.config.train_size()?;
    let seed = ctx.config.master_seed();

    for l in 0..train_size {
        let series = model.simulate(
            &scheme,
            &mut rng::stream(seed, &[rng::tag::SIMULATE, 1, l as u64]),
        );
        io::write_series_csv(
            &ctx.out.join(format!("train_{l:03}.csv")),
            &series,
            &ctx.meta,
        )?;
    }

    let mut observation = model.simulate(&scheme, &mut rng::stream(seed, &[rng::tag::SIMULATE, 2]));
    if let Some(amplitude) = ctx.config.inject_amplitude {
        if amplitude != 0.0 {
            let nu = ctx.config.inject_frequency.ok_or_else(|| {
                CliError::Config("inject_amplitude set but inject_frequency missing".into())
            })?;
            let phase = ctx.config.inject_phase.unwrap_or(0.0);
            let values: Vec<f64> = observation
                .values()
                .iter()
                .zip(scheme.times())
                .map(|(&x, t)| x + amplitude * (TAU * nu * t + phase).sin())
                .collect();
            observation = TimeSeries::new(Arc::clone(&scheme), values)?;
        }
    }
    io::write_series_csv(&ctx.out.join("observation.csv"), &observation, &ctx.meta)?;

    io::save_ar_model(
        &ctx.out.join("truth_model.json"),
        &model,
        None,
        None,
        &ctx.meta,
    )?;
    let grid = ctx.config.grid_for(&scheme)?;
    io::write_periodogram_csv(
        &ctx.out.join("observation_periodogram.csv"),
        &periodogram(&observation, &grid),
        &ctx.meta,
    )?;
    Ok(())
}
