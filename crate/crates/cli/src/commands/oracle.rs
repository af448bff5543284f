//! `oracle`: brute-force ground-truth FA curve of the configured model.

use pfacal::{bootstrap, io, rng};

use super::{write_empirical_fa_curve, Context};
use crate::CliError;

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let model = ctx.config.model()?;
    let scheme = ctx.config.scheme()?;
    let grid = ctx.config.grid_for(&scheme)?;
    let maxima = bootstrap::mc_oracle(
        &model,
        &scheme,
        &grid,
        ctx.config.train_size()?,
        ctx.config.n_mc()?,
        rng::derive_seed(ctx.config.master_seed(), &[rng::tag::ORACLE]),
    );
    io::write_column_csv(&ctx.out.join("oracle_maxima.csv"), "max", &maxima, &ctx.meta)?;
    write_empirical_fa_curve(&ctx.out.join("oracle_fa_curve.csv"), &maxima, &ctx.meta)
}
