//! Bootstrap calibration of false-alarm rates for the max test.
//!
//! The core procedure fits an AR noise model to the genuine training set,
//! then for each of `B` replicates: simulates a fake training set from that
//! first-stage model, refits to get a second-stage model, and draws `b`
//! standardized-periodogram maxima from the second-stage model (one fresh
//! numerator series and a fresh averaged denominator per draw). Each
//! replicate turns its maxima into a false-alarm curve, either directly
//! through the empirical cdf or through a fitted extreme-value law; the
//! spread of those `B` curves estimates the distribution of the FA estimate
//! caused by the finite training set.
//!
//! Also here: the brute-force Monte-Carlo oracle used as ground truth in
//! validation, and the permutation baseline that ignores noise correlation
//! (its periodogram is normalized by the sample variance instead of a
//! training average, standing in for the generalized-periodogram variant of
//! that classical recipe).
//!
//! Randomness is managed through one master seed; every fake training set,
//! inner draw, oracle draw and permutation owns a derived stream (see
//! [`crate::rng`]), so runs are reproducible at any thread count.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::armodel::{self, ArModel, OrderSelectionConfig};
use crate::error::{Error, Result};
use crate::gev::{self, GevFitReport, GevParams};
use crate::rng::{self, tag};
use crate::sampling::{shared_scheme, SamplingScheme, TimeSeries};
use crate::spectral::{max_ratio, FrequencyGrid, NudftPlan};

/// Fraction of replicates allowed to lose their extreme-value fit before
/// the whole run is rejected.
const INVALID_REPLICATE_BUDGET: f64 = 0.05;
/// Number of points in the exported threshold grid.
const GAMMA_GRID_LEN: usize = 201;

/// How each replicate summarizes its maxima into a FA curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Empirical cdf of the sorted maxima.
    B0,
    /// Fitted generalized extreme-value law.
    BStar,
}

/// Settings of one bootstrap run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Training series per denominator (the size of the genuine set).
    pub train_size: usize,
    /// Outer replicates: fake training sets drawn from the first-stage fit.
    pub n_replicates: usize,
    /// Maxima drawn per replicate.
    pub n_maxima: usize,
    pub order: OrderSelectionConfig,
    pub grid: Arc<FrequencyGrid>,
    pub variant: Variant,
    pub master_seed: u64,
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.train_size < 1 {
            return Err(Error::InvalidArgument("train_size must be >= 1".into()));
        }
        if self.n_replicates < 1 {
            return Err(Error::InvalidArgument("n_replicates must be >= 1".into()));
        }
        if self.n_maxima < 1 {
            return Err(Error::InvalidArgument("n_maxima must be >= 1".into()));
        }
        if self.variant == Variant::BStar && self.n_maxima < 20 {
            return Err(Error::InvalidArgument(format!(
                "the extreme-value variant needs n_maxima >= 20, got {}",
                self.n_maxima
            )));
        }
        Ok(())
    }
}

/// One outer replicate: its sorted maxima and, for the extreme-value
/// variant, the fitted law. A missing fit marks the replicate invalid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateRecord {
    /// Sorted ascending, exactly `n_maxima` entries.
    pub maxima: Vec<f64>,
    pub gev: Option<GevParams>,
    pub gev_report: Option<GevFitReport>,
}

impl ReplicateRecord {
    pub fn is_valid(&self, variant: Variant) -> bool {
        match variant {
            Variant::B0 => true,
            Variant::BStar => self.gev.is_some(),
        }
    }
}

/// Output of a bootstrap run: per-replicate records plus enough echo
/// (config, scheme) to reproduce and to validate downstream inputs.
#[derive(Debug, Clone)]
pub struct FaRun {
    pub config: BootstrapConfig,
    pub scheme: SamplingScheme,
    /// Default threshold grid spanning the pooled maxima.
    pub gamma_grid: Vec<f64>,
    pub replicates: Vec<ReplicateRecord>,
}

impl FaRun {
    pub fn valid_replicates(&self) -> usize {
        self.replicates
            .iter()
            .filter(|r| r.is_valid(self.config.variant))
            .count()
    }

    /// Per-replicate FA estimates at `gamma` under the run's own variant.
    pub fn fa_values(&self, gamma: f64) -> Vec<f64> {
        self.fa_values_as(gamma, self.config.variant)
            .expect("run variant is always evaluable")
    }

    /// Per-replicate FA estimates at `gamma` under an explicit convention.
    /// Evaluating a plain run as `BStar` fails unless the extreme-value
    /// fits are present.
    pub fn fa_values_as(&self, gamma: f64, variant: Variant) -> Result<Vec<f64>> {
        self.replicates
            .iter()
            .filter(|r| r.is_valid(variant.max(self.config.variant)))
            .map(|r| match variant {
                Variant::B0 => Ok(sorted_exceedance(&r.maxima, gamma)),
                Variant::BStar => r
                    .gev
                    .map(|p| 1.0 - p.cdf(gamma))
                    .ok_or_else(|| {
                        Error::InvalidArgument(
                            "replicate has no extreme-value fit to evaluate".into(),
                        )
                    }),
            })
            .collect()
    }
}

impl Variant {
    fn max(self, other: Variant) -> Variant {
        if self == Variant::BStar || other == Variant::BStar {
            Variant::BStar
        } else {
            Variant::B0
        }
    }
}

/// Strict exceedance proportion `#{m_i > gamma} / len`.
pub fn empirical_pfa(maxima: &[f64], gamma: f64) -> f64 {
    assert!(!maxima.is_empty(), "empirical_pfa needs at least one maximum");
    let exceeding = maxima.iter().filter(|&&m| m > gamma).count();
    exceeding as f64 / maxima.len() as f64
}

/// Same quantity on a sorted slice, via binary search.
fn sorted_exceedance(sorted: &[f64], gamma: f64) -> f64 {
    let below_or_equal = sorted.partition_point(|&m| m <= gamma);
    (sorted.len() - below_or_equal) as f64 / sorted.len() as f64
}

/// Run the bootstrap calibration on a genuine training set.
///
/// Deterministic given the config (including the master seed); outer
/// replicates execute in parallel with order-independent results. Fit
/// failures abort with replicate/draw provenance; in the extreme-value
/// variant a failed per-replicate fit only invalidates that replicate,
/// and the run aborts when more than 5% of replicates are invalid.
pub fn run_b0(train: &[TimeSeries], cfg: &BootstrapConfig) -> Result<FaRun> {
    cfg.validate()?;
    if train.len() != cfg.train_size {
        return Err(Error::InvalidArgument(format!(
            "config says train_size={} but {} training series were provided",
            cfg.train_size,
            train.len()
        )));
    }
    let scheme = shared_scheme(train)?;
    let first_stage = armodel::fit(train, &cfg.order)?;
    let plan = NudftPlan::new(Arc::clone(&scheme), Arc::clone(&cfg.grid));

    let outcomes: Vec<Result<ReplicateRecord>> = (0..cfg.n_replicates)
        .into_par_iter()
        .map(|i| run_replicate(i, &first_stage, &plan, &scheme, cfg))
        .collect();
    let mut replicates = Vec::with_capacity(cfg.n_replicates);
    for outcome in outcomes {
        replicates.push(outcome?);
    }

    if cfg.variant == Variant::BStar {
        fit_replicate_laws(&mut replicates)?;
    }

    let gamma_grid = default_gamma_grid(&replicates);
    Ok(FaRun {
        config: cfg.clone(),
        scheme: scheme.as_ref().clone(),
        gamma_grid,
        replicates,
    })
}

fn run_replicate(
    index: usize,
    first_stage: &ArModel,
    plan: &NudftPlan,
    scheme: &Arc<SamplingScheme>,
    cfg: &BootstrapConfig,
) -> Result<ReplicateRecord> {
    let mut fake_rng = rng::stream(cfg.master_seed, &[tag::FAKE_TRAIN, index as u64]);
    let fake: Vec<TimeSeries> = (0..cfg.train_size)
        .map(|_| first_stage.simulate(scheme, &mut fake_rng))
        .collect();
    let second_stage =
        armodel::fit(&fake, &cfg.order).map_err(|e| e.in_replicate(index))?;

    let k = cfg.grid.len();
    let inv_l = 1.0 / cfg.train_size as f64;
    let mut maxima = Vec::with_capacity(cfg.n_maxima);
    for draw in 0..cfg.n_maxima {
        let mut draw_rng = rng::stream(
            cfg.master_seed,
            &[tag::INNER, index as u64, draw as u64],
        );
        let numerator = second_stage.simulate(scheme, &mut draw_rng);
        let num_power = plan.power(numerator.values());
        let mut den_power = vec![0.0; k];
        for _ in 0..cfg.train_size {
            let series = second_stage.simulate(scheme, &mut draw_rng);
            let p = plan.power(series.values());
            for (acc, v) in den_power.iter_mut().zip(&p) {
                *acc += v;
            }
        }
        for acc in &mut den_power {
            *acc *= inv_l;
        }
        let m = max_ratio(&num_power, &den_power).map_err(|e| e.in_draw(index, draw))?;
        maxima.push(m);
    }
    maxima.sort_by(f64::total_cmp);
    Ok(ReplicateRecord {
        maxima,
        gev: None,
        gev_report: None,
    })
}

/// Attach extreme-value fits to each replicate, enforcing the invalid
/// budget. Failed fits leave the replicate marked invalid.
fn fit_replicate_laws(replicates: &mut [ReplicateRecord]) -> Result<()> {
    replicates.par_iter_mut().for_each(|rec| {
        if let Ok((params, report)) = gev::fit(&rec.maxima) {
            rec.gev = Some(params);
            rec.gev_report = Some(report);
        }
    });
    let failed = replicates.iter().filter(|r| r.gev.is_none()).count();
    let total = replicates.len();
    if failed as f64 > INVALID_REPLICATE_BUDGET * total as f64 {
        return Err(Error::TooManyInvalidReplicates { failed, total });
    }
    Ok(())
}

fn default_gamma_grid(replicates: &[ReplicateRecord]) -> Vec<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for r in replicates {
        if let (Some(&first), Some(&last)) = (r.maxima.first(), r.maxima.last()) {
            lo = lo.min(first);
            hi = hi.max(last);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Vec::new();
    }
    if lo == hi {
        return vec![lo];
    }
    let step = (hi - lo) / (GAMMA_GRID_LEN - 1) as f64;
    (0..GAMMA_GRID_LEN).map(|i| lo + step * i as f64).collect()
}

/// Distribution of the per-replicate FA estimates at one threshold.
#[derive(Debug, Clone, Serialize)]
pub struct FaSummary {
    pub values: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    /// Gaussian-approximation 95% interval, clipped to [0, 1].
    pub ci95: (f64, f64),
}

/// Evaluate every replicate's FA curve at `gamma` and summarize.
pub fn fa_distribution(run: &FaRun, gamma: f64) -> FaSummary {
    let values = run.fa_values(gamma);
    let (mean, std) = mean_std(&values);
    let ci95 = (
        (mean - 1.96 * std).clamp(0.0, 1.0),
        (mean + 1.96 * std).clamp(0.0, 1.0),
    );
    FaSummary {
        values,
        mean,
        std,
        ci95,
    }
}

/// Per-replicate detection thresholds for a target FA rate.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdSummary {
    pub thresholds: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub ci95: (f64, f64),
}

/// Invert each replicate's FA curve at `target_pfa`.
///
/// Plain replicates use the order statistic of rank `ceil(b (1 - target))`
/// (one-indexed, the higher-order-statistic convention); extreme-value
/// replicates invert the fitted law. The plain route needs
/// `n_maxima * target_pfa >= 1` to resolve the tail.
pub fn threshold_for(run: &FaRun, target_pfa: f64) -> Result<ThresholdSummary> {
    if !(target_pfa > 0.0 && target_pfa < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target false-alarm rate must lie in (0,1), got {target_pfa}"
        )));
    }
    let thresholds: Vec<f64> = match run.config.variant {
        Variant::B0 => {
            let b = run.config.n_maxima;
            if (b as f64) * target_pfa < 1.0 {
                let required = (1.0 / target_pfa).ceil() as usize;
                return Err(Error::InvalidArgument(format!(
                    "target {target_pfa} needs at least {required} maxima per replicate, run has {b}"
                )));
            }
            run.replicates
                .iter()
                .map(|r| {
                    let rank = ((b as f64) * (1.0 - target_pfa)).ceil().max(1.0) as usize;
                    r.maxima[rank - 1]
                })
                .collect()
        }
        Variant::BStar => run
            .replicates
            .iter()
            .filter(|r| r.is_valid(Variant::BStar))
            .map(|r| r.gev.expect("valid replicate").upper_quantile(target_pfa))
            .collect::<Result<_>>()?,
    };
    let (mean, std) = mean_std(&thresholds);
    Ok(ThresholdSummary {
        thresholds,
        mean,
        std,
        ci95: (mean - 1.96 * std, mean + 1.96 * std),
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Ground-truth maxima of the standardized statistic under a known model:
/// each draw simulates one fresh numerator series and a fresh training set
/// of `train_size` denominators. The empirical exceedance of the returned
/// sorted vector is the oracle FA curve.
pub fn mc_oracle(
    model: &ArModel,
    scheme: &Arc<SamplingScheme>,
    grid: &Arc<FrequencyGrid>,
    train_size: usize,
    n_draws: usize,
    seed: u64,
) -> Vec<f64> {
    let plan = NudftPlan::new(Arc::clone(scheme), Arc::clone(grid));
    let k = grid.len();
    let inv_l = 1.0 / train_size as f64;
    let mut maxima: Vec<f64> = (0..n_draws)
        .into_par_iter()
        .map(|draw| {
            let mut r = rng::stream(seed, &[tag::ORACLE, draw as u64]);
            let numerator = model.simulate(scheme, &mut r);
            let num_power = plan.power(numerator.values());
            let mut den_power = vec![0.0; k];
            for _ in 0..train_size {
                let series = model.simulate(scheme, &mut r);
                let p = plan.power(series.values());
                for (acc, v) in den_power.iter_mut().zip(&p) {
                    *acc += v;
                }
            }
            for acc in &mut den_power {
                *acc *= inv_l;
            }
            max_ratio(&num_power, &den_power).expect("model periodograms are positive")
        })
        .collect();
    maxima.sort_by(f64::total_cmp);
    maxima
}

/// Ground truth for the permutation baseline's statistic: maxima of the
/// variance-normalized periodogram `max_k P(x)/var(x)` under a known model.
pub fn baseline_oracle(
    model: &ArModel,
    scheme: &Arc<SamplingScheme>,
    grid: &Arc<FrequencyGrid>,
    n_draws: usize,
    seed: u64,
) -> Vec<f64> {
    let plan = NudftPlan::new(Arc::clone(scheme), Arc::clone(grid));
    let mut maxima: Vec<f64> = (0..n_draws)
        .into_par_iter()
        .map(|draw| {
            let mut r = rng::stream(seed, &[tag::BASELINE, 1, draw as u64]);
            let series = model.simulate(scheme, &mut r);
            let var = sample_variance(series.values());
            let power = plan.power(series.values());
            power.iter().fold(f64::NEG_INFINITY, |m, &p| m.max(p / var))
        })
        .collect();
    maxima.sort_by(f64::total_cmp);
    maxima
}

/// Permutation-baseline maxima for one observed series: each resample
/// shuffles the observed values over the same instants and records the
/// maximum of the periodogram divided by the sample variance of the data.
///
/// This recipe deliberately ignores noise correlation; it is the comparator
/// the calibrated bootstrap is judged against.
pub fn permutation_baseline(
    x_obs: &TimeSeries,
    grid: &Arc<FrequencyGrid>,
    n_perm: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n_perm < 1 {
        return Err(Error::InvalidArgument("n_perm must be >= 1".into()));
    }
    let var = sample_variance(x_obs.values());
    if var <= 0.0 || !var.is_finite() {
        return Err(Error::DegenerateVariance);
    }
    let plan = NudftPlan::new(Arc::clone(x_obs.scheme()), Arc::clone(grid));
    let mut maxima: Vec<f64> = (0..n_perm)
        .into_par_iter()
        .map(|p| {
            let mut r = rng::stream(seed, &[tag::BASELINE, 0, p as u64]);
            let mut values = x_obs.values().to_vec();
            values.shuffle(&mut r);
            let power = plan.power(&values);
            power.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x / var))
        })
        .collect();
    maxima.sort_by(f64::total_cmp);
    Ok(maxima)
}

/// Standardized ordinates at selected grid frequencies under a known model,
/// one value per draw per frequency. Used to check the claimed marginal
/// law of the standardized periodogram on even sampling.
pub fn standardized_ordinate_samples(
    model: &ArModel,
    scheme: &Arc<SamplingScheme>,
    grid: &FrequencyGrid,
    freq_indices: &[usize],
    train_size: usize,
    n_draws: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let frequencies: Vec<f64> = freq_indices
        .iter()
        .map(|&i| {
            grid.frequencies().get(i).copied().ok_or_else(|| {
                Error::InvalidArgument(format!("frequency index {i} outside the grid"))
            })
        })
        .collect::<Result<_>>()?;
    let sub_grid = Arc::new(FrequencyGrid::new(frequencies)?);
    let plan = NudftPlan::new(Arc::clone(scheme), Arc::clone(&sub_grid));
    let inv_l = 1.0 / train_size as f64;
    let per_draw: Vec<Vec<f64>> = (0..n_draws)
        .into_par_iter()
        .map(|draw| {
            let mut r = rng::stream(seed, &[tag::MARGINAL, draw as u64]);
            let numerator = model.simulate(scheme, &mut r);
            let num_power = plan.power(numerator.values());
            let mut den_power = vec![0.0; sub_grid.len()];
            for _ in 0..train_size {
                let series = model.simulate(scheme, &mut r);
                let p = plan.power(series.values());
                for (acc, v) in den_power.iter_mut().zip(&p) {
                    *acc += v;
                }
            }
            num_power
                .iter()
                .zip(&den_power)
                .map(|(n, d)| n / (d * inv_l))
                .collect()
        })
        .collect();
    let mut by_frequency = vec![Vec::with_capacity(n_draws); freq_indices.len()];
    for draw in per_draw {
        for (k, v) in draw.into_iter().enumerate() {
            by_frequency[k].push(v);
        }
    }
    Ok(by_frequency)
}

fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::make_uneven;
    use approx::assert_relative_eq;

    fn small_setup() -> (Vec<TimeSeries>, BootstrapConfig) {
        let scheme = Arc::new(
            make_uneven(128, 40, &mut rng::stream(2, &[tag::SIMULATE])).unwrap(),
        );
        let model = ArModel::new(vec![-0.5], 1.0).unwrap();
        let train: Vec<TimeSeries> = (0..8u64)
            .map(|l| model.simulate(&scheme, &mut rng::stream(100, &[tag::SIMULATE, l])))
            .collect();
        let grid = Arc::new(FrequencyGrid::for_scheme(&scheme, 1).unwrap());
        let cfg = BootstrapConfig {
            train_size: 8,
            n_replicates: 4,
            n_maxima: 25,
            order: OrderSelectionConfig { max_order: 5 },
            grid,
            variant: Variant::B0,
            master_seed: 7,
        };
        (train, cfg)
    }

    #[test]
    fn empirical_pfa_counts_exceedances() {
        let m = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(empirical_pfa(&m, 2.5), 0.5);
        assert_eq!(empirical_pfa(&m, 0.5), 1.0);
        assert_eq!(empirical_pfa(&m, 4.0), 0.0);
        assert_eq!(empirical_pfa(&m, 9.0), 0.0);
        // Sorted fast path agrees.
        assert_eq!(sorted_exceedance(&m, 2.5), 0.5);
        assert_eq!(sorted_exceedance(&m, 4.0), 0.0);
    }

    #[test]
    fn minimal_run_produces_one_finite_maximum() {
        let (train, mut cfg) = small_setup();
        cfg.n_replicates = 1;
        cfg.n_maxima = 1;
        let run = run_b0(&train, &cfg).unwrap();
        assert_eq!(run.replicates.len(), 1);
        assert_eq!(run.replicates[0].maxima.len(), 1);
        assert!(run.replicates[0].maxima[0].is_finite());
        assert!(run.replicates[0].maxima[0] > 0.0);
        let summary = fa_distribution(&run, run.replicates[0].maxima[0] - 1e-9);
        assert_eq!(summary.std, 0.0);
        assert_eq!(summary.ci95.0, summary.ci95.1);
    }

    #[test]
    fn runs_are_bit_reproducible() {
        let (train, cfg) = small_setup();
        let a = run_b0(&train, &cfg).unwrap();
        let b = run_b0(&train, &cfg).unwrap();
        assert_eq!(a.replicates, b.replicates);
        assert_eq!(a.gamma_grid, b.gamma_grid);
    }

    #[test]
    fn fa_curves_are_monotone_and_bounded() {
        let (train, mut cfg) = small_setup();
        cfg.variant = Variant::BStar;
        let run = run_b0(&train, &cfg).unwrap();
        for variant in [Variant::B0, Variant::BStar] {
            let mut prev: Option<Vec<f64>> = None;
            for &gamma in &run.gamma_grid {
                let values = run.fa_values_as(gamma, variant).unwrap();
                for &v in &values {
                    assert!((0.0..=1.0).contains(&v));
                }
                if let Some(p) = prev {
                    for (now, before) in values.iter().zip(&p) {
                        assert!(now <= before, "FA curve increased with gamma");
                    }
                }
                prev = Some(values);
            }
        }
    }

    #[test]
    fn config_rejects_small_maxima_count_for_gev() {
        let (_, mut cfg) = small_setup();
        cfg.variant = Variant::BStar;
        cfg.n_maxima = 10;
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn mismatched_train_size_is_rejected() {
        let (train, mut cfg) = small_setup();
        cfg.train_size = 5;
        assert!(run_b0(&train, &cfg).is_err());
    }

    #[test]
    fn threshold_order_statistic_convention() {
        let maxima: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        let (_, cfg) = small_setup();
        let run = FaRun {
            config: BootstrapConfig {
                n_maxima: 100,
                n_replicates: 1,
                ..cfg.clone()
            },
            scheme: SamplingScheme::even(1.0, 4).unwrap(),
            gamma_grid: Vec::new(),
            replicates: vec![ReplicateRecord {
                maxima,
                gev: None,
                gev_report: None,
            }],
        };
        let t = threshold_for(&run, 0.05).unwrap();
        assert_eq!(t.thresholds, vec![95.0]);
        // Too small a target for b: names the required count.
        let err = threshold_for(&run, 0.005).unwrap_err();
        assert!(err.to_string().contains("200"), "{err}");
    }

    #[test]
    fn threshold_gumbel_closed_form() {
        let (_, cfg) = small_setup();
        let gumbel = GevParams::new(0.0, 1.0, 0.0).unwrap();
        let run = FaRun {
            config: BootstrapConfig {
                variant: Variant::BStar,
                ..cfg.clone()
            },
            scheme: SamplingScheme::even(1.0, 4).unwrap(),
            gamma_grid: Vec::new(),
            replicates: vec![ReplicateRecord {
                maxima: vec![0.0; 25],
                gev: Some(gumbel),
                gev_report: None,
            }],
        };
        let target = 1.0 - (-1.0_f64).exp();
        let t = threshold_for(&run, target).unwrap();
        assert_relative_eq!(t.thresholds[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn invalid_replicate_budget_is_enforced() {
        // 20 replicates: one degenerate record is within the 5% budget,
        // two are not.
        let good: Vec<f64> = (0..30).map(|i| 1.0 + 0.37 * (i as f64 * 0.918).sin()).collect();
        let make = |n_bad: usize| -> Vec<ReplicateRecord> {
            (0..20)
                .map(|i| ReplicateRecord {
                    maxima: if i < n_bad {
                        vec![2.0; 30]
                    } else {
                        good.clone()
                    },
                    gev: None,
                    gev_report: None,
                })
                .collect()
        };
        let mut one_bad = make(1);
        fit_replicate_laws(&mut one_bad).unwrap();
        assert_eq!(one_bad.iter().filter(|r| r.gev.is_none()).count(), 1);

        let mut two_bad = make(2);
        assert!(matches!(
            fit_replicate_laws(&mut two_bad),
            Err(Error::TooManyInvalidReplicates { failed: 2, total: 20 })
        ));
    }

    #[test]
    fn oracle_draw_is_finite_and_positive() {
        let scheme = Arc::new(SamplingScheme::even(1.0, 32).unwrap());
        let grid = Arc::new(FrequencyGrid::for_scheme(&scheme, 1).unwrap());
        let model = ArModel::white(1.0).unwrap();
        let maxima = mc_oracle(&model, &scheme, &grid, 5, 1, 3);
        assert_eq!(maxima.len(), 1);
        assert!(maxima[0].is_finite() && maxima[0] > 0.0);
    }

    #[test]
    fn permutation_baseline_rejects_constant_series() {
        let scheme = Arc::new(SamplingScheme::even(1.0, 16).unwrap());
        let x = TimeSeries::new(Arc::clone(&scheme), vec![3.0; 16]).unwrap();
        let grid = Arc::new(FrequencyGrid::for_scheme(&scheme, 1).unwrap());
        assert!(matches!(
            permutation_baseline(&x, &grid, 10, 1),
            Err(Error::DegenerateVariance)
        ));
    }

    #[test]
    fn forced_identical_replicates_have_zero_spread() {
        // Two replicates built from the same record: the FA distribution
        // at any threshold has zero standard deviation.
        let (_, cfg) = small_setup();
        let rec = ReplicateRecord {
            maxima: (0..25).map(|i| 1.0 + i as f64 * 0.1).collect(),
            gev: None,
            gev_report: None,
        };
        let run = FaRun {
            config: BootstrapConfig {
                n_maxima: 25,
                n_replicates: 2,
                ..cfg
            },
            scheme: SamplingScheme::even(1.0, 4).unwrap(),
            gamma_grid: Vec::new(),
            replicates: vec![rec.clone(), rec],
        };
        let summary = fa_distribution(&run, 2.0);
        assert_eq!(summary.std, 0.0);
        assert_eq!(summary.values[0], summary.values[1]);
    }
}
