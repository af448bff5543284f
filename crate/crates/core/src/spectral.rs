//! Periodograms on arbitrary sampling schemes.
//!
//! The plain periodogram of a series is
//!
//! ```text
//! P(nu) = (1/N) | sum_j x(t_j) exp(-i 2 pi nu t_j) |^2
//! ```
//!
//! evaluated by direct summation (the honest baseline on uneven grids at
//! these sizes). Averaging L noise-only periodograms estimates the noise
//! PSD, and the pointwise ratio of an observation periodogram to that
//! average is the standardized periodogram whose maximum is the detection
//! statistic.
//!
//! The complex exponentials depend only on (scheme, grid); [`NudftPlan`]
//! precomputes them once so repeated transforms inside a bootstrap reduce
//! to matrix-vector products. Summation order is fixed (ascending sample
//! index) so results are bit-reproducible.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sampling::{shared_scheme, SamplingScheme, TimeSeries};

/// Strictly increasing positive trial frequencies, in cycles per time unit.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FrequencyGrid {
    frequencies: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(frequencies: Vec<f64>) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::InvalidArgument("empty frequency grid".into()));
        }
        if frequencies[0] <= 0.0 || !frequencies.iter().all(|f| f.is_finite()) {
            return Err(Error::InvalidArgument(
                "frequencies must be positive and finite".into(),
            ));
        }
        if !frequencies.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "frequencies must be strictly increasing".into(),
            ));
        }
        Ok(Self { frequencies })
    }

    /// Default grid for a scheme: `nu_k = k / (n_grid * delta_t * oversample)`
    /// for `k = 1..=floor(n_grid * oversample / 2)`.
    ///
    /// DC is excluded (it carries the mean, not periodicity) and the grid
    /// stops at the underlying-grid Nyquist `1/(2 delta_t)`.
    pub fn for_scheme(scheme: &SamplingScheme, oversample: usize) -> Result<Self> {
        if oversample < 1 {
            return Err(Error::InvalidArgument("oversample must be >= 1".into()));
        }
        let span = scheme.n_grid() as f64 * scheme.delta_t() * oversample as f64;
        let k_max = scheme.n_grid() * oversample / 2;
        Self::new((1..=k_max).map(|k| k as f64 / span).collect())
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }
}

/// Which estimator a [`Periodogram`] holds. Averaged and standardized
/// flavors record the training-set size of the (denominator) average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Flavor {
    Plain,
    Averaged { train_size: usize },
    Standardized { train_size: usize },
}

/// Nonnegative ordinates on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    grid: Arc<FrequencyGrid>,
    ordinates: Vec<f64>,
    flavor: Flavor,
}

impl Periodogram {
    pub fn new(grid: Arc<FrequencyGrid>, ordinates: Vec<f64>, flavor: Flavor) -> Result<Self> {
        if ordinates.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} ordinates on a {}-point grid",
                ordinates.len(),
                grid.len()
            )));
        }
        if !ordinates.iter().all(|o| o.is_finite() && *o >= 0.0) {
            return Err(Error::InvalidArgument(
                "ordinates must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            grid,
            ordinates,
            flavor,
        })
    }

    pub(crate) fn new_unchecked(
        grid: Arc<FrequencyGrid>,
        ordinates: Vec<f64>,
        flavor: Flavor,
    ) -> Self {
        Self {
            grid,
            ordinates,
            flavor,
        }
    }

    pub fn grid(&self) -> &Arc<FrequencyGrid> {
        &self.grid
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
}

/// Precomputed exponentials for one (scheme, grid) pair, row-major per
/// frequency. Read-only after construction; shared freely across workers.
#[derive(Debug, Clone)]
pub struct NudftPlan {
    scheme: Arc<SamplingScheme>,
    grid: Arc<FrequencyGrid>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl NudftPlan {
    pub fn new(scheme: Arc<SamplingScheme>, grid: Arc<FrequencyGrid>) -> Self {
        let times = scheme.times();
        let n = times.len();
        let k = grid.len();
        let mut cos = Vec::with_capacity(k * n);
        let mut sin = Vec::with_capacity(k * n);
        for &nu in grid.frequencies() {
            for &t in &times {
                let angle = std::f64::consts::TAU * nu * t;
                cos.push(angle.cos());
                sin.push(angle.sin());
            }
        }
        Self {
            scheme,
            grid,
            cos,
            sin,
        }
    }

    pub fn scheme(&self) -> &Arc<SamplingScheme> {
        &self.scheme
    }

    pub fn grid(&self) -> &Arc<FrequencyGrid> {
        &self.grid
    }

    /// Raw power ordinates `(re^2 + im^2) / N` for one value vector.
    pub fn power(&self, values: &[f64]) -> Vec<f64> {
        let n = self.scheme.num_samples();
        assert_eq!(values.len(), n, "value vector does not match the plan");
        let inv_n = 1.0 / n as f64;
        let k = self.grid.len();
        let mut out = Vec::with_capacity(k);
        for row in 0..k {
            let cos_row = &self.cos[row * n..(row + 1) * n];
            let sin_row = &self.sin[row * n..(row + 1) * n];
            let mut re = 0.0;
            let mut im = 0.0;
            for j in 0..n {
                re += values[j] * cos_row[j];
                im += values[j] * sin_row[j];
            }
            out.push((re * re + im * im) * inv_n);
        }
        out
    }

    /// Plain periodogram of a series sampled on this plan's scheme.
    pub fn periodogram(&self, series: &TimeSeries) -> Result<Periodogram> {
        if !Arc::ptr_eq(series.scheme(), &self.scheme)
            && series.scheme().as_ref() != self.scheme.as_ref()
        {
            return Err(Error::MixedSchemes { index: 0 });
        }
        Ok(Periodogram::new_unchecked(
            Arc::clone(&self.grid),
            self.power(series.values()),
            Flavor::Plain,
        ))
    }
}

/// Plain periodogram of one series (builds a throwaway plan).
pub fn periodogram(series: &TimeSeries, grid: &Arc<FrequencyGrid>) -> Periodogram {
    let plan = NudftPlan::new(Arc::clone(series.scheme()), Arc::clone(grid));
    Periodogram::new_unchecked(
        Arc::clone(grid),
        plan.power(series.values()),
        Flavor::Plain,
    )
}

/// Pointwise mean of the plain periodograms of `train`, all sampled on one
/// shared scheme.
pub fn averaged_periodogram(
    train: &[TimeSeries],
    grid: &Arc<FrequencyGrid>,
) -> Result<Periodogram> {
    let scheme = shared_scheme(train)?;
    let plan = NudftPlan::new(scheme, Arc::clone(grid));
    let mut acc = vec![0.0; grid.len()];
    for series in train {
        let p = plan.power(series.values());
        for (a, v) in acc.iter_mut().zip(&p) {
            *a += v;
        }
    }
    let inv_l = 1.0 / train.len() as f64;
    for a in &mut acc {
        *a *= inv_l;
    }
    Ok(Periodogram::new_unchecked(
        Arc::clone(grid),
        acc,
        Flavor::Averaged {
            train_size: train.len(),
        },
    ))
}

/// Pointwise ratio of a plain periodogram to an averaged one on the same
/// grid. A zero denominator ordinate signals a degenerate training average.
pub fn standardize(num: &Periodogram, den: &Periodogram) -> Result<Periodogram> {
    let train_size = match den.flavor() {
        Flavor::Averaged { train_size } => train_size,
        other => {
            return Err(Error::InvalidArgument(format!(
                "denominator must be an averaged periodogram, got {other:?}"
            )))
        }
    };
    if num.grid().as_ref() != den.grid().as_ref() {
        return Err(Error::InvalidArgument(
            "numerator and denominator are on different frequency grids".into(),
        ));
    }
    if let Some(index) = den.ordinates().iter().position(|&d| d == 0.0) {
        return Err(Error::DegenerateDenominator { index });
    }
    let ordinates = num
        .ordinates()
        .iter()
        .zip(den.ordinates())
        .map(|(n, d)| n / d)
        .collect();
    Ok(Periodogram::new_unchecked(
        Arc::clone(num.grid()),
        ordinates,
        Flavor::Standardized { train_size },
    ))
}

/// Value and location of the maximum ordinate. Ties resolve to the smallest
/// frequency index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxStat {
    pub value: f64,
    pub index: usize,
    pub frequency: f64,
}

pub fn max_stat(p: &Periodogram) -> MaxStat {
    let mut index = 0;
    let mut value = p.ordinates()[0];
    for (k, &o) in p.ordinates().iter().enumerate().skip(1) {
        if o > value {
            value = o;
            index = k;
        }
    }
    MaxStat {
        value,
        index,
        frequency: p.grid().frequencies()[index],
    }
}

/// Max of `num[k]/den[k]` without materializing the ratio vector; the hot
/// path of the bootstrap inner loop. Exact same arithmetic as
/// `max_stat(standardize(..))` on the ordinates.
pub(crate) fn max_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for (k, (&n, &d)) in num.iter().zip(den).enumerate() {
        if d == 0.0 {
            return Err(Error::DegenerateDenominator { index: k });
        }
        let r = n / d;
        if r > best {
            best = r;
        }
    }
    Ok(best)
}
