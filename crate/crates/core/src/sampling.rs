//! Regular and uneven time sampling on an underlying regular grid.
//!
//! Observation instants are constrained to integer multiples of a grid step
//! `delta_t`: an uneven scheme is a strictly increasing subset of grid
//! indices. This is what makes autoregressive simulation and fitting
//! well-defined on gappy data; arbitrary off-grid instants are rejected at
//! ingestion.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance (in units of `delta_t`) for snapping ingested times
/// onto the grid.
const GRID_TOLERANCE: f64 = 1e-6;

/// A set of observation instants `t_j = indices[j] * delta_t` on a regular
/// grid of `n_grid` steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingScheme {
    delta_t: f64,
    n_grid: usize,
    indices: Vec<usize>,
}

impl SamplingScheme {
    pub fn new(delta_t: f64, n_grid: usize, indices: Vec<usize>) -> Result<Self> {
        if !(delta_t.is_finite() && delta_t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "delta_t must be positive and finite, got {delta_t}"
            )));
        }
        if indices.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a scheme needs at least 2 observation instants, got {}",
                indices.len()
            )));
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "indices must be strictly increasing".into(),
            ));
        }
        if *indices.last().unwrap() >= n_grid {
            return Err(Error::InvalidArgument(format!(
                "index {} exceeds grid size {n_grid}",
                indices.last().unwrap()
            )));
        }
        Ok(Self {
            delta_t,
            n_grid,
            indices,
        })
    }

    /// Fully observed regular grid.
    pub fn even(delta_t: f64, n_grid: usize) -> Result<Self> {
        Self::new(delta_t, n_grid, (0..n_grid).collect())
    }

    /// True when every grid instant is observed.
    pub fn is_even(&self) -> bool {
        self.indices.len() == self.n_grid
    }

    /// Number of observed instants `N`.
    pub fn num_samples(&self) -> usize {
        self.indices.len()
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn n_grid(&self) -> usize {
        self.n_grid
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Observation instants `t_j` in time units.
    pub fn times(&self) -> Vec<f64> {
        self.indices
            .iter()
            .map(|&i| i as f64 * self.delta_t)
            .collect()
    }

    /// Same index set on a rescaled grid step.
    pub fn with_delta_t(&self, delta_t: f64) -> Result<Self> {
        Self::new(delta_t, self.n_grid, self.indices.clone())
    }
}

/// Uniform random `n_keep`-subset of a regular grid (unit step), sorted
/// ascending. Partial Fisher-Yates, so the result is a deterministic
/// function of the rng stream state.
pub fn make_uneven<R: Rng>(n_grid: usize, n_keep: usize, rng: &mut R) -> Result<SamplingScheme> {
    if n_keep < 2 || n_keep > n_grid {
        return Err(Error::InvalidArgument(format!(
            "n_keep must satisfy 2 <= n_keep <= n_grid, got n_keep={n_keep}, n_grid={n_grid}"
        )));
    }
    let mut pool: Vec<usize> = (0..n_grid).collect();
    for i in 0..n_keep {
        let j = rng.gen_range(i..n_grid);
        pool.swap(i, j);
    }
    let mut indices = pool[..n_keep].to_vec();
    indices.sort_unstable();
    SamplingScheme::new(1.0, n_grid, indices)
}

/// Snap strictly increasing physical times onto a `delta_t` grid.
///
/// Every `times[j] / delta_t` must be within `1e-6` of an integer; the grid
/// size is taken as the last index plus one.
pub fn validate_on_grid(times: &[f64], delta_t: f64) -> Result<SamplingScheme> {
    if !(delta_t.is_finite() && delta_t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta_t must be positive and finite, got {delta_t}"
        )));
    }
    let mut indices = Vec::with_capacity(times.len());
    for (j, &t) in times.iter().enumerate() {
        if j > 0 && t <= times[j - 1] {
            return Err(Error::NonMonotoneTimes { index: j });
        }
        let ratio = t / delta_t;
        let rounded = ratio.round();
        if (ratio - rounded).abs() > GRID_TOLERANCE || rounded < 0.0 {
            return Err(Error::NotOnGrid {
                index: j,
                time: t,
                delta_t,
            });
        }
        indices.push(rounded as usize);
    }
    let n_grid = indices.last().map(|&i| i + 1).unwrap_or(0);
    SamplingScheme::new(delta_t, n_grid, indices)
}

/// A real-valued series observed on a shared sampling scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    scheme: Arc<SamplingScheme>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(scheme: Arc<SamplingScheme>, values: Vec<f64>) -> Result<Self> {
        if values.len() != scheme.num_samples() {
            return Err(Error::InvalidArgument(format!(
                "series length {} does not match scheme with {} instants",
                values.len(),
                scheme.num_samples()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "series value at sample {j} is not finite"
            )));
        }
        Ok(Self { scheme, values })
    }

    pub fn scheme(&self) -> &Arc<SamplingScheme> {
        &self.scheme
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Shared scheme of a series list, or `MixedSchemes` naming the first
/// offender. Pointer-equal schemes short-circuit the comparison.
pub fn shared_scheme(series: &[TimeSeries]) -> Result<Arc<SamplingScheme>> {
    let first = series
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty series list".into()))?
        .scheme();
    for (index, s) in series.iter().enumerate().skip(1) {
        if !Arc::ptr_eq(s.scheme(), first) && s.scheme().as_ref() != first.as_ref() {
            return Err(Error::MixedSchemes { index });
        }
    }
    Ok(Arc::clone(first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn make_uneven_respects_bounds() {
        let mut r = rng::stream(7, &[rng::tag::SIMULATE]);
        let scheme = make_uneven(1024, 103, &mut r).unwrap();
        assert_eq!(scheme.num_samples(), 103);
        assert!(scheme.indices().iter().all(|&i| i < 1024));
        assert!(scheme.indices().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn make_uneven_full_subset_is_even() {
        let mut r = rng::stream(7, &[rng::tag::SIMULATE]);
        let scheme = make_uneven(8, 8, &mut r).unwrap();
        assert_eq!(scheme.indices(), (0..8).collect::<Vec<_>>().as_slice());
        assert!(scheme.is_even());
    }

    #[test]
    fn make_uneven_rejects_tiny_subset() {
        let mut r = rng::stream(7, &[rng::tag::SIMULATE]);
        assert!(matches!(
            make_uneven(16, 1, &mut r),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn make_uneven_is_reproducible() {
        let a = make_uneven(512, 60, &mut rng::stream(99, &[1])).unwrap();
        let b = make_uneven(512, 60, &mut rng::stream(99, &[1])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn validate_on_grid_integer_times() {
        let scheme = validate_on_grid(&[0.0, 1.0, 3.0, 4.0], 1.0).unwrap();
        assert_eq!(scheme.indices(), &[0, 1, 3, 4]);
        assert_eq!(scheme.n_grid(), 5);
    }

    #[test]
    fn validate_on_grid_fractional_step() {
        let scheme = validate_on_grid(&[0.0, 0.5, 1.0], 0.5).unwrap();
        assert_eq!(scheme.indices(), &[0, 1, 2]);
    }

    #[test]
    fn validate_on_grid_rejects_off_grid() {
        match validate_on_grid(&[0.0, 0.3], 0.5) {
            Err(Error::NotOnGrid { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected NotOnGrid, got {other:?}"),
        }
    }

    #[test]
    fn validate_on_grid_rejects_non_monotone() {
        assert!(matches!(
            validate_on_grid(&[0.0, 2.0, 1.0], 1.0),
            Err(Error::NonMonotoneTimes { index: 2 })
        ));
    }

    #[test]
    fn times_round_trip_through_validation() {
        let mut r = rng::stream(3, &[rng::tag::SIMULATE]);
        let scheme = make_uneven(256, 40, &mut r)
            .unwrap()
            .with_delta_t(0.25)
            .unwrap();
        let back = validate_on_grid(&scheme.times(), scheme.delta_t()).unwrap();
        assert_eq!(back.indices(), scheme.indices());
    }

    #[test]
    fn series_length_must_match_scheme() {
        let scheme = Arc::new(SamplingScheme::even(1.0, 4).unwrap());
        assert!(TimeSeries::new(Arc::clone(&scheme), vec![1.0, 2.0]).is_err());
        assert!(TimeSeries::new(scheme, vec![1.0, 2.0, f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn shared_scheme_flags_mismatch() {
        let a = Arc::new(SamplingScheme::even(1.0, 4).unwrap());
        let b = Arc::new(SamplingScheme::new(1.0, 4, vec![0, 1, 3]).unwrap());
        let s1 = TimeSeries::new(Arc::clone(&a), vec![0.0; 4]).unwrap();
        let s2 = TimeSeries::new(b, vec![0.0; 3]).unwrap();
        assert!(matches!(
            shared_scheme(&[s1, s2]),
            Err(Error::MixedSchemes { index: 1 })
        ));
    }
}
