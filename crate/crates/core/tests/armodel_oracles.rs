//! Oracle cross-checks for the AR machinery: the theoretical autocovariance
//! from a direct Yule-Walker solve, and a direct linear-system route to the
//! fitted coefficients.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use pfacal::{armodel, make_uneven, rng, ArModel, FrequencyGrid, SamplingScheme, TimeSeries};

fn ar6() -> ArModel {
    ArModel::new(vec![0.7, 0.05, 0.0, 0.3, 0.0, -0.3], 1.0).unwrap()
}

/// Theoretical autocovariances gamma(0..=max_lag) of an AR model, from the
/// Yule-Walker linear system solved directly (independent of the
/// Levinson-Durbin path used by fitting).
fn yule_walker_autocovariance(model: &ArModel, max_lag: usize) -> Vec<f64> {
    let order = model.order();
    let c = model.coeffs();
    let n = order + 1;
    // Unknowns gamma(0..=order); equations:
    //   h = 0:    gamma(0) + sum_j c_j gamma(j)      = sigma2
    //   h = 1..o: gamma(h) + sum_j c_j gamma(|h-j|)  = 0
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[0] = model.innovation_variance();
    for h in 0..n {
        a[(h, h)] += 1.0;
        for (j, &cj) in c.iter().enumerate() {
            let lag = (h as isize - (j + 1) as isize).unsigned_abs();
            a[(h, lag)] += cj;
        }
    }
    let head = a.lu().solve(&rhs).expect("Yule-Walker system is regular");
    let mut gamma: Vec<f64> = head.iter().copied().collect();
    // Extend by the recursion gamma(h) = -sum_j c_j gamma(h-j).
    for h in n..=max_lag {
        let mut v = 0.0;
        for (j, &cj) in c.iter().enumerate() {
            v -= cj * gamma[h - (j + 1)];
        }
        gamma.push(v);
    }
    gamma.truncate(max_lag + 1);
    gamma
}

#[test]
fn simulated_lag1_autocorrelation_matches_yule_walker() {
    let model = ar6();
    let gamma = yule_walker_autocovariance(&model, 1);
    let theoretical = gamma[1] / gamma[0];

    let n = 100_000;
    let scheme = Arc::new(SamplingScheme::even(1.0, n).unwrap());
    let x = model.simulate(&scheme, &mut rng::stream(2024, &[rng::tag::SIMULATE]));
    let v = x.values();
    let mean = v.iter().sum::<f64>() / n as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for t in 0..n {
        den += (v[t] - mean).powi(2);
        if t + 1 < n {
            num += (v[t] - mean) * (v[t + 1] - mean);
        }
    }
    let empirical = num / den;
    assert!(
        (empirical - theoretical).abs() < 0.01,
        "lag-1 autocorrelation {empirical} vs theoretical {theoretical}"
    );
}

#[test]
fn psd_integrates_to_process_variance() {
    let model = ar6();
    let gamma0 = yule_walker_autocovariance(&model, 0)[0];
    // Symmetric trapezoid over (-1/2, 1/2] at unit step: S is even, so
    // 2 * trapz(0..1/2) on a fine grid.
    let m = 20_000;
    let mut integral = 0.0;
    for i in 0..m {
        let a = 0.5 * i as f64 / m as f64;
        let b = 0.5 * (i + 1) as f64 / m as f64;
        integral += 0.5 * (model.psd_at(a, 1.0) + model.psd_at(b, 1.0)) * (b - a);
    }
    integral *= 2.0;
    assert!(
        (integral - gamma0).abs() / gamma0 < 0.01,
        "PSD integral {integral} vs variance {gamma0}"
    );
}

#[test]
fn levinson_matches_direct_yule_walker_solve() {
    // Same slotted autocovariance, two solution routes: the library's
    // Levinson recursion against a direct Toeplitz solve.
    let scheme = Arc::new(
        make_uneven(256, 96, &mut rng::stream(5, &[1])).unwrap(),
    );
    let model = ar6();
    let train: Vec<TimeSeries> = (0..20u64)
        .map(|l| model.simulate(&scheme, &mut rng::stream(64, &[rng::tag::SIMULATE, l])))
        .collect();

    // Independent slotted estimate, written from scratch.
    let max_order = 4;
    let n_grid = scheme.n_grid();
    let mut sums = vec![0.0; max_order + 1];
    let mut counts = vec![0u64; max_order + 1];
    for series in &train {
        let mean = series.values().iter().sum::<f64>() / series.len() as f64;
        let mut slot = vec![None; n_grid];
        for (&idx, &v) in scheme.indices().iter().zip(series.values()) {
            slot[idx] = Some(v - mean);
        }
        for h in 0..=max_order {
            for t in 0..n_grid - h {
                if let (Some(a), Some(b)) = (slot[t], slot[t + h]) {
                    sums[h] += a * b;
                    counts[h] += 1;
                }
            }
        }
    }
    let gamma: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();

    // Direct solve of Toeplitz(gamma) phi = gamma(1..) gives the predictor;
    // model coefficients are the negated predictor weights.
    let t = DMatrix::from_fn(max_order, max_order, |i, j| gamma[i.abs_diff(j)]);
    let rhs = DVector::from_fn(max_order, |i, _| gamma[i + 1]);
    let phi = t.lu().solve(&rhs).expect("Toeplitz system is regular");
    let direct: Vec<f64> = phi.iter().map(|p| -p).collect();
    let mut sigma2 = gamma[0];
    for (j, &cj) in direct.iter().enumerate() {
        sigma2 += cj * gamma[j + 1];
    }

    let fitted = armodel::fit_fixed_order(&train, max_order).unwrap();
    for (a, b) in fitted.coeffs().iter().zip(&direct) {
        assert!(
            (a - b).abs() <= 1e-8 * b.abs().max(1.0),
            "coefficient {a} vs direct {b}"
        );
    }
    assert!(
        (fitted.innovation_variance() - sigma2).abs() <= 1e-8 * sigma2,
        "variance {} vs direct {sigma2}",
        fitted.innovation_variance()
    );
}

#[test]
fn fit_round_trip_recovers_psd_on_even_sampling() {
    let model = ar6();
    let scheme = Arc::new(SamplingScheme::even(1.0, 1024).unwrap());
    let train: Vec<TimeSeries> = (0..20u64)
        .map(|l| model.simulate(&scheme, &mut rng::stream(901, &[rng::tag::SIMULATE, l])))
        .collect();
    let fitted = armodel::fit(&train, &armodel::OrderSelectionConfig { max_order: 20 }).unwrap();
    let grid = FrequencyGrid::for_scheme(&scheme, 1).unwrap();
    let mut rel = 0.0;
    for &nu in grid.frequencies() {
        let truth = model.psd_at(nu, 1.0);
        rel += (fitted.psd_at(nu, 1.0) - truth).abs() / truth;
    }
    rel /= grid.len() as f64;
    assert!(rel < 0.10, "mean relative PSD error {rel}");
}

#[test]
fn order_selection_beats_chance_on_sparse_sampling() {
    // The sparse-scheme fit is noisy by nature; this only pins that the
    // pipeline completes and produces a usable stationary model there.
    let model = ar6();
    let scheme = Arc::new(make_uneven(1024, 103, &mut rng::stream(31, &[2])).unwrap());
    let train: Vec<TimeSeries> = (0..20u64)
        .map(|l| model.simulate(&scheme, &mut rng::stream(77, &[rng::tag::SIMULATE, l])))
        .collect();
    let (fitted, report) =
        armodel::fit_with_report(&train, &armodel::OrderSelectionConfig { max_order: 20 }).unwrap();
    assert!(fitted.innovation_variance() > 0.0);
    assert!(report.autocovariance_damping < 1.0);
    assert_eq!(report.criterion.len(), 21);
}
