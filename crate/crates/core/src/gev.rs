//! Generalized extreme-value laws for periodogram maxima.
//!
//! The cdf is
//!
//! ```text
//! G(m) = exp( -[1 + xi (m - mu) / sigma]_+ ^ (-1/xi) )
//! ```
//!
//! with location `mu`, scale `sigma > 0` and shape `xi`; for `xi -> 0` it
//! degenerates to the Gumbel form `exp(-exp(-(m - mu)/sigma))`. Shapes with
//! `|xi| < 1e-6` take the Gumbel branch to avoid cancellation.
//!
//! Fitting maximizes the log-likelihood with a derivative-free simplex
//! search over `(mu, log sigma, xi)` started at probability-weighted-moment
//! estimates; the GEV is treated as an empirical model for the maxima, to be
//! validated against the empirical cdf, not as a theorem about them.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::optim::nelder_mead;

/// Shape threshold below which the Gumbel limit branch is used.
const XI_EPS: f64 = 1e-6;
/// Simplex convergence: diameter in every coordinate.
const FIT_TOL: f64 = 1e-8;
/// Evaluation budget for one fit.
const FIT_MAX_EVALS: usize = 10_000;
/// Minimum sample size for a three-parameter fit.
const MIN_SAMPLE: usize = 20;

/// Location, scale and shape of a generalized extreme-value law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevParams {
    pub mu: f64,
    pub sigma: f64,
    pub xi: f64,
}

impl GevParams {
    pub fn new(mu: f64, sigma: f64, xi: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) || !mu.is_finite() || !xi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "invalid extreme-value parameters mu={mu}, sigma={sigma}, xi={xi}"
            )));
        }
        Ok(Self { mu, sigma, xi })
    }

    /// `1 + xi (m - mu) / sigma > 0`; always true on the Gumbel branch.
    pub fn in_support(&self, m: f64) -> bool {
        self.xi.abs() < XI_EPS || 1.0 + self.xi * (m - self.mu) / self.sigma > 0.0
    }

    /// Distribution function. Out-of-support points evaluate to 0 below a
    /// bounded-left support (`xi > 0`) and 1 above a bounded-right one
    /// (`xi < 0`).
    pub fn cdf(&self, m: f64) -> f64 {
        let z = (m - self.mu) / self.sigma;
        if self.xi.abs() < XI_EPS {
            (-(-z).exp()).exp()
        } else {
            let u = 1.0 + self.xi * z;
            if u <= 0.0 {
                if self.xi > 0.0 {
                    0.0
                } else {
                    1.0
                }
            } else {
                (-u.powf(-1.0 / self.xi)).exp()
            }
        }
    }

    /// Threshold whose upper-tail probability is `pfa`:
    /// `1 - cdf(upper_quantile(pfa)) = pfa`.
    pub fn upper_quantile(&self, pfa: f64) -> Result<f64> {
        if !(pfa > 0.0 && pfa < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "target false-alarm rate must lie in (0,1), got {pfa}"
            )));
        }
        let w = -(1.0 - pfa).ln();
        if self.xi.abs() < XI_EPS {
            Ok(self.mu - self.sigma * w.ln())
        } else {
            Ok(self.mu - self.sigma / self.xi * (1.0 - w.powf(-self.xi)))
        }
    }
}

/// Diagnostics attached to a maximum-likelihood fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevFitReport {
    pub log_likelihood: f64,
    pub evaluations: usize,
    pub converged: bool,
}

fn neg_log_likelihood(maxima: &[f64], mu: f64, sigma: f64, xi: f64) -> f64 {
    let log_sigma = sigma.ln();
    let mut nll = 0.0;
    if xi.abs() < XI_EPS {
        for &m in maxima {
            let z = (m - mu) / sigma;
            nll += log_sigma + z + (-z).exp();
        }
    } else {
        let inv_xi = 1.0 / xi;
        for &m in maxima {
            let u = 1.0 + xi * (m - mu) / sigma;
            if u <= 0.0 {
                return f64::INFINITY;
            }
            nll += log_sigma + (1.0 + inv_xi) * u.ln() + u.powf(-inv_xi);
        }
    }
    nll
}

/// Probability-weighted-moment starting point (Hosking's estimators).
/// Falls back to the Gumbel PWM solution when the shape estimate is
/// unusable.
fn pwm_initial(sorted: &[f64]) -> (f64, f64, f64) {
    let n = sorted.len() as f64;
    let mut b0 = 0.0;
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for (j, &x) in sorted.iter().enumerate() {
        let j = j as f64;
        b0 += x;
        b1 += x * j / (n - 1.0);
        b2 += x * j * (j - 1.0) / ((n - 1.0) * (n - 2.0));
    }
    b0 /= n;
    b1 /= n;
    b2 /= n;

    let gumbel = || {
        let sigma = (2.0 * b1 - b0) / std::f64::consts::LN_2;
        let mu = b0 - 0.577_215_664_901_532_9 * sigma;
        (mu, sigma.max(f64::MIN_POSITIVE), 0.0)
    };

    let denom = 3.0 * b2 - b0;
    if denom.abs() < 1e-300 {
        return gumbel();
    }
    let c = (2.0 * b1 - b0) / denom - std::f64::consts::LN_2 / 3.0_f64.ln();
    // Hosking's k equals -xi in the modern parameterization.
    let k = 7.8590 * c + 2.9554 * c * c;
    if k.abs() < 1e-8 {
        return gumbel();
    }
    let g = gamma(1.0 + k);
    if !g.is_finite() || g <= 0.0 {
        return gumbel();
    }
    let sigma = (2.0 * b1 - b0) * k / (g * (1.0 - 2.0_f64.powf(-k)));
    if !(sigma.is_finite() && sigma > 0.0) {
        return gumbel();
    }
    let mu = b0 + sigma * (g - 1.0) / k;
    (mu, sigma, (-k).clamp(-0.9, 0.9))
}

/// Maximum-likelihood GEV fit of a maxima sample.
///
/// Needs at least 20 points and a non-degenerate spread. Non-convergence of
/// the simplex search is an error carrying the fit report.
pub fn fit(maxima: &[f64]) -> Result<(GevParams, GevFitReport)> {
    if maxima.len() < MIN_SAMPLE {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLE} maxima for a three-parameter fit, got {}",
            maxima.len()
        )));
    }
    if let Some(bad) = maxima.iter().find(|m| !m.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "maxima must be finite, got {bad}"
        )));
    }
    let mut sorted = maxima.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted[0] == sorted[sorted.len() - 1] {
        return Err(Error::DegenerateSample(
            "all maxima identical: scale would collapse to zero".into(),
        ));
    }

    let (mu0, sigma0, xi0) = pwm_initial(&sorted);
    let x0 = [mu0, sigma0.ln(), xi0];
    let steps = [
        0.1 * sigma0,
        0.2,
        if xi0.abs() > 0.05 { 0.5 * xi0.abs() } else { 0.05 },
    ];
    let result = nelder_mead(
        |x| neg_log_likelihood(&sorted, x[0], x[1].exp(), x[2]),
        &x0,
        &steps,
        FIT_TOL,
        FIT_MAX_EVALS,
    );
    let report = GevFitReport {
        log_likelihood: -result.fx,
        evaluations: result.evaluations,
        converged: result.converged && result.fx.is_finite(),
    };
    if !report.converged {
        return Err(Error::GevNonConvergence { report });
    }
    let params = GevParams::new(result.x[0], result.x[1].exp(), result.x[2])?;
    Ok((params, report))
}
