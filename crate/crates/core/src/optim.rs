//! Minimal derivative-free simplex minimizer for the extreme-value fits.

/// Outcome of a simplex search.
#[derive(Debug, Clone)]
pub(crate) struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder-Mead with standard coefficients (reflect 1, expand 2, contract
/// 0.5, shrink 0.5). Converged when every coordinate of every vertex is
/// within `tol` of the best vertex, or `max_evals` is exhausted.
pub(crate) fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    steps: &[f64],
    tol: f64,
    max_evals: usize,
) -> SimplexResult {
    let dim = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], count: &mut usize| -> f64 {
        *count += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let fx0 = eval(x0, &mut evaluations);
    simplex.push((x0.to_vec(), fx0));
    for d in 0..dim {
        let mut x = x0.to_vec();
        x[d] += steps[d];
        let fx = eval(&x, &mut evaluations);
        simplex.push((x, fx));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0];
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
            .fold(0.0_f64, f64::max);
        if diameter < tol {
            return SimplexResult {
                x: simplex[0].0.clone(),
                fx: simplex[0].1,
                evaluations,
                converged: true,
            };
        }
        if evaluations >= max_evals {
            return SimplexResult {
                x: simplex[0].0.clone(),
                fx: simplex[0].1,
                evaluations,
                converged: false,
            };
        }

        let worst = simplex[dim].clone();
        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / dim as f64;
            }
        }
        let blend = |a: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + a * (c - w))
                .collect()
        };

        let reflected = blend(1.0);
        let f_reflected = eval(&reflected, &mut evaluations);
        if f_reflected < simplex[0].1 {
            let expanded = blend(2.0);
            let f_expanded = eval(&expanded, &mut evaluations);
            simplex[dim] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_reflected);
            continue;
        }
        let contracted = if f_reflected < worst.1 {
            blend(0.5)
        } else {
            blend(-0.5)
        };
        let f_contracted = eval(&contracted, &mut evaluations);
        if f_contracted < worst.1.min(f_reflected) {
            simplex[dim] = (contracted, f_contracted);
            continue;
        }
        // Shrink toward the best vertex.
        let best_x = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = vertex
                .0
                .iter()
                .zip(&best_x)
                .map(|(v, b)| b + 0.5 * (v - b))
                .collect();
            let fx = eval(&x, &mut evaluations);
            *vertex = (x, fx);
        }
    }
}
