//! Derivative-free Nelder–Mead minimization.

/// Reflection, expansion, contraction and shrink coefficients.
const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes `f` from `x0` with an axis-aligned initial simplex of edge `step`.
///
/// Stops when the spread of simplex values falls below `tol` or after
/// `max_iters` iterations.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], step: f64, max_iters: usize, tol: f64) -> Minimum {
    let dim = x0.len();
    if dim == 0 {
        return Minimum {
            x: Vec::new(),
            value: f(x0),
            iterations: 0,
        };
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut iterations = 0;

    while iterations < max_iters {
        iterations += 1;
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if (values[dim] - values[0]).abs() <= tol {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }
        let toward = |coef: f64, from: &[f64]| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, x)| c + coef * (x - c)).collect()
        };

        let reflected = toward(-ALPHA, &simplex[dim]);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = toward(-GAMMA, &simplex[dim]);
            let fe = f(&expanded);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        // outside contraction when the reflection helped at all
        let coef = if fr < values[dim] { -RHO } else { RHO };
        let contracted = toward(coef, &simplex[dim]);
        let fc = f(&contracted);
        if fc < values[dim].min(fr) {
            simplex[dim] = contracted;
            values[dim] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=dim {
            simplex[i] = best.iter().zip(&simplex[i]).map(|(b, x)| b + SIGMA * (x - b)).collect();
            values[i] = f(&simplex[i]);
        }
    }

    let best = (0..=dim).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
    }
}
