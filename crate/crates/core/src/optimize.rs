//! Derivative-free local minimization (Nelder-Mead simplex).

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop once every vertex lies within this distance of the best one.
    pub x_tolerance: f64,
    /// Stop once the spread of function values over the simplex is this small.
    pub f_tolerance: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iterations: 200,
            x_tolerance: 1e-10,
            f_tolerance: 0.0,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimize `objective` from `start`. Non-finite values are treated as `+∞`.
pub fn nelder_mead<F>(objective: F, start: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = start.len();
    let eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        // stable sort keeps ties in vertex order
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let size = simplex[1..].iter().map(|v| dist(v, &simplex[0])).fold(0.0, f64::max);
        if size <= opts.x_tolerance || spread <= opts.f_tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect() };

        let reflected = along(REFLECT);
        let f_r = eval(&reflected);
        if f_r < values[0] {
            let expanded = along(EXPAND);
            let f_e = eval(&expanded);
            if f_e < f_r {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
        } else if f_r < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_r;
        } else {
            let (candidate, f_c) = if f_r < values[n] {
                let c = along(CONTRACT * REFLECT);
                let f = eval(&c);
                (c, f)
            } else {
                let c = along(-CONTRACT);
                let f = eval(&c);
                (c, f)
            };
            if f_c < values[n].min(f_r) {
                simplex[n] = candidate;
                values[n] = f_c;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    for (x, b) in simplex[i].iter_mut().zip(&best) {
                        *x = b + SHRINK * (*x - b);
                    }
                    values[i] = eval(&simplex[i]);
                }
            }
        }
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2);
        let opts = NelderMeadOptions {
            max_iterations: 1000,
            ..Default::default()
        };
        let m = nelder_mead(f, &[0.0, 0.0], &opts);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-8 && (m.x[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions {
            max_iterations: 5000,
            initial_step: 0.5,
            ..Default::default()
        };
        let m = nelder_mead(f, &[-1.2, 1.0], &opts);
        assert!(m.value < 1e-12, "{m:?}");
    }

    #[test]
    fn infeasible_region_is_avoided() {
        let f = |x: &[f64]| {
            if x[0] < 0.5 {
                f64::INFINITY
            } else {
                x[0] * x[0]
            }
        };
        let m = nelder_mead(f, &[2.0], &NelderMeadOptions::default());
        assert!(m.x[0] >= 0.5 && m.value <= 0.2501);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| x.iter().map(|v| v.sin().powi(2)).sum::<f64>();
        let a = nelder_mead(f, &[0.3, 0.7, -0.2], &NelderMeadOptions::default());
        let b = nelder_mead(f, &[0.3, 0.7, -0.2], &NelderMeadOptions::default());
        assert_eq!(a, b);
    }
}
