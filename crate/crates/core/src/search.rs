//! Derivative-free compass search over a convex domain given by a projection.

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evals: usize,
    /// Stop as soon as the objective drops to this value.
    pub target: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            min_step: 1e-10,
            max_evals: 2000,
            target: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Minimizes `f` by polling `x ± step·e_i`. The first improving poll is
/// taken and the step doubles; a full unsuccessful sweep halves it.
/// `project` maps a trial point back into the domain in place.
pub fn compass_search(
    mut f: impl FnMut(&[f64]) -> f64,
    project: impl Fn(&mut [f64]),
    x0: &[f64],
    opts: &SearchOptions,
) -> SearchResult {
    let mut x = x0.to_vec();
    project(&mut x);
    let mut value = f(&x);
    let mut evals = 1;
    let mut step = opts.initial_step;
    let dim = x.len();
    let mut trial = x.clone();
    while value > opts.target && step >= opts.min_step && evals < opts.max_evals {
        let mut improved = false;
        'poll: for i in 0..dim {
            for sign in [1.0, -1.0] {
                trial.copy_from_slice(&x);
                trial[i] += sign * step;
                project(&mut trial);
                if trial == x {
                    continue;
                }
                let v = f(&trial);
                evals += 1;
                if v < value {
                    x.copy_from_slice(&trial);
                    value = v;
                    improved = true;
                    break 'poll;
                }
                if evals >= opts.max_evals {
                    break 'poll;
                }
            }
        }
        if improved {
            step = (2.0 * step).min(opts.initial_step);
        } else {
            step *= 0.5;
        }
    }
    SearchResult { x, value, evals }
}

/// Radial projection onto the closed ball of the given radius centred at 0.
pub fn project_ball(x: &mut [f64], radius: f64) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > radius {
        let s = radius / norm;
        x.iter_mut().for_each(|v| *v *= s);
    }
}
