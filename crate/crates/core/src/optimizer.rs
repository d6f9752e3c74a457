//! Derivative-free Nelder-Mead simplex minimization of the variational
//! parameter energy. Deterministic: no internal randomness, and the returned
//! minimum is never worse than the starting point.

use crate::error::{Error, Result};

/// Nelder-Mead coefficients and stopping rules.
#[derive(Debug, Clone)]
pub struct SimplexConfig {
    /// Reflection coefficient, > 0.
    pub reflection: f64,
    /// Expansion coefficient, > 1.
    pub expansion: f64,
    /// Contraction coefficient in (0, 1).
    pub contraction: f64,
    /// Shrink coefficient in (0, 1).
    pub shrink: f64,
    /// Evaluation budget; 0 means `200 * dimension`.
    pub max_evals: usize,
    /// Converged when the simplex f-spread drops below this.
    pub f_tolerance: f64,
    /// The stop additionally requires the simplex diameter below this; a
    /// symmetric simplex straddling a minimum otherwise stops on f-spread
    /// alone. 0 disables the diameter requirement.
    pub x_tolerance: f64,
    /// Per-coordinate offset of the initial simplex (parameters are angles).
    pub initial_step: f64,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            max_evals: 0,
            f_tolerance: 1e-8,
            x_tolerance: 1e-6,
            initial_step: 0.1,
        }
    }
}

impl SimplexConfig {
    fn validate(&self) -> Result<()> {
        let ok = self.reflection > 0.0
            && self.expansion > 1.0
            && self.contraction > 0.0
            && self.contraction < 1.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.initial_step > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("simplex coefficients out of range".into()))
        }
    }
}

/// Outcome of a minimization.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    /// Best point found.
    pub x: Vec<f64>,
    /// Objective value at `x`; never exceeds the value at the start point.
    pub f: f64,
    /// Number of objective evaluations spent.
    pub evals: usize,
    /// True iff the simplex f-spread fell below `f_tolerance` in budget.
    pub converged: bool,
}

/// Minimizes `f` from `x0` with the Nelder-Mead simplex method.
///
/// Returns an error if the objective produces a non-finite value.
pub fn minimize(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    cfg: &SimplexConfig,
) -> Result<MinimizeResult> {
    cfg.validate()?;
    let m = x0.len();
    if m == 0 {
        return Err(Error::InvalidParameter("empty parameter vector".into()));
    }
    let max_evals = if cfg.max_evals == 0 { 200 * m } else { cfg.max_evals };

    let mut evals = 0usize;
    let mut best_x = x0.to_vec();
    let mut best_f = f64::INFINITY;
    let mut eval = |x: &[f64], evals: &mut usize, best_x: &mut Vec<f64>, best_f: &mut f64| -> Result<f64> {
        let v = f(x);
        *evals += 1;
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective { point: x.to_vec() });
        }
        if v < *best_f {
            *best_f = v;
            best_x.clear();
            best_x.extend_from_slice(x);
        }
        Ok(v)
    };

    // Initial simplex: x0 plus one offset vertex per coordinate.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(m + 1);
    let f0 = eval(x0, &mut evals, &mut best_x, &mut best_f)?;
    simplex.push((x0.to_vec(), f0));
    for i in 0..m {
        let mut x = x0.to_vec();
        x[i] += cfg.initial_step;
        let v = eval(&x, &mut evals, &mut best_x, &mut best_f)?;
        simplex.push((x, v));
    }

    let mut converged = false;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
        let spread = simplex[m].1 - simplex[0].1;
        if spread < cfg.f_tolerance {
            let diameter = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0f64, f64::max)
                })
                .fold(0.0f64, f64::max);
            if cfg.x_tolerance <= 0.0 || diameter < cfg.x_tolerance {
                converged = true;
                break;
            }
        }

        // Centroid of all vertices except the worst.
        let mut centroid = vec![0.0; m];
        for (x, _) in &simplex[..m] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / m as f64;
            }
        }
        let worst = simplex[m].clone();
        let point = |scale: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + scale * (c - w))
                .collect()
        };

        let xr = point(cfg.reflection);
        let fr = eval(&xr, &mut evals, &mut best_x, &mut best_f)?;
        if fr < simplex[0].1 {
            // Try to expand along the reflection direction.
            let xe: Vec<f64> = centroid
                .iter()
                .zip(&xr)
                .map(|(c, r)| c + cfg.expansion * (r - c))
                .collect();
            let fe = eval(&xe, &mut evals, &mut best_x, &mut best_f)?;
            simplex[m] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[m - 1].1 {
            simplex[m] = (xr, fr);
            continue;
        }
        // Contraction: outside when the reflection improved on the worst
        // vertex, inside otherwise.
        let (xc, reference) = if fr < worst.1 {
            let xc: Vec<f64> = centroid
                .iter()
                .zip(&xr)
                .map(|(c, r)| c + cfg.contraction * (r - c))
                .collect();
            (xc, fr)
        } else {
            let xc: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c - cfg.contraction * (c - w))
                .collect();
            (xc, worst.1)
        };
        let fc = eval(&xc, &mut evals, &mut best_x, &mut best_f)?;
        if fc <= reference {
            simplex[m] = (xc, fc);
            continue;
        }
        // Shrink toward the best vertex.
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            for (xi, ai) in vertex.0.iter_mut().zip(&anchor) {
                *xi = ai + cfg.shrink * (*xi - ai);
            }
            let value = eval(&vertex.0, &mut evals, &mut best_x, &mut best_f)?;
            vertex.1 = value;
            if evals >= max_evals {
                break;
            }
        }
    }

    Ok(MinimizeResult { x: best_x, f: best_f, evals, converged })
}
