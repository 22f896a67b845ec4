//! Derivative-free minimizers: Nelder–Mead with restarts, and SPSA.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerMethod {
    #[default]
    NelderMead,
    Spsa,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub method: OptimizerMethod,
    /// Objective evaluations allowed per minimization.
    pub max_evals: usize,
    /// Nelder–Mead: simplex value spread at which a run stops.
    /// SPSA: step length at which iteration stops.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: OptimizerMethod::NelderMead,
            max_evals: 60_000,
            tolerance: 1e-13,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_evals == 0 {
            return Err(Error::InvalidParameter("max_evals must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with the configured method.
pub fn minimize<F: FnMut(&[f64]) -> f64>(f: F, x0: &[f64], cfg: &OptimizerConfig) -> Result<Minimum> {
    cfg.validate()?;
    if x0.is_empty() {
        return Err(Error::InvalidParameter("cannot optimize zero parameters".into()));
    }
    Ok(match cfg.method {
        OptimizerMethod::NelderMead => nelder_mead(f, x0, cfg),
        OptimizerMethod::Spsa => spsa(f, x0, cfg),
    })
}

const INITIAL_STEP: f64 = 0.5;
const RESTART_STEP: f64 = 0.05;

/// Adaptive-coefficient Nelder–Mead. When a run's simplex collapses, a fresh
/// simplex is built around the best point; the search ends once a restart
/// fails to improve the value by more than the tolerance.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], cfg: &OptimizerConfig) -> Minimum {
    let mut evals = 0usize;
    let budget = cfg.max_evals;
    // Past the budget every trial point is rejected without evaluation.
    let mut eval = |x: &[f64], evals: &mut usize| {
        if *evals >= budget {
            return f64::INFINITY;
        }
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best_x = x0.to_vec();
    let mut best_v = eval(&best_x, &mut evals);
    let mut step = INITIAL_STEP;
    loop {
        let (x, v, collapsed) = nelder_mead_run(&mut eval, &best_x, best_v, step, cfg, &mut evals);
        let improvement = best_v - v;
        if v < best_v {
            best_x = x;
            best_v = v;
        }
        if !collapsed {
            return Minimum {
                x: best_x,
                value: best_v,
                evals,
                converged: false,
            };
        }
        if improvement <= cfg.tolerance && step == RESTART_STEP {
            return Minimum {
                x: best_x,
                value: best_v,
                evals,
                converged: true,
            };
        }
        step = RESTART_STEP;
    }
}

/// One simplex run. Returns the best vertex, its value and whether the run
/// stopped on the tolerance (rather than the evaluation budget).
fn nelder_mead_run<E: FnMut(&[f64], &mut usize) -> f64>(
    eval: &mut E,
    x0: &[f64],
    f0: f64,
    step: f64,
    cfg: &OptimizerConfig,
    evals: &mut usize,
) -> (Vec<f64>, f64, bool) {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        if *evals >= cfg.max_evals {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, evals);
        simplex.push((x, v));
    }
    if simplex.len() < n + 1 {
        let (x, v) = best_vertex(&simplex);
        return (x, v, false);
    }

    let point = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(w).map(|(ci, wi)| ci + t * (wi - ci)).collect()
    };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if spread <= cfg.tolerance {
            return (simplex[0].0.clone(), simplex[0].1, true);
        }
        if *evals >= cfg.max_evals {
            return (simplex[0].0.clone(), simplex[0].1, false);
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let worst = simplex[n].0.clone();
        let fw = simplex[n].1;
        let f_second = simplex[n - 1].1;
        let f_best = simplex[0].1;

        let xr = point(&centroid, &worst, -alpha);
        let fr = eval(&xr, evals);
        if fr < f_best {
            let xe = point(&centroid, &worst, -alpha * beta);
            let fe = eval(&xe, evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < fw {
            let xc = point(&centroid, &worst, -alpha * gamma);
            let fc = eval(&xc, evals);
            (xc, fc)
        } else {
            let xc = point(&centroid, &worst, gamma);
            let fc = eval(&xc, evals);
            (xc, fc)
        };
        if fc < fr.min(fw) {
            simplex[n] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = point(&x_best, &vertex.0, delta);
            let v = eval(&x, evals);
            *vertex = (x, v);
        }
    }
}

fn best_vertex(simplex: &[(Vec<f64>, f64)]) -> (Vec<f64>, f64) {
    simplex
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .cloned()
        .expect("simplex is non-empty")
}

/// Simultaneous-perturbation stochastic approximation with the standard gain
/// exponents 0.602 and 0.101. Returns the best point evaluated.
fn spsa<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], cfg: &OptimizerConfig) -> Minimum {
    let (a, c, big_a) = (0.2, 0.1, (cfg.max_evals as f64 / 30.0).max(1.0));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = x0.to_vec();
    let mut best_v = f(&x);
    let mut best_x = x.clone();
    let mut evals = 1usize;
    let mut converged = false;
    let mut k = 0usize;

    while evals + 3 <= cfg.max_evals {
        let ak = a / (k as f64 + 1.0 + big_a).powf(0.602);
        let ck = c / (k as f64 + 1.0).powf(0.101);
        let delta: Vec<f64> = x.iter().map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
        let plus: Vec<f64> = x.iter().zip(&delta).map(|(xi, d)| xi + ck * d).collect();
        let minus: Vec<f64> = x.iter().zip(&delta).map(|(xi, d)| xi - ck * d).collect();
        let g = (f(&plus) - f(&minus)) / (2.0 * ck);
        let mut step_sq = 0.0;
        for (xi, d) in x.iter_mut().zip(&delta) {
            let s = ak * g * d;
            *xi -= s;
            step_sq += s * s;
        }
        let v = f(&x);
        evals += 3;
        if v < best_v {
            best_v = v;
            best_x.clone_from(&x);
        }
        k += 1;
        if step_sq.sqrt() <= cfg.tolerance {
            converged = true;
            break;
        }
    }
    Minimum {
        x: best_x,
        value: best_v,
        evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(x: &[f64]) -> f64 {
        x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.3).powi(2)).sum()
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let m = minimize(quadratic, &[2.0, -1.0, 0.5, 1.5], &OptimizerConfig::default()).unwrap();
        assert!(m.converged);
        assert!(m.value < 1e-12, "{}", m.value);
        assert!(m.x.iter().all(|v| (v - 0.3).abs() < 1e-5));
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = minimize(rosen, &[-1.2, 1.0], &OptimizerConfig::default()).unwrap();
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn budget_exhaustion_is_not_convergence() {
        let cfg = OptimizerConfig { max_evals: 20, ..Default::default() };
        let m = minimize(quadratic, &[2.0, -1.0, 0.5, 1.5], &cfg).unwrap();
        assert!(!m.converged);
        assert!(m.evals <= 20);
    }

    #[test]
    fn spsa_decreases_objective() {
        let cfg = OptimizerConfig {
            method: OptimizerMethod::Spsa,
            max_evals: 6000,
            tolerance: 1e-10,
            seed: 3,
        };
        let x0 = [1.0, -1.0, 0.8];
        let m = minimize(quadratic, &x0, &cfg).unwrap();
        assert!(m.value < 1e-3 * quadratic(&x0), "{}", m.value);
        assert_eq!(m, minimize(quadratic, &x0, &cfg).unwrap());
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            OptimizerConfig { max_evals: 0, ..Default::default() },
            OptimizerConfig { tolerance: 0.0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(minimize(quadratic, &[1.0], &cfg).is_err());
        }
        assert!(minimize(quadratic, &[], &OptimizerConfig::default()).is_err());
    }
}
