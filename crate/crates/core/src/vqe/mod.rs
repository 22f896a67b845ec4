//! Variational eigensolver with deflation for excited states.
//!
//! Energies are Pauli-sum expectation values on the noiseless statevector.
//! Level `k` of [`vqd_spectrum`] minimizes
//! `⟨H⟩ + Σ_{j<k} β_j |⟨0|A(θ_j)† A(θ)|0⟩|²`, the overlap being evaluated by
//! running the inverse of an earlier level's circuit and reading the
//! return-to-zero probability.

mod ansatz;
mod optimizer;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{sample_counts, Circuit, Gate};
use crate::error::{Error, Result};
use crate::model::{pauli_sum_matrix, PauliTerm};
use crate::numkernel::{eig_hermitian, ComplexMatrix, EigenSystem, StateVector};

pub use ansatz::{ansatz_circuit, ansatz_state, AnsatzSpec, Entangler, Rotation};
pub use optimizer::{minimize, Minimum, OptimizerConfig, OptimizerMethod};

/// Eigenvalues closer than this are treated as one eigenspace when scoring fidelity.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

fn check_terms(terms: &[PauliTerm], n_qubits: usize) -> Result<()> {
    match terms.iter().find(|t| t.string.n_qubits() != n_qubits) {
        Some(t) => Err(Error::DimensionMismatch {
            expected: n_qubits,
            found: t.string.n_qubits(),
        }),
        None => Ok(()),
    }
}

/// `Σ c_P ⟨ψ|P|ψ⟩`.
pub fn expectation(terms: &[PauliTerm], state: &StateVector) -> Result<f64> {
    let n = state.n_qubits()?;
    check_terms(terms, n)?;
    let amps = state.amplitudes();
    let mut total = 0.0;
    for term in terms {
        let act = term.string.action();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in amps.iter().enumerate() {
            acc += amps[k ^ act.x_mask].conj() * act.phase(k) * a;
        }
        total += term.coefficient * acc.re;
    }
    Ok(total)
}

/// Shot-based estimate of [`expectation`]: each non-identity term is measured
/// in its own rotated basis with `shots` samples and seed `seed ^ term_index`.
pub fn expectation_sampled(terms: &[PauliTerm], state: &StateVector, shots: u64, seed: u64) -> Result<f64> {
    let n = state.n_qubits()?;
    check_terms(terms, n)?;
    let mut total = 0.0;
    for (i, term) in terms.iter().enumerate() {
        let support = term.string.x_mask() | term.string.z_mask();
        if support == 0 {
            total += term.coefficient;
            continue;
        }
        let mut c = Circuit::new(n);
        for q in 0..n {
            match term.string.op(q) {
                crate::model::Pauli::X => c.push(Gate::h(q))?,
                crate::model::Pauli::Y => {
                    c.push(Gate::phase(q, -PI / 2.0))?;
                    c.push(Gate::h(q))?;
                }
                _ => {}
            }
        }
        let mut rotated = state.clone();
        c.apply_in_place(rotated.amplitudes_mut());
        let hist = sample_counts(&rotated, shots, seed ^ i as u64)?;
        let signed: i64 = hist
            .dense_counts()
            .iter()
            .enumerate()
            .map(|(k, &cnt)| {
                if (k & support).count_ones() % 2 == 0 {
                    cnt as i64
                } else {
                    -(cnt as i64)
                }
            })
            .sum();
        total += term.coefficient * signed as f64 / shots as f64;
    }
    Ok(total)
}

/// `|⟨a|b⟩|²`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.inner(b).norm_sqr().clamp(0.0, 1.0))
}

/// `|⟨0|A(θ_a)† A(θ_b)|0⟩|²` by running `A(θ_b)` then the inverse of `A(θ_a)`.
pub fn compute_uncompute_overlap(spec: &AnsatzSpec, params_a: &[f64], params_b: &[f64]) -> Result<f64> {
    let inv = ansatz_circuit(spec, params_a)?.inverse();
    let mut s = ansatz_state(spec, params_b)?;
    inv.apply_in_place(s.amplitudes_mut());
    Ok(s.amplitudes()[0].norm_sqr())
}

/// Gershgorin estimate of `λ_max - λ_min`.
pub fn gershgorin_spread(h: &ComplexMatrix) -> f64 {
    let n = h.rows();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| h[(i, j)].norm()).sum();
        lo = lo.min(h[(i, i)].re - radius);
        hi = hi.max(h[(i, i)].re + radius);
    }
    hi - lo
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VQEResult {
    /// Unpenalized `⟨H⟩` at the returned parameters.
    pub energy: f64,
    pub parameters: Vec<f64>,
    /// Objective evaluations used by the selected run.
    pub iterations: usize,
    /// Weight of the state in the matching exact eigenspace.
    pub fidelity_vs_exact: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VQDConfig {
    pub levels: usize,
    /// Penalty weight for each earlier level; `None` uses twice the
    /// Gershgorin spread for every level.
    pub betas: Option<Vec<f64>>,
    pub optimizer: OptimizerConfig,
    /// Random initializations per level; the lowest objective wins.
    pub restarts: usize,
}

impl Default for VQDConfig {
    fn default() -> Self {
        Self {
            levels: 8,
            betas: None,
            optimizer: OptimizerConfig::default(),
            restarts: 5,
        }
    }
}

struct Problem {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    eig: EigenSystem,
    spread: f64,
}

impl Problem {
    fn new(terms: &[PauliTerm], ansatz: &AnsatzSpec) -> Result<Self> {
        ansatz.validate()?;
        check_terms(terms, ansatz.n_qubits)?;
        let h = pauli_sum_matrix(terms, ansatz.n_qubits)?;
        Ok(Self {
            n_qubits: ansatz.n_qubits,
            terms: terms.to_vec(),
            eig: eig_hermitian(&h)?,
            spread: gershgorin_spread(&h),
        })
    }

    fn energy(&self, state: &StateVector) -> f64 {
        expectation(&self.terms, state).expect("dimensions checked")
    }
}

fn initial_parameters(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| PI - 2.0 * PI * rng.gen::<f64>()).collect()
}

struct Run {
    params: Vec<f64>,
    objective: f64,
    evals: usize,
    converged: bool,
}

/// Best of `restarts` minimizations of `energy + penalties`, run in parallel.
fn best_run(
    problem: &Problem,
    ansatz: &AnsatzSpec,
    opt: &OptimizerConfig,
    restarts: usize,
    level: usize,
    prior: &[(Circuit, f64)],
) -> Result<Run> {
    let runs: Vec<Result<Run>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let seed = opt.seed ^ ((level as u64) << 32) ^ r as u64;
            let run_cfg = OptimizerConfig { seed, ..opt.clone() };
            let x0 = initial_parameters(ansatz.num_parameters(), seed);
            let objective = |theta: &[f64]| {
                let Ok(c) = ansatz_circuit(ansatz, theta) else {
                    return f64::INFINITY;
                };
                let mut s = StateVector::zero_state(problem.n_qubits);
                c.apply_in_place(s.amplitudes_mut());
                let mut value = problem.energy(&s);
                for (inverse, beta) in prior {
                    let mut back = s.clone();
                    inverse.apply_in_place(back.amplitudes_mut());
                    value += beta * back.amplitudes()[0].norm_sqr();
                }
                value
            };
            let m = minimize(objective, &x0, &run_cfg)?;
            Ok(Run {
                params: m.x,
                objective: m.value,
                evals: m.evals,
                converged: m.converged,
            })
        })
        .collect();
    let mut best: Option<Run> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().map_or(true, |b| run.objective < b.objective) {
            best = Some(run);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

fn restarts_ok(restarts: usize) -> Result<()> {
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    Ok(())
}

/// Ground-state search from one seeded initialization.
pub fn optimize_ground(terms: &[PauliTerm], ansatz: &AnsatzSpec, opt: &OptimizerConfig) -> Result<VQEResult> {
    opt.validate()?;
    let problem = Problem::new(terms, ansatz)?;
    let run = best_run(&problem, ansatz, opt, 1, 0, &[])?;
    let state = ansatz_state(ansatz, &run.params)?;
    Ok(VQEResult {
        energy: problem.energy(&state),
        fidelity_vs_exact: problem.eig.eigenspace_weight(0, &state, DEGENERACY_TOLERANCE),
        parameters: run.params,
        iterations: run.evals,
        converged: run.converged,
    })
}

/// The `levels` lowest states by successive deflation, sorted by energy.
pub fn vqd_spectrum(terms: &[PauliTerm], ansatz: &AnsatzSpec, cfg: &VQDConfig) -> Result<Vec<VQEResult>> {
    cfg.optimizer.validate()?;
    restarts_ok(cfg.restarts)?;
    let problem = Problem::new(terms, ansatz)?;
    let dim = 1usize << problem.n_qubits;
    if cfg.levels == 0 || cfg.levels > dim {
        return Err(Error::InvalidParameter(format!(
            "levels must be in 1..={dim}, got {}",
            cfg.levels
        )));
    }
    let betas = match &cfg.betas {
        Some(b) => {
            if b.len() + 1 < cfg.levels {
                return Err(Error::InvalidParameter(format!(
                    "{} levels need {} penalty weights, got {}",
                    cfg.levels,
                    cfg.levels - 1,
                    b.len()
                )));
            }
            if let Some(bad) = b.iter().find(|&&beta| !(beta > problem.spread) || !beta.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "penalty weight {bad} does not exceed the spectral spread estimate {}",
                    problem.spread
                )));
            }
            b.clone()
        }
        None => vec![2.0 * problem.spread; cfg.levels.saturating_sub(1)],
    };

    let mut prior: Vec<(Circuit, f64)> = Vec::with_capacity(cfg.levels);
    let mut found = Vec::with_capacity(cfg.levels);
    for level in 0..cfg.levels {
        let run = best_run(&problem, ansatz, &cfg.optimizer, cfg.restarts, level, &prior)?;
        let state = ansatz_state(ansatz, &run.params)?;
        let energy = problem.energy(&state);
        if level + 1 < cfg.levels {
            prior.push((ansatz_circuit(ansatz, &run.params)?.inverse(), betas[level]));
        }
        found.push((energy, state, run));
    }

    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(found
        .into_iter()
        .enumerate()
        .map(|(k, (energy, state, run))| VQEResult {
            energy,
            fidelity_vs_exact: problem.eig.eigenspace_weight(k, &state, DEGENERACY_TOLERANCE),
            parameters: run.params,
            iterations: run.evals,
            converged: run.converged,
        })
        .collect())
}
