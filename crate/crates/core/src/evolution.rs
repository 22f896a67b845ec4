//! Time evolution: exact propagators, the kinetic/potential split product,
//! its gate-level realization, trajectories and the separable 2D operator.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{diagonal_phase_circuit, iqft_circuit, qft_circuit, sample_counts, Circuit, ShotHistogram};
use crate::error::{Error, Result};
use crate::model::{hamiltonian, position_grid, potential_values, qft_matrix, HamiltonianSpec, Representation};
use crate::numkernel::{matexp_unitary, ComplexMatrix, StateVector};

/// Phases `θ_k = -t(½x_k² + λx_k⁴)` of the potential factor on the position grid.
pub fn potential_phase_diagonal(n: usize, lambda: f64, t: f64) -> Result<Vec<f64>> {
    Ok(potential_values(n, lambda)?.into_iter().map(|v| -t * v).collect())
}

fn phase_diagonal(phases: &[f64]) -> ComplexMatrix {
    let d: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
    ComplexMatrix::from_diagonal(&d)
}

/// Kinetic factor `F† e^{-it x²/2} F`.
pub fn kinetic_factor(n: usize, t: f64) -> Result<ComplexMatrix> {
    let f = qft_matrix(n);
    let d = phase_diagonal(&potential_phase_diagonal(n, 0.0, t)?);
    Ok(f.adjoint().matmul(&d).matmul(&f))
}

/// Potential factor `e^{-it(x²/2 + λx⁴)}`.
pub fn potential_factor(n: usize, lambda: f64, t: f64) -> Result<ComplexMatrix> {
    Ok(phase_diagonal(&potential_phase_diagonal(n, lambda, t)?))
}

/// First-order split propagator: kinetic factor times potential factor
/// (the potential acts first on a state).
pub fn split_evolution_operator(spec: &HamiltonianSpec, t: f64) -> Result<ComplexMatrix> {
    spec.require(Representation::Position)?;
    Ok(kinetic_factor(spec.dim, t)?.matmul(&potential_factor(spec.dim, spec.lambda, t)?))
}

/// `e^{-iHt}` for the Hamiltonian named by `spec`.
pub fn exact_evolution_operator(spec: &HamiltonianSpec, t: f64) -> Result<ComplexMatrix> {
    matexp_unitary(&hamiltonian(spec)?, t)
}

/// `‖U_split(t) - U_exact(t)‖_max`.
pub fn split_error(spec: &HamiltonianSpec, t: f64) -> Result<f64> {
    Ok(split_evolution_operator(spec, t)?.max_abs_diff(&exact_evolution_operator(spec, t)?))
}

/// Gate-level split propagator on `n` data qubits plus `n - 1` ancillas:
/// potential filters, then QFT, kinetic filters and inverse QFT.
///
/// The data-subspace unitary times `e^{i·global_phase}` equals
/// [`split_evolution_operator`].
pub fn evolution_circuit(spec: &HamiltonianSpec, t: f64) -> Result<Circuit> {
    spec.require(Representation::Position)?;
    let n = spec.n_qubits();
    let potential = diagonal_phase_circuit(&potential_phase_diagonal(spec.dim, spec.lambda, t)?, n)?;
    let kinetic = diagonal_phase_circuit(&potential_phase_diagonal(spec.dim, 0.0, t)?, n)?;

    let mut c = Circuit::with_ancillas(n, n - 1);
    c.append(&potential)?;
    c.append(&qft_circuit(n))?;
    c.append(&kinetic)?;
    c.append(&iqft_circuit(n))?;
    Ok(c)
}

/// Separable 2D propagator on an `N² × N²` register, x as the more
/// significant factor: `(K⊗I)(I⊗K)(V⊗I)(I⊗V)`.
pub fn evolution_operator_2d(spec: &HamiltonianSpec, t: f64) -> Result<ComplexMatrix> {
    spec.require(Representation::Position)?;
    let id = ComplexMatrix::identity(spec.dim);
    let k = kinetic_factor(spec.dim, t)?;
    let v = potential_factor(spec.dim, spec.lambda, t)?;
    Ok(k.kron(&id)
        .matmul(&id.kron(&k))
        .matmul(&v.kron(&id))
        .matmul(&id.kron(&v)))
}

/// `V(x_i, y_j) = ½(x_i² + y_j²) + λ(x_i⁴ + y_j⁴)` on the position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid {
    pub coords: Vec<f64>,
    /// `values[i][j]` at `(coords[i], coords[j])`.
    pub values: Vec<Vec<f64>>,
}

impl PotentialGrid {
    /// `(x, y, V)` rows, x outer.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.coords.iter().enumerate().flat_map(move |(i, &x)| {
            self.coords
                .iter()
                .enumerate()
                .map(move |(j, &y)| (x, y, self.values[i][j]))
        })
    }
}

pub fn potential_grid(n: usize, lambda: f64) -> Result<PotentialGrid> {
    let coords = position_grid(n)?;
    let axis = potential_values(n, lambda)?;
    let values = axis.iter().map(|vx| axis.iter().map(|vy| vx + vy).collect()).collect();
    Ok(PotentialGrid { coords, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EvolutionMethod {
    #[default]
    ExactExponential,
    SplitProduct,
    Circuit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Computational basis index.
    Basis(usize),
    /// Explicit amplitudes as `[re, im]` pairs; normalized on use.
    Amplitudes(Vec<[f64; 2]>),
}

impl InitialState {
    pub fn to_state(&self, dim: usize) -> Result<StateVector> {
        match self {
            InitialState::Basis(k) => StateVector::basis(dim, *k),
            InitialState::Amplitudes(a) => {
                if a.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: a.len(),
                    });
                }
                StateVector::from_amplitudes(a.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                    .normalized()
            }
        }
    }
}

/// Trajectory settings. Times are `t_j = j·t_max/steps` for `j = 0..=steps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    pub spec: HamiltonianSpec,
    pub t_max: f64,
    pub steps: usize,
    pub initial: InitialState,
    pub method: EvolutionMethod,
    /// Shots per time point; `None` disables sampling.
    pub shots: Option<u64>,
    pub seed: u64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            spec: HamiltonianSpec {
                dim: 8,
                lambda: 0.05,
                representation: Representation::Position,
            },
            t_max: 6.0 * std::f64::consts::PI,
            steps: 28,
            initial: InitialState::Basis(0),
            method: EvolutionMethod::ExactExponential,
            shots: Some(8192),
            seed: 0,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.steps == 0 {
            return Err(Error::InvalidParameter("steps must be at least 1".into()));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.shots == Some(0) {
            return Err(Error::InvalidParameter("shots must be at least 1 when sampling".into()));
        }
        if self.method != EvolutionMethod::ExactExponential && self.spec.representation != Representation::Position {
            return Err(Error::InvalidParameter(
                "split and circuit methods need the position representation".into(),
            ));
        }
        self.initial.to_state(self.spec.dim).map(|_| ())
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps)
            .map(|j| j as f64 * self.t_max / self.steps as f64)
            .collect()
    }
}

/// One time point of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub time: f64,
    pub probabilities: Vec<f64>,
    pub sampled_counts: Option<ShotHistogram>,
    /// `|⟨ψ(0)|ψ(t)⟩|²`.
    pub autocorrelation: f64,
    /// `⟨ψ(t)|H|ψ(t)⟩`.
    pub energy: f64,
}

/// Evolved state `ψ(t)` under the configured method.
pub fn evolve_state(cfg: &EvolutionConfig, psi0: &StateVector, t: f64) -> Result<StateVector> {
    match cfg.method {
        EvolutionMethod::ExactExponential => exact_evolution_operator(&cfg.spec, t)?.apply(psi0),
        EvolutionMethod::SplitProduct => split_evolution_operator(&cfg.spec, t)?.apply(psi0),
        EvolutionMethod::Circuit => {
            let c = evolution_circuit(&cfg.spec, t)?;
            let mut full = c.embed_data_state(psi0)?;
            c.apply_in_place(full.amplitudes_mut());
            let (data, _leak) = c.project_data(&full);
            let phase = Complex64::from_polar(1.0, c.global_phase());
            Ok(StateVector::from_amplitudes(
                data.into_amplitudes().into_iter().map(|a| a * phase).collect(),
            ))
        }
    }
}

/// Runs the trajectory. Time points are computed in parallel and returned in
/// time order; sampling at step `j` uses seed `seed ^ j`.
pub fn evolve_trajectory(cfg: &EvolutionConfig) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate()?;
    let h = hamiltonian(&cfg.spec)?;
    let psi0 = cfg.initial.to_state(cfg.spec.dim)?;
    cfg.times()
        .into_par_iter()
        .enumerate()
        .map(|(step, time)| {
            let psi = evolve_state(cfg, &psi0, time)?;
            let probabilities = psi.probabilities();
            let sampled_counts = cfg
                .shots
                .map(|shots| sample_counts(&psi, shots, cfg.seed ^ step as u64))
                .transpose()?;
            let autocorrelation = psi0.inner(&psi).norm_sqr().min(1.0);
            let energy = psi.inner(&h.apply(&psi)?).re;
            Ok(TrajectoryRecord {
                step,
                time,
                probabilities,
                sampled_counts,
                autocorrelation,
                energy,
            })
        })
        .collect()
}
