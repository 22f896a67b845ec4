//! TwoLocal-style ansatz: rotation layers separated by CZ entanglers.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::numkernel::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rotation {
    Ry,
    Rz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    /// CZ on neighbouring pairs `(q, q+1)`.
    CzLinear,
    /// CZ on every pair `q < r`.
    #[default]
    CzFull,
}

/// Circuit layout: `reps + 1` rotation layers with an entangler between
/// consecutive layers. Within a layer, each rotation kind is applied to every
/// qubit before the next kind; parameters are consumed in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnsatzSpec {
    pub n_qubits: usize,
    pub rotations: Vec<Rotation>,
    pub entangler: Entangler,
    pub reps: usize,
}

impl Default for AnsatzSpec {
    fn default() -> Self {
        Self::new(3)
    }
}

impl AnsatzSpec {
    /// Default layout (RY then RZ, full CZ, three repetitions) on `n_qubits`.
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            rotations: vec![Rotation::Ry, Rotation::Rz],
            entangler: Entangler::CzFull,
            reps: 3,
        }
    }

    pub fn num_parameters(&self) -> usize {
        self.n_qubits * self.rotations.len() * (self.reps + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > 16 {
            return Err(Error::InvalidParameter(format!(
                "ansatz needs 1..=16 qubits, got {}",
                self.n_qubits
            )));
        }
        if self.rotations.is_empty() {
            return Err(Error::InvalidParameter("ansatz needs at least one rotation kind".into()));
        }
        Ok(())
    }

    fn entangling_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n_qubits;
        match self.entangler {
            Entangler::CzLinear => (0..n.saturating_sub(1)).map(|q| (q, q + 1)).collect(),
            Entangler::CzFull => (0..n).flat_map(|q| (q + 1..n).map(move |r| (q, r))).collect(),
        }
    }
}

/// The ansatz circuit for `params`.
pub fn ansatz_circuit(spec: &AnsatzSpec, params: &[f64]) -> Result<Circuit> {
    spec.validate()?;
    if params.len() != spec.num_parameters() {
        return Err(Error::DimensionMismatch {
            expected: spec.num_parameters(),
            found: params.len(),
        });
    }
    if let Some(bad) = params.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidParameter(format!("parameter {bad} is not finite")));
    }
    let pairs = spec.entangling_pairs();
    let mut c = Circuit::new(spec.n_qubits);
    let mut theta = params.iter().copied();
    for layer in 0..=spec.reps {
        if layer > 0 {
            for &(q, r) in &pairs {
                c.push(Gate::cz(q, r))?;
            }
        }
        for rot in &spec.rotations {
            for q in 0..spec.n_qubits {
                let t = theta.next().expect("parameter count checked");
                c.push(match rot {
                    Rotation::Ry => Gate::ry(q, t),
                    Rotation::Rz => Gate::rz(q, t),
                })?;
            }
        }
    }
    Ok(c)
}

/// `A(θ)|0…0⟩`.
pub fn ansatz_state(spec: &AnsatzSpec, params: &[f64]) -> Result<StateVector> {
    let c = ansatz_circuit(spec, params)?;
    let mut s = StateVector::zero_state(spec.n_qubits);
    c.apply_in_place(s.amplitudes_mut());
    Ok(s)
}
