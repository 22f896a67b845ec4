//! Gate-level circuits and deterministic statevector execution.
//!
//! Qubit `q` is bit `q` of a basis index, so `|q_{n-1} … q_1 q_0⟩` is basis
//! state `Σ q_k 2^k` and the label `"001"` names index 1. Ancillas, when a
//! circuit has them, occupy the highest qubit indices; the data subspace
//! with all ancillas in `|0⟩` is then the leading block of the unitary.

mod gate;
mod library;
mod sampling;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{ComplexMatrix, StateVector};

pub use gate::{Control, Gate, GateKind, GateRecord};
pub use library::{
    basis_label, diagonal_phase_circuit, filter_circuit, filter_circuit_for_index, iqft_circuit,
    qft_circuit, DIAGONAL_PHASE_EPS,
};
pub use sampling::{sample_counts, total_variation, ShotHistogram};

/// Largest register [`circuit_to_unitary`] will expand.
pub const MAX_UNITARY_WIDTH: usize = 8;

/// An ordered gate list over `width` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRecord")]
pub struct Circuit {
    width: usize,
    /// Number of high-index qubits reserved as ancillas.
    ancillas: usize,
    /// Phase `φ` such that the intended operator is `e^{iφ}·U_gates`.
    global_phase: f64,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            ancillas: 0,
            global_phase: 0.0,
            gates: Vec::new(),
        }
    }

    pub fn with_ancillas(data_qubits: usize, ancillas: usize) -> Self {
        Self {
            width: data_qubits + ancillas,
            ancillas,
            global_phase: 0.0,
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data_qubits(&self) -> usize {
        self.width - self.ancillas
    }

    /// Ancilla qubit indices.
    pub fn ancilla_range(&self) -> std::ops::Range<usize> {
        self.data_qubits()..self.width
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn set_global_phase(&mut self, phase: f64) {
        self.global_phase = phase;
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_qubit() >= self.width {
            return Err(Error::InvalidGate(format!(
                "{} touches qubit {} outside a {}-qubit register",
                gate.kind().name(),
                gate.max_qubit(),
                self.width
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`'s gates after this circuit's and adds its global phase.
    ///
    /// `other` may be narrower; its qubit indices are used unchanged.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.width > self.width {
            return Err(Error::DimensionMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        for g in &other.gates {
            self.push(g.clone())?;
        }
        self.global_phase += other.global_phase;
        Ok(())
    }

    /// Adjoint circuit: reversed order, each gate inverted, global phase negated.
    pub fn inverse(&self) -> Self {
        Self {
            width: self.width,
            ancillas: self.ancillas,
            global_phase: -self.global_phase,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// Applies the gates (not the recorded global phase) in place.
    pub fn apply_in_place(&self, amps: &mut [Complex64]) {
        debug_assert_eq!(amps.len(), 1 << self.width);
        for g in &self.gates {
            g.apply(amps);
        }
    }

    /// Data-register state embedded with ancillas in `|0⟩`.
    pub fn embed_data_state(&self, data: &StateVector) -> Result<StateVector> {
        let dim = 1usize << self.data_qubits();
        if data.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: data.dim(),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.width];
        amps[..dim].copy_from_slice(data.amplitudes());
        Ok(StateVector::from_amplitudes(amps))
    }

    /// Splits a full-register state into the ancilla-zero data block and the
    /// probability weight found outside it.
    pub fn project_data(&self, full: &StateVector) -> (StateVector, f64) {
        let dim = 1usize << self.data_qubits();
        let amps = full.amplitudes();
        let leak = amps[dim..].iter().map(|a| a.norm_sqr()).sum();
        (StateVector::from_amplitudes(amps[..dim].to_vec()), leak)
    }

    /// Unitary restricted to the data subspace with ancillas in `|0⟩`,
    /// including the recorded global phase.
    pub fn data_unitary(&self) -> Result<ComplexMatrix> {
        let u = circuit_to_unitary(self)?;
        let phase = Complex64::from_polar(1.0, self.global_phase);
        Ok(u.leading_block(1 << self.data_qubits()).scale(phase))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }
}

#[derive(Deserialize)]
struct CircuitRecord {
    width: usize,
    ancillas: usize,
    global_phase: f64,
    gates: Vec<Gate>,
}

impl TryFrom<CircuitRecord> for Circuit {
    type Error = Error;

    fn try_from(r: CircuitRecord) -> Result<Self> {
        if r.ancillas > r.width {
            return Err(Error::InvalidParameter(format!(
                "{} ancillas exceed register width {}",
                r.ancillas, r.width
            )));
        }
        let mut c = Circuit {
            width: r.width,
            ancillas: r.ancillas,
            global_phase: r.global_phase,
            gates: Vec::with_capacity(r.gates.len()),
        };
        for g in r.gates {
            c.push(g)?;
        }
        Ok(c)
    }
}

/// Runs `c` on `input`, returning the output statevector.
///
/// The recorded global phase is not applied; it is unobservable.
pub fn run_circuit(c: &Circuit, input: &StateVector) -> Result<StateVector> {
    let dim = 1usize << c.width;
    if input.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: input.dim(),
        });
    }
    input.ensure_normalized()?;
    let mut amps = input.amplitudes().to_vec();
    c.apply_in_place(&mut amps);
    Ok(StateVector::from_amplitudes(amps))
}

/// Full-register unitary of the gate sequence, column `k` being the image of `|k⟩`.
pub fn circuit_to_unitary(c: &Circuit) -> Result<ComplexMatrix> {
    if c.width > MAX_UNITARY_WIDTH {
        return Err(Error::TooWide {
            width: c.width,
            max: MAX_UNITARY_WIDTH,
        });
    }
    let dim = 1usize << c.width;
    let mut u = ComplexMatrix::zeros(dim, dim);
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..dim {
        amps.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        amps[k] = Complex64::new(1.0, 0.0);
        c.apply_in_place(&mut amps);
        for (i, a) in amps.iter().enumerate() {
            u[(i, k)] = *a;
        }
    }
    Ok(u)
}
