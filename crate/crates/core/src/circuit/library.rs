//! Circuit builders: QFT/IQFT ladders and Toffoli-cascade phase filters.

use std::f64::consts::PI;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Relative phases with wrapped modulus at or below this emit no filter.
pub const DIAGONAL_PHASE_EPS: f64 = 1e-14;

/// Quantum Fourier transform on `n` qubits.
///
/// Hadamard plus controlled-phase ladder with angles `2π/2^k`, followed by the
/// SWAP reversal, so the unitary equals `[F]_{j,k} = e^{2πijk/N}/√N` under the
/// little-endian qubit order.
pub fn qft_circuit(n: usize) -> Circuit {
    assert!(n >= 1, "qft_circuit needs at least one qubit");
    let mut c = Circuit::new(n);
    for target in (0..n).rev() {
        c.gates.push(Gate::h(target));
        for control in (0..target).rev() {
            let k = target - control + 1;
            c.gates.push(Gate::cphase(control, target, 2.0 * PI / (1u64 << k) as f64));
        }
    }
    for i in 0..n / 2 {
        c.gates.push(Gate::swap(i, n - 1 - i));
    }
    c
}

/// Inverse QFT: the gate-wise adjoint of [`qft_circuit`] in reverse order.
pub fn iqft_circuit(n: usize) -> Circuit {
    qft_circuit(n).inverse()
}

/// Label of basis index `k` on `n` qubits, most significant qubit first.
pub fn basis_label(k: usize, n: usize) -> String {
    (0..n).rev().map(|q| if (k >> q) & 1 == 1 { '1' } else { '0' }).collect()
}

fn parse_pattern(pattern: &str, n: usize) -> Result<usize> {
    if pattern.len() != n {
        return Err(Error::InvalidParameter(format!(
            "pattern {pattern:?} has length {}, register has {n} qubits",
            pattern.len()
        )));
    }
    pattern.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => Err(Error::InvalidParameter(format!("bad pattern symbol {other:?}"))),
    })
}

/// Circuit multiplying the amplitude of the basis state `pattern` by `e^{iφ}`.
///
/// Layout: `n` data qubits followed by `n - 1` ancillas. Zeros in the pattern
/// become anti-controls by X conjugation. A Toffoli cascade ANDs the data
/// qubits into the last ancilla, a phase gate fires on it, and the mirrored
/// cascade returns every ancilla to `|0⟩`.
pub fn filter_circuit(pattern: &str, phase: f64, n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidParameter("filter needs at least one qubit".into()));
    }
    let index = parse_pattern(pattern, n)?;
    filter_circuit_for_index(index, phase, n)
}

/// [`filter_circuit`] addressed by basis index instead of label.
pub fn filter_circuit_for_index(index: usize, phase: f64, n: usize) -> Result<Circuit> {
    if n == 0 || index >= 1 << n {
        return Err(Error::InvalidParameter(format!(
            "basis index {index} out of range for {n} qubits"
        )));
    }
    if !phase.is_finite() {
        return Err(Error::InvalidParameter("filter phase is not finite".into()));
    }
    let mut c = Circuit::with_ancillas(n, n - 1);
    let flips: Vec<Gate> = (0..n)
        .filter(|q| (index >> q) & 1 == 0)
        .map(Gate::x)
        .collect();
    let ancilla = |i: usize| n + i;

    let mut cascade = Vec::with_capacity(n.saturating_sub(1));
    if n >= 2 {
        cascade.push(Gate::toffoli(0, 1, ancilla(0)));
        for q in 2..n {
            cascade.push(Gate::toffoli(ancilla(q - 2), q, ancilla(q - 1)));
        }
    }
    let flag = if n == 1 { 0 } else { ancilla(n - 2) };

    c.gates.extend(flips.iter().cloned());
    c.gates.extend(cascade.iter().cloned());
    c.gates.push(Gate::phase(flag, phase));
    c.gates.extend(cascade.into_iter().rev());
    c.gates.extend(flips);
    Ok(c)
}

fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Realizes `diag(e^{iθ_0}, …, e^{iθ_{2ⁿ-1}})`.
///
/// `θ_0` is recorded as the circuit's global phase and one filter is emitted
/// for each basis state whose phase relative to `θ_0` is nonzero.
pub fn diagonal_phase_circuit(phases: &[f64], n: usize) -> Result<Circuit> {
    if n == 0 || phases.len() != 1 << n {
        return Err(Error::DimensionMismatch {
            expected: if n < usize::BITS as usize { 1 << n } else { 0 },
            found: phases.len(),
        });
    }
    if let Some(bad) = phases.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidParameter(format!("phase {bad} is not finite")));
    }
    let base = phases[0];
    let mut c = Circuit::with_ancillas(n, n - 1);
    c.set_global_phase(base);
    for (k, &theta) in phases.iter().enumerate().skip(1) {
        let rel = theta - base;
        if wrap_phase(rel).abs() <= DIAGONAL_PHASE_EPS {
            continue;
        }
        c.append(&filter_circuit_for_index(k, rel, n)?)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::circuit::{circuit_to_unitary, run_circuit};
    use crate::model::qft_matrix;
    use crate::numkernel::{ComplexMatrix, StateVector};

    fn diag_oracle(phases: &[f64]) -> ComplexMatrix {
        let d: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
        ComplexMatrix::from_diagonal(&d)
    }

    #[test]
    fn single_qubit_qft_is_hadamard() {
        let c = qft_circuit(1);
        assert_eq!(c.len(), 1);
        assert!(circuit_to_unitary(&c).unwrap().max_abs_diff(&qft_matrix(2)) < 1e-15);
    }

    #[test]
    fn qft_circuit_matches_matrix() {
        for n in 1..=4 {
            let u = circuit_to_unitary(&qft_circuit(n)).unwrap();
            assert!(u.max_abs_diff(&qft_matrix(1 << n)) < 1e-10, "n = {n}");
            let ui = circuit_to_unitary(&iqft_circuit(n)).unwrap();
            assert!(ui.max_abs_diff(&qft_matrix(1 << n).adjoint()) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn iqft_after_qft_restores_state() {
        let s = StateVector::from_amplitudes(
            (0..8)
                .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos()))
                .collect(),
        )
        .normalized()
        .unwrap();
        let mut c = qft_circuit(3);
        c.append(&iqft_circuit(3)).unwrap();
        let out = run_circuit(&c, &s).unwrap();
        assert!(out.max_abs_diff(&s) < 1e-10);
    }

    #[test]
    fn filter_for_001_applies_phase_to_index_one() {
        let phi = 0.8;
        let c = filter_circuit("001", phi, 3).unwrap();
        assert_eq!(c.width(), 5);
        assert_eq!(c.ancilla_range(), 3..5);
        let u = c.data_unitary().unwrap();
        let mut phases = vec![0.0; 8];
        phases[1] = phi;
        assert!(u.max_abs_diff(&diag_oracle(&phases)) < 1e-14);
    }

    #[test]
    fn zero_phase_filter_is_identity_on_data() {
        let u = filter_circuit("101", 0.0, 3).unwrap().data_unitary().unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(8)) < 1e-15);
    }

    #[test]
    fn filters_compose_into_diagonal() {
        let thetas = [0.1, -0.4, 1.3, 2.2, -3.0, 0.0, 0.9, -1.7];
        let mut c = Circuit::with_ancillas(3, 2);
        for (k, &t) in thetas.iter().enumerate() {
            c.append(&filter_circuit(&basis_label(k, 3), t, 3).unwrap()).unwrap();
        }
        assert!(c.data_unitary().unwrap().max_abs_diff(&diag_oracle(&thetas)) < 1e-13);
    }

    #[test]
    fn small_registers() {
        let u1 = filter_circuit("0", 0.3, 1).unwrap().data_unitary().unwrap();
        assert!(u1.max_abs_diff(&diag_oracle(&[0.3, 0.0])) < 1e-15);
        let u2 = filter_circuit("10", -0.6, 2).unwrap().data_unitary().unwrap();
        assert!(u2.max_abs_diff(&diag_oracle(&[0.0, 0.0, -0.6, 0.0])) < 1e-15);
    }

    #[test]
    fn filter_argument_errors() {
        assert!(filter_circuit("01", 0.1, 3).is_err());
        assert!(filter_circuit("0a1", 0.1, 3).is_err());
        assert!(filter_circuit("001", f64::INFINITY, 3).is_err());
        assert!(diagonal_phase_circuit(&[0.0; 7], 3).is_err());
    }

    #[test]
    fn equal_phases_give_empty_circuit() {
        let c = diagonal_phase_circuit(&[0.7; 8], 3).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.global_phase(), 0.7);
        let u = c.data_unitary().unwrap();
        assert!(u.max_abs_diff(&diag_oracle(&[0.7; 8])) < 1e-15);
    }

    #[test]
    fn filter_count_matches_nonzero_relative_phases() {
        let c = diagonal_phase_circuit(&[0.5, 0.5, 1.0, 0.5, 2.0, 0.5, 0.5, 0.5], 3).unwrap();
        let phase_gates = c
            .gates()
            .iter()
            .filter(|g| matches!(g.kind(), crate::circuit::GateKind::Phase(_)))
            .count();
        assert_eq!(phase_gates, 2);
    }

    #[test]
    fn labels_are_most_significant_first() {
        assert_eq!(basis_label(1, 3), "001");
        assert_eq!(basis_label(6, 3), "110");
        assert_eq!(parse_pattern("110", 3).unwrap(), 6);
    }
}
