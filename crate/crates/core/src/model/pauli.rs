use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{log2_exact, ComplexMatrix, HERMITIAN_TOLERANCE};

/// Coefficients with modulus at or below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis.
///
/// Written most-significant qubit first: in `"IXZ"` the `Z` acts on qubit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    // ops[q] acts on qubit q
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            ops: vec![Pauli::I; n_qubits],
        }
    }

    /// Builds a string from per-qubit operators, `ops[q]` acting on qubit `q`.
    pub fn from_qubit_ops(ops: Vec<Pauli>) -> Self {
        Self { ops }
    }

    pub fn n_qubits(&self) -> usize {
        self.ops.len()
    }

    /// Operator on qubit `q`.
    pub fn op(&self, q: usize) -> Pauli {
        self.ops[q]
    }

    /// Qubits flipped by the string (X or Y).
    pub fn x_mask(&self) -> usize {
        self.mask(|p| matches!(p, Pauli::X | Pauli::Y))
    }

    /// Qubits picking up a sign (Z or Y).
    pub fn z_mask(&self) -> usize {
        self.mask(|p| matches!(p, Pauli::Z | Pauli::Y))
    }

    pub fn y_count(&self) -> usize {
        self.ops.iter().filter(|&&p| p == Pauli::Y).count()
    }

    fn mask(&self, pred: impl Fn(Pauli) -> bool) -> usize {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, &p)| pred(p))
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    /// `P|k⟩ = phase(k) |k ⊕ x_mask⟩`.
    pub(crate) fn action(&self) -> PauliAction {
        let y = self.y_count() % 4;
        let y_phase = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][y];
        PauliAction {
            x_mask: self.x_mask(),
            z_mask: self.z_mask(),
            y_phase,
        }
    }

    /// Dense `2ⁿ × 2ⁿ` matrix.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = 1usize << self.n_qubits();
        let act = self.action();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k ^ act.x_mask, k)] = act.phase(k);
        }
        m
    }

    fn enumerate(n_qubits: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * n_qubits)).map(move |code| {
            let ops = (0..n_qubits)
                .map(|q| Pauli::ALL[(code >> (2 * q)) & 3])
                .collect();
            PauliString { ops }
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliAction {
    pub x_mask: usize,
    pub z_mask: usize,
    pub y_phase: Complex64,
}

impl PauliAction {
    #[inline]
    pub fn phase(&self, k: usize) -> Complex64 {
        if (k & self.z_mask).count_ones() % 2 == 1 {
            -self.y_phase
        } else {
            self.y_phase
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.ops.iter().rev() {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut ops = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidParameter(format!("bad Pauli symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        ops.reverse();
        Ok(Self { ops })
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A weighted Pauli string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub string: PauliString,
    pub coefficient: f64,
}

impl PauliTerm {
    pub fn new(string: &str, coefficient: f64) -> Result<Self> {
        Ok(Self {
            string: string.parse()?,
            coefficient,
        })
    }
}

/// Expands a Hermitian `2ⁿ × 2ⁿ` matrix as `Σ c_P P` with `c_P = Tr(P H) / 2ⁿ`.
///
/// All `4ⁿ` strings are enumerated; coefficients with `|c_P| ≤ 1e-12` are dropped.
pub fn pauli_decompose(h: &ComplexMatrix, n_qubits: usize) -> Result<Vec<PauliTerm>> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let dim = h.rows();
    if log2_exact(dim)? != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << n_qubits,
            found: dim,
        });
    }
    h.ensure_hermitian(HERMITIAN_TOLERANCE * h.max_norm().max(1.0))?;

    let scale = 1.0 / dim as f64;
    let mut terms = Vec::new();
    for string in PauliString::enumerate(n_qubits) {
        let act = string.action();
        // Tr(P H) = Σ_m ⟨m|H P|m⟩ = Σ_m phase(m) H[m][m ⊕ x]
        let tr: Complex64 = (0..dim)
            .map(|m| act.phase(m) * h[(m, m ^ act.x_mask)])
            .sum();
        let c = tr.re * scale;
        if c.abs() > PRUNE_THRESHOLD {
            terms.push(PauliTerm {
                string,
                coefficient: c,
            });
        }
    }
    Ok(terms)
}

/// Dense matrix of `Σ c_P P`.
pub fn pauli_sum_matrix(terms: &[PauliTerm], n_qubits: usize) -> Result<ComplexMatrix> {
    let dim = 1usize << n_qubits;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for term in terms {
        if term.string.n_qubits() != n_qubits {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: term.string.n_qubits(),
            });
        }
        let act = term.string.action();
        for k in 0..dim {
            m[(k ^ act.x_mask, k)] += act.phase(k) * term.coefficient;
        }
    }
    Ok(m)
}
