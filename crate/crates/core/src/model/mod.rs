//! Oscillator operators and Hamiltonians in the truncated Fock basis and on
//! the discretized position grid.
//!
//! Units are fixed at ħ = m = ω = 1.

mod pauli;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::ComplexMatrix;

pub use pauli::{pauli_decompose, pauli_sum_matrix, Pauli, PauliString, PauliTerm, PRUNE_THRESHOLD};

/// Basis in which the Hamiltonian is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// Number states `|0⟩ … |N-1⟩` with ladder operators truncated at `N`.
    #[default]
    Fock,
    /// Uniform position grid with the momentum operator obtained by QFT conjugation.
    Position,
}

/// Parameters of the model Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    /// Truncation dimension `N` (power of two).
    pub dim: usize,
    /// Quartic coupling λ.
    pub lambda: f64,
    #[serde(default)]
    pub representation: Representation,
}

impl Default for HamiltonianSpec {
    fn default() -> Self {
        Self {
            dim: 8,
            lambda: 0.05,
            representation: Representation::Fock,
        }
    }
}

impl HamiltonianSpec {
    pub fn new(dim: usize, lambda: f64, representation: Representation) -> Result<Self> {
        let spec = Self {
            dim,
            lambda,
            representation,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn fock(dim: usize, lambda: f64) -> Result<Self> {
        Self::new(dim, lambda, Representation::Fock)
    }

    pub fn position(dim: usize, lambda: f64) -> Result<Self> {
        Self::new(dim, lambda, Representation::Position)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 || !self.dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "dimension must be a power of two >= 2, got {}",
                self.dim
            )));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and >= 0, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Register width `log2(dim)`.
    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub(crate) fn require(&self, representation: Representation) -> Result<()> {
        self.validate()?;
        if self.representation != representation {
            return Err(Error::InvalidParameter(format!(
                "operation requires the {representation:?} representation, spec uses {:?}",
                self.representation
            )));
        }
        Ok(())
    }
}

/// Truncated annihilation operator: `a[n][n+1] = √(n+1)`.
pub fn annihilation_op(dim: usize) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "annihilation operator needs dim >= 2, got {dim}"
        )));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `H = a†a + ½ + (λ/4)(a + a†)⁴`, with every product taken inside the
/// truncated space. The high-index corner therefore differs from the
/// infinite-basis matrix elements.
pub fn fock_hamiltonian(spec: &HamiltonianSpec) -> Result<ComplexMatrix> {
    spec.require(Representation::Fock)?;
    let a = annihilation_op(spec.dim)?;
    let ad = a.adjoint();
    let number = ad.matmul(&a);
    let quad = a.add(&ad);
    let quartic = quad.pow(4);
    let h = number
        .add(&ComplexMatrix::identity(spec.dim).scale_real(0.5))
        .add(&quartic.scale_real(spec.lambda / 4.0));
    Ok(h)
}

/// Grid points `√(π/2N)·(-N/2, …, N/2-1)`.
pub fn position_grid(n: usize) -> Result<Vec<f64>> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "position grid needs a positive even size, got {n}"
        )));
    }
    let step = (PI / (2.0 * n as f64)).sqrt();
    let half = (n / 2) as i64;
    Ok((-half..half).map(|k| step * k as f64).collect())
}

/// Diagonal discretized position operator.
pub fn position_op(n: usize) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::from_real_diagonal(&position_grid(n)?))
}

/// `[F]_{j,k} = e^{2πi jk/N} / √N`.
pub fn qft_matrix(n: usize) -> ComplexMatrix {
    assert!(n >= 1, "qft_matrix needs N >= 1");
    let norm = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |j, k| {
        // Reduce jk mod N before scaling to keep the phase argument small.
        let m = (j * k) % n;
        Complex64::from_polar(norm, 2.0 * PI * m as f64 / n as f64)
    })
}

/// Discrete momentum operator `F⁻¹ x F`.
pub fn momentum_op(n: usize) -> Result<ComplexMatrix> {
    let x = position_op(n)?;
    let f = qft_matrix(n);
    Ok(f.adjoint().matmul(&x).matmul(&f))
}

/// `½V(x) = ½x² + λx⁴` evaluated on the position grid.
pub fn potential_values(n: usize, lambda: f64) -> Result<Vec<f64>> {
    Ok(position_grid(n)?
        .into_iter()
        .map(|x| 0.5 * x * x + lambda * x.powi(4))
        .collect())
}

/// `H = ½p² + ½x² + λx⁴` on the discretized grid.
pub fn position_hamiltonian(spec: &HamiltonianSpec) -> Result<ComplexMatrix> {
    spec.require(Representation::Position)?;
    let p = momentum_op(spec.dim)?;
    let kinetic = p.matmul(&p).scale_real(0.5);
    let potential = ComplexMatrix::from_real_diagonal(&potential_values(spec.dim, spec.lambda)?);
    Ok(kinetic.add(&potential))
}

/// Hamiltonian in whichever representation `spec` names.
pub fn hamiltonian(spec: &HamiltonianSpec) -> Result<ComplexMatrix> {
    match spec.representation {
        Representation::Fock => fock_hamiltonian(spec),
        Representation::Position => position_hamiltonian(spec),
    }
}

/// JSON export of a Hamiltonian matrix.
///
/// `entries` lists `[re, im]` pairs in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianExport {
    pub dim: usize,
    pub lambda: f64,
    pub representation: Representation,
    pub entries: Vec<[f64; 2]>,
}

impl HamiltonianExport {
    pub fn build(spec: &HamiltonianSpec) -> Result<Self> {
        let h = hamiltonian(spec)?;
        Ok(Self {
            dim: spec.dim,
            lambda: spec.lambda,
            representation: spec.representation,
            entries: h.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        })
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_vec(
            self.dim,
            self.dim,
            self.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        )
    }
}
