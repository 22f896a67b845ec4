use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ|a|² - 1` for a state to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// A vector of complex amplitudes.
///
/// Construction does not enforce normalization; operations that require a
/// physical state call [`StateVector::ensure_normalized`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn from_real(amplitudes: &[f64]) -> Self {
        Self::from_amplitudes(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index⟩` in a space of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// `|0…0⟩` on `n` qubits.
    pub fn zero_state(n_qubits: usize) -> Self {
        Self::basis(1 << n_qubits, 0).expect("index 0 is always in range")
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        Ok(Self::from_amplitudes(self.amplitudes.iter().map(|a| a / n).collect()))
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let n2 = self.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n2));
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner: dimension mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|amplitude|²` for each basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Tensor product `self ⊗ other`; `self` occupies the more significant index bits.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                out.push(a * b);
            }
        }
        Self::from_amplitudes(out)
    }

    /// Largest amplitude-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff: dimension mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn n_qubits(&self) -> Result<usize> {
        log2_exact(self.dim())
    }
}

/// `log2(dim)` for a power of two `dim ≥ 1`.
pub fn log2_exact(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_state_and_probabilities() {
        let s = StateVector::basis(8, 3).unwrap();
        assert_eq!(s.probabilities()[3], 1.0);
        assert!(s.ensure_normalized().is_ok());
        assert!(StateVector::basis(4, 4).is_err());
    }

    #[test]
    fn normalization() {
        let s = StateVector::from_real(&[3.0, 4.0]);
        assert!(s.ensure_normalized().is_err());
        let n = s.normalized().unwrap();
        assert!((n.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(StateVector::from_real(&[0.0, 0.0]).normalized().is_err());
    }

    #[test]
    fn log2_of_powers() {
        assert_eq!(log2_exact(1).unwrap(), 0);
        assert_eq!(log2_exact(8).unwrap(), 3);
        assert!(matches!(log2_exact(6), Err(Error::NotPowerOfTwo(6))));
        assert!(log2_exact(0).is_err());
    }
}
