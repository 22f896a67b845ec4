//! Classical baselines for the anharmonic spectrum and the comparison metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{hamiltonian, HamiltonianSpec};
use crate::numkernel::eig_hermitian;

/// First-order energy `(n+½) + ¾λ(2n² + 2n + 1)`.
pub fn perturbation_energy(n: usize, lambda: f64) -> f64 {
    let n = n as f64;
    (n + 0.5) + 0.75 * lambda * (2.0 * n * n + 2.0 * n + 1.0)
}

/// First-order energy of the separable 2D oscillator,
/// `(nx+ny+1) + (3λ/2)(nx² + ny² + nx + ny + 1)`.
pub fn perturbation_energy_2d(nx: usize, ny: usize, lambda: f64) -> f64 {
    let (x, y) = (nx as f64, ny as f64);
    (x + y + 1.0) + 1.5 * lambda * (x * x + y * y + x + y + 1.0)
}

/// Semiclassical closed form `(n+½) + (3λ/2)(n+½)²`.
pub fn wkb_energy(n: usize, lambda: f64) -> f64 {
    let m = n as f64 + 0.5;
    m + 1.5 * lambda * m * m
}

/// Ascending eigenvalues of the Hamiltonian named by `spec`.
pub fn exact_spectrum(spec: &HamiltonianSpec) -> Result<Vec<f64>> {
    Ok(eig_hermitian(&hamiltonian(spec)?)?.eigenvalues)
}

/// Agreement of a predicted energy vector with a reference vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    /// `mean(|p - r| / |r|) · 100`; `None` when a reference entry is zero.
    pub mape: Option<f64>,
    pub mse: f64,
    pub rmse: f64,
    /// `1 - SS_res / SS_tot` about the reference mean; `None` for a constant reference.
    pub r_squared: Option<f64>,
    /// Population standard deviation of the residuals `p - r`.
    pub residual_std: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

pub fn error_metrics(predicted: &[f64], reference: &[f64]) -> Result<ErrorMetrics> {
    if predicted.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            expected: reference.len(),
            found: predicted.len(),
        });
    }
    if reference.is_empty() {
        return Err(Error::InvalidParameter("metrics need at least one value".into()));
    }
    if predicted.iter().chain(reference).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("metrics need finite values".into()));
    }
    let len = reference.len() as f64;
    let residuals: Vec<f64> = predicted.iter().zip(reference).map(|(p, r)| p - r).collect();
    let ss_res: f64 = residuals.iter().map(|d| d * d).sum();
    let mse = ss_res / len;

    let mut diagnostics = Vec::new();
    let mape = match reference.iter().position(|&r| r == 0.0) {
        Some(i) => {
            diagnostics.push(format!("MAPE undefined: reference entry {i} is zero"));
            None
        }
        None => Some(
            100.0 * residuals.iter().zip(reference).map(|(d, r)| (d / r).abs()).sum::<f64>() / len,
        ),
    };

    let ref_mean = reference.iter().sum::<f64>() / len;
    let ss_tot: f64 = reference.iter().map(|r| (r - ref_mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        Some(1.0 - ss_res / ss_tot)
    } else {
        diagnostics.push("R² undefined: reference is constant".into());
        None
    };

    let res_mean = residuals.iter().sum::<f64>() / len;
    let residual_std = (residuals.iter().map(|d| (d - res_mean).powi(2)).sum::<f64>() / len).sqrt();

    Ok(ErrorMetrics {
        mape,
        mse,
        rmse: mse.sqrt(),
        r_squared,
        residual_std,
        diagnostics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseMetrics {
    pub vqe_vs_exact: ErrorMetrics,
    pub vqe_vs_perturbation: ErrorMetrics,
    pub vqe_vs_wkb: ErrorMetrics,
}

/// Per-level energies from every method plus the pairwise metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub lambda: f64,
    pub levels: usize,
    pub vqe: Vec<f64>,
    pub perturbation: Vec<f64>,
    pub wkb: Vec<f64>,
    pub exact: Vec<f64>,
    pub metrics: PairwiseMetrics,
}

impl SpectrumReport {
    /// Fills the closed-form columns for levels `0..exact.len()` and computes
    /// the metrics with VQE as the prediction.
    pub fn new(lambda: f64, vqe: Vec<f64>, exact: Vec<f64>) -> Result<Self> {
        if vqe.len() != exact.len() {
            return Err(Error::DimensionMismatch {
                expected: exact.len(),
                found: vqe.len(),
            });
        }
        let levels = exact.len();
        let perturbation: Vec<f64> = (0..levels).map(|n| perturbation_energy(n, lambda)).collect();
        let wkb: Vec<f64> = (0..levels).map(|n| wkb_energy(n, lambda)).collect();
        let metrics = PairwiseMetrics {
            vqe_vs_exact: error_metrics(&vqe, &exact)?,
            vqe_vs_perturbation: error_metrics(&vqe, &perturbation)?,
            vqe_vs_wkb: error_metrics(&vqe, &wkb)?,
        };
        Ok(Self {
            lambda,
            levels,
            vqe,
            perturbation,
            wkb,
            exact,
            metrics,
        })
    }

    /// `(n, vqe, perturbation, wkb, exact)` per level.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64, f64, f64)> + '_ {
        (0..self.levels).map(|n| (n, self.vqe[n], self.perturbation[n], self.wkb[n], self.exact[n]))
    }
}
