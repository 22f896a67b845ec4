//! Shot sampling from statevector probabilities.
//!
//! Samples are drawn with ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
//! whose output stream is fixed by the seed on every platform, so histograms
//! are bit-reproducible.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::basis_label;
use crate::error::{Error, Result};
use crate::numkernel::{log2_exact, StateVector};

/// Measurement outcomes keyed by basis label (most significant qubit first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotHistogram {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
    pub n_qubits: usize,
}

impl ShotHistogram {
    pub fn count(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    /// Counts indexed by basis state, zeros included.
    pub fn dense_counts(&self) -> Vec<u64> {
        (0..1usize << self.n_qubits)
            .map(|k| self.count(&basis_label(k, self.n_qubits)))
            .collect()
    }

    /// Empirical frequencies indexed by basis state.
    pub fn frequencies(&self) -> Vec<f64> {
        self.dense_counts()
            .into_iter()
            .map(|c| c as f64 / self.shots as f64)
            .collect()
    }
}

/// Draws `shots` i.i.d. measurements of `state` in the computational basis.
pub fn sample_counts(state: &StateVector, shots: u64, seed: u64) -> Result<ShotHistogram> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    state.ensure_normalized()?;
    let n_qubits = log2_exact(state.dim())?;

    let mut cumulative = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    for p in state.probabilities() {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dense = vec![0u64; state.dim()];
    for _ in 0..shots {
        let u = rng.gen::<f64>() * total;
        let k = cumulative.partition_point(|&c| c <= u).min(state.dim() - 1);
        dense[k] += 1;
    }

    let counts = dense
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (basis_label(k, n_qubits), c))
        .collect();
    Ok(ShotHistogram {
        counts,
        shots,
        seed,
        n_qubits,
    })
}

/// `½ Σ |p_k - q_k|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "total_variation: length mismatch");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_state_samples_deterministically() {
        let h = sample_counts(&StateVector::basis(8, 3).unwrap(), 8192, 11).unwrap();
        assert_eq!(h.count("011"), 8192);
        assert_eq!(h.counts.len(), 1);
        assert_eq!(h.counts.values().sum::<u64>(), h.shots);
    }

    #[test]
    fn uniform_superposition_within_binomial_bound() {
        let amp = (1.0f64 / 8.0).sqrt();
        let s = StateVector::from_real(&[amp; 8]);
        let shots = 8192u64;
        let p = 1.0 / 8.0;
        let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
        for seed in 0..5 {
            let h = sample_counts(&s, shots, seed).unwrap();
            assert_eq!(h.counts.values().sum::<u64>(), shots);
            for c in h.dense_counts() {
                assert!((c as f64 - 1024.0).abs() <= 5.0 * sigma, "count {c}");
            }
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let s = StateVector::from_real(&[0.6, 0.0, 0.0, 0.8]);
        let a = sample_counts(&s, 1000, 42).unwrap();
        let b = sample_counts(&s, 1000, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_counts(&s, 1000, 43).unwrap());
        assert_eq!(a.count("01"), 0);
    }

    #[test]
    fn rejects_zero_shots_and_unnormalized() {
        let s = StateVector::basis(2, 0).unwrap();
        assert!(sample_counts(&s, 0, 1).is_err());
        assert!(sample_counts(&StateVector::from_real(&[1.0, 1.0]), 10, 1).is_err());
    }
}
