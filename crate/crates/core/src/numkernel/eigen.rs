//! Hermitian eigendecomposition by cyclic Jacobi rotations, and the unitary
//! propagator `exp(-iHt)` built on top of it.

use num_complex::Complex64;

use super::{ComplexMatrix, StateVector};
use crate::error::Result;

/// Hermiticity tolerance applied to eigensolver and exponential inputs,
/// relative to `max(1, ‖H‖_max)`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvector(&self, k: usize) -> StateVector {
        self.eigenvectors.column(k)
    }

    /// Projector onto the eigenspace of eigenvalues within `tol` of level `k`.
    pub fn eigenspace_projector(&self, k: usize, tol: f64) -> ComplexMatrix {
        let n = self.eigenvectors.rows();
        let target = self.eigenvalues[k];
        let mut p = ComplexMatrix::zeros(n, n);
        for (m, &e) in self.eigenvalues.iter().enumerate() {
            if (e - target).abs() > tol {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    p[(i, j)] += self.eigenvectors[(i, m)] * self.eigenvectors[(j, m)].conj();
                }
            }
        }
        p
    }

    /// Probability weight of `state` inside the eigenspace of level `k`
    /// (degenerate partners within `tol` included).
    pub fn eigenspace_weight(&self, k: usize, state: &StateVector, tol: f64) -> f64 {
        let target = self.eigenvalues[k];
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &e)| (e - target).abs() <= tol)
            .map(|(m, _)| self.eigenvector(m).inner(state).norm_sqr())
            .sum()
    }
}

fn hermitian_scale(h: &ComplexMatrix) -> f64 {
    HERMITIAN_TOLERANCE * h.max_norm().max(1.0)
}

/// Diagonalizes a Hermitian matrix.
///
/// Uses cyclic Jacobi sweeps: each complex off-diagonal pair is first made
/// real by a diagonal phase, then annihilated with a real plane rotation.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenSystem> {
    h.ensure_hermitian(hermitian_scale(h))?;
    let n = h.rows();
    // Symmetrize so rotations act on an exactly Hermitian matrix.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(h[(i, i)].re, 0.0)
        } else {
            (h[(i, j)] + h[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);

    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let threshold = (f64::EPSILON * f64::EPSILON) * total.max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;

    let zeta = (aqq - app) / (2.0 * mag);
    let t = if zeta.is_infinite() {
        0.0
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) * [[c, s], [-s, c]]; A <- G† A G, V <- V G.
    let g00 = Complex64::new(c, 0.0);
    let g01 = Complex64::new(s, 0.0);
    let g10 = -phase.conj() * s;
    let g11 = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g00 + akq * g10;
        a[(k, q)] = akp * g01 + akq * g11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
        a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g00 + vkq * g10;
        v[(k, q)] = vkp * g01 + vkq * g11;
    }
}

/// `exp(-i H t)` for Hermitian `H`, assembled as `V diag(e^{-iEt}) V†`.
pub fn matexp_unitary(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(h)?;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&e| Complex64::from_polar(1.0, -e * t))
        .collect();
    Ok(spectral_product(&eig.eigenvectors, &phases))
}

/// `V diag(d) V†`.
pub(crate) fn spectral_product(v: &ComplexMatrix, d: &[Complex64]) -> ComplexMatrix {
    let n = v.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v[(i, k)] * d[k] * v[(j, k)].conj()).sum()
    })
}
