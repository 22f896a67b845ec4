//! Dense complex linear algebra for operators and quantum states.

mod eigen;
mod matrix;
mod state;

pub use eigen::{eig_hermitian, matexp_unitary, EigenSystem, HERMITIAN_TOLERANCE};
pub use matrix::ComplexMatrix;
pub use state::{log2_exact, StateVector, NORM_TOLERANCE};

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}
