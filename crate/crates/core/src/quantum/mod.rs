//! Exact small-n quantum state and Pauli-operator algebra.
//!
//! Everything here works on dense complex matrices of side `2^n` with
//! `n <= MAX_QUBITS`. Pauli conjugation and transversal Hadamard layers are
//! computed with index permutations and Walsh-Hadamard transforms instead of
//! matrix products; the dense forms ([`PauliOp::matrix`]) exist for checking.

mod ops;
mod pauli;
mod state;

pub use ops::{
    hadamard_all, measure_in_basis, pauli_apply, pauli_decompose, permute_basis, tensor,
    trace_distance, PauliDecomposition,
};
pub use pauli::{commute_z_past_x, conjugate_pauli_by_h, PauliOp};
pub use state::{DensityMatrix, MatrixJson, PureState};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest register the dense simulator accepts (matrix side 256).
pub const MAX_QUBITS: u32 = 8;

/// Tolerance for state-validity checks and numerical equality.
pub const TOLERANCE: f64 = 1e-9;

/// Tolerance for identities that only involve dyadic arithmetic.
pub const ALGEBRAIC_TOLERANCE: f64 = 1e-12;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) fn check_qubits(n: u32) -> crate::Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(crate::Error::LimitExceeded {
            what: "qubit count",
            got: n as u64,
            limit: MAX_QUBITS as u64,
        });
    }
    Ok(())
}

/// In-place unnormalised Walsh-Hadamard transform; `data.len()` is a power of two.
pub(crate) fn walsh_hadamard(data: &mut [Complex64]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (data[i], data[i + half]);
                data[i] = a + b;
                data[i + half] = a - b;
            }
        }
        half *= 2;
    }
}
