//! Exact density-matrix laboratory for Encrypt-Hadamard-Encrypt (EHE)
//! quantum block encryption.

pub mod bits;
pub mod error;
pub mod lab;
pub mod prf;
pub mod quantum;
pub mod schemes;

pub use bits::BitString;
pub use error::{Error, Result};
pub use lab::{AttackReport, Verdict};
pub use prf::FunctionFamily;
pub use quantum::{DensityMatrix, PauliOp, PureState};
pub use schemes::{Ciphertext, KeyPair, Scheme};
