//! Security experiments by exact key enumeration, plus a sampled IND harness.

mod attacks;
mod checks;
mod ind;
mod mixture;
mod multi;
mod perfect;
mod report;

pub use attacks::{
    all_plus_probability, circular_basis, helstrom_success, prop1_attack, prop1_attack_ordered,
    reuse_attack, thm4_attack, thm4_attack_classical, two_world_success, MAX_PROP1_QUBITS,
};
pub use checks::{verify_identities, verify_roundtrip, MAX_IDENTITY_QUBITS};
pub use ind::{
    ind_game, reduction_advantage, CircularStateAdversary, HadamardUndoAdversary, IndExpectation,
    IndMode, MeasurementAdversary, PlusStateAdversary, RandomGuessAdversary,
};
pub use mixture::{
    average_ciphertext, average_ciphertext_direct, pad_histogram, x_twirl, z_twirl, MixtureSpec,
    MAX_PAIR_KEY_BITS, MAX_SINGLE_KEY_BITS,
};
pub use multi::{multi_message_analysis, KeyMode, LEAKAGE_THRESHOLD, MAX_JOINT_QUBITS};
pub use perfect::{symbolic_average, verify_perfect_security};
pub use report::{AttackReport, Verdict};
