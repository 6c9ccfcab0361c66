//! Encryption schemes: the classical PRF scheme, single-layer and EHE
//! quantum block encryption, QOTP, the `X^cZ^c` scheme, the BB84 classical
//! mode, and the encrypt-decrypt-confirm session.

mod bb84;
mod ciphertext;
mod classical;
mod ops;
mod scheme;
mod session;

pub use bb84::{classical_bb84_dec, classical_bb84_enc, classical_bb84_enc_with};
pub use ciphertext::{labels_to_state, Bb84Label, Ciphertext, CiphertextBody, KeyPair};
pub use classical::{
    permutation_dec, permutation_enc, ClassicalBlockScheme, FeistelBlockCipher, PrfPad,
};
pub use ops::{
    classical_dec, classical_enc, classical_enc_with, ehe_dec, ehe_dec_zx, ehe_enc, ehe_enc_with,
    ehe_enc_zx, ehe_enc_zx_with, ehe_pads, ehe_pairwise_dec, ehe_pairwise_enc, qbe_single_dec,
    qbe_single_enc, qbe_single_enc_with, qotp_dec, qotp_enc, xczc_dec, xczc_enc,
};
pub use scheme::{Message, Scheme, SchemeDescriptor, SchemeVariant};
pub use session::SessionState;
