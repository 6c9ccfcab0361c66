//! Classical block schemes with public randomness, and their lift to
//! basis-permutation quantum encryption.

use super::ops::{check_len, check_state};
use crate::bits::{mask, BitString};
use crate::error::Result;
use crate::prf::{hash_words, BlockPermutation, FeistelPermutation, FunctionFamily};
use crate::quantum::{permute_basis, DensityMatrix};

/// A length-preserving classical scheme `c = Enc(k, r, m)`. For each fixed
/// `(k, r)` the map `m ↦ c` must be a bijection on `{0,1}^n`.
pub trait ClassicalBlockScheme: Send + Sync {
    fn name(&self) -> String;

    /// Shared bit length of key, randomness, message and ciphertext.
    fn block_len(&self) -> u32;

    fn encrypt_block(&self, k: u64, r: u64, m: u64) -> u64;

    fn decrypt_block(&self, k: u64, r: u64, c: u64) -> u64;
}

/// `c = m ⊕ F(k, r)`.
#[derive(Debug, Clone)]
pub struct PrfPad(pub FunctionFamily);

impl ClassicalBlockScheme for PrfPad {
    fn name(&self) -> String {
        format!("prf_pad({})", self.0.kind())
    }

    fn block_len(&self) -> u32 {
        self.0.n()
    }

    fn encrypt_block(&self, k: u64, r: u64, m: u64) -> u64 {
        m ^ self.0.eval_raw(k, r)
    }

    fn decrypt_block(&self, k: u64, r: u64, c: u64) -> u64 {
        c ^ self.0.eval_raw(k, r)
    }
}

/// Feistel block cipher whose round keys are selected by `(k, r)`.
#[derive(Debug, Clone)]
pub struct FeistelBlockCipher {
    base: FeistelPermutation,
}

impl FeistelBlockCipher {
    pub fn new(n: u32, seed: u64, rounds: u32) -> Result<Self> {
        Ok(Self {
            base: FeistelPermutation::new(n, seed, rounds)?,
        })
    }

    fn instance(&self, k: u64, r: u64) -> FeistelPermutation {
        self.base.with_tweak(hash_words(&[k, r]))
    }
}

impl ClassicalBlockScheme for FeistelBlockCipher {
    fn name(&self) -> String {
        format!("feistel_cipher({} rounds)", self.base.rounds())
    }

    fn block_len(&self) -> u32 {
        self.base.block_len()
    }

    fn encrypt_block(&self, k: u64, r: u64, m: u64) -> u64 {
        self.instance(k, r).apply(m)
    }

    fn decrypt_block(&self, k: u64, r: u64, c: u64) -> u64 {
        self.instance(k, r).invert(c)
    }
}

/// Conjugation by `|m⟩ ↦ |Enc(k, r, m)⟩`.
pub fn permutation_enc<S: ClassicalBlockScheme + ?Sized>(
    scheme: &S,
    k: &BitString,
    r: &BitString,
    sigma: &DensityMatrix,
) -> Result<DensityMatrix> {
    let n = scheme.block_len();
    check_len(k.len(), n)?;
    check_len(r.len(), n)?;
    check_state(sigma, n)?;
    let (k, r) = (k.value(), r.value());
    Ok(permute_basis(sigma, |m| {
        scheme.encrypt_block(k, r, m) & mask(n)
    }))
}

pub fn permutation_dec<S: ClassicalBlockScheme + ?Sized>(
    scheme: &S,
    k: &BitString,
    r: &BitString,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    let n = scheme.block_len();
    check_len(k.len(), n)?;
    check_len(r.len(), n)?;
    check_state(rho, n)?;
    let (k, r) = (k.value(), r.value());
    Ok(permute_basis(rho, |c| {
        scheme.decrypt_block(k, r, c) & mask(n)
    }))
}
