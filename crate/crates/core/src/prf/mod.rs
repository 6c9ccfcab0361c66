//! Keyed function families `K × X → Y` with `K = X = Y = {0,1}^n`, their
//! oracles, and empirical distinguishing estimators.

mod estimate;
mod family;
mod feistel;
mod oracle;

pub use estimate::{
    estimate_advantage, pairwise_independence_test, AdvantageEstimate, ConstantAdversary,
    InputRegime, OracleAdversary, PairwiseReport, RegimeReport, XorShiftAdversary, MIN_TRIALS,
};
pub use family::{
    is_key_permutation, parallel_compose, FamilyDescriptor, FamilyKind, FunctionFamily,
    DEFAULT_ROUNDS, MAX_ENUMERATION_BITS,
};
pub use feistel::{ggm_eval, BlockPermutation, FeistelPermutation, TablePermutation};
pub use oracle::{oracle_apply, Oracle, OracleTranscript};

/// SplitMix64 finaliser.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub(crate) fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x243F_6A88_85A3_08D3, |h, &w| mix64(h ^ mix64(w)))
}
