use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mixture::{average_ciphertext, ordered_average, MixtureSpec};
use super::report::{AttackReport, Verdict};
use crate::bits::{mask, BitString};
use crate::error::{Error, Result};
use crate::prf::FunctionFamily;
use crate::quantum::{tensor, trace_distance, DensityMatrix, TOLERANCE};
use crate::schemes::{ehe_enc_with, KeyPair, Scheme};

/// Largest joint register `s · n`.
pub const MAX_JOINT_QUBITS: u32 = 6;

/// Leakage threshold for a distance to count as nonzero.
pub const LEAKAGE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyMode {
    /// One key pair encrypts every block.
    Shared,
    /// Each block has its own key pair.
    Independent,
}

/// Joint key average of `s` EHE-encrypted blocks versus the product of the
/// per-block averages. Each block gets its own randomness pair drawn from
/// `seed`.
///
/// The shared mode confirms when the two differ by more than
/// [`LEAKAGE_THRESHOLD`]; the independent mode confirms when they agree
/// within [`TOLERANCE`].
pub fn multi_message_analysis(
    f: &FunctionFamily,
    g: &FunctionFamily,
    blocks: &[DensityMatrix],
    mode: KeyMode,
    seed: u64,
) -> Result<AttackReport> {
    let n = f.n();
    let s = blocks.len() as u32;
    if s == 0 {
        return Err(Error::InvalidParameter("need at least one block".into()));
    }
    if let Some(b) = blocks.iter().find(|b| b.n() != n) {
        return Err(Error::DimensionMismatch {
            left: b.n(),
            right: n,
        });
    }
    if s * n > MAX_JOINT_QUBITS {
        return Err(Error::LimitExceeded {
            what: "joint qubits s·n",
            got: (s * n) as u64,
            limit: MAX_JOINT_QUBITS as u64,
        });
    }
    let scheme = Scheme::qbe_ehe(f.clone(), g.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let randomness = (0..s)
        .map(|_| {
            Ok((
                BitString::random(n, &mut rng)?,
                BitString::random(n, &mut rng)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let product = blocks
        .iter()
        .zip(&randomness)
        .map(|(b, &(r1, r2))| {
            average_ciphertext(&MixtureSpec::new(scheme.clone(), b.clone()).with_randomness(r1, r2))
        })
        .try_fold(None::<DensityMatrix>, |acc, avg| -> Result<_> {
            let avg = avg?;
            Ok(Some(match acc {
                None => avg,
                Some(a) => tensor(&a, &avg)?,
            }))
        })?
        .expect("at least one block");

    let pair_bits = 2 * n;
    let key_pair = |key: u64| -> Result<KeyPair> {
        KeyPair::new(
            BitString::new(key >> n, n)?,
            BitString::new(key & mask(n), n)?,
        )
    };
    let key_for_block = |joint: u64, i: u32| match mode {
        KeyMode::Shared => joint,
        KeyMode::Independent => (joint >> (pair_bits * (s - 1 - i))) & mask(pair_bits),
    };
    let key_space_bits = match mode {
        KeyMode::Shared => pair_bits,
        KeyMode::Independent => pair_bits * s,
    };
    let joint = ordered_average(s * n, 1 << key_space_bits, |key| {
        let mut acc: Option<DensityMatrix> = None;
        for (i, (b, (r1, r2))) in blocks.iter().zip(&randomness).enumerate() {
            let kp = key_pair(key_for_block(key, i as u32))?;
            let ct = ehe_enc_with(f, g, &kp, b, r1, r2)?;
            let state = ct.quantum_state()?.clone();
            acc = Some(match acc {
                None => state,
                Some(a) => tensor(&a, &state)?,
            });
        }
        Ok(acc.expect("at least one block").into_matrix())
    })?;

    let mixed = DensityMatrix::maximally_mixed(s * n)?;
    let distance = trace_distance(&joint, &product)?;
    let ok = match mode {
        KeyMode::Shared => distance > LEAKAGE_THRESHOLD,
        KeyMode::Independent => distance <= TOLERANCE,
    };
    let mut report = AttackReport::new("multi_message", n)
        .detail("blocks", s)
        .detail("key_mode", mode)
        .detail("randomness", &randomness)
        .detail("joint_distance_from_mixed", trace_distance(&joint, &mixed)?)
        .detail(
            "product_distance_from_mixed",
            trace_distance(&product, &mixed)?,
        )
        .detail("leakage_exhibited", distance > LEAKAGE_THRESHOLD)
        .detail("f", f.descriptor())
        .detail("g", g.descriptor())
        .detail("seed", seed);
    report.trace_distance = Some(distance);
    report.verdict = Verdict::from_bool(ok);
    Ok(report)
}
