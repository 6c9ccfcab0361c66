use serde::{Deserialize, Serialize};

use super::family::FunctionFamily;
use crate::bits::{mask, BitString};
use crate::error::{Error, Result};
use crate::quantum::{PureState, MAX_QUBITS};

/// `Σ α_{x,y}|x⟩|y⟩ ↦ Σ α_{x,y}|x⟩|y ⊕ F_k(x)⟩` on `2n` qubits, `x` in the
/// leading register.
pub fn oracle_apply(
    family: &FunctionFamily,
    k: &BitString,
    state: &PureState,
) -> Result<PureState> {
    let n = family.n();
    if k.len() != n {
        return Err(Error::LengthMismatch {
            left: k.len(),
            right: n,
        });
    }
    if 2 * n > MAX_QUBITS {
        return Err(Error::LimitExceeded {
            what: "oracle register qubits",
            got: 2 * n as u64,
            limit: MAX_QUBITS as u64,
        });
    }
    if state.n() != 2 * n {
        return Err(Error::DimensionMismatch {
            left: state.n(),
            right: 2 * n,
        });
    }
    let amps = state.amplitudes();
    let mut out = vec![Default::default(); amps.len()];
    let low = mask(n);
    for (i, &a) in amps.iter().enumerate() {
        let x = (i as u64) >> n;
        let y = (i as u64) & low;
        let j = (x << n) | (y ^ family.eval_raw(k.value(), x));
        out[j as usize] = a;
    }
    Ok(PureState::from_amplitudes_unchecked(2 * n, out))
}

/// Record of classical queries `(x, F_k(x))`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleTranscript {
    pub queries: Vec<(BitString, BitString)>,
}

/// Classical oracle `O_f: (x, y) ↦ (x, y ⊕ f(x))` with a hidden key.
#[derive(Debug, Clone)]
pub struct Oracle {
    family: FunctionFamily,
    key: BitString,
    transcript: OracleTranscript,
}

impl Oracle {
    pub fn new(family: FunctionFamily, key: BitString) -> Result<Self> {
        if key.len() != family.n() {
            return Err(Error::LengthMismatch {
                left: key.len(),
                right: family.n(),
            });
        }
        Ok(Self {
            family,
            key,
            transcript: OracleTranscript::default(),
        })
    }

    pub fn n(&self) -> u32 {
        self.family.n()
    }

    pub fn query(&mut self, x: &BitString) -> Result<BitString> {
        let y = self.family.eval(&self.key, x)?;
        self.transcript.queries.push((*x, y));
        Ok(y)
    }

    /// `y ⊕ f(x)`.
    pub fn query_xor(&mut self, x: &BitString, y: &BitString) -> Result<BitString> {
        let fx = self.query(x)?;
        y.xor(&fx)
    }

    pub(crate) fn query_raw(&mut self, x: u64) -> u64 {
        let n = self.family.n();
        let y = self.family.eval_raw(self.key.value(), x & mask(n));
        self.transcript.queries.push((
            BitString::from_raw(x & mask(n), n),
            BitString::from_raw(y, n),
        ));
        y
    }

    pub fn transcript(&self) -> &OracleTranscript {
        &self.transcript
    }

    pub fn into_transcript(self) -> OracleTranscript {
        self.transcript
    }
}
