use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, MatrixJson, PureState};

/// `(k1, k2)`. Single-key variants read `k1` only; QOTP reads `(a, b) = (k1, k2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KeyPair {
    pub k1: BitString,
    pub k2: BitString,
}

impl KeyPair {
    pub fn new(k1: BitString, k2: BitString) -> Result<Self> {
        if k1.len() != k2.len() {
            return Err(Error::LengthMismatch {
                left: k1.len(),
                right: k2.len(),
            });
        }
        Ok(Self { k1, k2 })
    }

    pub fn random<R: RngCore + ?Sized>(n: u32, rng: &mut R) -> Result<Self> {
        let k1 = BitString::random(n, rng)?;
        let k2 = BitString::random(n, rng)?;
        Ok(Self { k1, k2 })
    }

    pub fn n(&self) -> u32 {
        self.k1.len()
    }
}

/// One BB84 state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bb84Label {
    Z0,
    Z1,
    P,
    M,
}

impl Bb84Label {
    pub fn state(self) -> PureState {
        match self {
            Self::Z0 => PureState::basis(BitString::from_raw(0, 1)).expect("one qubit"),
            Self::Z1 => PureState::basis(BitString::from_raw(1, 1)).expect("one qubit"),
            Self::P => PureState::plus(),
            Self::M => PureState::minus(),
        }
    }

    /// `H` applied to the label's state.
    pub fn hadamard(self) -> Self {
        match self {
            Self::Z0 => Self::P,
            Self::Z1 => Self::M,
            Self::P => Self::Z0,
            Self::M => Self::Z1,
        }
    }

    /// `X` applied to the label's state, up to global phase.
    pub fn flip(self) -> Self {
        match self {
            Self::Z0 => Self::Z1,
            Self::Z1 => Self::Z0,
            other => other,
        }
    }
}

impl fmt::Display for Bb84Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Bb84Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z0" => Ok(Self::Z0),
            "Z1" => Ok(Self::Z1),
            "P" => Ok(Self::P),
            "M" => Ok(Self::M),
            other => Err(Error::Parse(format!("unknown BB84 label {other:?}"))),
        }
    }
}

/// Tensor product of the label states, qubit 0 first.
pub fn labels_to_state(labels: &[Bb84Label]) -> Result<PureState> {
    let mut it = labels.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::InvalidPureState("empty label sequence".into()))?;
    it.try_fold(first.state(), |acc, l| acc.tensor(&l.state()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CiphertextBody {
    Quantum(DensityMatrix),
    Classical(BitString),
    Labels(Vec<Bb84Label>),
}

impl CiphertextBody {
    pub fn n(&self) -> u32 {
        match self {
            Self::Quantum(s) => s.n(),
            Self::Classical(c) => c.len(),
            Self::Labels(l) => l.len() as u32,
        }
    }
}

/// `(r1, r2, state)`; the randomness travels in the clear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CiphertextJson", try_from = "CiphertextJson")]
pub struct Ciphertext {
    pub r1: Option<BitString>,
    pub r2: Option<BitString>,
    pub state: CiphertextBody,
}

impl Ciphertext {
    pub fn quantum(r1: Option<BitString>, r2: Option<BitString>, state: DensityMatrix) -> Self {
        Self {
            r1,
            r2,
            state: CiphertextBody::Quantum(state),
        }
    }

    pub fn n(&self) -> u32 {
        self.state.n()
    }
}

/// `{"r1": hex?, "r2": hex?, "state": matrix | {"labels": [..]} | {"bits": ".."}}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CiphertextJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r2: Option<String>,
    state: BodyJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BodyJson {
    Labels { labels: Vec<Bb84Label> },
    Classical { bits: BitString },
    Matrix(MatrixJson),
}

impl From<Ciphertext> for CiphertextJson {
    fn from(ct: Ciphertext) -> Self {
        Self {
            r1: ct.r1.map(|r| r.to_hex()),
            r2: ct.r2.map(|r| r.to_hex()),
            state: match ct.state {
                CiphertextBody::Quantum(s) => BodyJson::Matrix(s.to_json()),
                CiphertextBody::Classical(bits) => BodyJson::Classical { bits },
                CiphertextBody::Labels(labels) => BodyJson::Labels { labels },
            },
        }
    }
}

impl TryFrom<CiphertextJson> for Ciphertext {
    type Error = Error;

    fn try_from(j: CiphertextJson) -> Result<Self> {
        let state = match j.state {
            BodyJson::Matrix(m) => CiphertextBody::Quantum(DensityMatrix::try_from(m)?),
            BodyJson::Classical { bits } => CiphertextBody::Classical(bits),
            BodyJson::Labels { labels } => CiphertextBody::Labels(labels),
        };
        let n = state.n();
        let parse = |r: Option<String>| r.map(|h| BitString::from_hex(&h, n)).transpose();
        Ok(Self {
            r1: parse(j.r1)?,
            r2: parse(j.r2)?,
            state,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_roundtrip_through_json() {
        let ct = Ciphertext {
            r1: Some("1011".parse().unwrap()),
            r2: Some("0001".parse().unwrap()),
            state: CiphertextBody::Labels(vec![
                Bb84Label::P,
                Bb84Label::M,
                Bb84Label::M,
                Bb84Label::P,
            ]),
        };
        let s = serde_json::to_string(&ct).unwrap();
        assert_eq!(
            s,
            r#"{"r1":"b","r2":"1","state":{"labels":["P","M","M","P"]}}"#
        );
        assert_eq!(serde_json::from_str::<Ciphertext>(&s).unwrap(), ct);
    }

    #[test]
    fn quantum_roundtrip_through_json() {
        let ct = Ciphertext::quantum(
            Some("10".parse().unwrap()),
            None,
            DensityMatrix::maximally_mixed(2).unwrap(),
        );
        let v = serde_json::to_value(&ct).unwrap();
        assert_eq!(v["r1"], "2");
        assert!(v.get("r2").is_none());
        assert_eq!(v["state"]["n"], 2);
        let back: Ciphertext = serde_json::from_value(v).unwrap();
        assert_eq!(back, ct);
    }

    #[test]
    fn hadamard_and_flip_on_labels() {
        use Bb84Label::*;
        assert_eq!(Z0.hadamard(), P);
        assert_eq!(M.hadamard(), Z1);
        assert_eq!(Z0.flip(), Z1);
        assert_eq!(M.flip(), M);
        assert_eq!("Z1".parse::<Bb84Label>().unwrap(), Z1);
        assert!("X".parse::<Bb84Label>().is_err());
    }
}
