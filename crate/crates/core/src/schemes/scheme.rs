use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::bb84::{classical_bb84_dec, classical_bb84_enc_with};
use super::ciphertext::{Ciphertext, CiphertextBody, KeyPair};
use super::ops::{
    check_keys, check_state, classical_dec, classical_enc_with, ehe_dec, ehe_dec_zx, ehe_enc_with,
    ehe_enc_zx_with, qbe_single_dec, qbe_single_enc_with, qotp_enc, required, xczc_enc,
};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::prf::{FamilyDescriptor, FunctionFamily};
use crate::quantum::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeVariant {
    ClassicalBe,
    QbeSingle,
    QbeEhe,
    QbeEheZx,
    Qotp,
    Xczc,
    ClassicalBb84,
}

impl SchemeVariant {
    pub const ALL: [Self; 7] = [
        Self::ClassicalBe,
        Self::QbeSingle,
        Self::QbeEhe,
        Self::QbeEheZx,
        Self::Qotp,
        Self::Xczc,
        Self::ClassicalBb84,
    ];

    /// Number of function families the variant is built from.
    pub fn family_count(self) -> usize {
        match self {
            Self::ClassicalBe | Self::QbeSingle => 1,
            Self::QbeEhe | Self::QbeEheZx | Self::ClassicalBb84 => 2,
            Self::Qotp | Self::Xczc => 0,
        }
    }

    /// Whether messages are classical bit strings.
    pub fn classical_messages(self) -> bool {
        matches!(self, Self::ClassicalBe | Self::ClassicalBb84)
    }

    /// Number of public randomness strings per ciphertext.
    pub fn randomness_count(self) -> usize {
        self.family_count()
    }
}

impl fmt::Display for SchemeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).expect("unit variant");
        f.write_str(v.as_str().expect("string tag"))
    }
}

/// JSON form `{"variant", "n", "f"?, "g"?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeDescriptor {
    pub variant: SchemeVariant,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<FamilyDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<FamilyDescriptor>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Message {
    Quantum(DensityMatrix),
    Classical(BitString),
}

impl Message {
    pub fn n(&self) -> u32 {
        match self {
            Self::Quantum(s) => s.n(),
            Self::Classical(b) => b.len(),
        }
    }
}

/// A scheme variant bound to its families.
#[derive(Debug, Clone)]
pub struct Scheme {
    variant: SchemeVariant,
    n: u32,
    f: Option<FunctionFamily>,
    g: Option<FunctionFamily>,
}

impl Scheme {
    pub fn new(
        variant: SchemeVariant,
        n: u32,
        f: Option<FunctionFamily>,
        g: Option<FunctionFamily>,
    ) -> Result<Self> {
        let given = f.is_some() as usize + g.is_some() as usize;
        let needed = variant.family_count();
        if given != needed || (needed == 1 && f.is_none()) {
            return Err(Error::InvalidScheme(format!(
                "{variant} takes {needed} famil{} (\"f\"{}), got {given}",
                if needed == 1 { "y" } else { "ies" },
                if needed == 2 { ", \"g\"" } else { "" },
            )));
        }
        for fam in f.iter().chain(g.iter()) {
            if fam.n() != n {
                return Err(Error::LengthMismatch {
                    left: fam.n(),
                    right: n,
                });
            }
        }
        if variant.family_count() == 0 {
            crate::quantum::check_qubits(n)?;
        }
        Ok(Self { variant, n, f, g })
    }

    pub fn classical_be(f: FunctionFamily) -> Self {
        Self::new(SchemeVariant::ClassicalBe, f.n(), Some(f), None).expect("one family")
    }

    pub fn qbe_single(f: FunctionFamily) -> Self {
        Self::new(SchemeVariant::QbeSingle, f.n(), Some(f), None).expect("one family")
    }

    pub fn qbe_ehe(f: FunctionFamily, g: FunctionFamily) -> Result<Self> {
        Self::new(SchemeVariant::QbeEhe, f.n(), Some(f), Some(g))
    }

    /// EHE with the same family in both layers.
    pub fn qbe_ehe_pairwise(f: FunctionFamily) -> Self {
        Self::new(SchemeVariant::QbeEhe, f.n(), Some(f.clone()), Some(f)).expect("matching n")
    }

    pub fn qbe_ehe_zx(f: FunctionFamily, g: FunctionFamily) -> Result<Self> {
        Self::new(SchemeVariant::QbeEheZx, f.n(), Some(f), Some(g))
    }

    pub fn qotp(n: u32) -> Result<Self> {
        Self::new(SchemeVariant::Qotp, n, None, None)
    }

    pub fn xczc(n: u32) -> Result<Self> {
        Self::new(SchemeVariant::Xczc, n, None, None)
    }

    pub fn classical_bb84(f: FunctionFamily, g: FunctionFamily) -> Result<Self> {
        Self::new(SchemeVariant::ClassicalBb84, f.n(), Some(f), Some(g))
    }

    pub fn from_descriptor(d: &SchemeDescriptor) -> Result<Self> {
        let f =
            d.f.as_ref()
                .map(FunctionFamily::from_descriptor)
                .transpose()?;
        let g =
            d.g.as_ref()
                .map(FunctionFamily::from_descriptor)
                .transpose()?;
        Self::new(d.variant, d.n, f, g)
    }

    pub fn descriptor(&self) -> SchemeDescriptor {
        SchemeDescriptor {
            variant: self.variant,
            n: self.n,
            f: self.f.as_ref().map(FunctionFamily::descriptor),
            g: self.g.as_ref().map(FunctionFamily::descriptor),
        }
    }

    pub fn variant(&self) -> SchemeVariant {
        self.variant
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn f(&self) -> Option<&FunctionFamily> {
        self.f.as_ref()
    }

    pub fn g(&self) -> Option<&FunctionFamily> {
        self.g.as_ref()
    }

    fn families(&self) -> (&FunctionFamily, &FunctionFamily) {
        let f = self.f.as_ref().expect("validated at construction");
        (f, self.g.as_ref().unwrap_or(f))
    }

    pub fn keygen<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<KeyPair> {
        KeyPair::random(self.n, rng)
    }

    /// Fresh public randomness `(r1, r2)`; absent entries are `None`.
    pub fn draw_randomness<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<(Option<BitString>, Option<BitString>)> {
        let mut draw = |present: bool| present.then(|| BitString::random(self.n, rng)).transpose();
        let count = self.variant.randomness_count();
        let r1 = draw(count >= 1)?;
        let r2 = draw(count >= 2)?;
        Ok((r1, r2))
    }

    pub fn encrypt<R: RngCore + ?Sized>(
        &self,
        key: &KeyPair,
        message: &Message,
        rng: &mut R,
    ) -> Result<Ciphertext> {
        let (r1, r2) = self.draw_randomness(rng)?;
        self.encrypt_with(key, message, r1.as_ref(), r2.as_ref())
    }

    /// Encryption under caller-chosen randomness.
    pub fn encrypt_with(
        &self,
        key: &KeyPair,
        message: &Message,
        r1: Option<&BitString>,
        r2: Option<&BitString>,
    ) -> Result<Ciphertext> {
        check_keys(key, self.n)?;
        use SchemeVariant::*;
        match (self.variant, message) {
            (ClassicalBe, Message::Classical(m)) => {
                let r = required(r1, "r1")?;
                let c = classical_enc_with(self.families().0, &key.k1, m, &r)?;
                Ok(Ciphertext {
                    r1: Some(r),
                    r2: None,
                    state: CiphertextBody::Classical(c),
                })
            }
            (ClassicalBb84, Message::Classical(m)) => {
                let (f, g) = self.families();
                classical_bb84_enc_with(f, g, key, m, &required(r1, "r1")?, &required(r2, "r2")?)
            }
            (QbeSingle, Message::Quantum(s)) => {
                qbe_single_enc_with(self.families().0, &key.k1, s, &required(r1, "r1")?)
            }
            (QbeEhe, Message::Quantum(s)) => {
                let (f, g) = self.families();
                ehe_enc_with(f, g, key, s, &required(r1, "r1")?, &required(r2, "r2")?)
            }
            (QbeEheZx, Message::Quantum(s)) => {
                let (f, g) = self.families();
                ehe_enc_zx_with(f, g, key, s, &required(r1, "r1")?, &required(r2, "r2")?)
            }
            (Qotp, Message::Quantum(s)) => Ok(Ciphertext::quantum(
                None,
                None,
                qotp_enc(&key.k1, &key.k2, s)?,
            )),
            (Xczc, Message::Quantum(s)) => {
                Ok(Ciphertext::quantum(None, None, xczc_enc(&key.k1, s)?))
            }
            (v, _) => Err(self.wrong_message(v)),
        }
    }

    /// Encrypted quantum state only, under caller-chosen randomness.
    pub fn encrypt_state_with(
        &self,
        key: &KeyPair,
        sigma: &DensityMatrix,
        r1: Option<&BitString>,
        r2: Option<&BitString>,
    ) -> Result<DensityMatrix> {
        check_state(sigma, self.n)?;
        let ct = self.encrypt_with(key, &Message::Quantum(sigma.clone()), r1, r2)?;
        match ct.state {
            CiphertextBody::Quantum(s) => Ok(s),
            _ => unreachable!("quantum message yields a quantum ciphertext"),
        }
    }

    pub fn decrypt(&self, key: &KeyPair, ct: &Ciphertext) -> Result<Message> {
        check_keys(key, self.n)?;
        use SchemeVariant::*;
        match self.variant {
            ClassicalBe => {
                let r = required(ct.r1.as_ref(), "r1")?;
                let CiphertextBody::Classical(c) = &ct.state else {
                    return Err(Error::InvalidScheme(
                        "expected a classical ciphertext".into(),
                    ));
                };
                classical_dec(self.families().0, &key.k1, &r, c).map(Message::Classical)
            }
            ClassicalBb84 => {
                let (f, g) = self.families();
                classical_bb84_dec(f, g, key, ct).map(Message::Classical)
            }
            QbeSingle => qbe_single_dec(self.families().0, &key.k1, ct).map(Message::Quantum),
            QbeEhe => {
                let (f, g) = self.families();
                ehe_dec(f, g, key, ct).map(Message::Quantum)
            }
            QbeEheZx => {
                let (f, g) = self.families();
                ehe_dec_zx(f, g, key, ct).map(Message::Quantum)
            }
            Qotp => qotp_enc(&key.k1, &key.k2, ct.quantum_state()?).map(Message::Quantum),
            Xczc => xczc_enc(&key.k1, ct.quantum_state()?).map(Message::Quantum),
        }
    }

    fn wrong_message(&self, v: SchemeVariant) -> Error {
        let want = if v.classical_messages() {
            "a classical bit string"
        } else {
            "a quantum state"
        };
        Error::InvalidScheme(format!("{v} encrypts {want}"))
    }
}
