use rand::RngCore;

use super::ciphertext::{Bb84Label, Ciphertext, CiphertextBody, KeyPair};
use super::ops::{check_len, ehe_pads, required};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::prf::FunctionFamily;

fn z_label(bit: bool) -> Bb84Label {
    if bit {
        Bb84Label::Z1
    } else {
        Bb84Label::Z0
    }
}

fn layer(label: Bb84Label, bit: bool) -> Bb84Label {
    if bit {
        label.flip()
    } else {
        label
    }
}

/// Per bit, the label of `X^{g_i} H X^{f_i} |m_i⟩` with `f = F(k1, r1)`,
/// `g = G(k2, r2)`. Computed symbolically.
pub fn classical_bb84_enc_with(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    m: &BitString,
    r1: &BitString,
    r2: &BitString,
) -> Result<Ciphertext> {
    let (pf, pg) = ehe_pads(f, g, kp, r1, r2)?;
    check_len(m.len(), f.n())?;
    let labels = (0..m.len())
        .map(|i| layer(layer(z_label(m.bit(i)), pf.bit(i)).hadamard(), pg.bit(i)))
        .collect();
    Ok(Ciphertext {
        r1: Some(*r1),
        r2: Some(*r2),
        state: CiphertextBody::Labels(labels),
    })
}

pub fn classical_bb84_enc<R: RngCore + ?Sized>(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    m: &BitString,
    rng: &mut R,
) -> Result<Ciphertext> {
    let r1 = BitString::random(f.n(), rng)?;
    let r2 = BitString::random(g.n(), rng)?;
    classical_bb84_enc_with(f, g, kp, m, &r1, &r2)
}

/// Undoes the three layers per bit. A label that does not come back to the
/// computational basis is not in the image of encryption and is rejected.
pub fn classical_bb84_dec(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    ct: &Ciphertext,
) -> Result<BitString> {
    let r1 = required(ct.r1.as_ref(), "r1")?;
    let r2 = required(ct.r2.as_ref(), "r2")?;
    let CiphertextBody::Labels(labels) = &ct.state else {
        return Err(Error::InvalidScheme(
            "expected a BB84 label ciphertext".into(),
        ));
    };
    let (pf, pg) = ehe_pads(f, g, kp, &r1, &r2)?;
    check_len(labels.len() as u32, f.n())?;
    let bits = labels
        .iter()
        .enumerate()
        .map(
            |(i, &l)| match layer(layer(l, pg.bit(i as u32)).hadamard(), pf.bit(i as u32)) {
                Bb84Label::Z0 => Ok(false),
                Bb84Label::Z1 => Ok(true),
                other => Err(Error::InvalidScheme(format!(
                    "label {l} at position {i} decrypts to {other}, not a classical bit"
                ))),
            },
        )
        .collect::<Result<Vec<_>>>()?;
    BitString::from_bits(&bits)
}
