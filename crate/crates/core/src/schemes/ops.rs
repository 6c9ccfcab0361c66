//! Scheme primitives over explicit randomness. The `rng`-taking entry points
//! draw `r1` (then `r2`) uniformly and delegate here.

use rand::RngCore;

use super::ciphertext::{Ciphertext, CiphertextBody, KeyPair};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::prf::FunctionFamily;
use crate::quantum::{hadamard_all, pauli_apply, DensityMatrix, PauliOp};

pub(crate) fn check_len(got: u32, want: u32) -> Result<()> {
    if got != want {
        return Err(Error::LengthMismatch {
            left: got,
            right: want,
        });
    }
    Ok(())
}

pub(crate) fn check_state(s: &DensityMatrix, n: u32) -> Result<()> {
    if s.n() != n {
        return Err(Error::DimensionMismatch {
            left: s.n(),
            right: n,
        });
    }
    Ok(())
}

pub(crate) fn check_pair(f: &FunctionFamily, g: &FunctionFamily) -> Result<()> {
    check_len(g.n(), f.n())
}

pub(crate) fn check_keys(kp: &KeyPair, n: u32) -> Result<()> {
    check_len(kp.k1.len(), n)?;
    check_len(kp.k2.len(), n)
}

pub(crate) fn x_layer(bits: BitString, s: &DensityMatrix) -> Result<DensityMatrix> {
    pauli_apply(&PauliOp::x(bits), s)
}

pub(crate) fn required(r: Option<&BitString>, name: &str) -> Result<BitString> {
    r.copied()
        .ok_or_else(|| Error::InvalidScheme(format!("ciphertext is missing {name}")))
}

/// `c = m ⊕ F(k, r)`.
pub fn classical_enc_with(
    f: &FunctionFamily,
    k: &BitString,
    m: &BitString,
    r: &BitString,
) -> Result<BitString> {
    check_len(m.len(), f.n())?;
    m.xor(&f.eval(k, r)?)
}

/// Draws `r` and returns `(r, m ⊕ F(k, r))`.
pub fn classical_enc<R: RngCore + ?Sized>(
    f: &FunctionFamily,
    k: &BitString,
    m: &BitString,
    rng: &mut R,
) -> Result<(BitString, BitString)> {
    let r = BitString::random(f.n(), rng)?;
    Ok((r, classical_enc_with(f, k, m, &r)?))
}

pub fn classical_dec(
    f: &FunctionFamily,
    k: &BitString,
    r: &BitString,
    c: &BitString,
) -> Result<BitString> {
    classical_enc_with(f, k, c, r)
}

/// `X^{F(k,r)} σ X^{F(k,r)}`.
pub fn qbe_single_enc_with(
    f: &FunctionFamily,
    k: &BitString,
    sigma: &DensityMatrix,
    r: &BitString,
) -> Result<Ciphertext> {
    check_state(sigma, f.n())?;
    let state = x_layer(f.eval(k, r)?, sigma)?;
    Ok(Ciphertext::quantum(Some(*r), None, state))
}

pub fn qbe_single_enc<R: RngCore + ?Sized>(
    f: &FunctionFamily,
    k: &BitString,
    sigma: &DensityMatrix,
    rng: &mut R,
) -> Result<Ciphertext> {
    let r = BitString::random(f.n(), rng)?;
    qbe_single_enc_with(f, k, sigma, &r)
}

pub fn qbe_single_dec(f: &FunctionFamily, k: &BitString, ct: &Ciphertext) -> Result<DensityMatrix> {
    let r = required(ct.r1.as_ref(), "r1")?;
    let rho = ct.quantum_state()?;
    check_state(rho, f.n())?;
    x_layer(f.eval(k, &r)?, rho)
}

/// The two pads `(F(k1, r1), G(k2, r2))`.
pub fn ehe_pads(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    r1: &BitString,
    r2: &BitString,
) -> Result<(BitString, BitString)> {
    check_pair(f, g)?;
    Ok((f.eval(&kp.k1, r1)?, g.eval(&kp.k2, r2)?))
}

/// `U σ U†` with `U = X^{G(k2,r2)} H^{⊗n} X^{F(k1,r1)}`.
pub fn ehe_enc_with(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    sigma: &DensityMatrix,
    r1: &BitString,
    r2: &BitString,
) -> Result<Ciphertext> {
    let (pf, pg) = ehe_pads(f, g, kp, r1, r2)?;
    check_state(sigma, f.n())?;
    let state = x_layer(pg, &hadamard_all(&x_layer(pf, sigma)?))?;
    Ok(Ciphertext::quantum(Some(*r1), Some(*r2), state))
}

pub fn ehe_enc<R: RngCore + ?Sized>(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    sigma: &DensityMatrix,
    rng: &mut R,
) -> Result<Ciphertext> {
    let r1 = BitString::random(f.n(), rng)?;
    let r2 = BitString::random(g.n(), rng)?;
    ehe_enc_with(f, g, kp, sigma, &r1, &r2)
}

/// `U† ρ U`.
pub fn ehe_dec(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    ct: &Ciphertext,
) -> Result<DensityMatrix> {
    let r1 = required(ct.r1.as_ref(), "r1")?;
    let r2 = required(ct.r2.as_ref(), "r2")?;
    let (pf, pg) = ehe_pads(f, g, kp, &r1, &r2)?;
    let rho = ct.quantum_state()?;
    check_state(rho, f.n())?;
    x_layer(pf, &hadamard_all(&x_layer(pg, rho)?))
}

/// `Z^{G(k2,r2)} X^{F(k1,r1)} σ X^{F(k1,r1)} Z^{G(k2,r2)}`.
pub fn ehe_enc_zx_with(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    sigma: &DensityMatrix,
    r1: &BitString,
    r2: &BitString,
) -> Result<Ciphertext> {
    let (pf, pg) = ehe_pads(f, g, kp, r1, r2)?;
    check_state(sigma, f.n())?;
    // Z^g X^f = ±X^f Z^g, and the sign cancels under conjugation.
    let state = pauli_apply(&PauliOp::new(pf, pg)?, sigma)?;
    Ok(Ciphertext::quantum(Some(*r1), Some(*r2), state))
}

pub fn ehe_enc_zx<R: RngCore + ?Sized>(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    sigma: &DensityMatrix,
    rng: &mut R,
) -> Result<Ciphertext> {
    let r1 = BitString::random(f.n(), rng)?;
    let r2 = BitString::random(g.n(), rng)?;
    ehe_enc_zx_with(f, g, kp, sigma, &r1, &r2)
}

pub fn ehe_dec_zx(
    f: &FunctionFamily,
    g: &FunctionFamily,
    kp: &KeyPair,
    ct: &Ciphertext,
) -> Result<DensityMatrix> {
    let r1 = required(ct.r1.as_ref(), "r1")?;
    let r2 = required(ct.r2.as_ref(), "r2")?;
    let (pf, pg) = ehe_pads(f, g, kp, &r1, &r2)?;
    let rho = ct.quantum_state()?;
    check_state(rho, f.n())?;
    pauli_apply(&PauliOp::new(pf, pg)?, rho)
}

/// [`ehe_enc`] with the same family in both layers.
pub fn ehe_pairwise_enc<R: RngCore + ?Sized>(
    f: &FunctionFamily,
    kp: &KeyPair,
    sigma: &DensityMatrix,
    rng: &mut R,
) -> Result<Ciphertext> {
    ehe_enc(f, f, kp, sigma, rng)
}

pub fn ehe_pairwise_dec(
    f: &FunctionFamily,
    kp: &KeyPair,
    ct: &Ciphertext,
) -> Result<DensityMatrix> {
    ehe_dec(f, f, kp, ct)
}

/// `X^a Z^b σ Z^b X^a`. A pad must never encrypt two messages.
pub fn qotp_enc(a: &BitString, b: &BitString, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    check_state(sigma, a.len())?;
    pauli_apply(&PauliOp::new(*a, *b)?, sigma)
}

pub fn qotp_dec(a: &BitString, b: &BitString, rho: &DensityMatrix) -> Result<DensityMatrix> {
    qotp_enc(a, b, rho)
}

/// `X^c Z^c σ Z^c X^c`.
pub fn xczc_enc(c: &BitString, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    qotp_enc(c, c, sigma)
}

pub fn xczc_dec(c: &BitString, rho: &DensityMatrix) -> Result<DensityMatrix> {
    qotp_enc(c, c, rho)
}

impl Ciphertext {
    pub fn quantum_state(&self) -> Result<&DensityMatrix> {
        match &self.state {
            CiphertextBody::Quantum(s) => Ok(s),
            _ => Err(Error::InvalidScheme("expected a quantum ciphertext".into())),
        }
    }
}
