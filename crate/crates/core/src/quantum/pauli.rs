use std::fmt;

use num_complex::Complex64;

use super::CMatrix;
use crate::bits::{parity, BitString};
use crate::error::{Error, Result};

/// `i^q · X^a Z^b` on `n` qubits, stored as two masks and a quarter-phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOp {
    x_mask: BitString,
    z_mask: BitString,
    phase_quarter: u8,
}

const QUARTER_PHASES: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

impl PauliOp {
    pub fn new(x_mask: BitString, z_mask: BitString) -> Result<Self> {
        if x_mask.len() != z_mask.len() {
            return Err(Error::LengthMismatch {
                left: x_mask.len(),
                right: z_mask.len(),
            });
        }
        Ok(Self {
            x_mask,
            z_mask,
            phase_quarter: 0,
        })
    }

    pub fn identity(n: u32) -> Result<Self> {
        let zero = BitString::zeros(n)?;
        Self::new(zero, zero)
    }

    /// `X^a`.
    pub fn x(a: BitString) -> Self {
        Self {
            x_mask: a,
            z_mask: BitString::from_raw(0, a.len()),
            phase_quarter: 0,
        }
    }

    /// `Z^b`.
    pub fn z(b: BitString) -> Self {
        Self {
            x_mask: BitString::from_raw(0, b.len()),
            z_mask: b,
            phase_quarter: 0,
        }
    }

    pub fn n(&self) -> u32 {
        self.x_mask.len()
    }

    pub fn x_mask(&self) -> BitString {
        self.x_mask
    }

    pub fn z_mask(&self) -> BitString {
        self.z_mask
    }

    /// `Some(±1)` when the global phase is real, `None` for `±i`.
    pub fn sign(&self) -> Option<i8> {
        match self.phase_quarter {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn phase(&self) -> Complex64 {
        QUARTER_PHASES[self.phase_quarter as usize]
    }

    pub fn negate(&self) -> Self {
        Self {
            phase_quarter: (self.phase_quarter + 2) % 4,
            ..*self
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask.value() == 0 && self.z_mask.value() == 0 && self.phase_quarter == 0
    }

    /// Operator product `self · other`.
    ///
    /// Moving `Z^{b1}` past `X^{a2}` contributes `(-1)^{b1 ⊙ a2}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let flip = self.z_mask.dot(&other.x_mask)?;
        Ok(Self {
            x_mask: self.x_mask.xor(&other.x_mask)?,
            z_mask: self.z_mask.xor(&other.z_mask)?,
            phase_quarter: (self.phase_quarter + other.phase_quarter + 2 * flip as u8) % 4,
        })
    }

    /// `(i^q X^a Z^b)† = i^{-q} (-1)^{a⊙b} X^a Z^b`.
    pub fn adjoint(&self) -> Self {
        let flip = parity(self.x_mask.value() & self.z_mask.value()) as u8;
        Self {
            phase_quarter: (4 - self.phase_quarter + 2 * flip) % 4,
            ..*self
        }
    }

    /// Image of basis state `|j⟩`: `P|j⟩ = phase · |target⟩`.
    #[inline]
    pub(crate) fn act_on_basis(&self, j: u64) -> (u64, Complex64) {
        let sign_flip = parity(self.z_mask.value() & j) as u8;
        let q = (self.phase_quarter + 2 * sign_flip) % 4;
        (j ^ self.x_mask.value(), QUARTER_PHASES[q as usize])
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn matrix(&self) -> CMatrix {
        let dim = 1usize << self.n();
        let mut m = CMatrix::zeros(dim, dim);
        for j in 0..dim as u64 {
            let (i, phase) = self.act_on_basis(j);
            m[(i as usize, j as usize)] = phase;
        }
        m
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase_quarter as usize];
        write!(f, "{prefix}X^{}Z^{}", self.x_mask, self.z_mask)
    }
}

/// `(-1)^{z_exp ⊙ x_exp}`, the sign picked up by `Z^β X^x = ± X^x Z^β`.
pub fn commute_z_past_x(z_exp: &BitString, x_exp: &BitString) -> Result<i8> {
    Ok(if z_exp.dot(x_exp)? { -1 } else { 1 })
}

/// `H^{⊗n} P H^{⊗n}`: masks swap and `X^α Z^β` picks up `(-1)^{α⊙β}`.
pub fn conjugate_pauli_by_h(p: &PauliOp) -> PauliOp {
    let flip = parity(p.x_mask.value() & p.z_mask.value()) as u8;
    PauliOp {
        x_mask: p.z_mask,
        z_mask: p.x_mask,
        phase_quarter: (p.phase_quarter + 2 * flip) % 4,
    }
}
