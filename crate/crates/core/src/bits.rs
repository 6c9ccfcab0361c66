//! Fixed-length bit strings.
//!
//! Bit `i` of a string is qubit `i`, and qubit 0 is the most significant bit
//! of the computational-basis index. The packed integer returned by
//! [`BitString::value`] is therefore exactly the basis index `|b⟩`.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest supported bit string.
pub const MAX_BITS: u32 = 32;

/// Serializes as a `0`/`1` string, qubit 0 first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BitString {
    value: u64,
    len: u32,
}

#[inline]
pub(crate) fn mask(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

#[inline]
pub(crate) fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

impl BitString {
    pub fn new(value: u64, len: u32) -> Result<Self> {
        if len == 0 || len > MAX_BITS {
            return Err(Error::LimitExceeded {
                what: "bit length",
                got: len as u64,
                limit: MAX_BITS as u64,
            });
        }
        if value & !mask(len) != 0 {
            return Err(Error::ValueOutOfRange { value, len });
        }
        Ok(Self { value, len })
    }

    /// Callers guarantee `0 < len <= MAX_BITS`; excess high bits are dropped.
    #[inline]
    pub(crate) fn from_raw(value: u64, len: u32) -> Self {
        debug_assert!(len > 0 && len <= MAX_BITS);
        Self {
            value: value & mask(len),
            len,
        }
    }

    pub fn zeros(len: u32) -> Result<Self> {
        Self::new(0, len)
    }

    pub fn ones(len: u32) -> Result<Self> {
        Self::new(mask(len.min(MAX_BITS)), len)
    }

    /// Builds a string from bits listed qubit 0 first.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Self::new(value, bits.len() as u32)
    }

    /// Uniformly random string drawn from the low bits of one `next_u64` call.
    pub fn random<R: RngCore + ?Sized>(len: u32, rng: &mut R) -> Result<Self> {
        Self::new(rng.next_u64() & mask(len.min(MAX_BITS)), len)
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn len(&self) -> u32 {
        self.len
    }

    /// Always false; a bit string has at least one bit.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Bit of qubit `i` (qubit 0 is the most significant).
    pub fn bit(&self, i: u32) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.value >> (self.len - 1 - i)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self {
            value: self.value ^ other.value,
            len: self.len,
        })
    }

    /// `a ⊙ b = Σ a_i b_i (mod 2)`.
    pub fn dot(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(parity(self.value & other.value))
    }

    /// `self ∥ other`, with `self` in the high (first) positions.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        Self::new(
            (self.value << other.len) | other.value,
            self.len + other.len,
        )
    }

    /// Splits into the first `at` bits and the remaining bits.
    pub fn split_at(&self, at: u32) -> Result<(Self, Self)> {
        if at == 0 || at >= self.len {
            return Err(Error::LengthMismatch {
                left: at,
                right: self.len,
            });
        }
        let low = self.len - at;
        Ok((
            Self::from_raw(self.value >> low, at),
            Self::from_raw(self.value, low),
        ))
    }

    /// Lowercase hex with `ceil(len/4)` digits.
    pub fn to_hex(&self) -> String {
        let width = self.len.div_ceil(4) as usize;
        format!("{:0width$x}", self.value, width = width)
    }

    pub fn from_hex(s: &str, len: u32) -> Result<Self> {
        let value = u64::from_str_radix(s, 16).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Self::new(value, len)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.len as usize)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses a string of `0`/`1` characters, qubit 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> Self {
        b.to_string()
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let x = b("100");
        assert_eq!(x.value(), 4);
        assert!(x.bit(0));
        assert!(!x.bit(2));
    }

    #[test]
    fn xor_and_dot() {
        assert_eq!(b("1010").xor(&b("0011")).unwrap(), b("1001"));
        assert!(b("1010").dot(&b("1100")).unwrap());
        assert!(!b("1010").dot(&b("0101")).unwrap());
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        assert_eq!(
            b("10").xor(&b("101")),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        );
        assert!(b("10").dot(&b("1")).is_err());
    }

    #[test]
    fn concat_split_roundtrip() {
        let (l, r) = b("110").concat(&b("01")).unwrap().split_at(3).unwrap();
        assert_eq!((l, r), (b("110"), b("01")));
    }

    #[test]
    fn hex_roundtrip() {
        let x = b("101101");
        assert_eq!(x.to_hex(), "2d");
        assert_eq!(BitString::from_hex("2d", 6).unwrap(), x);
        assert!(BitString::from_hex("ff", 6).is_err());
    }

    #[test]
    fn rejects_empty_and_oversized() {
        assert!(BitString::new(0, 0).is_err());
        assert!(BitString::new(4, 2).is_err());
        assert!("".parse::<BitString>().is_err());
    }
}
