use super::hash_words;
use crate::bits::{mask, BitString};
use crate::error::{Error, Result};

/// A bijection on `{0,1}^n`, addressed by packed basis index.
pub trait BlockPermutation {
    fn block_len(&self) -> u32;
    fn apply(&self, x: u64) -> u64;
    fn invert(&self, y: u64) -> u64;
}

/// Keyed Feistel network on `n`-bit blocks.
///
/// The block splits into a high part of `floor(n/2)` bits and a low part of
/// `ceil(n/2)` bits. Each round maps `(l, r)` to `(r, l ⊕ f(r))`; for odd `n`
/// the halves have different widths, which keeps each round invertible
/// because `r` is carried through untouched. A keyed XOR whitening follows
/// the last round so that `n = 1` (an empty high half) still depends on the
/// key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeistelPermutation {
    n: u32,
    seed: u64,
    tweak: u64,
    rounds: u32,
}

pub const MIN_ROUNDS: u32 = 3;

impl FeistelPermutation {
    pub fn new(n: u32, seed: u64, rounds: u32) -> Result<Self> {
        if n == 0 || n > crate::bits::MAX_BITS {
            return Err(Error::InvalidFamily(format!(
                "Feistel block length {n} out of range"
            )));
        }
        if rounds < MIN_ROUNDS {
            return Err(Error::InvalidFamily(format!(
                "Feistel network needs at least {MIN_ROUNDS} rounds, got {rounds}"
            )));
        }
        Ok(Self {
            n,
            seed,
            tweak: 0,
            rounds,
        })
    }

    /// Same network with independent round keys selected by `tweak`.
    pub fn with_tweak(&self, tweak: u64) -> Self {
        Self { tweak, ..*self }
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    fn round_fn(&self, round: u32, half: u64) -> u64 {
        hash_words(&[self.seed, self.tweak, round as u64, half])
    }

    #[inline]
    fn whitening(&self) -> u64 {
        hash_words(&[self.seed, self.tweak, u64::MAX]) & mask(self.n)
    }

    #[inline]
    fn split(&self) -> (u32, u32) {
        let high = self.n / 2;
        (high, self.n - high)
    }

    pub fn apply_bits(&self, x: &BitString) -> Result<BitString> {
        self.check(x)?;
        Ok(BitString::from_raw(self.apply(x.value()), self.n))
    }

    pub fn invert_bits(&self, y: &BitString) -> Result<BitString> {
        self.check(y)?;
        Ok(BitString::from_raw(self.invert(y.value()), self.n))
    }

    fn check(&self, x: &BitString) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.n,
            });
        }
        Ok(())
    }
}

impl BlockPermutation for FeistelPermutation {
    fn block_len(&self) -> u32 {
        self.n
    }

    fn apply(&self, x: u64) -> u64 {
        let (high, low) = self.split();
        let (hmask, lmask) = (mask(high), mask(low));
        let mut v = x & mask(self.n);
        for round in 0..self.rounds {
            let l = v >> low;
            let r = v & lmask;
            let t = (l ^ self.round_fn(round, r)) & hmask;
            v = (r << high) | t;
        }
        v ^ self.whitening()
    }

    fn invert(&self, y: u64) -> u64 {
        let (high, low) = self.split();
        let hmask = mask(high);
        let mut v = (y & mask(self.n)) ^ self.whitening();
        for round in (0..self.rounds).rev() {
            let r = v >> high;
            let t = v & hmask;
            let l = (t ^ self.round_fn(round, r)) & hmask;
            v = (l << low) | r;
        }
        v
    }
}

/// Explicit permutation table, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TablePermutation {
    n: u32,
    forward: Vec<u64>,
    inverse: Vec<u64>,
}

impl TablePermutation {
    pub fn new(n: u32, forward: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::InvalidFamily(format!(
                "table permutation on {n} bits"
            )));
        }
        let size = 1usize << n;
        if forward.len() != size {
            return Err(Error::InvalidFamily(format!(
                "table has {} entries, expected {size}",
                forward.len()
            )));
        }
        let mut inverse = vec![u64::MAX; size];
        for (x, &y) in forward.iter().enumerate() {
            if y as usize >= size || inverse[y as usize] != u64::MAX {
                return Err(Error::InvalidFamily(format!(
                    "table is not a permutation: output {y} repeated or out of range"
                )));
            }
            inverse[y as usize] = x as u64;
        }
        Ok(Self {
            n,
            forward,
            inverse,
        })
    }
}

impl BlockPermutation for TablePermutation {
    fn block_len(&self) -> u32 {
        self.n
    }

    fn apply(&self, x: u64) -> u64 {
        self.forward[x as usize]
    }

    fn invert(&self, y: u64) -> u64 {
        self.inverse[y as usize]
    }
}

/// `G_{x_1}(⋯ G_{x_{n−1}}(G_{x_n}(k)) ⋯)`: the last input bit selects the first
/// permutation applied.
pub fn ggm_eval<P: BlockPermutation + ?Sized>(
    g0: &P,
    g1: &P,
    k: &BitString,
    x: &BitString,
) -> Result<BitString> {
    let n = k.len();
    for len in [g0.block_len(), g1.block_len(), x.len()] {
        if len != n {
            return Err(Error::LengthMismatch {
                left: len,
                right: n,
            });
        }
    }
    Ok(BitString::from_raw(
        ggm_raw(g0, g1, k.value(), x.value(), n),
        n,
    ))
}

#[inline]
pub(crate) fn ggm_raw<P: BlockPermutation + ?Sized>(g0: &P, g1: &P, k: u64, x: u64, n: u32) -> u64 {
    // Bit x_n is the least significant bit of the packed index.
    (0..n).fold(k, |acc, j| {
        if (x >> j) & 1 == 1 {
            g1.apply(acc)
        } else {
            g0.apply(acc)
        }
    })
}
