use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::feistel::{ggm_raw, BlockPermutation, FeistelPermutation};
use super::hash_words;
use crate::bits::{mask, BitString, MAX_BITS};
use crate::error::{Error, Result};

pub const DEFAULT_ROUNDS: u32 = 4;

/// Widest family whose key space may be enumerated exhaustively.
pub const MAX_ENUMERATION_BITS: u32 = 16;

/// Widest `custom_table` family (the table holds `4^n` entries).
const MAX_TABLE_BITS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    TrulyRandom,
    Xor,
    FeistelPrp,
    Ggm,
    ParallelComposition,
    CustomTable,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::TrulyRandom => "truly_random",
            Self::Xor => "xor",
            Self::FeistelPrp => "feistel_prp",
            Self::Ggm => "ggm",
            Self::ParallelComposition => "parallel_composition",
            Self::CustomTable => "custom_table",
        };
        f.write_str(s)
    }
}

/// JSON descriptor `{"kind", "n", "seed", "rounds"?, "sub"?, "table"?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDescriptor {
    pub kind: FamilyKind,
    pub n: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub: Option<Vec<FamilyDescriptor>>,
    /// Rows indexed by key, columns by input (`custom_table` only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<u64>>>,
}

/// Lazily sampled uniform table. Each entry comes from a generator seeded by
/// `(seed, k, x)`, so the table does not depend on evaluation order and
/// concurrent first evaluations of a point agree.
struct RandomTable {
    seed: u64,
    n: u32,
    memo: Mutex<HashMap<(u64, u64), u64>>,
}

impl RandomTable {
    fn value(&self, k: u64, x: u64) -> u64 {
        let mut memo = self.memo.lock().unwrap_or_else(|e| e.into_inner());
        *memo.entry((k, x)).or_insert_with(|| {
            ChaCha8Rng::seed_from_u64(hash_words(&[self.seed, k, x])).next_u64() & mask(self.n)
        })
    }
}

#[derive(Clone)]
enum Kind {
    TrulyRandom(Arc<RandomTable>),
    Xor,
    Feistel(FeistelPermutation),
    Ggm {
        g0: FeistelPermutation,
        g1: FeistelPermutation,
    },
    Parallel(Arc<FunctionFamily>, Arc<FunctionFamily>),
    Table(Arc<Vec<u64>>),
}

/// A keyed function `F: {0,1}^n × {0,1}^n → {0,1}^n`.
#[derive(Clone)]
pub struct FunctionFamily {
    n: u32,
    seed: u64,
    kind: Kind,
}

fn check_width(n: u32, limit: u32) -> Result<()> {
    if n == 0 || n > limit {
        return Err(Error::LimitExceeded {
            what: "family bit length",
            got: n as u64,
            limit: limit as u64,
        });
    }
    Ok(())
}

impl FunctionFamily {
    /// Seeded stand-in for `f ← Func_n`, one independent function per key.
    pub fn truly_random(n: u32, seed: u64) -> Result<Self> {
        check_width(n, MAX_BITS)?;
        Ok(Self {
            n,
            seed,
            kind: Kind::TrulyRandom(Arc::new(RandomTable {
                seed,
                n,
                memo: Mutex::new(HashMap::new()),
            })),
        })
    }

    /// `F(k, x) = k ⊕ x`.
    pub fn xor(n: u32) -> Result<Self> {
        check_width(n, MAX_BITS)?;
        Ok(Self {
            n,
            seed: 0,
            kind: Kind::Xor,
        })
    }

    /// `F(k, x) = P_{seed,x}(k)`: a Feistel permutation of the key whose round
    /// keys are selected by the input, so `k ↦ F(k, x)` is a bijection for
    /// every `x`.
    pub fn feistel(n: u32, seed: u64, rounds: u32) -> Result<Self> {
        check_width(n, MAX_BITS)?;
        Ok(Self {
            n,
            seed,
            kind: Kind::Feistel(FeistelPermutation::new(n, seed, rounds)?),
        })
    }

    /// GGM tree over two Feistel permutations `G_0`, `G_1` derived from `seed`.
    pub fn ggm(n: u32, seed: u64, rounds: u32) -> Result<Self> {
        check_width(n, MAX_BITS)?;
        Ok(Self {
            n,
            seed,
            kind: Kind::Ggm {
                g0: FeistelPermutation::new(n, hash_words(&[seed, 0]), rounds)?,
                g1: FeistelPermutation::new(n, hash_words(&[seed, 1]), rounds)?,
            },
        })
    }

    /// Explicit table, `rows[k][x] = F(k, x)`.
    pub fn custom_table(n: u32, rows: &[Vec<u64>]) -> Result<Self> {
        check_width(n, MAX_TABLE_BITS)?;
        let size = 1usize << n;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidFamily(format!(
                "custom table must be {size}x{size} for n = {n}"
            )));
        }
        if let Some(bad) = rows.iter().flatten().find(|&&v| v >= size as u64) {
            return Err(Error::InvalidFamily(format!(
                "table entry {bad} exceeds {n} bits"
            )));
        }
        Ok(Self {
            n,
            seed: 0,
            kind: Kind::Table(Arc::new(rows.concat())),
        })
    }

    /// Constant function `F(k, x) = value`.
    pub fn constant(n: u32, value: u64) -> Result<Self> {
        let size = 1usize << n.min(MAX_TABLE_BITS + 1);
        Self::custom_table(n, &vec![vec![value; size]; size])
    }

    pub fn from_descriptor(d: &FamilyDescriptor) -> Result<Self> {
        let no_extras = |field: &str, present: bool| {
            if present {
                Err(Error::InvalidFamily(format!(
                    "\"{field}\" is not valid for kind {}",
                    d.kind
                )))
            } else {
                Ok(())
            }
        };
        match d.kind {
            FamilyKind::ParallelComposition => {}
            _ => no_extras("sub", d.sub.is_some())?,
        }
        match d.kind {
            FamilyKind::CustomTable => {}
            _ => no_extras("table", d.table.is_some())?,
        }
        match d.kind {
            FamilyKind::FeistelPrp | FamilyKind::Ggm => {}
            _ => no_extras("rounds", d.rounds.is_some())?,
        }
        let rounds = d.rounds.unwrap_or(DEFAULT_ROUNDS);
        match d.kind {
            FamilyKind::TrulyRandom => Self::truly_random(d.n, d.seed),
            FamilyKind::Xor => Self::xor(d.n),
            FamilyKind::FeistelPrp => Self::feistel(d.n, d.seed, rounds),
            FamilyKind::Ggm => Self::ggm(d.n, d.seed, rounds),
            FamilyKind::CustomTable => {
                let rows = d
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::InvalidFamily("custom_table needs \"table\"".into()))?;
                Self::custom_table(d.n, rows)
            }
            FamilyKind::ParallelComposition => {
                let sub = d.sub.as_deref().unwrap_or_default();
                let [f, g] = sub else {
                    return Err(Error::InvalidFamily(format!(
                        "parallel_composition needs exactly two sub-families, got {}",
                        sub.len()
                    )));
                };
                let h = parallel_compose(&Self::from_descriptor(f)?, &Self::from_descriptor(g)?)?;
                if h.n != d.n {
                    return Err(Error::InvalidFamily(format!(
                        "parallel_composition n = {} but halves give {}",
                        d.n, h.n
                    )));
                }
                Ok(h)
            }
        }
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        let mut d = FamilyDescriptor {
            kind: self.kind(),
            n: self.n,
            seed: self.seed,
            rounds: None,
            sub: None,
            table: None,
        };
        match &self.kind {
            Kind::Feistel(p) => d.rounds = Some(p.rounds()),
            Kind::Ggm { g0, .. } => d.rounds = Some(g0.rounds()),
            Kind::Parallel(f, g) => d.sub = Some(vec![f.descriptor(), g.descriptor()]),
            Kind::Table(t) => {
                let size = 1usize << self.n;
                d.table = Some(t.chunks(size).map(<[u64]>::to_vec).collect());
            }
            Kind::TrulyRandom(_) | Kind::Xor => {}
        }
        d
    }

    pub fn kind(&self) -> FamilyKind {
        match self.kind {
            Kind::TrulyRandom(_) => FamilyKind::TrulyRandom,
            Kind::Xor => FamilyKind::Xor,
            Kind::Feistel(_) => FamilyKind::FeistelPrp,
            Kind::Ggm { .. } => FamilyKind::Ggm,
            Kind::Parallel(..) => FamilyKind::ParallelComposition,
            Kind::Table(_) => FamilyKind::CustomTable,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `F(k, x)`.
    pub fn eval(&self, k: &BitString, x: &BitString) -> Result<BitString> {
        for len in [k.len(), x.len()] {
            if len != self.n {
                return Err(Error::LengthMismatch {
                    left: len,
                    right: self.n,
                });
            }
        }
        Ok(BitString::from_raw(
            self.eval_raw(k.value(), x.value()),
            self.n,
        ))
    }

    /// Unchecked evaluation on packed indices already reduced to `n` bits.
    #[inline]
    pub(crate) fn eval_raw(&self, k: u64, x: u64) -> u64 {
        match &self.kind {
            Kind::TrulyRandom(t) => t.value(k, x),
            Kind::Xor => k ^ x,
            Kind::Feistel(p) => p.with_tweak(x).apply(k),
            Kind::Ggm { g0, g1 } => ggm_raw(g0, g1, k, x, self.n),
            Kind::Parallel(f, g) => {
                let half = f.n;
                let lo = mask(half);
                let left = f.eval_raw(k >> half, x >> half);
                let right = g.eval_raw(k & lo, x & lo);
                (left << half) | right
            }
            Kind::Table(t) => t[((k as usize) << self.n) | x as usize],
        }
    }

    /// Redraws truly random tables from `seed`; deterministic families are
    /// returned unchanged.
    pub fn with_fresh_randomness(&self, seed: u64) -> Self {
        match &self.kind {
            Kind::TrulyRandom(_) => {
                Self::truly_random(self.n, seed).expect("width already validated")
            }
            Kind::Parallel(f, g) => Self {
                kind: Kind::Parallel(
                    Arc::new(f.with_fresh_randomness(hash_words(&[seed, 0]))),
                    Arc::new(g.with_fresh_randomness(hash_words(&[seed, 1]))),
                ),
                ..self.clone()
            },
            _ => self.clone(),
        }
    }
}

impl fmt::Debug for FunctionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionFamily")
            .field("kind", &self.kind())
            .field("n", &self.n)
            .field("seed", &self.seed)
            .finish()
    }
}

/// `H_{k1∥k2}(x1∥x2) = F_{k1}(x1) ∥ G_{k2}(x2)`.
pub fn parallel_compose(f: &FunctionFamily, g: &FunctionFamily) -> Result<FunctionFamily> {
    if f.n != g.n {
        return Err(Error::LengthMismatch {
            left: f.n,
            right: g.n,
        });
    }
    check_width(2 * f.n, MAX_BITS)?;
    Ok(FunctionFamily {
        n: 2 * f.n,
        seed: hash_words(&[f.seed, g.seed]),
        kind: Kind::Parallel(Arc::new(f.clone()), Arc::new(g.clone())),
    })
}

/// Whether `k ↦ F(k, x)` is a bijection, by enumerating all `2^n` keys.
pub fn is_key_permutation(family: &FunctionFamily, x: &BitString) -> Result<bool> {
    check_width(family.n, MAX_ENUMERATION_BITS).map_err(|_| Error::LimitExceeded {
        what: "key-space enumeration bits",
        got: family.n as u64,
        limit: MAX_ENUMERATION_BITS as u64,
    })?;
    if x.len() != family.n {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: family.n,
        });
    }
    let size = 1usize << family.n;
    let mut seen = vec![false; size];
    for k in 0..size as u64 {
        let y = family.eval_raw(k, x.value()) as usize;
        if std::mem::replace(&mut seen[y], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn xor_family_eval() {
        let f = FunctionFamily::xor(4).unwrap();
        assert_eq!(f.eval(&b("1010"), &b("0011")).unwrap(), b("1001"));
    }

    #[test]
    fn eval_is_deterministic() {
        let fams = [
            FunctionFamily::truly_random(5, 3).unwrap(),
            FunctionFamily::feistel(5, 3, 4).unwrap(),
            FunctionFamily::ggm(5, 3, 4).unwrap(),
        ];
        for f in &fams {
            let (k, x) = (b("10110"), b("01101"));
            assert_eq!(f.eval(&k, &x).unwrap(), f.eval(&k, &x).unwrap(), "{f:?}");
            let again = FunctionFamily::from_descriptor(&f.descriptor()).unwrap();
            assert_eq!(
                f.eval(&k, &x).unwrap(),
                again.eval(&k, &x).unwrap(),
                "{f:?}"
            );
        }
    }

    #[test]
    fn ggm_family_two_bits_hand_unrolled() {
        let f = FunctionFamily::ggm(2, 21, 4).unwrap();
        let g0 = FeistelPermutation::new(2, hash_words(&[21, 0]), 4).unwrap();
        let g1 = FeistelPermutation::new(2, hash_words(&[21, 1]), 4).unwrap();
        for k in 0..4 {
            // x = 10: apply G_0 (bit x_2 = 0) first, then G_1 (bit x_1 = 1).
            let want = g1.apply(g0.apply(k));
            let got = f.eval(&BitString::new(k, 2).unwrap(), &b("10")).unwrap();
            assert_eq!(got.value(), want);
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let f = FunctionFamily::xor(4).unwrap();
        assert!(matches!(
            f.eval(&b("101"), &b("0011")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn key_permutation_examples() {
        let xor = FunctionFamily::xor(4).unwrap();
        for x in 0..16 {
            assert!(is_key_permutation(&xor, &BitString::new(x, 4).unwrap()).unwrap());
        }
        let constant = FunctionFamily::constant(3, 5).unwrap();
        assert!(!is_key_permutation(&constant, &b("010")).unwrap());
        let wide = FunctionFamily::xor(17).unwrap();
        assert!(matches!(
            is_key_permutation(&wide, &BitString::zeros(17).unwrap()),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn truly_random_usually_collides() {
        // 16 keys into 16 outputs: a bijection has probability 16!/16^16 ≈ 1e-6.
        let f = FunctionFamily::truly_random(4, 7).unwrap();
        let collide = (0..16)
            .filter(|&x| !is_key_permutation(&f, &BitString::new(x, 4).unwrap()).unwrap())
            .count();
        assert!(
            collide >= 15,
            "only {collide} of 16 inputs had a key collision"
        );
    }

    #[test]
    fn parallel_composition_of_xor() {
        let h = parallel_compose(
            &FunctionFamily::xor(3).unwrap(),
            &FunctionFamily::xor(3).unwrap(),
        )
        .unwrap();
        let (k1, k2, x1, x2) = (b("101"), b("011"), b("110"), b("111"));
        let got = h
            .eval(&k1.concat(&k2).unwrap(), &x1.concat(&x2).unwrap())
            .unwrap();
        let want = k1.xor(&x1).unwrap().concat(&k2.xor(&x2).unwrap()).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn parallel_composition_rejects_mismatch() {
        let r = parallel_compose(
            &FunctionFamily::xor(3).unwrap(),
            &FunctionFamily::xor(2).unwrap(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn descriptor_json_shape() {
        let h = parallel_compose(
            &FunctionFamily::feistel(2, 5, 3).unwrap(),
            &FunctionFamily::xor(2).unwrap(),
        )
        .unwrap();
        let v = serde_json::to_value(h.descriptor()).unwrap();
        assert_eq!(v["kind"], "parallel_composition");
        assert_eq!(v["n"], 4);
        assert_eq!(v["sub"][0]["kind"], "feistel_prp");
        assert_eq!(v["sub"][0]["rounds"], 3);
        assert!(v.get("table").is_none());
    }

    #[test]
    fn descriptor_validation() {
        let bad: FamilyDescriptor =
            serde_json::from_str(r#"{"kind":"xor","n":3,"rounds":4}"#).unwrap();
        assert!(FunctionFamily::from_descriptor(&bad).is_err());
        assert!(
            serde_json::from_str::<FamilyDescriptor>(r#"{"kind":"xor","n":3,"extra":1}"#).is_err()
        );
        assert!(serde_json::from_str::<FamilyDescriptor>(r#"{"kind":"aes","n":3}"#).is_err());
        let missing: FamilyDescriptor =
            serde_json::from_str(r#"{"kind":"custom_table","n":1}"#).unwrap();
        assert!(FunctionFamily::from_descriptor(&missing).is_err());
        let table: FamilyDescriptor =
            serde_json::from_str(r#"{"kind":"custom_table","n":1,"table":[[0,1],[1,1]]}"#).unwrap();
        let f = FunctionFamily::from_descriptor(&table).unwrap();
        assert_eq!(f.eval(&b("1"), &b("0")).unwrap(), b("1"));
    }

    #[test]
    fn fresh_randomness_only_touches_random_tables() {
        let feistel = FunctionFamily::feistel(4, 1, 4).unwrap();
        let again = feistel.with_fresh_randomness(99);
        assert!((0..16).all(|k| feistel.eval_raw(k, 3) == again.eval_raw(k, 3)));
        let random = FunctionFamily::truly_random(8, 1).unwrap();
        let redrawn = random.with_fresh_randomness(2);
        assert!((0..256).any(|k| random.eval_raw(k, 0) != redrawn.eval_raw(k, 0)));
    }
}
