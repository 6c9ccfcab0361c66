use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::family::FunctionFamily;
use super::hash_words;
use super::oracle::Oracle;
use crate::bits::{mask, BitString};
use crate::error::{Error, Result};

/// Smallest trial count accepted by [`estimate_advantage`].
pub const MIN_TRIALS: usize = 100;

/// Widest family accepted by [`pairwise_independence_test`].
pub const MAX_PAIRWISE_BITS: u32 = 8;

const Z_95: f64 = 1.96;

/// A classical-query distinguisher. Returns its one-bit guess.
pub trait OracleAdversary: Sync {
    fn run(&self, oracle: &mut Oracle, rng: &mut dyn RngCore) -> Result<bool>;
}

/// Outputs a fixed bit without querying.
#[derive(Debug, Clone, Copy)]
pub struct ConstantAdversary(pub bool);

impl OracleAdversary for ConstantAdversary {
    fn run(&self, _: &mut Oracle, _: &mut dyn RngCore) -> Result<bool> {
        Ok(self.0)
    }
}

/// Queries two distinct random points and outputs 1 iff `f(x1) ⊕ x1 = f(x2) ⊕ x2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct XorShiftAdversary;

impl OracleAdversary for XorShiftAdversary {
    fn run(&self, oracle: &mut Oracle, rng: &mut dyn RngCore) -> Result<bool> {
        let n = oracle.n();
        let (x1, x2) = distinct_pair(n, rng)?;
        Ok(oracle.query_raw(x1) ^ x1 == oracle.query_raw(x2) ^ x2)
    }
}

fn distinct_pair(n: u32, rng: &mut dyn RngCore) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "two distinct inputs need n ≥ 1".into(),
        ));
    }
    let x1 = rng.next_u64() & mask(n);
    let x2 = x1 ^ rng.random_range(1..=mask(n));
    Ok((x1, x2))
}

/// `|Pr[A^{F_k} = 1] − Pr[A^f = 1]|` with a 95% normal-approximation half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdvantageEstimate {
    pub trials: usize,
    pub real_rate: f64,
    pub random_rate: f64,
    pub advantage: f64,
    pub half_width: f64,
}

fn trial_rng(seed: u64, world: u64, t: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(hash_words(&[seed, world, t as u64]))
}

/// Monte-Carlo estimate of the distinguishing advantage of `adversary` between
/// `F_k` for a uniform key and a fresh truly random function. Trials run in
/// parallel; the result depends only on `seed` and `trials`.
pub fn estimate_advantage<A: OracleAdversary + ?Sized>(
    adversary: &A,
    family: &FunctionFamily,
    trials: usize,
    seed: u64,
) -> Result<AdvantageEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!(
            "trials = {trials} is below the minimum of {MIN_TRIALS}"
        )));
    }
    let n = family.n();
    let random = FunctionFamily::truly_random(n, seed)?;
    let count = |world: u64| -> Result<usize> {
        let guesses = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, world, t);
                let f = if world == 0 {
                    family.with_fresh_randomness(rng.next_u64())
                } else {
                    random.with_fresh_randomness(rng.next_u64())
                };
                let key = BitString::random(n, &mut rng)?;
                let mut oracle = Oracle::new(f, key)?;
                adversary.run(&mut oracle, &mut rng)
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(guesses.into_iter().filter(|&g| g).count())
    };
    let real_rate = count(0)? as f64 / trials as f64;
    let random_rate = count(1)? as f64 / trials as f64;
    let var = real_rate * (1.0 - real_rate) / trials as f64
        + random_rate * (1.0 - random_rate) / trials as f64;
    Ok(AdvantageEstimate {
        trials,
        real_rate,
        random_rate,
        advantage: (real_rate - random_rate).abs(),
        half_width: Z_95 * var.sqrt(),
    })
}

/// How the two oracle inputs relate in [`pairwise_independence_test`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputRegime {
    /// Both keyed copies are queried on the same pair `(x, x')`.
    SameInput,
    /// Each keyed copy gets its own pair.
    IndependentInputs,
}

/// Chi-square goodness-of-fit of one regime against the uniform law on `2n` bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: InputRegime,
    pub statistic: f64,
    pub degrees_of_freedom: u64,
    /// 0.5% and 99.5% quantiles of the chi-square law.
    pub band: (f64, f64),
    pub within_band: bool,
    pub expected_per_cell: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseReport {
    pub n: u32,
    pub trials: usize,
    pub cells: usize,
    pub regimes: Vec<RegimeReport>,
}

impl PairwiseReport {
    pub fn regime(&self, regime: InputRegime) -> Option<&RegimeReport> {
        self.regimes.iter().find(|r| r.regime == regime)
    }
}

/// Samples, per trial, distinct keys `k1 ≠ k2` and inputs `x ≠ x'`,
/// `y ≠ y'`, and records `(F_{k1}(x) ⊕ F_{k1}(x'), F_{k2}(y) ⊕ F_{k2}(y'))`.
/// For a truly random family the pair is then uniform on `2n` bits; equal
/// keys would force `d1 = d2` with probability `2^-n`. Both input
/// regimes are reported; neither is a verdict about asymptotic security.
pub fn pairwise_independence_test(
    family: &FunctionFamily,
    trials: usize,
    seed: u64,
) -> Result<PairwiseReport> {
    let n = family.n();
    if n > MAX_PAIRWISE_BITS {
        return Err(Error::LimitExceeded {
            what: "pairwise test bits",
            got: n as u64,
            limit: MAX_PAIRWISE_BITS as u64,
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let cells = 1usize << (2 * n);
    let dof = (cells - 1) as u64;
    let chi = ChiSquared::new(dof as f64)
        .map_err(|e| Error::InvalidParameter(format!("chi-square law: {e}")))?;
    let band = (chi.inverse_cdf(0.005), chi.inverse_cdf(0.995));
    let expected = trials as f64 / cells as f64;

    let regimes = [InputRegime::SameInput, InputRegime::IndependentInputs]
        .into_iter()
        .enumerate()
        .map(|(w, regime)| {
            let samples = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, 2 + w as u64, t);
                    let f = family.with_fresh_randomness(rng.next_u64());
                    let (k1, k2) = distinct_pair(n, &mut rng)?;
                    let (x, x2) = distinct_pair(n, &mut rng)?;
                    let (y, y2) = match regime {
                        InputRegime::SameInput => (x, x2),
                        InputRegime::IndependentInputs => distinct_pair(n, &mut rng)?,
                    };
                    let d1 = f.eval_raw(k1, x) ^ f.eval_raw(k1, x2);
                    let d2 = f.eval_raw(k2, y) ^ f.eval_raw(k2, y2);
                    Ok(((d1 << n) | d2) as usize)
                })
                .collect::<Result<Vec<usize>>>()?;
            let mut hist = vec![0u64; cells];
            for c in samples {
                hist[c] += 1;
            }
            let statistic = hist
                .iter()
                .map(|&o| (o as f64 - expected).powi(2) / expected)
                .sum::<f64>();
            Ok(RegimeReport {
                regime,
                statistic,
                degrees_of_freedom: dof,
                band,
                within_band: band.0 <= statistic && statistic <= band.1,
                expected_per_cell: expected,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(PairwiseReport {
        n,
        trials,
        cells,
        regimes,
    })
}
