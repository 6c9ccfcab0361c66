use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::attacks::{all_plus_probability, circular_basis, two_world_success};
use super::mixture::{average_ciphertext, MixtureSpec};
use super::report::{AttackReport, Verdict};
use crate::bits::{mask, BitString};
use crate::error::{Error, Result};
use crate::prf::{
    estimate_advantage, hash_words, parallel_compose, FunctionFamily, Oracle, OracleAdversary,
    MIN_TRIALS,
};
use crate::quantum::{
    hadamard_all, measure_in_basis, trace_distance, DensityMatrix, PureState, TOLERANCE,
};
use crate::schemes::{ehe_enc_with, KeyPair, Scheme};

const Z_95: f64 = 1.96;

/// A one-shot adversary: picks a challenge plaintext, then measures the
/// ciphertext and outputs 1 with the returned probability.
pub trait MeasurementAdversary: Sync {
    fn name(&self) -> String;

    fn challenge(&self, n: u32) -> Result<DensityMatrix>;

    fn accept_probability(
        &self,
        r1: Option<&BitString>,
        r2: Option<&BitString>,
        rho: &DensityMatrix,
    ) -> Result<f64>;
}

/// Outputs a fair coin.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomGuessAdversary;

impl MeasurementAdversary for RandomGuessAdversary {
    fn name(&self) -> String {
        "random_guess".into()
    }

    fn challenge(&self, n: u32) -> Result<DensityMatrix> {
        DensityMatrix::basis(BitString::zeros(n)?)
    }

    fn accept_probability(
        &self,
        _: Option<&BitString>,
        _: Option<&BitString>,
        _: &DensityMatrix,
    ) -> Result<f64> {
        Ok(0.5)
    }
}

/// Challenge `|+⟩^{⊗n}`; accepts on the all-`+` outcome.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlusStateAdversary;

impl MeasurementAdversary for PlusStateAdversary {
    fn name(&self) -> String {
        "plus_state".into()
    }

    fn challenge(&self, n: u32) -> Result<DensityMatrix> {
        Ok(PureState::plus().power(n)?.to_density())
    }

    fn accept_probability(
        &self,
        _: Option<&BitString>,
        _: Option<&BitString>,
        rho: &DensityMatrix,
    ) -> Result<f64> {
        Ok(all_plus_probability(rho))
    }
}

/// Challenge `((|0⟩+i|1⟩)/√2)^{⊗n}`; accepts on the all-`+i` outcome.
#[derive(Debug, Clone, Copy, Default)]
pub struct CircularStateAdversary;

impl MeasurementAdversary for CircularStateAdversary {
    fn name(&self) -> String {
        "circular_state".into()
    }

    fn challenge(&self, n: u32) -> Result<DensityMatrix> {
        Ok(PureState::plus_i().power(n)?.to_density())
    }

    fn accept_probability(
        &self,
        _: Option<&BitString>,
        _: Option<&BitString>,
        rho: &DensityMatrix,
    ) -> Result<f64> {
        Ok(measure_in_basis(rho, &circular_basis(rho.n())?)?[0])
    }
}

/// Challenge `|+⟩^{⊗n}` for EHE: undoes the public layers it can, then accepts
/// on the all-zero computational outcome. Reads nothing secret.
#[derive(Debug, Clone, Copy, Default)]
pub struct HadamardUndoAdversary;

impl MeasurementAdversary for HadamardUndoAdversary {
    fn name(&self) -> String {
        "hadamard_undo".into()
    }

    fn challenge(&self, n: u32) -> Result<DensityMatrix> {
        Ok(PureState::plus().power(n)?.to_density())
    }

    fn accept_probability(
        &self,
        _: Option<&BitString>,
        _: Option<&BitString>,
        rho: &DensityMatrix,
    ) -> Result<f64> {
        Ok(hadamard_all(rho).get(0, 0).re.max(0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndMode {
    /// Key averages by enumeration at one randomness pair drawn from the seed.
    Exact,
    /// Monte-Carlo over keys, randomness and the adversary's coin.
    Sampled { trials: usize },
}

/// What the experiment is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndExpectation {
    Indistinguishable,
    AdvantageAtLeast(f64),
}

/// `|Pr[A(Enc(σ)) = 1] − Pr[A(Enc(I/2^n)) = 1]|` for one challenge.
pub fn ind_game<A: MeasurementAdversary + ?Sized>(
    scheme: &Scheme,
    adversary: &A,
    mode: IndMode,
    expectation: IndExpectation,
    seed: u64,
) -> Result<AttackReport> {
    let n = scheme.n();
    if scheme.variant().classical_messages() {
        return Err(Error::InvalidScheme(format!(
            "{} encrypts classical messages",
            scheme.variant()
        )));
    }
    let sigma = adversary.challenge(n)?;
    let mixed = DensityMatrix::maximally_mixed(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p1, p0, half_width, distance) = match mode {
        IndMode::Exact => {
            let r1 = BitString::random(n, &mut rng)?;
            let r2 = BitString::random(n, &mut rng)?;
            let avg = |s: &DensityMatrix| {
                average_ciphertext(
                    &MixtureSpec::new(scheme.clone(), s.clone()).with_randomness(r1, r2),
                )
            };
            let (rho1, rho0) = (avg(&sigma)?, avg(&mixed)?);
            let (o1, o2) = public_randomness(scheme, &r1, &r2);
            let p1 = adversary.accept_probability(o1, o2, &rho1)?;
            let p0 = adversary.accept_probability(o1, o2, &rho0)?;
            (p1, p0, 0.0, Some(trace_distance(&rho1, &rho0)?))
        }
        IndMode::Sampled { trials } => {
            if trials < MIN_TRIALS {
                return Err(Error::InvalidParameter(format!(
                    "trials = {trials} is below the minimum of {MIN_TRIALS}"
                )));
            }
            let rate = |world: u64, plaintext: &DensityMatrix| -> Result<f64> {
                let hits = (0..trials)
                    .into_par_iter()
                    .map(|t| {
                        let mut rng =
                            ChaCha8Rng::seed_from_u64(hash_words(&[seed, world, t as u64]));
                        let key = scheme.keygen(&mut rng)?;
                        let (r1, r2) = scheme.draw_randomness(&mut rng)?;
                        let rho =
                            scheme.encrypt_state_with(&key, plaintext, r1.as_ref(), r2.as_ref())?;
                        let p = adversary.accept_probability(r1.as_ref(), r2.as_ref(), &rho)?;
                        Ok(rng.random::<f64>() < p)
                    })
                    .collect::<Result<Vec<bool>>>()?;
                Ok(hits.into_iter().filter(|&h| h).count() as f64 / trials as f64)
            };
            let (p1, p0) = (rate(1, &sigma)?, rate(0, &mixed)?);
            let hw =
                Z_95 * (p1 * (1.0 - p1) / trials as f64 + p0 * (1.0 - p0) / trials as f64).sqrt();
            (p1, p0, hw, None)
        }
    };
    let advantage = (p1 - p0).abs();
    let slack = match mode {
        IndMode::Exact => TOLERANCE,
        IndMode::Sampled { .. } => half_width,
    };
    let (bound, ok) = match expectation {
        IndExpectation::Indistinguishable => (0.0, advantage <= slack.max(TOLERANCE)),
        IndExpectation::AdvantageAtLeast(b) => (b, advantage >= b - slack),
    };
    let mut report = AttackReport::new("ind_game", n)
        .detail("scheme", scheme.descriptor())
        .detail("adversary", adversary.name())
        .detail("mode", mode)
        .detail("accept_rate_challenge", p1)
        .detail("accept_rate_mixed", p0)
        .detail("advantage", advantage)
        .detail("half_width", half_width)
        .detail("seed", seed);
    report.trace_distance = distance;
    report.success_probability = Some(two_world_success(p1, p0));
    report.claimed_bound = Some(bound);
    report.verdict = Verdict::from_bool(ok);
    Ok(report)
}

fn public_randomness<'a>(
    scheme: &Scheme,
    r1: &'a BitString,
    r2: &'a BitString,
) -> (Option<&'a BitString>, Option<&'a BitString>) {
    match scheme.variant().randomness_count() {
        0 => (None, None),
        1 => (Some(r1), None),
        _ => (Some(r1), Some(r2)),
    }
}

/// The classical-oracle distinguisher that wraps a measurement adversary: it
/// queries `(s1, s2) = (O1(r1), O2(r2))`, encrypts the adversary's challenge as
/// `X^{s2} H X^{s1} σ X^{s1} H X^{s2}` and outputs the adversary's bit.
///
/// The oracle pair is one oracle for `(F, G)` composed in parallel on `2n` bits.
struct ReductionDistinguisher<'a, A: ?Sized> {
    n: u32,
    adversary: &'a A,
    sigma: DensityMatrix,
}

impl<A: MeasurementAdversary + ?Sized> OracleAdversary for ReductionDistinguisher<'_, A> {
    fn run(&self, oracle: &mut Oracle, rng: &mut dyn RngCore) -> Result<bool> {
        let n = self.n;
        let r1 = rng.next_u64() & mask(n);
        let r2 = rng.next_u64() & mask(n);
        let s = oracle.query_raw((r1 << n) | r2);
        let (s1, s2) = (BitString::new(s >> n, n)?, BitString::new(s & mask(n), n)?);
        // Pads enter as keys of xor families at zero randomness.
        let xor = FunctionFamily::xor(n)?;
        let zero = BitString::zeros(n)?;
        let ct = ehe_enc_with(
            &xor,
            &xor,
            &KeyPair::new(s1, s2)?,
            &self.sigma,
            &zero,
            &zero,
        )?;
        let (r1, r2) = (BitString::new(r1, n)?, BitString::new(r2, n)?);
        let p = self
            .adversary
            .accept_probability(Some(&r1), Some(&r2), ct.quantum_state()?)?;
        Ok(rng.random::<f64>() < p)
    }
}

/// Advantage of the wrapped distinguisher between the oracle pair
/// `(F_{k1}, G_{k2})` and a pair of truly random functions.
pub fn reduction_advantage<A: MeasurementAdversary + ?Sized>(
    f: &FunctionFamily,
    g: &FunctionFamily,
    adversary: &A,
    trials: usize,
    seed: u64,
) -> Result<AttackReport> {
    let n = f.n();
    let h = parallel_compose(f, g)?;
    let d = ReductionDistinguisher {
        n,
        adversary,
        sigma: adversary.challenge(n)?,
    };
    let est = estimate_advantage(&d, &h, trials, seed)?;
    let mut report = AttackReport::new("reduction", n)
        .detail("adversary", adversary.name())
        .detail("estimate", est)
        .detail("f", f.descriptor())
        .detail("g", g.descriptor())
        .detail("seed", seed);
    report.success_probability = Some(two_world_success(est.real_rate, est.random_rate));
    report.claimed_bound = Some(0.0);
    report.verdict = Verdict::from_bool(est.advantage <= est.half_width.max(TOLERANCE));
    Ok(report)
}
