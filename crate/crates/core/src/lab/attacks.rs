use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::mixture::{average_ciphertext, ordered_average, MixtureSpec, MAX_PAIR_KEY_BITS};
use super::report::{AttackReport, Verdict};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::prf::FunctionFamily;
use crate::quantum::{
    hadamard_all, measure_in_basis, trace_distance, DensityMatrix, PureState, ALGEBRAIC_TOLERANCE,
    TOLERANCE,
};
use crate::schemes::{
    ehe_enc_with, ehe_pads, permutation_enc, xczc_enc, ClassicalBlockScheme, KeyPair, Scheme,
};

/// Widest block for [`prop1_attack`].
pub const MAX_PROP1_QUBITS: u32 = 6;

/// Blocks up to this width test every randomness value in [`thm4_attack`].
const THM4_ALL_RANDOMNESS_BITS: u32 = 4;

/// `½ (P[accept | world 1] + P[reject | world 2])`.
pub fn two_world_success(accept_1: f64, accept_2: f64) -> f64 {
    0.5 * (accept_1 + 1.0 - accept_2)
}

/// `½ (1 + D(ρ1, ρ2))`, the best success of any measurement.
pub fn helstrom_success(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    Ok(0.5 * (1.0 + trace_distance(rho1, rho2)?))
}

/// Product basis of `(|0⟩ ± i|1⟩)/√2`, index bit 1 selecting `−i`. Index 0 is
/// the all-`+i` outcome.
pub fn circular_basis(n: u32) -> Result<Vec<PureState>> {
    (0..1u64 << n)
        .map(|idx| {
            let pick = |q: u32| {
                if (idx >> (n - 1 - q)) & 1 == 1 {
                    PureState::minus_i()
                } else {
                    PureState::plus_i()
                }
            };
            (1..n).try_fold(pick(0), |acc, q| acc.tensor(&pick(q)))
        })
        .collect()
}

/// Probability of the all-zero outcome after measuring every qubit in `{|+⟩, |−⟩}`.
pub fn all_plus_probability(rho: &DensityMatrix) -> f64 {
    hadamard_all(rho).get(0, 0).re.max(0.0)
}

fn prop1_states(n: u32) -> Result<(DensityMatrix, DensityMatrix)> {
    let phase = PureState::plus_i().power(n)?.to_density();
    let zero = DensityMatrix::basis(BitString::zeros(n)?)?;
    Ok((phase, zero))
}

fn check_prop1_width(n: u32) -> Result<()> {
    if n == 0 || n > MAX_PROP1_QUBITS {
        return Err(Error::LimitExceeded {
            what: "prop1 block size",
            got: n as u64,
            limit: MAX_PROP1_QUBITS as u64,
        });
    }
    Ok(())
}

/// The `X^cZ^c` scheme against challenges `((|0⟩+i|1⟩)/√2)^{⊗n}` and
/// `|0⟩^{⊗n}`, decided by the all-`+i` outcome of a circular-basis measurement.
pub fn prop1_attack(n: u32) -> Result<AttackReport> {
    prop1_attack_ordered(n, false)
}

/// [`prop1_attack`] with the two challenges optionally swapped; the
/// distinguisher then accepts on every outcome except all-`+i`.
pub fn prop1_attack_ordered(n: u32, swapped: bool) -> Result<AttackReport> {
    check_prop1_width(n)?;
    let scheme = Scheme::xczc(n)?;
    let (s1, s2) = prop1_states(n)?;
    let (s1, s2) = if swapped { (s2, s1) } else { (s1, s2) };
    let rho1 = average_ciphertext(&MixtureSpec::new(scheme.clone(), s1))?;
    let rho2 = average_ciphertext(&MixtureSpec::new(scheme, s2))?;
    let basis = circular_basis(n)?;
    let p1 = measure_in_basis(&rho1, &basis)?;
    let p2 = measure_in_basis(&rho2, &basis)?;
    let accept = |p: &[f64]| if swapped { 1.0 - p[0] } else { p[0] };
    let success = two_world_success(accept(&p1), accept(&p2));
    let distance = trace_distance(&rho1, &rho2)?;
    let bound = 1.0 - 0.25f64.powi(n as i32);
    let mut report = AttackReport::new("prop1", n)
        .detail("swapped", swapped)
        .detail("helstrom_optimum", 0.5 * (1.0 + distance))
        .detail("all_phase_outcome_world1", p1[0])
        .detail("all_phase_outcome_world2", p2[0])
        .detail(
            "bound_exceeds_helstrom",
            bound > 0.5 * (1.0 + distance) + TOLERANCE,
        );
    report.trace_distance = Some(distance);
    report.success_probability = Some(success);
    report.claimed_bound = Some(bound);
    report.verdict = Verdict::from_bool((success - bound).abs() <= TOLERANCE);
    Ok(report)
}

fn randomness_to_test(n: u32) -> Result<Vec<BitString>> {
    let count = if n <= THM4_ALL_RANDOMNESS_BITS {
        1u64 << n
    } else {
        16
    };
    (0..count).map(|r| BitString::new(r, n)).collect()
}

fn thm4_report(
    name: &str,
    n: u32,
    per_r: impl Fn(&BitString) -> Result<(f64, f64, f64)>,
) -> Result<AttackReport> {
    let rs = randomness_to_test(n)?;
    let mut worst: Option<(f64, f64, f64, BitString)> = None;
    for r in &rs {
        let (a1, a2, d) = per_r(r)?;
        let s = two_world_success(a1, a2);
        if worst
            .as_ref()
            .is_none_or(|w| two_world_success(w.0, w.1) > s)
        {
            worst = Some((a1, a2, d, *r));
        }
    }
    let (a1, a2, d, r) = worst.expect("at least one randomness value");
    let success = two_world_success(a1, a2);
    let bound = 1.0 - 0.5f64.powi(n as i32);
    let mut report = AttackReport::new(name, n)
        .detail("randomness_tested", rs.len())
        .detail("worst_randomness", r)
        .detail("all_plus_outcome_world1", a1)
        .detail("all_plus_outcome_world2", a2);
    report.trace_distance = Some(d);
    report.success_probability = Some(success);
    report.claimed_bound = Some(bound);
    report.verdict = Verdict::from_bool(success >= bound - TOLERANCE);
    Ok(report)
}

fn thm4_states(n: u32) -> Result<(DensityMatrix, DensityMatrix)> {
    Ok((
        PureState::plus().power(n)?.to_density(),
        DensityMatrix::basis(BitString::zeros(n)?)?,
    ))
}

/// Single-layer `X^{F(k,r)}` encryption of `|+⟩^{⊗n}` versus `|0⟩^{⊗n}`,
/// decided by the all-`+` outcome. Reports the worst randomness value.
pub fn thm4_attack(f: &FunctionFamily) -> Result<AttackReport> {
    let n = f.n();
    let scheme = Scheme::qbe_single(f.clone());
    let (plus, zero) = thm4_states(n)?;
    thm4_report("thm4", n, |r| {
        let mix = |s: &DensityMatrix| {
            average_ciphertext(&MixtureSpec::new(scheme.clone(), s.clone()).with_randomness(*r, *r))
        };
        let (rho1, rho2) = (mix(&plus)?, mix(&zero)?);
        Ok((
            all_plus_probability(&rho1),
            all_plus_probability(&rho2),
            trace_distance(&rho1, &rho2)?,
        ))
    })
    .map(|rep| rep.detail("family", f.descriptor()))
}

/// [`thm4_attack`] against the basis-permutation lift of any length-preserving
/// classical scheme.
pub fn thm4_attack_classical<S: ClassicalBlockScheme + ?Sized>(scheme: &S) -> Result<AttackReport> {
    let n = scheme.block_len();
    if n == 0 || n > super::mixture::MAX_SINGLE_KEY_BITS {
        return Err(Error::LimitExceeded {
            what: "key enumeration block size",
            got: n as u64,
            limit: super::mixture::MAX_SINGLE_KEY_BITS as u64,
        });
    }
    let (plus, zero) = thm4_states(n)?;
    thm4_report("thm4_classical", n, |r| {
        let mix = |s: &DensityMatrix| {
            ordered_average(n, 1 << n, |k| {
                Ok(permutation_enc(scheme, &BitString::new(k, n)?, r, s)?.into_matrix())
            })
        };
        let (rho1, rho2) = (mix(&plus)?, mix(&zero)?);
        Ok((
            all_plus_probability(&rho1),
            all_plus_probability(&rho2),
            trace_distance(&rho1, &rho2)?,
        ))
    })
    .map(|rep| rep.detail("scheme", scheme.name()))
}

/// Random instances of the reuse identity checked by [`reuse_attack`].
const REUSE_INSTANCES: usize = 16;

/// Re-encrypting an EHE ciphertext under its own `(r1, r2)`.
///
/// Checks the result is `X^c Z^c σ Z^c X^c` with `c = F(k1,r1) ⊕ G(k2,r2)`,
/// then runs the circular-basis distinguisher on the key average of the
/// re-encrypted challenges. The control is the key average of a single
/// challenge ciphertext.
pub fn reuse_attack(f: &FunctionFamily, g: &FunctionFamily, seed: u64) -> Result<AttackReport> {
    let n = f.n();
    if g.n() != n {
        return Err(Error::LengthMismatch {
            left: g.n(),
            right: n,
        });
    }
    if n > MAX_PAIR_KEY_BITS {
        return Err(Error::LimitExceeded {
            what: "key enumeration block size",
            got: n as u64,
            limit: MAX_PAIR_KEY_BITS as u64,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut identity_error = 0.0f64;
    for _ in 0..REUSE_INSTANCES {
        let kp = KeyPair::random(n, &mut rng)?;
        let r1 = BitString::random(n, &mut rng)?;
        let r2 = BitString::random(n, &mut rng)?;
        let sigma = DensityMatrix::random(n, &mut rng)?;
        let challenge = ehe_enc_with(f, g, &kp, &sigma, &r1, &r2)?;
        let again = ehe_enc_with(f, g, &kp, challenge.quantum_state()?, &r1, &r2)?;
        let (pf, pg) = ehe_pads(f, g, &kp, &r1, &r2)?;
        let expected = xczc_enc(&pf.xor(&pg)?, &sigma)?;
        identity_error = identity_error.max(again.quantum_state()?.max_abs_diff(&expected)?);
    }

    let r1 = BitString::random(n, &mut rng)?;
    let r2 = BitString::random(n, &mut rng)?;
    let (s1, s2) = prop1_states(n)?;
    let key_pair = |key: u64| -> Result<KeyPair> {
        KeyPair::new(
            BitString::new(key >> n, n)?,
            BitString::new(key & ((1 << n) - 1), n)?,
        )
    };
    let reencrypted = |s: &DensityMatrix| {
        ordered_average(n, 1 << (2 * n), |key| {
            let kp = key_pair(key)?;
            let once = ehe_enc_with(f, g, &kp, s, &r1, &r2)?;
            let twice = ehe_enc_with(f, g, &kp, once.quantum_state()?, &r1, &r2)?;
            Ok(twice.quantum_state()?.matrix().clone())
        })
    };
    let (rho1, rho2) = (reencrypted(&s1)?, reencrypted(&s2)?);
    let basis = circular_basis(n)?;
    let success = two_world_success(
        measure_in_basis(&rho1, &basis)?[0],
        measure_in_basis(&rho2, &basis)?[0],
    );
    let prop1_level = prop1_attack(n)?
        .success_probability
        .expect("set by prop1_attack");

    let control = average_ciphertext(
        &MixtureSpec::new(Scheme::qbe_ehe(f.clone(), g.clone())?, s1.clone())
            .with_randomness(r1, r2),
    )?;
    let control_distance = trace_distance(&control, &DensityMatrix::maximally_mixed(n)?)?;

    let identity_holds = identity_error <= ALGEBRAIC_TOLERANCE;
    let matches_prop1 = (success - prop1_level).abs() <= TOLERANCE;
    let mut report = AttackReport::new("reuse", n)
        .detail("identity_max_error", identity_error)
        .detail("identity_instances", REUSE_INSTANCES)
        .detail("identity_holds", identity_holds)
        .detail("prop1_exact_success", prop1_level)
        .detail("matches_prop1_level", matches_prop1)
        .detail("randomness", (r1, r2))
        .detail("control_distance_from_mixed", control_distance)
        .detail("f", f.descriptor())
        .detail("g", g.descriptor())
        .detail("seed", seed);
    report.trace_distance = Some(trace_distance(&rho1, &rho2)?);
    report.success_probability = Some(success);
    report.claimed_bound = Some(1.0 - 0.25f64.powi(n as i32));
    report.verdict = Verdict::from_bool(identity_holds && matches_prop1);
    Ok(report)
}
