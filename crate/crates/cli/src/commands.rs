use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use qbe_core::lab::{
    multi_message_analysis, prop1_attack, reuse_attack, thm4_attack, verify_identities,
    verify_perfect_security, verify_roundtrip, KeyMode,
};
use qbe_core::prf::{
    estimate_advantage, is_key_permutation, ConstantAdversary, FamilyDescriptor, FamilyKind,
    XorShiftAdversary, DEFAULT_ROUNDS, MAX_ENUMERATION_BITS,
};
use qbe_core::quantum::ALGEBRAIC_TOLERANCE;
use qbe_core::schemes::{
    classical_bb84_dec, classical_bb84_enc, ehe_enc_with, labels_to_state, CiphertextBody,
    SchemeDescriptor, SchemeVariant,
};
use qbe_core::{
    AttackReport, BitString, DensityMatrix, FunctionFamily, KeyPair, PureState, Scheme, Verdict,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

/// Randomness pairs tried by `verify perfect-security`.
const PERFECT_SECURITY_PAIRS: usize = 4;

/// Widest block for which `encrypt-classical` also lifts the labels to a state.
const LIFT_CHECK_BITS: u32 = 6;

pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub reports: Vec<AttackReport>,
}

impl Outcome {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.reports.iter().all(|r| r.verdict.confirms()))
    }
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Verify(Verify::Identities(a)) => {
            let report = verify_identities(a.common.n, a.common.seed)?;
            Ok(outcome("verify identities", a, vec![], vec![report]))
        }
        Command::Verify(Verify::Roundtrip(a)) => roundtrip(a),
        Command::Verify(Verify::PerfectSecurity(a)) => perfect_security(a),
        Command::Attack(Attack::Prop1(a)) => Ok(outcome(
            "attack prop1",
            a,
            vec![],
            vec![prop1_attack(a.common.n)?],
        )),
        Command::Attack(Attack::Thm4(a)) => thm4(a),
        Command::Attack(Attack::Reuse(a)) => {
            let (f, g) = family_pair(&a.families, &a.common)?;
            let report = reuse_attack(&f, &g, a.common.seed)?;
            Ok(outcome("attack reuse", a, vec![f, g], vec![report]))
        }
        Command::Analyze(Analyze::MultiMessage(a)) => multi_message(a),
        Command::Prf(Prf::Advantage(a)) => advantage(a),
        Command::Prf(Prf::PermutationCheck(a)) => permutation_check(a),
        Command::EncryptClassical(a) => encrypt_classical(a),
    }
}

fn outcome(
    command: &'static str,
    args: &impl Serialize,
    families: Vec<FunctionFamily>,
    reports: Vec<AttackReport>,
) -> Outcome {
    let mut config = serde_json::to_value(args).expect("arguments are plain data");
    if !families.is_empty() {
        let loaded: Vec<FamilyDescriptor> =
            families.iter().map(FunctionFamily::descriptor).collect();
        config["loaded_families"] = json!(loaded);
    }
    Outcome {
        command,
        config,
        reports,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_family(path: &Path, n: u32) -> Result<FunctionFamily> {
    let d: FamilyDescriptor = read_json(path)?;
    ensure!(
        d.n == n,
        "{}: family has n = {} but --n is {n}",
        path.display(),
        d.n
    );
    FunctionFamily::from_descriptor(&d).with_context(|| format!("building {}", path.display()))
}

fn load_families(args: &FamilyArgs, n: u32, max: usize) -> Result<Vec<FunctionFamily>> {
    ensure!(
        args.families.len() <= max,
        "at most {max} --families files are accepted, got {}",
        args.families.len()
    );
    args.families.iter().map(|p| load_family(p, n)).collect()
}

fn default_pair(common: &Common) -> Result<(FunctionFamily, FunctionFamily)> {
    Ok((
        FunctionFamily::feistel(common.n, common.seed, DEFAULT_ROUNDS)?,
        FunctionFamily::ggm(common.n, common.seed.wrapping_add(1), DEFAULT_ROUNDS)?,
    ))
}

/// No files: seeded Feistel and GGM. One file: `F = G`. Two files: `F`, `G`.
fn family_pair(args: &FamilyArgs, common: &Common) -> Result<(FunctionFamily, FunctionFamily)> {
    let mut loaded = load_families(args, common.n, 2)?;
    Ok(match loaded.len() {
        0 => default_pair(common)?,
        1 => {
            let f = loaded.remove(0);
            (f.clone(), f)
        }
        _ => {
            let g = loaded.remove(1);
            (loaded.remove(0), g)
        }
    })
}

fn one_family(args: &FamilyArgs, common: &Common) -> Result<FunctionFamily> {
    let mut loaded = load_families(args, common.n, 1)?;
    match loaded.pop() {
        Some(f) => Ok(f),
        None => bail!("exactly one --families file is required"),
    }
}

/// The built-in families that are key permutations.
fn permutation_families(common: &Common) -> Result<Vec<FunctionFamily>> {
    let (n, seed) = (common.n, common.seed);
    Ok(vec![
        FunctionFamily::xor(n)?,
        FunctionFamily::feistel(n, seed, DEFAULT_ROUNDS)?,
        FunctionFamily::ggm(n, seed, DEFAULT_ROUNDS)?,
    ])
}

fn builtin_families(common: &Common) -> Result<Vec<FunctionFamily>> {
    let mut all = permutation_families(common)?;
    all.push(FunctionFamily::truly_random(common.n, common.seed)?);
    Ok(all)
}

fn roundtrip(a: &RoundtripArgs) -> Result<Outcome> {
    let n = a.common.n;
    let schemes = match &a.scheme {
        Some(path) => {
            let d: SchemeDescriptor = read_json(path)?;
            ensure!(
                d.n == n,
                "{}: scheme has n = {} but --n is {n}",
                path.display(),
                d.n
            );
            vec![Scheme::from_descriptor(&d)
                .with_context(|| format!("building {}", path.display()))?]
        }
        None => {
            let (f, g) = default_pair(&a.common)?;
            SchemeVariant::ALL
                .into_iter()
                .map(|v| {
                    let (f, g) = match v.family_count() {
                        0 => (None, None),
                        1 => (Some(f.clone()), None),
                        _ => (Some(f.clone()), Some(g.clone())),
                    };
                    Scheme::new(v, n, f, g)
                })
                .collect::<qbe_core::Result<_>>()?
        }
    };
    let reports = schemes
        .iter()
        .map(|s| verify_roundtrip(s, a.trials, a.common.seed))
        .collect::<qbe_core::Result<_>>()?;
    Ok(outcome("verify roundtrip", a, vec![], reports))
}

fn perfect_security(a: &PerfectSecurityArgs) -> Result<Outcome> {
    let n = a.common.n;
    let (f, g) = family_pair(&a.families, &a.common)?;
    ensure!(a.trials > 0, "--trials must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let mut plaintexts = vec![DensityMatrix::maximally_mixed(n)?];
    for _ in 0..a.trials {
        plaintexts.push(DensityMatrix::random(n, &mut rng)?);
    }
    let randomness = (0..PERFECT_SECURITY_PAIRS)
        .map(|_| {
            Ok((
                BitString::random(n, &mut rng)?,
                BitString::random(n, &mut rng)?,
            ))
        })
        .collect::<qbe_core::Result<Vec<_>>>()?;
    let report = verify_perfect_security(&f, &g, &plaintexts, &randomness)?;
    Ok(outcome(
        "verify perfect-security",
        a,
        vec![f, g],
        vec![report],
    ))
}

fn thm4(a: &Thm4Args) -> Result<Outcome> {
    let mut families = load_families(&a.families, a.common.n, usize::MAX)?;
    if families.is_empty() {
        families = builtin_families(&a.common)?;
    }
    let reports = families
        .iter()
        .map(thm4_attack)
        .collect::<qbe_core::Result<_>>()?;
    Ok(outcome("attack thm4", a, families, reports))
}

fn multi_message(a: &MultiMessageArgs) -> Result<Outcome> {
    let n = a.common.n;
    let (f, g) = family_pair(&a.families, &a.common)?;
    ensure!(a.blocks > 0, "--blocks must be positive");
    let blocks = if a.random_blocks {
        let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
        (0..a.blocks)
            .map(|_| Ok(PureState::random(n, &mut rng)?.to_density()))
            .collect::<qbe_core::Result<Vec<_>>>()?
    } else {
        vec![DensityMatrix::basis(BitString::zeros(n)?)?; a.blocks as usize]
    };
    let mode = match a.key_mode {
        KeyModeArg::Shared => KeyMode::Shared,
        KeyModeArg::Independent => KeyMode::Independent,
    };
    let report = multi_message_analysis(&f, &g, &blocks, mode, a.common.seed)?;
    Ok(outcome(
        "analyze multi-message",
        a,
        vec![f, g],
        vec![report],
    ))
}

fn advantage(a: &AdvantageArgs) -> Result<Outcome> {
    let family = one_family(&a.families, &a.common)?;
    let est = match a.adversary {
        AdversaryArg::XorShift => {
            estimate_advantage(&XorShiftAdversary, &family, a.trials, a.common.seed)
        }
        AdversaryArg::Constant => {
            estimate_advantage(&ConstantAdversary(true), &family, a.trials, a.common.seed)
        }
    }?;
    // The xor family leaks its key through f(x) ⊕ x; every other family is
    // expected to stay inside the confidence interval.
    let expect_distinguishable =
        matches!(a.adversary, AdversaryArg::XorShift) && family.kind() == FamilyKind::Xor;
    let ok = if expect_distinguishable {
        est.advantage > est.half_width
    } else {
        est.advantage <= est.half_width
    };
    let mut report = AttackReport::new("prf_advantage", a.common.n)
        .detail("family", family.descriptor())
        .detail("adversary", a.adversary)
        .detail("expect_distinguishable", expect_distinguishable)
        .detail("estimate", est)
        .detail("seed", a.common.seed);
    report.success_probability = Some(0.5 * (est.real_rate + 1.0 - est.random_rate));
    report.verdict = Verdict::from_bool(ok);
    Ok(outcome("prf advantage", a, vec![family], vec![report]))
}

/// Prefix of failing inputs kept in a permutation-check report.
const FAILURES_SHOWN: usize = 8;

fn permutation_check(a: &PermutationCheckArgs) -> Result<Outcome> {
    let n = a.common.n;
    ensure!(
        n <= MAX_ENUMERATION_BITS,
        "permutation check enumerates 2^n keys per input; n = {n} exceeds the limit of {MAX_ENUMERATION_BITS}"
    );
    let mut families = load_families(&a.families, n, usize::MAX)?;
    if families.is_empty() {
        families = permutation_families(&a.common)?;
    }
    let mut reports = Vec::with_capacity(families.len());
    for f in &families {
        let mut failing = Vec::new();
        for x in 0..1u64 << n {
            let x = BitString::new(x, n)?;
            if !is_key_permutation(f, &x)? {
                failing.push(x);
            }
        }
        let mut report = AttackReport::new("permutation_check", n)
            .detail("family", f.descriptor())
            .detail("inputs_checked", 1u64 << n)
            .detail("failing_inputs", failing.len())
            .detail(
                "first_failures",
                &failing[..failing.len().min(FAILURES_SHOWN)],
            );
        report.verdict = Verdict::from_bool(failing.is_empty());
        reports.push(report);
    }
    Ok(outcome("prf permutation-check", a, families, reports))
}

fn encrypt_classical(a: &EncryptClassicalArgs) -> Result<Outcome> {
    let n = a.common.n;
    let (f, g) = family_pair(&a.families, &a.common)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let key = KeyPair::random(n, &mut rng)?;
    let message = match &a.message {
        Some(bits) => {
            let m: BitString = bits.parse().context("parsing --message")?;
            ensure!(
                m.len() == n,
                "--message has {} bits but --n is {n}",
                m.len()
            );
            m
        }
        None => BitString::random(n, &mut rng)?,
    };
    let ct = classical_bb84_enc(&f, &g, &key, &message, &mut rng)?;
    let decrypted = classical_bb84_dec(&f, &g, &key, &ct)?;
    let mut report = AttackReport::new("encrypt_classical", n)
        .detail("message", message)
        .detail("key", key)
        .detail("ciphertext", &ct)
        .detail("decrypted", decrypted);
    let mut ok = decrypted == message;
    if n <= LIFT_CHECK_BITS {
        let (CiphertextBody::Labels(labels), Some(r1), Some(r2)) = (&ct.state, ct.r1, ct.r2) else {
            bail!("BB84 encryption returned an unexpected ciphertext shape");
        };
        let lifted = labels_to_state(labels)?.to_density();
        let quantum = ehe_enc_with(&f, &g, &key, &DensityMatrix::basis(message)?, &r1, &r2)?;
        let gap = lifted.max_abs_diff(quantum.quantum_state()?)?;
        report = report.detail("lifted_state_max_gap", gap);
        ok &= gap <= ALGEBRAIC_TOLERANCE;
    }
    report.verdict = Verdict::from_bool(ok);
    Ok(outcome("encrypt-classical", a, vec![f, g], vec![report]))
}
