use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::{AttackReport, Verdict};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::quantum::{
    commute_z_past_x, conjugate_pauli_by_h, hadamard_all, pauli_apply, pauli_decompose, CMatrix,
    DensityMatrix, PauliOp, ALGEBRAIC_TOLERANCE,
};
use crate::schemes::{Message, Scheme};

/// Widest register swept by [`verify_identities`].
pub const MAX_IDENTITY_QUBITS: u32 = 4;

/// Random states decomposed per run of [`verify_identities`].
const DECOMPOSITION_SAMPLES: usize = 8;

fn dense_hadamard(n: u32) -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let h1 = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
        ],
    );
    (0..n).fold(CMatrix::identity(1, 1), |acc, _| acc.kronecker(&h1))
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Sweeps every `(α, β)` at width `n` and compares the fast Pauli rules with
/// dense matrix products: Hadamard conjugation, the `Z`-past-`X` sign and
/// Pauli conjugation of `Z^β` by `X^α`. Random states from `seed` check that
/// Pauli decomposition reconstructs its input.
pub fn verify_identities(n: u32, seed: u64) -> Result<AttackReport> {
    if n == 0 || n > MAX_IDENTITY_QUBITS {
        return Err(Error::LimitExceeded {
            what: "identity sweep qubits",
            got: n as u64,
            limit: MAX_IDENTITY_QUBITS as u64,
        });
    }
    let h = dense_hadamard(n);
    let dim = 1u64 << n;
    let (mut h_err, mut commute_err, mut conj_err) = (0.0f64, 0.0f64, 0.0f64);
    for a in 0..dim {
        let alpha = BitString::new(a, n)?;
        let x = PauliOp::x(alpha).matrix();
        for b in 0..dim {
            let beta = BitString::new(b, n)?;
            let p = PauliOp::new(alpha, beta)?;
            let pm = p.matrix();
            let dense = &h * &pm * &h;
            h_err = h_err.max(max_entry(&(&dense - conjugate_pauli_by_h(&p).matrix())));
            let fast = hadamard_all(&DensityMatrix::from_matrix_unchecked(n, pm.clone()));
            h_err = h_err.max(max_entry(&(&dense - fast.matrix())));

            let z = PauliOp::z(beta).matrix();
            let sign = commute_z_past_x(&beta, &alpha)? as f64;
            commute_err =
                commute_err.max(max_entry(&(&z * &x - &x * &z * Complex64::new(sign, 0.0))));

            let zd = DensityMatrix::from_matrix_unchecked(n, z.clone());
            let conj = pauli_apply(&PauliOp::x(alpha), &zd)?;
            conj_err = conj_err.max(max_entry(&(conj.matrix() - &x * &z * &x)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut decomp_err = 0.0f64;
    for _ in 0..DECOMPOSITION_SAMPLES {
        let s = DensityMatrix::random(n, &mut rng)?;
        decomp_err = decomp_err.max(max_entry(&(pauli_decompose(&s).reconstruct() - s.matrix())));
    }
    let worst = h_err.max(commute_err).max(conj_err).max(decomp_err);
    let mut report = AttackReport::new("identities", n)
        .detail("pairs_checked", dim * dim)
        .detail("hadamard_conjugation_max_error", h_err)
        .detail("z_past_x_max_error", commute_err)
        .detail("pauli_conjugation_max_error", conj_err)
        .detail("decomposition_max_error", decomp_err)
        .detail("tolerance", ALGEBRAIC_TOLERANCE)
        .detail("seed", seed);
    report.verdict = Verdict::from_bool(worst <= ALGEBRAIC_TOLERANCE);
    Ok(report)
}

/// Decrypts `samples` seeded encryptions and reports the largest deviation
/// from the plaintext (entrywise for states, 0 or 1 for bit strings).
pub fn verify_roundtrip(scheme: &Scheme, samples: usize, seed: u64) -> Result<AttackReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let n = scheme.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let key = scheme.keygen(&mut rng)?;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let msg = if scheme.variant().classical_messages() {
            Message::Classical(BitString::random(n, &mut rng)?)
        } else {
            Message::Quantum(DensityMatrix::random(n, &mut rng)?)
        };
        let ct = scheme.encrypt(&key, &msg, &mut rng)?;
        let err = match (scheme.decrypt(&key, &ct)?, &msg) {
            (Message::Quantum(out), Message::Quantum(m)) => out.max_abs_diff(m)?,
            (out, m) => {
                if &out == m {
                    0.0
                } else {
                    1.0
                }
            }
        };
        worst = worst.max(err);
    }
    let mut report = AttackReport::new("roundtrip", n)
        .detail("scheme", scheme.descriptor())
        .detail("samples", samples)
        .detail("max_error", worst)
        .detail("tolerance", ALGEBRAIC_TOLERANCE)
        .detail("seed", seed);
    report.verdict = Verdict::from_bool(worst <= ALGEBRAIC_TOLERANCE);
    Ok(report)
}
