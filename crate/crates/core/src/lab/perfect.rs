use num_complex::Complex64;

use super::mixture::{average_ciphertext, pad_histogram, MixtureSpec, MAX_PAIR_KEY_BITS};
use super::report::{AttackReport, Verdict};
use crate::bits::{parity, BitString};
use crate::error::{Error, Result};
use crate::prf::{is_key_permutation, FunctionFamily};
use crate::quantum::{
    pauli_decompose, trace_distance, walsh_hadamard, DensityMatrix, PauliDecomposition, TOLERANCE,
};
use crate::schemes::Scheme;

/// `χ(β) = Σ_u h[u] (−1)^{u⊙β}`, the key average of the sign `X^u` puts on `Z^β`.
fn sign_average(hist: &[f64]) -> Vec<f64> {
    let mut chi: Vec<Complex64> = hist.iter().map(|&w| Complex64::new(w, 0.0)).collect();
    walsh_hadamard(&mut chi);
    chi.into_iter().map(|c| c.re).collect()
}

/// Key average of an EHE ciphertext computed on Pauli coefficients.
///
/// `X^α Z^β` passes through the three layers as
/// `(−1)^{u⊙β} · (−1)^{α⊙β} X^β Z^α · (−1)^{v⊙α}`, so averaging over keys
/// multiplies `a_{α,β}` by `χ_F(β) χ_G(α) (−1)^{α⊙β}` and moves it to `(β, α)`.
pub fn symbolic_average(
    f: &FunctionFamily,
    g: &FunctionFamily,
    r1: &BitString,
    r2: &BitString,
    sigma: &DensityMatrix,
) -> Result<PauliDecomposition> {
    let n = sigma.n();
    let chi_f = sign_average(&pad_histogram(f, r1)?);
    let chi_g = sign_average(&pad_histogram(g, r2)?);
    let a = pauli_decompose(sigma);
    let dim = 1usize << n;
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (alpha, beta, c) in a.iter() {
        let sign = if parity(alpha & beta) { -1.0 } else { 1.0 };
        let w = chi_f[beta as usize] * chi_g[alpha as usize] * sign;
        out[((beta as usize) << n) | alpha as usize] = c * w;
    }
    Ok(PauliDecomposition::from_coeffs(n, out))
}

/// Largest `|χ(β) − δ_{β,0}|` over `β`; zero iff the pad is uniform.
fn delta_defect(hist: &[f64]) -> f64 {
    sign_average(hist)
        .iter()
        .enumerate()
        .map(|(b, &c)| (c - if b == 0 { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max)
}

/// Exact key average of EHE encryption against `I/2^n` for every plaintext and
/// randomness pair. The key-permutation hypothesis is checked first and
/// reported; the verdict follows the measured distance only.
pub fn verify_perfect_security(
    f: &FunctionFamily,
    g: &FunctionFamily,
    plaintexts: &[DensityMatrix],
    randomness: &[(BitString, BitString)],
) -> Result<AttackReport> {
    let n = f.n();
    if n > MAX_PAIR_KEY_BITS {
        return Err(Error::LimitExceeded {
            what: "key enumeration block size",
            got: n as u64,
            limit: MAX_PAIR_KEY_BITS as u64,
        });
    }
    if plaintexts.is_empty() || randomness.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one plaintext and one randomness pair".into(),
        ));
    }
    let scheme = Scheme::qbe_ehe(f.clone(), g.clone())?;
    let mixed = DensityMatrix::maximally_mixed(n)?;
    let mut permutation_holds = true;
    let mut max_distance = 0.0f64;
    let mut max_symbolic_gap = 0.0f64;
    let mut max_delta_defect = 0.0f64;
    for (r1, r2) in randomness {
        permutation_holds &= is_key_permutation(f, r1)? && is_key_permutation(g, r2)?;
        max_delta_defect = max_delta_defect
            .max(delta_defect(&pad_histogram(f, r1)?))
            .max(delta_defect(&pad_histogram(g, r2)?));
        for sigma in plaintexts {
            let spec = MixtureSpec::new(scheme.clone(), sigma.clone()).with_randomness(*r1, *r2);
            let avg = average_ciphertext(&spec)?;
            max_distance = max_distance.max(trace_distance(&avg, &mixed)?);
            let symbolic = symbolic_average(f, g, r1, r2, sigma)?.reconstruct();
            let gap = (symbolic - avg.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            max_symbolic_gap = max_symbolic_gap.max(gap);
        }
    }
    let mut report = AttackReport::new("perfect_security", n)
        .detail("permutation_condition_holds", permutation_holds)
        .detail("plaintexts", plaintexts.len())
        .detail("randomness_pairs", randomness.len())
        .detail("symbolic_vs_matrix_max_gap", max_symbolic_gap)
        .detail("sign_average_max_delta_defect", max_delta_defect)
        .detail("f", f.descriptor())
        .detail("g", g.descriptor());
    report.trace_distance = Some(max_distance);
    report.claimed_bound = Some(0.0);
    report.verdict = Verdict::from_bool(max_distance <= TOLERANCE);
    Ok(report)
}
