use num_complex::Complex64;
use rayon::prelude::*;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::prf::FunctionFamily;
use crate::quantum::{hadamard_all, pauli_apply, walsh_hadamard, CMatrix, DensityMatrix, PauliOp};
use crate::schemes::{KeyPair, Scheme, SchemeVariant};

/// Widest block for variants keyed by one `n`-bit string.
pub const MAX_SINGLE_KEY_BITS: u32 = 8;

/// Widest block for variants keyed by `(k1, k2)`.
pub const MAX_PAIR_KEY_BITS: u32 = 4;

/// Terms summed sequentially before the ordered parallel reduction.
const CHUNK: u64 = 64;

/// Uniform key average of one plaintext under fixed public randomness.
#[derive(Debug, Clone)]
pub struct MixtureSpec {
    pub scheme: Scheme,
    pub plaintext: DensityMatrix,
    /// `(r1, r2)`; all-zero strings when absent. Ignored by QOTP and `X^cZ^c`,
    /// `r2` ignored by single-layer variants.
    pub fixed_randomness: Option<(BitString, BitString)>,
}

impl MixtureSpec {
    pub fn new(scheme: Scheme, plaintext: DensityMatrix) -> Self {
        Self {
            scheme,
            plaintext,
            fixed_randomness: None,
        }
    }

    pub fn with_randomness(mut self, r1: BitString, r2: BitString) -> Self {
        self.fixed_randomness = Some((r1, r2));
        self
    }

    fn randomness(&self) -> Result<(BitString, BitString)> {
        match self.fixed_randomness {
            Some(r) => Ok(r),
            None => {
                let z = BitString::zeros(self.scheme.n())?;
                Ok((z, z))
            }
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.scheme.n();
        if self.plaintext.n() != n {
            return Err(Error::DimensionMismatch {
                left: self.plaintext.n(),
                right: n,
            });
        }
        if let Some((r1, r2)) = &self.fixed_randomness {
            for r in [r1, r2] {
                if r.len() != n {
                    return Err(Error::LengthMismatch {
                        left: r.len(),
                        right: n,
                    });
                }
            }
        }
        let variant = self.scheme.variant();
        if variant.classical_messages() {
            return Err(Error::InvalidScheme(format!(
                "{variant} encrypts classical messages; no quantum mixture exists"
            )));
        }
        let limit = match key_bits(variant, n) {
            b if b > n => MAX_PAIR_KEY_BITS,
            _ => MAX_SINGLE_KEY_BITS,
        };
        if n > limit {
            return Err(Error::LimitExceeded {
                what: "key enumeration block size",
                got: n as u64,
                limit: limit as u64,
            });
        }
        Ok(())
    }
}

fn key_bits(variant: SchemeVariant, n: u32) -> u32 {
    match variant {
        SchemeVariant::QbeSingle | SchemeVariant::Xczc | SchemeVariant::ClassicalBe => n,
        _ => 2 * n,
    }
}

/// Distribution of `F(k, r)` over uniform `k`.
pub fn pad_histogram(f: &FunctionFamily, r: &BitString) -> Result<Vec<f64>> {
    let n = f.n();
    if r.len() != n {
        return Err(Error::LengthMismatch {
            left: r.len(),
            right: n,
        });
    }
    let size = 1usize << n;
    let mut h = vec![0.0; size];
    let w = 1.0 / size as f64;
    for k in 0..size as u64 {
        h[f.eval_raw(k, r.value()) as usize] += w;
    }
    Ok(h)
}

/// `Σ_u h[u] X^u s X^u`.
pub fn x_twirl(s: &DensityMatrix, hist: &[f64]) -> Result<DensityMatrix> {
    let dim = s.dim();
    if hist.len() != dim {
        return Err(Error::InvalidParameter(format!(
            "histogram of length {} for dimension {dim}",
            hist.len()
        )));
    }
    let src = s.matrix();
    let mut out = CMatrix::zeros(dim, dim);
    for (u, &w) in hist.iter().enumerate().filter(|(_, &w)| w != 0.0) {
        for j in 0..dim {
            for i in 0..dim {
                out[(i, j)] += src[(i ^ u, j ^ u)] * w;
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(s.n(), out))
}

/// `Σ_v h[v] Z^v s Z^v`, which scales entry `(i, j)` by `Σ_v h[v] (−1)^{v⊙(i⊕j)}`.
pub fn z_twirl(s: &DensityMatrix, hist: &[f64]) -> Result<DensityMatrix> {
    let dim = s.dim();
    if hist.len() != dim {
        return Err(Error::InvalidParameter(format!(
            "histogram of length {} for dimension {dim}",
            hist.len()
        )));
    }
    let mut chi: Vec<Complex64> = hist.iter().map(|&w| Complex64::new(w, 0.0)).collect();
    walsh_hadamard(&mut chi);
    let src = s.matrix();
    let out = CMatrix::from_fn(dim, dim, |i, j| src[(i, j)] * chi[i ^ j].re);
    Ok(DensityMatrix::from_matrix_unchecked(s.n(), out))
}

fn uniform(n: u32) -> Vec<f64> {
    let size = 1usize << n;
    vec![1.0 / size as f64; size]
}

/// Exact uniform key average, one layer at a time: each keyed layer only
/// depends on its key through the pad histogram.
pub fn average_ciphertext(spec: &MixtureSpec) -> Result<DensityMatrix> {
    spec.check()?;
    let scheme = &spec.scheme;
    let n = scheme.n();
    let sigma = &spec.plaintext;
    let (r1, r2) = spec.randomness()?;
    let hists = || -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((
            pad_histogram(scheme.f().expect("keyed variant"), &r1)?,
            pad_histogram(scheme.g().expect("two-layer variant"), &r2)?,
        ))
    };
    match scheme.variant() {
        SchemeVariant::QbeSingle => x_twirl(
            sigma,
            &pad_histogram(scheme.f().expect("keyed variant"), &r1)?,
        ),
        SchemeVariant::QbeEhe => {
            let (hf, hg) = hists()?;
            x_twirl(&hadamard_all(&x_twirl(sigma, &hf)?), &hg)
        }
        SchemeVariant::QbeEheZx => {
            let (hf, hg) = hists()?;
            z_twirl(&x_twirl(sigma, &hf)?, &hg)
        }
        SchemeVariant::Qotp => z_twirl(&x_twirl(sigma, &uniform(n))?, &uniform(n)),
        SchemeVariant::Xczc => {
            let states = (0..1u64 << n)
                .map(|c| {
                    let c = BitString::new(c, n)?;
                    pauli_apply(&PauliOp::new(c, c)?, sigma)
                })
                .collect::<Result<Vec<_>>>()?;
            DensityMatrix::average(&states)
        }
        SchemeVariant::ClassicalBe | SchemeVariant::ClassicalBb84 => {
            unreachable!("rejected by check")
        }
    }
}

/// Uniform average of `term(i)` for `i < count`, reduced in a fixed order.
pub(crate) fn ordered_average<F>(n: u32, count: u64, term: F) -> Result<DensityMatrix>
where
    F: Fn(u64) -> Result<CMatrix> + Sync,
{
    let dim = 1usize << n;
    let chunks = count.div_ceil(CHUNK);
    let partials = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = CMatrix::zeros(dim, dim);
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                acc += term(i)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sum = CMatrix::zeros(dim, dim);
    for p in partials {
        sum += p;
    }
    Ok(DensityMatrix::from_matrix_unchecked(
        n,
        sum / Complex64::new(count as f64, 0.0),
    ))
}

/// Exact uniform key average by encrypting under every key. Independent of
/// [`average_ciphertext`]; used to cross-check it.
pub fn average_ciphertext_direct(spec: &MixtureSpec) -> Result<DensityMatrix> {
    spec.check()?;
    let scheme = &spec.scheme;
    let n = scheme.n();
    let (r1, r2) = spec.randomness()?;
    let bits = key_bits(scheme.variant(), n);
    ordered_average(n, 1u64 << bits, |key| {
        let (k1, k2) = if bits == n {
            (key, 0)
        } else {
            (key >> n, key & ((1 << n) - 1))
        };
        let kp = KeyPair::new(BitString::new(k1, n)?, BitString::new(k2, n)?)?;
        Ok(scheme
            .encrypt_state_with(&kp, &spec.plaintext, Some(&r1), Some(&r2))?
            .into_matrix())
    })
}
