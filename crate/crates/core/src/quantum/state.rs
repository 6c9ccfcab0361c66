use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::{check_qubits, CMatrix, TOLERANCE};
use crate::bits::BitString;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Normalised state vector on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: u32,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(n: u32, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubits(n)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::InvalidPureState(format!(
                "expected {} amplitudes for {n} qubits, got {}",
                1usize << n,
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidPureState(format!("squared norm {norm} != 1")));
        }
        Ok(Self { n, amplitudes })
    }

    pub(crate) fn from_amplitudes_unchecked(n: u32, amplitudes: Vec<Complex64>) -> Self {
        Self { n, amplitudes }
    }

    /// Single-qubit state `a|0⟩ + b|1⟩`.
    pub fn qubit(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(1, vec![a, b])
    }

    /// Computational basis state `|bits⟩`.
    pub fn basis(bits: BitString) -> Result<Self> {
        check_qubits(bits.len())?;
        let mut amplitudes = vec![ZERO; 1 << bits.len()];
        amplitudes[bits.value() as usize] = ONE;
        Ok(Self {
            n: bits.len(),
            amplitudes,
        })
    }

    pub fn plus() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::from_amplitudes_unchecked(1, vec![h, h])
    }

    pub fn minus() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::from_amplitudes_unchecked(1, vec![h, -h])
    }

    /// `(|0⟩ + i|1⟩)/√2`.
    pub fn plus_i() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::from_amplitudes_unchecked(1, vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)])
    }

    /// `(|0⟩ − i|1⟩)/√2`.
    pub fn minus_i() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::from_amplitudes_unchecked(1, vec![Complex64::new(h, 0.0), Complex64::new(0.0, -h)])
    }

    /// `|ψ⟩^{⊗n}`.
    pub fn power(&self, n: u32) -> Result<Self> {
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_qubits(self.n + other.n)?;
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self {
            n: self.n + other.n,
            amplitudes,
        })
    }

    /// Random normalised vector (not Haar-distributed; adequate for tests).
    pub fn random<R: RngCore + ?Sized>(n: u32, rng: &mut R) -> Result<Self> {
        check_qubits(n)?;
        let mut amplitudes: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amplitudes })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn to_density(&self) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(&self.amplitudes);
        DensityMatrix::from_matrix_unchecked(self.n, &v * v.adjoint())
    }
}

/// Hermitian, unit-trace, positive semidefinite `2^n × 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: u32,
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity at [`TOLERANCE`].
    pub fn new(n: u32, m: CMatrix) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected {dim}x{dim} for {n} qubits, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let s = Self { n, m };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_matrix_unchecked(n: u32, m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), 1 << n);
        Self { n, m }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                let d = (self.m[(i, j)] - self.m[(j, i)].conj()).norm();
                if d > TOLERANCE {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j}): deviation {d:e}"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr - ONE).norm() > TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn from_pure(state: &PureState) -> Self {
        state.to_density()
    }

    /// `|bits⟩⟨bits|`.
    pub fn basis(bits: BitString) -> Result<Self> {
        check_qubits(bits.len())?;
        let dim = 1usize << bits.len();
        let mut m = CMatrix::zeros(dim, dim);
        let i = bits.value() as usize;
        m[(i, i)] = ONE;
        Ok(Self { n: bits.len(), m })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: u32) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            m: CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        })
    }

    /// Random full-rank state `G G† / tr(G G†)` with uniform complex entries.
    pub fn random<R: RngCore + ?Sized>(n: u32, rng: &mut R) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let g = CMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let mut m = &g * g.adjoint();
        let tr = m.trace();
        m /= tr;
        Ok(Self { n, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.m + self.m.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    /// Uniform average of equally sized states.
    pub fn average<'a, I>(states: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a DensityMatrix>,
    {
        let mut iter = states.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidDensityMatrix("average of no states".into()))?;
        let mut sum = first.m.clone();
        let mut count = 1usize;
        for s in iter {
            if s.n != first.n {
                return Err(Error::DimensionMismatch {
                    left: first.n,
                    right: s.n,
                });
            }
            sum += &s.m;
            count += 1;
        }
        Ok(Self {
            n: first.n,
            m: sum / Complex64::new(count as f64, 0.0),
        })
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from(self)
    }
}

/// Wire form `{"n": int, "re": [[...]], "im": [[...]]}` (row-major).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: u32,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&DensityMatrix> for MatrixJson {
    fn from(s: &DensityMatrix) -> Self {
        let dim = s.dim();
        let row = |i: usize, f: fn(&Complex64) -> f64| (0..dim).map(|j| f(&s.m[(i, j)])).collect();
        Self {
            n: s.n,
            re: (0..dim).map(|i| row(i, |c| c.re)).collect(),
            im: (0..dim).map(|i| row(i, |c| c.im)).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        check_qubits(j.n)?;
        let dim = 1usize << j.n;
        let shape_ok =
            |rows: &Vec<Vec<f64>>| rows.len() == dim && rows.iter().all(|r| r.len() == dim);
        if !shape_ok(&j.re) || !shape_ok(&j.im) {
            return Err(Error::InvalidDensityMatrix(format!(
                "\"re\" and \"im\" must both be {dim}x{dim}"
            )));
        }
        let m = CMatrix::from_fn(dim, dim, |r, c| Complex64::new(j.re[r][c], j.im[r][c]));
        DensityMatrix::new(j.n, m)
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(deserializer)?;
        DensityMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}
