use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{check_qubits, walsh_hadamard, CMatrix, DensityMatrix, PauliOp, PureState, TOLERANCE};
use crate::bits::{parity, BitString};
use crate::error::{Error, Result};

fn same_n(a: u32, b: u32) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// `P s P†`.
pub fn pauli_apply(p: &PauliOp, s: &DensityMatrix) -> Result<DensityMatrix> {
    same_n(p.n(), s.n())?;
    let dim = s.dim();
    let a = p.x_mask().value() as usize;
    let b = p.z_mask().value();
    // (P s P†)[i, j] = (-1)^{b⊙(i⊕a)} (-1)^{b⊙(j⊕a)} s[i⊕a, j⊕a]; the global phase cancels.
    let src = s.matrix();
    let m = CMatrix::from_fn(dim, dim, |i, j| {
        let (si, sj) = (i ^ a, j ^ a);
        let v = src[(si, sj)];
        if parity(b & si as u64) ^ parity(b & sj as u64) {
            -v
        } else {
            v
        }
    });
    Ok(DensityMatrix::from_matrix_unchecked(s.n(), m))
}

/// `s ↦ s'` with `s'[π(i), π(j)] = s[i, j]` for a bijection `π` on basis indices.
///
/// This is the conjugation by the permutation unitary `|m⟩ ↦ |π(m)⟩`.
pub fn permute_basis<F>(s: &DensityMatrix, perm: F) -> DensityMatrix
where
    F: Fn(u64) -> u64,
{
    let dim = s.dim();
    let image: Vec<usize> = (0..dim as u64).map(|i| perm(i) as usize).collect();
    let src = s.matrix();
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            m[(image[i], image[j])] = src[(i, j)];
        }
    }
    DensityMatrix::from_matrix_unchecked(s.n(), m)
}

/// `H^{⊗n} s H^{⊗n}` via Walsh-Hadamard transforms on columns then rows.
pub fn hadamard_all(s: &DensityMatrix) -> DensityMatrix {
    let dim = s.dim();
    let mut m = s.matrix().clone();
    for mut col in m.column_iter_mut() {
        walsh_hadamard(col.as_mut_slice());
    }
    let mut t = m.transpose();
    for mut col in t.column_iter_mut() {
        walsh_hadamard(col.as_mut_slice());
    }
    let mut out = t.transpose();
    out /= Complex64::new(dim as f64, 0.0);
    DensityMatrix::from_matrix_unchecked(s.n(), out)
}

/// Kronecker product `s1 ⊗ s2`; `s1` occupies the leading qubits.
pub fn tensor(s1: &DensityMatrix, s2: &DensityMatrix) -> Result<DensityMatrix> {
    check_qubits(s1.n() + s2.n())?;
    Ok(DensityMatrix::from_matrix_unchecked(
        s1.n() + s2.n(),
        s1.matrix().kronecker(s2.matrix()),
    ))
}

/// `½ Σ |λ_i|` over the eigenvalues of the Hermitian difference `s1 − s2`.
pub fn trace_distance(s1: &DensityMatrix, s2: &DensityMatrix) -> Result<f64> {
    same_n(s1.n(), s2.n())?;
    let d = s1.matrix() - s2.matrix();
    let herm = (&d + d.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let dist = 0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>();
    Ok(dist.clamp(0.0, 1.0))
}

/// Outcome probabilities `⟨b|s|b⟩` for a complete orthonormal basis.
pub fn measure_in_basis(s: &DensityMatrix, basis: &[PureState]) -> Result<Vec<f64>> {
    let dim = s.dim();
    if basis.len() != dim {
        return Err(Error::NonOrthonormalBasis(format!(
            "{} vectors cannot span a {dim}-dimensional space",
            basis.len()
        )));
    }
    for (i, u) in basis.iter().enumerate() {
        same_n(s.n(), u.n())?;
        for (j, v) in basis.iter().enumerate().skip(i) {
            let ip = u.inner(v)?;
            let expected = if i == j { 1.0 } else { 0.0 };
            if (ip - Complex64::new(expected, 0.0)).norm() > TOLERANCE {
                return Err(Error::NonOrthonormalBasis(format!(
                    "⟨b{i}|b{j}⟩ = {ip}, expected {expected}"
                )));
            }
        }
    }
    let m = s.matrix();
    Ok(basis
        .iter()
        .map(|b| {
            let a = b.amplitudes();
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                let mut row = Complex64::new(0.0, 0.0);
                for j in 0..dim {
                    row += m[(i, j)] * a[j];
                }
                acc += a[i].conj() * row;
            }
            acc.re.max(0.0)
        })
        .collect())
}

/// Coefficients `a_{α,β}` with `s = Σ a_{α,β} X^α Z^β`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    n: u32,
    /// Indexed `α · 2^n + β`.
    coeffs: Vec<Complex64>,
}

impl PauliDecomposition {
    /// `coeffs` indexed `α · 2^n + β`.
    pub(crate) fn from_coeffs(n: u32, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), 1 << (2 * n));
        Self { n, coeffs }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, alpha: &BitString, beta: &BitString) -> Result<Complex64> {
        same_n(self.n, alpha.len())?;
        same_n(self.n, beta.len())?;
        Ok(self.coeff(alpha.value(), beta.value()))
    }

    pub fn coeff(&self, alpha: u64, beta: u64) -> Complex64 {
        self.coeffs[((alpha as usize) << self.n) | beta as usize]
    }

    /// `(α, β, a_{α,β})` for every pair, α-major.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, Complex64)> + '_ {
        let dim = 1u64 << self.n;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(idx, &c)| (idx as u64 / dim, idx as u64 % dim, c))
    }

    /// `Σ a_{α,β} X^α Z^β` as a dense matrix.
    pub fn reconstruct(&self) -> CMatrix {
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for alpha in 0..dim {
            // (X^α Z^β)[j⊕α, j] = (-1)^{β⊙j}, so column j of row-shift α is a WHT over β.
            let mut w = self.coeffs[alpha * dim..(alpha + 1) * dim].to_vec();
            walsh_hadamard(&mut w);
            for (j, v) in w.into_iter().enumerate() {
                m[(j ^ alpha, j)] = v;
            }
        }
        m
    }
}

/// `a_{α,β} = tr(s Z^β X^α) / 2^n`, computed as one Walsh-Hadamard transform per `α`.
pub fn pauli_decompose(s: &DensityMatrix) -> PauliDecomposition {
    let dim = s.dim();
    let m = s.matrix();
    let scale = 1.0 / dim as f64;
    let mut coeffs = Vec::with_capacity(dim * dim);
    for alpha in 0..dim {
        let mut v: Vec<Complex64> = (0..dim).map(|k| m[(k ^ alpha, k)]).collect();
        walsh_hadamard(&mut v);
        coeffs.extend(v.into_iter().map(|c| c * scale));
    }
    PauliDecomposition { n: s.n(), coeffs }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_flips_zero_to_one() {
        let out = pauli_apply(&PauliOp::x(b("1")), &DensityMatrix::basis(b("0")).unwrap()).unwrap();
        assert!(out.approx_eq(&DensityMatrix::basis(b("1")).unwrap(), 1e-15));
    }

    #[test]
    fn identity_pauli_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = DensityMatrix::random(3, &mut rng).unwrap();
        let out = pauli_apply(&PauliOp::identity(3).unwrap(), &s).unwrap();
        assert!(out.approx_eq(&s, 0.0));
    }

    #[test]
    fn z_maps_plus_to_minus() {
        // Hand product: Z [[1,1],[1,1]]/2 Z = [[1,-1],[-1,1]]/2 = |−⟩⟨−|.
        let plus = PureState::plus().to_density();
        let out = pauli_apply(&PauliOp::z(b("1")), &plus).unwrap();
        assert!((out.get(0, 1) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!(out.approx_eq(&PureState::minus().to_density(), 1e-15));
    }

    #[test]
    fn pauli_apply_dimension_mismatch() {
        let s = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(
            pauli_apply(&PauliOp::x(b("1")), &s).unwrap_err(),
            Error::DimensionMismatch { left: 1, right: 2 }
        );
    }

    #[test]
    fn hadamard_examples() {
        let zero = DensityMatrix::basis(b("0")).unwrap();
        assert!(hadamard_all(&zero).approx_eq(&PureState::plus().to_density(), 1e-15));

        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(hadamard_all(&mixed).approx_eq(&mixed, 1e-15));

        // |++⟩⟨++| has every entry 1/4.
        let out = hadamard_all(&DensityMatrix::basis(b("00")).unwrap());
        assert!(out
            .matrix()
            .iter()
            .all(|v| (v - c(0.25, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn hadamard_is_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=5 {
            let s = DensityMatrix::random(n, &mut rng).unwrap();
            assert!(hadamard_all(&hadamard_all(&s)).approx_eq(&s, 1e-12));
        }
    }

    #[test]
    fn decomposition_of_maximally_mixed() {
        let d = pauli_decompose(&DensityMatrix::maximally_mixed(2).unwrap());
        for (alpha, beta, a) in d.iter() {
            let want = if alpha == 0 && beta == 0 { 0.25 } else { 0.0 };
            assert!((a - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn decomposition_of_zero_state() {
        // |0⟩⟨0| = (I + Z)/2: a_{0,0} = a_{0,1} = 1/2.
        let d = pauli_decompose(&DensityMatrix::basis(b("0")).unwrap());
        assert!((d.get(&b("0"), &b("0")).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert!((d.get(&b("0"), &b("1")).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert!(d.get(&b("1"), &b("0")).unwrap().norm() < 1e-15);
        assert!(d.get(&b("1"), &b("1")).unwrap().norm() < 1e-15);
    }

    #[test]
    fn identity_coefficient_is_inverse_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..=4 {
            let d = pauli_decompose(&DensityMatrix::random(n, &mut rng).unwrap());
            assert!((d.coeff(0, 0) - c(1.0 / (1u64 << n) as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::basis(b("0")).unwrap();
        let one = DensityMatrix::basis(b("1")).unwrap();
        assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-15);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);

        let mut rho1 = CMatrix::identity(2, 2) * c(0.5, 0.0);
        rho1[(0, 1)] = c(0.0, -0.5);
        rho1[(1, 0)] = c(0.0, 0.5);
        let rho1 = DensityMatrix::new(1, rho1).unwrap();
        let rho2 = DensityMatrix::maximally_mixed(1).unwrap();
        assert!((trace_distance(&rho1, &rho2).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn measurement_examples() {
        let h = FRAC_1_SQRT_2;
        let pm_i = [PureState::plus_i(), PureState::minus_i()];
        let rho1 = PureState::plus_i().to_density();
        let p = measure_in_basis(&rho1, &pm_i).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12);

        let p = measure_in_basis(&DensityMatrix::maximally_mixed(1).unwrap(), &pm_i).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);

        let pm = [PureState::plus(), PureState::minus()];
        let p = measure_in_basis(&PureState::plus().to_density(), &pm).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);

        let skew = PureState::qubit(c(h, 0.0), c(h, 0.0)).unwrap();
        let bad = [PureState::plus(), skew];
        assert!(matches!(
            measure_in_basis(&rho1, &bad),
            Err(Error::NonOrthonormalBasis(_))
        ));
        assert!(measure_in_basis(&rho1, &pm[..1]).is_err());
    }

    #[test]
    fn tensor_examples() {
        let half = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(tensor(&half, &half)
            .unwrap()
            .approx_eq(&DensityMatrix::maximally_mixed(2).unwrap(), 1e-15));
        let joined = tensor(
            &DensityMatrix::basis(b("0")).unwrap(),
            &DensityMatrix::basis(b("1")).unwrap(),
        )
        .unwrap();
        assert!(joined.approx_eq(&DensityMatrix::basis(b("01")).unwrap(), 0.0));
        assert!(tensor(
            &DensityMatrix::maximally_mixed(4).unwrap(),
            &DensityMatrix::maximally_mixed(5).unwrap()
        )
        .is_err());
    }
}
