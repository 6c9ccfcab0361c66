//! Dense Kronecker-product oracles, independent of the fast transforms.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qbe_core::quantum::CMatrix;
use qbe_core::{BitString, DensityMatrix};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn b(s: &str) -> BitString {
    s.parse().unwrap()
}

fn single(entries: [Complex64; 4]) -> CMatrix {
    DMatrix::from_row_slice(2, 2, &entries)
}

pub fn x1() -> CMatrix {
    single([c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn z1() -> CMatrix {
    single([c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn h1() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    single([c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)])
}

pub fn id1() -> CMatrix {
    CMatrix::identity(2, 2)
}

/// `⊗_i m(bit_i)`, qubit 0 leftmost.
pub fn kron_by_bits(bits: &BitString, on: fn() -> CMatrix) -> CMatrix {
    (0..bits.len()).fold(CMatrix::identity(1, 1), |acc, i| {
        acc.kronecker(&if bits.bit(i) { on() } else { id1() })
    })
}

pub fn dense_x(a: &BitString) -> CMatrix {
    kron_by_bits(a, x1)
}

pub fn dense_z(b: &BitString) -> CMatrix {
    kron_by_bits(b, z1)
}

pub fn dense_h(n: u32) -> CMatrix {
    (0..n).fold(CMatrix::identity(1, 1), |acc, _| acc.kronecker(&h1()))
}

pub fn conj(u: &CMatrix, m: &CMatrix) -> CMatrix {
    u * m * u.adjoint()
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn all_strings(n: u32) -> impl Iterator<Item = BitString> {
    (0..1u64 << n).map(move |v| BitString::new(v, n).unwrap())
}

pub fn density(n: u32, m: CMatrix) -> DensityMatrix {
    DensityMatrix::new(n, m).unwrap()
}
