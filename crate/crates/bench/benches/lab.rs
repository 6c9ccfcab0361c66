use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qbe_core::lab::{average_ciphertext, average_ciphertext_direct, prop1_attack, MixtureSpec};
use qbe_core::prf::DEFAULT_ROUNDS;
use qbe_core::quantum::{hadamard_all, pauli_apply, pauli_decompose, trace_distance};
use qbe_core::schemes::{ehe_enc, KeyPair};
use qbe_core::{BitString, DensityMatrix, FunctionFamily, PauliOp, Scheme};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state(n: u32) -> DensityMatrix {
    DensityMatrix::random(n, &mut ChaCha8Rng::seed_from_u64(n as u64)).unwrap()
}

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("transforms");
    for n in [2u32, 4, 6, 8] {
        let s = state(n);
        let p = PauliOp::new(BitString::ones(n).unwrap(), BitString::new(1, n).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("hadamard_all", n), &s, |b, s| {
            b.iter(|| hadamard_all(black_box(s)))
        });
        group.bench_with_input(BenchmarkId::new("pauli_apply", n), &s, |b, s| {
            b.iter(|| pauli_apply(black_box(&p), black_box(s)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pauli_decompose", n), &s, |b, s| {
            b.iter(|| pauli_decompose(black_box(s)))
        });
        let mixed = DensityMatrix::maximally_mixed(n).unwrap();
        group.bench_with_input(BenchmarkId::new("trace_distance", n), &s, |b, s| {
            b.iter(|| trace_distance(black_box(s), &mixed).unwrap())
        });
    }
    group.finish();
}

fn encryption(c: &mut Criterion) {
    let mut group = c.benchmark_group("ehe_enc");
    for n in [2u32, 4, 6] {
        let f = FunctionFamily::feistel(n, 1, DEFAULT_ROUNDS).unwrap();
        let g = FunctionFamily::ggm(n, 2, DEFAULT_ROUNDS).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let kp = KeyPair::random(n, &mut rng).unwrap();
        let s = state(n);
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| ehe_enc(&f, &g, &kp, black_box(&s), &mut rng).unwrap())
        });
    }
    group.finish();
}

fn key_averages(c: &mut Criterion) {
    let mut group = c.benchmark_group("key_average");
    group.sample_size(20);
    for n in [2u32, 3] {
        let f = FunctionFamily::feistel(n, 1, DEFAULT_ROUNDS).unwrap();
        let g = FunctionFamily::ggm(n, 2, DEFAULT_ROUNDS).unwrap();
        let spec = MixtureSpec::new(Scheme::qbe_ehe(f, g).unwrap(), state(n));
        group.bench_with_input(BenchmarkId::new("factored", n), &spec, |b, spec| {
            b.iter(|| average_ciphertext(black_box(spec)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("enumerated", n), &spec, |b, spec| {
            b.iter(|| average_ciphertext_direct(black_box(spec)).unwrap())
        });
    }
    group.bench_function("prop1_n3", |b| {
        b.iter(|| prop1_attack(black_box(3)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, transforms, encryption, key_averages);
criterion_main!(benches);
