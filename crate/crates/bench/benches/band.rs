use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use limitop::band::LaurentSymbol;
use limitop::fredholm::{
    fredholm_report, symbol_min_modulus, truncation_kernel_oracle, FredholmConfig, TruncationInput, DEFAULT_RANK_TOL,
};
use limitop::gen::{random_separated_band, random_symbol};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_band(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = random_separated_band(&mut rng, 3, 5, 0.1);
    let s = random_symbol(&mut rng, 3, 0.1);

    c.bench_function("symbol_min_modulus/2^14", |b| {
        b.iter(|| symbol_min_modulus(black_box(&s), 1 << 14))
    });
    let cfg = FredholmConfig::default();
    c.bench_function("fredholm_report", |b| {
        b.iter(|| fredholm_report(black_box(&t), &cfg).unwrap())
    });

    let mut group = c.benchmark_group("truncation_oracle");
    group.sample_size(10);
    for n in [100, 400, 1600] {
        group.bench_with_input(BenchmarkId::new("band", n), &n, |b, &n| {
            b.iter(|| truncation_kernel_oracle(TruncationInput::Band(black_box(&t)), n, DEFAULT_RANK_TOL))
        });
    }
    let e3 = LaurentSymbol::monomial(3);
    group.bench_function("toeplitz_e3/400", |b| {
        b.iter(|| truncation_kernel_oracle(TruncationInput::Toeplitz(black_box(&e3)), 400, DEFAULT_RANK_TOL))
    });
    group.finish();
}

criterion_group!(benches, bench_band);
criterion_main!(benches);
