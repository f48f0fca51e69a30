use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ballcert_core::ball::ln_omega;
use ballcert_core::claims::{check_case, search_open27, Overrides};
use ballcert_core::gamma::{lgamma, polygamma};
use ballcert_core::jet::Jet;
use ballcert_core::real::{PrecisionContext, Real};

fn special_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("special");
    for bits in [256, 1024] {
        let ctx = PrecisionContext::fixed(bits);
        let x = Real::from_ratio(314159, 1000, &ctx);
        g.bench_function(format!("lgamma/{bits}"), |b| b.iter(|| lgamma(black_box(&x), &ctx)));
        g.bench_function(format!("trigamma/{bits}"), |b| b.iter(|| polygamma(1, black_box(&x), &ctx)));
    }
    g.finish();
}

fn jets(c: &mut Criterion) {
    let ctx = PrecisionContext::default();
    let x = Real::from_ratio(7, 3, &ctx);
    let mut g = c.benchmark_group("jet");
    for order in [4, 8, 16] {
        g.bench_function(format!("ln_omega/{order}"), |b| {
            b.iter(|| ln_omega(&Jet::var(black_box(&x), order).unwrap()))
        });
    }
    g.finish();
}

fn claims(c: &mut Criterion) {
    let ctx = PrecisionContext::default();
    let ov = Overrides {
        n_max: Some(1000),
        ..Overrides::default()
    };
    let mut g = c.benchmark_group("claims");
    g.sample_size(10);
    g.bench_function("THM2_LOGCONVEX/1000", |b| b.iter(|| check_case("THM2_LOGCONVEX", &ctx, &ov)));
    g.bench_function("EQ11_G_BAND", |b| b.iter(|| check_case("EQ11_G_BAND", &ctx, &Overrides::default())));
    g.bench_function("search/1000", |b| b.iter(|| search_open27(1000, &ctx)));
    g.finish();
}

criterion_group!(benches, special_functions, jets, claims);
criterion_main!(benches);
