use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tvg_core::barcode::{matching_distance, Barcode, BarcodeInterval, MatchP};
use tvg_core::gen::{gen_random_tvg, RandomTvgParams};
use tvg_core::semiring::lifetime::sample_interval_set;
use tvg_core::zigzag::zigzag_barcode;
use tvg_core::{IntervalSet, Scalar};

fn interval_ops(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sets: Vec<IntervalSet> = (0..64)
        .map(|_| sample_interval_set(&mut rng, 8, 0, 86_400))
        .collect();
    c.bench_function("interval/union", |b| {
        b.iter(|| {
            let mut acc = IntervalSet::empty();
            for s in &sets {
                acc = acc.union(s);
            }
            acc
        })
    });
    c.bench_function("interval/hausdorff", |b| {
        b.iter(|| {
            let mut worst = Scalar::zero();
            for pair in sets.chunks(2) {
                worst = worst.max(pair[0].hausdorff(&pair[1]));
            }
            worst
        })
    });
}

fn kleene(c: &mut Criterion) {
    let mut group = c.benchmark_group("kleene_star");
    for n in [8usize, 16, 24] {
        let m = gen_random_tvg(&RandomTvgParams {
            n,
            window: IntervalSet::of(0, 86_400),
            max_contacts: 3,
            density: 0.4,
            symmetric: false,
            seed: 7,
        })
        .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| m.kleene_star(4 * n).unwrap().1)
        });
    }
    group.finish();
}

fn zigzag(c: &mut Criterion) {
    let m = gen_random_tvg(&RandomTvgParams {
        n: 10,
        window: IntervalSet::of(0, 100),
        max_contacts: 2,
        density: 0.5,
        symmetric: true,
        seed: 11,
    })
    .unwrap();
    c.bench_function("zigzag/barcode_h1_n10", |b| {
        b.iter(|| zigzag_barcode(&m, 1).unwrap())
    });
}

fn matching(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut gen_barcode = |k: usize| {
        use rand::Rng;
        Barcode::from_bars((0..k).map(|_| {
            let a = rng.gen_range(0..1000);
            let b = rng.gen_range(a..=1000);
            BarcodeInterval::closed(Scalar::from_int(a), Scalar::from_int(b))
        }))
    };
    let x = gen_barcode(24);
    let y = gen_barcode(24);
    c.bench_function("matching/bottleneck_24", |b| {
        b.iter(|| matching_distance(&x, &y, MatchP::Infinity))
    });
    c.bench_function("matching/wasserstein2_24", |b| {
        b.iter(|| matching_distance(&x, &y, MatchP::Finite(2)))
    });
}

criterion_group!(benches, interval_ops, kleene, zigzag, matching);
criterion_main!(benches);
