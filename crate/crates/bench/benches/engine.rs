use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specseq::decalage::deligne_decalage;
use specseq::exact_linalg::{smith_normal_form, ExactMatrix};
use specseq::indexing::page_shift_transform;
use specseq::pages::{compare_pages, er_classical};
use specseq::sample::{random_filtered_complex, SampleParams};
use specseq::Ring;

fn snf_bench(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let entries: Vec<i64> = (0..64).map(|_| rand::Rng::gen_range(&mut rng, -9..=9)).collect();
    let m = ExactMatrix::from_i64(Ring::Integers, 8, 8, &entries);
    c.bench_function("smith normal form 8x8 over Z", |b| {
        b.iter(|| smith_normal_form(black_box(&m)))
    });
}

fn page_bench(c: &mut Criterion) {
    let params = SampleParams::new(Ring::Integers);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let f = random_filtered_complex(&mut rng, &params);
    c.bench_function("E^2 page of a random instance over Z", |b| {
        b.iter(|| er_classical(black_box(&f), 2).unwrap())
    });
    c.bench_function("deligne decalage of a random instance", |b| {
        b.iter(|| deligne_decalage(black_box(&f)).unwrap())
    });
}

fn comparison_bench(c: &mut Criterion) {
    let params = SampleParams::new(Ring::PrimeField(2));
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let f = random_filtered_complex(&mut rng, &params);
    let dec = deligne_decalage(&f).unwrap();
    let (t1, _) = page_shift_transform(1);
    c.bench_function("page comparison E^2(Dec) vs E^3 over F_2", |b| {
        b.iter(|| {
            let lhs = er_classical(black_box(&dec), 2).unwrap();
            let rhs = er_classical(black_box(&f), 3).unwrap();
            compare_pages(&lhs, &rhs, t1).unwrap()
        })
    });
}

criterion_group!(benches, snf_bench, page_bench, comparison_bench);
criterion_main!(benches);
