use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tokcheck_bench::{munch_tokenizer, pair_vocab};
use tokcheck_core::{
    build_maximal_munch_transducer, compose, equivalent_on, fixtures, maximal_munch_encode, pushforward, Str,
};

fn collapse(c: &mut Criterion) {
    let t = fixtures::collapse();
    let p = fixtures::collapse_p_star();
    c.bench_function("collapse_round_trip_pushforward", |b| {
        b.iter(|| pushforward(&compose(t.decoder(), t.encoder()).unwrap(), black_box(&p)).unwrap())
    });
}

fn exactness(c: &mut Criterion) {
    c.bench_function("maximal_munch_build_and_check_n4", |b| {
        b.iter(|| munch_tokenizer(black_box(4)).is_exact().holds())
    });
}

fn preimages(c: &mut Criterion) {
    let t = munch_tokenizer(6);
    let chars = t.text_space().alphabet().clone();
    let text = Str::parse(&chars, "abcabc").unwrap();
    c.bench_function("preimages_len6", |b| {
        b.iter(|| t.preimages(black_box(&text)).unwrap().len())
    });
}

fn transducer(c: &mut Criterion) {
    let v = pair_vocab();
    let t = build_maximal_munch_transducer(&v).unwrap();
    c.bench_function("transducer_equivalence_len6", |b| {
        b.iter(|| equivalent_on(&t, |s| maximal_munch_encode(&v, s), black_box(6)).holds())
    });
}

criterion_group!(benches, collapse, exactness, preimages, transducer);
criterion_main!(benches);
