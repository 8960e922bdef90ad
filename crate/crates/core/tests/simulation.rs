use num_traits::Zero;
use tokcheck_core::sim::DEFAULT_SCHEDULE;
use tokcheck_core::{fixtures, ratio, run_estimation, Dist, Str, Tokenizer};

fn uniform_the() -> (Tokenizer, Dist) {
    let v = fixtures::the_vocab();
    let t = Tokenizer::maximal_munch(&v, 3).unwrap();
    let p = Dist::uniform(
        t.text_space(),
        &["t", "the", "he"].map(|s| Str::parse(v.chars(), s).unwrap()),
    )
    .unwrap();
    (t, p)
}

#[test]
fn exact_tokenizer_trace_converges() {
    let (t, p) = uniform_the();
    let est = run_estimation(&t, &p, &DEFAULT_SCHEDULE, 7).unwrap();
    assert!(est.bias.is_zero());
    assert!(est.final_tv().unwrap() < 0.05);
    assert!(est.converged());
    assert_eq!(est.rows().len(), DEFAULT_SCHEDULE.len());
}

#[test]
fn inconsistent_tokenizer_settles_at_its_bias() {
    let t = fixtures::collapse();
    let p = fixtures::collapse_p_star();
    let est = run_estimation(&t, &p, &DEFAULT_SCHEDULE, 7).unwrap();
    assert_eq!(est.bias, ratio(2, 5));
    assert!((est.final_tv().unwrap() - 0.4).abs() < 0.02);
    assert!(!est.converged());
}

#[test]
fn traces_are_reproducible() {
    let (t, p) = uniform_the();
    let a = run_estimation(&t, &p, &[50, 500], 3).unwrap();
    let b = run_estimation(&t, &p, &[50, 500], 3).unwrap();
    assert_eq!(a.rows(), b.rows());
}
