mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tokcheck_core::format::TransducerDoc;
use tokcheck_core::{
    bounded_variation_probe, build_maximal_munch_transducer, enumerate_strings, equivalent_on, fixtures,
    is_prefix, maximal_munch_encode, Error, Space, StochMap, Verdict, Vocab,
};

use common::{random_open_vocab, text};

fn proper_prefix_count(v: &Vocab) -> usize {
    let mut prefixes = std::collections::BTreeSet::new();
    for (_, s) in v.entries() {
        for k in 0..s.len() {
            prefixes.insert(s.prefix(k));
        }
    }
    prefixes.len()
}

#[test]
fn matches_greedy_encoder_on_random_vocabularies() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let v = random_open_vocab(&mut rng, 3, 4, 6);
        let t = build_maximal_munch_transducer(&v).unwrap();
        assert!(t.states().len() <= proper_prefix_count(&v) + 1);
        let verdict = equivalent_on(&t, |s| maximal_munch_encode(&v, s), 6);
        assert!(verdict.holds(), "{verdict}");
    }
}

#[test]
fn path_output_is_prefix_monotone() {
    let v = fixtures::the_vocab();
    let t = build_maximal_munch_transducer(&v).unwrap();
    for s in enumerate_strings(v.chars(), 6) {
        let (out, _) = t.path_output(&s).unwrap();
        for k in 0..s.len() {
            let (shorter, _) = t.path_output(&s.prefix(k)).unwrap();
            assert!(is_prefix(&shorter, &out).unwrap(), "{} then {s}", s.prefix(k));
        }
        // the emitted part is always a prefix of the final answer
        assert!(is_prefix(&out, &t.run(&s).unwrap()).unwrap());
    }
}

#[test]
fn transducer_function_has_bounded_variation() {
    let v = fixtures::the_vocab();
    let t = build_maximal_munch_transducer(&v).unwrap();
    let text_space = Space::truncated(v.chars(), 6);
    let token_space = Space::truncated(v.tokens(), 6);
    let f = StochMap::deterministic(&text_space, &token_space, |s| t.run(s)).unwrap();
    let mut bounds = Vec::new();
    for k in 1..=3 {
        let probe = bounded_variation_probe(&f, k).unwrap();
        assert!(probe.witness.is_some());
        bounds.push(probe.bound);
    }
    assert!(bounds.windows(2).all(|w| w[0] <= w[1]));
    // one character can change the last two tokens and add one more
    assert!(bounds[0] <= 3, "{bounds:?}");
}

#[test]
fn closed_vocabularies_are_rejected() {
    let chars = tokcheck_core::Alphabet::characters(["a", "b"]).unwrap();
    let v = Vocab::from_spellings(&chars, &["a", "ab"]).unwrap();
    assert!(matches!(
        build_maximal_munch_transducer(&v),
        Err(Error::VocabNotOpen(_))
    ));
}

#[test]
fn corrupted_terminal_is_caught_at_its_state() {
    let v = fixtures::the_vocab();
    let t = build_maximal_munch_transducer(&v).unwrap();
    let h = t.states().iter().position(|s| s == "h").unwrap();
    let broken = t.with_terminal(h, vec![]).unwrap();
    match equivalent_on(&broken, |s| maximal_munch_encode(&v, s), 4) {
        Verdict::Fails(m) => {
            assert_eq!(m.input, text(&v, "h"));
            assert_eq!(m.got.unwrap().to_string(), "ε");
        }
        other => panic!("{other}"),
    }
}

#[test]
fn document_round_trip_preserves_behaviour() {
    let v = fixtures::the_vocab();
    let t = build_maximal_munch_transducer(&v).unwrap();
    let doc = TransducerDoc::from_transducer(&t);
    let back = TransducerDoc::from_json(&doc.to_json())
        .unwrap()
        .to_transducer(v.chars(), v.tokens())
        .unwrap();
    assert_eq!(TransducerDoc::from_transducer(&back), doc);
    assert!(equivalent_on(&back, |s| t.run(s), 6).holds());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn equivalence_holds_for_any_open_vocab(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_open_vocab(&mut rng, 2, 4, 5);
        let t = build_maximal_munch_transducer(&v).unwrap();
        prop_assert!(equivalent_on(&t, |s| maximal_munch_encode(&v, s), 7).holds());
    }
}
