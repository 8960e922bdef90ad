mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tokcheck_core::format::{
    dist_from_json, dist_to_json, map_from_table, map_to_table, DecoderSpec, EncoderSpec, TokenizerSpec,
    VocabEntry,
};
use tokcheck_core::{fixtures, parse_rational, ratio, Error, Space};

use common::{alphabet, random_dist, random_map, random_open_vocab};

#[test]
fn rationals_parse_in_all_forms() {
    assert_eq!(parse_rational("2/5").unwrap(), ratio(2, 5));
    assert_eq!(parse_rational("0.4").unwrap(), ratio(2, 5));
    assert_eq!(parse_rational("1").unwrap(), ratio(1, 1));
    assert!(parse_rational("x").is_err());
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn collapse_tables_survive_a_round_trip() {
    let t = fixtures::collapse();
    for map in [t.encoder(), t.decoder()] {
        let back = map_from_table(&map_to_table(map), map.dom(), map.cod()).unwrap();
        assert_eq!(&back, map);
    }
}

#[test]
fn spec_build_matches_direct_construction() {
    let v = fixtures::the_vocab();
    let spec = TokenizerSpec {
        alphabet: vec!["t".into(), "h".into(), "e".into()],
        tokens: vec![],
        vocab: v
            .entries()
            .map(|(tok, s)| VocabEntry {
                token: tok.to_string(),
                spelling: s.to_string(),
            })
            .collect(),
        max_len: Some(3),
        encoder: EncoderSpec::MaximalMunch { unk: None },
        decoder: DecoderSpec::Concat,
    };
    let parsed = TokenizerSpec::from_json(&spec.to_json()).unwrap();
    assert_eq!(parsed, spec);
    let built = parsed.build(None).unwrap();
    let direct = tokcheck_core::Tokenizer::maximal_munch(&v, 3).unwrap();
    assert_eq!(built.encoder(), direct.encoder());
    assert_eq!(built.text_space(), direct.text_space());
}

#[test]
fn malformed_documents_are_parse_errors() {
    assert!(matches!(TokenizerSpec::from_json("{"), Err(Error::Parse(_))));
    let space = Space::truncated(&alphabet(2), 2);
    assert!(matches!(
        dist_from_json("[{\"string\": \"a\"}]", &space),
        Err(Error::Parse(_))
    ));
    let unnormalized = r#"[{"string": "a", "prob": "1/3"}]"#;
    assert!(matches!(
        dist_from_json(unnormalized, &space),
        Err(Error::InvalidDistribution(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distributions_round_trip(seed in any::<u64>(), k in 1usize..4, n in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = Space::truncated(&alphabet(k), n);
        let p = random_dist(&mut rng, &space);
        prop_assert_eq!(dist_from_json(&dist_to_json(&p), &space).unwrap(), p);
    }

    #[test]
    fn maps_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dom = Space::truncated(&alphabet(2), 2);
        let cod = Space::truncated(&alphabet(3), 1);
        let f = random_map(&mut rng, &dom, &cod);
        prop_assert_eq!(map_from_table(&map_to_table(&f), &dom, &cod).unwrap(), f);
    }

    #[test]
    fn token_distributions_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_open_vocab(&mut rng, 2, 3, 3);
        let space = Space::truncated(v.tokens(), 2);
        let q = random_dist(&mut rng, &space);
        prop_assert_eq!(dist_from_json(&dist_to_json(&q), &space).unwrap(), q);
    }
}
