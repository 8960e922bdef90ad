//! Workloads shared by the criterion benchmarks.

use tokcheck_core::{Alphabet, Tokenizer, Vocab};

/// `Σ = {a, b, c}` with every spelling of length one or two.
pub fn pair_vocab() -> Vocab {
    let chars = Alphabet::characters(["a", "b", "c"]).expect("valid labels");
    let mut spellings = vec!["a".to_string(), "b".into(), "c".into()];
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            spellings.push(format!("{x}{y}"));
        }
    }
    let refs: Vec<&str> = spellings.iter().map(String::as_str).collect();
    Vocab::from_spellings(&chars, &refs).expect("valid vocab")
}

pub fn munch_tokenizer(n: usize) -> Tokenizer {
    Tokenizer::maximal_munch(&pair_vocab(), n).expect("open vocabulary")
}
