//! Small worked tokenizers used by tests, benchmarks and the CLI docs.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dist::Dist;
use crate::encoders::Vocab;
use crate::rational::ratio;
use crate::stochmap::StochMap;
use crate::strings::{Alphabet, Space, Str};
use crate::tokenizer::Tokenizer;

fn table(dom: &Space, cod: &Space, pairs: &[(&str, &str)]) -> StochMap {
    let rows: BTreeMap<Str, Dist> = pairs
        .iter()
        .map(|(x, y)| {
            let x = Str::parse(dom.alphabet(), x).expect("fixture label");
            let y = Str::parse(cod.alphabet(), y).expect("fixture label");
            (x, Dist::point_mass(&y, cod).expect("fixture member"))
        })
        .collect();
    StochMap::from_rows(dom, cod, rows).expect("fixture table is total")
}

fn singletons(alpha: &Arc<Alphabet>) -> Space {
    let members = alpha
        .labels()
        .iter()
        .map(|l| Str::parse(alpha, l).expect("own label"));
    Space::finite(alpha, members).expect("same alphabet")
}

fn collapse_chars() -> Arc<Alphabet> {
    Alphabet::characters(["σ1", "σ2", "σ3", "σ4"]).expect("valid labels")
}

/// The inconsistent tokenizer with deterministic maps
/// `τ: σ1→δ1, σ2→δ3, σ3→δ3` and `κ: δ1→σ2, δ2→σ2, δ3→σ3`.
/// `σ4 ↔ δ4` stands in for the remaining strings, which round-trip.
pub fn collapse() -> Tokenizer {
    let chars = collapse_chars();
    let tokens = Alphabet::tokens(["δ1", "δ2", "δ3", "δ4"]).expect("valid labels");
    let text = singletons(&chars);
    let toks = singletons(&tokens);
    let encoder = table(
        &text,
        &toks,
        &[("σ1", "δ1"), ("σ2", "δ3"), ("σ3", "δ3"), ("σ4", "δ4")],
    );
    let decoder = table(
        &toks,
        &text,
        &[("δ1", "σ2"), ("δ2", "σ2"), ("δ3", "σ3"), ("δ4", "σ4")],
    );
    Tokenizer::new(encoder, decoder).expect("fixture spaces agree")
}

pub fn collapse_text(label: &str) -> Str {
    Str::parse(&collapse_chars(), label).expect("fixture label")
}

/// `p*(σ1) = 1/5`, `p*(σ2) = p*(σ3) = 2/5`.
pub fn collapse_p_star() -> Dist {
    let t = collapse();
    Dist::new(
        t.text_space(),
        [
            (collapse_text("σ1"), ratio(1, 5)),
            (collapse_text("σ2"), ratio(2, 5)),
            (collapse_text("σ3"), ratio(2, 5)),
        ],
    )
    .expect("normalized")
}

/// Agrees with `p*` except that `σ1` and `σ2` get no mass; the freed mass
/// sits on `σ4`.
pub fn collapse_p_consistent() -> Dist {
    let t = collapse();
    Dist::new(
        t.text_space(),
        [
            (collapse_text("σ3"), ratio(2, 5)),
            (collapse_text("σ4"), ratio(3, 5)),
        ],
    )
    .expect("normalized")
}

/// A tokenizer whose round trip swaps `x1` and `x2`, with a distribution
/// giving both the same mass.
pub fn swap_tokenizer() -> (Tokenizer, Dist) {
    let chars = Alphabet::characters(["x1", "x2", "x3"]).expect("valid labels");
    let tokens = Alphabet::tokens(["d1", "d2", "d3"]).expect("valid labels");
    let text = singletons(&chars);
    let toks = singletons(&tokens);
    let encoder = table(&text, &toks, &[("x1", "d1"), ("x2", "d2"), ("x3", "d3")]);
    let decoder = table(&toks, &text, &[("d1", "x2"), ("d2", "x1"), ("d3", "x3")]);
    let t = Tokenizer::new(encoder, decoder).expect("fixture spaces agree");
    let p = Dist::new(
        &text,
        [
            (Str::parse(&chars, "x1").unwrap(), ratio(1, 4)),
            (Str::parse(&chars, "x2").unwrap(), ratio(1, 4)),
            (Str::parse(&chars, "x3").unwrap(), ratio(1, 2)),
        ],
    )
    .expect("normalized");
    (t, p)
}

/// `Σ = {t, h, e}`, `Δ = {t, h, e, th, he}`.
pub fn the_vocab() -> Vocab {
    let chars = Alphabet::characters(["t", "h", "e"]).expect("valid labels");
    Vocab::from_spellings(&chars, &["t", "h", "e", "th", "he"]).expect("valid vocab")
}

/// A token distribution with `t|he: 1/10`, `th|e: 1/5`, `t|h|e: 1/20` and
/// the remaining `13/20` on `h|e`.
pub fn the_token_dist(t: &Tokenizer) -> Dist {
    let tokens = t.token_space().alphabet();
    Dist::new(
        t.token_space(),
        [
            (Str::parse(tokens, "t|he").unwrap(), ratio(1, 10)),
            (Str::parse(tokens, "th|e").unwrap(), ratio(1, 5)),
            (Str::parse(tokens, "t|h|e").unwrap(), ratio(1, 20)),
            (Str::parse(tokens, "h|e").unwrap(), ratio(13, 20)),
        ],
    )
    .expect("normalized")
}
