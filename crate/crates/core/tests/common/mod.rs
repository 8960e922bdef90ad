#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use tokcheck_core::{Alphabet, Dist, MergeList, Space, StochMap, Str, Vocab};

pub const LETTERS: [&str; 5] = ["a", "b", "c", "d", "e"];

pub fn alphabet(k: usize) -> Arc<Alphabet> {
    Alphabet::characters(LETTERS[..k].iter().copied()).unwrap()
}

/// All single characters plus up to `extra` random spellings of length
/// 2..=`max_spelling`.
pub fn random_open_vocab<R: Rng>(rng: &mut R, k: usize, max_spelling: usize, extra: usize) -> Vocab {
    let chars = alphabet(k);
    let mut spellings: BTreeSet<String> = LETTERS[..k].iter().map(|s| s.to_string()).collect();
    let wanted = rng.random_range(0..=extra);
    let mut tries = 0;
    while spellings.len() < k + wanted && tries < 100 && max_spelling >= 2 {
        tries += 1;
        let len = rng.random_range(2..=max_spelling);
        let s: String = (0..len).map(|_| LETTERS[rng.random_range(0..k)]).collect();
        spellings.insert(s);
    }
    let refs: Vec<&str> = spellings.iter().map(String::as_str).collect();
    Vocab::from_spellings(&chars, &refs).unwrap()
}

/// A vocabulary grown by random merges, returned with its merge list.
pub fn random_bpe<R: Rng>(rng: &mut R, k: usize, max_spelling: usize, merges: usize) -> (Vocab, MergeList) {
    let chars = alphabet(k);
    let mut tokens: Vec<String> = LETTERS[..k].iter().map(|s| s.to_string()).collect();
    let mut pairs: Vec<(String, String)> = Vec::new();
    for _ in 0..merges * 4 {
        if pairs.len() == merges {
            break;
        }
        let l = tokens.choose(rng).unwrap().clone();
        let r = tokens.choose(rng).unwrap().clone();
        let joined = format!("{l}{r}");
        if joined.len() > max_spelling || tokens.contains(&joined) {
            continue;
        }
        tokens.push(joined);
        pairs.push((l, r));
    }
    let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
    let vocab = Vocab::from_spellings(&chars, &refs).unwrap();
    let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(l, r)| (l.as_str(), r.as_str())).collect();
    let merges = MergeList::parse(&vocab, &pair_refs).unwrap();
    (vocab, merges)
}

/// A random stochastic map with rows supported on up to three codomain
/// strings.
pub fn random_map<R: Rng>(rng: &mut R, dom: &Space, cod: &Space) -> StochMap {
    let targets = cod.strings();
    StochMap::materialize(dom, cod, |_| {
        let picks: Vec<Str> = targets
            .choose_multiple(rng, 3.min(targets.len()))
            .cloned()
            .collect();
        Dist::random(cod, &picks, 6, rng)
    })
    .unwrap()
}

pub fn random_dist<R: Rng>(rng: &mut R, space: &Space) -> Dist {
    Dist::random(space, &space.strings(), 9, rng).unwrap()
}

pub fn text(v: &Vocab, s: &str) -> Str {
    Str::parse(v.chars(), s).unwrap()
}
