//! Tokenizers as encoder/decoder pairs of stochastic maps, and the checkers
//! for consistency, exactness, structural classification, preimage
//! enumeration, marginalization and spurious ambiguity.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::Dist;
use crate::encoders::{self, MergeList, Vocab};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::stochmap::{compose, pushforward, StochMap};
use crate::strings::{concat, enumerate_strings, is_prefix, left_distance_syms, Space, Str};
use crate::verdict::Verdict;

/// A pair `(τ, κ)` with `τ: Σ^≤N ⇝ Δ^≤M` and `κ: Δ^≤M ⇝ Σ^≤N′`, `N′ ≥ N`.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    encoder: StochMap,
    decoder: StochMap,
    notes: Vec<String>,
    round_trip: OnceLock<StochMap>,
    spellings: OnceLock<std::result::Result<Arc<SpellingIndex>, String>>,
}

/// Where `κτp` and `p` disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub string: Str,
    pub expected: Rational,
    pub actual: Rational,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} vs {})", self.string, self.actual, self.expected)
    }
}

/// An ordered pair of strings used as a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair(pub Str, pub Str);

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// A point mass the round trip moves, as found by the probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeWitness {
    pub distribution: Dist,
    pub discrepancy: Discrepancy,
}

impl fmt::Display for ProbeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} is inconsistent at {}", self.distribution, self.discrepancy)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub deterministic_encoder: Verdict<Str>,
    pub deterministic_decoder: Verdict<Str>,
    pub exact: Verdict<Str>,
    pub bijective: Verdict<String>,
    pub multiplicative_decoder: Verdict<Pair>,
    pub trivial_kernel: Verdict<Str>,
    pub prefix_monotone: Verdict<Pair>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationProbe {
    pub k: usize,
    pub bound: usize,
    pub witness: Option<Pair>,
}

/// Spelling → tokens, derived from a deterministic multiplicative decoder.
#[derive(Debug)]
struct SpellingIndex {
    by_spelling: HashMap<Vec<u32>, Vec<u32>>,
    max_len: usize,
}

impl Tokenizer {
    pub fn new(encoder: StochMap, decoder: StochMap) -> Result<Self> {
        if encoder.cod() != decoder.dom() {
            return Err(Error::SpaceMismatch(format!(
                "encoder lands in {} but decoder reads {}",
                encoder.cod(),
                decoder.dom()
            )));
        }
        if !encoder.dom().is_subspace_of(decoder.cod()) {
            return Err(Error::SpaceMismatch(format!(
                "decoder codomain {} does not contain the text space {}",
                decoder.cod(),
                encoder.dom()
            )));
        }
        Ok(Tokenizer {
            encoder,
            decoder,
            notes: Vec::new(),
            round_trip: OnceLock::new(),
            spellings: OnceLock::new(),
        })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Maximal munch over `Σ^≤n` with the concatenating decoder on `Δ^≤n`.
    pub fn maximal_munch(vocab: &Vocab, n: usize) -> Result<Self> {
        let (text, tokens, decoder) = vocab_spaces(vocab, n)?;
        let encoder = StochMap::deterministic(&text, &tokens, |s| encoders::maximal_munch_encode(vocab, s))?;
        Tokenizer::new(encoder, decoder)
    }

    /// Maximal munch that maps unmatched characters to `unk`.
    pub fn maximal_munch_lossy(vocab: &Vocab, unk: u32, n: usize) -> Result<Self> {
        let (text, tokens, decoder) = vocab_spaces(vocab, n)?;
        let encoder = StochMap::deterministic(&text, &tokens, |s| {
            encoders::maximal_munch_encode_lossy(vocab, unk, s)
        })?;
        Ok(Tokenizer::new(encoder, decoder)?.with_note("lossy unknown-token mode breaks exactness"))
    }

    pub fn bpe(vocab: &Vocab, merges: &MergeList, n: usize) -> Result<Self> {
        let (text, tokens, decoder) = vocab_spaces(vocab, n)?;
        let encoder = StochMap::deterministic(&text, &tokens, |s| encoders::bpe_encode(vocab, merges, s))?;
        Tokenizer::new(encoder, decoder)
    }

    pub fn uniform(vocab: &Vocab, n: usize) -> Result<Self> {
        let (text, tokens, decoder) = vocab_spaces(vocab, n)?;
        let encoder =
            StochMap::materialize(&text, &tokens, |s| encoders::uniform_segmenter(vocab, s, &tokens))?;
        Tokenizer::new(encoder, decoder)
    }

    pub fn encoder(&self) -> &StochMap {
        &self.encoder
    }

    pub fn decoder(&self) -> &StochMap {
        &self.decoder
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn text_space(&self) -> &Space {
        self.encoder.dom()
    }

    pub fn token_space(&self) -> &Space {
        self.encoder.cod()
    }

    pub fn decoded_space(&self) -> &Space {
        self.decoder.cod()
    }

    /// `κτ`, computed once.
    pub fn round_trip(&self) -> &StochMap {
        self.round_trip
            .get_or_init(|| compose(&self.decoder, &self.encoder).expect("spaces checked in new"))
    }

    /// `κτp`.
    pub fn decode_pushforward(&self, p: &Dist) -> Result<Dist> {
        pushforward(self.round_trip(), p)
    }

    fn check_text_dist(&self, p: &Dist) -> Result<()> {
        if p.space() == self.text_space() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "distribution on {} but tokenizer reads {}",
                p.space(),
                self.text_space()
            )))
        }
    }

    /// Exact comparison of `κτp` against `p`.
    pub fn is_consistent_wrt(&self, p: &Dist) -> Result<Verdict<Discrepancy>> {
        self.check_text_dist(p)?;
        let decoded = self.decode_pushforward(p)?;
        let expected = p.embed(self.decoded_space())?;
        let candidates: BTreeSet<&Str> = decoded.support().chain(expected.support()).collect();
        for s in candidates {
            let (e, a) = (expected.mass(s), decoded.mass(s));
            if e != a {
                return Ok(Verdict::Fails(Discrepancy {
                    string: s.clone(),
                    expected: e,
                    actual: a,
                }));
            }
        }
        Ok(Verdict::Holds)
    }

    /// `κτ = id`, row by row.
    pub fn is_exact(&self) -> Verdict<Str> {
        for (s, row) in self.round_trip().rows() {
            if row.as_point() != Some(s) {
                return Verdict::Fails(s.clone());
            }
        }
        Verdict::Holds
    }

    /// For an exact tokenizer, checks consistency against every point mass
    /// and `trials` random distributions. Otherwise returns a point mass the
    /// round trip moves.
    pub fn exact_iff_all_consistent_probe(&self, trials: usize, seed: u64) -> Result<Verdict<ProbeWitness>> {
        let space = self.text_space();
        let inconsistent = |p: Dist| -> Result<Option<ProbeWitness>> {
            Ok(self
                .is_consistent_wrt(&p)?
                .witness()
                .cloned()
                .map(|d| ProbeWitness {
                    distribution: p,
                    discrepancy: d,
                }))
        };
        if let Verdict::Fails(s) = self.is_exact() {
            let p = Dist::point_mass(&s, space)?;
            return match inconsistent(p)? {
                Some(w) => Ok(Verdict::Fails(w)),
                None => Err(Error::InvalidDistribution(format!(
                    "round trip moves {s} yet its point mass is consistent"
                ))),
            };
        }
        let strings = space.strings();
        for s in &strings {
            if let Some(w) = inconsistent(Dist::point_mass(s, space)?)? {
                return Ok(Verdict::Fails(w));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            if let Some(w) = inconsistent(Dist::random(space, &strings, 10, &mut rng)?)? {
                return Ok(Verdict::Fails(w));
            }
        }
        Ok(Verdict::Holds)
    }

    pub fn classify(&self) -> ClassificationReport {
        let deterministic_encoder = self.encoder.is_deterministic();
        let deterministic_decoder = self.decoder.is_deterministic();
        let exact = self.is_exact();
        let bijective = match (&deterministic_encoder, &exact) {
            (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
            (Verdict::Fails(s), _) => Verdict::Fails(format!("encoder is stochastic at {s}")),
            (_, Verdict::Fails(s)) => Verdict::Fails(format!("not exact at {s}")),
            (Verdict::NotApplicable(w), _) | (_, Verdict::NotApplicable(w)) => {
                Verdict::NotApplicable(w.clone())
            }
        };
        let multiplicative_decoder = self.check_multiplicative();
        let trivial_kernel = self.check_trivial_kernel(multiplicative_decoder.holds());
        let prefix_monotone = self.check_prefix_monotone();
        ClassificationReport {
            deterministic_encoder,
            deterministic_decoder,
            exact,
            bijective,
            multiplicative_decoder,
            trivial_kernel,
            prefix_monotone,
        }
    }

    fn decoder_values(&self) -> std::result::Result<HashMap<&Str, &Str>, String> {
        if let Verdict::Fails(s) = self.decoder.is_deterministic() {
            return Err(format!("decoder is stochastic at {s}"));
        }
        Ok(self
            .decoder
            .rows()
            .map(|(d, row)| (d, row.as_point().expect("deterministic")))
            .collect())
    }

    fn check_multiplicative(&self) -> Verdict<Pair> {
        let values = match self.decoder_values() {
            Ok(v) => v,
            Err(why) => return Verdict::NotApplicable(why),
        };
        if !self.decoder.dom().is_truncated() {
            return Verdict::NotApplicable("decoder domain is not closed under concatenation".into());
        }
        for (delta, out) in &values {
            for k in 0..=delta.len() {
                let (left, right) = (delta.prefix(k), delta.suffix_from(k));
                let joined = concat(values[&left], values[&right]).expect("same alphabet");
                if &joined != *out {
                    return Verdict::Fails(Pair(left, right));
                }
            }
        }
        Verdict::Holds
    }

    fn check_trivial_kernel(&self, multiplicative: bool) -> Verdict<Str> {
        let decodes_to_empty = |row: &Dist| row.support().any(Str::is_empty);
        // with multiplicativity, single tokens are enough
        let offending = self
            .decoder
            .rows()
            .filter(|(d, _)| !d.is_empty() && (!multiplicative || d.len() == 1))
            .find(|(_, row)| decodes_to_empty(row));
        match offending {
            Some((d, _)) => Verdict::Fails(d.clone()),
            None => Verdict::Holds,
        }
    }

    fn check_prefix_monotone(&self) -> Verdict<Pair> {
        let values = match self.decoder_values() {
            Ok(v) => v,
            Err(why) => return Verdict::NotApplicable(why),
        };
        if !self.decoder.dom().is_truncated() {
            return Verdict::NotApplicable("decoder domain is not closed under prefixes".into());
        }
        for (delta, out) in self.decoder.rows().map(|(d, _)| (d, values[d])) {
            for k in 0..delta.len() {
                let prefix = delta.prefix(k);
                if !is_prefix(values[&prefix], out).expect("same alphabet") {
                    return Verdict::Fails(Pair(prefix, delta.clone()));
                }
            }
        }
        Verdict::Holds
    }

    fn spelling_index(&self) -> Result<Arc<SpellingIndex>> {
        self.spellings
            .get_or_init(|| {
                let report_m = self.check_multiplicative();
                if let Verdict::Fails(p) = &report_m {
                    return Err(format!("decoder is not multiplicative at {p}"));
                }
                if let Verdict::NotApplicable(why) = &report_m {
                    return Err(why.clone());
                }
                if let Verdict::Fails(t) = self.check_trivial_kernel(true) {
                    return Err(format!("token {t} decodes to the empty string"));
                }
                let mut by_spelling: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
                let mut max_len = 0;
                for (delta, row) in self.decoder.rows().filter(|(d, _)| d.len() == 1) {
                    let spelling = row.as_point().expect("deterministic");
                    max_len = max_len.max(spelling.len());
                    by_spelling
                        .entry(spelling.syms().to_vec())
                        .or_default()
                        .push(delta.syms()[0]);
                }
                Ok(Arc::new(SpellingIndex { by_spelling, max_len }))
            })
            .clone()
            .map_err(Error::DecoderNotEligible)
    }

    /// Every token sequence the decoder maps to `text`, in canonical order.
    /// Requires a deterministic, multiplicative decoder with trivial kernel,
    /// so every preimage is at most as long as `text`.
    pub fn preimages(&self, text: &Str) -> Result<Vec<Str>> {
        let index = self.spelling_index()?;
        if !crate::strings::same_alphabet(text.alphabet(), self.decoded_space().alphabet()) {
            return Err(Error::AlphabetMismatch);
        }
        let tokens = self.token_space().alphabet();
        encoders::segment(text.syms(), index.max_len, |piece| {
            index.by_spelling.get(piece).map_or(&[][..], Vec::as_slice)
        })
        .into_iter()
        .map(|syms| Str::new(tokens, syms))
        .collect()
    }

    /// `Σ_{δ ∈ κ⁻¹(text)} q(δ)`.
    pub fn marginalize(&self, q: &Dist, text: &Str) -> Result<Rational> {
        if q.space() != self.token_space() {
            return Err(Error::SpaceMismatch(format!(
                "distribution on {} but decoder reads {}",
                q.space(),
                self.token_space()
            )));
        }
        Ok(self.preimages(text)?.iter().map(|d| q.mass(d)).sum())
    }

    /// Mass `q` places outside the image of a deterministic encoder.
    pub fn spurious_ambiguity_mass(&self, q: &Dist) -> Result<Rational> {
        if let Verdict::Fails(s) = self.encoder.is_deterministic() {
            return Err(Error::EncoderNotDeterministic(s.to_string()));
        }
        if q.space() != self.token_space() {
            return Err(Error::SpaceMismatch(format!(
                "distribution on {} but encoder lands in {}",
                q.space(),
                self.token_space()
            )));
        }
        let image = self.encoder.support_of();
        Ok(q.iter()
            .filter(|(d, _)| !image.contains(*d))
            .fold(Rational::zero(), |acc, (_, m)| acc + m))
    }
}

fn vocab_spaces(vocab: &Vocab, n: usize) -> Result<(Space, Space, StochMap)> {
    let text = Space::truncated(vocab.chars(), n);
    let tokens = Space::truncated(vocab.tokens(), n);
    let decoder = encoders::concat_decoder(vocab, n)?;
    Ok((text, tokens, decoder))
}

/// `Σ_{i=1}^{n} k^i`, the number of nonempty token sequences of length at
/// most `n`.
pub fn preimage_bound(n: usize, vocab_size: usize) -> u128 {
    crate::strings::count_upto(vocab_size, n) - 1
}

/// Largest output distance `‖f(γ), f(γ′)‖` over domain pairs with
/// `‖γ, γ′‖ ≤ k`.
pub fn bounded_variation_probe(f: &StochMap, k: usize) -> Result<VariationProbe> {
    if let Verdict::Fails(s) = f.is_deterministic() {
        return Err(Error::NotDeterministic(s.to_string()));
    }
    let values: HashMap<&[u32], &[u32]> = f
        .rows()
        .map(|(x, row)| (x.syms(), row.as_point().expect("deterministic").syms()))
        .collect();
    let mut best = 0;
    let mut witness = None;
    let mut consider = |a: &Str, b: &[u32]| {
        if let Some(fb) = values.get(b) {
            let d = left_distance_syms(values[a.syms()], fb);
            if witness.is_none() || d > best {
                best = d;
                witness = Some(Pair(
                    a.clone(),
                    Str::new(a.alphabet(), b.to_vec()).expect("domain member"),
                ));
            }
        }
    };
    let dom = f.dom();
    if dom.is_truncated() {
        let n = dom.max_len();
        let tails: Vec<Vec<Str>> = (0..=k).map(|j| enumerate_strings(dom.alphabet(), j)).collect();
        let mut buf = Vec::new();
        for (x, _) in f.rows() {
            for cut in 0..=k.min(x.len()) {
                let base = &x.syms()[..x.len() - cut];
                for tail in &tails[k - cut] {
                    if base.len() + tail.len() > n {
                        continue;
                    }
                    buf.clear();
                    buf.extend_from_slice(base);
                    buf.extend_from_slice(tail.syms());
                    consider(x, &buf);
                }
            }
        }
    } else {
        let xs: Vec<&Str> = f.rows().map(|(x, _)| x).collect();
        for a in &xs {
            for b in &xs {
                if left_distance_syms(a.syms(), b.syms()) <= k {
                    consider(a, b.syms());
                }
            }
        }
    }
    Ok(VariationProbe {
        k,
        bound: best,
        witness,
    })
}
