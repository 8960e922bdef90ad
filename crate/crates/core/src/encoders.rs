//! Concrete encoders over a vocabulary of spelled tokens, and the
//! concatenating decoder.

use std::collections::HashMap;
use std::sync::Arc;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::stochmap::StochMap;
use crate::strings::{Alphabet, Space, Str};

/// Tokens together with their nonempty, pairwise distinct spellings over the
/// character alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    chars: Arc<Alphabet>,
    tokens: Arc<Alphabet>,
    spellings: Vec<Str>,
    by_spelling: HashMap<Vec<u32>, u32>,
    max_spelling_len: usize,
}

impl Vocab {
    pub fn new<S: Into<String>>(chars: &Arc<Alphabet>, entries: Vec<(S, Str)>) -> Result<Self> {
        let (labels, spellings): (Vec<String>, Vec<Str>) =
            entries.into_iter().map(|(l, s)| (l.into(), s)).unzip();
        let tokens = Alphabet::tokens(labels).map_err(|e| Error::InvalidVocab(e.to_string()))?;
        let mut by_spelling = HashMap::with_capacity(spellings.len());
        for (i, sp) in spellings.iter().enumerate() {
            if sp.is_empty() {
                return Err(Error::InvalidVocab(format!(
                    "token {:?} has an empty spelling",
                    tokens.label(i as u32)
                )));
            }
            if !crate::strings::same_alphabet(sp.alphabet(), chars) {
                return Err(Error::InvalidVocab(format!(
                    "spelling {sp} is over another alphabet"
                )));
            }
            if by_spelling.insert(sp.syms().to_vec(), i as u32).is_some() {
                return Err(Error::InvalidVocab(format!("duplicate spelling {sp}")));
            }
        }
        let max_spelling_len = spellings.iter().map(Str::len).max().unwrap_or(0);
        Ok(Vocab {
            chars: Arc::clone(chars),
            tokens,
            spellings,
            by_spelling,
            max_spelling_len,
        })
    }

    /// A vocabulary whose token labels are the spellings themselves.
    pub fn from_spellings(chars: &Arc<Alphabet>, spellings: &[&str]) -> Result<Self> {
        let entries = spellings
            .iter()
            .map(|t| Ok((t.to_string(), Str::parse(chars, t)?)))
            .collect::<Result<Vec<_>>>()?;
        Vocab::new(chars, entries)
    }

    pub fn chars(&self) -> &Arc<Alphabet> {
        &self.chars
    }

    pub fn tokens(&self) -> &Arc<Alphabet> {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.spellings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spellings.is_empty()
    }

    pub fn spelling(&self, token: u32) -> &Str {
        &self.spellings[token as usize]
    }

    pub fn token_for(&self, spelling: &[u32]) -> Option<u32> {
        self.by_spelling.get(spelling).copied()
    }

    pub fn max_spelling_len(&self) -> usize {
        self.max_spelling_len
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Str)> + '_ {
        self.tokens
            .labels()
            .iter()
            .map(String::as_str)
            .zip(&self.spellings)
    }

    /// Every character has a single-character token.
    pub fn is_open(&self) -> bool {
        self.first_missing_char().is_none()
    }

    pub fn require_open(&self) -> Result<()> {
        match self.first_missing_char() {
            Some(c) => Err(Error::VocabNotOpen(self.chars.label(c).to_string())),
            None => Ok(()),
        }
    }

    fn first_missing_char(&self) -> Option<u32> {
        (0..self.chars.len() as u32).find(|&c| self.token_for(&[c]).is_none())
    }
}

/// Ordered `(left, right)` spelling pairs, each naming an existing token
/// whose concatenation is also a token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeList {
    pairs: Vec<(Str, Str)>,
    resolved: Vec<(u32, u32, u32)>,
}

impl MergeList {
    pub fn new(vocab: &Vocab, pairs: Vec<(Str, Str)>) -> Result<Self> {
        let mut resolved = Vec::with_capacity(pairs.len());
        for (left, right) in &pairs {
            let find = |s: &Str| {
                vocab
                    .token_for(s.syms())
                    .ok_or_else(|| Error::InvalidMerges(format!("{s} is not a token spelling")))
            };
            let l = find(left)?;
            let r = find(right)?;
            let merged =
                crate::strings::concat(left, right).map_err(|e| Error::InvalidMerges(e.to_string()))?;
            let m = find(&merged)?;
            resolved.push((l, r, m));
        }
        Ok(MergeList { pairs, resolved })
    }

    pub fn parse(vocab: &Vocab, pairs: &[(&str, &str)]) -> Result<Self> {
        let pairs = pairs
            .iter()
            .map(|(l, r)| Ok((Str::parse(vocab.chars(), l)?, Str::parse(vocab.chars(), r)?)))
            .collect::<Result<Vec<_>>>()?;
        MergeList::new(vocab, pairs)
    }

    pub fn pairs(&self) -> &[(Str, Str)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Concatenates token spellings.
pub fn concat_decode(vocab: &Vocab, tokens: &Str) -> Str {
    let syms = tokens
        .syms()
        .iter()
        .flat_map(|&t| vocab.spelling(t).syms().iter().copied())
        .collect();
    Str::new(&vocab.chars, syms).expect("spellings are over the character alphabet")
}

/// The concatenating decoder on `dom`, landing in `cod`.
pub fn concat_decoder_on(vocab: &Vocab, dom: &Space, cod: &Space) -> Result<StochMap> {
    if !crate::strings::same_alphabet(dom.alphabet(), &vocab.tokens) {
        return Err(Error::SpaceMismatch(
            "decoder domain is not over the token alphabet".into(),
        ));
    }
    let max = cod.max_len();
    StochMap::deterministic(dom, cod, |delta| {
        let out = concat_decode(vocab, delta);
        if out.len() > max {
            return Err(Error::TruncationOverflow { len: out.len(), max });
        }
        Ok(out)
    })
}

/// The concatenating decoder on `Δ^≤max_tokens`, landing in
/// `Σ^≤(max_tokens · L)` where `L` is the longest spelling.
pub fn concat_decoder(vocab: &Vocab, max_tokens: usize) -> Result<StochMap> {
    let dom = Space::truncated(&vocab.tokens, max_tokens);
    let cod = Space::truncated(&vocab.chars, max_tokens * vocab.max_spelling_len);
    concat_decoder_on(vocab, &dom, &cod)
}

/// Repeatedly consumes the longest spelling that prefixes the remaining text.
pub fn maximal_munch_encode(vocab: &Vocab, text: &Str) -> Result<Str> {
    munch(vocab, text, None)
}

/// Maximal munch that emits `unk` and skips one character where no spelling
/// matches. The resulting encoder is not injective in general.
pub fn maximal_munch_encode_lossy(vocab: &Vocab, unk: u32, text: &Str) -> Result<Str> {
    munch(vocab, text, Some(unk))
}

fn munch(vocab: &Vocab, text: &Str, unk: Option<u32>) -> Result<Str> {
    if !crate::strings::same_alphabet(text.alphabet(), &vocab.chars) {
        return Err(Error::AlphabetMismatch);
    }
    let syms = text.syms();
    let mut out = Vec::with_capacity(syms.len());
    let mut pos = 0;
    while pos < syms.len() {
        let longest = (1..=vocab.max_spelling_len.min(syms.len() - pos))
            .rev()
            .find_map(|len| vocab.token_for(&syms[pos..pos + len]).map(|t| (t, len)));
        match (longest, unk) {
            (Some((t, len)), _) => {
                out.push(t);
                pos += len;
            }
            (None, Some(u)) => {
                out.push(u);
                pos += 1;
            }
            (None, None) => return Err(Error::NoMatchingPrefix(pos)),
        }
    }
    Str::new(&vocab.tokens, out)
}

/// Merge-list BPE: start from single characters, then for each merge in
/// order replace adjacent `(left, right)` pairs leftmost-first without
/// overlap until none remain.
pub fn bpe_encode(vocab: &Vocab, merges: &MergeList, text: &Str) -> Result<Str> {
    if !crate::strings::same_alphabet(text.alphabet(), &vocab.chars) {
        return Err(Error::AlphabetMismatch);
    }
    let mut seq = text
        .syms()
        .iter()
        .enumerate()
        .map(|(position, &c)| {
            vocab.token_for(&[c]).ok_or_else(|| Error::MissingBaseCharacter {
                label: vocab.chars.label(c).to_string(),
                position,
            })
        })
        .collect::<Result<Vec<u32>>>()?;
    let mut next = Vec::with_capacity(seq.len());
    for &(l, r, m) in &merges.resolved {
        loop {
            next.clear();
            let mut i = 0;
            while i < seq.len() {
                if i + 1 < seq.len() && seq[i] == l && seq[i + 1] == r {
                    next.push(m);
                    i += 2;
                } else {
                    next.push(seq[i]);
                    i += 1;
                }
            }
            if next.len() == seq.len() {
                break;
            }
            std::mem::swap(&mut seq, &mut next);
        }
    }
    Str::new(&vocab.tokens, seq)
}

/// All ways of cutting `text` into pieces that `lookup` maps to tokens.
/// Only pieces up to `max_piece` symbols long are tried, and the search only
/// descends along pieces that prefix the remaining text. Output is sorted
/// canonically.
pub(crate) fn segment<'a, F>(text: &[u32], max_piece: usize, lookup: F) -> Vec<Vec<u32>>
where
    F: Fn(&[u32]) -> &'a [u32],
{
    fn go<'a, F: Fn(&[u32]) -> &'a [u32]>(
        text: &[u32],
        pos: usize,
        max_piece: usize,
        lookup: &F,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == text.len() {
            out.push(current.clone());
            return;
        }
        for len in 1..=max_piece.min(text.len() - pos) {
            for &t in lookup(&text[pos..pos + len]) {
                current.push(t);
                go(text, pos + len, max_piece, lookup, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(text, 0, max_piece, &lookup, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Every token sequence whose concatenated spelling is `text`.
pub fn segmentations(vocab: &Vocab, text: &Str) -> Result<Vec<Str>> {
    if !crate::strings::same_alphabet(text.alphabet(), &vocab.chars) {
        return Err(Error::AlphabetMismatch);
    }
    let singles: Vec<[u32; 1]> = (0..vocab.len() as u32).map(|t| [t]).collect();
    let found = segment(text.syms(), vocab.max_spelling_len, |piece| {
        vocab
            .token_for(piece)
            .map_or(&[][..], |t| &singles[t as usize][..])
    });
    found
        .into_iter()
        .map(|syms| Str::new(&vocab.tokens, syms))
        .collect()
}

/// The uniform distribution over all segmentations of `text`, on `space`.
pub fn uniform_segmenter(vocab: &Vocab, text: &Str, space: &Space) -> Result<Dist> {
    let segs = segmentations(vocab, text)?;
    if segs.is_empty() {
        return Err(Error::NoSegmentation(text.to_string()));
    }
    Dist::uniform(space, &segs)
}
