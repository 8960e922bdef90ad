//! Alphabets, strings over them, and the finite string spaces every map and
//! distribution in this crate lives on.
//!
//! Symbols are indices into an [`Alphabet`]. A label such as `"th"` is only a
//! name for the symbol; nothing in this module ever splits a label into
//! characters.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Rendering used for the empty string.
pub const EPSILON: &str = "ε";

/// Separator between symbols when labels are not single characters.
pub const SEPARATOR: char = '|';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Characters,
    Tokens,
}

/// A finite, nonempty, ordered set of symbol labels.
#[derive(Debug, Clone)]
pub struct Alphabet {
    labels: Vec<String>,
    index: HashMap<String, u32>,
    role: Role,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.role == other.role && self.labels == other.labels
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<I, S>(labels: I, role: Role) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label == EPSILON || label.contains(SEPARATOR) {
                return Err(Error::InvalidAlphabet(format!("reserved label {label:?}")));
            }
            if index.insert(label.clone(), i as u32).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate label {label:?}")));
            }
        }
        Ok(Arc::new(Alphabet { labels, index, role }))
    }

    pub fn characters<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(labels, Role::Characters)
    }

    pub fn tokens<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(labels, Role::Tokens)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, sym: u32) -> &str {
        &self.labels[sym as usize]
    }

    pub fn symbol(&self, label: &str) -> Option<u32> {
        self.index.get(label).copied()
    }

    fn single_char_labels(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }
}

/// A finite sequence of symbols over a shared alphabet.
#[derive(Clone)]
pub struct Str {
    alphabet: Arc<Alphabet>,
    syms: Vec<u32>,
}

impl Str {
    pub fn new(alphabet: &Arc<Alphabet>, syms: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = syms.iter().find(|&&s| s as usize >= alphabet.len()) {
            return Err(Error::InvalidAlphabet(format!("symbol index {bad} out of range")));
        }
        Ok(Str {
            alphabet: Arc::clone(alphabet),
            syms,
        })
    }

    pub fn empty(alphabet: &Arc<Alphabet>) -> Self {
        Str {
            alphabet: Arc::clone(alphabet),
            syms: Vec::new(),
        }
    }

    pub fn from_labels<S: AsRef<str>>(alphabet: &Arc<Alphabet>, labels: &[S]) -> Result<Self> {
        let syms = labels
            .iter()
            .map(|l| {
                alphabet.symbol(l.as_ref()).ok_or_else(|| Error::UnknownSymbol {
                    label: l.as_ref().to_string(),
                    text: labels.iter().map(AsRef::as_ref).collect::<Vec<_>>().join("|"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Str {
            alphabet: Arc::clone(alphabet),
            syms,
        })
    }

    /// Parses the textual form produced by `Display`.
    ///
    /// `""` and `"ε"` are the empty string. Text containing `|` is split on it.
    /// Otherwise a whole-text label wins, and failing that the text is read
    /// one character per symbol.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Self> {
        if text.is_empty() || text == EPSILON {
            return Ok(Str::empty(alphabet));
        }
        if text.contains(SEPARATOR) {
            let parts: Vec<&str> = text.split(SEPARATOR).collect();
            return Str::from_labels(alphabet, &parts);
        }
        if let Some(sym) = alphabet.symbol(text) {
            return Ok(Str {
                alphabet: Arc::clone(alphabet),
                syms: vec![sym],
            });
        }
        let mut syms = Vec::new();
        for ch in text.chars() {
            let mut buf = [0u8; 4];
            let label = ch.encode_utf8(&mut buf);
            match alphabet.symbol(label) {
                Some(sym) => syms.push(sym),
                None => {
                    return Err(Error::UnknownSymbol {
                        label: label.to_string(),
                        text: text.to_string(),
                    })
                }
            }
        }
        Ok(Str {
            alphabet: Arc::clone(alphabet),
            syms,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn syms(&self) -> &[u32] {
        &self.syms
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn same_alphabet(&self, other: &Str) -> bool {
        same_alphabet(&self.alphabet, &other.alphabet)
    }

    fn check(&self, other: &Str) -> Result<()> {
        if self.same_alphabet(other) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// The prefix made of the first `len` symbols.
    pub fn prefix(&self, len: usize) -> Str {
        Str {
            alphabet: Arc::clone(&self.alphabet),
            syms: self.syms[..len].to_vec(),
        }
    }

    pub fn suffix_from(&self, start: usize) -> Str {
        Str {
            alphabet: Arc::clone(&self.alphabet),
            syms: self.syms[start..].to_vec(),
        }
    }

    /// Appends one symbol, returning the extended string.
    pub fn push(&self, sym: u32) -> Str {
        let mut syms = Vec::with_capacity(self.syms.len() + 1);
        syms.extend_from_slice(&self.syms);
        syms.push(sym);
        Str {
            alphabet: Arc::clone(&self.alphabet),
            syms,
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.syms.iter().map(move |&s| self.alphabet.label(s))
    }
}

pub(crate) fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Str {
    fn eq(&self, other: &Self) -> bool {
        self.syms == other.syms && self.same_alphabet(other)
    }
}

impl Eq for Str {}

impl Hash for Str {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.syms.hash(state);
    }
}

/// Canonical order: shorter strings first, then lexicographic on symbol
/// indices.
impl Ord for Str {
    fn cmp(&self, other: &Self) -> Ordering {
        self.syms
            .len()
            .cmp(&other.syms.len())
            .then_with(|| self.syms.cmp(&other.syms))
            .then_with(|| {
                if self.same_alphabet(other) {
                    Ordering::Equal
                } else {
                    self.alphabet.labels.cmp(&other.alphabet.labels)
                }
            })
    }
}

impl PartialOrd for Str {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syms.is_empty() {
            return f.write_str(EPSILON);
        }
        let joined = self.alphabet.role == Role::Characters && self.alphabet.single_char_labels();
        for (i, label) in self.labels().enumerate() {
            if i > 0 && !joined {
                write!(f, "{SEPARATOR}")?;
            }
            f.write_str(label)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Str({self})")
    }
}

pub fn concat(a: &Str, b: &Str) -> Result<Str> {
    a.check(b)?;
    let mut syms = Vec::with_capacity(a.len() + b.len());
    syms.extend_from_slice(&a.syms);
    syms.extend_from_slice(&b.syms);
    Ok(Str {
        alphabet: Arc::clone(&a.alphabet),
        syms,
    })
}

fn lcp_len(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub fn longest_common_prefix(a: &Str, b: &Str) -> Result<Str> {
    a.check(b)?;
    Ok(a.prefix(lcp_len(&a.syms, &b.syms)))
}

/// `|a| + |b| - 2 |a ∧ b|`.
pub fn left_distance(a: &Str, b: &Str) -> Result<usize> {
    a.check(b)?;
    Ok(left_distance_syms(&a.syms, &b.syms))
}

pub(crate) fn left_distance_syms(a: &[u32], b: &[u32]) -> usize {
    a.len() + b.len() - 2 * lcp_len(a, b)
}

pub fn is_prefix(a: &Str, b: &Str) -> Result<bool> {
    a.check(b)?;
    Ok(b.syms.starts_with(&a.syms))
}

/// Every string of length at most `max_len`, in canonical order.
pub fn enumerate_strings(alpha: &Arc<Alphabet>, max_len: usize) -> Vec<Str> {
    let k = alpha.len() as u32;
    let mut out = vec![Str::empty(alpha)];
    let mut layer_start = 0;
    for _ in 0..max_len {
        let layer_end = out.len();
        for i in layer_start..layer_end {
            for s in 0..k {
                let next = out[i].push(s);
                out.push(next);
            }
        }
        layer_start = layer_end;
    }
    out
}

/// `Σ_{i=0}^{n} k^i`, the size of `Γ^≤n` for `|Γ| = k`.
pub fn count_upto(k: usize, n: usize) -> u128 {
    let mut total = 0u128;
    let mut term = 1u128;
    for _ in 0..=n {
        total += term;
        term *= k as u128;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Extent {
    Truncated(usize),
    Finite(Arc<BTreeSet<Str>>),
}

/// A finite set of strings over one alphabet: either `Γ^≤N` or an explicitly
/// declared set of opaque strings.
#[derive(Debug, Clone)]
pub struct Space {
    alphabet: Arc<Alphabet>,
    extent: Extent,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        same_alphabet(&self.alphabet, &other.alphabet) && self.extent == other.extent
    }
}

impl Eq for Space {}

impl Space {
    pub fn truncated(alphabet: &Arc<Alphabet>, max_len: usize) -> Self {
        Space {
            alphabet: Arc::clone(alphabet),
            extent: Extent::Truncated(max_len),
        }
    }

    pub fn finite<I: IntoIterator<Item = Str>>(alphabet: &Arc<Alphabet>, members: I) -> Result<Self> {
        let set: BTreeSet<Str> = members.into_iter().collect();
        if let Some(bad) = set.iter().find(|s| !same_alphabet(s.alphabet(), alphabet)) {
            return Err(Error::SpaceMismatch(format!("{bad} is over another alphabet")));
        }
        Ok(Space {
            alphabet: Arc::clone(alphabet),
            extent: Extent::Finite(Arc::new(set)),
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// The truncation length for `Γ^≤N` spaces, or the longest member of a
    /// finite space.
    pub fn max_len(&self) -> usize {
        match &self.extent {
            Extent::Truncated(n) => *n,
            Extent::Finite(set) => set.iter().next_back().map_or(0, Str::len),
        }
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self.extent, Extent::Truncated(_))
    }

    pub fn contains(&self, s: &Str) -> bool {
        if !same_alphabet(&self.alphabet, s.alphabet()) {
            return false;
        }
        match &self.extent {
            Extent::Truncated(n) => s.len() <= *n,
            Extent::Finite(set) => set.contains(s),
        }
    }

    pub fn size(&self) -> u128 {
        match &self.extent {
            Extent::Truncated(n) => count_upto(self.alphabet.len(), *n),
            Extent::Finite(set) => set.len() as u128,
        }
    }

    /// Members in canonical order.
    pub fn strings(&self) -> Vec<Str> {
        match &self.extent {
            Extent::Truncated(n) => enumerate_strings(&self.alphabet, *n),
            Extent::Finite(set) => set.iter().cloned().collect(),
        }
    }

    /// True when every member of `self` is a member of `other`.
    pub fn is_subspace_of(&self, other: &Space) -> bool {
        if !same_alphabet(&self.alphabet, &other.alphabet) {
            return false;
        }
        match (&self.extent, &other.extent) {
            (Extent::Truncated(a), Extent::Truncated(b)) => a <= b,
            (Extent::Finite(set), _) => set.iter().all(|s| other.contains(s)),
            (Extent::Truncated(_), Extent::Finite(_)) => self.strings().iter().all(|s| other.contains(s)),
        }
    }

    pub(crate) fn ensure_contains(&self, s: &Str) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::OutOfTruncation(s.to_string()))
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.alphabet.labels.join(",");
        match &self.extent {
            Extent::Truncated(n) => write!(f, "{{{labels}}}^≤{n}"),
            Extent::Finite(set) => write!(f, "{} strings over {{{labels}}}", set.len()),
        }
    }
}
