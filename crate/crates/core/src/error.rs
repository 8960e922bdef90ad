use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("strings are over different alphabets")]
    AlphabetMismatch,
    #[error("unknown symbol {label:?} in {text:?}")]
    UnknownSymbol { label: String, text: String },
    #[error("string {0} lies outside the truncated space")]
    OutOfTruncation(String),
    #[error("distributions or maps live on different spaces: {0}")]
    SpaceMismatch(String),
    #[error("string {0} is not in the domain of the map")]
    OutOfDomain(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("cannot build an empirical distribution from zero samples")]
    EmptySample,
    #[error("procedure undefined at {input}: {reason}")]
    ProcUndefinedAt { input: String, reason: String },
    #[error("decoder not eligible for preimage enumeration: {0}")]
    DecoderNotEligible(String),
    #[error("encoder is not deterministic at {0}")]
    EncoderNotDeterministic(String),
    #[error("map is not deterministic at {0}")]
    NotDeterministic(String),
    #[error("decoded length {len} exceeds truncation {max}")]
    TruncationOverflow { len: usize, max: usize },
    #[error("no vocabulary spelling matches at position {0}")]
    NoMatchingPrefix(usize),
    #[error("no single-character token for {label:?} at position {position}")]
    MissingBaseCharacter { label: String, position: usize },
    #[error("{0} has no segmentation into vocabulary tokens")]
    NoSegmentation(String),
    #[error("invalid vocabulary: {0}")]
    InvalidVocab(String),
    #[error("invalid merge list: {0}")]
    InvalidMerges(String),
    #[error("vocabulary is not open: character {0:?} has no token")]
    VocabNotOpen(String),
    #[error("undefined transition from state {state} on {symbol:?} at position {position}")]
    UndefinedTransition {
        state: String,
        symbol: String,
        position: usize,
    },
    #[error("invalid transducer: {0}")]
    InvalidTransducer(String),
    #[error("parse error: {0}")]
    Parse(String),
}
