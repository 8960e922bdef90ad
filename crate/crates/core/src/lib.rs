//! Tokenizers modelled as pairs of stochastic maps between finite string
//! spaces, with exact-arithmetic checkers for the properties that decide
//! whether token-level estimation can recover a text distribution:
//! consistency, exactness, multiplicativity, finiteness of preimages,
//! bounded variation and subsequentiality.
//!
//! The infinite string monoids are replaced by truncated spaces `Γ^≤N` (or
//! explicitly declared finite sets), which makes every predicate decidable.
//! Masses are exact rationals.
//!
//! ```
//! use tokcheck_core::{fixtures, Tokenizer};
//!
//! let t = Tokenizer::maximal_munch(&fixtures::the_vocab(), 4).unwrap();
//! assert!(t.is_exact().holds());
//! assert!(!fixtures::collapse().is_exact().holds());
//! ```

pub mod dist;
pub mod encoders;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod rational;
pub mod sim;
pub mod stochmap;
pub mod strings;
pub mod tokenizer;
pub mod transducer;
pub mod verdict;

pub use dist::{kl_divergence, l1_distance, tv_distance, Dist, EstimatorTrace};
pub use encoders::{
    bpe_encode, concat_decode, concat_decoder, maximal_munch_encode, segmentations, uniform_segmenter,
    MergeList, Vocab,
};
pub use error::{Error, Result};
pub use rational::{parse_rational, ratio, Rational};
pub use sim::{bias, run_estimation, Estimation};
pub use stochmap::{compose, pushforward, Collision, StochMap};
pub use strings::{
    concat, enumerate_strings, is_prefix, left_distance, longest_common_prefix, Alphabet, Role, Space, Str,
};
pub use tokenizer::{
    bounded_variation_probe, preimage_bound, ClassificationReport, Discrepancy, Pair, Tokenizer,
    VariationProbe,
};
pub use transducer::{build_maximal_munch_transducer, equivalent_on, Mismatch, SubseqTransducer, Transition};
pub use verdict::Verdict;
