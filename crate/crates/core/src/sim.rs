//! Sampling simulation of token-level estimation followed by decoding.
//!
//! For each sample count `n` the text distribution is sampled with seed
//! `seed ^ n`, the empirical distribution is pushed through the encoder to
//! get `qₙ`, and `κqₙ` is compared with the source in total variation.

use crate::dist::{tv_distance, Dist, EstimatorTrace};
use crate::error::Result;
use crate::rational::{to_f64, Rational};
use crate::stochmap::pushforward;
use crate::tokenizer::Tokenizer;

/// Total-variation threshold for calling a finite trace converged.
pub const TV_TOLERANCE: f64 = 0.05;

/// Sample counts used when none are given.
pub const DEFAULT_SCHEDULE: [u64; 4] = [100, 1_000, 10_000, 100_000];

#[derive(Debug, Clone)]
pub struct Estimation {
    pub trace: EstimatorTrace,
    pub bias: Rational,
}

impl Estimation {
    pub fn rows(&self) -> Vec<(u64, Rational)> {
        self.trace.tv_rows()
    }

    pub fn final_tv(&self) -> Option<f64> {
        self.rows().last().map(|(_, tv)| to_f64(tv))
    }

    pub fn converged(&self) -> bool {
        self.trace.converged(TV_TOLERANCE)
    }
}

/// `tv(κτp, p)`; zero exactly when the tokenizer is consistent with `p`.
pub fn bias(t: &Tokenizer, p: &Dist) -> Result<Rational> {
    let decoded = t.decode_pushforward(p)?;
    tv_distance(&decoded, &p.embed(t.decoded_space())?)
}

pub fn run_estimation(t: &Tokenizer, p_star: &Dist, schedule: &[u64], seed: u64) -> Result<Estimation> {
    let bias = bias(t, p_star)?;
    let target = p_star.embed(t.decoded_space())?;
    let mut trace = EstimatorTrace::new(target);
    for &n in schedule {
        let samples = p_star.sample(seed ^ n, n as usize);
        let p_n = Dist::empirical(&samples, p_star.space())?;
        let q_n = pushforward(t.encoder(), &p_n)?;
        let decoded = pushforward(t.decoder(), &q_n)?;
        trace.push(n, decoded)?;
    }
    Ok(Estimation { trace, bias })
}
