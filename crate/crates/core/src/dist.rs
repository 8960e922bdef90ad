//! Finite-support distributions with exact rational masses.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};
use crate::strings::{Space, Str};

/// A probability distribution on a finite [`Space`]. Only positive masses
/// are stored and they sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist {
    space: Space,
    mass: BTreeMap<Str, Rational>,
}

impl Dist {
    /// Builds a distribution from `(string, mass)` pairs. Repeated strings
    /// accumulate and zero masses are dropped.
    pub fn new<I>(space: &Space, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Str, Rational)>,
    {
        let mut mass: BTreeMap<Str, Rational> = BTreeMap::new();
        for (s, m) in entries {
            space.ensure_contains(&s)?;
            if m.is_negative() {
                return Err(Error::InvalidDistribution(format!("negative mass {m} at {s}")));
            }
            *mass.entry(s).or_insert_with(Rational::zero) += m;
        }
        mass.retain(|_, m| !m.is_zero());
        let total: Rational = mass.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(Dist {
            space: space.clone(),
            mass,
        })
    }

    /// Normalizes nonnegative integer weights.
    pub fn from_weights<I>(space: &Space, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Str, u64)>,
    {
        let weights: Vec<(Str, u64)> = weights.into_iter().collect();
        let total: u64 = weights.iter().map(|(_, w)| w).sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("all weights are zero".into()));
        }
        let total = BigInt::from(total);
        Dist::new(
            space,
            weights
                .into_iter()
                .map(|(s, w)| (s, Rational::new(BigInt::from(w), total.clone()))),
        )
    }

    /// Assembles a distribution from masses already known to be positive and
    /// normalized.
    pub(crate) fn from_parts_unchecked(space: Space, mass: BTreeMap<Str, Rational>) -> Self {
        debug_assert!(mass.values().sum::<Rational>().is_one());
        Dist { space, mass }
    }

    pub fn point_mass(x: &Str, space: &Space) -> Result<Self> {
        space.ensure_contains(x)?;
        let mut mass = BTreeMap::new();
        mass.insert(x.clone(), Rational::one());
        Ok(Dist {
            space: space.clone(),
            mass,
        })
    }

    pub fn uniform(space: &Space, support: &[Str]) -> Result<Self> {
        Dist::from_weights(space, support.iter().map(|s| (s.clone(), 1)))
    }

    /// A random distribution on a nonempty random subset of `candidates`,
    /// with integer weights in `1..=max_weight`.
    pub fn random<R: Rng>(space: &Space, candidates: &[Str], max_weight: u64, rng: &mut R) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::InvalidDistribution("no candidate support".into()));
        }
        let mut weights: Vec<(Str, u64)> = Vec::new();
        for s in candidates {
            if rng.random_bool(0.5) {
                weights.push((s.clone(), rng.random_range(1..=max_weight)));
            }
        }
        if weights.is_empty() {
            let pick = rng.random_range(0..candidates.len());
            weights.push((candidates[pick].clone(), 1));
        }
        Dist::from_weights(space, weights)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn mass(&self, x: &Str) -> Rational {
        self.mass.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Str> + '_ {
        self.mass.keys()
    }

    pub fn support_len(&self) -> usize {
        self.mass.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Str, &Rational)> + '_ {
        self.mass.iter()
    }

    /// The unique support element, when this is a point mass.
    pub fn as_point(&self) -> Option<&Str> {
        if self.mass.len() == 1 {
            self.mass.keys().next()
        } else {
            None
        }
    }

    /// The same masses viewed on a larger space.
    pub fn embed(&self, space: &Space) -> Result<Dist> {
        if let Some(bad) = self.mass.keys().find(|s| !space.contains(s)) {
            return Err(Error::SpaceMismatch(format!("{bad} is not in {space}")));
        }
        Ok(Dist {
            space: space.clone(),
            mass: self.mass.clone(),
        })
    }

    fn check_space(&self, other: &Dist) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!("{} vs {}", self.space, other.space)))
        }
    }

    /// Draws `n` i.i.d. samples by exact inverse-CDF over the canonical
    /// support order, driven by ChaCha8 seeded with `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<Str> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<(&Str, &Rational)> = self.mass.iter().collect();
        let denom = entries
            .iter()
            .fold(BigInt::one(), |acc, (_, m)| acc.lcm(m.denom()));
        match denom.to_u64() {
            Some(d) => {
                let mut cumulative = Vec::with_capacity(entries.len());
                let mut acc = 0u64;
                for (_, m) in &entries {
                    let scaled = (m.numer() * (&denom / m.denom())).to_u64().expect("mass ≤ 1");
                    acc += scaled;
                    cumulative.push(acc);
                }
                (0..n)
                    .map(|_| {
                        let r = rng.random_range(0..d);
                        let idx = cumulative.partition_point(|&c| c <= r);
                        entries[idx].0.clone()
                    })
                    .collect()
            }
            None => {
                let mut cumulative = Vec::with_capacity(entries.len());
                let mut acc = 0.0;
                for (_, m) in &entries {
                    acc += to_f64(m);
                    cumulative.push(acc);
                }
                (0..n)
                    .map(|_| {
                        let u: f64 = rng.random::<f64>() * acc;
                        let idx = cumulative.partition_point(|&c| c <= u).min(entries.len() - 1);
                        entries[idx].0.clone()
                    })
                    .collect()
            }
        }
    }

    /// The maximum-likelihood distribution of a sample: `count(x) / n`.
    pub fn empirical(samples: &[Str], space: &Space) -> Result<Dist> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut counts: BTreeMap<Str, u64> = BTreeMap::new();
        for s in samples {
            space.ensure_contains(s)?;
            *counts.entry(s.clone()).or_insert(0) += 1;
        }
        Dist::from_weights(space, counts)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, m)) in self.mass.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}: {m}")?;
        }
        f.write_str("}")
    }
}

/// `Σ_x |p(x) - q(x)|` over the union of supports.
pub fn l1_distance(p: &Dist, q: &Dist) -> Result<Rational> {
    p.check_space(q)?;
    let mut total = Rational::zero();
    for (x, pm) in &p.mass {
        match q.mass.get(x) {
            Some(qm) => total += (pm - qm).abs(),
            None => total += pm,
        }
    }
    for (x, qm) in &q.mass {
        if !p.mass.contains_key(x) {
            total += qm;
        }
    }
    Ok(total)
}

pub fn tv_distance(p: &Dist, q: &Dist) -> Result<Rational> {
    Ok(l1_distance(p, q)? / Rational::from_integer(BigInt::from(2)))
}

/// `D_KL(p ∥ q)` in nats; `+∞` when `p` charges a string `q` does not.
pub fn kl_divergence(p: &Dist, q: &Dist) -> Result<f64> {
    p.check_space(q)?;
    let mut total = 0.0;
    for (x, pm) in &p.mass {
        let Some(qm) = q.mass.get(x) else {
            return Ok(f64::INFINITY);
        };
        let pf = to_f64(pm);
        total += pf * (pf / to_f64(qm)).ln();
    }
    Ok(total.max(0.0))
}

/// A sequence of estimates indexed by strictly increasing sample counts.
#[derive(Debug, Clone)]
pub struct EstimatorTrace {
    steps: Vec<(u64, Dist)>,
    target: Dist,
}

impl EstimatorTrace {
    pub fn new(target: Dist) -> Self {
        EstimatorTrace {
            steps: Vec::new(),
            target,
        }
    }

    pub fn push(&mut self, n: u64, dist: Dist) -> Result<()> {
        if let Some((last, _)) = self.steps.last() {
            if n <= *last {
                return Err(Error::InvalidDistribution(format!(
                    "sample counts must increase: {n} after {last}"
                )));
            }
        }
        dist.check_space(&self.target)?;
        self.steps.push((n, dist));
        Ok(())
    }

    pub fn steps(&self) -> &[(u64, Dist)] {
        &self.steps
    }

    pub fn target(&self) -> &Dist {
        &self.target
    }

    /// `(n, tv(step, target))` rows.
    pub fn tv_rows(&self) -> Vec<(u64, Rational)> {
        self.steps
            .iter()
            .map(|(n, d)| (*n, tv_distance(d, &self.target).expect("checked on push")))
            .collect()
    }

    /// Finite surrogate for convergence: the last TV is below `tolerance`
    /// and no larger than the first.
    pub fn converged(&self, tolerance: f64) -> bool {
        let rows = self.tv_rows();
        match (rows.first(), rows.last()) {
            (Some((_, first)), Some((_, last))) => to_f64(last) < tolerance && last <= first,
            _ => false,
        }
    }
}
