//! Stochastic maps between finite string spaces.
//!
//! A map is stored as one sparse row per domain string; `f(y | x)` is the
//! mass row `x` puts on `y`. Composition follows
//! `gf(z | x) = Σ_y g(z | y) f(y | x)` and never builds a joint distribution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::strings::{Space, Str};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochMap {
    dom: Space,
    cod: Space,
    rows: BTreeMap<Str, Dist>,
}

/// Two distinct inputs whose rows share an output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub first: Str,
    pub second: Str,
    pub output: Str,
}

impl fmt::Display for Collision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) both reach {}", self.first, self.second, self.output)
    }
}

impl StochMap {
    /// Builds a map from explicit rows, which must cover the domain exactly
    /// and live on `cod`.
    pub fn from_rows(dom: &Space, cod: &Space, rows: BTreeMap<Str, Dist>) -> Result<Self> {
        for (x, row) in &rows {
            if !dom.contains(x) {
                return Err(Error::OutOfDomain(x.to_string()));
            }
            if row.space() != cod {
                return Err(Error::SpaceMismatch(format!("row {x} is not on {cod}")));
            }
        }
        if rows.len() as u128 != dom.size() {
            let missing = dom
                .strings()
                .into_iter()
                .find(|x| !rows.contains_key(x))
                .map(|x| x.to_string())
                .unwrap_or_default();
            return Err(Error::ProcUndefinedAt {
                input: missing,
                reason: "no row given".into(),
            });
        }
        Ok(StochMap {
            dom: dom.clone(),
            cod: cod.clone(),
            rows,
        })
    }

    /// Tabulates a procedure over every domain string.
    pub fn materialize<F>(dom: &Space, cod: &Space, mut proc: F) -> Result<Self>
    where
        F: FnMut(&Str) -> Result<Dist>,
    {
        let mut rows = BTreeMap::new();
        for x in dom.strings() {
            let row = proc(&x).map_err(|e| Error::ProcUndefinedAt {
                input: x.to_string(),
                reason: e.to_string(),
            })?;
            let row = if row.space() == cod { row } else { row.embed(cod)? };
            rows.insert(x, row);
        }
        Ok(StochMap {
            dom: dom.clone(),
            cod: cod.clone(),
            rows,
        })
    }

    /// Tabulates a function, as point-mass rows.
    pub fn deterministic<F>(dom: &Space, cod: &Space, mut f: F) -> Result<Self>
    where
        F: FnMut(&Str) -> Result<Str>,
    {
        Self::materialize(dom, cod, |x| {
            let y = f(x)?;
            Dist::point_mass(&y, cod)
        })
    }

    pub fn identity_map(space: &Space) -> Self {
        let rows = space
            .strings()
            .into_iter()
            .map(|x| {
                let row = Dist::point_mass(&x, space).expect("member of its own space");
                (x, row)
            })
            .collect();
        StochMap {
            dom: space.clone(),
            cod: space.clone(),
            rows,
        }
    }

    pub fn dom(&self) -> &Space {
        &self.dom
    }

    pub fn cod(&self) -> &Space {
        &self.cod
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Str, &Dist)> + '_ {
        self.rows.iter()
    }

    pub fn kernel_at(&self, x: &Str) -> Result<&Dist> {
        self.rows.get(x).ok_or_else(|| Error::OutOfDomain(x.to_string()))
    }

    /// The image of `x` when its row is a point mass.
    pub fn value_at(&self, x: &Str) -> Result<Option<&Str>> {
        Ok(self.kernel_at(x)?.as_point())
    }

    /// Returns a copy with the row at `x` replaced.
    pub fn with_row(&self, x: &Str, row: Dist) -> Result<Self> {
        if !self.rows.contains_key(x) {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let row = if row.space() == &self.cod {
            row
        } else {
            row.embed(&self.cod)?
        };
        let mut out = self.clone();
        out.rows.insert(x.clone(), row);
        Ok(out)
    }

    /// The same map viewed with a larger codomain.
    pub fn widen_cod(&self, cod: &Space) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|(x, r)| Ok((x.clone(), r.embed(cod)?)))
            .collect::<Result<_>>()?;
        Ok(StochMap {
            dom: self.dom.clone(),
            cod: cod.clone(),
            rows,
        })
    }

    /// The union of the supports of all rows.
    pub fn support_of(&self) -> BTreeSet<Str> {
        self.rows.values().flat_map(|r| r.support().cloned()).collect()
    }

    pub fn is_deterministic(&self) -> Verdict<Str> {
        match self.rows.iter().find(|(_, r)| r.as_point().is_none()) {
            Some((x, _)) => Verdict::Fails(x.clone()),
            None => Verdict::Holds,
        }
    }

    /// Rows have pairwise disjoint supports.
    pub fn is_injective(&self) -> Verdict<Collision> {
        let mut owner: BTreeMap<&Str, &Str> = BTreeMap::new();
        for (x, row) in &self.rows {
            for y in row.support() {
                if let Some(first) = owner.get(y) {
                    return Verdict::Fails(Collision {
                        first: (*first).clone(),
                        second: x.clone(),
                        output: y.clone(),
                    });
                }
                owner.insert(y, x);
            }
        }
        Verdict::Holds
    }

    /// Every codomain string receives positive mass from some row.
    pub fn is_surjective(&self) -> Verdict<Str> {
        self.is_surjective_onto(&self.cod)
    }

    /// Every string of `target` receives positive mass from some row.
    pub fn is_surjective_onto(&self, target: &Space) -> Verdict<Str> {
        let hit = self.support_of();
        match target.strings().into_iter().find(|y| !hit.contains(y)) {
            Some(y) => Verdict::Fails(y),
            None => Verdict::Holds,
        }
    }
}

/// `g ∘ f`, computed row by row.
pub fn compose(g: &StochMap, f: &StochMap) -> Result<StochMap> {
    if f.cod != g.dom {
        return Err(Error::SpaceMismatch(format!(
            "cannot compose: codomain {} vs domain {}",
            f.cod, g.dom
        )));
    }
    let rows = f
        .rows
        .iter()
        .map(|(x, fx)| (x.clone(), push_row(g, fx)))
        .collect();
    Ok(StochMap {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        rows,
    })
}

fn push_row(g: &StochMap, p: &Dist) -> Dist {
    let mut acc: BTreeMap<Str, Rational> = BTreeMap::new();
    for (y, py) in p.iter() {
        let gy = &g.rows[y];
        for (z, gz) in gy.iter() {
            *acc.entry(z.clone()).or_insert_with(Rational::zero) += py * gz;
        }
    }
    Dist::from_parts_unchecked(g.cod.clone(), acc)
}

/// `(fp)(y) = Σ_x f(y | x) p(x)`.
pub fn pushforward(f: &StochMap, p: &Dist) -> Result<Dist> {
    if p.space() != &f.dom {
        return Err(Error::SpaceMismatch(format!(
            "distribution on {} pushed through map on {}",
            p.space(),
            f.dom
        )));
    }
    Ok(push_row(f, p))
}
