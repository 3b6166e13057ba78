//! Matroids represented by their basis family.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::starstar::satisfies_star_star;
use crate::subset::{binomial, enumerate_rsubsets, Family, GroundSet, Subset};

/// A matroid on `{1, …, n}`. Two matroids are equal iff they have the same
/// ground set, rank and canonical basis family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matroid {
    ground: GroundSet,
    rank: usize,
    bases: Family,
}

/// `binom(S, r) = bases ⊔ circuits ⊔ dependent_noncircuits`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankRDecomposition {
    pub bases: Family,
    pub circuits: Family,
    pub dependent_noncircuits: Family,
}

impl RankRDecomposition {
    /// All dependent `r`-subsets.
    pub fn dependent(&self) -> Family {
        let mut all = self.circuits.members().to_vec();
        all.extend(self.dependent_noncircuits.iter());
        all.sort_unstable();
        Family::new(all).expect("circuits and non-circuits are disjoint")
    }
}

fn check_members(ground: GroundSet, r: usize, family: &Family, what: &str) -> Result<()> {
    if r > ground.n() {
        return Err(Error::domain(format!(
            "rank {r} exceeds ground set size {}",
            ground.n()
        )));
    }
    if let Some(bad) = family.iter().find(|s| s.len() != r || !ground.contains(*s)) {
        return Err(Error::domain(format!(
            "{what} member {bad} is not an {r}-subset of 1..={}",
            ground.n()
        )));
    }
    Ok(())
}

/// Exhaustive basis-exchange check over every `(B1, B2, x)`; returns the
/// first failing triple in canonical order.
pub fn validate_exchange(bases: &Family) -> Result<()> {
    if bases.is_empty() {
        return Err(Error::NoBases);
    }
    for b1 in bases {
        for b2 in bases {
            let gain = b2.difference(b1);
            for x in b1.difference(b2).iter() {
                let base = b1.without(x);
                if !gain.iter().any(|y| bases.contains(base.with(y))) {
                    return Err(Error::Exchange { b1, b2, x: x + 1 });
                }
            }
        }
    }
    Ok(())
}

impl Matroid {
    /// Validated constructor: checks sizes, non-emptiness and exchange.
    pub fn from_bases(ground: GroundSet, r: usize, bases: Family) -> Result<Self> {
        check_members(ground, r, &bases, "basis")?;
        validate_exchange(&bases)?;
        Ok(Matroid {
            ground,
            rank: r,
            bases,
        })
    }

    /// Skips validation. For callers that have already established the
    /// exchange property, such as the census filter.
    pub fn from_bases_trusted(ground: GroundSet, r: usize, bases: Family) -> Self {
        debug_assert!(!bases.is_empty());
        debug_assert!(bases.iter().all(|b| b.len() == r && ground.contains(b)));
        Matroid {
            ground,
            rank: r,
            bases,
        }
    }

    /// `U_{r,n}`: every `r`-subset is a basis.
    pub fn uniform(ground: GroundSet, r: usize) -> Result<Self> {
        Ok(Matroid {
            ground,
            rank: r,
            bases: enumerate_rsubsets(ground, r)?,
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &Family {
        &self.bases
    }

    pub fn is_uniform(&self) -> bool {
        self.bases.len() as u128 == binomial(self.n() as u64, self.rank as u64)
    }

    pub fn is_independent(&self, x: Subset) -> bool {
        x.len() <= self.rank && self.bases.iter().any(|b| x.is_subset_of(b))
    }

    pub fn rank_of(&self, x: Subset) -> usize {
        self.bases
            .iter()
            .map(|b| b.intersection(x).len())
            .max()
            .unwrap_or(0)
    }

    pub fn closure_of(&self, x: Subset) -> Subset {
        let rk = self.rank_of(x);
        let outside = x.complement(self.n());
        outside
            .iter()
            .filter(|&e| self.rank_of(x.with(e)) == rk)
            .fold(x, |acc, e| acc.with(e))
    }

    /// Classifies every `r`-subset; an r-circuit is a dependent `r`-set
    /// whose `(r-1)`-subsets are all independent.
    pub fn decompose_rank_r(&self) -> RankRDecomposition {
        let independent_facets = self.independent_facets();
        let mut circuits = Vec::new();
        let mut other = Vec::new();
        for x in &enumerate_rsubsets(self.ground, self.rank).expect("rank <= n") {
            if self.bases.contains(x) {
                continue;
            }
            if x.facets().all(|f| independent_facets.contains(&f)) {
                circuits.push(x);
            } else {
                other.push(x);
            }
        }
        RankRDecomposition {
            bases: self.bases.clone(),
            circuits: Family::from_sorted(circuits),
            dependent_noncircuits: Family::from_sorted(other),
        }
    }

    /// Every `(r-1)`-subset of some basis.
    fn independent_facets(&self) -> HashSet<Subset> {
        self.bases.iter().flat_map(|b| b.facets()).collect()
    }

    /// All circuits (minimal dependent sets) by scanning the power set.
    /// Intended for small ground sets.
    pub fn circuits(&self) -> Vec<Subset> {
        assert!(self.n() <= 20, "circuit scan is exponential in n");
        let mut out: Vec<Subset> = (0u64..1 << self.n())
            .map(Subset::from_bits)
            .filter(|&x| !self.is_independent(x) && x.facets().all(|f| self.is_independent(f)))
            .collect();
        out.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    /// Bases `{S \ B}`, rank `n - r`.
    pub fn dual(&self) -> Matroid {
        let n = self.n();
        let bases: Vec<Subset> = self.bases.iter().map(|b| b.complement(n)).collect();
        Matroid {
            ground: self.ground,
            rank: n - self.rank,
            bases: Family::new(bases).expect("complements of distinct bases are distinct"),
        }
    }

    /// No circuit smaller than the rank, i.e. every `(r-1)`-subset is
    /// independent.
    pub fn is_paving(&self) -> bool {
        if self.rank == 0 {
            return true;
        }
        self.independent_facets().len() as u128 == binomial(self.n() as u64, self.rank as u64 - 1)
    }

    pub fn is_sparse_paving(&self) -> bool {
        self.is_paving() && self.dual().is_paving()
    }

    /// Sparse-paving test through r-circuits: paving, no dependent
    /// non-circuit `r`-sets, and `C_r` satisfies (**). Defined for
    /// `n >= 3`, `r >= 2`; `None` elsewhere.
    pub fn is_sparse_paving_by_circuits(&self) -> Option<bool> {
        if self.n() < 3 || self.rank < 2 {
            return None;
        }
        let dec = self.decompose_rank_r();
        let star = satisfies_star_star(&dec.circuits, self.rank).expect("circuits have size r");
        Some(self.is_paving() && dec.dependent_noncircuits.is_empty() && star.holds)
    }

    pub fn to_spec(&self) -> MatroidSpec {
        MatroidSpec {
            n: self.n(),
            r: self.rank,
            bases: Some(self.bases.clone()),
            circuits: None,
        }
    }
}

/// The sparse-paving matroid whose r-circuits are `circuits`, which must
/// satisfy (**). Bases are the remaining `r`-subsets.
pub fn sparse_from_circuits(ground: GroundSet, r: usize, circuits: &Family) -> Result<Matroid> {
    let n = ground.n();
    if n < 3 || r < 2 || r + 1 > n {
        return Err(Error::domain(format!(
            "requires n >= 3 and 2 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    check_members(ground, r, circuits, "circuit")?;
    satisfies_star_star(circuits, r)?.into_result(r)?;
    let bases = enumerate_rsubsets(ground, r)?.difference(circuits);
    Ok(Matroid::from_bases_trusted(ground, r, bases))
}

/// Rank-1 analogue of [`sparse_from_circuits`]: the circuits are loops, and
/// (**) with bound `-1` allows at most one of them.
pub fn rank_one_from_loops(ground: GroundSet, loops: &Family) -> Result<Matroid> {
    check_members(ground, 1, loops, "loop")?;
    satisfies_star_star(loops, 1)?.into_result(1)?;
    let bases = enumerate_rsubsets(ground, 1)?.difference(loops);
    if bases.is_empty() {
        return Err(Error::NoBases);
    }
    Ok(Matroid::from_bases_trusted(ground, 1, bases))
}

/// JSON form of a matroid: `{"n", "r", "bases"}` or `{"n", "r", "circuits"}`,
/// the latter meaning the sparse-paving matroid with those r-circuits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatroidSpec {
    pub n: usize,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuits: Option<Family>,
}

impl MatroidSpec {
    pub fn build(&self) -> Result<Matroid> {
        let ground = GroundSet::new(self.n)?;
        match (&self.bases, &self.circuits) {
            (Some(b), None) => Matroid::from_bases(ground, self.r, b.clone()),
            (None, Some(c)) => sparse_from_circuits(ground, self.r, c),
            _ => Err(Error::Parse(
                "matroid JSON needs exactly one of \"bases\" or \"circuits\"".into(),
            )),
        }
    }
}

impl Serialize for Matroid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matroid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatroidSpec::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}
