//! Families of `r`-subsets with property (**): distinct members share at
//! most `r - 2` elements.
//!
//! Such families are exactly the independent sets of the conflict graph on
//! `binom(S, r)` whose edges join subsets meeting in `r - 1` elements, and
//! exactly the r-circuit sets of sparse-paving matroids of rank `r`.

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::{binomial, enumerate_rsubsets, intersection_size, Family, GroundSet, Subset};

/// Largest ground set the exact maximum search accepts.
pub const EXACT_SEARCH_MAX_N: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: Subset,
    pub y: Subset,
    pub shared: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StarStarReport {
    pub holds: bool,
    pub witness: Option<Violation>,
}

impl StarStarReport {
    /// Turns a failed report into the matching error.
    pub fn into_result(self, r: usize) -> Result<()> {
        match self.witness {
            None => Ok(()),
            Some(v) => Err(Error::StarStar {
                x: v.x,
                y: v.y,
                shared: v.shared,
                allowed: r as i64 - 2,
            }),
        }
    }
}

/// Checks (**) by scanning every pair; the witness is the first failing pair
/// in canonical order.
pub fn satisfies_star_star(family: &Family, r: usize) -> Result<StarStarReport> {
    if let Some(bad) = family.iter().find(|s| s.len() != r) {
        return Err(Error::domain(format!(
            "family member {bad} has size {} but r = {r}",
            bad.len()
        )));
    }
    let allowed = r as i64 - 2;
    let members = family.members();
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            let shared = intersection_size(x, y);
            if shared as i64 > allowed {
                return Ok(StarStarReport {
                    holds: false,
                    witness: Some(Violation { x, y, shared }),
                });
            }
        }
    }
    Ok(StarStarReport {
        holds: true,
        witness: None,
    })
}

fn check_regime(n: usize, r: usize) -> Result<()> {
    if n < 3 || r < 2 || r + 1 > n {
        return Err(Error::domain(format!(
            "requires n >= 3 and 2 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    Ok(())
}

/// The `r`-subsets sharing exactly `r - 1` elements with `x`: swap one
/// member of `x` for one non-member.
pub fn conflict_neighbors(ground: GroundSet, x: Subset) -> Family {
    let outside = x.complement(ground.n());
    let mut out: Vec<Subset> = x
        .iter()
        .flat_map(|e| outside.iter().map(move |f| x.without(e).with(f)))
        .collect();
    out.sort_unstable();
    Family::from_sorted(out)
}

/// Greedy (**)-family: scan `binom(S, r)` in canonical order and keep every
/// subset not excluded by an earlier pick.
pub fn greedy_star_star(ground: GroundSet, r: usize) -> Result<Family> {
    check_regime(ground.n(), r)?;
    let mut chosen: Vec<Subset> = Vec::new();
    for x in &enumerate_rsubsets(ground, r)? {
        if chosen.iter().all(|&c| intersection_size(c, x) + 2 <= r) {
            chosen.push(x);
        }
    }
    Ok(Family::from_sorted(chosen))
}

/// `⌈binom(n, r) / (r(n-r) + 1)⌉`, the size greedy is guaranteed to reach.
pub fn greedy_guarantee(n: usize, r: usize) -> u128 {
    let total = binomial(n as u64, r as u64);
    let ball = (r * (n - r) + 1) as u128;
    total.div_ceil(ball)
}

/// `binom(n, r+1) / (n - r)`, an upper bound on any (**)-family.
pub fn star_star_upper_bound(n: usize, r: usize) -> Result<Ratio<u128>> {
    check_regime(n, r)?;
    Ok(Ratio::new(
        binomial(n as u64, r as u64 + 1),
        (n - r) as u128,
    ))
}

/// `2^⌊binom(n, r) / (r(n-r) + 1)⌋`.
pub fn sparse_count_lower_bound(n: usize, r: usize) -> Result<BigUint> {
    check_regime(n, r)?;
    let exp = binomial(n as u64, r as u64) / (r * (n - r) + 1) as u128;
    let exp = u32::try_from(exp).map_err(|_| Error::domain("exponent overflows u32"))?;
    Ok(BigUint::from(1u8) << exp)
}

/// Random (**)-family: shuffles `binom(S, r)` and keeps each compatible
/// subset with a per-family acceptance probability, so small and maximal
/// families are both reachable.
pub fn random_star_star<R: Rng + ?Sized>(
    ground: GroundSet,
    r: usize,
    rng: &mut R,
) -> Result<Family> {
    check_regime(ground.n(), r)?;
    let mut pool = enumerate_rsubsets(ground, r)?.into_vec();
    pool.shuffle(rng);
    let p: f64 = rng.gen();
    let mut chosen: Vec<Subset> = Vec::new();
    for x in pool {
        if chosen.iter().all(|&c| intersection_size(c, x) + 2 <= r) && rng.gen_bool(p) {
            chosen.push(x);
        }
    }
    Family::new(chosen)
}

/// Fixed 256-bit vertex set; the conflict graphs here never exceed
/// `binom(10, 5) = 252` vertices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Debug)]
pub struct VertexSet([u64; 4]);

impl VertexSet {
    pub const CAPACITY: usize = 256;

    pub fn prefix(len: usize) -> Self {
        let mut w = [0u64; 4];
        for (i, word) in w.iter_mut().enumerate() {
            let lo = i * 64;
            if len >= lo + 64 {
                *word = u64::MAX;
            } else if len > lo {
                *word = (1u64 << (len - lo)) - 1;
            }
        }
        VertexSet(w)
    }

    pub fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn and(self, o: Self) -> Self {
        VertexSet(std::array::from_fn(|i| self.0[i] & o.0[i]))
    }

    pub fn and_not(self, o: Self) -> Self {
        VertexSet(std::array::from_fn(|i| self.0[i] & !o.0[i]))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Vertices are `binom(S, r)` in canonical order; edges join subsets that
/// meet in `r - 1` elements.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    vertices: Family,
    adj: Vec<VertexSet>,
}

impl ConflictGraph {
    pub fn new(ground: GroundSet, r: usize) -> Result<Self> {
        let vertices = enumerate_rsubsets(ground, r)?;
        if vertices.len() > VertexSet::CAPACITY {
            return Err(Error::Ceiling {
                what: "conflict graph vertices",
                value: vertices.len() as u64,
                limit: VertexSet::CAPACITY as u64,
            });
        }
        let adj = vertices
            .iter()
            .map(|x| {
                let mut set = VertexSet::default();
                for y in &conflict_neighbors(ground, x) {
                    set.insert(vertices.position(y).expect("neighbor is an r-subset"));
                }
                set
            })
            .collect();
        Ok(ConflictGraph { vertices, adj })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &Family {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Subset {
        self.vertices.members()[v]
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::prefix(self.len())
    }

    /// Indices of `set` sorted ascending map to a canonical family.
    pub fn family_of(&self, set: impl IntoIterator<Item = usize>) -> Family {
        let mut v: Vec<Subset> = set.into_iter().map(|i| self.vertex(i)).collect();
        v.sort_unstable();
        Family::from_sorted(v)
    }

    /// Number of cliques in a greedy clique cover of `cand`; bounds the
    /// largest independent subset of `cand`.
    fn clique_cover_bound(&self, mut cand: VertexSet) -> usize {
        let mut cliques = 0;
        while let Some(u) = cand.first() {
            cand.remove(u);
            let mut grow = cand.and(self.adj[u]);
            while let Some(w) = grow.first() {
                cand.remove(w);
                grow.remove(w);
                grow = grow.and(self.adj[w]);
            }
            cliques += 1;
        }
        cliques
    }
}

struct ExactSearch<'g> {
    graph: &'g ConflictGraph,
    best: Vec<usize>,
    nodes: u64,
}

impl ExactSearch<'_> {
    fn run(&mut self, chosen: &mut Vec<usize>, cand: VertexSet) {
        self.nodes += 1;
        let Some(v) = cand.first() else {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            return;
        };
        if chosen.len() + self.graph.clique_cover_bound(cand) <= self.best.len() {
            return;
        }
        let mut rest = cand;
        rest.remove(v);
        chosen.push(v);
        self.run(chosen, rest.and_not(self.graph.adj[v]));
        chosen.pop();
        self.run(chosen, rest);
    }
}

/// Outcome of the exact search, with the search-tree size for reporting.
#[derive(Clone, Debug)]
pub struct ExactMaximum {
    pub family: Family,
    pub nodes: u64,
}

/// A maximum (**)-family, certified by exhausting a branch-and-bound search.
///
/// Branching includes the canonically smallest candidate first and the
/// greedy family is the warm-start incumbent, so the returned family is the
/// lex-least among the maximum ones.
pub fn max_star_star_exact(ground: GroundSet, r: usize) -> Result<ExactMaximum> {
    if ground.n() > EXACT_SEARCH_MAX_N {
        return Err(Error::Ceiling {
            what: "exact (**) search ground set size",
            value: ground.n() as u64,
            limit: EXACT_SEARCH_MAX_N as u64,
        });
    }
    check_regime(ground.n(), r)?;
    let graph = ConflictGraph::new(ground, r)?;
    let greedy = greedy_star_star(ground, r)?;
    let mut search = ExactSearch {
        graph: &graph,
        best: greedy
            .iter()
            .map(|x| graph.vertices.position(x).expect("greedy picks r-subsets"))
            .collect(),
        nodes: 0,
    };
    search.run(&mut Vec::new(), graph.all());
    let family = graph.family_of(search.best.iter().copied());
    Ok(ExactMaximum {
        family,
        nodes: search.nodes,
    })
}
