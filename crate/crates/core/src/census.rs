//! Brute-force enumeration of labeled matroids and sparse-paving matroids
//! on small ground sets, and the bound checks built on the counts.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::{validate_exchange, Matroid};
use crate::partition::gamma_count;
use crate::starstar::{sparse_count_lower_bound, star_star_upper_bound, ConflictGraph, VertexSet};
use crate::subset::{binomial, enumerate_rsubsets, Family, GroundSet, Subset};

/// Bumped whenever the ceilings or row semantics change; cached rows with a
/// different version are recomputed.
pub const CEILING_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusConfig {
    /// Largest `binom(n, r)` for the all-matroid enumeration.
    pub matroid_ceiling: u32,
    /// Largest `binom(n, r)` for the sparse-paving enumeration.
    pub sparse_ceiling: u32,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            matroid_ceiling: 20,
            sparse_ceiling: 24,
        }
    }
}

fn check_ceiling(ground: GroundSet, r: usize, limit: u32, what: &'static str) -> Result<usize> {
    if r > ground.n() {
        return Err(Error::domain(format!(
            "rank {r} exceeds n = {}",
            ground.n()
        )));
    }
    let size = binomial(ground.n() as u64, r as u64);
    if size > u128::from(limit) {
        return Err(Error::Ceiling {
            what,
            value: size as u64,
            limit: u64::from(limit),
        });
    }
    Ok(size as usize)
}

fn check_sparse_regime(ground: GroundSet, r: usize) -> Result<()> {
    let n = ground.n();
    if n < 3 || r < 2 || r + 1 > n {
        return Err(Error::domain(format!(
            "sparse enumeration needs n >= 3 and 2 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    Ok(())
}

/// Every (**)-family of `r`-subsets, by include-first backtracking over the
/// conflict graph.
pub fn star_star_families(
    ground: GroundSet,
    r: usize,
    config: CensusConfig,
) -> Result<Vec<Family>> {
    check_sparse_regime(ground, r)?;
    check_ceiling(
        ground,
        r,
        config.sparse_ceiling,
        "binom(n, r) for sparse census",
    )?;
    let graph = ConflictGraph::new(ground, r)?;
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    collect_independent(&graph, graph.all(), &mut chosen, &mut out);
    Ok(out)
}

fn collect_independent(
    graph: &ConflictGraph,
    cand: VertexSet,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Family>,
) {
    let Some(v) = cand.first() else {
        out.push(graph.family_of(chosen.iter().copied()));
        return;
    };
    let mut rest = cand;
    rest.remove(v);
    chosen.push(v);
    collect_independent(graph, rest.and_not(graph.neighbors(v)), chosen, out);
    chosen.pop();
    collect_independent(graph, rest, chosen, out);
}

/// All sparse-paving matroids of rank `r` on `n` labeled elements, one per
/// (**)-family, sorted.
pub fn enumerate_sparse(ground: GroundSet, r: usize) -> Result<Vec<Matroid>> {
    enumerate_sparse_with(ground, r, CensusConfig::default())
}

pub fn enumerate_sparse_with(
    ground: GroundSet,
    r: usize,
    config: CensusConfig,
) -> Result<Vec<Matroid>> {
    let all = enumerate_rsubsets(ground, r)?;
    let mut out: Vec<Matroid> = star_star_families(ground, r, config)?
        .into_iter()
        .map(|c| Matroid::from_bases_trusted(ground, r, all.difference(&c)))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Number of (**)-families by memoized deletion/contraction on vertex
/// masks: `I(G) = I(G - v) + I(G - N[v])`.
pub fn count_star_star_families(ground: GroundSet, r: usize, config: CensusConfig) -> Result<u128> {
    check_sparse_regime(ground, r)?;
    let size = check_ceiling(
        ground,
        r,
        config.sparse_ceiling,
        "binom(n, r) for sparse census",
    )?;
    if size > 64 {
        return Err(Error::Ceiling {
            what: "vertices for mask DP",
            value: size as u64,
            limit: 64,
        });
    }
    let all = enumerate_rsubsets(ground, r)?;
    let adj: Vec<u64> = all
        .iter()
        .map(|x| {
            all.iter()
                .enumerate()
                .filter(|(_, y)| x.intersection(*y).len() + 1 == r)
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    fn count(mask: u64, adj: &[u64], memo: &mut HashMap<u64, u128>) -> u128 {
        if mask == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(&mask) {
            return c;
        }
        let v = mask.trailing_zeros() as usize;
        let without = mask & !(1 << v);
        let c = count(without, adj, memo) + count(without & !adj[v], adj, memo);
        memo.insert(mask, c);
        c
    }
    let full = if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    };
    Ok(count(full, &adj, &mut HashMap::new()))
}

/// An exchange obligation: if bases `i` and `j` are present, at least one
/// index in `cands` must be too. Checked once every index involved has been
/// decided.
#[derive(Clone, Copy, Debug)]
struct Obligation {
    i: usize,
    j: usize,
    cands: u32,
}

struct MatroidSearch {
    size: usize,
    /// Obligations indexed by the last decision they depend on.
    due: Vec<Vec<Obligation>>,
}

impl MatroidSearch {
    fn new(all: &Family) -> Self {
        let size = all.len();
        let mut due = vec![Vec::new(); size];
        for (i, b1) in all.iter().enumerate() {
            for (j, b2) in all.iter().enumerate() {
                let gain = b2.difference(b1);
                for x in b1.difference(b2).iter() {
                    let base = b1.without(x);
                    let cands = gain
                        .iter()
                        .map(|y| all.position(base.with(y)).expect("swap keeps size r"))
                        .fold(0u32, |acc, k| acc | 1 << k);
                    let last = (31 - cands.leading_zeros() as usize).max(i).max(j);
                    due[last].push(Obligation { i, j, cands });
                }
            }
        }
        MatroidSearch { size, due }
    }

    fn consistent(&self, k: usize, family: u32) -> bool {
        self.due[k]
            .iter()
            .all(|o| family >> o.i & 1 == 0 || family >> o.j & 1 == 0 || family & o.cands != 0)
    }

    fn extend(&self, k: usize, family: u32, out: &mut Vec<u32>) {
        if k == self.size {
            if family != 0 {
                out.push(family);
            }
            return;
        }
        for next in [family | 1 << k, family] {
            if self.consistent(k, next) {
                self.extend(k + 1, next, out);
            }
        }
    }

    /// Consistent assignments of the first `depth` indices.
    fn prefixes(&self, depth: usize) -> Vec<u32> {
        let mut level = vec![0u32];
        for k in 0..depth {
            level = level
                .into_iter()
                .flat_map(|f| [f | 1 << k, f])
                .filter(|&f| self.consistent(k, f))
                .collect();
        }
        level
    }
}

fn family_from_mask(all: &Family, mask: u32) -> Family {
    Family::from_sorted(
        all.iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, s)| s)
            .collect(),
    )
}

/// All matroids of rank `r` on `n` labeled elements, sorted.
///
/// Basis families are built one `r`-subset at a time in canonical order and
/// a branch is cut as soon as an exchange obligation whose indices are all
/// decided is violated. The first few decisions are split across rayon
/// workers; the result does not depend on the thread count.
pub fn enumerate_matroids(ground: GroundSet, r: usize) -> Result<Vec<Matroid>> {
    enumerate_matroids_with(ground, r, CensusConfig::default())
}

pub fn enumerate_matroids_with(
    ground: GroundSet,
    r: usize,
    config: CensusConfig,
) -> Result<Vec<Matroid>> {
    check_ceiling(
        ground,
        r,
        config.matroid_ceiling.min(31),
        "binom(n, r) for matroid census",
    )?;
    let all = enumerate_rsubsets(ground, r)?;
    let search = MatroidSearch::new(&all);
    let depth = search.size.min(6);
    let mut masks: Vec<u32> = search
        .prefixes(depth)
        .into_par_iter()
        .flat_map_iter(|prefix| {
            let mut out = Vec::new();
            search.extend(depth, prefix, &mut out);
            out
        })
        .collect();
    masks.sort_unstable();
    let mut out: Vec<Matroid> = masks
        .into_iter()
        .map(|m| Matroid::from_bases_trusted(ground, r, family_from_mask(&all, m)))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Recount by scanning every nonempty basis family from the largest mask
/// down, with the plain exchange check.
pub fn count_matroids_reversed(ground: GroundSet, r: usize, config: CensusConfig) -> Result<u64> {
    let size = check_ceiling(
        ground,
        r,
        config.matroid_ceiling.min(24),
        "binom(n, r) for matroid census",
    )?;
    let all = enumerate_rsubsets(ground, r)?.into_vec();
    let count = (1u32..1 << size)
        .into_par_iter()
        .rev()
        .filter(|&mask| {
            let members: Vec<Subset> = (0..size)
                .rev()
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i])
                .collect();
            validate_exchange(&Family::new(members).expect("distinct r-subsets")).is_ok()
        })
        .count();
    Ok(count as u64)
}

/// `|Sparse_{n,r}|`. Uses the (**) count for `n >= 3, 2 <= r <= n-1` and
/// filters the full matroid census by the dual-paving test otherwise.
pub fn sparse_count(n: usize, r: usize, config: CensusConfig) -> Result<u128> {
    let ground = GroundSet::new(n)?;
    if n >= 3 && r >= 2 && r < n {
        count_star_star_families(ground, r, config)
    } else {
        Ok(enumerate_matroids_with(ground, r, config)?
            .iter()
            .filter(|m| m.is_sparse_paving())
            .count() as u128)
    }
}

pub fn matroid_count(n: usize, r: usize, config: CensusConfig) -> Result<u128> {
    Ok(enumerate_matroids_with(GroundSet::new(n)?, r, config)?.len() as u128)
}

/// Both inequalities of `|Sparse_{n,r}| <= |Sparse_{n+1,r}| <=
/// |Sparse_{n,r}| + |Sparse_{n,r-1}|`, plus the product bound that the
/// splitting map actually supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub n: usize,
    pub r: usize,
    pub sparse_n_r: u128,
    pub sparse_next_r: u128,
    pub sparse_n_r_minus_1: u128,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub product_ok: bool,
}

pub fn sandwich(n: usize, r: usize, config: CensusConfig) -> Result<SandwichCheck> {
    if n < 3 || r < 2 || r + 1 > n {
        return Err(Error::domain(format!(
            "sandwich needs n >= 3 and 2 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    let a = sparse_count(n, r, config)?;
    let b = sparse_count(n + 1, r, config)?;
    let c = sparse_count(n, r - 1, config)?;
    Ok(SandwichCheck {
        n,
        r,
        sparse_n_r: a,
        sparse_next_r: b,
        sparse_n_r_minus_1: c,
        lower_ok: a <= b,
        upper_ok: b <= a + c,
        product_ok: b <= a * c,
    })
}

/// One census line for `(n, r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: usize,
    pub r: usize,
    pub matroid_count: u128,
    pub sparse_count: u128,
    pub gamma: u128,
    pub lower_bound: u128,
    /// `log2 |Matroid_{n,r}| / log2 |Sparse_{n,r}|`, rounded to 6 places.
    pub log_ratio: f64,
    /// `lower_bound <= sparse_count <= matroid_count`.
    pub lower_ok: bool,
    /// `matroid_count <= gamma * sparse_count`.
    pub upper_factor_ok: bool,
    /// `matroid_count <= 2^(gamma * ⌊binom(n, r+1) / (n-r)⌋)`.
    pub exponential_ok: bool,
    /// Sandwich between this row and the `(n-1, r)` row; absent when
    /// `(n-1, r)` is outside `n-1 >= 3, 2 <= r <= n-2`.
    pub sandwich_ok: Option<bool>,
    /// `1 <= log_ratio <= 1 + log2 gamma / log2 sparse_count`, evaluated in
    /// integers as `sparse <= matroid <= gamma * sparse`.
    pub ratio_ok: bool,
}

impl CensusRow {
    pub fn all_ok(&self) -> bool {
        self.lower_ok
            && self.upper_factor_ok
            && self.exponential_ok
            && self.sandwich_ok.unwrap_or(true)
            && self.ratio_ok
    }

    pub fn flags(&self) -> String {
        let b = |v: bool| if v { "1" } else { "0" };
        format!(
            "lower={};upper_factor={};exponential={};sandwich={};ratio={}",
            b(self.lower_ok),
            b(self.upper_factor_ok),
            b(self.exponential_ok),
            self.sandwich_ok.map_or("-", b),
            b(self.ratio_ok)
        )
    }

    fn parse_flags(text: &str) -> Result<(bool, bool, bool, Option<bool>, bool)> {
        let mut map = BTreeMap::new();
        for part in text.split(';') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad flag {part:?}")))?;
            let v = match v {
                "1" => Some(true),
                "0" => Some(false),
                "-" => None,
                _ => return Err(Error::Parse(format!("bad flag value {part:?}"))),
            };
            map.insert(k, v);
        }
        let req = |k: &str| -> Result<bool> {
            map.get(k)
                .copied()
                .flatten()
                .ok_or_else(|| Error::Parse(format!("missing flag {k}")))
        };
        let sandwich = *map
            .get("sandwich")
            .ok_or_else(|| Error::Parse("missing flag sandwich".into()))?;
        Ok((
            req("lower")?,
            req("upper_factor")?,
            req("exponential")?,
            sandwich,
            req("ratio")?,
        ))
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Census rows for every `2 <= r <= n-1`.
pub fn verify_bounds(n: usize, config: CensusConfig) -> Result<Vec<CensusRow>> {
    if n < 3 {
        return Err(Error::domain(format!("census rows need n >= 3, got {n}")));
    }
    (2..n).map(|r| census_row(n, r, config)).collect()
}

pub fn census_row(n: usize, r: usize, config: CensusConfig) -> Result<CensusRow> {
    let matroids = matroid_count(n, r, config)?;
    let sparse = sparse_count(n, r, config)?;
    let gamma = gamma_count(n, r)?;
    let lower: u128 = sparse_count_lower_bound(n, r)?
        .try_into()
        .map_err(|_| Error::domain("lower bound exceeds u128"))?;
    let cap = star_star_upper_bound(n, r)?.floor().to_integer();
    let exponent = gamma.saturating_mul(cap);
    let exponential_ok = exponent >= 128 || matroids <= 1u128 << exponent;
    let sandwich_ok = if n >= 4 && r + 2 <= n {
        Some({
            let s = sandwich(n - 1, r, config)?;
            s.lower_ok && s.upper_ok
        })
    } else {
        None
    };
    let log_ratio = round6((matroids as f64).log2() / (sparse as f64).log2());
    Ok(CensusRow {
        n,
        r,
        matroid_count: matroids,
        sparse_count: sparse,
        gamma,
        lower_bound: lower,
        log_ratio,
        lower_ok: lower <= sparse && sparse <= matroids,
        upper_factor_ok: matroids <= gamma * sparse,
        exponential_ok,
        sandwich_ok,
        ratio_ok: sparse <= matroids && matroids <= gamma * sparse,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::domain(format!("unknown format {other:?}"))),
        }
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "n",
    "r",
    "matroid_count",
    "sparse_count",
    "gamma",
    "lower_bound",
    "log_ratio",
    "flags",
];

fn sorted(rows: &[CensusRow]) -> Vec<&CensusRow> {
    let mut v: Vec<&CensusRow> = rows.iter().collect();
    v.sort_by_key(|row| (row.n, row.r));
    v
}

/// Serializes rows sorted by `(n, r)`.
pub fn render(rows: &[CensusRow], format: ExportFormat) -> Result<Vec<u8>> {
    match format {
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for row in sorted(rows) {
                w.write_record([
                    row.n.to_string(),
                    row.r.to_string(),
                    row.matroid_count.to_string(),
                    row.sparse_count.to_string(),
                    row.gamma.to_string(),
                    row.lower_bound.to_string(),
                    format!("{:.6}", row.log_ratio),
                    row.flags(),
                ])?;
            }
            w.into_inner()
                .map_err(|e| Error::Parse(format!("csv flush: {e}")))
        }
        ExportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(&sorted(rows))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn census_export(rows: &[CensusRow], path: &Path, format: ExportFormat) -> Result<()> {
    let bytes = render(rows, format)?;
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))
}

pub fn parse_rows(bytes: &[u8], format: ExportFormat) -> Result<Vec<CensusRow>> {
    match format {
        ExportFormat::Json => Ok(serde_json::from_slice(bytes)?),
        ExportFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(bytes);
            if rdr.headers()?.iter().ne(CSV_HEADER) {
                return Err(Error::Parse("unexpected CSV header".into()));
            }
            let num = |s: &str| -> Result<u128> {
                s.parse()
                    .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
            };
            rdr.records()
                .map(|rec| {
                    let rec = rec?;
                    let (lower_ok, upper_factor_ok, exponential_ok, sandwich_ok, ratio_ok) =
                        CensusRow::parse_flags(&rec[7])?;
                    Ok(CensusRow {
                        n: num(&rec[0])? as usize,
                        r: num(&rec[1])? as usize,
                        matroid_count: num(&rec[2])?,
                        sparse_count: num(&rec[3])?,
                        gamma: num(&rec[4])?,
                        lower_bound: num(&rec[5])?,
                        log_ratio: rec[6]
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad ratio {:?}", &rec[6])))?,
                        lower_ok,
                        upper_factor_ok,
                        exponential_ok,
                        sandwich_ok,
                        ratio_ok,
                    })
                })
                .collect()
        }
    }
}

pub fn census_import(path: &Path, format: ExportFormat) -> Result<Vec<CensusRow>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_rows(&bytes, format)
}

/// Previously computed rows keyed by `(n, r)`, valid for one ceiling
/// version and configuration.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CensusCache {
    pub ceiling_version: u32,
    pub config: Option<CensusConfig>,
    pub rows: Vec<CensusRow>,
}

impl CensusCache {
    /// Loads the cache, discarding it if missing or built under another
    /// version or configuration.
    pub fn load(path: &Path, config: CensusConfig) -> Result<Self> {
        let fresh = CensusCache {
            ceiling_version: CEILING_VERSION,
            config: Some(config),
            rows: Vec::new(),
        };
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(fresh),
            Err(e) => return Err(Error::io(path, e)),
        };
        let cache: CensusCache = serde_json::from_slice(&bytes)?;
        if cache.ceiling_version != CEILING_VERSION || cache.config != Some(config) {
            return Ok(fresh);
        }
        Ok(cache)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let bytes = serde_json::to_vec_pretty(self)?;
        fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }

    pub fn get(&self, n: usize, r: usize) -> Option<&CensusRow> {
        self.rows.iter().find(|row| row.n == n && row.r == r)
    }

    /// Cached row for `(n, r)`, computing and storing it on a miss.
    pub fn row(&mut self, n: usize, r: usize) -> Result<CensusRow> {
        if let Some(row) = self.get(n, r) {
            return Ok(row.clone());
        }
        let row = census_row(n, r, self.config.unwrap_or_default())?;
        self.rows.push(row.clone());
        self.rows.sort_by_key(|row| (row.n, row.r));
        Ok(row)
    }
}
