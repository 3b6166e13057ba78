//! Bitmask subsets of a ground set `{1, …, n}` with `n ≤ 64`.
//!
//! Elements are 0-based inside a [`Subset`] (bit `i` is element `i + 1`) and
//! 1-based everywhere they cross an external boundary: `Display`, JSON and
//! the `*_one_based` constructors.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_GROUND: usize = 64;

/// `binom(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// The ground set `S = {1, …, n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct GroundSet(usize);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::domain(format!(
                "ground set size must be in 1..={MAX_GROUND}, got {n}"
            )));
        }
        Ok(GroundSet(n))
    }

    pub fn n(self) -> usize {
        self.0
    }

    pub fn full(self) -> Subset {
        Subset::full(self.0)
    }

    /// Builds a subset from 1-based labels, rejecting labels outside `1..=n`.
    pub fn subset(self, elements: &[usize]) -> Result<Subset> {
        let s = Subset::from_one_based(elements.iter().copied())?;
        if !s.is_within(self.0) {
            return Err(Error::domain(format!(
                "subset {s} has elements outside 1..={}",
                self.0
            )));
        }
        Ok(s)
    }

    pub fn contains(self, s: Subset) -> bool {
        s.is_within(self.0)
    }

    pub fn rsubsets(self, r: usize) -> Result<Family> {
        enumerate_rsubsets(self, r)
    }
}

impl TryFrom<usize> for GroundSet {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        GroundSet::new(n)
    }
}

impl From<GroundSet> for usize {
    fn from(g: GroundSet) -> usize {
        g.0
    }
}

/// A subset of the ground set, one bit per element.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    /// `{1, …, n}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn from_one_based<I: IntoIterator<Item = usize>>(elements: I) -> Result<Self> {
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > MAX_GROUND {
                return Err(Error::domain(format!(
                    "element {e} is not a label in 1..={MAX_GROUND}"
                )));
            }
            let bit = 1u64 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::domain(format!("element {e} repeated")));
            }
            bits |= bit;
        }
        Ok(Subset(bits))
    }

    pub fn from_zero_based<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        Subset(elements.into_iter().fold(0, |acc, e| acc | (1u64 << e)))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Membership of the 0-based element `e`.
    pub const fn contains(self, e: usize) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    pub const fn with(self, e: usize) -> Self {
        Subset(self.0 | 1u64 << e)
    }

    pub const fn without(self, e: usize) -> Self {
        Subset(self.0 & !(1u64 << e))
    }

    pub const fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub const fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub const fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0 & Subset::full(n).0)
    }

    pub fn is_within(self, n: usize) -> bool {
        self.is_subset_of(Subset::full(n))
    }

    /// 0-based elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// Sorted 1-based labels.
    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|e| e + 1).collect()
    }

    /// Subsets of `self` of size `len(self) - 1`, in canonical order.
    pub fn facets(self) -> impl Iterator<Item = Subset> {
        // removing a larger element leaves the lex-smaller remainder
        let elems: Vec<usize> = self.iter().collect();
        elems.into_iter().rev().map(move |e| self.without(e))
    }
}

/// `|a ∩ b|`.
pub fn intersection_size(a: Subset, b: Subset) -> usize {
    (a.0 & b.0).count_ones() as usize
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Elements {}

/// Lexicographic order on the sorted element lists.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        let above = !((low << 1).wrapping_sub(1));
        // Whoever owns the lowest differing element comes first, unless the
        // other set has nothing beyond it (then the other is a prefix).
        let (owner_is_self, rival) = if self.0 & low != 0 {
            (true, other.0)
        } else {
            (false, self.0)
        };
        let owner_first = rival & above != 0;
        if owner_is_self == owner_first {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", e + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|e| e + 1))
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let elems = Vec::<usize>::deserialize(deserializer)?;
        Subset::from_one_based(elems).map_err(D::Error::custom)
    }
}

/// A duplicate-free family of equal-size subsets in canonical order, so
/// family equality is positional equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family(Vec<Subset>);

impl Family {
    pub fn empty() -> Self {
        Family(Vec::new())
    }

    /// Sorts `members` into canonical order; rejects duplicates and mixed sizes.
    pub fn new(mut members: Vec<Subset>) -> Result<Self> {
        if let Some(first) = members.first() {
            let k = first.len();
            if let Some(bad) = members.iter().find(|s| s.len() != k) {
                return Err(Error::domain(format!(
                    "family mixes cardinalities {k} and {} ({bad})",
                    bad.len()
                )));
            }
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::domain(format!("family repeats {}", w[0])));
        }
        Ok(Family(members))
    }

    /// Caller guarantees canonical order, no duplicates and equal sizes.
    pub(crate) fn from_sorted(members: Vec<Subset>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Family(members)
    }

    /// Keeps the members of `self` satisfying `keep`; order is preserved.
    pub fn filter(&self, mut keep: impl FnMut(Subset) -> bool) -> Family {
        Family(self.0.iter().copied().filter(|&s| keep(s)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn members(&self) -> &[Subset] {
        &self.0
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Subset> + '_ {
        self.0.iter().copied()
    }

    /// Common cardinality of the members, `None` for the empty family.
    pub fn cardinality(&self) -> Option<usize> {
        self.0.first().map(|s| s.len())
    }

    pub fn position(&self, s: Subset) -> Option<usize> {
        self.0.binary_search(&s).ok()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.position(s).is_some()
    }

    pub fn intersection(&self, other: &Family) -> Family {
        self.filter(|s| other.contains(s))
    }

    pub fn difference(&self, other: &Family) -> Family {
        self.filter(|s| !other.contains(s))
    }

    pub fn into_vec(self) -> Vec<Subset> {
        self.0
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.0.iter().map(|s| s.one_based()).collect()
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = Subset;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Subset>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<Subset>::deserialize(deserializer)?;
        Family::new(members).map_err(D::Error::custom)
    }
}

/// All `r`-subsets of the ground set in canonical (lexicographic) order.
pub fn enumerate_rsubsets(ground: GroundSet, r: usize) -> Result<Family> {
    let n = ground.n();
    if r > n {
        return Err(Error::domain(format!(
            "subset size {r} exceeds ground set size {n}"
        )));
    }
    let mut out = Vec::with_capacity(binomial(n as u64, r as u64) as usize);
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(Subset::from_zero_based(idx.iter().copied()));
        let Some(i) = (0..r).rev().find(|&i| idx[i] < n - r + i) else {
            break;
        };
        idx[i] += 1;
        for k in i + 1..r {
            idx[k] = idx[k - 1] + 1;
        }
    }
    Ok(Family::from_sorted(out))
}

/// The `k`-subsets of `set` in canonical order (empty when `k > |set|`).
pub fn ksubsets_of(set: Subset, k: usize) -> Vec<Subset> {
    let elems: Vec<usize> = set.iter().collect();
    if k > elems.len() {
        return Vec::new();
    }
    let local = GroundSet::new(elems.len().max(1)).expect("at most 64 elements");
    if elems.is_empty() {
        return vec![Subset::EMPTY];
    }
    // relabelling through the sorted element list preserves lex order
    enumerate_rsubsets(local, k)
        .expect("k <= |set|")
        .iter()
        .map(|x| Subset::from_zero_based(x.iter().map(|i| elems[i])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(e: &[usize]) -> Subset {
        Subset::from_one_based(e.iter().copied()).unwrap()
    }

    #[test]
    fn small_enumerations() {
        let g3 = GroundSet::new(3).unwrap();
        assert_eq!(
            enumerate_rsubsets(g3, 2).unwrap().members(),
            &[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]
        );
        let six = enumerate_rsubsets(GroundSet::new(6).unwrap(), 3).unwrap();
        assert_eq!(six.len(), 20);
        assert_eq!(six.members()[0], s(&[1, 2, 3]));
        assert_eq!(six.members()[19], s(&[4, 5, 6]));
        let four = enumerate_rsubsets(GroundSet::new(4).unwrap(), 4).unwrap();
        assert_eq!(four.members(), &[s(&[1, 2, 3, 4])]);
        assert_eq!(
            enumerate_rsubsets(GroundSet::new(4).unwrap(), 0)
                .unwrap()
                .members(),
            &[Subset::EMPTY]
        );
    }

    #[test]
    fn r_above_n_is_rejected() {
        assert!(matches!(
            enumerate_rsubsets(GroundSet::new(3).unwrap(), 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ground_set_limits() {
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(65).is_err());
        assert_eq!(GroundSet::new(64).unwrap().full().len(), 64);
        assert!(GroundSet::new(4).unwrap().subset(&[1, 5]).is_err());
    }

    #[test]
    fn intersections() {
        assert_eq!(intersection_size(s(&[1, 2, 3]), s(&[1, 4, 5])), 1);
        assert_eq!(intersection_size(s(&[1, 2, 3]), s(&[1, 2, 3])), 3);
        assert_eq!(intersection_size(s(&[1, 2]), s(&[3, 4])), 0);
    }

    #[test]
    fn lex_order_handles_prefixes() {
        assert!(s(&[1, 2]) < s(&[1, 2, 3]));
        assert!(s(&[1, 2, 3]) < s(&[1, 3]));
        assert!(s(&[1, 4, 5]) < s(&[2, 3, 4]));
        assert!(Subset::EMPTY < s(&[1]));
        assert!(s(&[2]) > s(&[1, 5, 6]));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn family_rejects_bad_members() {
        assert!(Family::new(vec![s(&[1, 2]), s(&[1])]).is_err());
        assert!(Family::new(vec![s(&[1, 2]), s(&[1, 2])]).is_err());
        let f = Family::new(vec![s(&[2, 3]), s(&[1, 2])]).unwrap();
        assert_eq!(f.members(), &[s(&[1, 2]), s(&[2, 3])]);
    }

    #[test]
    fn json_is_one_based_and_sorted() {
        let f = Family::new(vec![s(&[4, 5, 1]), s(&[1, 2, 3])]).unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), "[[1,2,3],[1,4,5]]");
        let back: Family = serde_json::from_str("[[1,4,5],[1,2,3]]").unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<Subset>("[0,1]").is_err());
    }

    #[test]
    fn ksubsets_of_relabels_in_order() {
        let out = ksubsets_of(s(&[4, 5, 6]), 2);
        assert_eq!(out, vec![s(&[4, 5]), s(&[4, 6]), s(&[5, 6])]);
        assert_eq!(ksubsets_of(s(&[4, 5]), 3), vec![]);
        assert_eq!(ksubsets_of(s(&[4, 5]), 0), vec![Subset::EMPTY]);
        assert_eq!(ksubsets_of(Subset::EMPTY, 0), vec![Subset::EMPTY]);
    }

    #[test]
    fn facets_are_canonical() {
        let f: Vec<Subset> = s(&[1, 2, 3]).facets().collect();
        assert_eq!(f, vec![s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]);
    }
}
