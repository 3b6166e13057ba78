//! Partition of `binom(S, r)` into (**)-families built from a pivot `X`.
//!
//! For each `h` the matrix `S_h` has rows `Z` (the `(r-h)`-subsets of
//! `S \ X`), columns `A` (the `h`-subsets of `X`) and entries `A ∪ Z`. Its
//! wrapped diagonals are (**)-families; gluing diagonal `j` across all odd
//! `h` (resp. all even `h`) keeps (**) because matrices whose `h` differ by
//! at least two never share `r - 1` elements.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::subset::{binomial, ksubsets_of, Family, GroundSet, Subset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShMatrix {
    h: usize,
    rows: Vec<Subset>,
    cols: Vec<Subset>,
}

impl ShMatrix {
    pub fn h(&self) -> usize {
        self.h
    }

    /// Row labels `Z_1, Z_2, …` in canonical order.
    pub fn rows(&self) -> &[Subset] {
        &self.rows
    }

    /// Column labels `A_1, A_2, …` in canonical order.
    pub fn cols(&self) -> &[Subset] {
        &self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `A_col ∪ Z_row`, both indices 0-based.
    pub fn entry(&self, row: usize, col: usize) -> Subset {
        self.cols[col].union(self.rows[row])
    }

    pub fn entries(&self) -> Vec<Vec<Subset>> {
        (0..self.rows.len())
            .map(|i| (0..self.cols.len()).map(|t| self.entry(i, t)).collect())
            .collect()
    }

    /// `max{binom(n-r, r-h), binom(r, h)}`: the diagonal index range.
    pub fn class_count(&self) -> usize {
        self.rows.len().max(self.cols.len())
    }
}

fn check_regime(ground: GroundSet, r: usize, pivot: Subset) -> Result<()> {
    let n = ground.n();
    if n < 3 || r < 2 || r + 1 > n {
        return Err(Error::domain(format!(
            "requires n >= 3 and 2 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    if pivot.len() != r || !ground.contains(pivot) {
        return Err(Error::domain(format!(
            "pivot {pivot} is not an {r}-subset of 1..={n}"
        )));
    }
    Ok(())
}

pub fn build_matrix(ground: GroundSet, r: usize, pivot: Subset, h: usize) -> Result<ShMatrix> {
    if pivot.len() != r || !ground.contains(pivot) {
        return Err(Error::domain(format!(
            "pivot {pivot} is not an {r}-subset of 1..={}",
            ground.n()
        )));
    }
    if h > r {
        return Err(Error::domain(format!("h = {h} exceeds r = {r}")));
    }
    let outside = pivot.complement(ground.n());
    Ok(ShMatrix {
        h,
        rows: ksubsets_of(outside, r - h),
        cols: ksubsets_of(pivot, h),
    })
}

/// Wrapped diagonal `j` (1-based) of `m`.
///
/// With at least as many rows as columns, column `t` contributes the entry
/// in row `((j + t - 2) mod rows) + 1`; otherwise rows and columns swap
/// roles. An empty matrix yields empty classes.
pub fn diagonal_class(m: &ShMatrix, j: usize) -> Result<Family> {
    let count = m.class_count();
    if j == 0 || j > count {
        return Err(Error::domain(format!(
            "diagonal index {j} outside 1..={count}"
        )));
    }
    let (nr, nc) = (m.rows.len(), m.cols.len());
    let mut out: Vec<Subset> = if nr == 0 {
        Vec::new()
    } else if nr >= nc {
        (0..nc).map(|t| m.entry((j - 1 + t) % nr, t)).collect()
    } else {
        (0..nr).map(|t| m.entry(t, (j - 1 + t) % nc)).collect()
    };
    out.sort_unstable();
    Family::new(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn of(h: usize) -> Self {
        if h % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// `(alpha, beta)`: the largest class count over odd `h` and over even `h`,
/// where `h` has class count `max{binom(n-r, r-h), binom(r, h)}`.
pub fn alpha_beta(n: usize, r: usize) -> Result<(u128, u128)> {
    if n < 3 || r < 2 || r + 1 > n {
        return Err(Error::domain(format!(
            "requires n >= 3 and 2 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    let (n, r) = (n as u64, r as u64);
    let count = |h: u64| binomial(n - r, r - h).max(binomial(r, h));
    let odd = (0..=r).filter(|h| h % 2 == 1).map(count).max().unwrap_or(0);
    let even = (0..=r).filter(|h| h % 2 == 0).map(count).max().unwrap_or(0);
    Ok((odd, even))
}

/// `gamma = alpha + beta`, the number of classes in the partition.
pub fn gamma_count(n: usize, r: usize) -> Result<u128> {
    let (a, b) = alpha_beta(n, r)?;
    Ok(a + b)
}

/// The three closed-form regimes commonly quoted for gamma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaRegime {
    /// `r >= n - r`: `binom(r, ⌊r/2⌋) + binom(r, ⌊(r+1)/2⌋)`.
    HighRank,
    /// `2 <= r <= n/3`: `binom(n-r+1, r)`.
    LowRank,
    /// `n/3 <= r <= n/2`: `2 binom(n-r, ⌊(n-r)/2⌋)`.
    MiddleRank,
}

impl GammaRegime {
    pub const ALL: [GammaRegime; 3] = [
        GammaRegime::HighRank,
        GammaRegime::LowRank,
        GammaRegime::MiddleRank,
    ];

    pub fn applies(self, n: usize, r: usize) -> bool {
        match self {
            GammaRegime::HighRank => r < n && 2 * r >= n,
            GammaRegime::LowRank => r >= 2 && 3 * r <= n,
            GammaRegime::MiddleRank => 3 * r >= n && 2 * r <= n,
        }
    }

    /// The closed form exactly as quoted, without checking `applies`.
    pub fn closed_form(self, n: usize, r: usize) -> u128 {
        let (n, r) = (n as u64, r as u64);
        match self {
            GammaRegime::HighRank => binomial(r, r / 2) + binomial(r, r.div_ceil(2)),
            GammaRegime::LowRank => binomial(n - r + 1, r),
            GammaRegime::MiddleRank => 2 * binomial(n - r, (n - r) / 2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassLabel {
    pub parity: Parity,
    /// 1-based within its parity.
    pub j: usize,
}

/// Classes `U_1^(odd) … U_alpha^(odd)` and `U_1^(even) … U_beta^(even)`.
/// Classes may be empty when a matrix contributing to the count is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarPartition {
    ground: GroundSet,
    r: usize,
    pivot: Subset,
    odd: Vec<Family>,
    even: Vec<Family>,
}

impl StarPartition {
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn pivot(&self) -> Subset {
        self.pivot
    }

    pub fn odd(&self) -> &[Family] {
        &self.odd
    }

    pub fn even(&self) -> &[Family] {
        &self.even
    }

    pub fn alpha(&self) -> usize {
        self.odd.len()
    }

    pub fn beta(&self) -> usize {
        self.even.len()
    }

    pub fn gamma(&self) -> usize {
        self.alpha() + self.beta()
    }

    /// Odd classes, then even ones; position `k` carries tag `k + 1`.
    pub fn classes(&self) -> impl Iterator<Item = &Family> {
        self.odd.iter().chain(self.even.iter())
    }

    pub fn class_of(&self, x: Subset) -> Option<ClassLabel> {
        let find = |classes: &[Family], parity| {
            classes
                .iter()
                .position(|c| c.contains(x))
                .map(|i| ClassLabel { parity, j: i + 1 })
        };
        find(&self.odd, Parity::Odd).or_else(|| find(&self.even, Parity::Even))
    }

    /// Number of classes with at least one member.
    pub fn nonempty_classes(&self) -> usize {
        self.classes().filter(|c| !c.is_empty()).count()
    }
}

impl Serialize for StarPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StarPartition", 8)?;
        st.serialize_field("n", &self.ground.n())?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("pivot", &self.pivot)?;
        st.serialize_field("odd", &self.odd)?;
        st.serialize_field("even", &self.even)?;
        st.serialize_field("alpha", &self.alpha())?;
        st.serialize_field("beta", &self.beta())?;
        st.serialize_field("gamma", &self.gamma())?;
        st.end()
    }
}

pub fn build_partition(ground: GroundSet, r: usize, pivot: Subset) -> Result<StarPartition> {
    check_regime(ground, r, pivot)?;
    let (alpha, beta) = alpha_beta(ground.n(), r)?;
    let matrices = (0..=r)
        .map(|h| build_matrix(ground, r, pivot, h))
        .collect::<Result<Vec<_>>>()?;

    let glue = |parity: Parity, count: u128| -> Result<Vec<Family>> {
        (1..=count as usize)
            .map(|j| {
                let mut members = Vec::new();
                for m in matrices.iter().filter(|m| Parity::of(m.h) == parity) {
                    if j <= m.class_count() {
                        members.extend(diagonal_class(m, j)?.into_vec());
                    }
                }
                Family::new(members)
            })
            .collect()
    };

    Ok(StarPartition {
        ground,
        r,
        pivot,
        odd: glue(Parity::Odd, alpha)?,
        even: glue(Parity::Even, beta)?,
    })
}

/// `{1, …, r}`.
pub fn default_pivot(r: usize) -> Subset {
    Subset::full(r)
}
