//! Injections between families of matroids.
//!
//! * [`iota`] embeds rank-`r` sparse-paving matroids on `n` elements into
//!   those on `n + 1` elements, keeping the r-circuit set.
//! * [`zeta`] splits a sparse-paving matroid on `n + 1` elements into a
//!   rank-`r` and a rank-`(r-1)` sparse-paving matroid on `n` elements.
//! * [`Injector`] maps an arbitrary matroid to `gamma` (or `2 gamma`)
//!   tagged sparse-paving matroids, one per partition class.

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matroid::{rank_one_from_loops, sparse_from_circuits, Matroid};
use crate::partition::{build_partition, default_pivot, StarPartition};
use crate::subset::{enumerate_rsubsets, Family, GroundSet, Subset, MAX_GROUND};

fn require_sparse(m: &Matroid) -> Result<()> {
    if !m.is_sparse_paving() {
        return Err(Error::domain("matroid is not sparse-paving"));
    }
    Ok(())
}

/// Circuits of a sparse-paving matroid of rank `r`, as a family of `r`-sets.
fn rank_circuits(m: &Matroid) -> Family {
    m.decompose_rank_r().circuits
}

/// Adds element `n + 1` and makes every `r`-set containing it a basis.
pub fn iota(m: &Matroid) -> Result<Matroid> {
    require_sparse(m)?;
    let n = m.n();
    if n + 1 > MAX_GROUND {
        return Err(Error::domain("ground set would exceed 64 elements"));
    }
    let ground = GroundSet::new(n + 1)?;
    let fresh = n;
    let bases = enumerate_rsubsets(ground, m.rank())?
        .filter(|x| x.contains(fresh) || m.bases().contains(x));
    Ok(Matroid::from_bases_trusted(ground, m.rank(), bases))
}

/// Splits the r-circuits of `m` (on `n + 1` elements) by whether they
/// contain element `n + 1`. Circuits avoiding it define the rank-`r` piece;
/// the others, with `n + 1` removed, define the rank-`(r-1)` piece.
pub fn zeta(m: &Matroid) -> Result<(Matroid, Matroid)> {
    require_sparse(m)?;
    let big = m.n();
    let r = m.rank();
    if big < 4 || r < 2 || r + 2 > big {
        return Err(Error::domain(format!(
            "zeta needs 2 <= r <= n-1 on the smaller ground set, got |S|+1={big}, r={r}"
        )));
    }
    let n = big - 1;
    let ground = GroundSet::new(n)?;
    let circuits = rank_circuits(m);
    let first = circuits.filter(|x| !x.contains(n));
    let mut second: Vec<Subset> = circuits
        .iter()
        .filter(|x| x.contains(n))
        .map(|x| x.without(n))
        .collect();
    second.sort_unstable();
    let second = Family::new(second)?;
    let m1 = sparse_from_circuits(ground, r, &first)?;
    let m2 = if r == 2 {
        rank_one_from_loops(ground, &second)?
    } else {
        sparse_from_circuits(ground, r - 1, &second)?
    };
    Ok((m1, m2))
}

/// Inverse of [`zeta`] on its image.
pub fn unzeta(m1: &Matroid, m2: &Matroid) -> Result<Matroid> {
    let n = m1.n();
    let r = m1.rank();
    if m2.n() != n || m2.rank() + 1 != r {
        return Err(Error::domain("pieces have mismatched ground sets or ranks"));
    }
    let mut circuits = rank_circuits(m1).into_vec();
    circuits.extend(rank_circuits(m2).iter().map(|z| z.with(n)));
    circuits.sort_unstable();
    sparse_from_circuits(GroundSet::new(n + 1)?, r, &Family::new(circuits)?)
}

/// Image tag: `j` for psi and gamma, `(c, j)` / `(d, j)` for psi-bar.
/// Classes `1..=alpha` are the odd classes, `alpha+1..=gamma` the even ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Index(usize),
    Circuit(usize),
    Dependent(usize),
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Tag::Index(j) => s.serialize_u64(j as u64),
            Tag::Circuit(j) | Tag::Dependent(j) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(if matches!(self, Tag::Circuit(_)) {
                    "c"
                } else {
                    "d"
                })?;
                seq.serialize_element(&j)?;
                seq.end()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageEntry {
    pub tag: Tag,
    /// The r-circuits of `matroid`.
    pub circuits: Family,
    pub matroid: Matroid,
    /// Set by the gamma map: the entry's r-circuits lie inside its class.
    pub certified: Option<bool>,
}

impl Serialize for ImageEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fields = if self.certified.is_some() { 3 } else { 2 };
        let mut st = s.serialize_struct("ImageEntry", fields)?;
        st.serialize_field("tag", &self.tag)?;
        st.serialize_field("circuits", &self.circuits)?;
        if let Some(c) = self.certified {
            st.serialize_field("certified", &c)?;
        }
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TaggedImage {
    pub entries: Vec<ImageEntry>,
}

impl TaggedImage {
    /// The circuit families in tag order; two images are equal iff these are.
    pub fn key(&self) -> Vec<(Tag, &Family)> {
        self.entries.iter().map(|e| (e.tag, &e.circuits)).collect()
    }
}

/// Which injection to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Psi,
    PsiBar,
    Gamma,
}

impl std::str::FromStr for Which {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi" => Ok(Which::Psi),
            "psibar" => Ok(Which::PsiBar),
            "gamma" => Ok(Which::Gamma),
            other => Err(Error::domain(format!(
                "unknown map {other:?}; expected psi, psibar or gamma"
            ))),
        }
    }
}

/// Holds the partition for one `(n, r, pivot)` so many matroids can be
/// mapped without rebuilding it.
#[derive(Clone, Debug)]
pub struct Injector {
    partition: StarPartition,
}

impl Injector {
    pub fn new(ground: GroundSet, r: usize, pivot: Subset) -> Result<Self> {
        Ok(Injector {
            partition: build_partition(ground, r, pivot)?,
        })
    }

    /// Pivot `{1, …, r}`.
    pub fn with_default_pivot(ground: GroundSet, r: usize) -> Result<Self> {
        Self::new(ground, r, default_pivot(r))
    }

    pub fn partition(&self) -> &StarPartition {
        &self.partition
    }

    fn check(&self, m: &Matroid) -> Result<()> {
        let p = &self.partition;
        if m.ground() != p.ground() || m.rank() != p.r() {
            return Err(Error::domain(format!(
                "matroid has n={}, r={} but the injector is for n={}, r={}",
                m.n(),
                m.rank(),
                p.ground().n(),
                p.r()
            )));
        }
        Ok(())
    }

    fn entry(&self, tag: Tag, circuits: Family, certify: Option<&Family>) -> Result<ImageEntry> {
        let p = &self.partition;
        let matroid = sparse_from_circuits(p.ground(), p.r(), &circuits)?;
        let certified = certify.map(|class| {
            matroid
                .decompose_rank_r()
                .circuits
                .iter()
                .all(|x| class.contains(x))
        });
        Ok(ImageEntry {
            tag,
            circuits,
            matroid,
            certified,
        })
    }

    /// Entry `j` has r-circuits `(C_r ∪ D_r) ∩ U_j`.
    pub fn psi(&self, m: &Matroid) -> Result<TaggedImage> {
        self.check(m)?;
        let dependent = m.decompose_rank_r().dependent();
        let entries = self
            .partition
            .classes()
            .enumerate()
            .map(|(k, class)| self.entry(Tag::Index(k + 1), dependent.intersection(class), None))
            .collect::<Result<_>>()?;
        Ok(TaggedImage { entries })
    }

    /// Entries `(c, j)` have r-circuits `C_r ∩ U_j`, entries `(d, j)` have
    /// `D_r ∩ U_j`.
    pub fn psi_bar(&self, m: &Matroid) -> Result<TaggedImage> {
        self.check(m)?;
        let dec = m.decompose_rank_r();
        let classes: Vec<&Family> = self.partition.classes().collect();
        let mut entries = Vec::with_capacity(2 * classes.len());
        for (k, class) in classes.iter().enumerate() {
            entries.push(self.entry(
                Tag::Circuit(k + 1),
                dec.circuits.intersection(class),
                None,
            )?);
        }
        for (k, class) in classes.iter().enumerate() {
            entries.push(self.entry(
                Tag::Dependent(k + 1),
                dec.dependent_noncircuits.intersection(class),
                None,
            )?);
        }
        Ok(TaggedImage { entries })
    }

    /// Same entries as [`Injector::psi`], each certified to draw its
    /// r-circuits from its own class.
    pub fn gamma_map(&self, m: &Matroid) -> Result<TaggedImage> {
        self.check(m)?;
        let dependent = m.decompose_rank_r().dependent();
        let entries = self
            .partition
            .classes()
            .enumerate()
            .map(|(k, class)| {
                self.entry(
                    Tag::Index(k + 1),
                    dependent.intersection(class),
                    Some(class),
                )
            })
            .collect::<Result<_>>()?;
        Ok(TaggedImage { entries })
    }

    pub fn apply(&self, which: Which, m: &Matroid) -> Result<TaggedImage> {
        match which {
            Which::Psi => self.psi(m),
            Which::PsiBar => self.psi_bar(m),
            Which::Gamma => self.gamma_map(m),
        }
    }
}

fn default_injector(m: &Matroid) -> Result<Injector> {
    Injector::with_default_pivot(m.ground(), m.rank())
}

pub fn psi(m: &Matroid) -> Result<TaggedImage> {
    default_injector(m)?.psi(m)
}

pub fn psi_bar(m: &Matroid) -> Result<TaggedImage> {
    default_injector(m)?.psi_bar(m)
}

pub fn gamma_map(m: &Matroid) -> Result<TaggedImage> {
    default_injector(m)?.gamma_map(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::validate_exchange;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn s(e: &[usize]) -> Subset {
        Subset::from_one_based(e.iter().copied()).unwrap()
    }

    fn fam(sets: &[&[usize]]) -> Family {
        Family::new(sets.iter().map(|e| s(e)).collect()).unwrap()
    }

    #[test]
    fn iota_examples() {
        let u23 = Matroid::uniform(g(3), 2).unwrap();
        assert_eq!(iota(&u23).unwrap(), Matroid::uniform(g(4), 2).unwrap());

        let m = sparse_from_circuits(g(4), 2, &fam(&[&[1, 2]])).unwrap();
        let up = iota(&m).unwrap();
        assert_eq!(up.n(), 5);
        assert_eq!(up.bases().len(), 9);
        assert_eq!(up.decompose_rank_r().circuits, fam(&[&[1, 2]]));
        assert!(validate_exchange(up.bases()).is_ok());
        assert!(up.is_sparse_paving());

        let not_sparse = Matroid::from_bases(g(4), 2, fam(&[&[1, 2], &[1, 3], &[2, 3]])).unwrap();
        assert!(iota(&not_sparse).is_err());
    }

    #[test]
    fn zeta_examples() {
        let (a, b) = zeta(&Matroid::uniform(g(7), 3).unwrap()).unwrap();
        assert_eq!(a, Matroid::uniform(g(6), 3).unwrap());
        assert_eq!(b, Matroid::uniform(g(6), 2).unwrap());

        let m = sparse_from_circuits(g(7), 3, &fam(&[&[1, 2, 3], &[1, 4, 7]])).unwrap();
        let (a, b) = zeta(&m).unwrap();
        assert_eq!(a.decompose_rank_r().circuits, fam(&[&[1, 2, 3]]));
        assert_eq!(b.decompose_rank_r().circuits, fam(&[&[1, 4]]));
        assert_eq!(unzeta(&a, &b).unwrap(), m);
    }

    #[test]
    fn zeta_rank_two_gives_rank_one_piece() {
        let m = sparse_from_circuits(g(5), 2, &fam(&[&[1, 5], &[2, 3]])).unwrap();
        let (a, b) = zeta(&m).unwrap();
        assert_eq!(a.decompose_rank_r().circuits, fam(&[&[2, 3]]));
        assert_eq!(b.rank(), 1);
        assert_eq!(b.decompose_rank_r().circuits, fam(&[&[1]]));
        assert!(b.is_sparse_paving());
        assert_eq!(unzeta(&a, &b).unwrap(), m);
    }

    #[test]
    fn zeta_rejects_top_rank() {
        let m = Matroid::uniform(g(5), 4).unwrap();
        assert!(matches!(zeta(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn psi_examples() {
        let u36 = Matroid::uniform(g(6), 3).unwrap();
        let img = psi(&u36).unwrap();
        assert_eq!(img.entries.len(), 6);
        assert!(img.entries.iter().all(|e| e.matroid == u36));

        let m = sparse_from_circuits(g(6), 3, &fam(&[&[1, 2, 3]])).unwrap();
        let img = psi(&m).unwrap();
        assert_eq!(img.entries[0].tag, Tag::Index(1));
        assert_eq!(img.entries[0].circuits, fam(&[&[1, 2, 3]]));
        assert!(img.entries[1..].iter().all(|e| e.matroid == u36));
    }

    #[test]
    fn psi_bar_examples() {
        let u36 = Matroid::uniform(g(6), 3).unwrap();
        let img = psi_bar(&u36).unwrap();
        assert_eq!(img.entries.len(), 12);
        assert!(img.entries.iter().all(|e| e.matroid == u36));
        assert_eq!(img.entries[0].tag, Tag::Circuit(1));
        assert_eq!(img.entries[6].tag, Tag::Dependent(1));
    }

    #[test]
    fn gamma_examples() {
        let u24 = Matroid::uniform(g(4), 2).unwrap();
        let img = gamma_map(&u24).unwrap();
        assert_eq!(img.entries.len(), 3);
        assert!(img
            .entries
            .iter()
            .all(|e| e.matroid == u24 && e.certified == Some(true)));

        let m = Matroid::from_bases(g(4), 2, fam(&[&[1, 2], &[1, 3], &[2, 3]])).unwrap();
        assert_eq!(gamma_map(&m).unwrap().key(), psi(&m).unwrap().key());
    }

    #[test]
    fn injector_rejects_wrong_shape() {
        let inj = Injector::with_default_pivot(g(5), 2).unwrap();
        assert!(inj.psi(&Matroid::uniform(g(5), 3).unwrap()).is_err());
    }

    #[test]
    fn image_json() {
        let m = sparse_from_circuits(g(4), 2, &fam(&[&[1, 2]])).unwrap();
        let text = serde_json::to_string(&psi(&m).unwrap()).unwrap();
        assert_eq!(
            text,
            r#"[{"tag":1,"circuits":[]},{"tag":2,"circuits":[]},{"tag":3,"circuits":[[1,2]]}]"#
        );
        let text = serde_json::to_string(&psi_bar(&m).unwrap()).unwrap();
        assert!(text.starts_with(r#"[{"tag":["c",1],"circuits":[]}"#));
        let text = serde_json::to_string(&gamma_map(&m).unwrap()).unwrap();
        assert!(text.contains(r#""certified":true"#));
        assert_eq!("psibar".parse::<Which>().unwrap(), Which::PsiBar);
        assert!("phi".parse::<Which>().is_err());
    }
}
