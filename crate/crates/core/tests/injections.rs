//! Injectivity of the maps on exhaustive censuses.

use std::collections::{BTreeMap, BTreeSet};

use sparsepave_core::census::{enumerate_matroids, enumerate_sparse};
use sparsepave_core::maps::{iota, unzeta, zeta, Injector, Which};
use sparsepave_core::{validate_exchange, Family, GroundSet, Matroid};

fn g(n: usize) -> GroundSet {
    GroundSet::new(n).unwrap()
}

#[test]
fn iota_is_injective_and_keeps_circuits() {
    for n in 3..=5 {
        for r in 2..n {
            let images: BTreeSet<Matroid> = enumerate_sparse(g(n), r)
                .unwrap()
                .iter()
                .map(|m| {
                    let big = iota(m).unwrap();
                    assert!(big.is_sparse_paving());
                    assert_eq!(
                        big.decompose_rank_r().circuits,
                        m.decompose_rank_r().circuits
                    );
                    let (first, second) = zeta(&big).unwrap();
                    assert_eq!(&first, m);
                    assert!(second.is_uniform());
                    assert_eq!(second.rank(), r - 1);
                    big
                })
                .collect();
            assert_eq!(images.len(), enumerate_sparse(g(n), r).unwrap().len());
        }
    }
}

#[test]
fn zeta_is_injective_and_inverted_by_unzeta() {
    for big in 4..=6 {
        for r in 2..big - 1 {
            let all = enumerate_sparse(g(big), r).unwrap();
            let mut seen = BTreeSet::new();
            for m in &all {
                let (m1, m2) = zeta(m).unwrap();
                assert_eq!((m1.rank(), m2.rank()), (r, r - 1));
                assert!(m1.is_sparse_paving() && m2.is_sparse_paving());
                assert_eq!(&unzeta(&m1, &m2).unwrap(), m);
                assert!(seen.insert((m1, m2)), "collision at {m:?}");
            }
        }
    }
}

fn assert_injective(which: Which, n: usize, r: usize) {
    let injector = Injector::with_default_pivot(g(n), r).unwrap();
    let census = enumerate_matroids(g(n), r).unwrap();
    let mut seen: BTreeMap<Vec<(sparsepave_core::maps::Tag, Family)>, &Matroid> = BTreeMap::new();
    for m in &census {
        let image = injector.apply(which, m).unwrap();
        for e in &image.entries {
            assert!(e.matroid.is_sparse_paving());
            assert!(validate_exchange(e.matroid.bases()).is_ok());
            if which == Which::Gamma {
                assert_eq!(e.certified, Some(true));
            }
        }
        let key = image
            .key()
            .into_iter()
            .map(|(t, f)| (t, f.clone()))
            .collect();
        if let Some(prev) = seen.insert(key, m) {
            panic!("{which:?} collides on {prev:?} and {m:?}");
        }
    }
}

#[test]
fn injections_on_full_census() {
    for n in 3..=5 {
        for r in 2..n {
            for which in [Which::Psi, Which::PsiBar, Which::Gamma] {
                assert_injective(which, n, r);
            }
        }
    }
}

#[test]
fn gamma_images_equal_psi_images() {
    for r in 2..5 {
        let injector = Injector::with_default_pivot(g(5), r).unwrap();
        for m in enumerate_matroids(g(5), r).unwrap() {
            let a = injector.psi(&m).unwrap();
            let b = injector.gamma_map(&m).unwrap();
            assert_eq!(a.key(), b.key());
        }
    }
}

#[test]
fn circuits_are_determined_by_all_dependent_rsets() {
    // psi_bar cannot beat psi on distinguishing power: C_r is a function of
    // C_r ∪ D_r, since the union fixes the bases.
    for n in 3..=5 {
        for r in 2..n {
            let mut by_union: BTreeMap<Family, Family> = BTreeMap::new();
            for m in enumerate_matroids(g(n), r).unwrap() {
                let dec = m.decompose_rank_r();
                let prev = by_union.insert(dec.dependent(), dec.circuits.clone());
                assert!(prev.is_none_or(|c| c == dec.circuits));
            }
        }
    }
}

#[test]
fn psi_bar_separates_circuits_from_other_dependent_sets() {
    // n=5, r=2: element 5 a loop and 1,2 parallel
    let ground = g(5);
    let pair = Matroid::from_bases(
        ground,
        2,
        Family::new(
            [[1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]
                .iter()
                .map(|e| ground.subset(e).unwrap())
                .collect(),
        )
        .unwrap(),
    )
    .unwrap();
    let image = Injector::with_default_pivot(ground, 2)
        .unwrap()
        .psi_bar(&pair)
        .unwrap();
    let dec = pair.decompose_rank_r();
    assert_eq!(dec.circuits.len(), 1);
    assert_eq!(dec.dependent_noncircuits.len(), 4);
    let c: usize = image
        .entries
        .iter()
        .filter(|e| matches!(e.tag, sparsepave_core::maps::Tag::Circuit(_)))
        .map(|e| e.circuits.len())
        .sum();
    assert_eq!(c, 1);
}
