//! Frozen census counts, cross-checked by independent enumerators.

use sparsepave_core::census::{
    count_matroids_reversed, count_star_star_families, enumerate_matroids, sandwich, sparse_count,
    star_star_families, verify_bounds, CensusConfig,
};
use sparsepave_core::GroundSet;

const CFG: CensusConfig = CensusConfig {
    matroid_ceiling: 20,
    sparse_ceiling: 24,
};

fn g(n: usize) -> GroundSet {
    GroundSet::new(n).unwrap()
}

/// Labeled matroids of rank r on n elements, r = 0..=n.
const MATROIDS: [&[u128]; 6] = [
    &[1, 1],
    &[1, 3, 1],
    &[1, 7, 7, 1],
    &[1, 15, 36, 15, 1],
    &[1, 31, 171, 171, 31, 1],
    &[1, 63, 813, 2053, 813, 63, 1],
];

/// Labeled sparse-paving matroids for 3 <= n <= 7, r = 1..n-1.
const SPARSE: [(usize, &[u128]); 5] = [
    (3, &[4, 4]),
    (4, &[5, 10, 5]),
    (5, &[6, 26, 26, 6]),
    (6, &[7, 76, 271, 76, 7]),
    (7, &[8, 232, 5596, 5596, 232, 8]),
];

#[test]
fn matroid_counts() {
    for (i, row) in MATROIDS.iter().enumerate() {
        let n = i + 1;
        for (r, &want) in row.iter().enumerate() {
            assert_eq!(
                enumerate_matroids(g(n), r).unwrap().len() as u128,
                want,
                "n={n} r={r}"
            );
        }
    }
    // total over ranks on six elements
    assert_eq!(MATROIDS[5].iter().sum::<u128>(), 3807);
}

#[test]
fn matroid_counts_match_reversed_recount() {
    for (n, r) in [(4, 2), (5, 2), (5, 3), (6, 2), (6, 3)] {
        assert_eq!(
            count_matroids_reversed(g(n), r, CFG).unwrap() as u128,
            MATROIDS[n - 1][r],
            "n={n} r={r}"
        );
    }
}

#[test]
fn matroid_enumeration_ignores_thread_count() {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| enumerate_matroids(g(6), 3).unwrap());
    assert_eq!(single, enumerate_matroids(g(6), 3).unwrap());
}

#[test]
fn sparse_counts() {
    let sparse_cfg = CensusConfig {
        matroid_ceiling: 20,
        sparse_ceiling: 35,
    };
    for (n, row) in SPARSE {
        for (i, &want) in row.iter().enumerate() {
            let r = i + 1;
            let got = if r >= 2 {
                count_star_star_families(g(n), r, sparse_cfg).unwrap()
            } else {
                sparse_count(n, r, CFG).unwrap()
            };
            assert_eq!(got, want, "n={n} r={r}");
        }
    }
}

#[test]
fn backtracking_and_dp_agree() {
    for (n, row) in SPARSE.iter().take(4) {
        for (i, &want) in row.iter().enumerate().skip(1) {
            let r = i + 1;
            assert_eq!(
                star_star_families(g(*n), r, CFG).unwrap().len() as u128,
                want
            );
        }
    }
}

#[test]
fn sparse_counts_are_symmetric_under_duality() {
    for (n, row) in SPARSE {
        let rev: Vec<u128> = row.iter().rev().copied().collect();
        assert_eq!(row, rev.as_slice(), "n={n}");
    }
    for n in 3..=6 {
        for r in 1..n {
            assert_eq!(
                sparse_count(n, r, CFG).unwrap(),
                sparse_count(n, n - r, CFG).unwrap()
            );
        }
    }
}

#[test]
fn splitting_supports_a_product_bound() {
    for n in 3..=5 {
        for r in 2..n {
            let s = sandwich(n, r, CFG).unwrap();
            assert!(s.lower_ok, "n={n} r={r}");
            assert!(s.product_ok, "n={n} r={r}");
        }
    }
}

#[test]
fn additive_step_bound_fails_on_small_cases() {
    // 10 = |Sparse_{4,2}| exceeds |Sparse_{3,2}| + |Sparse_{3,1}| = 8
    let s = sandwich(3, 2, CFG).unwrap();
    assert_eq!(
        (s.sparse_n_r, s.sparse_next_r, s.sparse_n_r_minus_1),
        (4, 10, 4)
    );
    assert!(!s.upper_ok);
}

#[test]
fn rows_record_violations_instead_of_failing() {
    let rows = verify_bounds(5, CFG).unwrap();
    assert_eq!(rows.len(), 3);
    let r2 = &rows[0];
    assert_eq!((r2.matroid_count, r2.sparse_count, r2.gamma), (171, 26, 6));
    assert!(r2.lower_ok && r2.exponential_ok);
    assert!(!r2.upper_factor_ok);
    assert!(rows[2].upper_factor_ok);
}
