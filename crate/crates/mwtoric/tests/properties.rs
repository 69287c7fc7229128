//! Property tests for the structural invariants: complex normalization,
//! min-set characterization, shellings, Smith form contracts, row sets and
//! canonical transforms.

use mwtoric::cellular::{chow_basis, decompose, lambda_complex};
use mwtoric::fan::{hirzebruch, projective_space, surface_from_rays, Fan};
use mwtoric::intlin::{smith_normal_form, IntMatrix};
use mwtoric::simplicial::{
    build_complex, is_shelling, restriction_data, subsets_of, vertex_list, FacetOrder,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn arb_facets(m: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0..m, 1..=3.min(m)), 0..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn build_complex_is_normalized(facets in arb_facets(6)) {
        let k = build_complex(6, &facets).unwrap();
        // every singleton is a face
        for v in 0..6u32 {
            prop_assert!(k.contains(1 << v));
        }
        // facets pairwise non-contained
        for &a in &k.facets {
            for &b in &k.facets {
                prop_assert!(a == b || a & !b != 0);
            }
        }
        // downward closure: every subset of a facet is a face
        for &f in &k.facets {
            for s in subsets_of(f) {
                prop_assert!(k.contains(s));
            }
        }
    }

    #[test]
    fn min_sets_match_bruteforce(facets in arb_facets(6)) {
        let k = build_complex(6, &facets).unwrap();
        let order = FacetOrder::of(&k);
        let data = restriction_data(&k, &order).unwrap();
        for (i, &sigma) in order.sequence.iter().enumerate() {
            let earlier = &order.sequence[..i];
            // brute force: minimal tau <= sigma not contained in any earlier
            let qualifies = |tau: u64| -> bool {
                tau & !sigma == 0 && earlier.iter().all(|&e| tau & !e != 0)
            };
            let mut expected: Vec<u64> = subsets_of(sigma)
                .into_iter()
                .filter(|&tau| {
                    qualifies(tau)
                        && subsets_of(tau)
                            .into_iter()
                            .all(|s| s == tau || !qualifies(s))
                })
                .collect();
            expected.sort();
            prop_assert_eq!(&data.min_sets[i], &expected, "facet index {}", i);
            let union = expected.iter().fold(0u64, |a, &b| a | b);
            prop_assert_eq!(data.restrictions[i], union);
        }
    }

    #[test]
    fn shellings_are_regular_expanding(facets in arb_facets(5)) {
        let k = build_complex(5, &facets).unwrap();
        if !k.is_pure() {
            return Ok(());
        }
        let order = FacetOrder::of(&k);
        if is_shelling(&k, &order) == Ok(true) {
            let data = restriction_data(&k, &order).unwrap();
            prop_assert!(data.is_regular, "shelling must induce singleton min sets");
        }
    }

    #[test]
    fn smith_form_contract(rows in 1usize..=5, cols in 1usize..=5, entries in prop::collection::vec(-5i64..=5, 25)) {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, BigInt::from(entries[i * 5 + j]));
            }
        }
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert_eq!(snf.u.determinant().abs(), BigInt::one());
        prop_assert_eq!(snf.v.determinant().abs(), BigInt::one());
        for w in snf.diagonal.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].mod_floor(&w[0]).is_zero());
            }
        }
    }

    #[test]
    fn row_sets_membership(cols in prop::collection::vec((-4i64..=4, -4i64..=4), 1..=6)) {
        // lambda = [I_2 | R]: surjective by construction, n = 2
        let m = 2 + cols.len();
        let mut lambda = IntMatrix::zeros(2, m);
        lambda.set(0, 0, BigInt::one());
        lambda.set(1, 1, BigInt::one());
        for (j, &(x, y)) in cols.iter().enumerate() {
            lambda.set(0, j + 2, BigInt::from(x));
            lambda.set(1, j + 2, BigInt::from(y));
        }
        let facets: Vec<Vec<usize>> = vec![vec![0, 1]];
        let complex = build_complex(m, &facets).unwrap();
        let fan = Fan::new(complex, lambda.clone(), None).unwrap();
        let table = mwtoric::row_sets(&fan).unwrap();
        // 2^n distinct row sets
        let mut omegas: Vec<u64> = table.rows.iter().map(|&(_, w)| w).collect();
        omegas.sort();
        omegas.dedup();
        prop_assert_eq!(omegas.len(), 4);
        // membership: j in omega_kappa iff kappa . lambda(v_j) is odd
        for &(kappa, omega) in &table.rows {
            for j in 0..m {
                let mut s = BigInt::zero();
                for i in 0..2 {
                    if kappa >> i & 1 == 1 {
                        s += lambda.get(i, j);
                    }
                }
                let odd = s.mod_floor(&BigInt::from(2)).is_one();
                prop_assert_eq!(omega >> j & 1 == 1, odd);
            }
        }
    }
}

/// Rank over Q by fraction-free Gaussian elimination: the independent route
/// to the free part of homology.
fn rational_rank(m: &IntMatrix) -> usize {
    let rows = m.rows;
    let cols = m.cols;
    let mut a: Vec<Vec<BigInt>> =
        (0..rows).map(|i| (0..cols).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&i| !a[i][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        for i in 0..rows {
            if i == rank || a[i][col].is_zero() {
                continue;
            }
            let (num, den) = (a[i][col].clone(), a[rank][col].clone());
            for j in 0..cols {
                let v = &a[i][j] * &den - &num * &a[rank][j];
                a[i][j] = v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// homology_at agrees with the brute-force route (kernel/image ranks over Q,
/// torsion via the Smith diagonal) on chain complexes of random complexes.
#[test]
fn homology_at_matches_bruteforce_oracle() {
    use mwtoric::homology_at;
    use mwtoric::simplicial::ZChainComplex;
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for case in 0..60 {
        let m = 3 + (next() % 4) as usize;
        let mut facets = Vec::new();
        for _ in 0..1 + next() % 4 {
            let size = 1 + (next() % 3.min(m as u64)) as usize;
            let mut verts = Vec::new();
            while verts.len() < size {
                let v = (next() % m as u64) as usize;
                if !verts.contains(&v) {
                    verts.push(v);
                }
            }
            facets.push(verts);
        }
        let k = build_complex(m, &facets).unwrap();
        let chain = ZChainComplex::of_complex(&k);
        for d in 0..chain.generators.len() {
            if chain.generators[d].len() > 8 {
                continue;
            }
            let width = chain.generators[d].len();
            let d_in = if d + 1 < chain.differentials.len() {
                chain.differentials[d + 1].clone()
            } else {
                IntMatrix::zeros(width, 0)
            };
            let d_out = if d == 0 {
                IntMatrix::zeros(0, width)
            } else {
                chain.differentials[d].clone()
            };
            let h = homology_at(&d_in, &d_out).unwrap();
            let expect_free = width - rational_rank(&d_out) - rational_rank(&d_in);
            assert_eq!(h.free_rank, expect_free, "case {case} degree {d} free rank");
            let expect_torsion: Vec<BigInt> = smith_normal_form(&d_in)
                .diagonal
                .iter()
                .filter(|x| x.abs() > BigInt::one())
                .cloned()
                .collect();
            assert_eq!(h.torsion, expect_torsion, "case {case} degree {d} torsion");
        }
    }
}

/// Canonical transform rows annihilate lambda exactly, over the worked fans.
#[test]
fn canonical_transform_rows_in_kernel() {
    use mwtoric::mwring::CubicalCell;
    let fans = vec![
        projective_space(2).unwrap(),
        projective_space(3).unwrap(),
        hirzebruch(1).unwrap(),
        hirzebruch(2).unwrap(),
    ];
    for fan in &fans {
        let data = fan.restriction_data();
        let m = fan.m();
        let full = (1u64 << m) - 1;
        for &sigma in &[0u64, fan.complex.facets[0] & (fan.complex.facets[0] - 1)] {
            if !fan.complex.contains(sigma) {
                continue;
            }
            let f_idx = data.first_facet[&sigma];
            let f_mask = data.order.sequence[f_idx];
            let frame = mwtoric::fan::frame(fan, f_mask).unwrap();
            for tau_star in subsets_of(full & !sigma).into_iter().take(8) {
                let cell = CubicalCell::new(sigma, full & !sigma & !tau_star, tau_star);
                let t = mwtoric::fan::canonical_transform(fan, &cell, frame).unwrap();
                for i in vertex_list(tau_star) {
                    let mut acc = vec![BigInt::zero(); fan.n()];
                    for j in 0..m {
                        let c = t.section.get(i, j);
                        if c != 0 {
                            for (row, slot) in acc.iter_mut().enumerate() {
                                *slot += BigInt::from(c) * fan.lambda.get(row, j);
                            }
                        }
                    }
                    assert!(acc.iter().all(|x| x.is_zero()), "row {i} escapes the kernel");
                }
            }
        }
    }
}

/// For shellable complete fans the motivic summand count equals the facet
/// count, and the Chow ranks match the per-twist counts.
#[test]
fn motivic_counts_match_facets_and_chow() {
    let fans = vec![
        projective_space(2).unwrap(),
        projective_space(3).unwrap(),
        projective_space(4).unwrap(),
        hirzebruch(0).unwrap(),
        hirzebruch(1).unwrap(),
        hirzebruch(2).unwrap(),
        hirzebruch(3).unwrap(),
        surface_from_rays(&[(1, 0), (1, 1), (0, 1), (-1, -1)]).unwrap(),
        surface_from_rays(&[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]).unwrap(),
    ];
    for fan in &fans {
        let dec = decompose(&lambda_complex(fan).unwrap()).unwrap();
        assert_eq!(
            dec.motivic_cells.len(),
            fan.complex.facets.len(),
            "one motivic summand per facet"
        );
        let chow = chow_basis(fan);
        for (k, &rank) in chow.ranks.iter().enumerate() {
            let motivic_at_k =
                dec.motivic_cells.iter().filter(|(q, _, _)| *q as usize == k).count();
            assert_eq!(rank, motivic_at_k, "CH^{k} rank");
        }
    }
}

/// Canonical and shellable pathways decompose identically on shellable fans
/// of dimension up to three.
#[test]
fn canonical_agrees_with_lambda_pathway() {
    let mut fans = vec![
        projective_space(1).unwrap(),
        projective_space(2).unwrap(),
        projective_space(3).unwrap(),
    ];
    fans.push(surface_from_rays(&[(1, 0), (1, 1), (0, 1), (-1, -1), (0, -1)]).unwrap());
    for (ix, fan) in fans.iter().enumerate() {
        let canonical = mwtoric::canonical_complex(fan).unwrap();
        assert!(canonical.d_squared_is_zero().unwrap(), "fan {ix}");
        let lam = lambda_complex(fan).unwrap();
        assert!(lam.d_squared_is_zero().unwrap(), "fan {ix}");
        let dc = decompose(&canonical).unwrap();
        let dl = decompose(&lam).unwrap();
        assert_eq!(dc.b_multiset(), dl.b_multiset(), "fan {ix}");
    }
}

/// Hirzebruch cells with the restriction sigma and twist rows avoiding the
/// first facet project to eta powers of the base cell, per the worked case.
#[test]
fn hirzebruch_odd_projection_example() {
    use mwtoric::mwring::{canonical_projection, CanonicalProjection, CubicalCell};
    let fan = hirzebruch(1).unwrap();
    let data = fan.restriction_data();
    // sigma_e = {3} = r(23); f(sigma_e) = 23; tau_star inside omega = {1,3,4}
    let sigma = 0b0100u64;
    let f_idx = data.first_facet[&sigma];
    let f_mask = data.order.sequence[f_idx];
    assert_eq!(f_mask, 0b0110, "f({{3}}) is the facet 23");
    assert_eq!(data.restrictions[f_idx], sigma, "sigma is the restriction");
    for tau_star in [0b0001u64, 0b1000, 0b1001] {
        let cell = CubicalCell::new(sigma, 0b1111 & !sigma & !tau_star, tau_star);
        let frame = mwtoric::fan::frame(&fan, f_mask).unwrap();
        let t = mwtoric::fan::canonical_transform(&fan, &cell, frame).unwrap();
        let got = canonical_projection(&t.section, &cell, true, f_mask);
        assert_eq!(
            got,
            CanonicalProjection::EtaToBase { t: tau_star.count_ones() },
            "tau_star = {tau_star:#b}"
        );
    }
}

/// The transition-section cocycle property around every ray of a surface.
#[test]
fn transition_cocycle_on_surfaces() {
    let fan = surface_from_rays(&[(1, 0), (1, 1), (0, 1), (-1, -1)]).unwrap();
    let facets = fan.complex.facets.clone();
    for &a in &facets {
        for &b in &facets {
            let shared = a & b;
            if shared == 0 || a == b {
                continue;
            }
            let ab = mwtoric::transition_section(&fan, shared, a, b).unwrap();
            let ba = mwtoric::transition_section(&fan, shared, b, a).unwrap();
            let aa = mwtoric::transition_section(&fan, shared, a, a).unwrap();
            assert_eq!(ab.compose(&ba).unwrap().exponents, aa.exponents);
            assert!(aa.section_offset().is_zero());
        }
    }
}
