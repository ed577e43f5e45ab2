use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;
use rankcover::rank_space::{els_complements, els_enumerate, project, rank_distance, unique_els_of};
use rankcover::{Els, Field, RankVector, Space};

/// Plain Gaussian elimination mod a prime, independent of the library's.
fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> u32 {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pr);
        let inv = (1..p).find(|&i| rows[rank][c] * i % p == 1).unwrap();
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + p * p - f * rows[rank][k]) % p;
                }
            }
        }
        rank += 1;
    }
    rank as u32
}

/// Expansion matrix from the integer encoding: digit i of x_j is row i.
fn digits_matrix(q: u32, m: u32, coords: &[u64]) -> Vec<Vec<u32>> {
    (0..m)
        .map(|i| coords.iter().map(|&x| ((x / (q as u64).pow(i)) % q as u64) as u32).collect())
        .collect()
}

fn all_vectors(field: &Arc<Field>, n: u32) -> Vec<RankVector> {
    let space = Space::of_field(field, n).unwrap();
    (0..space.size()).map(|i| RankVector::from_index(field.clone(), n, i).unwrap()).collect()
}

#[test]
fn index_convention() {
    let f = Arc::new(Field::gf2(2).unwrap());
    let x = RankVector::from_index(f.clone(), 2, 1).unwrap();
    assert_eq!(x.values(), vec![0, 1]);
    for i in 0..16 {
        assert_eq!(RankVector::from_index(f.clone(), 2, i).unwrap().index().unwrap(), i);
    }
}

#[test]
fn rank_matches_els_dimension_exhaustive() {
    for (m, n) in [(2, 2), (3, 3)] {
        let f = Arc::new(Field::gf2(m).unwrap());
        for x in all_vectors(&f, n) {
            let els = unique_els_of(&x);
            assert_eq!(x.rank() as usize, els.dim());
            assert!(els.contains(&x));
            assert_eq!(x.rank(), rank_mod_p(digits_matrix(2, m, &x.values()), 2));
        }
    }
}

#[test]
fn els_counts_are_gaussian() {
    // [n v]_q by the product formula, kept separate from the library
    fn gauss(n: u32, v: u32, q: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..v {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }
    for q in [2u32, 3] {
        for n in 0..=5usize {
            for v in 0..=n {
                if q == 3 && n == 5 {
                    continue;
                }
                let all = els_enumerate(n, v, q);
                assert_eq!(all.len() as u64, gauss(n as u32, v as u32, q as u64), "q={q} n={n} v={v}");
                let distinct: HashSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
            }
        }
    }
    assert_eq!(els_enumerate(4, 2, 2).len(), 35);
}

#[test]
fn complements_count() {
    for n in 1..=4usize {
        for v in 0..=n {
            for big in els_enumerate(n, v, 2) {
                for a in 0..=v {
                    for small in els_enumerate(n, a, 2).into_iter().filter(|s| s.is_subspace_of(&big)) {
                        let comps = els_complements(&small, &big).unwrap();
                        assert_eq!(comps.len(), 1 << (a * (v - a)));
                        for b in &comps {
                            assert!(small.meets_trivially(b));
                            assert_eq!(small.sum(b), big);
                        }
                    }
                }
            }
        }
    }
    let line = Els::span(2, 2, vec![vec![1, 0]]).unwrap();
    assert!(els_complements(&Els::full(2, 3), &Els::span(2, 3, vec![vec![1, 0, 0]]).unwrap()).is_err());
    assert_eq!(els_complements(&line, &Els::full(2, 2)).unwrap().len(), 2);
}

/// Every ordered split (A, B) of V with A ⊕ B = V.
fn splits(v: &Els) -> Vec<(Els, Els)> {
    let mut out = Vec::new();
    for a in 0..=v.dim() {
        for small in els_enumerate(v.n(), a, v.q()).into_iter().filter(|s| s.is_subspace_of(v)) {
            for b in els_complements(&small, v).unwrap() {
                out.push((small.clone(), b));
            }
        }
    }
    out
}

#[test]
fn projections_keep_rank_and_are_injective() {
    for (m, n) in [(2u32, 2usize), (3, 3)] {
        let f = Arc::new(Field::gf2(m).unwrap());
        for v in 1..=n {
            for big in els_enumerate(n, v, 2) {
                let parts = splits(&big);
                for u in big.members(&f).into_iter().filter(|u| u.rank() as usize == v) {
                    let mut seen_a = HashSet::new();
                    let mut seen_b = HashSet::new();
                    for (a, b) in &parts {
                        let (ua, ub) = project(&u, a, b).unwrap();
                        assert_eq!(ua.add(&ub).unwrap(), u);
                        assert!(a.contains(&ua) && b.contains(&ub));
                        assert_eq!(ua.rank() as usize, a.dim());
                        assert_eq!(ub.rank() as usize, b.dim());
                        assert!(seen_a.insert(ua.values()));
                        assert!(seen_b.insert(ub.values()));
                    }
                }
                if m == 3 {
                    break; // one V per dimension keeps GF(8)^3 quick
                }
            }
        }
    }
}

#[test]
fn project_member_of_a() {
    let f = Arc::new(Field::gf2(2).unwrap());
    let a = Els::span(2, 2, vec![vec![1, 1]]).unwrap();
    let b = Els::span(2, 2, vec![vec![0, 1]]).unwrap();
    let x = RankVector::from_values(f, &[3, 3]).unwrap();
    let (xa, xb) = project(&x, &a, &b).unwrap();
    assert_eq!(xa, x);
    assert!(xb.is_zero());
    assert!(project(&x, &a, &a).is_err());
}

fn field_and_vectors() -> impl Strategy<Value = (u32, u32, Vec<u64>, Vec<u64>, Vec<u64>)> {
    (prop_oneof![Just((2u32, 3u32)), Just((2, 5)), Just((3, 2)), Just((5, 2)), Just((2, 8))], 1u32..6).prop_flat_map(
        |((q, m), n)| {
            let size = (q as u64).pow(m);
            let v = || proptest::collection::vec(0..size, n as usize);
            (Just(q), Just(m), v(), v(), v())
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_metric_axioms((q, m, x, y, z) in field_and_vectors()) {
        let f = Arc::new(Field::default_or_first(q, m).unwrap());
        let (x, y, z) = (
            RankVector::from_values(f.clone(), &x).unwrap(),
            RankVector::from_values(f.clone(), &y).unwrap(),
            RankVector::from_values(f.clone(), &z).unwrap(),
        );
        let dxy = rank_distance(&x, &y).unwrap();
        prop_assert_eq!(dxy, rank_distance(&y, &x).unwrap());
        prop_assert!(dxy <= rank_distance(&x, &z).unwrap() + rank_distance(&z, &y).unwrap());
        prop_assert_eq!(dxy == 0, x == y);
        prop_assert!(x.rank() <= m.min(x.n() as u32));
        prop_assert_eq!(x.rank(), rank_mod_p(digits_matrix(q, m, &x.values()), q));
        let space = Space::of_field(&f, x.n() as u32).unwrap();
        prop_assert_eq!(space.distance(x.index().unwrap(), y.index().unwrap()), dxy);
    }

    #[test]
    fn scaling_by_nonzero_keeps_rank((q, m, x, y, _z) in field_and_vectors()) {
        let f = Arc::new(Field::default_or_first(q, m).unwrap());
        let x = RankVector::from_values(f.clone(), &x).unwrap();
        let c = f.element(y[0]).unwrap();
        prop_assume!(!c.is_zero());
        prop_assert_eq!(x.scale(c).rank(), x.rank());
    }

    #[test]
    fn field_axioms((q, m, v, _y, _z) in field_and_vectors()) {
        let f = Field::default_or_first(q, m).unwrap();
        let e = |i: usize| f.element(v[i % v.len()]).unwrap();
        let (a, b, c) = (e(0), e(1), e(2));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, m), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.pow(a, (f.size() - 1) as i64).unwrap(), f.one());
        }
    }
}
