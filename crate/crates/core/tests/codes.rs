use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;
use rankcover::codes::{
    cartesian_power, covering_radius, covering_radius_exhaustive, field_embed, format_code_file, gabidulin_default,
    min_rank_distance, mrd_construct, parse_code_file, transpose_code, Code, SkipVector,
};
use rankcover::rank_space::{els_enumerate, unique_els_of};
use rankcover::{Field, RankVector, Space};

const CAP: u64 = 1 << 22;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "codes", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

/// Covering radius by a direct double loop, sharing nothing with the library
/// beyond `Space::distance`.
fn naive_radius(code: &Code) -> u32 {
    let s = code.space();
    (0..s.size()).map(|x| code.words().iter().map(|&c| s.distance(x, c)).min().unwrap()).max().unwrap()
}

#[test]
fn published_codes_meet_their_radius() {
    for (file, size, rho) in [
        ("gf8_n3_r1_k16.sv", 16, 1),
        ("gf16_n3_r2_k7.sv", 7, 2),
        ("gf16_n4_r1_k722.sv", 722, 1),
        ("gf16_n4_r2_k48.sv", 48, 2),
    ] {
        let code = parse_code_file(&data(file), None).unwrap();
        assert_eq!(code.len(), size, "{file}");
        assert_eq!(covering_radius(&code, CAP).unwrap(), rho, "{file}");
    }
    let seven = SkipVector::parse("135 689 34 420 477 522 759").unwrap();
    let code = seven.decode(Arc::new(Field::gf2(4).unwrap()), 3).unwrap();
    assert_eq!(naive_radius(&code), 2);
}

#[test]
fn three_word_code() {
    let f = Arc::new(Field::gf2(2).unwrap());
    let code = SkipVector::parse("0^3").unwrap().decode(f.clone(), 2).unwrap();
    assert_eq!(code.words(), &[0, 1, 2]);
    let alpha = f.alpha().value();
    assert_eq!(code.vectors()[2].values(), vec![0, alpha]);
    assert_eq!(covering_radius(&code, CAP).unwrap(), 1);
    assert_eq!(SkipVector::encode(&code).to_string(), "0^3");
    assert_eq!(SkipVector::from_indices(&[0]).to_string(), "0");
    assert!(SkipVector::parse("x^2").is_err());
    assert!(SkipVector::parse("3^0").is_err());
}

#[test]
fn linear_32_word_code() {
    let f = Arc::new(Field::gf2(5).unwrap());
    let a = f.alpha();
    let g = vec![f.one(), a, f.mul(a, a), f.zero(), f.zero()];
    let code = Code::linear(f, vec![g], CAP).unwrap();
    assert_eq!(code.len(), 32);
    assert_eq!(code.dimension(), Some(1));
    assert_eq!(covering_radius(&code, CAP).unwrap(), 3);
}

#[test]
fn gabidulin_codes_are_mrd() {
    for m in 1..=5 {
        let f = Arc::new(Field::gf2(m).unwrap());
        for n in 1..=m {
            for k in 1..=n {
                if m * k > 15 {
                    continue;
                }
                let code = gabidulin_default(f.clone(), n, k).unwrap();
                assert_eq!(code.len() as u64, 1 << (m * k));
                if code.len() > 1 {
                    assert_eq!(min_rank_distance(&code).unwrap(), n - k + 1, "({m},{n},{k})");
                }
            }
        }
    }
}

#[test]
fn mrd_examples() {
    let c = mrd_construct(2, 2, 2, 2).unwrap();
    assert_eq!((c.len(), min_rank_distance(&c).unwrap()), (4, 2));
    let c = mrd_construct(2, 2, 4, 2).unwrap();
    assert_eq!((c.len(), min_rank_distance(&c).unwrap()), (16, 2));
    let c = mrd_construct(2, 2, 3, 2).unwrap();
    assert_eq!((c.len(), min_rank_distance(&c).unwrap()), (8, 2));
    assert_eq!(mrd_construct(2, 2, 2, 3).unwrap().words(), &[0]);
    assert!(min_rank_distance(&mrd_construct(2, 2, 2, 3).unwrap()).is_err());
}

#[test]
fn cartesian_gabidulin_radius() {
    let f = Arc::new(Field::gf2(2).unwrap());
    let g = gabidulin_default(f, 2, 1).unwrap();
    let sq = cartesian_power(&g, 2).unwrap();
    assert_eq!(sq.len(), 16);
    assert_eq!(min_rank_distance(&sq).unwrap(), 2);
    assert_eq!(covering_radius_exhaustive(&sq, CAP).unwrap(), 1);
    assert_eq!(covering_radius(&sq, CAP).unwrap(), 1);
    let explicit = cartesian_power(&g.clone().into_explicit(), 2).unwrap();
    assert_eq!(explicit.words(), sq.words());
}

#[test]
fn mrd_plus_els_is_direct_sum() {
    let f = Arc::new(Field::gf2(3).unwrap());
    let c = gabidulin_default(f.clone(), 3, 1).unwrap();
    let space = Space::new(2, 3, 3).unwrap();
    for v in els_enumerate(3, 2, 2) {
        let members: Vec<u64> = v.members(&f).iter().map(|x| x.index().unwrap()).collect();
        for x in c.vectors() {
            assert_eq!(v.contains(&x), x.is_zero());
        }
        assert_eq!(c.len() as u64 * members.len() as u64, space.size());
        // every vector is uniquely c + v
        let mut hits = vec![0u8; space.size() as usize];
        for &w in c.words() {
            for &m in &members {
                hits[space.add(w, m) as usize] += 1;
            }
        }
        assert!(hits.iter().all(|&h| h == 1));
    }
}

#[test]
fn embedded_mrd_keeps_radius() {
    // (n, n−ρ) Gabidulin codes over GF(2^m), embedded by u ≤ ρ extra degrees
    for (m, n, rho) in [(2, 2, 1), (3, 3, 1), (3, 3, 2), (3, 2, 1)] {
        let f = Arc::new(Field::gf2(m).unwrap());
        let base = gabidulin_default(f, n, n - rho).unwrap();
        for u in 0..=rho {
            let up = field_embed(&base, u).unwrap();
            assert_eq!(up.len() as u64, 1 << (m * (n - rho)));
            assert_eq!(up.field().m(), m + u);
            let before: Vec<u32> = base.vectors().iter().map(RankVector::rank).collect();
            let after: Vec<u32> = up.vectors().iter().map(RankVector::rank).collect();
            assert_eq!(before, after);
            assert_eq!(covering_radius_exhaustive(&up, CAP).unwrap(), rho, "({m},{n},{rho}) u={u}");
        }
    }
}

#[test]
fn embedding_maps_els_bijectively() {
    let f = Arc::new(Field::gf2(2).unwrap());
    let lines = els_enumerate(2, 1, 2);
    let mut images = Vec::new();
    for a in &lines {
        let code = Code::from_vectors(f.clone(), 2, &a.members(&f)).unwrap();
        let up = field_embed(&code, 1).unwrap();
        let mut spans: Vec<_> = up.vectors().iter().filter(|x| !x.is_zero()).map(unique_els_of).collect();
        spans.dedup();
        assert_eq!(spans.len(), 1);
        images.push(spans.pop().unwrap());
    }
    images.sort();
    images.dedup();
    assert_eq!(images.len(), els_enumerate(2, 1, 2).len());
}

#[test]
fn transpose_properties() {
    let f = Arc::new(Field::gf2(2).unwrap());
    let code = Code::explicit(f, 3, vec![0, 7, 19, 40, 63]).unwrap();
    let t = transpose_code(&code).unwrap();
    assert_eq!((t.field().m(), t.n()), (3, 2));
    let mut ranks: Vec<u32> = code.vectors().iter().map(RankVector::rank).collect();
    let mut tranks: Vec<u32> = t.vectors().iter().map(RankVector::rank).collect();
    ranks.sort();
    tranks.sort();
    assert_eq!(ranks, tranks);
    assert_eq!(covering_radius(&code, CAP).unwrap(), covering_radius(&t, CAP).unwrap());
    assert_eq!(transpose_code(&t).unwrap().words(), code.words());
}

#[test]
fn explicit_code_validation() {
    let f = Arc::new(Field::gf2(2).unwrap());
    assert!(Code::explicit(f.clone(), 2, vec![1, 1]).is_err());
    assert!(Code::explicit(f.clone(), 2, vec![16]).is_err());
    let whole = Code::explicit(f, 2, (0..16).collect()).unwrap();
    assert_eq!(covering_radius(&whole, CAP).unwrap(), 0);
}

#[test]
fn covering_radius_small_example() {
    let f = Arc::new(Field::gf2(2).unwrap());
    let a = f.alpha().value();
    let v = |x: &[u64]| RankVector::from_values(f.clone(), x).unwrap();
    let code = Code::from_vectors(f.clone(), 2, &[v(&[0, 0]), v(&[0, 1]), v(&[0, a])]).unwrap();
    assert_eq!(covering_radius(&code, CAP).unwrap(), 1);
    assert_eq!(naive_radius(&code), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn skip_vector_round_trip(mut idx in proptest::collection::vec(0u64..4096, 1..40)) {
        idx.sort_unstable();
        idx.dedup();
        let f = Arc::new(Field::gf2(4).unwrap());
        let code = Code::explicit(f.clone(), 3, idx.clone()).unwrap();
        let sv = SkipVector::encode(&code);
        let back = SkipVector::parse(&sv.to_string()).unwrap();
        prop_assert_eq!(back.indices().unwrap(), idx);
        let file = format_code_file(&code);
        let parsed = parse_code_file(&file, None).unwrap();
        prop_assert_eq!(parsed.words(), code.words());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linear_radius_matches_exhaustive(rows in proptest::collection::vec(proptest::collection::vec(0u64..4, 4), 1..3)) {
        let f = Arc::new(Field::gf2(2).unwrap());
        let rows: Vec<_> = rows.iter().map(|r| r.iter().map(|&x| f.element(x).unwrap()).collect()).collect();
        let code = match Code::linear(f, rows, CAP) {
            Ok(c) => c,
            Err(e) if e.to_string().contains("dependent") => return Err(TestCaseError::reject("dependent rows")),
            Err(e) => panic!("{e}"),
        };
        let fast = covering_radius(&code, CAP).unwrap();
        prop_assert_eq!(fast, covering_radius_exhaustive(&code, CAP).unwrap());
        prop_assert_eq!(fast, naive_radius(&code));
    }
}
