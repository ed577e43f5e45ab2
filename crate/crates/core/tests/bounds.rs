use std::path::PathBuf;

use num_bigint::BigUint;
use rankcover::bounds::{
    asymptotic_exponents, best_bounds, excess_quadratic_lower, jsl_loose_upper, linear_cell, linear_dimension_bounds,
    linear_dimension_exact, mrd_embedding_upper, normalized_exponent, packing_max_cardinality, sphere_covering_lower,
    trivial_upper, AsymptoticKind, BoundOptions, CodeClass, Params,
};

fn golden(name: &str) -> Vec<Vec<String>> {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    std::fs::read_to_string(p)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn u(n: u128) -> BigUint {
    BigUint::from(n)
}

/// Ball volume by the textbook sum with machine integers.
fn volume_u128(m: u32, n: u32, r: u32) -> u128 {
    let q = 2u128;
    let mut total = 0u128;
    for k in 0..=r {
        let mut num = 1u128;
        let mut den = 1u128;
        let mut alpha = 1u128;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
            alpha *= q.pow(m) - q.pow(i);
        }
        total += num / den * alpha;
    }
    total
}

#[test]
fn sphere_covering_matches_machine_arithmetic() {
    for m in 1..=7 {
        for n in 1..=m {
            for rho in 1..n {
                let big = 2u128.pow(m * n);
                assert_eq!(sphere_covering_lower(2, m, n, rho).unwrap(), u(big / volume_u128(m, n, rho) + 1));
            }
        }
    }
    assert_eq!(sphere_covering_lower(2, 4, 4, 1).unwrap(), u(290));
}

#[test]
fn simple_uppers() {
    assert_eq!(trivial_upper(2, 5, 4, 2).unwrap(), u(1 << 10));
    assert_eq!(mrd_embedding_upper(2, 5, 4, 2).unwrap(), u(256));
    // evaluated on the transposed parameters (5, 3, 2)
    assert_eq!(mrd_embedding_upper(2, 3, 5, 2).unwrap(), u(8));
    assert_eq!(packing_max_cardinality(2, 4, 4, 3).unwrap(), u(256));
}

/// Printed values that disagree with the exact evaluation of the same bound.
const KNOWN_MISPRINTS: &[(u32, u32, u32, &str, &str)] = &[(7, 6, 2, "f", "42229"), (7, 7, 1, "e", "34901004402")];

#[test]
fn table_one_analytic_entries() {
    let opts = BoundOptions::default();
    let mut misprints = Vec::new();
    for row in golden("table1_golden.csv") {
        let (m, n, rho): (u32, u32, u32) = (row[0].parse().unwrap(), row[1].parse().unwrap(), row[2].parse().unwrap());
        let rep = best_bounds(2, m, n, rho, &opts).unwrap();
        assert!(rep.best_lower <= rep.best_upper);
        for (letter, printed) in [(&row[3], &row[4]), (&row[5], &row[6])] {
            if !"abcdefABCDE".contains(letter.as_str()) || letter.is_empty() {
                continue;
            }
            let ours = rep.value(letter).unwrap_or_else(|| panic!("({m},{n},{rho}) lacks {letter}")).to_string();
            if &ours != printed {
                misprints.push((m, n, rho, letter.clone(), printed.clone(), ours));
            }
        }
    }
    let found: Vec<_> = misprints.iter().map(|(m, n, r, l, p, _)| (*m, *n, *r, l.as_str(), p.as_str())).collect();
    assert_eq!(found, KNOWN_MISPRINTS);
    // a dropped digit, and a floor where every other entry takes the ceiling
    assert_eq!(misprints[0].5, "422285");
    assert_eq!(misprints[1].5, "34901004403");
}

#[test]
fn table_one_spot_values() {
    let opts = BoundOptions::analytic();
    let rep = best_bounds(2, 4, 4, 1, &opts).unwrap();
    assert_eq!(rep.best_lower, u(293));
    let rep = best_bounds(2, 5, 4, 2, &opts).unwrap();
    assert_eq!(rep.best_upper, u(256));
    let rep = best_bounds(2, 5, 3, 1, &opts).unwrap();
    assert_eq!(rep.best_lower, u(154));
    let rep = best_bounds(2, 5, 5, 2, &opts).unwrap();
    assert_eq!(rep.best_upper, u(2881));
}

#[test]
fn lower_never_exceeds_upper_and_transpose_symmetry() {
    let opts = BoundOptions::analytic();
    for q in [2, 3] {
        for m in 1..=6 {
            for n in 1..=6 {
                for rho in 0..=m.min(n) {
                    let a = best_bounds(q, m, n, rho, &opts).unwrap();
                    let b = best_bounds(q, n, m, rho, &opts).unwrap();
                    assert!(a.best_lower <= a.best_upper, "({q},{m},{n},{rho})");
                    assert_eq!((&a.best_lower, &a.best_upper), (&b.best_lower, &b.best_upper));
                }
            }
        }
    }
}

#[test]
fn bounds_monotone_in_radius() {
    for m in 2..=7 {
        for n in 2..=m {
            for rho in 1..n - 1 {
                assert!(sphere_covering_lower(2, m, n, rho + 1).unwrap() <= sphere_covering_lower(2, m, n, rho).unwrap());
                assert!(trivial_upper(2, m, n, rho + 1).unwrap() <= trivial_upper(2, m, n, rho).unwrap());
                let r = Params::new(2, m, n, rho).unwrap();
                assert!(r.volume(rho) < r.volume(rho + 1));
            }
        }
    }
}

#[test]
fn quadratic_bound_is_consistent() {
    for m in 2..=7 {
        let qb = excess_quadratic_lower(2, m, m).unwrap();
        let start = sphere_covering_lower(2, m, m, m - 1).unwrap().max(u(3));
        assert!(qb.value >= start && qb.holds_at(&qb.value));
        if qb.value > start {
            assert!(!qb.holds_at(&(&qb.value - 1u32)));
        }
    }
}

#[test]
fn table_two() {
    for row in golden("table2_golden.csv") {
        let (m, n, rho): (u32, u32, u32) = (row[0].parse().unwrap(), row[1].parse().unwrap(), row[2].parse().unwrap());
        if rho > 0 && rho < n {
            let (lo, hi) = linear_dimension_bounds(2, m, n, rho).unwrap();
            assert!(lo <= hi && hi == n - rho);
        }
        if row[3].is_empty() {
            let k: u32 = row[4].parse().unwrap();
            assert_eq!(linear_dimension_exact(2, m, n, rho, CodeClass::Any).unwrap(), Some(k), "({m},{n},{rho})");
        }
    }
    assert_eq!(linear_dimension_exact(2, 6, 4, 2, CodeClass::Any).unwrap(), Some(2));
    assert_eq!(linear_dimension_exact(2, 8, 5, 3, CodeClass::Any).unwrap(), Some(2));
    assert_eq!(linear_dimension_exact(2, 4, 4, 2, CodeClass::Any).unwrap(), None);
    assert_eq!(linear_dimension_exact(2, 4, 4, 2, CodeClass::Gabidulin).unwrap(), Some(2));
    let cell = linear_cell(2, 4, 4, 2, Some(2), None).unwrap();
    assert_eq!((cell.lower, cell.upper), (2, 2));
    assert_eq!(cell.cell(), "h 2 A");
}

#[test]
fn asymptotic_exponents_converge() {
    for r in [0.2, 0.4] {
        let target = asymptotic_exponents(1.0, r, AsymptoticKind::Covering).unwrap();
        let mut prev_gap = f64::INFINITY;
        for size in [10u32, 15, 20] {
            let rho = (r * size as f64).round() as u32;
            let lo = normalized_exponent(2, size, size, &sphere_covering_lower(2, size, size, rho).unwrap());
            let hi = normalized_exponent(2, size, size, &jsl_loose_upper(2, size, size, rho).unwrap());
            let gap = (lo - target).abs().max((hi - target).abs());
            assert!(gap < prev_gap, "r={r} size={size}");
            prev_gap = gap;
        }
        assert!(prev_gap < 0.1);
    }
    assert!(asymptotic_exponents(1.0, 1.5, AsymptoticKind::Covering).is_err());
    assert!(asymptotic_exponents(0.0, 0.5, AsymptoticKind::Volume).is_err());
}
