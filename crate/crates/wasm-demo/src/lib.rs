//! Three browser-side operations over the core library; every function
//! returns a JSON string (errors as `{"error": ...}`).

use std::sync::Arc;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use rankcover::bounds::{best_bounds, BoundOptions, IntersectionOracle};
use rankcover::codes::{covering_radius_exhaustive, min_rank_distance, SkipVector};
use rankcover::qcombinatorics as qc;
use rankcover::Field;

/// Enumeration limit in the browser (single thread).
const CAP: u64 = 1 << 20;

fn wrap(r: Result<Value, rankcover::Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Every bound on K_R(q^m, n, ρ) plus the best pair.
#[wasm_bindgen]
pub fn bound_report(q: u32, m: u32, n: u32, rho: u32) -> String {
    let opts = BoundOptions { oracle: IntersectionOracle::with_cap(CAP), ..Default::default() };
    wrap(best_bounds(q, m, n, rho, &opts).map(|r| {
        let mut v = serde_json::to_value(&r).expect("serializable");
        v["cell"] = json!(r.cell());
        v["text"] = json!(r.to_text());
        v
    }))
}

/// Ball volume, rank distribution and |B_r(0) ∩ B_s(c)| for every rk(c) = d.
#[wasm_bindgen]
pub fn ball_profile(q: u32, m: u32, n: u32, r: u32, s: u32) -> String {
    wrap((|| {
        if !rankcover::finite_field::is_prime(q as u64) {
            return Err(rankcover::Error::NotPrime(q as u64));
        }
        let volume = qc::ball_volume(q, m, n, r);
        let counts: Vec<String> = (0..=m.min(n)).map(|u| qc::num_rank_u(q, m, n, u).to_string()).collect();
        let mut inter = Vec::new();
        for d in 0..=m.min(n) {
            let value = if d > r + s {
                Some(0u32.into())
            } else if d > 0 && r + s == d {
                Some(qc::intersection_complementary(q, m, n, d, r))
            } else {
                qc::intersection_bruteforce(q, m, n, r, s, d, CAP).ok()
            };
            inter.push(json!({ "d": d, "count": value.map(|v| v.to_string()) }));
        }
        let b = qc::volume_bounds(q, m, n, r);
        Ok(json!({
            "volume": volume.to_string(),
            "rank_counts": counts,
            "lower": b.lower.to_string(),
            "upper": b.upper,
            "intersections": inter,
        }))
    })())
}

/// Decodes a skip-vector code and measures its covering radius.
#[wasm_bindgen]
pub fn verify_code(field: &str, n: u32, skip_vector: &str, rho: u32) -> String {
    wrap((|| {
        let f = Arc::new(Field::from_spec(field)?);
        let code = SkipVector::parse(skip_vector)?.decode(f, n)?;
        let radius = covering_radius_exhaustive(&code, CAP)?;
        Ok(json!({
            "size": code.len(),
            "indices": code.words(),
            "covering_radius": radius,
            "min_distance": min_rank_distance(&code).ok(),
            "pass": radius <= rho,
        }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shapes() {
        let v: Value = serde_json::from_str(&bound_report(2, 2, 2, 1)).unwrap();
        assert_eq!(v["best_lower"], "3");
        let v: Value = serde_json::from_str(&ball_profile(2, 2, 2, 1, 1)).unwrap();
        assert_eq!(v["volume"], "10");
        let v: Value = serde_json::from_str(&verify_code("gf(2^2)", 2, "0^3", 1)).unwrap();
        assert_eq!(v["pass"], true);
        let v: Value = serde_json::from_str(&verify_code("gf(2^2)", 2, "x^2", 1)).unwrap();
        assert!(v["error"].is_string());
    }
}
