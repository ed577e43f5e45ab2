//! Exact q-combinatorics: α(m,u), Gaussian binomials, rank distributions,
//! ball volumes, the constant K_q, and ball intersections.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::par;
use crate::rank_space::{RankVector, Space};
use crate::real::Interval;

fn qpow(q: u32, e: u64) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// α(m,u) = ∏_{i<u} (q^m − q^i); zero when u > m.
pub fn alpha(m: u32, u: u32, q: u32) -> BigUint {
    if u > m {
        return BigUint::zero();
    }
    let qm = qpow(q, m as u64);
    (0..u).fold(BigUint::one(), |acc, i| acc * (&qm - qpow(q, i as u64)))
}

/// Gaussian binomial [n u]_q: number of u-dimensional subspaces of GF(q)^n.
pub fn gaussian(n: u32, u: u32, q: u32) -> BigUint {
    if u > n {
        return BigUint::zero();
    }
    alpha(n, u, q) / alpha(u, u, q)
}

/// N_u: number of vectors of rank u in GF(q^m)^n.
pub fn num_rank_u(q: u32, m: u32, n: u32, u: u32) -> BigUint {
    if u > m.min(n) {
        return BigUint::zero();
    }
    gaussian(n, u, q) * alpha(m, u, q)
}

/// V_r: volume of a ball of rank radius r (saturates at q^{mn}).
pub fn ball_volume(q: u32, m: u32, n: u32, r: u32) -> BigUint {
    (0..=r.min(m).min(n)).map(|u| num_rank_u(q, m, n, u)).sum()
}

/// Truncated-product enclosure of K_q = ∏_{j≥1} (1 − q^{-j}).
#[derive(Clone, Debug)]
pub struct KqApprox {
    pub q: u32,
    pub value: f64,
    pub error_bound: f64,
    pub terms: u32,
    // K_q ∈ [lower_num/den, upper_num/den]
    lower_num: BigUint,
    upper_num: BigUint,
    den: BigUint,
}

impl KqApprox {
    pub fn lower(&self) -> (&BigUint, &BigUint) {
        (&self.lower_num, &self.den)
    }

    pub fn upper(&self) -> (&BigUint, &BigUint) {
        (&self.upper_num, &self.den)
    }

    /// Certified enclosure of ln K_q.
    pub fn ln(&self, bits: u32) -> Interval {
        let lo = Interval::ln_ratio(&self.lower_num, &self.den, bits);
        let hi = Interval::ln_ratio(&self.upper_num, &self.den, bits);
        lo.hull(&hi)
    }

    /// Certified enclosure of log_q K_q.
    pub fn log_q(&self, bits: u32) -> Interval {
        let lnq = Interval::ln_uint(&BigUint::from(self.q), bits);
        self.ln(bits).div(&lnq).expect("ln q > 0")
    }
}

pub fn kq_constant(q: u32, precision: f64) -> KqApprox {
    assert!(q >= 2 && precision > 0.0);
    // tail: K_q ≥ P_J (1 − Σ_{j>J} q^{-j}) = P_J (1 − 1/(q^J (q−1)))
    let mut terms = 1u32;
    while 1.0 / ((q as f64).powi(terms as i32) * (q as f64 - 1.0)) > precision {
        terms += 1;
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 1..=terms {
        let qj = qpow(q, j as u64);
        num *= &qj - 1u32;
        den *= qj;
    }
    let tail_den = qpow(q, terms as u64) * (q - 1);
    let lower_num = &num * (&tail_den - 1u32);
    let upper_num = &num * &tail_den;
    let den = den * tail_den;
    let lo = ratio_f64(&lower_num, &den);
    let hi = ratio_f64(&upper_num, &den);
    KqApprox {
        q,
        value: (lo + hi) / 2.0,
        error_bound: hi - lo + f64::EPSILON,
        terms,
        lower_num,
        upper_num,
        den,
    }
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    let shift = 80usize;
    let scaled = (num << shift) / den;
    scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(shift as i32)
}

/// q^{r(m+n−r)} ≤ V_r < K_q^{-1} q^{r(m+n−r)}.
#[derive(Clone, Debug)]
pub struct VolumeBounds {
    pub lower: BigUint,
    pub upper: f64,
    kq: KqApprox,
}

impl VolumeBounds {
    /// Certified check lower ≤ v < K_q^{-1}·lower, using an upper rational bound on K_q.
    pub fn brackets(&self, v: &BigUint) -> bool {
        let (kn, kd) = self.kq.upper();
        &self.lower <= v && v * kn < &self.lower * kd
    }
}

pub fn volume_bounds(q: u32, m: u32, n: u32, r: u32) -> VolumeBounds {
    let r = r.min(m).min(n);
    let e = r as u64 * (m as u64 + n as u64 - r as u64);
    let lower = qpow(q, e);
    let kq = kq_constant(q, 1e-12);
    let upper = ratio_f64(&lower, &BigUint::one()) / kq.value;
    VolumeBounds { lower, upper, kq }
}

/// |B_r(c1) ∩ B_1(c2)| for d(c1,c2) = r ≥ 1 (closed form).
pub fn intersection_ball_radius1(q: u32, m: u32, n: u32, r: u32) -> BigUint {
    assert!(r >= 1 && r <= m.min(n), "needs 1 ≤ r ≤ min(m,n)");
    BigUint::one()
        + (qpow(q, m as u64) - qpow(q, r as u64)) * gaussian(r, 1, q)
        + (qpow(q, r as u64) - 1u32) * gaussian(n, 1, q)
}

/// |B_s(c1) ∩ B_{r−s}(c2)| for d(c1,c2) = r (closed form).
pub fn intersection_complementary(q: u32, m: u32, n: u32, r: u32, s: u32) -> BigUint {
    assert!(s <= r && r <= m.min(n), "needs 0 ≤ s ≤ r ≤ min(m,n)");
    qpow(q, s as u64 * (r - s) as u64) * gaussian(r, s, q)
}

/// The canonical rank-d vector (1, α, …, α^{d−1}, 0, …, 0) as a packed index.
/// For i < m, α^i is the basis polynomial x^i, i.e. the integer q^i.
pub fn canonical_center(space: &Space, d: u32) -> Result<u64> {
    if d > space.m().min(space.n()) {
        return Err(Error::InvalidParams(format!(
            "no vector of rank {d} in GF({}^{})^{}",
            space.q(),
            space.m(),
            space.n()
        )));
    }
    let coords: Vec<u64> = (0..space.n())
        .map(|j| if j < d { (space.q() as u64).pow(j) } else { 0 })
        .collect();
    Ok(space.from_coords(&coords))
}

/// |B_r(c1) ∩ B_s(c2)| by enumeration of the whole space.
pub fn intersection_count(space: &Space, c1: u64, c2: u64, r: u32, s: u32, cap: u64) -> Result<u64> {
    space.check_cap(cap)?;
    let sp = *space;
    Ok(par::count(sp.size(), move |x| sp.distance(x, c1) <= r && sp.distance(x, c2) <= s))
}

/// I(q^m, n; r, s; d) = |B_r(0) ∩ B_s(c)| with c the canonical rank-d vector.
pub fn intersection_bruteforce(q: u32, m: u32, n: u32, r: u32, s: u32, d: u32, cap: u64) -> Result<BigUint> {
    let space = Space::new(q, m, n)?;
    if d > m.min(n) {
        return Err(Error::InvalidParams(format!("distance {d} exceeds min(m,n)")));
    }
    if d > r + s {
        return Ok(BigUint::zero());
    }
    let c = canonical_center(&space, d)?;
    Ok(BigUint::from(intersection_count(&space, 0, c, r, s, cap)?))
}

/// All vectors within rank distance r of the center.
pub fn ball_enumerate(center: &RankVector, r: u32, cap: u64) -> Result<Vec<RankVector>> {
    let space = Space::of_field(center.field(), center.n() as u32)?;
    space.check_cap(cap)?;
    let c = center.index()?;
    (0..space.size())
        .filter(|&x| space.distance(x, c) <= r)
        .map(|x| RankVector::from_index(center.field().clone(), space.n(), x))
        .collect()
}
