//! Lower and upper bounds on K_R(q^m, n, ρ), the minimum size of a code in
//! GF(q^m)^n with rank covering radius ρ, plus dimension bounds for linear
//! covering codes and the asymptotic exponents.
//!
//! Every bound that can be compared with a tabulated integer is evaluated in
//! exact integer/rational arithmetic; the few that involve logarithms go
//! through certified intervals ([`crate::real`]).
//!
//! Letters follow the usual table legend:
//! lower `a`–`g`, upper `A`–`H` (see [`BoundReport`]).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcombinatorics::{
    ball_volume, gaussian, intersection_ball_radius1, intersection_bruteforce, intersection_complementary,
    kq_constant, num_rank_u,
};
use crate::real::{certify, Interval};

/// Largest space the bound machinery will enumerate to obtain an I(ρ,d) value.
pub const DEFAULT_INTERSECTION_CAP: u64 = 1 << 24;

fn qpow(q: u32, e: u64) -> BigUint {
    BigUint::from(q).pow(u32::try_from(e).expect("exponent fits u32"))
}

fn int(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

fn to_uint(x: BigInt) -> BigUint {
    x.to_biguint().expect("non-negative")
}

/// Covering parameters (q, m, n, ρ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub q: u32,
    pub m: u32,
    pub n: u32,
    pub rho: u32,
}

impl Params {
    pub fn new(q: u32, m: u32, n: u32, rho: u32) -> Result<Params> {
        if !crate::finite_field::is_prime(q as u64) {
            return Err(Error::NotPrime(q as u64));
        }
        if m == 0 || n == 0 {
            return Err(Error::InvalidParams("m and n must be positive".into()));
        }
        if (m as u64) * (n as u64) > 4096 {
            return Err(Error::InvalidParams(format!("m·n = {} is too large", m * n)));
        }
        Ok(Params { q, m, n, rho })
    }

    /// K_R(q^m,n,ρ) = K_R(q^n,m,ρ): swap so that n ≤ m.
    pub fn normalized(self) -> (Params, bool) {
        if self.n > self.m {
            (Params { m: self.n, n: self.m, ..self }, true)
        } else {
            (self, false)
        }
    }

    /// 0 < ρ < n ≤ m.
    pub fn is_nontrivial(&self) -> bool {
        self.rho > 0 && self.rho < self.n && self.n <= self.m
    }

    pub fn space_size(&self) -> BigUint {
        qpow(self.q, self.m as u64 * self.n as u64)
    }

    pub fn volume(&self, r: u32) -> BigUint {
        ball_volume(self.q, self.m, self.n, r)
    }

    fn require_nontrivial(&self) -> Result<()> {
        if self.is_nontrivial() {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "need 0 < ρ < n ≤ m, got m={} n={} ρ={}",
                self.m, self.n, self.rho
            )))
        }
    }
}

// ---------------------------------------------------------------- packing

/// Largest code with minimum rank distance d (MRD codes attain it).
pub fn packing_max_cardinality(q: u32, m: u32, n: u32, d: u32) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::InvalidParams("minimum distance must be ≥ 1".into()));
    }
    if d > m.min(n) {
        return Ok(BigUint::one());
    }
    let a = qpow(q, m as u64 * (n - d + 1) as u64);
    let b = qpow(q, n as u64 * (m - d + 1) as u64);
    Ok(a.min(b))
}

// ----------------------------------------------------------- intersections

type IKey = (u32, u32, u32, u32, u32);

fn intersection_cache() -> &'static Mutex<HashMap<IKey, BigUint>> {
    static CACHE: OnceLock<Mutex<HashMap<IKey, BigUint>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Source of I(ρ,d) = |B_ρ(0) ∩ B_ρ(c)| with rk(c) = d.
///
/// Closed forms where they exist, otherwise a brute-force count when the
/// space fits under `cap`. Counted values are memoized process-wide.
#[derive(Clone, Copy, Debug)]
pub struct IntersectionOracle {
    pub cap: u64,
    pub brute_force: bool,
}

impl Default for IntersectionOracle {
    fn default() -> Self {
        IntersectionOracle { cap: DEFAULT_INTERSECTION_CAP, brute_force: true }
    }
}

impl IntersectionOracle {
    pub fn closed_form_only() -> Self {
        IntersectionOracle { cap: 0, brute_force: false }
    }

    pub fn with_cap(cap: u64) -> Self {
        IntersectionOracle { cap, brute_force: true }
    }

    pub fn get(&self, p: &Params, rho: u32, d: u32) -> Option<BigUint> {
        let Params { q, m, n, .. } = *p;
        if d == 0 {
            return Some(p.volume(rho));
        }
        if d > 2 * rho || d > m.min(n) {
            return Some(BigUint::zero());
        }
        if d == 2 * rho {
            return Some(intersection_complementary(q, m, n, d, rho));
        }
        if rho == 1 && d == 1 {
            return Some(intersection_ball_radius1(q, m, n, 1));
        }
        let key = (q, m, n, rho, d);
        if let Some(v) = intersection_cache().lock().unwrap().get(&key) {
            return Some(v.clone());
        }
        if !self.brute_force {
            return None;
        }
        let v = intersection_bruteforce(q, m, n, rho, rho, d, self.cap).ok()?;
        intersection_cache().lock().unwrap().insert(key, v.clone());
        Some(v)
    }
}

// ---------------------------------------------------------- lower bounds

/// Sphere covering bound: floor(q^{mn}/v(ρ)) + 1 (no perfect codes exist).
pub fn sphere_covering_lower(q: u32, m: u32, n: u32, rho: u32) -> Result<BigUint> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    Ok(p.space_size() / p.volume(rho) + 1u32)
}

/// K_R ≥ 3 for every nontrivial parameter set.
pub fn floor3_lower(q: u32, m: u32, n: u32, rho: u32) -> Result<BigUint> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    Ok(BigUint::from(3u32))
}

/// Bound for ρ ≤ n/2, using I(ρ,2ρ) = q^{ρ²}[2ρ ρ]:
/// (q^{mn} − q^{m(n−2ρ)+ρ²}[2ρ ρ]) / (v(ρ) − q^{ρ²}[2ρ ρ]), rounded up.
pub fn cohen_corollary_lower(q: u32, m: u32, n: u32, rho: u32) -> Result<Option<BigUint>> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    if 2 * p.rho > p.n {
        return Ok(None);
    }
    let i = intersection_complementary(p.q, p.m, p.n, 2 * p.rho, p.rho);
    let num = p.space_size() - qpow(p.q, (p.m * (p.n - 2 * p.rho)) as u64) * &i;
    let den = p.volume(p.rho) - i;
    Ok(Some(num.div_ceil(&den)))
}

/// One evaluation of the right-hand side of the generalized bound at level l.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohenLevel {
    pub l: u32,
    #[serde(with = "dec")]
    pub num: BigUint,
    #[serde(with = "dec")]
    pub den: BigUint,
}

impl CohenLevel {
    pub fn ceil(&self) -> BigUint {
        self.num.div_ceil(&self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohenEval {
    #[serde(with = "dec")]
    pub value: BigUint,
    /// Level the bound was taken at.
    pub l: u32,
    /// Levels evaluated, in order.
    pub levels: Vec<CohenLevel>,
    /// True when the selection rule wanted a higher level whose I value was unavailable.
    pub partial: bool,
}

fn cohen_rhs(p: &Params, l: u32, oracle: &IntersectionOracle) -> Option<CohenLevel> {
    let Params { q, m, n, rho } = *p;
    let i_top = oracle.get(p, rho, n - l)?;
    let mut num = int(&p.space_size()) - int(&(qpow(q, (l * m) as u64) * &i_top));
    let lo = 1.max((n + 1).saturating_sub(2 * rho));
    for a in lo..=l {
        let w = qpow(q, (a * m) as u64) - qpow(q, ((a - 1) * m) as u64);
        num += int(&(w * oracle.get(p, rho, n - a + 1)?));
    }
    let den = p.volume(rho) - i_top;
    Some(CohenLevel { l, num: to_uint(num), den })
}

/// The generalized bound with the level-selection rule: start at
/// l0 = max(0, n−2ρ) and move to l+1 while RHS(l) ≥ q^{(l+1)m}. Levels whose
/// intersection numbers are unavailable are dropped (sound: the bound at a
/// lower admissible level still holds).
pub fn cohen_generalized_lower(
    q: u32,
    m: u32,
    n: u32,
    rho: u32,
    oracle: &IntersectionOracle,
) -> Result<Option<CohenEval>> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    let l0 = p.n.saturating_sub(2 * p.rho);
    let Some(first) = cohen_rhs(&p, l0, oracle) else {
        return Ok(None);
    };
    let mut levels = vec![first];
    let mut partial = false;
    loop {
        let cur = levels.last().unwrap();
        let l = cur.l;
        if l + 1 > p.n - 1 {
            break;
        }
        let threshold = qpow(p.q, ((l + 1) * p.m) as u64);
        if cur.num < threshold * &cur.den {
            break;
        }
        match cohen_rhs(&p, l + 1, oracle) {
            Some(next) => levels.push(next),
            None => {
                partial = true;
                break;
            }
        }
    }
    let last = levels.last().unwrap();
    Ok(Some(CohenEval { value: last.ceil(), l: last.l, levels: levels.clone(), partial }))
}

/// The generalized bound at l = 0 only: (q^{mn} − I(ρ,n)) / (v(ρ) − I(ρ,n)).
pub fn cohen_l0_lower(q: u32, m: u32, n: u32, rho: u32, oracle: &IntersectionOracle) -> Result<Option<BigUint>> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    Ok(cohen_rhs(&p, 0, oracle).map(|lv| lv.ceil()))
}

fn excess_parts(p: &Params) -> (BigUint, BigUint) {
    let Params { q, m, n, rho } = *p;
    let a = (qpow(q, m as u64) - qpow(q, rho as u64)) * (gaussian(n, 1, q) - gaussian(rho, 1, q));
    let b = qpow(q, rho as u64) * gaussian(rho + 1, 1, q);
    (a, b)
}

/// ε = ⌈A/B⌉·B − A with A = (q^m − q^ρ)([n 1] − [ρ 1]), B = q^ρ[ρ+1 1].
pub fn excess_epsilon(q: u32, m: u32, n: u32, rho: u32) -> Result<BigUint> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    let (a, b) = excess_parts(&p);
    Ok(a.div_ceil(&b) * &b - a)
}

/// Excess bound q^{mn} / (v(ρ) − (ε/δ)N_ρ), δ = v(1) − q^{ρ−1}[ρ 1] − 1 + 2ε;
/// `None` when ε = 0.
pub fn excess_lower(q: u32, m: u32, n: u32, rho: u32) -> Result<Option<BigUint>> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    let eps = excess_epsilon(q, m, n, rho)?;
    if eps.is_zero() {
        return Ok(None);
    }
    let Params { q, m, n, rho } = p;
    let delta = int(&p.volume(1)) - int(&(qpow(q, (rho - 1) as u64) * gaussian(rho, 1, q))) - 1
        + 2 * int(&eps);
    let num = int(&p.space_size()) * &delta;
    let den: BigInt = int(&p.volume(rho)) * &delta - int(&eps) * int(&num_rank_u(q, m, n, rho));
    if !den.is_positive() {
        return Ok(None);
    }
    Ok(Some(to_uint(Integer::div_ceil(&num, &den))))
}

/// Coefficients of a·K² − b·K + c ≥ 0 (ρ = n−1 refinement of the excess
/// argument) and the resulting bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticBound {
    #[serde(with = "dec_int")]
    pub a: BigInt,
    #[serde(with = "dec_int")]
    pub b: BigInt,
    #[serde(with = "dec_int")]
    pub c: BigInt,
    #[serde(with = "dec")]
    pub value: BigUint,
}

impl QuadraticBound {
    pub fn holds_at(&self, k: &BigUint) -> bool {
        let k = int(k);
        &self.a * &k * &k - &self.b * &k + &self.c >= BigInt::zero()
    }
}

/// Smallest K ≥ max(sphere bound, 3) satisfying the quadratic for ρ = n−1.
pub fn excess_quadratic_lower(q: u32, m: u32, n: u32) -> Result<QuadraticBound> {
    if n < 2 {
        return Err(Error::InvalidParams("needs n ≥ 2".into()));
    }
    let p = Params::new(q, m, n, n - 1)?.normalized().0;
    p.require_nontrivial()?;
    let Params { q, m, n, .. } = p;
    let g_n = int(&gaussian(n, 1, q));
    let g_n1 = int(&gaussian(n - 1, 1, q));
    let qn1 = int(&qpow(q, (n - 1) as u64));
    let alpha = &qn1 * &g_n;
    let beta = &qn1 * (int(&qpow(q, m as u64)) + &g_n1);
    let dd = int(&p.volume(1)) - int(&qpow(q, (n - 2) as u64)) * &g_n1;
    let v1 = int(&p.volume(n - 1));
    let v2 = int(&p.volume(n - 2));
    let qq = int(&p.space_size());
    let a = &alpha * (&v1 + &v2);
    let b = &v1 * (BigInt::one() - &dd + &beta) + BigInt::from(2) * &alpha * &qq + &beta * &v2;
    let c = &qq * (BigInt::from(2) * &beta + 1 - &dd);
    let start = (p.space_size() / p.volume(n - 1) + 1u32).max(BigUint::from(3u32));
    let mut out = QuadraticBound { a, b, c, value: start.clone() };
    if !out.holds_at(&start) {
        // infeasible at start ⇒ K lies beyond the larger root
        let disc = &out.b * &out.b - BigInt::from(4) * &out.a * &out.c;
        let root = (&out.b + disc.max(BigInt::zero()).sqrt()) / (BigInt::from(2) * &out.a);
        let mut k = to_uint(root.max(BigInt::zero())).max(start);
        while !out.holds_at(&k) {
            k += 1u32;
        }
        out.value = k;
    }
    Ok(out)
}

// ---------------------------------------------------------- upper bounds

/// Trivial / Hamming-comparison bound q^{m(n−ρ)}.
pub fn trivial_upper(q: u32, m: u32, n: u32, rho: u32) -> Result<BigUint> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    Ok(qpow(p.q, (p.m * p.n.saturating_sub(p.rho)) as u64))
}

/// Embedded MRD codes: q^{max(m−ρ, n)(n−ρ)}.
pub fn mrd_embedding_upper(q: u32, m: u32, n: u32, rho: u32) -> Result<BigUint> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    Ok(qpow(p.q, ((p.m - p.rho).max(p.n) * (p.n - p.rho)) as u64))
}

/// Result of the product-of-partitions bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionBound {
    #[serde(with = "dec")]
    pub value: BigUint,
    pub exponent: u64,
    pub partition: Vec<(u32, u32)>,
}

/// q^{m(n−ρ) − Σ ρ_i(n_i−ρ_i)} over a partition {(n_i, ρ_i)} with
/// Σn_i = n, Σρ_i = ρ, n_i + ρ_i ≤ m. Without a partition the exponent is
/// minimized exactly by dynamic programming.
pub fn superadditive_upper(
    q: u32,
    m: u32,
    n: u32,
    rho: u32,
    partition: Option<&[(u32, u32)]>,
) -> Result<PartitionBound> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    let Params { q, m, n, rho } = p;
    let base = (m * (n - rho)) as u64;
    let (gain, parts) = match partition {
        Some(parts) => {
            let (sn, sr) = parts.iter().fold((0, 0), |(a, b), &(x, y)| (a + x, b + y));
            if sn != n || sr != rho {
                return Err(Error::InvalidParams(format!(
                    "partition sums to (n={sn}, ρ={sr}), expected ({n}, {rho})"
                )));
            }
            if let Some(&(x, y)) = parts.iter().find(|&&(x, y)| x == 0 || y > x || x + y > m) {
                return Err(Error::InvalidParams(format!("infeasible part (n_i={x}, ρ_i={y})")));
            }
            let gain: u64 = parts.iter().map(|&(x, y)| (y * (x - y)) as u64).sum();
            (gain, parts.to_vec())
        }
        None => best_partition(m, n, rho).ok_or_else(|| Error::InvalidParams("no feasible partition".into()))?,
    };
    let exponent = base - gain;
    Ok(PartitionBound { value: qpow(q, exponent), exponent, partition: parts })
}

fn best_partition(m: u32, n: u32, rho: u32) -> Option<(u64, Vec<(u32, u32)>)> {
    let (nn, rr) = (n as usize, rho as usize);
    // best[a][b]: max gain for total length a and radius b
    let mut best: Vec<Vec<Option<(u64, (u32, u32))>>> = vec![vec![None; rr + 1]; nn + 1];
    best[0][0] = Some((0, (0, 0)));
    for a in 1..=nn {
        for b in 0..=rr.min(a) {
            for x in 1..=a as u32 {
                for y in 0..=x.min(b as u32) {
                    if x + y > m {
                        continue;
                    }
                    if let Some((g, _)) = best[a - x as usize][b - y as usize] {
                        let cand = g + (y * (x - y)) as u64;
                        if best[a][b].map_or(true, |(h, _)| cand > h) {
                            best[a][b] = Some((cand, (x, y)));
                        }
                    }
                }
            }
        }
    }
    let gain = best[nn][rr]?.0;
    let mut parts = Vec::new();
    let (mut a, mut b) = (nn, rr);
    while a > 0 {
        let (x, y) = best[a][b].unwrap().1;
        parts.push((x, y));
        a -= x as usize;
        b -= y as usize;
    }
    parts.sort_unstable_by(|u, v| v.cmp(u));
    Some((gain, parts))
}

/// floor(ln Q / ln(Q/(Q − v(ρ)))) + 1, certified.
pub fn probabilistic_upper(q: u32, m: u32, n: u32, rho: u32) -> Result<BigUint> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    let qq = p.space_size();
    let rest = &qq - p.volume(p.rho);
    let floor = certify(
        128,
        |bits| {
            let ln_q = Interval::ln_uint(&qq, bits);
            let ln_r = Interval::ln_ratio(&qq, &rest, bits);
            ln_q.div(&ln_r)
        },
        |iv| iv.floor(),
    )?;
    Ok(to_uint(floor) + 1u32)
}

fn jsl_eval(qq: &BigUint, v: &BigUint, kv: &BigUint, mu: &BigUint) -> Result<BigUint> {
    // kv(1/μ − 1/v) + (Q/v)H_μ = kv(v−μ)/(μv) + Q·H_μ/v
    let rat_num = int(kv) * (int(v) - int(mu));
    let rat_den = int(mu) * int(v);
    let floor = certify(
        96,
        |bits| {
            let first = Interval::ratio(&rat_num, &rat_den, bits);
            let h = Interval::harmonic(mu, bits);
            let scale = Interval::ratio(&int(qq), &int(v), bits);
            Ok(first.add(&scale.mul(&h)))
        },
        |iv| iv.floor(),
    )?;
    Ok(to_uint(floor))
}

/// Staged greedy (JSL) bound started from a single codeword:
/// k_v = Q − v, j = ⌈v − v²/Q⌉, s = v − Σ_{i=n−ρ}^{ρ} q^{i(n−i)}[n i].
pub fn jsl_upper(q: u32, m: u32, n: u32, rho: u32) -> Result<BigUint> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    jsl_with_seed_length(&p, p.n)
}

/// The same bound with an (n, n−2ρ) MRD first stage: a = min(n, 2ρ),
/// k_v = Q − v·q^{m(n−a)}, j = ⌈v − v²q^{−ma}⌉, s over [a i].
pub fn jsl_upper_mrd_seeded(q: u32, m: u32, n: u32, rho: u32) -> Result<BigUint> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    jsl_with_seed_length(&p, p.n.min(2 * p.rho))
}

fn jsl_with_seed_length(p: &Params, a: u32) -> Result<BigUint> {
    let Params { q, m, n, rho } = *p;
    let qq = p.space_size();
    let v = p.volume(rho);
    let first = qpow(q, (m * (n - a)) as u64);
    let kv = &qq - &v * &first;
    let qa = qpow(q, (m * a) as u64);
    // j = ⌈v − v²/q^{ma}⌉ = ⌈(v·q^{ma} − v²)/q^{ma}⌉
    let j = (&v * &qa - &v * &v).div_ceil(&qa);
    let covered: BigUint = ((a - rho)..=rho)
        .map(|i| qpow(q, (i * (a - i)) as u64) * gaussian(a, i, q))
        .sum();
    let s = &v - covered.min(v.clone());
    let mu = s.min(j).max(BigUint::one());
    jsl_eval(&qq, &v, &kv, &mu)
}

/// (Q/v)(ln v + γ + 1/(2v + 1/3)), rounded down (K is an integer).
pub fn jsl_loose_upper(q: u32, m: u32, n: u32, rho: u32) -> Result<BigUint> {
    let p = Params::new(q, m, n, rho)?.normalized().0;
    p.require_nontrivial()?;
    let qq = int(&p.space_size());
    let v = int(&p.volume(p.rho));
    let floor = certify(
        96,
        |bits| {
            let lnv = Interval::ln_uint(&to_uint(v.clone()), bits);
            // 1/(2v + 1/3) = 3/(6v + 1)
            let tail = Interval::ratio(&BigInt::from(3), &(&v * 6 + 1), bits);
            let inner = lnv.add(&Interval::euler_gamma(bits)).add(&tail);
            Ok(Interval::ratio(&qq, &v, bits).mul(&inner))
        },
        |iv| iv.floor(),
    )?;
    Ok(to_uint(floor))
}

// ------------------------------------------------------- linear dimension

fn log_q_kq(q: u32, bits: u32) -> Interval {
    kq_constant(q, 1e-12).log_q(bits)
}

/// (k_lower, k_upper) for a linear code over GF(q^m) with covering radius ρ:
/// n − ρ − (ρ(n−ρ) − log_q K_q)/m < k ≤ n − ρ.
pub fn linear_dimension_bounds(q: u32, m: u32, n: u32, rho: u32) -> Result<(u32, u32)> {
    let p = Params::new(q, m, n, rho)?;
    if p.n > p.m {
        return Err(Error::InvalidParams("linear dimension bounds need n ≤ m".into()));
    }
    p.require_nontrivial()?;
    let upper = n - rho;
    let lower = certify(
        96,
        |bits| {
            let lhs = Interval::from_i64((rho * (n - rho)) as i64, bits).sub(&log_q_kq(q, bits));
            let frac = lhs.div(&Interval::from_i64(m as i64, bits))?;
            Ok(Interval::from_i64((n - rho) as i64, bits).sub(&frac))
        },
        |iv| iv.floor(),
    )?;
    let lower: BigInt = lower + 1;
    let lower = lower.max(BigInt::zero()).to_u32().unwrap_or(0).min(upper);
    Ok((lower, upper))
}

/// Code classes for which the dimension is known exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeClass {
    Any,
    Gabidulin,
    Els,
}

/// k = n − ρ when ρ ∈ {0, 1, n−1, n}, when ρ(n−ρ) ≤ m + log_q K_q, or for
/// generalized Gabidulin codes and ELS; otherwise unknown.
pub fn linear_dimension_exact(q: u32, m: u32, n: u32, rho: u32, class: CodeClass) -> Result<Option<u32>> {
    let p = Params::new(q, m, n, rho)?;
    if rho > n {
        return Err(Error::InvalidParams("ρ > n".into()));
    }
    if class != CodeClass::Any || rho <= 1 || rho + 1 >= n {
        return Ok(Some(n - rho));
    }
    let lhs = (rho * (n - rho)) as i64;
    let fits = certify(
        96,
        |bits| Ok(Interval::from_i64(p.m as i64, bits).add(&log_q_kq(q, bits))),
        |iv| {
            // m + log_q K_q is irrational, so the comparison always resolves
            let lhs = BigInt::from(lhs);
            if iv.gt_int(&lhs) {
                Some(true)
            } else if iv.lt_int(&lhs) {
                Some(false)
            } else {
                None
            }
        },
    )?;
    Ok(fits.then_some(n - rho))
}

/// Covering radius of a cartesian power of a Gabidulin code of length m over
/// GF(q^m) with minimum distance d: exactly d − 1.
pub fn gabidulin_cartesian_radius(d: u32) -> u32 {
    d.saturating_sub(1)
}

/// Smallest k with q^{mk} ≥ `lower` (a lower bound on K_R transfers to k).
pub fn linear_dimension_from_covering_lower(q: u32, m: u32, lower: &BigUint) -> u32 {
    let mut k = 0;
    while qpow(q, (m * k) as u64) < *lower {
        k += 1;
    }
    k
}

// ------------------------------------------------------------ asymptotics

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticKind {
    /// lim log_{q^{mn}} V_{δn} = δ(1 + b − bδ)
    Volume,
    /// k(r) = (1 − r)(1 − br)
    Covering,
}

pub fn asymptotic_exponents(b: f64, x: f64, kind: AsymptoticKind) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidParams(format!("b = {b} must be positive")));
    }
    match kind {
        AsymptoticKind::Volume => {
            if !(0.0..=1f64.min(1.0 / b)).contains(&x) {
                return Err(Error::OutOfRange(format!("δ = {x} outside [0, min(1, 1/b)]")));
            }
            Ok(x * (1.0 + b - b * x))
        }
        AsymptoticKind::Covering => {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::OutOfRange(format!("r = {x} outside [0, 1]")));
            }
            Ok((1.0 - x) * (1.0 - b * x))
        }
    }
}

/// log_{q^{mn}} of a positive count, as f64.
pub fn normalized_exponent(q: u32, m: u32, n: u32, value: &BigUint) -> f64 {
    let ln = Interval::ln_uint(value, 64).mid_f64();
    ln / ((m * n) as f64 * (q as f64).ln())
}

// ------------------------------------------------------------ the report

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    /// Table letter, if the bound has one.
    pub letter: Option<String>,
    /// Name of the operation that produced the value.
    pub name: String,
    pub kind: BoundKind,
    #[serde(with = "dec_opt")]
    pub value: Option<BigUint>,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl BoundEntry {
    fn new(letter: Option<&str>, name: &str, kind: BoundKind, value: Option<BigUint>) -> Self {
        BoundEntry {
            letter: letter.map(str::to_string),
            name: name.to_string(),
            kind,
            applicable: value.is_some(),
            value,
            note: None,
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Parameters as requested.
    pub params: Params,
    /// Parameters the bounds were evaluated at (n ≤ m).
    pub normalized: Params,
    pub transposed: bool,
    pub entries: Vec<BoundEntry>,
    #[serde(with = "dec")]
    pub best_lower: BigUint,
    #[serde(with = "dec")]
    pub best_upper: BigUint,
    pub best_lower_letters: Vec<String>,
    pub best_upper_letters: Vec<String>,
}

/// Which bounds [`best_bounds`] evaluates beyond the closed-form ones.
#[derive(Clone, Debug)]
pub struct BoundOptions {
    pub oracle: IntersectionOracle,
    /// Run the greedy construction (letter F) when the space has at most this many vectors.
    pub constructive_cap: u64,
    /// Budget (search nodes) for the exhaustive lower bound (letter g); 0 disables it.
    pub exhaustive_budget: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { oracle: IntersectionOracle::default(), constructive_cap: 0, exhaustive_budget: 0.0 }
    }
}

impl BoundOptions {
    /// Closed forms only: no enumeration of any kind.
    pub fn analytic() -> Self {
        BoundOptions { oracle: IntersectionOracle::closed_form_only(), ..Default::default() }
    }
}

const LOWER_ORDER: &[&str] = &["a", "e", "d", "c", "f", "b", "g"];
const UPPER_ORDER: &[&str] = &["B", "C", "D", "E", "A", "F", "G", "H"];

impl BoundReport {
    pub fn entry(&self, letter: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.letter.as_deref() == Some(letter))
    }

    pub fn value(&self, letter: &str) -> Option<&BigUint> {
        self.entry(letter).and_then(|e| e.value.as_ref())
    }

    pub fn is_exact(&self) -> bool {
        self.best_lower == self.best_upper
    }

    /// Preferred single letter for a compact cell.
    pub fn lower_letter(&self) -> Option<&str> {
        pick(&self.best_lower_letters, LOWER_ORDER)
    }

    pub fn upper_letter(&self) -> Option<&str> {
        pick(&self.best_upper_letters, UPPER_ORDER)
    }

    /// Compact table cell such as `e 11-16 F`.
    pub fn cell(&self) -> String {
        let l = self.lower_letter().unwrap_or("");
        let u = self.upper_letter().unwrap_or("");
        let range = if self.is_exact() {
            format_count(&self.best_lower)
        } else {
            format!("{}-{}", format_count(&self.best_lower), format_count(&self.best_upper))
        };
        [l, range.as_str(), u].iter().filter(|s| !s.is_empty()).cloned().collect::<Vec<_>>().join(" ")
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let _ = writeln!(s, "K_R({}^{}, {}, {})", p.q, p.m, p.n, p.rho);
        if self.transposed {
            let t = &self.normalized;
            let _ = writeln!(s, "  evaluated as K_R({}^{}, {}, {}) (transpose)", t.q, t.m, t.n, t.rho);
        }
        for e in &self.entries {
            let letter = e.letter.as_deref().unwrap_or("-");
            let kind = match e.kind {
                BoundKind::Lower => "lower",
                BoundKind::Upper => "upper",
            };
            let value = match &e.value {
                Some(v) => v.to_string(),
                None => "n/a".to_string(),
            };
            let _ = write!(s, "  {letter:>1} {kind:<5} {:<28} {value}", e.name);
            if let Some(note) = &e.note {
                let _ = write!(s, "  ({note})");
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "  best: {} ≤ K_R ≤ {}   [{} | {}]",
            self.best_lower,
            self.best_upper,
            self.best_lower_letters.join(","),
            self.best_upper_letters.join(",")
        );
        s
    }
}

fn pick<'a>(letters: &'a [String], order: &[&str]) -> Option<&'a str> {
    order
        .iter()
        .find_map(|o| letters.iter().find(|l| l.as_str() == *o))
        .or_else(|| letters.first())
        .map(String::as_str)
}

/// Decimal, except large powers of two which read better as 2^k.
pub fn format_count(v: &BigUint) -> String {
    let bits = v.bits();
    if bits > 13 && v.count_ones() == 1 {
        format!("2^{}", bits - 1)
    } else {
        v.to_string()
    }
}

/// Evaluates every applicable bound on K_R(q^m, n, ρ) and combines them.
pub fn best_bounds(q: u32, m: u32, n: u32, rho: u32, opts: &BoundOptions) -> Result<BoundReport> {
    let params = Params::new(q, m, n, rho)?;
    let (p, transposed) = params.normalized();
    let mut entries = Vec::new();
    use BoundKind::{Lower, Upper};

    if !p.is_nontrivial() {
        let v = if p.rho == 0 { p.space_size() } else { BigUint::one() };
        let why = if p.rho == 0 { "ρ = 0: the whole space" } else { "ρ ≥ n: a single codeword" };
        entries.push(BoundEntry::new(None, "trivial", Lower, Some(v.clone())).note(why));
        entries.push(BoundEntry::new(None, "trivial", Upper, Some(v)).note(why));
        return Ok(combine(params, p, transposed, entries));
    }
    let Params { q, m, n, rho } = p;

    entries.push(BoundEntry::new(Some("a"), "sphere_covering_lower", Lower, Some(sphere_covering_lower(q, m, n, rho)?)));
    entries.push(BoundEntry::new(Some("b"), "floor3_lower", Lower, Some(floor3_lower(q, m, n, rho)?)));
    let cohen = cohen_generalized_lower(q, m, n, rho, &opts.oracle)?;
    let c_entry = match &cohen {
        Some(ev) => {
            let e = BoundEntry::new(Some("c"), "cohen_generalized_lower", Lower, Some(ev.value.clone()));
            let e = e.note(format!("l = {}", ev.l));
            if ev.partial {
                e.note(format!("l = {}; higher levels need unavailable intersection numbers", ev.l))
            } else {
                e
            }
        }
        None => BoundEntry::new(Some("c"), "cohen_generalized_lower", Lower, None)
            .note("intersection numbers unavailable under the enumeration cap"),
    };
    entries.push(c_entry);
    let d = cohen_l0_lower(q, m, n, rho, &opts.oracle)?;
    let d_entry = BoundEntry::new(Some("d"), "cohen_l0_lower", Lower, d.clone());
    entries.push(if d.is_none() { d_entry.note("I(ρ,n) unavailable under the enumeration cap") } else { d_entry });
    let e = cohen_corollary_lower(q, m, n, rho)?;
    let e_entry = BoundEntry::new(Some("e"), "cohen_corollary_lower", Lower, e.clone());
    entries.push(if e.is_none() { e_entry.note("needs ρ ≤ n/2") } else { e_entry });
    let f = excess_lower(q, m, n, rho)?;
    let f_entry = BoundEntry::new(Some("f"), "excess_lower", Lower, f.clone());
    entries.push(if f.is_none() { f_entry.note("ε = 0") } else { f_entry });
    if rho + 1 == n {
        let quad = excess_quadratic_lower(q, m, n)?;
        entries.push(BoundEntry::new(None, "excess_quadratic_lower", Lower, Some(quad.value)));
    }
    if opts.exhaustive_budget > 0.0 {
        entries.push(exhaustive_entry(&p, &entries, opts));
    }

    entries.push(BoundEntry::new(Some("A"), "trivial_upper", Upper, Some(trivial_upper(q, m, n, rho)?)));
    entries.push(BoundEntry::new(Some("B"), "mrd_embedding_upper", Upper, Some(mrd_embedding_upper(q, m, n, rho)?)));
    let part = superadditive_upper(q, m, n, rho, None)?;
    let parts: Vec<String> = part.partition.iter().map(|(a, b)| format!("({a},{b})")).collect();
    entries.push(
        BoundEntry::new(Some("C"), "superadditive_upper", Upper, Some(part.value)).note(parts.join(" ")),
    );
    entries.push(BoundEntry::new(Some("D"), "probabilistic_upper", Upper, Some(probabilistic_upper(q, m, n, rho)?)));
    entries.push(BoundEntry::new(Some("E"), "jsl_upper", Upper, Some(jsl_upper(q, m, n, rho)?)));
    entries.push(BoundEntry::new(None, "jsl_loose_upper", Upper, Some(jsl_loose_upper(q, m, n, rho)?)));
    if opts.constructive_cap > 0 {
        entries.push(constructive_entry(&p, opts));
    }
    Ok(combine(params, p, transposed, entries))
}

/// [`best_bounds`] over many parameter sets, in parallel.
pub fn best_bounds_many(params: &[Params], opts: &BoundOptions) -> Vec<Result<BoundReport>> {
    crate::par::map(params, |p| best_bounds(p.q, p.m, p.n, p.rho, opts))
}

fn exhaustive_entry(p: &Params, entries: &[BoundEntry], opts: &BoundOptions) -> BoundEntry {
    let start = entries
        .iter()
        .filter_map(|e| e.value.clone())
        .max()
        .unwrap_or_else(BigUint::one);
    let mut best: Option<BigUint> = None;
    let mut k = start;
    let mut note = None;
    loop {
        let Some(kk) = k.to_usize() else { break };
        match crate::search::exhaustive_lower_bound(p.q, p.m, p.n, p.rho, kk, opts.exhaustive_budget) {
            Ok(true) => {
                best = Some(&k + 1u32);
                k += 1u32;
            }
            Ok(false) => break,
            Err(e) => {
                note = Some(e.to_string());
                break;
            }
        }
    }
    let e = BoundEntry::new(Some("g"), "exhaustive_lower_bound", BoundKind::Lower, best);
    match note {
        Some(n) if !e.applicable => e.note(n),
        _ => e,
    }
}

fn constructive_entry(p: &Params, opts: &BoundOptions) -> BoundEntry {
    let size = p.space_size();
    if size > BigUint::from(opts.constructive_cap) {
        return BoundEntry::new(Some("F"), "jsl_construct", BoundKind::Upper, None)
            .note("space exceeds the construction cap");
    }
    match crate::search::jsl_construct(p.q, p.m, p.n, p.rho, &crate::search::JslOptions::default()) {
        Ok(code) => BoundEntry::new(Some("F"), "jsl_construct", BoundKind::Upper, Some(BigUint::from(code.len()))),
        Err(e) => BoundEntry::new(Some("F"), "jsl_construct", BoundKind::Upper, None).note(e.to_string()),
    }
}

fn combine(params: Params, normalized: Params, transposed: bool, entries: Vec<BoundEntry>) -> BoundReport {
    let pick_best = |kind: BoundKind| {
        let vals = entries.iter().filter(|e| e.kind == kind).filter_map(|e| e.value.as_ref());
        let best = match kind {
            BoundKind::Lower => vals.max(),
            BoundKind::Upper => vals.min(),
        }
        .cloned()
        .unwrap_or_else(BigUint::one);
        let letters = entries
            .iter()
            .filter(|e| e.kind == kind && e.value.as_ref() == Some(&best))
            .filter_map(|e| e.letter.clone())
            .collect::<Vec<_>>();
        (best, letters)
    };
    let (best_lower, best_lower_letters) = pick_best(BoundKind::Lower);
    let (best_upper, best_upper_letters) = pick_best(BoundKind::Upper);
    BoundReport {
        params,
        normalized,
        transposed,
        entries,
        best_lower,
        best_upper,
        best_lower_letters,
        best_upper_letters,
    }
}

// --------------------------------------------------- linear-code table cells

/// One cell of the dimension table for linear covering codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCell {
    pub params: Params,
    /// Set when the dimension is known exactly from the closed conditions.
    pub exact: Option<u32>,
    pub lower: u32,
    pub upper: u32,
    pub lower_letters: Vec<String>,
    pub upper_letters: Vec<String>,
    /// Every contributing bound as (letter, k).
    pub values: Vec<(String, u32)>,
}

impl LinearCell {
    pub fn value(&self, letter: &str) -> Option<u32> {
        self.values.iter().find(|(l, _)| l == letter).map(|x| x.1)
    }

    pub fn cell(&self) -> String {
        if let Some(k) = self.exact {
            return k.to_string();
        }
        let l = pick(&self.lower_letters, &["h", "e", "a"]).unwrap_or("");
        let u = pick(&self.upper_letters, &["H", "A"]).unwrap_or("");
        let range =
            if self.lower == self.upper { self.lower.to_string() } else { format!("{}-{}", self.lower, self.upper) };
        [l, range.as_str(), u].iter().filter(|s| !s.is_empty()).cloned().collect::<Vec<_>>().join(" ")
    }
}

/// Dimension bounds combined from the closed conditions, the K_R lower bound
/// (letter e) and, when supplied, brute-force / explicit-code results
/// (letters h / H).
pub fn linear_cell(
    q: u32,
    m: u32,
    n: u32,
    rho: u32,
    brute_force_lower: Option<u32>,
    explicit_upper: Option<u32>,
) -> Result<LinearCell> {
    let params = Params::new(q, m, n, rho)?;
    if let Some(k) = linear_dimension_exact(q, m, n, rho, CodeClass::Any)? {
        return Ok(LinearCell {
            params,
            exact: Some(k),
            lower: k,
            upper: k,
            lower_letters: vec![],
            upper_letters: vec![],
            values: vec![],
        });
    }
    let (a, upper_a) = linear_dimension_bounds(q, m, n, rho)?;
    let mut lows = vec![("a", a)];
    if let Some(e) = cohen_corollary_lower(q, m, n, rho)? {
        lows.push(("e", linear_dimension_from_covering_lower(q, m, &e)));
    }
    if let Some(h) = brute_force_lower {
        lows.push(("h", h));
    }
    let mut ups = vec![("A", upper_a)];
    if let Some(h) = explicit_upper {
        ups.push(("H", h));
    }
    let lower = lows.iter().map(|x| x.1).max().unwrap();
    let upper = ups.iter().map(|x| x.1).min().unwrap();
    Ok(LinearCell {
        params,
        exact: None,
        lower,
        upper,
        lower_letters: lows.iter().filter(|x| x.1 == lower).map(|x| x.0.to_string()).collect(),
        upper_letters: ups.iter().filter(|x| x.1 == upper).map(|x| x.0.to_string()).collect(),
        values: lows.iter().chain(&ups).map(|(l, k)| (l.to_string(), *k)).collect(),
    })
}

// ------------------------------------------------------------- serde glue

mod dec {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

mod dec_int {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

mod dec_opt {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| s.parse().map_err(D::Error::custom)).transpose()
    }
}
