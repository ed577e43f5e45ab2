//! Certified enclosures of real numbers on a binary fixed-point grid.
//!
//! An [`Interval`] holds integers `lo ≤ hi` meaning `[lo, hi]·2^-bits`; every
//! operation rounds outward, so the true value is always inside. Used where a
//! bound needs the floor or ceiling of an expression with logarithms.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Precision ceiling for adaptive evaluation.
pub const MAX_BITS: u32 = 4096;

const GUARD: u32 = 24;

/// Euler–Mascheroni constant, 50 decimals (truncated, so γ ∈ [G, G+1]·10^-50).
const GAMMA_DIGITS: &str = "57721566490153286060651209008240243104215933593992";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn big(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

impl Interval {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn from_int(n: &BigInt, bits: u32) -> Interval {
        let v = n << bits as usize;
        Interval { lo: v.clone(), hi: v, bits }
    }

    pub fn from_uint(n: &BigUint, bits: u32) -> Interval {
        Self::from_int(&big(n), bits)
    }

    pub fn from_i64(n: i64, bits: u32) -> Interval {
        Self::from_int(&BigInt::from(n), bits)
    }

    /// num/den (den ≠ 0), rounded outward.
    pub fn ratio(num: &BigInt, den: &BigInt, bits: u32) -> Interval {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let scaled = num << bits as usize;
        Interval { lo: scaled.div_floor(&den), hi: div_ceil(&scaled, &den), bits }
    }

    pub fn ratio_u(num: &BigUint, den: &BigUint, bits: u32) -> Interval {
        Self::ratio(&big(num), &big(den), bits)
    }

    fn check(&self, other: &Interval) {
        assert_eq!(self.bits, other.bits, "interval precisions differ");
    }

    pub fn add(&self, o: &Interval) -> Interval {
        self.check(o);
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, bits: self.bits }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.check(o);
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo, bits: self.bits }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, bits: self.bits }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        self.check(o);
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = p.iter().min().expect("four products");
        let max = p.iter().max().expect("four products");
        let s = pow2(self.bits);
        Interval { lo: min.div_floor(&s), hi: div_ceil(max, &s), bits: self.bits }
    }

    /// Quotient; the divisor must not contain zero.
    pub fn div(&self, o: &Interval) -> Result<Interval> {
        self.check(o);
        if o.contains_zero() {
            return Err(Error::Precision(self.bits));
        }
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let (a, b) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
                let scaled = a << self.bits as usize;
                let f = scaled.div_floor(&b);
                let c = div_ceil(&scaled, &b);
                lo = Some(lo.map_or(f.clone(), |l| l.min(f)));
                hi = Some(hi.map_or(c.clone(), |h| h.max(c)));
            }
        }
        Ok(Interval { lo: lo.unwrap(), hi: hi.unwrap(), bits: self.bits })
    }

    /// Smallest interval containing both.
    pub fn hull(&self, o: &Interval) -> Interval {
        self.check(o);
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()), bits: self.bits }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Width in units of the last place.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// Certified floor, if the enclosure does not straddle an integer.
    pub fn floor(&self) -> Option<BigInt> {
        let s = pow2(self.bits);
        let a = self.lo.div_floor(&s);
        let b = self.hi.div_floor(&s);
        (a == b).then_some(a)
    }

    pub fn ceil(&self) -> Option<BigInt> {
        let s = pow2(self.bits);
        let a = div_ceil(&self.lo, &s);
        let b = div_ceil(&self.hi, &s);
        (a == b).then_some(a)
    }

    /// True iff the enclosed value is certainly below the integer n.
    pub fn lt_int(&self, n: &BigInt) -> bool {
        self.hi < (n << self.bits as usize)
    }

    pub fn gt_int(&self, n: &BigInt) -> bool {
        self.lo > (n << self.bits as usize)
    }

    pub fn lo_f64(&self) -> f64 {
        scaled_to_f64(&self.lo, self.bits)
    }

    pub fn hi_f64(&self) -> f64 {
        scaled_to_f64(&self.hi, self.bits)
    }

    pub fn mid_f64(&self) -> f64 {
        scaled_to_f64(&(&self.lo + &self.hi), self.bits + 1)
    }

    /// Natural logarithm of a positive rational num/den.
    pub fn ln_ratio(num: &BigUint, den: &BigUint, bits: u32) -> Interval {
        assert!(!num.is_zero() && !den.is_zero(), "logarithm of zero");
        let w = bits + GUARD;
        let e = num.bits() as i64 - den.bits() as i64;
        // y' = y / 2^e lies in (1/2, 2)
        let (n, d) = if e >= 0 {
            (big(num), big(den) << e as usize)
        } else {
            (big(num) << (-e) as usize, big(den))
        };
        let at = atanh_scaled(&(&n - &d), &(&n + &d), w);
        let mut r = Interval { lo: at.lo * 2, hi: at.hi * 2, bits: w };
        if e != 0 {
            let l2 = ln2_scaled(w);
            let ee = BigInt::from(e);
            let (a, b) = (&l2.lo * &ee, &l2.hi * &ee);
            r = r.add(&Interval { lo: a.clone().min(b.clone()), hi: a.max(b), bits: w });
        }
        r.round_to(bits)
    }

    pub fn ln_uint(n: &BigUint, bits: u32) -> Interval {
        Self::ln_ratio(n, &BigUint::one(), bits)
    }

    pub fn ln2(bits: u32) -> Interval {
        ln2_scaled(bits + GUARD).round_to(bits)
    }

    pub fn euler_gamma(bits: u32) -> Interval {
        if bits <= 150 {
            let g: BigInt = GAMMA_DIGITS.parse().expect("constant digits");
            let den = BigInt::from(10u32).pow(GAMMA_DIGITS.len() as u32);
            let lo = Self::ratio(&g, &den, bits);
            let hi = Self::ratio(&(g + 1), &den, bits);
            return Interval { lo: lo.lo, hi: hi.hi, bits };
        }
        gamma_brent_mcmillan(bits + GUARD).round_to(bits)
    }

    /// Harmonic number H_k, certified. Direct outward-rounded summation up to
    /// 10^6 terms, Euler–Maclaurin enclosure beyond.
    pub fn harmonic(k: &BigUint, bits: u32) -> Interval {
        if k.is_zero() {
            return Self::from_i64(0, bits);
        }
        if let Some(small) = k.to_u64().filter(|&s| s <= 1_000_000) {
            let w = bits + GUARD + 24;
            let one = pow2(w);
            let mut lo = BigInt::zero();
            let mut hi = BigInt::zero();
            for i in 1..=small {
                let d = BigInt::from(i);
                lo += one.div_floor(&d);
                hi += div_ceil(&one, &d);
            }
            return Interval { lo, hi, bits: w }.round_to(bits);
        }
        // ln k + γ + 1/(2k) − 1/(12k²) < H_k < ln k + γ + 1/(2k)
        let w = bits + GUARD;
        let kk = big(k);
        let base = Self::ln_uint(k, w)
            .add(&Self::euler_gamma(w))
            .add(&Self::ratio(&BigInt::one(), &(&kk * 2), w));
        let corr = Self::ratio(&BigInt::one(), &(&kk * &kk * 12), w);
        Interval { lo: base.lo - corr.hi, hi: base.hi, bits: w }.round_to(bits)
    }

    /// Re-expresses at a coarser grid, rounding outward.
    pub fn round_to(&self, bits: u32) -> Interval {
        if bits >= self.bits {
            let sh = (bits - self.bits) as usize;
            return Interval { lo: &self.lo << sh, hi: &self.hi << sh, bits };
        }
        let s = pow2(self.bits - bits);
        Interval { lo: self.lo.div_floor(&s), hi: div_ceil(&self.hi, &s), bits }
    }
}

fn scaled_to_f64(v: &BigInt, bits: u32) -> f64 {
    // keep 64 significant bits before converting
    let len = v.bits() as i64;
    let drop = (len - 64).max(0);
    let top = (v >> drop as usize).to_f64().unwrap_or(f64::NAN);
    top * 2f64.powi((drop - bits as i64) as i32)
}

/// atanh(p/r) for |p/r| ≤ 1/3, as a fixed-point interval with w fractional bits.
fn atanh_scaled(p: &BigInt, r: &BigInt, w: u32) -> Interval {
    let negative = p.is_negative() != r.is_negative() && !p.is_zero();
    let (pa, ra) = (p.abs(), r.abs());
    let one = pow2(w);
    let z_lo = (&pa << w as usize).div_floor(&ra);
    let z_hi = div_ceil(&(&pa << w as usize), &ra);
    let zz_lo = (&z_lo * &z_lo).div_floor(&one);
    let zz_hi = div_ceil(&(&z_hi * &z_hi), &one);
    let (mut t_lo, mut t_hi) = (z_lo, z_hi);
    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
    let mut k = 0u64;
    loop {
        let d = BigInt::from(2 * k + 1);
        s_lo += t_lo.div_floor(&d);
        s_hi += div_ceil(&t_hi, &d);
        t_lo = (&t_lo * &zz_lo).div_floor(&one);
        t_hi = div_ceil(&(&t_hi * &zz_hi), &one);
        k += 1;
        if t_hi <= BigInt::one() {
            // remaining terms: ≤ t_{k}·(1/(1−z²)) ≤ 2 ulps, plus one per future rounding
            s_hi += BigInt::from(4);
            break;
        }
    }
    if negative {
        Interval { lo: -s_hi, hi: -s_lo, bits: w }
    } else {
        Interval { lo: s_lo, hi: s_hi, bits: w }
    }
}

fn ln2_scaled(w: u32) -> Interval {
    let a = atanh_scaled(&BigInt::one(), &BigInt::from(3), w);
    Interval { lo: a.lo * 2, hi: a.hi * 2, bits: w }
}

/// γ = S/V − ln N + ε with V = Σ B_k, S = Σ B_k H_k, B_k = (N^k/k!)² and
/// |ε| < π e^{−4N} (Brent–McMillan). Every sum is carried as a floor/ceiling
/// pair on the 2^-w grid, so the enclosure is rigorous.
fn gamma_brent_mcmillan(bits: u32) -> Interval {
    // rounding in the ~3.6N summed terms costs a few hundred ulps
    let w = bits + 32;
    // π e^{−4N} < 2^{−w}
    let n = ((w as f64 * std::f64::consts::LN_2 + 2.0) / 4.0).ceil() as u64 + 1;
    let one = pow2(w);
    let nn = BigInt::from(n * n);
    let (mut b_lo, mut b_hi) = (one.clone(), one.clone());
    let (mut h_lo, mut h_hi) = (BigInt::zero(), BigInt::zero());
    let (mut v_lo, mut v_hi) = (one.clone(), one.clone());
    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
    let mut k = 0u64;
    loop {
        k += 1;
        let kk = BigInt::from(k * k);
        b_lo = (&b_lo * &nn).div_floor(&kk);
        b_hi = div_ceil(&(&b_hi * &nn), &kk);
        let kb = BigInt::from(k);
        h_lo += one.div_floor(&kb);
        h_hi += div_ceil(&one, &kb);
        v_lo += &b_lo;
        v_hi += &b_hi;
        s_lo += (&b_lo * &h_lo).div_floor(&one);
        s_hi += div_ceil(&(&b_hi * &h_hi), &one);
        // once n²/k² ≤ 1/4 the remaining terms sum to at most b_k
        if k * k >= 4 * n * n && b_hi <= BigInt::one() {
            break;
        }
    }
    let h_max = div_ceil(&h_hi, &one) + 1;
    v_hi += 2;
    s_hi += &h_max * 2;
    let lo = (&s_lo * &one).div_floor(&v_hi);
    let hi = div_ceil(&(&s_hi * &one), &v_lo);
    let ln_n = Interval::ln_uint(&BigUint::from(n), w);
    Interval { lo: lo - ln_n.hi - 2, hi: hi - ln_n.lo + 2, bits: w }.round_to(bits)
}

/// Evaluates `f` at increasing precision until `extract` succeeds.
pub fn certify<T>(
    start_bits: u32,
    f: impl Fn(u32) -> Result<Interval>,
    extract: impl Fn(&Interval) -> Option<T>,
) -> Result<T> {
    let mut bits = start_bits.max(64);
    loop {
        let iv = f(bits)?;
        if let Some(t) = extract(&iv) {
            return Ok(t);
        }
        if bits >= MAX_BITS {
            return Err(Error::Precision(bits));
        }
        bits = (bits * 2).min(MAX_BITS);
    }
}
