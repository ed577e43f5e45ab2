//! Arithmetic in GF(q) and GF(q^m), polynomial basis.
//!
//! An element is identified with the integer whose base-q digits are its
//! coefficients, constant term least significant. That integer order is the
//! one used by skip-vector files.

use std::fmt;

use crate::error::{Error, Result};

/// MATLAB default primitive polynomials for GF(2^m), m = 1..8 (bit i = coefficient of x^i).
const GF2_DEFAULT_POLYS: [u64; 8] = [
    0b11,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1000011,
    0b10001001,
    0b100011101,
];

/// Largest field for which log/antilog tables are built.
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u64);

impl FieldElement {
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Pow,
}

/// Second operand of [`Field::arith`]: an element, or an integer exponent for `Pow`.
#[derive(Copy, Clone, Debug)]
pub enum Operand {
    Element(FieldElement),
    Int(i64),
}

#[derive(Clone)]
struct Tables {
    // exp has 2(size-1) entries so a product of logs never needs a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone)]
pub struct Field {
    q: u32,
    m: u32,
    poly: Vec<u32>,
    poly_int: u64,
    size: u64,
    tables: Option<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.m == other.m && self.poly == other.poly
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state);
        self.m.hash(state);
        self.poly.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits_to_int(q: u32, digits: &[u32]) -> u64 {
    digits.iter().rev().fold(0u64, |acc, &d| acc * q as u64 + d as u64)
}

impl Field {
    /// Builds GF(q^m). Without a polynomial, the stored default is used
    /// (available for q = 2, m ≤ 8).
    pub fn new(q: u32, m: u32, poly: Option<&[u32]>) -> Result<Field> {
        if !is_prime(q as u64) {
            return Err(Error::NotPrime(q as u64));
        }
        if m == 0 {
            return Err(Error::InvalidParams("extension degree m must be ≥ 1".into()));
        }
        let size = (q as u64)
            .checked_pow(m)
            .filter(|s| *s <= 1 << 63)
            .ok_or_else(|| Error::OutOfRange(format!("GF({q}^{m}) is larger than 2^63")))?;
        let poly = match poly {
            Some(p) => p.to_vec(),
            None => Self::default_poly(q, m).ok_or(Error::NoDefaultPolynomial { q, m })?,
        };
        if poly.len() != m as usize + 1 || poly[m as usize] != 1 {
            return Err(Error::InvalidParams(format!(
                "polynomial must be monic of degree {m}, got coefficients {poly:?}"
            )));
        }
        if poly.iter().any(|&c| c >= q) {
            return Err(Error::InvalidParams(format!("coefficients must lie in [0, {q})")));
        }
        let poly_int = if q == 2 || size < u64::MAX / q as u64 {
            digits_to_int(q, &poly)
        } else {
            0
        };
        let mut field = Field { q, m, poly, poly_int, size, tables: None };
        field.check_primitive()?;
        Ok(field)
    }

    pub fn gf2(m: u32) -> Result<Field> {
        Self::new(2, m, None)
    }

    /// Polynomial given as an integer whose base-q digits are its coefficients.
    pub fn with_poly_int(q: u32, m: u32, poly: u64) -> Result<Field> {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut p = poly;
        for _ in 0..=m {
            coeffs.push((p % q as u64) as u32);
            p /= q as u64;
        }
        if p != 0 {
            return Err(Error::InvalidParams(format!("polynomial {poly} has degree > {m}")));
        }
        Self::new(q, m, Some(&coeffs))
    }

    /// The stored default if any, otherwise the primitive polynomial with the
    /// smallest integer representation.
    pub fn default_or_first(q: u32, m: u32) -> Result<Field> {
        match Self::default_poly(q, m) {
            Some(p) => Self::new(q, m, Some(&p)),
            None => Self::first_primitive(q, m),
        }
    }

    pub fn first_primitive(q: u32, m: u32) -> Result<Field> {
        if !is_prime(q as u64) {
            return Err(Error::NotPrime(q as u64));
        }
        let lead = (q as u64)
            .checked_pow(m)
            .ok_or_else(|| Error::OutOfRange(format!("GF({q}^{m}) too large")))?;
        for low in 1..lead {
            match Self::with_poly_int(q, m, lead + low) {
                Ok(f) => return Ok(f),
                Err(Error::NotPrimitive { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::NoDefaultPolynomial { q, m })
    }

    pub fn default_poly(q: u32, m: u32) -> Option<Vec<u32>> {
        if q != 2 || !(1..=8).contains(&m) {
            return None;
        }
        let p = GF2_DEFAULT_POLYS[m as usize - 1];
        Some((0..=m).map(|i| ((p >> i) & 1) as u32).collect())
    }

    /// Parses `gf(2^5)` or `gf(2^5;poly=0b100101)`; the polynomial may be
    /// written in binary (`0b`), hex (`0x`) or decimal, read as base-q digits.
    pub fn from_spec(spec: &str) -> Result<Field> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix("gf(")
            .or_else(|| s.strip_prefix("GF("))
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("field spec must look like gf(q^m;poly=..), got {spec:?}")))?;
        let mut parts = inner.split(';');
        let qm = parts.next().unwrap_or_default();
        let (q, m) = match qm.split_once('^') {
            Some((q, m)) => (q, m),
            None => (qm, "1"),
        };
        let q: u32 = q.parse().map_err(|_| Error::Parse(format!("bad characteristic in {spec:?}")))?;
        let m: u32 = m.parse().map_err(|_| Error::Parse(format!("bad degree in {spec:?}")))?;
        let mut poly = None;
        for opt in parts {
            let (key, val) = opt
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad option {opt:?} in {spec:?}")))?;
            if key != "poly" {
                return Err(Error::Parse(format!("unknown option {key:?} in {spec:?}")));
            }
            poly = Some(parse_int(val)?);
        }
        match poly {
            Some(p) => Self::with_poly_int(q, m, p),
            None => Self::new(q, m, None),
        }
    }

    pub fn spec(&self) -> String {
        if self.q == 2 {
            format!("gf(2^{};poly=0b{:b})", self.m, self.poly_int)
        } else {
            format!("gf({}^{};poly={})", self.q, self.m, digits_to_int(self.q, &self.poly))
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of elements q^m.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Coefficients of the primitive polynomial, constant term first.
    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The root α of the primitive polynomial.
    pub fn alpha(&self) -> FieldElement {
        FieldElement(self.mul_x(1))
    }

    pub fn alpha_pow(&self, k: u64) -> FieldElement {
        self.pow(self.alpha(), k as i64).expect("α is nonzero")
    }

    pub fn element(&self, v: u64) -> Result<FieldElement> {
        if v < self.size {
            Ok(FieldElement(v))
        } else {
            Err(Error::OutOfRange(format!("{v} is not an element of {}", self.spec())))
        }
    }

    /// Element of the prime subfield.
    pub fn scalar(&self, c: u32) -> FieldElement {
        FieldElement((c % self.q) as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size).map(FieldElement)
    }

    pub fn expand(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.0;
        (0..self.m)
            .map(|_| {
                let d = (v % self.q as u64) as u32;
                v /= self.q as u64;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.m as usize || coeffs.iter().any(|&c| c >= self.q) {
            return Err(Error::OutOfRange(format!(
                "coefficient vector {coeffs:?} does not describe an element of {}",
                self.spec()
            )));
        }
        Ok(FieldElement(digits_to_int(self.q, coeffs)))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(digit_add(self.q, a.0, b.0))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(digit_add(self.q, a.0, digit_neg(self.q, b.0)))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(digit_neg(self.q, a.0))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        match &self.tables {
            Some(t) => FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize] as u64),
            None => FieldElement(self.mul_slow(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        match &self.tables {
            Some(t) => {
                let order = (self.size - 1) as u32;
                let l = t.log[a.0 as usize];
                Ok(FieldElement(t.exp[((order - l) % order) as usize] as u64))
            }
            None => Ok(self.pow_u(a, self.size - 2)),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e by repeated squaring; negative exponents invert first.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement> {
        if e < 0 {
            Ok(self.pow_u(self.inv(a)?, e.unsigned_abs()))
        } else {
            Ok(self.pow_u(a, e as u64))
        }
    }

    fn pow_u(&self, a: FieldElement, mut e: u64) -> FieldElement {
        if a.0 != 0 && e >= self.size - 1 {
            e %= self.size - 1;
        }
        let mut base = a;
        let mut acc = self.one();
        if a.0 == 0 && e == 0 {
            return acc;
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// a^{q^s}.
    pub fn frobenius(&self, a: FieldElement, s: u32) -> FieldElement {
        if a.0 == 0 || self.size == 2 {
            return a;
        }
        let order = self.size - 1;
        let mut e = 1u64;
        for _ in 0..s {
            e = ((e as u128 * self.q as u128) % order as u128) as u64;
        }
        self.pow_u(a, e)
    }

    /// Discrete logarithm base α (tables only; None for 0 or large fields).
    pub fn log(&self, a: FieldElement) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        self.tables.as_ref().map(|t| t.log[a.0 as usize] as u64)
    }

    pub fn arith(&self, op: ArithOp, a: FieldElement, b: Operand) -> Result<FieldElement> {
        self.element(a.0)?;
        let elem = |b: Operand| match b {
            Operand::Element(e) => self.element(e.0),
            Operand::Int(i) if i >= 0 => self.element(i as u64),
            Operand::Int(i) => Err(Error::OutOfRange(format!("{i} is not an element"))),
        };
        match op {
            ArithOp::Add => Ok(self.add(a, elem(b)?)),
            ArithOp::Sub => Ok(self.sub(a, elem(b)?)),
            ArithOp::Mul => Ok(self.mul(a, elem(b)?)),
            ArithOp::Div => self.div(a, elem(b)?),
            ArithOp::Inv => self.inv(a),
            ArithOp::Pow => match b {
                Operand::Int(e) => self.pow(a, e),
                Operand::Element(e) => self.pow(a, e.0 as i64),
            },
        }
    }

    // multiplication by x, straight from the polynomial (no tables)
    fn mul_x(&self, a: u64) -> u64 {
        if self.q == 2 {
            let r = a << 1;
            return if (r >> self.m) & 1 == 1 { r ^ self.poly_int } else { r };
        }
        let q = self.q as u64;
        let m = self.m as usize;
        let mut d = vec![0u64; m + 1];
        let mut v = a;
        for slot in d.iter_mut().skip(1) {
            *slot = v % q;
            v /= q;
        }
        let top = d[m];
        d.truncate(m);
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = (*slot + (q - top) * self.poly[i] as u64) % q;
        }
        d.iter().rev().fold(0u64, |acc, &x| acc * q + x)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        if self.q == 2 {
            let mut p: u128 = 0;
            let mut bb = b;
            let mut i = 0;
            while bb != 0 {
                if bb & 1 == 1 {
                    p ^= (a as u128) << i;
                }
                bb >>= 1;
                i += 1;
            }
            let m = self.m;
            let poly = self.poly_int as u128;
            for k in (m..2 * m).rev() {
                if (p >> k) & 1 == 1 {
                    p ^= poly << (k - m);
                }
            }
            return p as u64;
        }
        let q = self.q as u64;
        let m = self.m as usize;
        let da: Vec<u64> = self.expand(FieldElement(a)).into_iter().map(u64::from).collect();
        let db: Vec<u64> = self.expand(FieldElement(b)).into_iter().map(u64::from).collect();
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % q;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c != 0 {
                for i in 0..=m {
                    let t = &mut prod[k - m + i];
                    *t = (*t + (q - c) * self.poly[i] as u64) % q;
                }
            }
        }
        prod[..m].iter().rev().fold(0u64, |acc, &x| acc * q + x)
    }

    fn check_primitive(&mut self) -> Result<()> {
        let not_primitive = |f: &Field| Error::NotPrimitive { q: f.q, poly: f.poly_string() };
        if self.poly[0] == 0 {
            return Err(not_primitive(self));
        }
        let order = self.size - 1;
        if self.size <= TABLE_LIMIT {
            // walk the powers of x until they return to 1
            let mut exp = Vec::with_capacity(2 * order as usize);
            let mut log = vec![0u32; self.size as usize];
            let mut x = 1u64;
            for k in 0..order {
                if k > 0 && x == 1 {
                    return Err(not_primitive(self));
                }
                exp.push(x as u32);
                log[x as usize] = k as u32;
                x = self.mul_x(x);
            }
            if x != 1 {
                return Err(not_primitive(self));
            }
            let head = exp.clone();
            exp.extend_from_slice(&head);
            self.tables = Some(Tables { exp, log });
            return Ok(());
        }
        let x = FieldElement(self.mul_x(1));
        if self.pow_u_slow(x, order) != 1 {
            return Err(not_primitive(self));
        }
        for p in prime_factors(order) {
            if self.pow_u_slow(x, order / p) == 1 {
                return Err(not_primitive(self));
            }
        }
        Ok(())
    }

    fn pow_u_slow(&self, a: FieldElement, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn poly_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.poly.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        terms.join("+")
    }
}

fn parse_int(s: &str) -> Result<u64> {
    let bad = || Error::Parse(format!("bad integer {s:?}"));
    if let Some(b) = s.strip_prefix("0b") {
        u64::from_str_radix(b, 2).map_err(|_| bad())
    } else if let Some(h) = s.strip_prefix("0x") {
        u64::from_str_radix(h, 16).map_err(|_| bad())
    } else {
        s.parse().map_err(|_| bad())
    }
}

pub(crate) fn digit_add(q: u32, a: u64, b: u64) -> u64 {
    if q == 2 {
        return a ^ b;
    }
    let q = q as u64;
    let (mut a, mut b, mut r, mut w) = (a, b, 0u64, 1u64);
    while a | b != 0 {
        r += ((a % q + b % q) % q) * w;
        a /= q;
        b /= q;
        w = w.wrapping_mul(q);
    }
    r
}

pub(crate) fn digit_neg(q: u32, a: u64) -> u64 {
    if q == 2 {
        return a;
    }
    let q = q as u64;
    let (mut a, mut r, mut w) = (a, 0u64, 1u64);
    while a != 0 {
        r += ((q - a % q) % q) * w;
        a /= q;
        w = w.wrapping_mul(q);
    }
    r
}
