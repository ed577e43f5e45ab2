//! Vectors of GF(q^m)^n under the rank metric, support spaces, and
//! elementary linear subspaces (ELS).
//!
//! Two representations coexist. [`RankVector`] carries its field and is the
//! convenient one; [`Space`] packs a vector into a single integer index
//! (coordinate 0 most significant, base q^m) and is what every enumeration
//! and search loop runs on.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finite_field::{digit_add, digit_neg, Field, FieldElement};

/// Default enumeration cap for anything that walks the whole space.
pub const DEFAULT_CAP: u64 = 1 << 26;

/// GF(q) linear algebra on small dense matrices.
pub mod gfq {
    pub fn inv(a: u32, q: u32) -> u32 {
        // q prime, a != 0
        let mut r = 1u64;
        let mut b = a as u64 % q as u64;
        let mut e = q - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % q as u64;
            }
            b = b * b % q as u64;
            e >>= 1;
        }
        r as u32
    }

    /// Reduced row echelon form in place; zero rows are dropped. Returns pivot columns.
    pub fn rref(rows: &mut Vec<Vec<u32>>, q: u32) -> Vec<usize> {
        let width = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..width {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, p);
            let s = inv(rows[r][col], q);
            for x in rows[r].iter_mut() {
                *x = (*x as u64 * s as u64 % q as u64) as u32;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][col] != 0 {
                    let f = rows[i][col];
                    for c in 0..width {
                        let t = rows[r][c] as u64 * f as u64 % q as u64;
                        rows[i][c] = ((rows[i][c] as u64 + q as u64 - t) % q as u64) as u32;
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    pub fn rank(rows: &[Vec<u32>], q: u32) -> usize {
        let mut m = rows.to_vec();
        rref(&mut m, q).len()
    }

    /// Solves λ·S = p for λ (S has independent rows). None if p ∉ rowspace(S).
    pub fn solve_left(s: &[Vec<u32>], p: &[u32], q: u32) -> Option<Vec<u32>> {
        let k = s.len();
        let n = p.len();
        // augmented system Sᵀ λ = pᵀ: n equations, k unknowns
        let mut aug: Vec<Vec<u32>> = (0..n)
            .map(|j| {
                let mut row: Vec<u32> = (0..k).map(|i| s[i][j]).collect();
                row.push(p[j]);
                row
            })
            .collect();
        let pivots = rref(&mut aug, q);
        if pivots.last() == Some(&k) {
            return None;
        }
        let mut lambda = vec![0u32; k];
        for (row, &c) in aug.iter().zip(&pivots) {
            lambda[c] = row[k];
        }
        Some(lambda)
    }
}

/// Rank over GF(2) of the given rows (bit-packed); destroys the input.
#[inline]
fn rank_bits(rows: &mut [u64]) -> u32 {
    let mut r = 0;
    for i in 0..rows.len() {
        let v = rows[i];
        if v == 0 {
            continue;
        }
        r += 1;
        let hb = 63 - v.leading_zeros();
        for row in rows[i + 1..].iter_mut() {
            if (*row >> hb) & 1 == 1 {
                *row ^= v;
            }
        }
    }
    r
}

/// GF(q)-rank of the coordinates, each given by its canonical integer.
pub fn rank_of_elements(q: u32, m: u32, values: &[u64]) -> u32 {
    if q == 2 {
        let mut rows = values.to_vec();
        return rank_bits(&mut rows);
    }
    let mut rows: Vec<Vec<u32>> = values
        .iter()
        .map(|&v| {
            let mut v = v;
            (0..m)
                .map(|_| {
                    let d = (v % q as u64) as u32;
                    v /= q as u64;
                    d
                })
                .collect()
        })
        .collect();
    gfq::rref(&mut rows, q).len() as u32
}

/// GF(q^m)^n with vectors packed into integer indices.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Space {
    q: u32,
    m: u32,
    n: u32,
    qm: u64,
    size: u64,
}

impl Space {
    pub fn new(q: u32, m: u32, n: u32) -> Result<Space> {
        let qm = (q as u64)
            .checked_pow(m)
            .ok_or_else(|| Error::OutOfRange(format!("GF({q}^{m}) too large")))?;
        let size = qm
            .checked_pow(n)
            .filter(|s| *s <= 1 << 63)
            .ok_or_else(|| Error::OutOfRange(format!("GF({q}^{m})^{n} does not fit 63-bit indices")))?;
        if n == 0 {
            return Err(Error::InvalidParams("length n must be ≥ 1".into()));
        }
        Ok(Space { q, m, n, qm, size })
    }

    pub fn of_field(field: &Field, n: u32) -> Result<Space> {
        Space::new(field.q(), field.m(), n)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// q^m.
    pub fn qm(&self) -> u64 {
        self.qm
    }

    /// q^{mn}.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn check_cap(&self, cap: u64) -> Result<()> {
        if self.size > cap {
            Err(Error::CapExceeded { size: self.size as u128, cap })
        } else {
            Ok(())
        }
    }

    /// Coordinate j (0 = most significant digit).
    #[inline]
    pub fn coord(&self, x: u64, j: u32) -> u64 {
        let shift = self.n - 1 - j;
        if self.q == 2 {
            (x >> (self.m * shift)) & (self.qm - 1)
        } else {
            (x / self.qm.pow(shift)) % self.qm
        }
    }

    pub fn coords(&self, x: u64) -> Vec<u64> {
        (0..self.n).map(|j| self.coord(x, j)).collect()
    }

    pub fn from_coords(&self, coords: &[u64]) -> u64 {
        coords.iter().fold(0u64, |acc, &c| acc * self.qm + c)
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        digit_add(self.q, x, y)
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        if self.q == 2 {
            x ^ y
        } else {
            digit_add(self.q, x, digit_neg(self.q, y))
        }
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        digit_neg(self.q, x)
    }

    /// Rank weight of the packed vector.
    #[inline]
    pub fn rank(&self, x: u64) -> u32 {
        if self.q == 2 {
            let n = self.n as usize;
            let mask = self.qm - 1;
            if n <= 16 {
                let mut rows = [0u64; 16];
                for (j, row) in rows[..n].iter_mut().enumerate() {
                    *row = (x >> (self.m as usize * j)) & mask;
                }
                return rank_bits(&mut rows[..n]);
            }
            let mut rows: Vec<u64> = (0..n).map(|j| (x >> (self.m as usize * j)) & mask).collect();
            return rank_bits(&mut rows);
        }
        rank_of_elements(self.q, self.m, &self.coords(x))
    }

    #[inline]
    pub fn distance(&self, x: u64, y: u64) -> u32 {
        self.rank(self.sub(x, y))
    }

    /// Indices of all vectors of rank ≤ r (the ball around 0), ascending.
    pub fn ball_offsets(&self, r: u32, cap: u64) -> Result<Vec<u64>> {
        self.check_cap(cap)?;
        Ok((0..self.size).filter(|&x| self.rank(x) <= r).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankVector {
    field: Arc<Field>,
    coords: Vec<FieldElement>,
}

impl RankVector {
    pub fn new(field: Arc<Field>, coords: Vec<FieldElement>) -> Result<RankVector> {
        for c in &coords {
            field.element(c.value())?;
        }
        Ok(RankVector { field, coords })
    }

    pub fn from_values(field: Arc<Field>, values: &[u64]) -> Result<RankVector> {
        let coords = values.iter().map(|&v| field.element(v)).collect::<Result<Vec<_>>>()?;
        Ok(RankVector { field, coords })
    }

    pub fn zero(field: Arc<Field>, n: usize) -> RankVector {
        RankVector { field, coords: vec![FieldElement::default(); n] }
    }

    /// The vector whose packed index is `index` (coordinate 0 most significant).
    pub fn from_index(field: Arc<Field>, n: u32, index: u64) -> Result<RankVector> {
        let space = Space::of_field(&field, n)?;
        if index >= space.size() {
            return Err(Error::OutOfRange(format!("index {index} ≥ q^(mn) = {}", space.size())));
        }
        RankVector::from_values(field, &space.coords(index))
    }

    pub fn index(&self) -> Result<u64> {
        let space = Space::of_field(&self.field, self.n() as u32)?;
        Ok(space.from_coords(&self.values()))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn values(&self) -> Vec<u64> {
        self.coords.iter().map(|c| c.value()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// m×n matrix over GF(q) whose column j is the expansion of x_j.
    pub fn expansion_matrix(&self) -> Vec<Vec<u32>> {
        let cols: Vec<Vec<u32>> = self.coords.iter().map(|&c| self.field.expand(c)).collect();
        (0..self.field.m() as usize)
            .map(|i| cols.iter().map(|col| col[i]).collect())
            .collect()
    }

    pub fn rank(&self) -> u32 {
        rank_of_elements(self.field.q(), self.field.m(), &self.values())
    }

    fn compatible(&self, other: &RankVector) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.n() != other.n() {
            return Err(Error::Shape(format!("lengths {} and {}", self.n(), other.n())));
        }
        Ok(())
    }

    pub fn add(&self, other: &RankVector) -> Result<RankVector> {
        self.compatible(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| self.field.add(a, b)).collect();
        Ok(RankVector { field: self.field.clone(), coords })
    }

    pub fn sub(&self, other: &RankVector) -> Result<RankVector> {
        self.compatible(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| self.field.sub(a, b)).collect();
        Ok(RankVector { field: self.field.clone(), coords })
    }

    pub fn scale(&self, c: FieldElement) -> RankVector {
        let coords = self.coords.iter().map(|&a| self.field.mul(c, a)).collect();
        RankVector { field: self.field.clone(), coords }
    }

    /// Coefficient plane t: the t-th row of the expansion matrix.
    fn plane(&self, t: usize) -> Vec<u32> {
        self.coords.iter().map(|&c| self.field.expand(c)[t]).collect()
    }
}

pub fn rank_weight(x: &RankVector) -> u32 {
    x.rank()
}

pub fn rank_distance(x: &RankVector, y: &RankVector) -> Result<u32> {
    Ok(x.sub(y)?.rank())
}

/// 𝔖(x): the GF(q)-span of the coordinates of x inside GF(q^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSpace {
    q: u32,
    m: u32,
    basis: Vec<Vec<u32>>,
}

impl SupportSpace {
    pub fn of(x: &RankVector) -> SupportSpace {
        let f = x.field();
        let mut rows: Vec<Vec<u32>> = x.coords().iter().map(|&c| f.expand(c)).collect();
        gfq::rref(&mut rows, f.q());
        SupportSpace { q: f.q(), m: f.m(), basis: rows }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn contains(&self, field: &Field, a: FieldElement) -> bool {
        let mut rows = self.basis.clone();
        rows.push(field.expand(a));
        gfq::rank(&rows, self.q) == self.dim()
    }
}

/// Elementary linear subspace: spanned by vectors with all coordinates in GF(q).
/// Stored as a basis of GF(q)^n in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Els {
    q: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl Els {
    /// The span of the given rows of GF(q)^n.
    pub fn span(q: u32, n: usize, rows: Vec<Vec<u32>>) -> Result<Els> {
        if rows.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= q)) {
            return Err(Error::Shape(format!("rows must be vectors of GF({q})^{n}")));
        }
        let mut rows = rows;
        gfq::rref(&mut rows, q);
        Ok(Els { q, n, rows })
    }

    pub fn zero(q: u32, n: usize) -> Els {
        Els { q, n, rows: Vec::new() }
    }

    pub fn full(q: u32, n: usize) -> Els {
        let rows = (0..n).map(|i| (0..n).map(|j| (i == j) as u32).collect()).collect();
        Els { q, n, rows }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn contains_row(&self, row: &[u32]) -> bool {
        let mut m = self.rows.clone();
        m.push(row.to_vec());
        gfq::rank(&m, self.q) == self.dim()
    }

    /// x is a GF(q^m)-combination of the rows iff every coefficient plane is
    /// in the GF(q) row space.
    pub fn contains(&self, x: &RankVector) -> bool {
        x.field().q() == self.q
            && x.n() == self.n
            && (0..x.field().m() as usize).all(|t| self.contains_row(&x.plane(t)))
    }

    pub fn is_subspace_of(&self, other: &Els) -> bool {
        self.n == other.n && self.rows.iter().all(|r| other.contains_row(r))
    }

    pub fn sum(&self, other: &Els) -> Els {
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Els::span(self.q, self.n, rows).expect("same ambient space")
    }

    /// A ∩ B = {0}.
    pub fn meets_trivially(&self, other: &Els) -> bool {
        self.sum(other).dim() == self.dim() + other.dim()
    }

    /// Σ λ_i b_i for coefficients λ_i ∈ GF(q^m).
    pub fn combine(&self, field: &Arc<Field>, lambda: &[FieldElement]) -> Result<RankVector> {
        if lambda.len() != self.dim() {
            return Err(Error::Shape(format!("need {} coefficients", self.dim())));
        }
        let mut coords = vec![FieldElement::default(); self.n];
        for (row, &l) in self.rows.iter().zip(lambda) {
            for (c, &b) in coords.iter_mut().zip(row) {
                *c = field.add(*c, field.mul(l, field.scalar(b)));
            }
        }
        RankVector::new(field.clone(), coords)
    }

    /// Every member over GF(q^m): q^{m·dim} vectors.
    pub fn members(&self, field: &Arc<Field>) -> Vec<RankVector> {
        let k = self.dim();
        let size = field.size();
        let total = size.pow(k as u32);
        (0..total)
            .map(|mut t| {
                let lambda: Vec<FieldElement> = (0..k)
                    .map(|_| {
                        let e = field.element(t % size).expect("in range");
                        t /= size;
                        e
                    })
                    .collect();
                self.combine(field, &lambda).expect("dimensions agree")
            })
            .collect()
    }
}

/// The unique ELS of dimension rk(x) containing x: the row space of its expansion matrix.
pub fn unique_els_of(x: &RankVector) -> Els {
    let q = x.field().q();
    Els::span(q, x.n(), x.expansion_matrix()).expect("planes have length n")
}

/// All v-dimensional subspaces of GF(q)^n, one canonical RREF basis each.
pub fn els_enumerate(n: usize, v: usize, q: u32) -> Vec<Els> {
    let mut out = Vec::new();
    if v > n {
        return out;
    }
    let mut pivots: Vec<usize> = (0..v).collect();
    loop {
        // free entries: row i, columns after its pivot that are not pivots
        let free: Vec<(usize, usize)> = (0..v)
            .flat_map(|i| {
                let piv = pivots.clone();
                ((pivots[i] + 1)..n).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let mut vals = vec![0u32; free.len()];
        loop {
            let mut rows = vec![vec![0u32; n]; v];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for (&(i, c), &val) in free.iter().zip(&vals) {
                rows[i][c] = val;
            }
            out.push(Els { q, n, rows });
            // odometer over free entries
            let mut k = 0;
            while k < vals.len() {
                vals[k] += 1;
                if vals[k] < q {
                    break;
                }
                vals[k] = 0;
                k += 1;
            }
            if k == vals.len() {
                break;
            }
        }
        // next pivot combination
        let mut i = v;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - v + i {
                pivots[i] += 1;
                for j in i + 1..v {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All B with A ⊕ B = V.
pub fn els_complements(a: &Els, v: &Els) -> Result<Vec<Els>> {
    if !a.is_subspace_of(v) {
        return Err(Error::InvalidParams("A is not contained in V".into()));
    }
    let (q, n) = (v.q, v.n);
    let target = v.dim() - a.dim();
    // subspaces of V are images of subspaces of GF(q)^{dim V} under its basis
    let mut out = Vec::new();
    for coord_space in els_enumerate(v.dim(), target, q) {
        let rows: Vec<Vec<u32>> = coord_space
            .rows
            .iter()
            .map(|lam| {
                (0..n)
                    .map(|j| {
                        let s: u64 = lam.iter().zip(&v.rows).map(|(&l, r)| l as u64 * r[j] as u64).sum();
                        (s % q as u64) as u32
                    })
                    .collect()
            })
            .collect();
        let b = Els::span(q, n, rows)?;
        if a.meets_trivially(&b) {
            out.push(b);
        }
    }
    Ok(out)
}

/// Splits x = x_A + x_B along a direct sum A ⊕ B containing x.
pub fn project(x: &RankVector, a: &Els, b: &Els) -> Result<(RankVector, RankVector)> {
    let q = x.field().q();
    if a.q != q || b.q != q || a.n != x.n() || b.n != x.n() {
        return Err(Error::Shape("subspaces and vector live in different spaces".into()));
    }
    if !a.meets_trivially(b) {
        return Err(Error::InvalidParams("A and B do not form a direct sum".into()));
    }
    let stacked: Vec<Vec<u32>> = a.rows.iter().chain(&b.rows).cloned().collect();
    let f = x.field();
    let m = f.m() as usize;
    let n = x.n();
    let (ka, kb) = (a.dim(), b.dim());
    // digits of x_A and x_B, plane by plane
    let mut pa = vec![vec![0u32; m]; n];
    let mut pb = vec![vec![0u32; m]; n];
    for t in 0..m {
        let lambda = gfq::solve_left(&stacked, &x.plane(t), q)
            .ok_or_else(|| Error::InvalidParams("x is not in A ⊕ B".into()))?;
        for j in 0..n {
            let sa: u64 = (0..ka).map(|i| lambda[i] as u64 * a.rows[i][j] as u64).sum();
            let sb: u64 = (0..kb).map(|i| lambda[ka + i] as u64 * b.rows[i][j] as u64).sum();
            pa[j][t] = (sa % q as u64) as u32;
            pb[j][t] = (sb % q as u64) as u32;
        }
    }
    let build = |p: Vec<Vec<u32>>| -> Result<RankVector> {
        let coords = p.iter().map(|d| f.from_coeffs(d)).collect::<Result<Vec<_>>>()?;
        RankVector::new(f.clone(), coords)
    };
    Ok((build(pa)?, build(pb)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(m: u32) -> Arc<Field> {
        Arc::new(Field::gf2(m).unwrap())
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        let a = f.alpha().value();
        assert_eq!(RankVector::from_values(f.clone(), &[0, 0]).unwrap().rank(), 0);
        assert_eq!(RankVector::from_values(f.clone(), &[1, a]).unwrap().rank(), 2);
        assert_eq!(RankVector::from_values(f.clone(), &[1, 1, a]).unwrap().rank(), 2);
        let x = RankVector::from_values(f.clone(), &[1, a]).unwrap();
        let z = RankVector::zero(f, 2);
        assert_eq!(rank_distance(&x, &z).unwrap(), 2);
        assert_eq!(rank_distance(&x, &x).unwrap(), 0);
    }

    #[test]
    fn space_rank_agrees_with_generic() {
        let sp = Space::new(2, 3, 3).unwrap();
        let f = gf(3);
        for x in 0..sp.size() {
            let v = RankVector::from_index(f.clone(), 3, x).unwrap();
            assert_eq!(sp.rank(x), gfq::rank(&v.expansion_matrix(), 2) as u32);
            assert_eq!(v.index().unwrap(), x);
        }
        // odd characteristic
        let f3 = Arc::new(Field::first_primitive(3, 2).unwrap());
        let sp3 = Space::new(3, 2, 2).unwrap();
        for x in 0..sp3.size() {
            let v = RankVector::from_index(f3.clone(), 2, x).unwrap();
            assert_eq!(sp3.rank(x), gfq::rank(&v.expansion_matrix(), 3) as u32);
            for y in [0, 5, 17, 80] {
                let w = RankVector::from_index(f3.clone(), 2, y).unwrap();
                assert_eq!(sp3.add(x, y), v.add(&w).unwrap().index().unwrap());
                assert_eq!(sp3.sub(x, y), v.sub(&w).unwrap().index().unwrap());
            }
        }
    }

    #[test]
    fn index_convention() {
        let f = gf(2);
        let v = RankVector::from_index(f.clone(), 2, 1).unwrap();
        assert_eq!(v.values(), vec![0, 1]);
        let v = RankVector::from_index(f, 2, 4).unwrap();
        assert_eq!(v.values(), vec![1, 0]);
    }

    #[test]
    fn unique_els_examples() {
        let f = gf(2);
        let x = RankVector::from_values(f.clone(), &[1, 1]).unwrap();
        let e = unique_els_of(&x);
        assert_eq!(e.rows(), &[vec![1, 1]]);
        assert!(e.contains(&x));
        assert_eq!(unique_els_of(&RankVector::zero(f, 2)).dim(), 0);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(els_enumerate(2, 1, 2).len(), 3);
        assert_eq!(els_enumerate(4, 2, 2).len(), 35);
        assert_eq!(els_enumerate(5, 0, 3).len(), 1);
        assert_eq!(els_enumerate(3, 1, 3).len(), 13);
    }

    #[test]
    fn complements_small() {
        let v = Els::full(2, 2);
        let a = Els::span(2, 2, vec![vec![1, 0]]).unwrap();
        assert_eq!(els_complements(&a, &v).unwrap().len(), 2);
        assert_eq!(els_complements(&v, &v).unwrap(), vec![Els::zero(2, 2)]);
        let outside = Els::span(2, 3, vec![vec![1, 0, 0]]).unwrap();
        let plane = Els::span(2, 3, vec![vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(els_complements(&outside, &plane).is_err());
    }

    #[test]
    fn projection_basics() {
        let f = gf(2);
        let a = Els::span(2, 2, vec![vec![1, 0]]).unwrap();
        let b = Els::span(2, 2, vec![vec![1, 1]]).unwrap();
        let x = RankVector::from_values(f.clone(), &[3, 0]).unwrap();
        let (xa, xb) = project(&x, &a, &b).unwrap();
        assert_eq!(xa, x);
        assert!(xb.is_zero());
        let y = RankVector::from_values(f.clone(), &[1, 2]).unwrap();
        let (ya, yb) = project(&y, &a, &b).unwrap();
        assert_eq!(ya.add(&yb).unwrap(), y);
        assert!(a.contains(&ya) && b.contains(&yb));
        assert!(project(&y, &a, &a).is_err());
    }

    #[test]
    fn support_space_dim_is_rank() {
        let f = gf(3);
        let sp = Space::new(2, 3, 2).unwrap();
        for x in 0..sp.size() {
            let v = RankVector::from_index(f.clone(), 2, x).unwrap();
            let s = SupportSpace::of(&v);
            assert_eq!(s.dim() as u32, v.rank());
            for &c in v.coords() {
                assert!(s.contains(&f, c));
            }
        }
    }
}
