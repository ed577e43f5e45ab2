//! Codes in GF(q^m)^n: generalized Gabidulin and MRD constructions, the
//! transpose and field-embedding maps, exact covering radius and minimum
//! distance, and the skip-vector interchange format.
//!
//! Codewords are stored as packed vector indices (see [`Space`]), sorted.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{Field, FieldElement};
use crate::par;
use crate::rank_space::{rank_of_elements, RankVector, Space, DEFAULT_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeKind {
    Explicit,
    /// GF(q^m)-linear, with a k×n generator matrix in reduced row echelon form.
    Linear { generator: Vec<Vec<FieldElement>>, pivots: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    field: Arc<Field>,
    space: Space,
    words: Vec<u64>,
    kind: CodeKind,
}

impl Code {
    /// An explicit code; rejects duplicates and out-of-range indices.
    pub fn explicit(field: Arc<Field>, n: u32, mut words: Vec<u64>) -> Result<Code> {
        let space = Space::of_field(&field, n)?;
        if let Some(&w) = words.iter().find(|&&w| w >= space.size()) {
            return Err(Error::OutOfRange(format!("codeword index {w} ≥ {}", space.size())));
        }
        words.sort_unstable();
        if let Some(w) = words.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams(format!("duplicate codeword {}", w[0])));
        }
        Ok(Code { field, space, words, kind: CodeKind::Explicit })
    }

    pub fn from_vectors(field: Arc<Field>, n: u32, vectors: &[RankVector]) -> Result<Code> {
        let words = vectors
            .iter()
            .map(|v| {
                if v.n() != n as usize || v.field() != &field {
                    return Err(Error::FieldMismatch);
                }
                v.index()
            })
            .collect::<Result<Vec<_>>>()?;
        Code::explicit(field, n, words)
    }

    /// The GF(q^m)-span of the rows; rows must be linearly independent.
    pub fn linear(field: Arc<Field>, rows: Vec<Vec<FieldElement>>, cap: u64) -> Result<Code> {
        let n = rows.first().map(|r| r.len()).ok_or_else(|| Error::Shape("empty generator matrix".into()))?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("generator rows have different lengths".into()));
        }
        let k = rows.len();
        let space = Space::of_field(&field, n as u32)?;
        let mut generator = rows;
        let pivots = rref_field(&field, &mut generator);
        if pivots.len() != k {
            return Err(Error::InvalidParams(format!("generator rows are dependent (rank {} < {k})", pivots.len())));
        }
        let count = (field.size() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if count > cap as u128 {
            return Err(Error::CapExceeded { size: count, cap });
        }
        let mut words = vec![0u64];
        for row in &generator {
            let multiples: Vec<u64> = field
                .elements()
                .map(|l| space.from_coords(&row.iter().map(|&g| field.mul(l, g).value()).collect::<Vec<_>>()))
                .collect();
            words = words.iter().flat_map(|&w| multiples.iter().map(move |&t| space.add(w, t))).collect();
        }
        words.sort_unstable();
        Ok(Code { field, space, words, kind: CodeKind::Linear { generator, pivots } })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n(&self) -> u32 {
        self.space.n()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Sorted packed indices.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn kind(&self) -> &CodeKind {
        &self.kind
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, CodeKind::Linear { .. })
    }

    pub fn dimension(&self) -> Option<usize> {
        match &self.kind {
            CodeKind::Linear { generator, .. } => Some(generator.len()),
            CodeKind::Explicit => None,
        }
    }

    pub fn contains(&self, index: u64) -> bool {
        self.words.binary_search(&index).is_ok()
    }

    pub fn vectors(&self) -> Vec<RankVector> {
        self.words
            .iter()
            .map(|&w| RankVector::from_index(self.field.clone(), self.n(), w).expect("valid index"))
            .collect()
    }

    /// Forgets the linear structure.
    pub fn into_explicit(self) -> Code {
        Code { kind: CodeKind::Explicit, ..self }
    }
}

/// Reduced row echelon form over GF(q^m); zero rows dropped. Returns pivots.
pub fn rref_field(field: &Field, rows: &mut Vec<Vec<FieldElement>>) -> Vec<usize> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let s = field.inv(rows[r][col]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, s);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col];
                for c in 0..width {
                    let t = field.mul(rows[r][c], f);
                    rows[i][c] = field.sub(rows[i][c], t);
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

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Generalized Gabidulin code: rows (g_0^{[i]}, …, g_{n−1}^{[i]}) with
/// [i] = q^{si}, i < k.
pub fn gabidulin_generator(field: Arc<Field>, n: u32, k: u32, s: u32, g: &[FieldElement]) -> Result<Code> {
    let m = field.m();
    if n > m {
        return Err(Error::InvalidParams(format!("Gabidulin codes need n ≤ m ({n} > {m})")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("need 1 ≤ k ≤ n, got k = {k}")));
    }
    if gcd(s, m) != 1 {
        return Err(Error::InvalidParams(format!("gcd(s, m) = gcd({s}, {m}) ≠ 1")));
    }
    if g.len() != n as usize {
        return Err(Error::Shape(format!("{} evaluation points for length {n}", g.len())));
    }
    let values: Vec<u64> = g.iter().map(|x| x.value()).collect();
    if rank_of_elements(field.q(), m, &values) != n {
        return Err(Error::InvalidParams("evaluation points are dependent over GF(q)".into()));
    }
    let rows = (0..k)
        .map(|i| g.iter().map(|&x| field.frobenius(x, (s * i) % m)).collect())
        .collect();
    Code::linear(field, rows, DEFAULT_CAP)
}

/// Gabidulin code with s = 1 and g_j = α^j.
pub fn gabidulin_default(field: Arc<Field>, n: u32, k: u32) -> Result<Code> {
    let g: Vec<FieldElement> = (0..n as u64).map(|j| field.alpha_pow(j)).collect();
    gabidulin_generator(field, n, k, 1, &g)
}

/// An MRD code with minimum rank distance d in GF(q^m)^n: Gabidulin for
/// n ≤ m, a cartesian power when m divides n, otherwise a transposed
/// Gabidulin code over GF(q^n).
pub fn mrd_construct(q: u32, m: u32, n: u32, d: u32) -> Result<Code> {
    let field = Arc::new(Field::default_or_first(q, m)?);
    if d == 0 {
        return Err(Error::InvalidParams("minimum distance must be ≥ 1".into()));
    }
    if d > m.min(n) {
        return Code::explicit(field, n, vec![0]);
    }
    if n <= m {
        return gabidulin_default(field, n, n - d + 1);
    }
    if n % m == 0 {
        let base = gabidulin_default(field, m, m - d + 1)?;
        return cartesian_power(&base, n / m);
    }
    let big = Arc::new(Field::default_or_first(q, n)?);
    let g = gabidulin_default(big, m, m - d + 1)?;
    transpose_code_into(&g, field)
}

/// C^l: concatenations of l codewords; linear if C is.
pub fn cartesian_power(code: &Code, l: u32) -> Result<Code> {
    if l == 0 {
        return Err(Error::InvalidParams("cartesian power needs l ≥ 1".into()));
    }
    let field = code.field.clone();
    let n = code.n() * l;
    match &code.kind {
        CodeKind::Linear { generator, .. } => {
            let base_n = code.n() as usize;
            let zero = field.zero();
            let mut rows = Vec::new();
            for b in 0..l as usize {
                for g in generator {
                    let mut row = vec![zero; base_n * l as usize];
                    row[b * base_n..(b + 1) * base_n].copy_from_slice(g);
                    rows.push(row);
                }
            }
            Code::linear(field, rows, DEFAULT_CAP)
        }
        CodeKind::Explicit => {
            let shift = code.space.size();
            let mut words = vec![0u64];
            for _ in 0..l {
                words = words.iter().flat_map(|&w| code.words.iter().map(move |&c| w * shift + c)).collect();
            }
            Code::explicit(field, n, words)
        }
    }
}

/// Transposes each codeword's m×n matrix, giving a code of length m over
/// GF(q^n) (default polynomial). Rank weights and covering radius carry over.
pub fn transpose_code(code: &Code) -> Result<Code> {
    let target = Arc::new(Field::default_or_first(code.field.q(), code.n())?);
    transpose_code_into(code, target)
}

fn transpose_code_into(code: &Code, target: Arc<Field>) -> Result<Code> {
    let (q, m, n) = (code.field.q(), code.field.m(), code.n());
    if target.q() != q || target.m() != n {
        return Err(Error::FieldMismatch);
    }
    let dst = Space::new(q, n, m)?;
    let words = code
        .words
        .iter()
        .map(|&w| dst.from_coords(&transpose_index(&code.space, w)))
        .collect();
    Code::explicit(target, m, words)
}

/// Row i of the expansion matrix read as an element of GF(q^n): coordinate
/// j contributes its i-th coefficient as the j-th digit.
fn transpose_index(src: &Space, w: u64) -> Vec<u64> {
    let (q, m, n) = (src.q() as u64, src.m(), src.n());
    let coords = src.coords(w);
    (0..m)
        .map(|i| {
            let q_i = q.pow(i);
            (0..n).fold(0u64, |acc, j| acc + ((coords[j as usize] / q_i) % q) * q.pow(j))
        })
        .collect()
}

/// The rank-preserving map GF(q^m)^n → GF(q^{m+u})^n that sends the
/// polynomial basis of GF(q^m) to the first m basis elements of GF(q^{m+u}).
/// Element integers (coefficient digits) are unchanged.
pub fn field_embed(code: &Code, u: u32) -> Result<Code> {
    if u == 0 {
        return Ok(code.clone());
    }
    let (q, m, n) = (code.field.q(), code.field.m(), code.n());
    let target = Arc::new(Field::default_or_first(q, m + u)?);
    let dst = Space::new(q, m + u, n)?;
    let words = code.words.iter().map(|&w| dst.from_coords(&code.space.coords(w))).collect();
    Code::explicit(target, n, words)
}

// --------------------------------------------------------- radius / distance

/// d(x, C), stopping early once it is known to be ≤ `floor`.
#[inline]
fn distance_to_code(space: &Space, words: &[u64], x: u64, floor: u32) -> u32 {
    let mut best = u32::MAX;
    for &c in words {
        let d = space.distance(x, c);
        if d < best {
            best = d;
            if best <= floor {
                break;
            }
        }
    }
    best
}

fn max_distance_over(space: &Space, words: &[u64], n_points: u64, point: impl Fn(u64) -> u64 + Sync + Send) -> u32 {
    let ceiling = space.m().min(space.n());
    par::fold_chunks(
        n_points,
        |range| {
            let mut local = 0u32;
            for i in range {
                let d = distance_to_code(space, words, point(i), local);
                if d > local {
                    local = d;
                    if local == ceiling {
                        break;
                    }
                }
            }
            local
        },
        || 0,
        u32::max,
    )
}

/// Covering radius max_x d(x, C). Linear codes only scan one vector per coset.
pub fn covering_radius(code: &Code, cap: u64) -> Result<u32> {
    match &code.kind {
        CodeKind::Linear { pivots, .. } => {
            let space = code.space;
            let free: Vec<u32> = (0..space.n()).filter(|j| !pivots.contains(&(*j as usize))).collect();
            let reps = space.qm().checked_pow(free.len() as u32).unwrap_or(u64::MAX);
            if reps > cap {
                return Err(Error::CapExceeded { size: reps as u128, cap });
            }
            let qm = space.qm();
            let shifts: Vec<u64> = free.iter().map(|&j| qm.pow(space.n() - 1 - j)).collect();
            Ok(max_distance_over(&space, &code.words, reps, move |i| {
                // spread the digits of i over the free coordinates
                let mut x = 0u64;
                let mut rest = i;
                for s in shifts.iter().rev() {
                    x += (rest % qm) * s;
                    rest /= qm;
                }
                x
            }))
        }
        CodeKind::Explicit => covering_radius_exhaustive(code, cap),
    }
}

/// Covering radius by scanning every vector of the space, ignoring any
/// structure of the code.
pub fn covering_radius_exhaustive(code: &Code, cap: u64) -> Result<u32> {
    if code.is_empty() {
        return Err(Error::InvalidParams("empty code".into()));
    }
    code.space.check_cap(cap)?;
    Ok(max_distance_over(&code.space, &code.words, code.space.size(), |x| x))
}

/// Minimum rank distance between distinct codewords.
pub fn min_rank_distance(code: &Code) -> Result<u32> {
    if code.len() < 2 {
        return Err(Error::InvalidParams("minimum distance needs at least two codewords".into()));
    }
    let space = code.space;
    let words = &code.words;
    if code.is_linear() {
        return Ok(words.iter().filter(|&&w| w != 0).map(|&w| space.rank(w)).min().unwrap());
    }
    let best = par::fold_chunks(
        words.len() as u64,
        |range| {
            let mut local = u32::MAX;
            for i in range {
                let a = words[i as usize];
                for &b in &words[i as usize + 1..] {
                    local = local.min(space.distance(a, b));
                }
            }
            local
        },
        || u32::MAX,
        u32::min,
    );
    Ok(best)
}

/// Packed index of a vector (coordinate 0 most significant, base q^m).
pub fn vector_index(x: &RankVector) -> Result<u64> {
    x.index()
}

pub fn index_vector(field: Arc<Field>, n: u32, index: u64) -> Result<RankVector> {
    RankVector::from_index(field, n, index)
}

// -------------------------------------------------------------- skip vectors

/// Run-length difference encoding of a sorted index list: y_0 = x_0,
/// y_i = x_i − x_{i−1} − 1, equal consecutive y written once as `y^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipVector {
    /// (y, multiplicity) pairs.
    pub runs: Vec<(u64, u64)>,
}

impl SkipVector {
    pub fn encode(code: &Code) -> SkipVector {
        SkipVector::from_indices(&code.words)
    }

    /// `indices` must be strictly increasing.
    pub fn from_indices(indices: &[u64]) -> SkipVector {
        let mut runs: Vec<(u64, u64)> = Vec::new();
        let mut prev: Option<u64> = None;
        for &x in indices {
            let y = match prev {
                None => x,
                Some(p) => x - p - 1,
            };
            prev = Some(x);
            match runs.last_mut() {
                Some((v, k)) if *v == y => *k += 1,
                _ => runs.push((y, 1)),
            }
        }
        SkipVector { runs }
    }

    pub fn indices(&self) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        let mut next: u64 = 0;
        for &(y, k) in &self.runs {
            for _ in 0..k {
                let x = next.checked_add(y).ok_or_else(|| Error::OutOfRange("skip vector overflows".into()))?;
                out.push(x);
                next = x + 1;
            }
        }
        Ok(out)
    }

    pub fn decode(&self, field: Arc<Field>, n: u32) -> Result<Code> {
        Code::explicit(field, n, self.indices()?)
    }

    /// Whitespace-separated `y` or `y^k` tokens; TeX-style `y$^k$` and `y^{k}` are accepted.
    pub fn parse(text: &str) -> Result<SkipVector> {
        let cleaned: String = text.chars().filter(|c| !matches!(c, '$' | '{' | '}')).collect();
        let mut runs = Vec::new();
        for tok in cleaned.split_whitespace() {
            let (y, k) = match tok.split_once('^') {
                Some((y, k)) => (y, k),
                None => (tok, "1"),
            };
            let y: u64 = y.parse().map_err(|_| Error::Parse(format!("bad skip-vector token {tok:?}")))?;
            let k: u64 = k.parse().map_err(|_| Error::Parse(format!("bad multiplicity in token {tok:?}")))?;
            if k == 0 {
                return Err(Error::Parse(format!("zero multiplicity in token {tok:?}")));
            }
            runs.push((y, k));
        }
        Ok(SkipVector { runs })
    }
}

impl fmt::Display for SkipVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(y, k)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if k == 1 {
                write!(f, "{y}")?;
            } else {
                write!(f, "{y}^{k}")?;
            }
        }
        Ok(())
    }
}

fn field_header(field: &Field) -> String {
    let default = Field::default_poly(field.q(), field.m());
    if default.as_deref() == Some(field.poly()) {
        format!("gf({}^{})", field.q(), field.m())
    } else {
        field.spec()
    }
}

/// Skip-vector file: `# gf(q^m) n=<n>` header, then tokens.
pub fn format_code_file(code: &Code) -> String {
    format!("# {} n={}\n{}\n", field_header(&code.field), code.n(), SkipVector::encode(code))
}

/// Parses a skip-vector file. The header may be omitted when `fallback`
/// supplies the field and length.
pub fn parse_code_file(text: &str, fallback: Option<(Arc<Field>, u32)>) -> Result<Code> {
    let mut header = None;
    let mut body = String::new();
    for line in text.lines() {
        let t = line.trim();
        if let Some(h) = t.strip_prefix('#') {
            if header.is_none() && h.contains("n=") {
                header = Some(h.trim().to_string());
            }
            continue;
        }
        body.push_str(t);
        body.push(' ');
    }
    let (field, n) = match header {
        Some(h) => {
            let (spec, n) = h
                .rsplit_once("n=")
                .ok_or_else(|| Error::Parse(format!("header {h:?} lacks n=")))?;
            let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad length in header {h:?}")))?;
            (Arc::new(Field::from_spec(spec.trim())?), n)
        }
        None => fallback.ok_or_else(|| Error::Parse("missing `# gf(q^m) n=<n>` header".into()))?,
    };
    SkipVector::parse(&body)?.decode(field, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(m: u32) -> Arc<Field> {
        Arc::new(Field::gf2(m).unwrap())
    }

    #[test]
    fn skip_vector_examples() {
        let sv = SkipVector::parse("0^3").unwrap();
        assert_eq!(sv.indices().unwrap(), vec![0, 1, 2]);
        let code = sv.decode(gf(2), 2).unwrap();
        assert_eq!(covering_radius(&code, DEFAULT_CAP).unwrap(), 1);
        assert_eq!(SkipVector::encode(&code).to_string(), "0^3");
        assert_eq!(SkipVector::parse("164$^2$ 3").unwrap().runs, vec![(164, 2), (3, 1)]);
        assert!(SkipVector::parse("x^2").is_err());
        assert_eq!(SkipVector::from_indices(&[0]).to_string(), "0");
    }

    #[test]
    fn gabidulin_small() {
        let f = gf(2);
        let c = gabidulin_generator(f.clone(), 2, 1, 1, &[f.one(), f.alpha()]).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(min_rank_distance(&c).unwrap(), 2);
        let f4 = gf(4);
        let c = gabidulin_default(f4, 3, 2).unwrap();
        assert_eq!(c.len(), 256);
        assert_eq!(min_rank_distance(&c).unwrap(), 2);
        assert!(gabidulin_generator(f.clone(), 2, 1, 2, &[f.one(), f.alpha()]).is_err());
        assert!(gabidulin_generator(f.clone(), 2, 1, 1, &[f.one(), f.one()]).is_err());
    }

    #[test]
    fn mrd_shapes() {
        let c = mrd_construct(2, 2, 2, 2).unwrap();
        assert_eq!((c.len(), min_rank_distance(&c).unwrap()), (4, 2));
        let c = mrd_construct(2, 2, 4, 2).unwrap();
        assert_eq!((c.len(), min_rank_distance(&c).unwrap()), (16, 2));
        let c = mrd_construct(2, 2, 3, 2).unwrap();
        assert_eq!((c.len(), min_rank_distance(&c).unwrap()), (8, 2));
        assert_eq!(mrd_construct(2, 2, 2, 3).unwrap().words(), &[0]);
    }

    #[test]
    fn linear_radius_matches_exhaustive() {
        let c = gabidulin_default(gf(3), 3, 1).unwrap();
        let fast = covering_radius(&c, DEFAULT_CAP).unwrap();
        let slow = covering_radius_exhaustive(&c.clone().into_explicit(), DEFAULT_CAP).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(fast, 2);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(Code::explicit(gf(2), 2, vec![1, 1]).is_err());
        assert!(Code::explicit(gf(2), 2, vec![16]).is_err());
    }

    #[test]
    fn code_file_round_trip() {
        let c = Code::explicit(gf(4), 3, vec![135, 825, 860, 1281, 1759, 2282, 3042]).unwrap();
        let text = format_code_file(&c);
        assert!(text.starts_with("# gf(2^4) n=3\n"));
        assert_eq!(parse_code_file(&text, None).unwrap(), c);
    }
}
