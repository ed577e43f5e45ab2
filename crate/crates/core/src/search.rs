//! Constructive and exhaustive searches for covering codes: the staged
//! greedy (JSL) construction, steepest-descent local search, and brute-force
//! certificates that no code of a given size (or linear dimension) exists.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{covering_radius_exhaustive, gabidulin_default, mrd_construct, rref_field, Code};
use crate::error::{Error, Result};
use crate::finite_field::{Field, FieldElement};
use crate::qcombinatorics::ball_volume;
use crate::rank_space::{Space, DEFAULT_CAP};

/// Bitmap of covered vectors.
#[derive(Clone, Debug)]
pub struct CoverState {
    bits: Vec<u64>,
    size: u64,
    uncovered: u64,
}

impl CoverState {
    pub fn new(size: u64) -> CoverState {
        CoverState { bits: vec![0; size.div_ceil(64) as usize], size, uncovered: size }
    }

    #[inline]
    pub fn is_covered(&self, x: u64) -> bool {
        self.bits[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    /// Marks x; returns true if it was uncovered.
    #[inline]
    pub fn cover(&mut self, x: u64) -> bool {
        let w = &mut self.bits[(x >> 6) as usize];
        let b = 1u64 << (x & 63);
        if *w & b == 0 {
            *w |= b;
            self.uncovered -= 1;
            true
        } else {
            false
        }
    }

    pub fn count_uncovered(&self) -> u64 {
        self.uncovered
    }

    /// Popcount recomputation (for checking the running count).
    pub fn recount(&self) -> u64 {
        self.size - self.bits.iter().map(|w| w.count_ones() as u64).sum::<u64>()
    }

    pub fn first_uncovered(&self) -> Option<u64> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, &w)| w != u64::MAX)
            .map(|(i, &w)| i as u64 * 64 + (!w).trailing_zeros() as u64)
            .filter(|&x| x < self.size)
    }
}

fn ball(space: &Space, rho: u32, cap: u64) -> Result<Vec<u64>> {
    space.ball_offsets(rho, cap)
}

// ------------------------------------------------------------------ JSL

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JslOptions {
    /// Start from an (n, n−2ρ) MRD code when 2ρ ≤ n, else from {0}.
    pub seed_mrd: bool,
    /// Extra randomized runs (random tie-breaking); the best code wins.
    pub restarts: u32,
    pub seed: u64,
    pub cap: u64,
}

impl Default for JslOptions {
    fn default() -> Self {
        JslOptions { seed_mrd: true, restarts: 0, seed: 0, cap: DEFAULT_CAP }
    }
}

/// Staged greedy covering: at each weight level i (number of still-uncovered
/// vectors a ball would cover), select a maximal family of weight-i balls
/// with pairwise disjoint uncovered parts, then drop to the next level.
/// Restart 0 breaks ties by lowest index; further restarts break them at
/// random. The result is re-verified independently.
pub fn jsl_construct(q: u32, m: u32, n: u32, rho: u32, opts: &JslOptions) -> Result<Code> {
    let field = Arc::new(Field::default_or_first(q, m)?);
    let space = Space::of_field(&field, n)?;
    space.check_cap(opts.cap)?;
    if rho >= m.min(n) {
        return Code::explicit(field, n, vec![0]);
    }
    let offsets = ball(&space, rho, opts.cap)?;
    let seed_words: Vec<u64> = if opts.seed_mrd && 2 * rho < n && rho > 0 {
        mrd_construct(q, m, n, 2 * rho + 1)?.words().to_vec()
    } else {
        vec![0]
    };
    let mut best: Option<Vec<u64>> = None;
    for r in 0..=opts.restarts {
        let mut rng = (r > 0).then(|| ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64)));
        let words = jsl_run(&space, &offsets, &seed_words, rng.as_mut());
        if best.as_ref().map_or(true, |b| words.len() < b.len()) {
            best = Some(words);
        }
    }
    let code = Code::explicit(field, n, best.unwrap())?;
    let radius = covering_radius_exhaustive(&code, opts.cap)?;
    if radius > rho {
        return Err(Error::InvalidParams(format!("internal: greedy code has radius {radius} > {rho}")));
    }
    Ok(code)
}

fn jsl_run(space: &Space, offsets: &[u64], seed: &[u64], mut rng: Option<&mut ChaCha8Rng>) -> Vec<u64> {
    let size = space.size() as usize;
    let v = offsets.len() as u32;
    // weight[c] = uncovered vectors in B_ρ(c); the ball is symmetric, so the
    // columns touching row x are exactly the centers in B_ρ(x)
    let mut weight = vec![v; size];
    let mut level_count = vec![0u64; v as usize + 1];
    level_count[v as usize] = size as u64;
    let mut cover = CoverState::new(space.size());
    let mut chosen = Vec::new();

    let mut take = |c: u64, weight: &mut Vec<u32>, level_count: &mut Vec<u64>, cover: &mut CoverState| {
        chosen.push(c);
        for &o in offsets {
            let x = space.add(c, o);
            if cover.cover(x) {
                for &o2 in offsets {
                    let c2 = space.add(x, o2) as usize;
                    level_count[weight[c2] as usize] -= 1;
                    weight[c2] -= 1;
                    level_count[weight[c2] as usize] += 1;
                }
            }
        }
    };

    for &c in seed {
        take(c, &mut weight, &mut level_count, &mut cover);
    }
    let mut level = v;
    while cover.count_uncovered() > 0 {
        while level > 0 && level_count[level as usize] == 0 {
            level -= 1;
        }
        if level == 0 {
            break;
        }
        match rng.as_deref_mut() {
            None => {
                // one ascending sweep selects a maximal disjoint family
                for c in 0..size {
                    if weight[c] == level {
                        take(c as u64, &mut weight, &mut level_count, &mut cover);
                    }
                }
            }
            Some(rng) => {
                let mut cands: Vec<usize> = (0..size).filter(|&c| weight[c] == level).collect();
                cands.shuffle(rng);
                for c in cands {
                    if weight[c] == level {
                        take(c as u64, &mut weight, &mut level_count, &mut cover);
                    }
                }
            }
        }
    }
    let mut out = chosen;
    out.sort_unstable();
    out.dedup();
    out
}

// -------------------------------------------------------------- local search

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Moves per restart without improvement before restarting.
    pub max_iterations: u64,
    pub max_restarts: u32,
    pub random_seed: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_iterations: 2_000, max_restarts: 20, random_seed: 1, time_limit: None }
    }
}

/// Hill climbing over size-K codes, minimizing the number of uncovered
/// vectors. A move replaces one random codeword by one of its (q^m − 1)·n
/// single-coordinate modifications; the best move is taken (sideways moves
/// allowed). Returns a code only once everything is covered.
pub fn local_search(q: u32, m: u32, n: u32, rho: u32, k: usize, budget: &SearchBudget) -> Result<Option<Code>> {
    let field = Arc::new(Field::default_or_first(q, m)?);
    let space = Space::of_field(&field, n)?;
    space.check_cap(DEFAULT_CAP)?;
    if k == 0 || k as u64 > space.size() {
        return Err(Error::InvalidParams(format!("code size {k} out of range")));
    }
    let offsets = ball(&space, rho, DEFAULT_CAP)?;
    let size = space.size() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.random_seed);
    let start = Instant::now();
    let qm = space.qm();

    for _restart in 0..=budget.max_restarts {
        let mut count = vec![0u32; size];
        let mut words: Vec<u64> = Vec::with_capacity(k);
        let mut present = std::collections::HashSet::new();
        while words.len() < k {
            let c = rng.gen_range(0..space.size());
            if present.insert(c) {
                words.push(c);
            }
        }
        for &c in &words {
            for &o in &offsets {
                count[space.add(c, o) as usize] += 1;
            }
        }
        let mut uncovered = count.iter().filter(|&&x| x == 0).count() as u64;
        let mut stale = 0u64;
        while uncovered > 0 && stale < budget.max_iterations {
            if budget.time_limit.is_some_and(|t| start.elapsed() > t) {
                return Ok(None);
            }
            let i = rng.gen_range(0..k);
            let old = words[i];
            // loss: vectors only covered by `old`
            for &o in &offsets {
                count[space.add(old, o) as usize] -= 1;
            }
            let loss = offsets.iter().filter(|&&o| count[space.add(old, o) as usize] == 0).count() as i64;
            let mut best: Option<(i64, u64)> = None;
            for j in 0..n {
                let shift = qm.pow(n - 1 - j);
                let cur = space.coord(old, j);
                for val in 0..qm {
                    if val == cur {
                        continue;
                    }
                    let cand = old - cur * shift + val * shift;
                    if present.contains(&cand) {
                        continue;
                    }
                    let gain = offsets.iter().filter(|&&o| count[space.add(cand, o) as usize] == 0).count() as i64;
                    let better = match best {
                        None => true,
                        Some((g, _)) => gain > g || (gain == g && rng.gen_bool(0.5)),
                    };
                    if better {
                        best = Some((gain, cand));
                    }
                }
            }
            let (gain, cand) = match best {
                Some((g, c)) if g >= loss => (g, c),
                _ => (loss, old),
            };
            for &o in &offsets {
                count[space.add(cand, o) as usize] += 1;
            }
            if cand != old {
                present.remove(&old);
                present.insert(cand);
                words[i] = cand;
            }
            let next = (uncovered as i64 + loss - gain) as u64;
            if next < uncovered {
                stale = 0;
            } else {
                stale += 1;
            }
            uncovered = next;
        }
        if uncovered == 0 {
            let code = Code::explicit(field.clone(), n, words)?;
            let radius = covering_radius_exhaustive(&code, DEFAULT_CAP)?;
            if radius <= rho {
                return Ok(Some(code));
            }
            return Err(Error::InvalidParams(format!("internal: local search code has radius {radius} > {rho}")));
        }
    }
    Ok(None)
}

// ----------------------------------------------------------- exhaustive

/// Upper estimate of search-tree nodes for [`exhaustive_lower_bound`].
pub fn exhaustive_cost_estimate(q: u32, m: u32, n: u32, rho: u32, k: usize) -> f64 {
    let v = ball_volume(q, m, n, rho).to_f64().unwrap_or(f64::INFINITY);
    v.powi(k.saturating_sub(1) as i32)
}

/// True iff no code of size K has covering radius ≤ ρ (so K_R > K).
///
/// Codeword 0 is fixed (translation invariance). Each level covers the
/// lowest-index uncovered vector x by branching over every center in
/// B_ρ(x); a branch is cut when the remaining centers cannot possibly cover
/// what is left. Refuses when the node estimate exceeds `budget`.
pub fn exhaustive_lower_bound(q: u32, m: u32, n: u32, rho: u32, k: usize, budget: f64) -> Result<bool> {
    let space = Space::new(q, m, n)?;
    space.check_cap(DEFAULT_CAP)?;
    if k == 0 {
        return Ok(true);
    }
    let estimate = exhaustive_cost_estimate(q, m, n, rho, k);
    if estimate > budget {
        return Err(Error::Intractable { estimate, budget });
    }
    let offsets = ball(&space, rho, DEFAULT_CAP)?;
    let mut count = vec![0u32; space.size() as usize];
    let mut uncovered = space.size();
    place(&space, &offsets, &mut count, &mut uncovered, 0, 1);
    let found = search_cover(&space, &offsets, &mut count, &mut uncovered, k - 1, 0);
    Ok(!found)
}

fn place(space: &Space, offsets: &[u64], count: &mut [u32], uncovered: &mut u64, c: u64, sign: i32) {
    for &o in offsets {
        let x = space.add(c, o) as usize;
        if sign > 0 {
            if count[x] == 0 {
                *uncovered -= 1;
            }
            count[x] += 1;
        } else {
            count[x] -= 1;
            if count[x] == 0 {
                *uncovered += 1;
            }
        }
    }
}

fn search_cover(
    space: &Space,
    offsets: &[u64],
    count: &mut [u32],
    uncovered: &mut u64,
    remaining: usize,
    from: usize,
) -> bool {
    if *uncovered == 0 {
        return true;
    }
    if remaining == 0 || *uncovered > remaining as u64 * offsets.len() as u64 {
        return false;
    }
    let Some(x) = (from..count.len()).find(|&i| count[i] == 0) else {
        return true;
    };
    for &o in offsets {
        let c = space.add(x as u64, o);
        place(space, offsets, count, uncovered, c, 1);
        let ok = search_cover(space, offsets, count, uncovered, remaining - 1, x + 1);
        place(space, offsets, count, uncovered, c, -1);
        if ok {
            return true;
        }
    }
    false
}

// ----------------------------------------------------- linear exhaustive

/// Number of k-dimensional subspaces of GF(q^m)^n (as f64).
pub fn linear_cost_estimate(q: u32, m: u32, n: u32, k: u32) -> f64 {
    let qm = (q as f64).powi(m as i32);
    let mut num = 1.0;
    for i in 0..k {
        num *= (qm.powi((n - i) as i32) - 1.0) / (qm.powi((i + 1) as i32) - 1.0);
    }
    num * qm.powi(n as i32)
}

/// True iff no k-dimensional GF(q^m)-linear code of length n has covering
/// radius ≤ ρ. Enumerates every subspace once through its reduced echelon
/// generator; a Gabidulin code is tried first as a quick witness.
pub fn linear_exhaustive(q: u32, m: u32, n: u32, rho: u32, k: u32, budget: f64) -> Result<bool> {
    if k > n {
        return Err(Error::InvalidParams(format!("dimension {k} > n = {n}")));
    }
    if k == n || rho >= m.min(n) {
        return Ok(false);
    }
    let field = Arc::new(Field::default_or_first(q, m)?);
    let space = Space::of_field(&field, n)?;
    space.check_cap(DEFAULT_CAP)?;
    if k == 0 {
        return Ok(covering_radius_exhaustive(&Code::explicit(field, n, vec![0])?, DEFAULT_CAP)? > rho);
    }
    if n <= m {
        let g = gabidulin_default(field.clone(), n, k)?;
        if crate::codes::covering_radius(&g, DEFAULT_CAP)? <= rho {
            return Ok(false);
        }
    }
    let estimate = linear_cost_estimate(q, m, n, k);
    if estimate > budget {
        return Err(Error::Intractable { estimate, budget });
    }
    let elements: Vec<FieldElement> = field.elements().collect();
    for pivots in combinations(n as usize, k as usize) {
        // free slots: row i, column j > pivots[i], j not a pivot
        let slots: Vec<(usize, usize)> = (0..k as usize)
            .flat_map(|i| {
                let piv = pivots.clone();
                ((pivots[i] + 1)..n as usize).filter(move |j| !piv.contains(j)).map(move |j| (i, j))
            })
            .collect();
        let mut digits = vec![0usize; slots.len()];
        loop {
            let mut rows = vec![vec![field.zero(); n as usize]; k as usize];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = field.one();
            }
            for (s, &(i, j)) in slots.iter().enumerate() {
                rows[i][j] = elements[digits[s]];
            }
            if covers_linear(&field, &space, rows, rho)? {
                return Ok(false);
            }
            if !increment(&mut digits, elements.len()) {
                break;
            }
        }
    }
    Ok(true)
}

fn covers_linear(field: &Arc<Field>, space: &Space, mut rows: Vec<Vec<FieldElement>>, rho: u32) -> Result<bool> {
    let pivots = rref_field(field, &mut rows);
    let code = Code::linear(field.clone(), rows, DEFAULT_CAP)?;
    let words = code.words();
    let free: Vec<u32> = (0..space.n()).filter(|j| !pivots.contains(&(*j as usize))).collect();
    let qm = space.qm();
    let reps = qm.pow(free.len() as u32);
    for i in 0..reps {
        let mut x = 0u64;
        let mut rest = i;
        for &j in free.iter().rev() {
            x += (rest % qm) * qm.pow(space.n() - 1 - j);
            rest /= qm;
        }
        if !words.iter().any(|&c| space.distance(x, c) <= rho) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_state_counts() {
        let mut s = CoverState::new(130);
        assert!(s.cover(0));
        assert!(!s.cover(0));
        assert!(s.cover(129));
        assert_eq!(s.count_uncovered(), 128);
        assert_eq!(s.recount(), 128);
        assert_eq!(s.first_uncovered(), Some(1));
    }

    #[test]
    fn jsl_tiny() {
        let c = jsl_construct(2, 2, 2, 1, &JslOptions::default()).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn exhaustive_tiny() {
        assert!(exhaustive_lower_bound(2, 2, 2, 1, 2, 1e6).unwrap());
        assert!(!exhaustive_lower_bound(2, 2, 2, 1, 3, 1e6).unwrap());
        assert!(matches!(exhaustive_lower_bound(2, 4, 4, 1, 290, 1e6), Err(Error::Intractable { .. })));
    }

    #[test]
    fn local_search_tiny() {
        let c = local_search(2, 2, 2, 1, 3, &SearchBudget::default()).unwrap().unwrap();
        assert_eq!(c.len(), 3);
        assert!(local_search(2, 2, 2, 1, 2, &SearchBudget { max_restarts: 3, ..Default::default() })
            .unwrap()
            .is_none());
    }

    #[test]
    fn linear_tiny() {
        // k = 1 in GF(4)^2 with ρ = 1: a single line already covers
        assert!(!linear_exhaustive(2, 2, 2, 1, 1, 1e9).unwrap());
        assert!(linear_exhaustive(2, 2, 2, 1, 0, 1e9).unwrap());
    }
}
