//! Completing rectangles to squares one uniformly random row at a time, and
//! sampling rectangles.

use rand::seq::SliceRandom;
use rand::Rng;

use super::enumerate::{enumerate_rectangles, rectangle_guard};
use super::jm::JmSampler;
use super::permanent::AvailabilityMatrix;
use crate::error::{Error, Result};
use crate::latin::{LatinGrid, LatinRectangle, LatinSquare};

/// Largest order for which rows are drawn exactly uniformly.
pub const UNIFORM_ROW_MAX: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub square: LatinSquare,
    /// False when some row came from the greedy fallback.
    pub uniform: bool,
}

/// A uniformly random perfect matching (column -> symbol) of the
/// availability graph, by a subset dynamic program over symbol sets.
///
/// `ways[mask]` counts matchings of columns `0..|mask|` onto exactly `mask`.
pub fn uniform_row(avail: &AvailabilityMatrix, rng: &mut impl Rng) -> Result<Option<Vec<u16>>> {
    let n = avail.n();
    if n > UNIFORM_ROW_MAX {
        return Err(Error::SizeGuard(format!(
            "uniform row sampling needs n <= {UNIFORM_ROW_MAX}, got {n}"
        )));
    }
    let full = (1usize << n) - 1;
    let mut ways = vec![0u128; full + 1];
    ways[0] = 1;
    for mask in 1..=full {
        let c = mask.count_ones() as usize - 1;
        let mut bits = mask & avail.row_mask(c) as usize;
        let mut total = 0u128;
        while bits != 0 {
            let s = bits.trailing_zeros();
            bits &= bits - 1;
            total += ways[mask & !(1 << s)];
        }
        ways[mask] = total;
    }
    if ways[full] == 0 {
        return Ok(None);
    }
    let mut row = vec![0u16; n];
    let mut mask = full;
    for c in (0..n).rev() {
        let mut target = rng.random_range(0..ways[mask]);
        let mut bits = mask & avail.row_mask(c) as usize;
        loop {
            let s = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let w = ways[mask & !(1 << s)];
            if target < w {
                row[c] = s as u16;
                mask &= !(1 << s);
                break;
            }
            target -= w;
        }
    }
    Ok(Some(row))
}

/// Random-order greedy matching repaired by augmenting paths. Finds a perfect
/// matching whenever one exists; the distribution is not uniform.
pub fn greedy_row(avail: &AvailabilityMatrix, rng: &mut impl Rng) -> Option<Vec<u16>> {
    let n = avail.n();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|c| {
            let mut v: Vec<usize> = (0..n).filter(|&s| avail.get(c, s)).collect();
            v.shuffle(rng);
            v
        })
        .collect();
    let mut sym_of = vec![usize::MAX; n];
    let mut col_of = vec![usize::MAX; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &c in &order {
        if let Some(&s) = adj[c].iter().find(|&&s| col_of[s] == usize::MAX) {
            sym_of[c] = s;
            col_of[s] = c;
        }
    }
    fn augment(
        c: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        sym_of: &mut [usize],
        col_of: &mut [usize],
    ) -> bool {
        for &s in &adj[c] {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            if col_of[s] == usize::MAX || augment(col_of[s], adj, seen, sym_of, col_of) {
                sym_of[c] = s;
                col_of[s] = c;
                return true;
            }
        }
        false
    }
    for &c in &order {
        if sym_of[c] == usize::MAX {
            let mut seen = vec![false; n];
            if !augment(c, &adj, &mut seen, &mut sym_of, &mut col_of) {
                return None;
            }
        }
    }
    Some(sym_of.into_iter().map(|s| s as u16).collect())
}

/// Extends `rect` to a full square, appending rows drawn uniformly from the
/// perfect matchings of each availability graph (greedy beyond order 20).
pub fn random_completion(rect: &LatinRectangle, rng: &mut impl Rng) -> Result<Completion> {
    let n = rect.n();
    let mut current = rect.clone();
    let uniform = n <= UNIFORM_ROW_MAX;
    while current.k() < n {
        let avail = AvailabilityMatrix::of(&current);
        let row = if uniform {
            uniform_row(&avail, rng)?
        } else {
            greedy_row(&avail, rng)
        };
        let row = row.ok_or(Error::CompletionFailed(current.k()))?;
        current = current.with_row(&row)?;
    }
    let square = current
        .into_square()
        .expect("a rectangle with n rows is a square");
    Ok(Completion { square, uniform })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RectangleMode {
    /// Uniform over the enumerated list; only inside the enumeration guard.
    ExactTiny,
    /// The first `k` rows of a Jacobson–Matthews square. Not uniform over
    /// rectangles in general.
    SquarePrefix,
}

/// Uniform draws from a cached list of all `k x n` rectangles.
pub struct ExactTinySampler {
    all: Vec<LatinRectangle>,
}

impl ExactTinySampler {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        Ok(ExactTinySampler {
            all: enumerate_rectangles(k, n)?.collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn all(&self) -> &[LatinRectangle] {
        &self.all
    }

    /// Index into [`all`](Self::all) of a uniform draw.
    pub fn sample_index(&self, rng: &mut impl Rng) -> usize {
        rng.random_range(0..self.all.len())
    }

    pub fn sample(&self, rng: &mut impl Rng) -> LatinRectangle {
        self.all[self.sample_index(rng)].clone()
    }
}

pub fn sample_rectangle<R: Rng>(
    k: usize,
    n: usize,
    mode: RectangleMode,
    rng: &mut R,
) -> Result<LatinRectangle> {
    match mode {
        RectangleMode::ExactTiny => {
            if !rectangle_guard(k, n) {
                return Err(Error::SizeGuard(format!(
                    "exact rectangle sampling of {k} x {n} is outside the enumeration guard"
                )));
            }
            Ok(ExactTinySampler::new(k, n)?.sample(rng))
        }
        RectangleMode::SquarePrefix => {
            if k == 0 || k > n {
                return Err(Error::KOutOfRange { k, n });
            }
            let mut sampler = JmSampler::with_defaults(n, 1, &mut *rng);
            let sq = sampler.next().expect("one sample requested");
            sq.prefix(k)
        }
    }
}

/// Probability of `square` under [`random_completion`] of its first `k` rows:
/// the product over later rows of one over the row-extension count.
pub fn completion_probability(square: &LatinSquare, k: usize) -> Result<f64> {
    let n = square.n();
    let mut p = 1.0;
    for i in k..n {
        let avail = if i == 0 {
            AvailabilityMatrix::all_ones(n)
        } else {
            AvailabilityMatrix::of(&square.prefix(i)?)
        };
        p /= avail.permanent()? as f64;
    }
    Ok(p)
}

/// Counts of how often `cell (row, col)` holds `sym` over all `k x n`
/// rectangles, as `(hits, total)`.
pub fn exact_entry_frequency(
    k: usize,
    n: usize,
    row: usize,
    col: usize,
    sym: usize,
) -> Result<(u64, u64)> {
    let mut hits = 0u64;
    let mut total = 0u64;
    for rect in enumerate_rectangles(k, n)? {
        total += 1;
        if rect.get(row, col) == sym {
            hits += 1;
        }
    }
    Ok((hits, total))
}

/// Over all squares of order `n`, the ratio max/min of the number of
/// completions of each `k`-row prefix, i.e. of Pr(first k rows = Q).
pub fn prefix_measure_ratio(n: usize, k: usize) -> Result<f64> {
    use std::collections::HashMap;
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let mut counts: HashMap<Vec<u16>, u64> = HashMap::new();
    for sq in super::enumerate_squares(n)? {
        *counts.entry(sq.cells()[..k * n].to_vec()).or_default() += 1;
    }
    let max = counts.values().copied().max().unwrap_or(0);
    let min = counts.values().copied().min().unwrap_or(0);
    Ok(max as f64 / min as f64)
}
