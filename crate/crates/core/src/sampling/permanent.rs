//! Counting one-row extensions of a Latin rectangle.
//!
//! The ways to append a row equal the permanent of the availability matrix
//! (column `c`, symbol `s`) = 1 iff `s` does not yet occur in column `c`.
//! For a `k`-row rectangle that matrix is `(n - k)`-regular, which gives
//! Bregman's upper bound and the van der Waerden (Egorychev–Falikman) lower
//! bound in closed form.

use crate::error::{Error, Result};
use crate::latin::{LatinGrid, LatinRectangle};

/// Largest order accepted by [`AvailabilityMatrix::permanent`].
pub const RYSER_MAX: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityMatrix {
    n: usize,
    /// Row `c` as a bitmask over symbols.
    rows: Vec<u64>,
}

impl AvailabilityMatrix {
    pub fn of(rect: &LatinRectangle) -> Self {
        let n = rect.n();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut rows = vec![full; n];
        for r in 0..rect.k() {
            for (c, &s) in rect.row(r).iter().enumerate() {
                rows[c] &= !(1u64 << s);
            }
        }
        AvailabilityMatrix { n, rows }
    }

    /// The formal `k = 0` case.
    pub fn all_ones(n: usize) -> Self {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        AvailabilityMatrix {
            n,
            rows: vec![full; n],
        }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        if n > 64 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("availability matrix must be square, n <= 64".into()));
        }
        let rows = rows
            .iter()
            .map(|r| r.iter().enumerate().fold(0u64, |m, (j, &b)| m | (b as u64) << j))
            .collect();
        Ok(AvailabilityMatrix { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, c: usize, s: usize) -> bool {
        self.rows[c] >> s & 1 == 1
    }

    pub fn row_mask(&self, c: usize) -> u64 {
        self.rows[c]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.count_ones() as usize).collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.n)
            .map(|s| self.rows.iter().filter(|&&r| r >> s & 1 == 1).count())
            .collect()
    }

    /// Exact permanent by Ryser's formula over a Gray-code walk of column subsets.
    ///
    /// Arithmetic wraps modulo 2^128; the permanent of a 0/1 matrix of order
    /// at most 30 is below 30! < 2^108, so the wrapped total is exact.
    pub fn permanent(&self) -> Result<u128> {
        let n = self.n;
        if n > RYSER_MAX {
            return Err(Error::SizeGuard(format!(
                "Ryser permanent needs n <= {RYSER_MAX}, got {n}"
            )));
        }
        if n == 0 {
            return Ok(1);
        }
        // columns[j] = rows having a 1 in column j
        let columns: Vec<Vec<usize>> = (0..n)
            .map(|j| (0..n).filter(|&i| self.get(i, j)).collect())
            .collect();
        let mut sums = vec![0i64; n];
        let mut total: i128 = 0;
        let mut in_set = vec![false; n];
        let mut size = 0usize;
        for g in 1u64..(1u64 << n) {
            let j = g.trailing_zeros() as usize;
            let delta = if in_set[j] { -1 } else { 1 };
            in_set[j] = !in_set[j];
            size = (size as i64 + delta) as usize;
            for &i in &columns[j] {
                sums[i] += delta;
            }
            let mut prod: i128 = 1;
            for &s in &sums {
                if s == 0 {
                    prod = 0;
                    break;
                }
                prod = prod.wrapping_mul(s as i128);
            }
            if size % 2 == 1 {
                total = total.wrapping_sub(prod);
            } else {
                total = total.wrapping_add(prod);
            }
        }
        if n % 2 == 1 {
            total = total.wrapping_neg();
        }
        Ok(total as u128)
    }
}

/// Number of ways to append one row to `rect`.
pub fn count_row_extensions(rect: &LatinRectangle) -> Result<u128> {
    if rect.k() >= rect.n() {
        return Err(Error::InvalidParams(format!(
            "a {} x {} rectangle has no room for another row",
            rect.k(),
            rect.n()
        )));
    }
    AvailabilityMatrix::of(rect).permanent()
}

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

/// `(bregman_upper, evf_lower)` for the one-row extension count of a
/// `k x n` rectangle: `((n-k)!)^(n/(n-k))` and `((n-k)/n)^n * n!`.
pub fn extension_bounds_for(k: usize, n: usize) -> Result<(f64, f64)> {
    if k >= n {
        return Err(Error::InvalidParams(format!("need k < n, got k = {k}, n = {n}")));
    }
    let d = n - k;
    let upper = (n as f64 / d as f64 * ln_factorial(d)).exp();
    let lower = (n as f64 * (d as f64 / n as f64).ln() + ln_factorial(n)).exp();
    Ok((upper, lower))
}

pub fn extension_bounds(rect: &LatinRectangle) -> Result<(f64, f64)> {
    extension_bounds_for(rect.k(), rect.n())
}

/// Bregman's bound `prod_i (r_i!)^(1/r_i)` for an arbitrary 0/1 matrix.
pub fn bregman_bound(m: &AvailabilityMatrix) -> f64 {
    m.row_sums()
        .iter()
        .map(|&r| if r == 0 { f64::NEG_INFINITY } else { ln_factorial(r) / r as f64 })
        .sum::<f64>()
        .exp()
}
