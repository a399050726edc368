//! Group tables, intercalate-free squares and the corner size for many
//! intercalates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latin::LatinSquare;

pub const MAX_GROUP_ORDER: usize = 1 << 14;
pub const MAX_SEARCH_ORDER: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    /// `(Z/2Z)^q`, elements encoded as `q`-bit integers.
    Boolean(u32),
    /// `Z/mZ`, elements encoded as residues.
    Cyclic(usize),
}

impl GroupSpec {
    pub fn order(&self) -> Option<usize> {
        match *self {
            GroupSpec::Boolean(q) => 1usize.checked_shl(q).filter(|_| q < 64),
            GroupSpec::Cyclic(m) => Some(m),
        }
    }
}

/// Cayley table of the group: XOR for boolean groups, addition mod `m` for
/// cyclic ones.
pub fn group_square(spec: GroupSpec) -> Result<LatinSquare> {
    let n = match spec.order() {
        Some(n) if (1..=MAX_GROUP_ORDER).contains(&n) => n,
        _ => {
            return Err(Error::SizeGuard(format!(
                "group order must lie in 1..={MAX_GROUP_ORDER}, got {spec:?}"
            )))
        }
    };
    let cells = match spec {
        GroupSpec::Boolean(_) => (0..n)
            .flat_map(|r| (0..n).map(move |c| (r ^ c) as u16))
            .collect(),
        GroupSpec::Cyclic(_) => return Ok(LatinSquare::cyclic(n)),
    };
    Ok(LatinSquare::from_cells_unchecked(n, cells))
}

/// A Latin square of order `n <= 9` without intercalates, or `None` when
/// none exists.
///
/// Odd orders use the cyclic table. Even orders run a backtracking search
/// over reduced squares (first row and column in natural order), rejecting a
/// cell as soon as it closes an intercalate. Every square is isotopic to a
/// reduced one and isotopy preserves intercalates, so `None` is a proof.
pub fn search_intercalate_free(n: usize) -> Result<Option<LatinSquare>> {
    if n == 0 || n > MAX_SEARCH_ORDER {
        return Err(Error::SizeGuard(format!(
            "intercalate-free search needs 1 <= n <= {MAX_SEARCH_ORDER}, got {n}"
        )));
    }
    if n % 2 == 1 {
        return Ok(Some(LatinSquare::cyclic(n)));
    }
    let mut cells = vec![u16::MAX; n * n];
    let mut row_used = vec![0u32; n];
    let mut col_used = vec![0u32; n];
    for i in 0..n {
        for (pos, s) in [(i, i), (i * n, i)] {
            cells[pos] = s as u16;
            row_used[pos / n] |= 1 << s;
            col_used[pos % n] |= 1 << s;
        }
    }
    let free: Vec<usize> = (n + 1..n * n).filter(|&p| p % n != 0).collect();
    if search(n, &free, 0, &mut cells, &mut row_used, &mut col_used) {
        Ok(Some(LatinSquare::from_cells_unchecked(n, cells)))
    } else {
        Ok(None)
    }
}

fn closes_intercalate(n: usize, cells: &[u16], r: usize, c: usize, s: u16) -> bool {
    (0..r).any(|r2| {
        let up = cells[r2 * n + c];
        (0..c).any(|c2| cells[r2 * n + c2] == s && cells[r * n + c2] == up)
    })
}

fn search(
    n: usize,
    free: &[usize],
    i: usize,
    cells: &mut [u16],
    row_used: &mut [u32],
    col_used: &mut [u32],
) -> bool {
    let Some(&pos) = free.get(i) else {
        return true;
    };
    let (r, c) = (pos / n, pos % n);
    let blocked = row_used[r] | col_used[c];
    for s in 0..n {
        if blocked >> s & 1 == 1 || closes_intercalate(n, cells, r, c, s as u16) {
            continue;
        }
        cells[pos] = s as u16;
        row_used[r] |= 1 << s;
        col_used[c] |= 1 << s;
        if search(n, free, i + 1, cells, row_used, col_used) {
            return true;
        }
        row_used[r] &= !(1 << s);
        col_used[c] &= !(1 << s);
        cells[pos] = u16::MAX;
    }
    false
}

/// Intercalates in the table of `(Z/2Z)^q` with `k = 2^q`: `k * C(k, 2) / 2`.
pub fn boolean_intercalates(k: u64) -> u64 {
    k * (k * (k - 1) / 2) / 2
}

/// The smallest power of two `k` with `k * C(k, 2) / 2 >= (1 + delta) n^2 / 4`.
pub fn choose_k(delta: f64, n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::NTooSmall(n));
    }
    if delta < 0.0 || !delta.is_finite() {
        return Err(Error::InvalidParams(format!("delta must be finite and >= 0, got {delta}")));
    }
    let need = (1.0 + delta) * (n * n) as f64 / 4.0;
    let mut k: u64 = 2;
    while (boolean_intercalates(k) as f64) < need {
        k *= 2;
    }
    Ok(k as usize)
}
