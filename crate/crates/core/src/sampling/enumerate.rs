//! Exhaustive enumeration of small Latin squares and rectangles.

use crate::error::{Error, Result};
use crate::latin::{LatinRectangle, LatinSquare};

pub const MAX_SQUARE_ORDER: usize = 5;
pub const MAX_RECTANGLE_ORDER: usize = 7;
pub const MAX_RECTANGLE_CELLS: usize = 18;

/// Whether `enumerate_rectangles(k, n)` is allowed.
pub fn rectangle_guard(k: usize, n: usize) -> bool {
    (1..=n).contains(&k) && n <= MAX_RECTANGLE_ORDER && (k <= 2 || k * n <= MAX_RECTANGLE_CELLS)
}

/// Cell-by-cell backtracking over `k x n` arrays, yielding complete Latin
/// rectangles in lexicographic row-major order.
pub struct GridEnumerator {
    k: usize,
    n: usize,
    cells: Vec<u16>,
    next_try: Vec<u16>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    pos: usize,
    done: bool,
}

impl GridEnumerator {
    fn new(k: usize, n: usize) -> Self {
        GridEnumerator {
            k,
            n,
            cells: vec![0; k * n],
            next_try: vec![0; k * n + 1],
            row_used: vec![0; k],
            col_used: vec![0; n],
            pos: 0,
            done: false,
        }
    }

    fn unassign(&mut self, pos: usize) {
        let (r, c) = (pos / self.n, pos % self.n);
        let bit = !(1u32 << self.cells[pos]);
        self.row_used[r] &= bit;
        self.col_used[c] &= bit;
    }

    fn advance(&mut self) -> bool {
        let total = self.k * self.n;
        loop {
            if self.pos == total {
                return true;
            }
            let (r, c) = (self.pos / self.n, self.pos % self.n);
            let blocked = self.row_used[r] | self.col_used[c];
            let start = self.next_try[self.pos] as usize;
            match (start..self.n).find(|&s| blocked >> s & 1 == 0) {
                Some(s) => {
                    self.cells[self.pos] = s as u16;
                    self.row_used[r] |= 1 << s;
                    self.col_used[c] |= 1 << s;
                    self.next_try[self.pos] = s as u16 + 1;
                    self.pos += 1;
                    self.next_try[self.pos] = 0;
                }
                None => {
                    if self.pos == 0 {
                        return false;
                    }
                    self.pos -= 1;
                    self.unassign(self.pos);
                }
            }
        }
    }
}

impl Iterator for GridEnumerator {
    type Item = Vec<u16>;

    fn next(&mut self) -> Option<Vec<u16>> {
        if self.done {
            return None;
        }
        if self.pos == self.k * self.n {
            // Step back from the previous solution.
            self.pos -= 1;
            self.unassign(self.pos);
        }
        if self.advance() {
            Some(self.cells.clone())
        } else {
            self.done = true;
            None
        }
    }
}

/// Every Latin square of order `n <= 5`, each once, in lexicographic order.
pub fn enumerate_squares(n: usize) -> Result<impl Iterator<Item = LatinSquare>> {
    if n == 0 || n > MAX_SQUARE_ORDER {
        return Err(Error::SizeGuard(format!(
            "square enumeration needs 1 <= n <= {MAX_SQUARE_ORDER}, got {n}"
        )));
    }
    Ok(GridEnumerator::new(n, n).map(move |cells| LatinSquare::from_cells_unchecked(n, cells)))
}

/// Every `k x n` Latin rectangle inside [`rectangle_guard`], in lexicographic order.
pub fn enumerate_rectangles(k: usize, n: usize) -> Result<impl Iterator<Item = LatinRectangle>> {
    if !rectangle_guard(k, n) {
        return Err(Error::SizeGuard(format!(
            "rectangle enumeration of {k} x {n} is outside the guard"
        )));
    }
    Ok(GridEnumerator::new(k, n)
        .map(move |cells| LatinRectangle::from_cells_unchecked(k, n, cells)))
}
