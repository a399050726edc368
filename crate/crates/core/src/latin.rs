//! Latin squares, Latin rectangles and their hypergraph (triple) views.
//!
//! Everything is stored 0-based. External text and JSON use symbols
//! `1..=n`; the conversion happens in [`validate`] and in the codecs.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cell of a partial Latin square seen as a hyperedge `{row, column, symbol}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub row: usize,
    pub col: usize,
    pub sym: usize,
}

impl Triple {
    pub const fn new(row: usize, col: usize, sym: usize) -> Self {
        Triple { row, col, sym }
    }

    /// Number of coordinates in which the two triples agree.
    pub fn agreement(&self, other: &Triple) -> usize {
        (self.row == other.row) as usize
            + (self.col == other.col) as usize
            + (self.sym == other.sym) as usize
    }

    /// True if the triples share at least one vertex of the 3-partite hypergraph.
    pub fn meets(&self, other: &Triple) -> bool {
        self.agreement(other) > 0
    }

    pub fn as_tuple(&self) -> (usize, usize, usize) {
        (self.row, self.col, self.sym)
    }
}

impl From<(usize, usize, usize)> for Triple {
    fn from((row, col, sym): (usize, usize, usize)) -> Self {
        Triple { row, col, sym }
    }
}

/// Read access shared by squares and rectangles.
pub trait LatinGrid {
    /// Number of rows (`k`; equal to `n` for squares).
    fn rows(&self) -> usize;
    /// Order `n`: number of columns and of symbols.
    fn order(&self) -> usize;
    /// Row-major cells.
    fn cells(&self) -> &[u16];

    fn row(&self, r: usize) -> &[u16] {
        let n = self.order();
        &self.cells()[r * n..(r + 1) * n]
    }

    fn get(&self, r: usize, c: usize) -> usize {
        self.cells()[r * self.order() + c] as usize
    }

    /// `inverse_row(r)[s]` is the column holding symbol `s` in row `r`.
    fn inverse_row(&self, r: usize) -> Vec<u16> {
        let mut inv = vec![0u16; self.order()];
        for (c, &s) in self.row(r).iter().enumerate() {
            inv[s as usize] = c as u16;
        }
        inv
    }

    /// All cells as triples, in row-major (= lexicographic) order.
    fn triples(&self) -> Vec<Triple> {
        let n = self.order();
        self.cells()
            .iter()
            .enumerate()
            .map(|(i, &s)| Triple::new(i / n, i % n, s as usize))
            .collect()
    }

    /// The triple view as a validated [`TripleSet`].
    fn triple_view(&self) -> TripleSet {
        TripleSet::from_sorted_unchecked(self.order(), self.triples())
    }

    /// Rows rendered with 1-based symbols.
    fn to_rows_1based(&self) -> Vec<Vec<usize>> {
        (0..self.rows())
            .map(|r| self.row(r).iter().map(|&s| s as usize + 1).collect())
            .collect()
    }
}

/// An `n x n` array in which every row and column is a permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u16>,
}

/// A `k x n` array (`k <= n`) with permutation rows and no repeated symbol in a column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinRectangle {
    k: usize,
    n: usize,
    cells: Vec<u16>,
}

impl LatinGrid for LatinSquare {
    fn rows(&self) -> usize {
        self.n
    }
    fn order(&self) -> usize {
        self.n
    }
    fn cells(&self) -> &[u16] {
        &self.cells
    }
}

impl LatinGrid for LatinRectangle {
    fn rows(&self) -> usize {
        self.k
    }
    fn order(&self) -> usize {
        self.n
    }
    fn cells(&self) -> &[u16] {
        &self.cells
    }
}

/// Which shape [`validate`] should accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Square,
    Rectangle,
}

/// Output of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validated {
    Square(LatinSquare),
    Rectangle(LatinRectangle),
}

/// Checks a 1-based integer grid and converts it to 0-based storage.
///
/// Cells are scanned in row-major order and the first violation found is
/// reported: out-of-range symbol, then a repeat within the row, then a
/// repeat within the column.
pub fn validate(grid: &[Vec<i64>], kind: GridKind) -> Result<Validated> {
    let k = grid.len();
    let n = grid.first().map_or(0, Vec::len);
    if k == 0 || n == 0 {
        return Err(Error::Shape("empty grid".into()));
    }
    if let Some((r, row)) = grid.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(Error::Shape(format!(
            "row {r} has {} entries, expected {n}",
            row.len()
        )));
    }
    match kind {
        GridKind::Square if k != n => {
            return Err(Error::Shape(format!("{k} rows but {n} columns")));
        }
        GridKind::Rectangle if k > n => {
            return Err(Error::Shape(format!("{k} rows exceed order {n}")));
        }
        _ => {}
    }
    if n > u16::MAX as usize {
        return Err(Error::SizeGuard(format!("order {n} exceeds {}", u16::MAX)));
    }

    let mut cells = Vec::with_capacity(k * n);
    let mut col_seen = vec![false; n * n];
    let mut row_seen = vec![false; n];
    for (r, row) in grid.iter().enumerate() {
        row_seen.fill(false);
        for (c, &v) in row.iter().enumerate() {
            if v < 1 || v > n as i64 {
                return Err(Error::SymbolOutOfRange {
                    row: r,
                    column: c,
                    value: v,
                    n,
                });
            }
            let s = (v - 1) as usize;
            if std::mem::replace(&mut row_seen[s], true) {
                return Err(Error::DuplicateInRow {
                    row: r,
                    symbol: v as usize,
                });
            }
            if std::mem::replace(&mut col_seen[c * n + s], true) {
                return Err(Error::DuplicateInColumn {
                    column: c,
                    symbol: v as usize,
                });
            }
            cells.push(s as u16);
        }
    }
    Ok(match kind {
        GridKind::Square => Validated::Square(LatinSquare { n, cells }),
        GridKind::Rectangle => Validated::Rectangle(LatinRectangle { k, n, cells }),
    })
}

fn check_zero_based(k: usize, n: usize, cells: &[u16]) -> Result<()> {
    if cells.len() != k * n {
        return Err(Error::Shape(format!(
            "{} cells for a {k} x {n} grid",
            cells.len()
        )));
    }
    let grid: Vec<Vec<i64>> = cells
        .chunks(n.max(1))
        .map(|row| row.iter().map(|&s| s as i64 + 1).collect())
        .collect();
    let kind = if k == n {
        GridKind::Square
    } else {
        GridKind::Rectangle
    };
    validate(&grid, kind).map(|_| ())
}

impl LatinSquare {
    /// Builds a square from 0-based rows.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        let cells: Vec<u16> = rows.iter().flatten().map(|&s| s as u16).collect();
        if rows.iter().any(|r| r.len() != n) || rows.iter().flatten().any(|&s| s >= n) {
            return Err(Error::Shape("rows must be 0-based and n x n".into()));
        }
        Self::from_cells(n, cells)
    }

    /// Builds a square from 1-based rows, as written in the external formats.
    pub fn from_rows_1based(rows: &[Vec<i64>]) -> Result<Self> {
        match validate(rows, GridKind::Square)? {
            Validated::Square(sq) => Ok(sq),
            Validated::Rectangle(_) => unreachable!(),
        }
    }

    /// Builds a square from 0-based row-major cells.
    pub fn from_cells(n: usize, cells: Vec<u16>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("empty grid".into()));
        }
        check_zero_based(n, n, &cells)?;
        Ok(LatinSquare { n, cells })
    }

    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<u16>) -> Self {
        debug_assert!(check_zero_based(n, n, &cells).is_ok());
        LatinSquare { n, cells }
    }

    /// `L[r][c] = (r + c) mod n`.
    pub fn cyclic(n: usize) -> Self {
        let cells = (0..n)
            .flat_map(|r| (0..n).map(move |c| ((r + c) % n) as u16))
            .collect();
        LatinSquare { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The first `k` rows.
    pub fn prefix(&self, k: usize) -> Result<LatinRectangle> {
        if k == 0 || k > self.n {
            return Err(Error::KOutOfRange { k, n: self.n });
        }
        Ok(LatinRectangle {
            k,
            n: self.n,
            cells: self.cells[..k * self.n].to_vec(),
        })
    }

    pub fn into_rectangle(self) -> LatinRectangle {
        LatinRectangle {
            k: self.n,
            n: self.n,
            cells: self.cells,
        }
    }

    /// Triples with row, column and symbol all below `k`.
    pub fn induce_subcube(&self, k: usize) -> Result<TripleSet> {
        if k == 0 || k > self.n {
            return Err(Error::KOutOfRange { k, n: self.n });
        }
        let triples = (0..k)
            .flat_map(|r| (0..k).map(move |c| (r, c)))
            .map(|(r, c)| Triple::new(r, c, self.get(r, c)))
            .filter(|t| t.sym < k)
            .collect();
        Ok(TripleSet::from_sorted_unchecked(self.n, triples))
    }
}

impl LatinRectangle {
    /// Builds a rectangle from 0-based rows; `n` is taken from the row length.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) || rows.iter().flatten().any(|&s| s >= n) {
            return Err(Error::Shape("rows must be 0-based with equal length".into()));
        }
        Self::from_cells(k, n, rows.iter().flatten().map(|&s| s as u16).collect())
    }

    pub fn from_rows_1based(rows: &[Vec<i64>]) -> Result<Self> {
        match validate(rows, GridKind::Rectangle)? {
            Validated::Rectangle(rect) => Ok(rect),
            Validated::Square(_) => unreachable!(),
        }
    }

    pub fn from_cells(k: usize, n: usize, cells: Vec<u16>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Shape("empty grid".into()));
        }
        if k > n {
            return Err(Error::Shape(format!("{k} rows exceed order {n}")));
        }
        check_zero_based(k, n, &cells)?;
        Ok(LatinRectangle { k, n, cells })
    }

    pub(crate) fn from_cells_unchecked(k: usize, n: usize, cells: Vec<u16>) -> Self {
        debug_assert!(check_zero_based(k, n, &cells).is_ok());
        LatinRectangle { k, n, cells }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Converts to a square when `k == n`.
    pub fn into_square(self) -> Option<LatinSquare> {
        (self.k == self.n).then_some(LatinSquare {
            n: self.n,
            cells: self.cells,
        })
    }

    /// A copy with an extra 0-based row appended; the row is checked.
    pub fn with_row(&self, row: &[u16]) -> Result<LatinRectangle> {
        let mut cells = self.cells.clone();
        cells.extend_from_slice(row);
        LatinRectangle::from_cells(self.k + 1, self.n, cells)
    }
}

/// A partial Latin square: triples pairwise agreeing in at most one coordinate.
///
/// Stored sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleSet {
    n: usize,
    triples: Vec<Triple>,
}

impl TripleSet {
    /// Validates coordinates and the pairwise agreement invariant.
    pub fn new(n: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let set: BTreeSet<Triple> = triples.into_iter().collect();
        let mut rc: HashMap<(usize, usize), Triple> = HashMap::new();
        let mut rs: HashMap<(usize, usize), Triple> = HashMap::new();
        let mut cs: HashMap<(usize, usize), Triple> = HashMap::new();
        for &t in &set {
            if t.row >= n || t.col >= n || t.sym >= n {
                return Err(Error::TripleOutOfRange {
                    triple: t.as_tuple(),
                    n,
                });
            }
            for (map, key) in [
                (&mut rc, (t.row, t.col)),
                (&mut rs, (t.row, t.sym)),
                (&mut cs, (t.col, t.sym)),
            ] {
                if let Some(prev) = map.insert(key, t) {
                    return Err(Error::Conflict {
                        a: prev.as_tuple(),
                        b: t.as_tuple(),
                    });
                }
            }
        }
        Ok(TripleSet {
            n,
            triples: set.into_iter().collect(),
        })
    }

    pub fn empty(n: usize) -> Self {
        TripleSet {
            n,
            triples: Vec::new(),
        }
    }

    pub(crate) fn from_sorted_unchecked(n: usize, triples: Vec<Triple>) -> Self {
        debug_assert!(triples.windows(2).all(|w| w[0] < w[1]));
        TripleSet { n, triples }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    /// True if no two triples share a row, column or symbol.
    pub fn is_matching(&self) -> bool {
        let mut rows = HashSet::new();
        let mut cols = HashSet::new();
        let mut syms = HashSet::new();
        self.triples
            .iter()
            .all(|t| rows.insert(t.row) && cols.insert(t.col) && syms.insert(t.sym))
    }

    /// Rebuilds a full square; fails unless every cell is covered exactly once.
    pub fn to_square(&self) -> Result<LatinSquare> {
        self.to_grid(self.n).map(|cells| LatinSquare {
            n: self.n,
            cells,
        })
    }

    /// Rebuilds a `k`-row rectangle; every cell of the first `k` rows must be covered.
    pub fn to_rectangle(&self, k: usize) -> Result<LatinRectangle> {
        if k == 0 || k > self.n {
            return Err(Error::KOutOfRange { k, n: self.n });
        }
        self.to_grid(k).map(|cells| LatinRectangle {
            k,
            n: self.n,
            cells,
        })
    }

    fn to_grid(&self, k: usize) -> Result<Vec<u16>> {
        let n = self.n;
        let mut cells = vec![u16::MAX; k * n];
        for t in &self.triples {
            if t.row >= k {
                return Err(Error::IncompleteCover {
                    row: t.row,
                    column: t.col,
                });
            }
            cells[t.row * n + t.col] = t.sym as u16;
        }
        if let Some(i) = cells.iter().position(|&s| s == u16::MAX) {
            return Err(Error::IncompleteCover {
                row: i / n,
                column: i % n,
            });
        }
        Ok(cells)
    }
}

/// A partial Latin square together with an ordering of its triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedTripleSet {
    n: usize,
    sequence: Vec<Triple>,
}

impl OrderedTripleSet {
    pub fn new(n: usize, sequence: Vec<Triple>) -> Result<Self> {
        let set = TripleSet::new(n, sequence.iter().copied())?;
        if set.len() != sequence.len() {
            return Err(Error::InvalidParams("sequence repeats a triple".into()));
        }
        Ok(OrderedTripleSet { n, sequence })
    }

    pub(crate) fn from_unchecked(n: usize, sequence: Vec<Triple>) -> Self {
        OrderedTripleSet { n, sequence }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sequence(&self) -> &[Triple] {
        &self.sequence
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// The first `i` triples as an unordered set.
    pub fn prefix_set(&self, i: usize) -> TripleSet {
        let mut t = self.sequence[..i].to_vec();
        t.sort();
        TripleSet::from_sorted_unchecked(self.n, t)
    }

    pub fn to_set(&self) -> TripleSet {
        self.prefix_set(self.sequence.len())
    }
}

/// A sorted, duplicate-free set of triples with no Latin constraint,
/// e.g. a binomial random 3-partite 3-graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleBag {
    n: usize,
    triples: Vec<Triple>,
}

impl TripleBag {
    pub fn new(n: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let mut triples: Vec<Triple> = triples.into_iter().collect();
        if let Some(t) = triples
            .iter()
            .find(|t| t.row >= n || t.col >= n || t.sym >= n)
        {
            return Err(Error::TripleOutOfRange {
                triple: t.as_tuple(),
                n,
            });
        }
        triples.sort();
        triples.dedup();
        Ok(TripleBag { n, triples })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, triples: Vec<Triple>) -> Self {
        TripleBag { n, triples }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    /// Copy with `t` inserted if absent, removed if present.
    pub fn toggled(&self, t: Triple) -> TripleBag {
        let mut triples = self.triples.clone();
        match triples.binary_search(&t) {
            Ok(i) => {
                triples.remove(i);
            }
            Err(i) => triples.insert(i, t),
        }
        TripleBag { n: self.n, triples }
    }
}

impl From<TripleSet> for TripleBag {
    fn from(set: TripleSet) -> Self {
        TripleBag {
            n: set.n,
            triples: set.triples,
        }
    }
}

/// A 2x2 Latin subsquare: rows `r1 < r2`, columns `c1 < c2`, with
/// `(r1,c1)` and `(r2,c2)` holding `s1`, `(r1,c2)` and `(r2,c1)` holding `s2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Intercalate {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub syms: (usize, usize),
}

impl Intercalate {
    pub fn triples(&self) -> [Triple; 4] {
        let (r1, r2) = self.rows;
        let (c1, c2) = self.cols;
        let (s1, s2) = self.syms;
        [
            Triple::new(r1, c1, s1),
            Triple::new(r1, c2, s2),
            Triple::new(r2, c1, s2),
            Triple::new(r2, c2, s1),
        ]
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples().contains(t)
    }

    pub fn shares_triple(&self, other: &Intercalate) -> bool {
        let mine = self.triples();
        other.triples().iter().any(|t| mine.contains(t))
    }

    pub fn shared_triples(&self, other: &Intercalate) -> usize {
        let mine = self.triples();
        other.triples().iter().filter(|t| mine.contains(t)).count()
    }
}

fn fmt_grid(f: &mut fmt::Formatter<'_>, g: &impl LatinGrid) -> fmt::Result {
    for r in 0..g.rows() {
        let line: Vec<String> = g.row(r).iter().map(|&s| (s + 1).to_string()).collect();
        writeln!(f, "{}", line.join(" "))?;
    }
    Ok(())
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_grid(f, self)
    }
}

impl fmt::Display for LatinRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_grid(f, self)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::figure_one;
    use super::*;
    use proptest::prelude::*;

    fn brute_is_latin(grid: &[Vec<i64>], square: bool) -> bool {
        let k = grid.len();
        let n = grid[0].len();
        if square && k != n || k > n {
            return false;
        }
        let in_range = grid.iter().flatten().all(|&v| 1 <= v && v <= n as i64);
        let rows_ok = grid.iter().all(|row| {
            let mut v = row.clone();
            v.sort();
            v.dedup();
            v.len() == n
        });
        let cols_ok = (0..n).all(|c| {
            let mut v: Vec<i64> = grid.iter().map(|row| row[c]).collect();
            v.sort();
            v.dedup();
            v.len() == k
        });
        in_range && rows_ok && cols_ok
    }

    #[test]
    fn validates_smallest_square() {
        let sq = LatinSquare::from_rows_1based(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(sq.n(), 2);
        assert_eq!(sq.get(0, 1), 1);
    }

    #[test]
    fn validates_figure_one() {
        assert_eq!(figure_one().n(), 5);
    }

    #[test]
    fn rejects_column_duplicate() {
        let err = validate(&[vec![1, 2], vec![1, 2]], GridKind::Square).unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateInColumn {
                column: 0,
                symbol: 1
            }
        );
    }

    #[test]
    fn rejects_row_duplicate_and_range() {
        let err = validate(&[vec![1, 1], vec![2, 2]], GridKind::Square).unwrap_err();
        assert_eq!(err, Error::DuplicateInRow { row: 0, symbol: 1 });
        let err = validate(&[vec![1, 3], vec![2, 1]], GridKind::Square).unwrap_err();
        assert!(matches!(err, Error::SymbolOutOfRange { row: 0, column: 1, .. }));
    }

    #[test]
    fn rectangle_rules() {
        assert!(validate(&[vec![1, 2, 3]], GridKind::Rectangle).is_ok());
        assert!(matches!(
            validate(&[vec![1, 2, 3]], GridKind::Square),
            Err(Error::Shape(_))
        ));
        assert!(validate(&[vec![1, 2], vec![2, 1], vec![1, 2]], GridKind::Rectangle).is_err());
    }

    #[test]
    fn triple_view_of_order_two() {
        let sq = LatinSquare::from_rows_1based(&[vec![1, 2], vec![2, 1]]).unwrap();
        let view = sq.triple_view();
        assert_eq!(
            view.triples(),
            &[
                Triple::new(0, 0, 0),
                Triple::new(0, 1, 1),
                Triple::new(1, 0, 1),
                Triple::new(1, 1, 0)
            ]
        );
    }

    #[test]
    fn grid_view_round_trip_and_incomplete() {
        let sq = figure_one();
        assert_eq!(sq.triple_view().to_square().unwrap(), sq);
        let rect = sq.prefix(3).unwrap();
        assert_eq!(rect.triple_view().to_rectangle(3).unwrap(), rect);
        let partial = TripleSet::new(2, [Triple::new(0, 0, 0)]).unwrap();
        assert!(matches!(
            partial.to_square(),
            Err(Error::IncompleteCover { row: 0, column: 1 })
        ));
    }

    #[test]
    fn triple_set_rejects_conflicts() {
        let err = TripleSet::new(3, [Triple::new(0, 0, 0), Triple::new(0, 0, 1)]).unwrap_err();
        assert!(matches!(err, Error::Conflict { .. }));
        assert!(TripleSet::new(2, [Triple::new(2, 0, 0)]).is_err());
    }

    #[test]
    fn subcube_edge_cases() {
        let sq = figure_one();
        assert_eq!(sq.induce_subcube(5).unwrap(), sq.triple_view());
        let two = LatinSquare::from_rows_1based(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(
            two.induce_subcube(1).unwrap().triples(),
            &[Triple::new(0, 0, 0)]
        );
        assert!(matches!(sq.induce_subcube(0), Err(Error::KOutOfRange { .. })));
        assert!(matches!(sq.induce_subcube(6), Err(Error::KOutOfRange { .. })));
    }

    #[test]
    fn subcube_of_figure_one_matches_filter() {
        let sq = figure_one();
        let expected: Vec<Triple> = sq
            .triples()
            .into_iter()
            .filter(|t| t.row < 2 && t.col < 2 && t.sym < 2)
            .collect();
        // Rows 4 1 / 5 3 (1-based): only (row 0, col 1, symbol 1) survives.
        assert_eq!(expected, vec![Triple::new(0, 1, 0)]);
        assert_eq!(sq.induce_subcube(2).unwrap().triples(), expected.as_slice());
    }

    proptest! {
        #[test]
        fn validate_agrees_with_definition(
            k in 1usize..4, n in 1usize..4, raw in proptest::collection::vec(0i64..5, 16)
        ) {
            let grid: Vec<Vec<i64>> = (0..k).map(|r| (0..n).map(|c| raw[r * 4 + c]).collect()).collect();
            let got = validate(&grid, GridKind::Rectangle).is_ok();
            prop_assert_eq!(got, brute_is_latin(&grid, false));
            let got = validate(&grid, GridKind::Square).is_ok();
            prop_assert_eq!(got, brute_is_latin(&grid, true));
        }

        #[test]
        fn subcube_is_filtered_subset(seed in 0u64..200, k in 1usize..=6) {
            let sq = crate::sampling::jm::sample_one(6, seed);
            let cube = sq.induce_subcube(k).unwrap();
            let full = sq.triple_view();
            for t in cube.triples() {
                prop_assert!(full.contains(t));
                prop_assert!(t.row < k && t.col < k && t.sym < k);
            }
        }

        #[test]
        fn triple_view_pairwise_invariant(seed in 0u64..200) {
            let sq = crate::sampling::jm::sample_one(5, seed);
            let t = sq.triples();
            prop_assert_eq!(t.len(), 25);
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    prop_assert!(t[i].agreement(&t[j]) <= 1);
                }
            }
        }
    }
}
