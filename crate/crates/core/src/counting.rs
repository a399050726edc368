//! Exact intercalate statistics.
//!
//! Grids are counted row pair by row pair: between rows `a` and `b` the
//! intercalates are exactly the 2-cycles of the symbol map `b ∘ a⁻¹`.
//! Partial squares and arbitrary triple sets use the direct definition
//! (all four triples present).

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latin::{
    Intercalate, LatinGrid, LatinRectangle, LatinSquare, Triple, TripleBag, TripleSet,
};

/// Exact search for a maximum disjoint family is only attempted up to this many intercalates.
pub const EXACT_DISJOINT_LIMIT: usize = 24;

/// Something whose intercalates can be enumerated.
pub trait IntercalateHost {
    fn order(&self) -> usize;

    /// Every triple of the host, sorted.
    fn host_triples(&self) -> Vec<Triple>;

    /// All intercalates, sorted lexicographically.
    fn intercalates(&self) -> Vec<Intercalate>;

    fn intercalate_count(&self) -> usize {
        self.intercalates().len()
    }
}

fn grid_intercalates(g: &(impl LatinGrid + Sync)) -> Vec<Intercalate> {
    let k = g.rows();
    let mut found: Vec<Intercalate> = (0..k)
        .into_par_iter()
        .flat_map_iter(|r1| {
            let inv = g.inverse_row(r1);
            let a = g.row(r1);
            (r1 + 1..k).flat_map(move |r2| {
                let b = g.row(r2);
                let inv = inv.clone();
                (0..a.len()).filter_map(move |x| {
                    let (s, t) = (a[x] as usize, b[x] as usize);
                    let y = inv[t] as usize;
                    (x < y && b[y] as usize == s).then_some(Intercalate {
                        rows: (r1, r2),
                        cols: (x, y),
                        syms: (s, t),
                    })
                })
            })
        })
        .collect();
    found.sort_unstable();
    found
}

fn grid_count(g: &(impl LatinGrid + Sync)) -> usize {
    let k = g.rows();
    (0..k)
        .into_par_iter()
        .map(|r1| {
            let inv = g.inverse_row(r1);
            let a = g.row(r1);
            (r1 + 1..k)
                .map(|r2| two_cycles(a, g.row(r2), &inv))
                .sum::<usize>()
        })
        .sum()
}

fn two_cycles(a: &[u16], b: &[u16], inv_a: &[u16]) -> usize {
    (0..a.len())
        .filter(|&x| {
            let y = inv_a[b[x] as usize] as usize;
            x < y && b[y] == a[x]
        })
        .count()
}

/// Number of intercalates between two rows, i.e. 2-cycles of `row_b ∘ row_a⁻¹`.
///
/// Both rows must be permutations of `0..n` with the same `n`.
pub fn row_pair_count(row_a: &[usize], row_b: &[usize]) -> Result<usize> {
    let n = row_a.len();
    let to_perm = |row: &[usize]| -> Result<Vec<u16>> {
        let mut seen = vec![false; n];
        row.iter()
            .map(|&s| {
                if s >= n || std::mem::replace(&mut seen[s], true) {
                    Err(Error::NotAPermutation(n))
                } else {
                    Ok(s as u16)
                }
            })
            .collect()
    };
    if row_b.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    let a = to_perm(row_a)?;
    let b = to_perm(row_b)?;
    let mut inv = vec![0u16; n];
    for (c, &s) in a.iter().enumerate() {
        inv[s as usize] = c as u16;
    }
    Ok(two_cycles(&a, &b, &inv))
}

fn triple_intercalates(triples: &[Triple]) -> Vec<Intercalate> {
    let mut by_row: HashMap<usize, Vec<Triple>> = HashMap::new();
    let mut rows_at: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for &t in triples {
        by_row.entry(t.row).or_default().push(t);
        rows_at.entry((t.col, t.sym)).or_default().push(t.row);
    }
    let present = |t: &Triple| triples.binary_search(t).is_ok();
    let mut found = Vec::new();
    for (&r1, row) in &by_row {
        for (i, a) in row.iter().enumerate() {
            for b in &row[i + 1..] {
                let (a, b) = if a.col < b.col { (a, b) } else { (b, a) };
                if a.col == b.col || a.sym == b.sym {
                    continue;
                }
                let Some(candidates) = rows_at.get(&(a.col, b.sym)) else {
                    continue;
                };
                for &r2 in candidates {
                    if r2 > r1 && present(&Triple::new(r2, b.col, a.sym)) {
                        found.push(Intercalate {
                            rows: (r1, r2),
                            cols: (a.col, b.col),
                            syms: (a.sym, b.sym),
                        });
                    }
                }
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    found
}

impl IntercalateHost for LatinSquare {
    fn order(&self) -> usize {
        self.n()
    }
    fn host_triples(&self) -> Vec<Triple> {
        self.triples()
    }
    fn intercalates(&self) -> Vec<Intercalate> {
        grid_intercalates(self)
    }
    fn intercalate_count(&self) -> usize {
        grid_count(self)
    }
}

impl IntercalateHost for LatinRectangle {
    fn order(&self) -> usize {
        self.n()
    }
    fn host_triples(&self) -> Vec<Triple> {
        self.triples()
    }
    fn intercalates(&self) -> Vec<Intercalate> {
        grid_intercalates(self)
    }
    fn intercalate_count(&self) -> usize {
        grid_count(self)
    }
}

impl IntercalateHost for TripleSet {
    fn order(&self) -> usize {
        self.n()
    }
    fn host_triples(&self) -> Vec<Triple> {
        self.triples().to_vec()
    }
    fn intercalates(&self) -> Vec<Intercalate> {
        triple_intercalates(self.triples())
    }
}

impl IntercalateHost for TripleBag {
    fn order(&self) -> usize {
        self.n()
    }
    fn host_triples(&self) -> Vec<Triple> {
        self.triples().to_vec()
    }
    fn intercalates(&self) -> Vec<Intercalate> {
        triple_intercalates(self.triples())
    }
}

pub fn count_intercalates(x: &impl IntercalateHost) -> usize {
    x.intercalate_count()
}

pub fn enumerate_intercalates(x: &impl IntercalateHost) -> Vec<Intercalate> {
    x.intercalates()
}

/// For each intercalate, the indices of the other intercalates sharing a triple with it.
pub fn intersection_lists(list: &[Intercalate]) -> Vec<Vec<usize>> {
    let mut through: HashMap<Triple, Vec<usize>> = HashMap::new();
    for (i, ic) in list.iter().enumerate() {
        for t in ic.triples() {
            through.entry(t).or_default().push(i);
        }
    }
    list.iter()
        .enumerate()
        .map(|(i, ic)| {
            let mut nbrs: Vec<usize> = ic
                .triples()
                .iter()
                .flat_map(|t| through[t].iter().copied())
                .filter(|&j| j != i)
                .collect();
            nbrs.sort_unstable();
            nbrs.dedup();
            nbrs
        })
        .collect()
}

/// N₂ of a precomputed list: unordered pairs of distinct intercalates sharing a triple.
pub fn shared_pairs_in(list: &[Intercalate]) -> usize {
    intersection_lists(list).iter().map(Vec::len).sum::<usize>() / 2
}

pub fn shared_edge_pairs(x: &impl IntercalateHost) -> usize {
    shared_pairs_in(&x.intercalates())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DisjointMode {
    Exact,
    Greedy,
}

fn greedy_disjoint(list: &[Intercalate]) -> usize {
    let mut used: Vec<Triple> = Vec::new();
    let mut size = 0;
    for ic in list {
        let ts = ic.triples();
        if ts.iter().all(|t| !used.contains(t)) {
            used.extend_from_slice(&ts);
            size += 1;
        }
    }
    size
}

fn exact_disjoint(list: &[Intercalate]) -> usize {
    let nbrs: Vec<u32> = intersection_lists(list)
        .iter()
        .map(|l| l.iter().fold(0u32, |m, &j| m | 1 << j))
        .collect();

    fn search(cand: u32, size: usize, best: &mut usize, nbrs: &[u32]) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        let bit = 1u32 << v;
        search(cand & !bit & !nbrs[v], size + 1, best, nbrs);
        search(cand & !bit, size, best, nbrs);
    }

    let all = if list.is_empty() {
        0
    } else {
        u32::MAX >> (32 - list.len())
    };
    let mut best = greedy_disjoint(list);
    search(all, 0, &mut best, &nbrs);
    best
}

/// N′ for a precomputed, sorted list.
pub fn max_disjoint_in(list: &[Intercalate], mode: DisjointMode) -> Result<usize> {
    match mode {
        DisjointMode::Greedy => Ok(greedy_disjoint(list)),
        DisjointMode::Exact if list.len() > EXACT_DISJOINT_LIMIT => Err(Error::TooLargeForExact {
            count: list.len(),
            limit: EXACT_DISJOINT_LIMIT,
        }),
        DisjointMode::Exact => Ok(exact_disjoint(list)),
    }
}

/// Largest family of pairwise triple-disjoint intercalates (exact) or a
/// greedy maximal family in lexicographic order (a lower bound).
pub fn max_disjoint_family(x: &impl IntercalateHost, mode: DisjointMode) -> Result<usize> {
    max_disjoint_in(&x.intercalates(), mode)
}

/// N, N₂ and N′ together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntercalateStats {
    #[serde(rename = "N")]
    pub total: usize,
    #[serde(rename = "N2")]
    pub shared_pairs: usize,
    #[serde(rename = "Nprime")]
    pub disjoint: usize,
    pub exact: bool,
}

impl IntercalateStats {
    pub fn of_list(list: &[Intercalate]) -> Self {
        let exact = list.len() <= EXACT_DISJOINT_LIMIT;
        let mode = if exact {
            DisjointMode::Exact
        } else {
            DisjointMode::Greedy
        };
        IntercalateStats {
            total: list.len(),
            shared_pairs: shared_pairs_in(list),
            disjoint: max_disjoint_in(list, mode).expect("mode chosen within limit"),
            exact,
        }
    }

    pub fn of(x: &impl IntercalateHost) -> Self {
        Self::of_list(&x.intercalates())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data always serializes")
    }
}

/// N_F: intercalates containing at least one triple of `f`.
pub fn count_through_edges(x: &impl IntercalateHost, f: &[Triple]) -> usize {
    let mut f = f.to_vec();
    f.sort_unstable();
    x.intercalates()
        .iter()
        .filter(|ic| ic.triples().iter().any(|t| f.binary_search(t).is_ok()))
        .count()
}

/// Intercalates that contain a triple of the matching `m` and whose other
/// three vertices (one row, one column, one symbol) avoid every vertex used by `m`.
pub fn count_good(x: &impl IntercalateHost, m: &[Triple]) -> Result<usize> {
    let mut rows = vec![false; x.order()];
    let mut cols = vec![false; x.order()];
    let mut syms = vec![false; x.order()];
    for t in m {
        if t.row >= x.order() || t.col >= x.order() || t.sym >= x.order() {
            return Err(Error::TripleOutOfRange {
                triple: t.as_tuple(),
                n: x.order(),
            });
        }
        if std::mem::replace(&mut rows[t.row], true)
            | std::mem::replace(&mut cols[t.col], true)
            | std::mem::replace(&mut syms[t.sym], true)
        {
            return Err(Error::NotAMatching);
        }
    }
    if m.is_empty() {
        return Ok(0);
    }
    let good = x
        .intercalates()
        .iter()
        .filter(|ic| {
            ic.triples().iter().any(|e| {
                if !m.contains(e) {
                    return false;
                }
                let other_row = if ic.rows.0 == e.row { ic.rows.1 } else { ic.rows.0 };
                let other_col = if ic.cols.0 == e.col { ic.cols.1 } else { ic.cols.0 };
                let other_sym = if ic.syms.0 == e.sym { ic.syms.1 } else { ic.syms.0 };
                !rows[other_row] && !cols[other_col] && !syms[other_sym]
            })
        })
        .count();
    Ok(good)
}

/// Order-3 Latin subsquares: row triples and column triples whose nine cells use three symbols.
pub fn count_order3_subsquares(x: &LatinSquare) -> usize {
    let n = x.n();
    if n < 3 {
        return 0;
    }
    let inv: Vec<Vec<u16>> = (0..n).map(|r| x.inverse_row(r)).collect();
    (0..n)
        .into_par_iter()
        .map(|r1| {
            let mut count = 0;
            for r2 in r1 + 1..n {
                for r3 in r2 + 1..n {
                    for c1 in 0..n {
                        let syms = [x.get(r1, c1), x.get(r2, c1), x.get(r3, c1)];
                        let mut cols = syms.map(|s| inv[r1][s] as usize);
                        cols.sort_unstable();
                        if cols[0] != c1 {
                            continue;
                        }
                        let closed = [r2, r3].iter().all(|&r| {
                            let mut other = syms.map(|s| inv[r][s] as usize);
                            other.sort_unstable();
                            other == cols
                        });
                        if closed {
                            count += 1;
                        }
                    }
                }
            }
            count
        })
        .sum()
}

/// Greedy maximum coverage: `m` triples of `x`, each chosen to cover the
/// most not-yet-covered intercalates, ties going to the smallest triple.
pub fn heavy_edge_subset(x: &impl IntercalateHost, m: usize) -> Result<TripleSet> {
    let triples = x.host_triples();
    if m > triples.len() {
        return Err(Error::MTooLarge {
            m,
            available: triples.len(),
        });
    }
    let list = x.intercalates();
    let index: HashMap<Triple, usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); triples.len()];
    for (j, ic) in list.iter().enumerate() {
        for t in ic.triples() {
            through[index[&t]].push(j);
        }
    }
    let mut gain: Vec<usize> = through.iter().map(Vec::len).collect();
    let mut covered = vec![false; list.len()];
    let mut taken = vec![false; triples.len()];
    let mut chosen = Vec::with_capacity(m);
    for _ in 0..m {
        let best = (0..triples.len())
            .filter(|&i| !taken[i])
            .max_by(|&a, &b| gain[a].cmp(&gain[b]).then(b.cmp(&a)))
            .expect("m does not exceed the number of triples");
        taken[best] = true;
        chosen.push(triples[best]);
        for &j in &through[best] {
            if !std::mem::replace(&mut covered[j], true) {
                for t in list[j].triples() {
                    gain[index[&t]] -= 1;
                }
            }
        }
    }
    TripleSet::new(x.order(), chosen)
}

/// `2 C(n,2)^3 / n^4`: the intercalate count if every triple were present
/// independently with probability `1/n`.
pub fn expected_intercalates(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::NTooSmall(n));
    }
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(2.0 * pairs.powi(3) / (n as f64).powi(4))
}
