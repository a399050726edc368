//! Switchings of Latin rectangles: exchanging the entries of two columns
//! within one row.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::latin::{Intercalate, LatinGrid, LatinRectangle};

/// Swap the entries of columns `x < y` in `row`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Switching {
    pub row: usize,
    pub x: usize,
    pub y: usize,
}

impl Switching {
    pub fn new(row: usize, x: usize, y: usize) -> Self {
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        Switching { row, x, y }
    }
}

/// Whether applying `s` keeps `rect` a Latin rectangle.
pub fn is_valid(rect: &LatinRectangle, s: Switching) -> bool {
    if s.row >= rect.k() || s.x >= s.y || s.y >= rect.n() {
        return false;
    }
    let a = rect.get(s.row, s.x);
    let b = rect.get(s.row, s.y);
    (0..rect.k())
        .filter(|&r| r != s.row)
        .all(|r| rect.get(r, s.x) != b && rect.get(r, s.y) != a)
}

/// All switchings in rows `lower..k`, each with its validity flag. `lower` is
/// `1` by default (the first row is never switched) or the given bound.
pub fn enumerate_switchings(
    rect: &LatinRectangle,
    restrict_rows: Option<usize>,
) -> Result<Vec<(Switching, bool)>> {
    if rect.k() < 2 {
        return Err(Error::KTooSmall(rect.k()));
    }
    let lower = restrict_rows.unwrap_or(1).max(1);
    let n = rect.n();
    let mut out = Vec::new();
    for row in lower..rect.k() {
        for x in 0..n {
            for y in x + 1..n {
                let s = Switching { row, x, y };
                out.push((s, is_valid(rect, s)));
            }
        }
    }
    Ok(out)
}

pub fn apply_switching(rect: &LatinRectangle, s: Switching) -> Result<LatinRectangle> {
    if !is_valid(rect, s) {
        return Err(Error::InvalidSwitching {
            row: s.row,
            x: s.x,
            y: s.y,
        });
    }
    let n = rect.n();
    let mut cells = rect.cells().to_vec();
    cells.swap(s.row * n + s.x, s.row * n + s.y);
    Ok(LatinRectangle::from_cells_unchecked(rect.k(), n, cells))
}

/// Intercalates between row 0 and row `i`, as sorted column pairs.
fn first_row_pairs(rect: &LatinRectangle, i: usize) -> Vec<(usize, usize)> {
    let top = rect.row(0);
    let other = rect.row(i);
    let inv = rect.inverse_row(0);
    (0..rect.n())
        .filter_map(|c| {
            let c2 = inv[other[c] as usize] as usize;
            (c2 > c && other[c2] == top[c]).then_some((c, c2))
        })
        .collect()
}

fn witness(rect: &LatinRectangle, i: usize, (c1, c2): (usize, usize)) -> Intercalate {
    Intercalate {
        rows: (0, i),
        cols: (c1, c2),
        syms: (rect.get(0, c1), rect.get(0, c2)),
    }
}

/// `ℓ`: intercalates that use the first row.
pub fn first_row_intercalate_count(rect: &LatinRectangle) -> usize {
    (1..rect.k()).map(|i| first_row_pairs(rect, i).len()).sum()
}

pub fn first_row_intercalates(rect: &LatinRectangle) -> Vec<Intercalate> {
    (1..rect.k())
        .flat_map(|i| {
            first_row_pairs(rect, i)
                .into_iter()
                .map(move |p| witness(rect, i, p))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchRecord {
    pub switching: Switching,
    pub valid: bool,
    /// `ℓ' - ℓ`; zero for invalid switchings.
    pub delta: i64,
    pub creates: usize,
    pub destroys: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchingReport {
    pub ell: usize,
    pub records: Vec<SwitchRecord>,
    /// Each first-row intercalate with the number of valid switchings that destroy it.
    pub destroyers: Vec<(Intercalate, usize)>,
    pub valid: usize,
    pub creating: usize,
    pub destroying: usize,
}

/// Exact effect of every switching in rows `lower..k` on the first-row
/// intercalates. Only the pair (row 0, switched row) can change, so each
/// switching costs `O(n)`.
pub fn switching_effect_report(
    rect: &LatinRectangle,
    restrict_rows: Option<usize>,
) -> Result<SwitchingReport> {
    let all = enumerate_switchings(rect, restrict_rows)?;
    let before: Vec<Vec<(usize, usize)>> = (0..rect.k())
        .map(|i| if i == 0 { vec![] } else { first_row_pairs(rect, i) })
        .collect();
    let effects: Vec<(SwitchRecord, Vec<Intercalate>)> = all
        .par_iter()
        .map(|&(s, valid)| {
            if !valid {
                let rec = SwitchRecord {
                    switching: s,
                    valid,
                    delta: 0,
                    creates: 0,
                    destroys: 0,
                };
                return (rec, vec![]);
            }
            let after = apply_switching(rect, s).expect("checked valid");
            let new_pairs = first_row_pairs(&after, s.row);
            let old_pairs = &before[s.row];
            let destroyed: Vec<Intercalate> = old_pairs
                .iter()
                .filter(|p| !new_pairs.contains(p))
                .map(|&p| witness(rect, s.row, p))
                .collect();
            let creates = new_pairs.iter().filter(|p| !old_pairs.contains(p)).count();
            let rec = SwitchRecord {
                switching: s,
                valid,
                delta: new_pairs.len() as i64 - old_pairs.len() as i64,
                creates,
                destroys: destroyed.len(),
            };
            (rec, destroyed)
        })
        .collect();
    let current = first_row_intercalates(rect);
    let index: HashMap<Intercalate, usize> =
        current.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut counts = vec![0usize; current.len()];
    for (_, destroyed) in &effects {
        for d in destroyed {
            counts[index[d]] += 1;
        }
    }
    let records: Vec<SwitchRecord> = effects.into_iter().map(|(r, _)| r).collect();
    Ok(SwitchingReport {
        ell: current.len(),
        valid: records.iter().filter(|r| r.valid).count(),
        creating: records.iter().filter(|r| r.creates > 0).count(),
        destroying: records.iter().filter(|r| r.destroys > 0).count(),
        records,
        destroyers: current.into_iter().zip(counts).collect(),
    })
}

/// CSV with header `i,x,y,valid,delta,creates,destroys`, coordinates 1-based.
pub fn write_report_csv<W: Write>(report: &SwitchingReport, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidParams(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "x", "y", "valid", "delta", "creates", "destroys"])
        .map_err(io)?;
    for r in &report.records {
        w.write_record([
            (r.switching.row + 1).to_string(),
            (r.switching.x + 1).to_string(),
            (r.switching.y + 1).to_string(),
            r.valid.to_string(),
            r.delta.to_string(),
            r.creates.to_string(),
            r.destroys.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParams(format!("csv: {e}")))
}

/// One level `Q(ℓ)` of a rectangle census.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Level {
    pub ell: usize,
    /// `|Q(ℓ)|`.
    pub size: u64,
    /// Pairs (Q in Q(ℓ), valid switching) landing in Q(ℓ-1) or Q(ℓ-2).
    pub down: u64,
    /// Pairs (Q' in Q(ℓ-1) or Q(ℓ-2), valid switching) landing in Q(ℓ).
    pub up_into: u64,
    /// Smallest per-rectangle count of down-moves within this level.
    pub min_down: u64,
    /// Largest per-rectangle count of switchings creating an intercalate.
    pub max_creating: u64,
}

/// Level sets of the first-row intercalate count over all given rectangles,
/// with the switching moves between levels.
pub fn level_census(rects: impl IntoIterator<Item = LatinRectangle>) -> Result<Vec<Level>> {
    let mut levels: BTreeMap<usize, Level> = BTreeMap::new();
    // moves[(from, to)] = number of (rectangle, valid switching) pairs
    let mut moves: HashMap<(usize, usize), u64> = HashMap::new();
    for rect in rects {
        let report = switching_effect_report(&rect, None)?;
        let ell = report.ell;
        let lvl = levels.entry(ell).or_insert(Level {
            ell,
            size: 0,
            down: 0,
            up_into: 0,
            min_down: u64::MAX,
            max_creating: 0,
        });
        lvl.size += 1;
        let mut down_here = 0;
        for r in report.records.iter().filter(|r| r.valid) {
            let to = (ell as i64 + r.delta) as usize;
            *moves.entry((ell, to)).or_default() += 1;
            if to < ell {
                down_here += 1;
            }
        }
        lvl.min_down = lvl.min_down.min(down_here);
        lvl.max_creating = lvl.max_creating.max(report.creating as u64);
    }
    let keys: Vec<usize> = levels.keys().copied().collect();
    for ell in keys {
        let down = (1..=2)
            .filter(|&d| d <= ell)
            .map(|d| moves.get(&(ell, ell - d)).copied().unwrap_or(0))
            .sum();
        let up_into = (1..=2)
            .filter(|&d| d <= ell)
            .map(|d| moves.get(&(ell - d, ell)).copied().unwrap_or(0))
            .sum();
        let lvl = levels.get_mut(&ell).expect("present");
        lvl.down = down;
        lvl.up_into = up_into;
    }
    Ok(levels.into_values().collect())
}

/// `|Q(ℓ)|`, or 0 if the level is absent.
pub fn level_size(levels: &[Level], ell: usize) -> u64 {
    levels.iter().find(|l| l.ell == ell).map_or(0, |l| l.size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_good, enumerate_intercalates};
    use crate::latin::{validate, GridKind, Triple};
    use crate::sampling::enumerate_rectangles;

    fn rect(rows: &[&[usize]]) -> LatinRectangle {
        LatinRectangle::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn order_two() {
        let r = rect(&[&[0, 1], &[1, 0]]);
        let all = enumerate_switchings(&r, None).unwrap();
        assert_eq!(all, vec![(Switching::new(1, 0, 1), false)]);
        assert!(matches!(
            apply_switching(&r, Switching::new(1, 0, 1)),
            Err(Error::InvalidSwitching { row: 1, x: 0, y: 1 })
        ));
        assert!(matches!(
            enumerate_switchings(&rect(&[&[0, 1]]), None),
            Err(Error::KTooSmall(1))
        ));
    }

    #[test]
    fn counts_and_validity_oracle() {
        let mut rng = crate::rng::stream(1, 0);
        for _ in 0..20 {
            let sq = crate::sampling::jm::JmSampler::with_defaults(5, 1, &mut rng)
                .next()
                .unwrap();
            for k in 2..=5 {
                let r = sq.prefix(k).unwrap();
                let all = enumerate_switchings(&r, None).unwrap();
                assert_eq!(all.len(), (k - 1) * 10);
                for (s, valid) in all {
                    let mut grid: Vec<Vec<i64>> = r
                        .to_rows_1based()
                        .into_iter()
                        .map(|row| row.into_iter().map(|v| v as i64).collect())
                        .collect();
                    grid[s.row].swap(s.x, s.y);
                    assert_eq!(validate(&grid, GridKind::Rectangle).is_ok(), valid);
                }
            }
        }
    }

    #[test]
    fn involution_and_two_edge_change() {
        for r in enumerate_rectangles(2, 5).unwrap().step_by(7) {
            for (s, valid) in enumerate_switchings(&r, None).unwrap() {
                if !valid {
                    continue;
                }
                let once = apply_switching(&r, s).unwrap();
                assert_eq!(apply_switching(&once, s).unwrap(), r);
                let a: std::collections::BTreeSet<Triple> = r.triples().into_iter().collect();
                let b: std::collections::BTreeSet<Triple> = once.triples().into_iter().collect();
                assert_eq!(a.difference(&b).count(), 2);
                assert_eq!(b.difference(&a).count(), 2);
            }
        }
    }

    #[test]
    fn first_row_counts() {
        assert_eq!(first_row_intercalate_count(&rect(&[&[0, 1, 2, 3], &[1, 0, 3, 2]])), 2);
        assert_eq!(first_row_intercalate_count(&rect(&[&[2, 0, 1]])), 0);
        let fig = crate::latin::fixtures::figure_one().into_rectangle();
        let brute = enumerate_intercalates(&fig)
            .iter()
            .filter(|i| i.rows.0 == 0)
            .count();
        assert_eq!(first_row_intercalate_count(&fig), brute);
        assert_eq!(first_row_intercalates(&fig).len(), brute);
    }

    #[test]
    fn report_matches_recount() {
        let mut rng = crate::rng::stream(2, 0);
        let sq = crate::sampling::jm::JmSampler::with_defaults(7, 1, &mut rng)
            .next()
            .unwrap();
        let r = sq.prefix(3).unwrap();
        let report = switching_effect_report(&r, None).unwrap();
        for rec in &report.records {
            if !rec.valid {
                continue;
            }
            let after = apply_switching(&r, rec.switching).unwrap();
            let old: Vec<_> = first_row_intercalates(&r);
            let new: Vec<_> = enumerate_intercalates(&after)
                .into_iter()
                .filter(|i| i.rows.0 == 0)
                .collect();
            assert_eq!(rec.delta, new.len() as i64 - old.len() as i64);
            assert_eq!(rec.destroys, old.iter().filter(|i| !new.contains(i)).count());
            assert_eq!(rec.creates, new.iter().filter(|i| !old.contains(i)).count());
        }
        let mut buf = Vec::new();
        write_report_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("i,x,y,valid,delta,creates,destroys\n2,1,2,"));
        assert_eq!(text.lines().count(), 1 + 2 * 21);
    }

    #[test]
    fn restricted_rows() {
        let r = crate::sampling::jm::sample_one(6, 3).prefix(4).unwrap();
        let all = enumerate_switchings(&r, Some(2)).unwrap();
        assert_eq!(all.len(), 2 * 15);
        assert!(all.iter().all(|(s, _)| s.row >= 2));
    }

    #[test]
    fn good_count_jumps_by_at_most_six() {
        // M: one entry from each of the first two rows; switchings use row 2 only.
        for r in enumerate_rectangles(3, 5).unwrap().step_by(3) {
            let a = r.get(0, 0);
            let c = (1..5).find(|&c| r.get(1, c) != a).unwrap();
            let m = [Triple::new(0, 0, a), Triple::new(1, c, r.get(1, c))];
            let base = count_good(&r, &m).unwrap() as i64;
            for (s, valid) in enumerate_switchings(&r, Some(2)).unwrap() {
                if valid {
                    let after = apply_switching(&r, s).unwrap();
                    let d = count_good(&after, &m).unwrap() as i64 - base;
                    assert!(d.abs() <= 6);
                }
            }
        }
    }

    #[test]
    fn census_order_five_two_rows() {
        let (k, n) = (2i64, 5i64);
        let levels = level_census(enumerate_rectangles(2, 5).unwrap()).unwrap();
        assert_eq!(levels.iter().map(|l| l.size).sum::<u64>(), 120 * 44);
        for l in &levels {
            assert!(l.max_creating as i64 <= (k - 1) * n);
            let ell = l.ell as i64;
            if ell >= 2 {
                assert_eq!(l.down, l.up_into);
                let lhs = (ell * (n - 2 * k) - k * n) * l.size as i64;
                let rhs = k * n * (level_size(&levels, l.ell - 1) + level_size(&levels, l.ell - 2)) as i64;
                assert!(lhs <= rhs, "level {ell}");
                assert!(l.min_down as i64 >= ell * (n - 2 * k) - k * n);
            }
        }
    }
}
