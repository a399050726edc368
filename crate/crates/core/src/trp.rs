//! The triangle removal process on `K_{n,n,n}`, the binomial model `G*`, and
//! common-neighbourhood quasirandomness.

use std::collections::HashMap;
use std::io::Write;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::latin::{OrderedTripleSet, Triple, TripleBag, TripleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Part {
    Row,
    Col,
    Sym,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::Row, Part::Col, Part::Sym];

    fn others(self) -> [Part; 2] {
        match self {
            Part::Row => [Part::Col, Part::Sym],
            Part::Col => [Part::Row, Part::Sym],
            Part::Sym => [Part::Row, Part::Col],
        }
    }
}

fn slot(from: Part, to: Part) -> usize {
    match (from, to) {
        (Part::Row, Part::Col) => 0,
        (Part::Row, Part::Sym) => 1,
        (Part::Col, Part::Row) => 2,
        (Part::Col, Part::Sym) => 3,
        (Part::Sym, Part::Row) => 4,
        (Part::Sym, Part::Col) => 5,
        _ => panic!("no edges inside a part"),
    }
}

/// A subgraph of `K_{n,n,n}`. Each of the three bipartite pieces is stored in
/// both directions as bitset rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripartiteGraph {
    n: usize,
    words: usize,
    adj: [Vec<u64>; 6],
}

impl TripartiteGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let z = vec![0u64; n * words];
        TripartiteGraph {
            n,
            words,
            adj: [z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        let words = g.words;
        let mut row = vec![0u64; words];
        for v in 0..n {
            row[v / 64] |= 1 << (v % 64);
        }
        for a in g.adj.iter_mut() {
            for chunk in a.chunks_mut(words) {
                chunk.copy_from_slice(&row);
            }
        }
        g
    }

    /// `G(P)`: the complete graph minus the edges of every triple of `p`.
    pub fn of_partial(n: usize, p: &[Triple]) -> Self {
        let mut g = Self::complete(n);
        for t in p {
            g.remove_triangle(*t);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbours(&self, from: Part, v: usize, to: Part) -> &[u64] {
        let w = self.words;
        &self.adj[slot(from, to)][v * w..(v + 1) * w]
    }

    pub fn has_edge(&self, p: Part, u: usize, q: Part, v: usize) -> bool {
        self.neighbours(p, u, q)[v / 64] >> (v % 64) & 1 == 1
    }

    fn set_edge(&mut self, p: Part, u: usize, q: Part, v: usize, on: bool) {
        let w = self.words;
        for (a, x, y) in [(slot(p, q), u, v), (slot(q, p), v, u)] {
            let word = &mut self.adj[a][x * w + y / 64];
            if on {
                *word |= 1 << (y % 64);
            } else {
                *word &= !(1 << (y % 64));
            }
        }
    }

    pub fn insert_edge(&mut self, p: Part, u: usize, q: Part, v: usize) {
        self.set_edge(p, u, q, v, true);
    }

    pub fn remove_edge(&mut self, p: Part, u: usize, q: Part, v: usize) {
        self.set_edge(p, u, q, v, false);
    }

    pub fn is_triangle(&self, t: Triple) -> bool {
        self.has_edge(Part::Row, t.row, Part::Col, t.col)
            && self.has_edge(Part::Row, t.row, Part::Sym, t.sym)
            && self.has_edge(Part::Col, t.col, Part::Sym, t.sym)
    }

    /// Removes the three edges of `t`, present or not.
    pub fn remove_triangle(&mut self, t: Triple) {
        self.remove_edge(Part::Row, t.row, Part::Col, t.col);
        self.remove_edge(Part::Row, t.row, Part::Sym, t.sym);
        self.remove_edge(Part::Col, t.col, Part::Sym, t.sym);
    }

    /// `e(G)`.
    pub fn edge_count(&self) -> usize {
        [0, 1, 3]
            .iter()
            .map(|&a| self.adj[a].iter().map(|w| w.count_ones() as usize).sum::<usize>())
            .sum()
    }

    /// Number of common neighbours in `target` of the vertices in `set`.
    pub fn common_count(&self, set: &[(Part, usize)], target: Part) -> usize {
        let (first, rest) = set.split_first().expect("non-empty vertex set");
        let base = self.neighbours(first.0, first.1, target);
        (0..self.words)
            .map(|i| {
                rest.iter()
                    .fold(base[i], |acc, &(p, v)| acc & self.neighbours(p, v, target)[i])
                    .count_ones() as usize
            })
            .sum()
    }

    fn common_pair(&self, a: (Part, usize), b: (Part, usize), target: Part) -> usize {
        self.neighbours(a.0, a.1, target)
            .iter()
            .zip(self.neighbours(b.0, b.1, target))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    /// Triangles through the row–column edge `(r, c)`, whether or not it is present.
    fn triangles_on_rc(&self, r: usize, c: usize) -> usize {
        self.common_pair((Part::Row, r), (Part::Col, c), Part::Sym)
    }

    pub fn triangle_count(&self) -> usize {
        (0..self.n)
            .map(|r| {
                (0..self.n)
                    .filter(|&c| self.has_edge(Part::Row, r, Part::Col, c))
                    .map(|c| self.triangles_on_rc(r, c))
                    .sum::<usize>()
            })
            .sum()
    }

    pub fn triangles(&self) -> Vec<Triple> {
        let mut out = Vec::new();
        for r in 0..self.n {
            for c in 0..self.n {
                if !self.has_edge(Part::Row, r, Part::Col, c) {
                    continue;
                }
                for s in iter_common(
                    self.neighbours(Part::Row, r, Part::Sym),
                    self.neighbours(Part::Col, c, Part::Sym),
                ) {
                    out.push(Triple::new(r, c, s));
                }
            }
        }
        out
    }

    /// Triangles sharing an edge with `t` (including `t` itself if present).
    fn triangles_meeting(&self, t: Triple) -> Vec<Triple> {
        let mut out = Vec::new();
        if self.has_edge(Part::Row, t.row, Part::Col, t.col) {
            for s in iter_common(
                self.neighbours(Part::Row, t.row, Part::Sym),
                self.neighbours(Part::Col, t.col, Part::Sym),
            ) {
                out.push(Triple::new(t.row, t.col, s));
            }
        }
        if self.has_edge(Part::Row, t.row, Part::Sym, t.sym) {
            for c in iter_common(
                self.neighbours(Part::Row, t.row, Part::Col),
                self.neighbours(Part::Sym, t.sym, Part::Col),
            ) {
                if c != t.col {
                    out.push(Triple::new(t.row, c, t.sym));
                }
            }
        }
        if self.has_edge(Part::Col, t.col, Part::Sym, t.sym) {
            for r in iter_common(
                self.neighbours(Part::Col, t.col, Part::Row),
                self.neighbours(Part::Sym, t.sym, Part::Row),
            ) {
                if r != t.row {
                    out.push(Triple::new(r, t.col, t.sym));
                }
            }
        }
        out
    }

    /// Number of triangles sharing an edge with the triangle `t`, counting `t` once.
    fn triangles_meeting_count(&self, t: Triple) -> usize {
        self.triangles_on_rc(t.row, t.col)
            + self.common_pair((Part::Row, t.row), (Part::Sym, t.sym), Part::Col)
            + self.common_pair((Part::Col, t.col), (Part::Sym, t.sym), Part::Row)
            - 2
    }
}

fn iter_common<'a>(a: &'a [u64], b: &'a [u64]) -> impl Iterator<Item = usize> + 'a {
    a.iter().zip(b).enumerate().flat_map(|(i, (x, y))| {
        let mut w = x & y;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let j = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + j)
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrpOutcome {
    Removed(OrderedTripleSet),
    /// The graph ran out of triangles before `m` removals.
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub edges: usize,
    pub triangles: usize,
    /// Filled in by [`annotate_trace`].
    pub deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrpRun {
    pub outcome: TrpOutcome,
    /// The triangles removed, in order; on `Star` these are the removals made
    /// before the graph ran out.
    pub removed: OrderedTripleSet,
    /// One row per step `0..=removed.len()` when requested.
    pub trace: Option<Vec<TraceRow>>,
}

/// Uniform sampling from the current triangle set. Dense graphs use
/// rejection from all `n^3` cells; sparse ones an indexed list.
struct TriangleSampler {
    count: usize,
    list: Option<(Vec<Triple>, HashMap<Triple, usize>)>,
}

impl TriangleSampler {
    fn new(g: &TripartiteGraph) -> Self {
        let mut s = TriangleSampler {
            count: g.triangle_count(),
            list: None,
        };
        s.maybe_index(g);
        s
    }

    fn maybe_index(&mut self, g: &TripartiteGraph) {
        let cube = g.n * g.n * g.n;
        if self.list.is_none() && self.count * 64 < cube {
            let all = g.triangles();
            let pos = all.iter().enumerate().map(|(i, &t)| (t, i)).collect();
            self.list = Some((all, pos));
        }
    }

    fn pick(&self, g: &TripartiteGraph, rng: &mut impl Rng) -> Triple {
        match &self.list {
            Some((all, _)) => all[rng.random_range(0..all.len())],
            None => loop {
                let t = Triple::new(
                    rng.random_range(0..g.n),
                    rng.random_range(0..g.n),
                    rng.random_range(0..g.n),
                );
                if g.is_triangle(t) {
                    return t;
                }
            },
        }
    }

    /// Updates the index for the removal of `t`; call before editing `g`.
    fn remove(&mut self, g: &TripartiteGraph, t: Triple) {
        match &mut self.list {
            Some((all, pos)) => {
                for dead in g.triangles_meeting(t) {
                    let i = pos.remove(&dead).expect("indexed triangle");
                    all.swap_remove(i);
                    if i < all.len() {
                        pos.insert(all[i], i);
                    }
                }
                self.count = all.len();
            }
            None => self.count -= g.triangles_meeting_count(t),
        }
    }
}

/// Runs the triangle removal process for `m` steps from `K_{n,n,n}`.
pub fn trp_run(n: usize, m: usize, rng: &mut impl Rng, record_trace: bool) -> Result<TrpRun> {
    if m > n * n {
        return Err(Error::MTooLarge { m, available: n * n });
    }
    let mut g = TripartiteGraph::complete(n);
    let mut sampler = TriangleSampler::new(&g);
    let mut seq = Vec::with_capacity(m);
    let mut trace = record_trace.then(Vec::new);
    let mut edges = 3 * n * n;
    let push_row = |trace: &mut Option<Vec<TraceRow>>, step, edges, triangles| {
        if let Some(t) = trace {
            t.push(TraceRow {
                step,
                edges,
                triangles,
                deviation: None,
            });
        }
    };
    push_row(&mut trace, 0, edges, sampler.count);
    let mut star = false;
    for step in 1..=m {
        if sampler.count == 0 {
            star = true;
            break;
        }
        let t = sampler.pick(&g, rng);
        sampler.remove(&g, t);
        g.remove_triangle(t);
        edges -= 3;
        sampler.maybe_index(&g);
        seq.push(t);
        push_row(&mut trace, step, edges, sampler.count);
    }
    let removed = OrderedTripleSet::from_unchecked(n, seq);
    let outcome = if star {
        TrpOutcome::Star
    } else {
        TrpOutcome::Removed(removed.clone())
    };
    Ok(TrpRun {
        outcome,
        removed,
        trace,
    })
}

/// Each of the `n^3` triples independently with probability `p`.
pub fn sample_binomial_hypergraph(n: usize, p: f64, rng: &mut impl Rng) -> Result<TripleBag> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p must lie in [0, 1], got {p}")));
    }
    let cube = (n * n * n) as u64;
    let mut out = Vec::new();
    if p > 0.0 {
        let geo = Geometric::new(p).expect("p in (0, 1]");
        let mut i = geo.sample(rng);
        while i < cube {
            let i_us = i as usize;
            out.push(Triple::new(i_us / (n * n), i_us / n % n, i_us % n));
            i = i.saturating_add(1).saturating_add(geo.sample(rng));
        }
    }
    Ok(TripleBag::from_sorted_unchecked(n, out))
}

/// `G*`: the triples of `h` that share at most one coordinate with every
/// other triple of `h`, all deleted at once.
pub fn prune_conflicts(h: &TripleBag) -> TripleSet {
    let n = h.n();
    let mut rc = vec![0u32; n * n];
    let mut rs = vec![0u32; n * n];
    let mut cs = vec![0u32; n * n];
    for t in h.triples() {
        rc[t.row * n + t.col] += 1;
        rs[t.row * n + t.sym] += 1;
        cs[t.col * n + t.sym] += 1;
    }
    let kept = h
        .triples()
        .iter()
        .copied()
        .filter(|t| {
            rc[t.row * n + t.col] == 1 && rs[t.row * n + t.sym] == 1 && cs[t.col * n + t.sym] == 1
        })
        .collect();
    TripleSet::from_sorted_unchecked(n, kept)
}

/// Number of random vertex sets per target part used when `h = 3`.
pub const SAMPLED_SETS: usize = 20_000;

fn relative_deviation(actual: usize, predicted: f64) -> f64 {
    if predicted == 0.0 {
        if actual == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (actual as f64 / predicted - 1.0).abs()
    }
}

/// Smallest `eps` for which `g` is `(eps, h)`-quasirandom: the largest
/// relative gap between the common-neighbourhood size of a set `A` of at
/// most `h` vertices outside a part and `d^|A| n`, with `d = e(G) / 3n^2`.
///
/// Exhaustive for `h <= 2`. For `h = 3` the triples are sampled from a fixed
/// stream, so the value is a lower estimate. A positive count where `0` is
/// predicted gives infinity.
pub fn quasirandom_deviation(g: &TripartiteGraph, h: usize) -> Result<f64> {
    if h > 3 {
        return Err(Error::HTooLarge(h));
    }
    let n = g.n;
    if h == 0 || n == 0 {
        return Ok(0.0);
    }
    let d = g.edge_count() as f64 / (3 * n * n) as f64;
    let predicted = |size: usize| d.powi(size as i32) * n as f64;
    let (p1, p2) = (predicted(1), predicted(2));
    let per_target = |target: Part| -> f64 {
        let outside: Vec<(Part, usize)> = target
            .others()
            .iter()
            .flat_map(|&p| (0..n).map(move |v| (p, v)))
            .collect();
        let mut worst = outside
            .iter()
            .map(|&a| relative_deviation(g.common_count(&[a], target), p1))
            .fold(0.0, f64::max);
        if h >= 2 {
            let pairs = outside
                .par_iter()
                .enumerate()
                .map(|(i, &a)| {
                    outside[i + 1..]
                        .iter()
                        .map(|&b| relative_deviation(g.common_pair(a, b, target), p2))
                        .fold(0.0, f64::max)
                })
                .reduce(|| 0.0, f64::max);
            worst = worst.max(pairs);
        }
        if h == 3 {
            let p3 = predicted(3);
            let mut rng = crate::rng::stream(0x5eed ^ n as u64, target as u64);
            for _ in 0..SAMPLED_SETS {
                let set: Vec<(Part, usize)> =
                    outside.choose_multiple(&mut rng, 3).copied().collect();
                worst = worst.max(relative_deviation(g.common_count(&set, target), p3));
            }
        }
        worst
    };
    Ok(Part::ALL.iter().map(|&t| per_target(t)).fold(0.0, f64::max))
}

/// Deviation of `G(P_i)` for every prefix `P_i` of `seq`, `i = 0..=len`.
pub fn prefix_deviations(seq: &OrderedTripleSet, h: usize) -> Result<Vec<f64>> {
    let mut g = TripartiteGraph::complete(seq.n());
    let mut out = Vec::with_capacity(seq.len() + 1);
    out.push(quasirandom_deviation(&g, h)?);
    for t in seq.sequence() {
        g.remove_triangle(*t);
        out.push(quasirandom_deviation(&g, h)?);
    }
    Ok(out)
}

/// The largest deviation over all prefixes of the run.
pub fn trace_quasirandomness(seq: &OrderedTripleSet, h: usize) -> Result<f64> {
    Ok(prefix_deviations(seq, h)?.into_iter().fold(0.0, f64::max))
}

/// Fills the `deviation` column of a recorded trace.
pub fn annotate_trace(run: &mut TrpRun, h: usize) -> Result<()> {
    let devs = prefix_deviations(&run.removed, h)?;
    if let Some(trace) = &mut run.trace {
        for (row, d) in trace.iter_mut().zip(devs) {
            row.deviation = Some(d);
        }
    }
    Ok(())
}

/// CSV with header `step,edges,triangles,deviation`.
pub fn write_trace_csv<W: Write>(rows: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidParams(format!("csv: {e}"));
    w.write_record(["step", "edges", "triangles", "deviation"])
        .map_err(io)?;
    for r in rows {
        let dev = r.deviation.map(|d| d.to_string()).unwrap_or_default();
        w.write_record([
            r.step.to_string(),
            r.edges.to_string(),
            r.triangles.to_string(),
            dev,
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParams(format!("csv: {e}")))?;
    Ok(())
}
