//! The Jacobson–Matthews chain.
//!
//! A state is an `n x n x n` array with entries in {-1, 0, 1} whose every
//! axis-parallel line sums to 1, with at most one -1 entry. Proper states
//! (no -1) are exactly the Latin squares.
//!
//! From a proper state a zero cell `(r, c, s)` is chosen uniformly; from an
//! improper state the -1 cell is used and each of the three lines through it
//! contributes one of its two 1-entries, chosen uniformly. The same ±1 update
//! on the resulting 2x2x2 sub-cube is then applied in both cases.

use rand::Rng;

use crate::latin::{LatinGrid, LatinSquare};
use crate::rng::{stream, StreamRng};

/// Positions of the 1-entries on one line (at most two).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct LineOnes {
    len: u8,
    at: [u16; 2],
}

impl LineOnes {
    fn insert(&mut self, v: usize) {
        debug_assert!(self.len < 2, "line holds more than two 1-entries");
        self.at[self.len as usize] = v as u16;
        self.len += 1;
    }

    fn remove(&mut self, v: usize) {
        let v = v as u16;
        if self.at[0] == v && self.len > 0 {
            self.at[0] = self.at[1];
        } else {
            debug_assert!(self.len == 2 && self.at[1] == v);
        }
        self.len -= 1;
    }

    fn only(&self) -> usize {
        debug_assert_eq!(self.len, 1);
        self.at[0] as usize
    }

    fn pick(&self, rng: &mut impl Rng) -> usize {
        debug_assert_eq!(self.len, 2);
        self.at[rng.random_range(0..2)] as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JmState {
    n: usize,
    cube: Vec<i8>,
    /// 1-entries along each (row, column) line: symbols.
    rc: Vec<LineOnes>,
    /// 1-entries along each (row, symbol) line: columns.
    rs: Vec<LineOnes>,
    /// 1-entries along each (column, symbol) line: rows.
    cs: Vec<LineOnes>,
    improper: Option<(usize, usize, usize)>,
}

impl JmState {
    pub fn from_square(sq: &LatinSquare) -> Self {
        let n = sq.n();
        let mut st = JmState {
            n,
            cube: vec![0; n * n * n],
            rc: vec![LineOnes::default(); n * n],
            rs: vec![LineOnes::default(); n * n],
            cs: vec![LineOnes::default(); n * n],
            improper: None,
        };
        for r in 0..n {
            for c in 0..n {
                st.set(r, c, sq.get(r, c), 1);
            }
        }
        st
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_proper(&self) -> bool {
        self.improper.is_none()
    }

    /// Coordinates of the -1 entry, if any.
    pub fn improper_cell(&self) -> Option<(usize, usize, usize)> {
        self.improper
    }

    pub fn value(&self, r: usize, c: usize, s: usize) -> i8 {
        self.cube[self.idx(r, c, s)]
    }

    /// The Latin square of a proper state.
    pub fn to_square(&self) -> Option<LatinSquare> {
        if !self.is_proper() {
            return None;
        }
        let n = self.n;
        let cells = self.rc.iter().map(|l| l.only() as u16).collect();
        Some(LatinSquare::from_cells_unchecked(n, cells))
    }

    /// Checks every line sum and the one-negative-cell structure.
    pub fn check_invariants(&self) -> bool {
        let n = self.n;
        let mut negatives = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let mut sums = [0i32; 3];
                for x in 0..n {
                    sums[0] += self.value(a, b, x) as i32;
                    sums[1] += self.value(a, x, b) as i32;
                    sums[2] += self.value(x, a, b) as i32;
                }
                if sums != [1, 1, 1] {
                    return false;
                }
                for x in 0..n {
                    let v = self.value(a, b, x);
                    if !(-1..=1).contains(&v) {
                        return false;
                    }
                    if v == -1 {
                        negatives.push((a, b, x));
                    }
                }
            }
        }
        negatives.len() <= 1 && negatives.first().copied() == self.improper
    }

    fn idx(&self, r: usize, c: usize, s: usize) -> usize {
        (r * self.n + c) * self.n + s
    }

    fn set(&mut self, r: usize, c: usize, s: usize, v: i8) {
        let n = self.n;
        let i = self.idx(r, c, s);
        let old = std::mem::replace(&mut self.cube[i], v);
        if old == 1 {
            self.rc[r * n + c].remove(s);
            self.rs[r * n + s].remove(c);
            self.cs[c * n + s].remove(r);
        }
        if v == 1 {
            self.rc[r * n + c].insert(s);
            self.rs[r * n + s].insert(c);
            self.cs[c * n + s].insert(r);
        }
    }

    fn add(&mut self, r: usize, c: usize, s: usize, delta: i8) {
        let v = self.value(r, c, s) + delta;
        debug_assert!((-1..=1).contains(&v));
        self.set(r, c, s, v);
    }

    /// One move of the chain.
    pub fn step(&mut self, rng: &mut impl Rng) {
        let n = self.n;
        if n == 1 {
            return;
        }
        let (r, c, s, r2, c2, s2) = match self.improper {
            None => {
                let (r, c, s) = loop {
                    let (r, c, s) = (
                        rng.random_range(0..n),
                        rng.random_range(0..n),
                        rng.random_range(0..n),
                    );
                    if self.value(r, c, s) == 0 {
                        break (r, c, s);
                    }
                };
                (
                    r,
                    c,
                    s,
                    self.cs[c * n + s].only(),
                    self.rs[r * n + s].only(),
                    self.rc[r * n + c].only(),
                )
            }
            Some((r, c, s)) => {
                let r2 = self.cs[c * n + s].pick(rng);
                let c2 = self.rs[r * n + s].pick(rng);
                let s2 = self.rc[r * n + c].pick(rng);
                (r, c, s, r2, c2, s2)
            }
        };
        self.add(r, c, s, 1);
        self.add(r, c2, s, -1);
        self.add(r2, c, s, -1);
        self.add(r, c, s2, -1);
        self.add(r2, c2, s, 1);
        self.add(r2, c, s2, 1);
        self.add(r, c2, s2, 1);
        self.add(r2, c2, s2, -1);
        self.improper = (self.value(r2, c2, s2) == -1).then_some((r2, c2, s2));
    }
}

/// Default burn-in: `n^3` steps. Heuristic; mixing time of the chain is unknown.
pub fn default_burnin(n: usize) -> u64 {
    (n as u64).pow(3)
}

/// Default thinning: `n^2` proper-state visits between samples. Heuristic.
pub fn default_thin(n: usize) -> u64 {
    (n as u64).pow(2)
}

/// Stream of thinned proper states.
///
/// Starts from the cyclic square, runs `burnin` steps, then advances to the
/// next proper state; after each emitted sample it advances through `thin`
/// further proper-state visits before emitting again.
pub struct JmSampler<R: Rng> {
    state: JmState,
    rng: R,
    burnin: u64,
    thin: u64,
    remaining: u64,
    started: bool,
}

impl<R: Rng> JmSampler<R> {
    pub fn new(n: usize, burnin: u64, thin: u64, count: u64, rng: R) -> Self {
        JmSampler {
            state: JmState::from_square(&LatinSquare::cyclic(n.max(1))),
            rng,
            burnin,
            thin,
            remaining: count,
            started: false,
        }
    }

    pub fn with_defaults(n: usize, count: u64, rng: R) -> Self {
        Self::new(n, default_burnin(n), default_thin(n), count, rng)
    }

    pub fn state(&self) -> &JmState {
        &self.state
    }

    fn advance_to_proper(&mut self) {
        while !self.state.is_proper() {
            self.state.step(&mut self.rng);
        }
    }
}

impl<R: Rng> Iterator for JmSampler<R> {
    type Item = LatinSquare;

    fn next(&mut self) -> Option<LatinSquare> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if !self.started {
            self.started = true;
            for _ in 0..self.burnin {
                self.state.step(&mut self.rng);
            }
        } else {
            let mut visits = 0;
            while visits < self.thin {
                self.state.step(&mut self.rng);
                if self.state.is_proper() {
                    visits += 1;
                }
            }
        }
        self.advance_to_proper();
        self.state.to_square()
    }
}

/// `count` samples with the default schedule, seeded by `rng`.
pub fn jm_sample<R: Rng>(n: usize, burnin: u64, thin: u64, count: u64, rng: R) -> JmSampler<R> {
    JmSampler::new(n, burnin, thin, count, rng)
}

/// One square from stream 0 of `seed` with the default schedule.
pub fn sample_one(n: usize, seed: u64) -> LatinSquare {
    JmSampler::with_defaults(n, 1, stream(seed, 0))
        .next()
        .expect("count is 1")
}

/// Convenience: a sampler over stream `index` of `seed`.
pub fn seeded_sampler(n: usize, count: u64, seed: u64, index: u64) -> JmSampler<StreamRng> {
    JmSampler::with_defaults(n, count, stream(seed, index))
}
