//! Seeded Monte Carlo experiments over random Latin squares and the binomial
//! coupling model.
//!
//! Work is split into a fixed number of replicas; replica `i` draws from
//! stream `i` of the master seed and results are concatenated in replica
//! order, so reports do not depend on the thread count.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{
    count_intercalates, count_order3_subsquares, enumerate_intercalates, max_disjoint_in,
    shared_pairs_in, DisjointMode, EXACT_DISJOINT_LIMIT,
};
use crate::error::{Error, Result};
use crate::latin::LatinSquare;
use crate::rng::stream;
use crate::sampling::jm::{default_burnin, default_thin, JmSampler};
use crate::sampling::{enumerate_squares, enumerate::MAX_SQUARE_ORDER};
use crate::trp::{prune_conflicts, sample_binomial_hypergraph};

pub const SCHEMA: &str = "latinlab/1";

/// Number of independent replicas a Monte Carlo run is split into.
pub const REPLICAS: u64 = 16;

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreedmanParams {
    /// Lipschitz constant.
    pub k: f64,
    /// Number of independent coordinates.
    pub n: f64,
    /// Probability of each coordinate.
    pub p: f64,
    pub t: f64,
}

/// `exp(-t^2 / (4 K^2 N p + 2 K t))`.
pub fn freedman_bound(params: FreedmanParams) -> Result<f64> {
    let FreedmanParams { k, n, p, t } = params;
    let ok = k > 0.0 && n >= 1.0 && (0.0..=1.0).contains(&p) && t >= 0.0 && t.is_finite();
    if !ok {
        return Err(Error::InvalidParams(format!("{params:?}")));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    Ok((-t * t / (4.0 * k * k * n * p + 2.0 * k * t)).exp())
}

/// Wilson score interval for `successes` out of `trials` at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let nn = trials as f64;
    let p = successes as f64 / nn;
    let z2 = Z95 * Z95;
    let centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
    let half = Z95 / (1.0 + z2 / nn) * (p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Sampler {
    Jm { burnin: u64, thin: u64 },
    /// Every square of the order exactly once; the sample count is ignored.
    Exhaustive,
}

impl Sampler {
    pub fn jm_default(n: usize) -> Self {
        Sampler::Jm {
            burnin: default_burnin(n),
            thin: default_thin(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `N <= (1 - delta) n^2 / 4`.
    Lower,
    /// `N >= (1 + delta) n^2 / 4`.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tail {
    pub direction: Direction,
    pub delta: f64,
    pub threshold: f64,
    pub count: u64,
    pub frequency: f64,
    pub std_error: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub statistic: String,
    pub sampler: Sampler,
    pub seed: u64,
    pub samples: u64,
    pub replicas: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema: &'static str,
    pub config: ExperimentConfig,
    /// `(value, count)` in increasing value order.
    pub histogram: Vec<(u64, u64)>,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub tails: Vec<Tail>,
    pub wall_clock_secs: f64,
}

impl ExperimentReport {
    fn from_values(config: ExperimentConfig, values: &[u64], started: Instant) -> Self {
        let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
        for &v in values {
            *hist.entry(v).or_default() += 1;
        }
        let histogram: Vec<(u64, u64)> = hist.into_iter().collect();
        let (mean, variance) = moments(&histogram);
        let total: u64 = histogram.iter().map(|h| h.1).sum();
        ExperimentReport {
            schema: SCHEMA,
            config,
            histogram,
            mean,
            variance,
            std_error: (variance / total.max(1) as f64).sqrt(),
            tails: Vec::new(),
            wall_clock_secs: started.elapsed().as_secs_f64(),
        }
    }

    pub fn total(&self) -> u64 {
        self.histogram.iter().map(|h| h.1).sum()
    }

    /// Frequency of `N <= (1-delta) n^2/4` or `N >= (1+delta) n^2/4`.
    pub fn tail(&self, direction: Direction, delta: f64) -> Tail {
        let n = self.config.n as f64;
        let (threshold, hit): (f64, Box<dyn Fn(f64) -> bool>) = match direction {
            Direction::Lower => {
                let t = (1.0 - delta) * n * n / 4.0;
                (t, Box::new(move |v| v <= t))
            }
            Direction::Upper => {
                let t = (1.0 + delta) * n * n / 4.0;
                (t, Box::new(move |v| v >= t))
            }
        };
        let count = self
            .histogram
            .iter()
            .filter(|(v, _)| hit(*v as f64))
            .map(|h| h.1)
            .sum();
        let total = self.total();
        let frequency = count as f64 / total.max(1) as f64;
        let (wilson_low, wilson_high) = wilson_interval(count, total);
        Tail {
            direction,
            delta,
            threshold,
            count,
            frequency,
            std_error: (frequency * (1.0 - frequency) / total.max(1) as f64).sqrt(),
            wilson_low,
            wilson_high,
        }
    }

    pub fn with_tails(mut self, specs: &[(Direction, f64)]) -> Self {
        self.tails = specs.iter().map(|&(d, delta)| self.tail(d, delta)).collect();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// `value,count` lines with a header.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("value,count\n");
        for (v, c) in &self.histogram {
            out.push_str(&format!("{v},{c}\n"));
        }
        out
    }
}

/// Population mean and unbiased variance of a histogram.
pub fn moments(histogram: &[(u64, u64)]) -> (f64, f64) {
    let total: u64 = histogram.iter().map(|h| h.1).sum();
    if total == 0 {
        return (0.0, 0.0);
    }
    let mean = histogram.iter().map(|&(v, c)| v as f64 * c as f64).sum::<f64>() / total as f64;
    if total < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = histogram
        .iter()
        .map(|&(v, c)| c as f64 * (v as f64 - mean).powi(2))
        .sum();
    (mean, ss / (total - 1) as f64)
}

fn replica_sizes(samples: u64) -> Vec<u64> {
    (0..REPLICAS)
        .map(|i| samples / REPLICAS + u64::from(i < samples % REPLICAS))
        .collect()
}

/// Runs `f` on `samples` squares from `sampler` and collects the values in a
/// deterministic order.
pub fn sample_statistic<F>(
    n: usize,
    sampler: Sampler,
    samples: u64,
    seed: u64,
    f: F,
) -> Result<Vec<u64>>
where
    F: Fn(&LatinSquare) -> u64 + Sync,
{
    match sampler {
        Sampler::Exhaustive => {
            if n == 0 || n > MAX_SQUARE_ORDER {
                return Err(Error::SizeGuard(format!(
                    "exhaustive mode needs 1 <= n <= {MAX_SQUARE_ORDER}, got {n}"
                )));
            }
            let all: Vec<LatinSquare> = enumerate_squares(n)?.collect();
            Ok(all.par_iter().map(&f).collect())
        }
        Sampler::Jm { burnin, thin } => {
            if n == 0 {
                return Err(Error::NTooSmall(0));
            }
            let parts: Vec<Vec<u64>> = replica_sizes(samples)
                .into_par_iter()
                .enumerate()
                .map(|(i, count)| {
                    JmSampler::new(n, burnin, thin, count, stream(seed, i as u64))
                        .map(|sq| f(&sq))
                        .collect()
                })
                .collect();
            Ok(parts.concat())
        }
    }
}

/// Distribution of the intercalate count.
pub fn mc_distribution(n: usize, sampler: Sampler, samples: u64, seed: u64) -> Result<ExperimentReport> {
    statistic_report(n, sampler, samples, seed, "intercalates", |sq| {
        count_intercalates(sq) as u64
    })
}

/// Distribution of an arbitrary per-square statistic.
pub fn statistic_report<F>(
    n: usize,
    sampler: Sampler,
    samples: u64,
    seed: u64,
    name: &str,
    f: F,
) -> Result<ExperimentReport>
where
    F: Fn(&LatinSquare) -> u64 + Sync,
{
    let started = Instant::now();
    let values = sample_statistic(n, sampler, samples, seed, f)?;
    let config = ExperimentConfig {
        n,
        statistic: name.to_string(),
        sampler,
        seed,
        samples: values.len() as u64,
        replicas: if matches!(sampler, Sampler::Exhaustive) { 1 } else { REPLICAS },
    };
    Ok(ExperimentReport::from_values(config, &values, started))
}

/// Distribution of the number of order-3 subsquares.
pub fn subsquare_report(n: usize, sampler: Sampler, samples: u64, seed: u64) -> Result<ExperimentReport> {
    statistic_report(n, sampler, samples, seed, "order3_subsquares", |sq| {
        count_order3_subsquares(sq) as u64
    })
}

pub fn tail_estimate(
    n: usize,
    sampler: Sampler,
    direction: Direction,
    delta: f64,
    samples: u64,
    seed: u64,
) -> Result<Tail> {
    Ok(mc_distribution(n, sampler, samples, seed)?.tail(direction, delta))
}

fn choose2(n: usize) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// `E N(G*) = 2 C(n,2)^3 p^4 (1-p)^(12(n-1)-8)` with `p = alpha / n`.
pub fn expected_gstar_intercalates(n: usize, alpha: f64) -> f64 {
    let p = alpha / n as f64;
    2.0 * choose2(n).powi(3) * p.powi(4) * (1.0 - p).powi(12 * (n as i32 - 1) - 8)
}

/// `e^(-12 alpha) alpha^4 n^2 / 4`.
pub fn asymptotic_gstar_intercalates(n: usize, alpha: f64) -> f64 {
    (-12.0 * alpha).exp() * alpha.powi(4) * (n * n) as f64 / 4.0
}

/// `E N(G) = 2 C(n,2)^3 p^4`.
pub fn expected_binomial_intercalates(n: usize, alpha: f64) -> f64 {
    let p = alpha / n as f64;
    2.0 * choose2(n).powi(3) * p.powi(4)
}

/// Ordered pairs of potential intercalates of `K_{n,n,n}` sharing exactly one
/// triple, and exactly two triples (no two share three).
pub fn shared_pair_coefficients(n: usize) -> (f64, f64) {
    let base = 2.0 * choose2(n).powi(3);
    let m = n as f64;
    let one = base * 4.0 * ((m - 1.0).powi(3) - 3.0 * m + 5.0);
    let two = base * 6.0 * (m - 2.0);
    (one, two)
}

/// `E N2(G)`: unordered pairs sharing one triple span 7 triples, pairs
/// sharing two span 6.
pub fn expected_binomial_shared_pairs(n: usize, alpha: f64) -> f64 {
    let p = alpha / n as f64;
    let (one, two) = shared_pair_coefficients(n);
    one / 2.0 * p.powi(7) + two / 2.0 * p.powi(6)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    /// Exact expectation, where known.
    pub exact: Option<f64>,
    pub z: Option<f64>,
}

impl Estimate {
    fn of(values: &[f64], exact: Option<f64>) -> Self {
        let k = values.len().max(1) as f64;
        let mean = values.iter().sum::<f64>() / k;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        let std_error = (var / k).sqrt();
        let z = exact.map(|e| if std_error > 0.0 { (mean - e) / std_error } else if mean == e { 0.0 } else { f64::INFINITY });
        Estimate {
            mean,
            std_error,
            exact,
            z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GStarReport {
    pub schema: &'static str,
    pub n: usize,
    pub alpha: f64,
    pub samples: u64,
    pub seed: u64,
    /// `N(G*)`.
    pub intercalates_gstar: Estimate,
    /// `N(G)` on the binomial hypergraph before pruning.
    pub intercalates_g: Estimate,
    /// `N2(G)`.
    pub shared_pairs_g: Estimate,
    /// `N'(G*)`, exact when at most 24 intercalates, greedy otherwise.
    pub disjoint_gstar: Estimate,
    /// Draws whose `N'(G*)` is only a greedy lower bound.
    pub inexact_disjoint: u64,
    /// Draws where `N' >= N - N2` failed in `G*` (expected 0).
    pub bound_violations: u64,
    /// `E N(G*) / (e^(-12 alpha) alpha^4 n^2 / 4)`.
    pub asymptotic_ratio: f64,
    pub wall_clock_secs: f64,
}

#[derive(Debug, Clone, Copy)]
struct Draw {
    n_gstar: usize,
    n_g: usize,
    n2_g: usize,
    disjoint: usize,
    exact: bool,
    violation: bool,
}

fn gstar_draw(n: usize, p: f64, rng: &mut impl rand::Rng) -> Result<Draw> {
    let h = sample_binomial_hypergraph(n, p, rng)?;
    let g_list = enumerate_intercalates(&h);
    let gstar = prune_conflicts(&h);
    let star_list = enumerate_intercalates(&gstar);
    let exact = star_list.len() <= EXACT_DISJOINT_LIMIT;
    let mode = if exact { DisjointMode::Exact } else { DisjointMode::Greedy };
    let disjoint = max_disjoint_in(&star_list, mode)?;
    let star_shared = shared_pairs_in(&star_list);
    Ok(Draw {
        n_gstar: star_list.len(),
        n_g: g_list.len(),
        n2_g: shared_pairs_in(&g_list),
        disjoint,
        exact,
        violation: disjoint + star_shared < star_list.len(),
    })
}

/// Compares Monte Carlo means on `G ~ H(n, alpha/n)` and its pruning `G*`
/// with the exact expectations.
pub fn gstar_experiment(n: usize, alpha: f64, samples: u64, seed: u64) -> Result<GStarReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if n < 2 {
        return Err(Error::NTooSmall(n));
    }
    let started = Instant::now();
    let p = alpha / n as f64;
    let parts: Vec<Vec<Draw>> = replica_sizes(samples)
        .into_par_iter()
        .enumerate()
        .map(|(i, count)| {
            let mut rng = stream(seed, i as u64);
            (0..count).map(|_| gstar_draw(n, p, &mut rng)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let draws = parts.concat();
    let col = |f: &dyn Fn(&Draw) -> usize| draws.iter().map(|d| f(d) as f64).collect::<Vec<f64>>();
    Ok(GStarReport {
        schema: SCHEMA,
        n,
        alpha,
        samples,
        seed,
        intercalates_gstar: Estimate::of(&col(&|d| d.n_gstar), Some(expected_gstar_intercalates(n, alpha))),
        intercalates_g: Estimate::of(&col(&|d| d.n_g), Some(expected_binomial_intercalates(n, alpha))),
        shared_pairs_g: Estimate::of(&col(&|d| d.n2_g), Some(expected_binomial_shared_pairs(n, alpha))),
        disjoint_gstar: Estimate::of(&col(&|d| d.disjoint), None),
        inexact_disjoint: draws.iter().filter(|d| !d.exact).count() as u64,
        bound_violations: draws.iter().filter(|d| d.violation).count() as u64,
        asymptotic_ratio: expected_gstar_intercalates(n, alpha) / asymptotic_gstar_intercalates(n, alpha),
        wall_clock_secs: started.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InheritanceEstimate {
    pub m: usize,
    pub threshold: usize,
    pub samples: u64,
    pub count: u64,
    pub frequency: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// Mean number of intercalates kept by a subset.
    pub mean_kept: f64,
}

/// Frequency with which a uniform `m`-subset of the triples of `l` contains at
/// most `threshold` intercalates of `l`.
pub fn inheritance_estimate(
    l: &LatinSquare,
    m: usize,
    threshold: usize,
    samples: u64,
    seed: u64,
) -> Result<InheritanceEstimate> {
    let n = l.n();
    if m > n * n {
        return Err(Error::MTooLarge { m, available: n * n });
    }
    // Each intercalate as its four cell indices.
    let cells: Vec<[usize; 4]> = enumerate_intercalates(l)
        .iter()
        .map(|i| {
            let (r1, r2) = i.rows;
            let (c1, c2) = i.cols;
            [r1 * n + c1, r1 * n + c2, r2 * n + c1, r2 * n + c2]
        })
        .collect();
    let kept_counts: Vec<Vec<usize>> = replica_sizes(samples)
        .into_par_iter()
        .enumerate()
        .map(|(i, count)| {
            let mut rng = stream(seed, i as u64);
            let mut chosen = vec![false; n * n];
            (0..count)
                .map(|_| {
                    chosen.iter_mut().for_each(|c| *c = false);
                    for idx in sample(&mut rng, n * n, m) {
                        chosen[idx] = true;
                    }
                    cells.iter().filter(|q| q.iter().all(|&c| chosen[c])).count()
                })
                .collect()
        })
        .collect();
    let kept: Vec<usize> = kept_counts.concat();
    let count = kept.iter().filter(|&&k| k <= threshold).count() as u64;
    let (wilson_low, wilson_high) = wilson_interval(count, samples);
    Ok(InheritanceEstimate {
        m,
        threshold,
        samples,
        count,
        frequency: count as f64 / samples.max(1) as f64,
        wilson_low,
        wilson_high,
        mean_kept: kept.iter().sum::<usize>() as f64 / samples.max(1) as f64,
    })
}
