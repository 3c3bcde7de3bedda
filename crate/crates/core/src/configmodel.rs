//! The configuration model for cubic multigraphs: pairings of the `3n` points
//! `(vertex, slot)`, their projection to multigraphs, exhaustive enumeration
//! for tiny `n`, and girth-conditioned rejection sampling.
//!
//! Each simple cubic graph is the projection of exactly `6^n` pairings, so
//! accepting the first simple projection with girth `>= g` samples uniformly
//! from the labeled cubic graphs of girth at least `g`.

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::log_double_factorial_odd;
use crate::graph::{parse_fields, MultiGraph, Vertex};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("vertex count must be even and at least 2, got {0}")]
    BadVertexCount(usize),
    #[error("girth target must be at least 3, got {0}")]
    GirthTooSmall(usize),
    #[error("point ({vertex}, {slot}) is out of range")]
    PointOutOfRange { vertex: usize, slot: usize },
    #[error("point ({vertex}, {slot}) is covered {times} times")]
    PointCover { vertex: Vertex, slot: u8, times: usize },
    #[error("exhaustive enumeration is limited to n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("no acceptable pairing after {tries} tries")]
    Exhausted { tries: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A point `(vertex, slot)` of `W_n`, `slot` in `0..3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Point {
    pub vertex: Vertex,
    pub slot: u8,
}

impl Point {
    fn from_index(i: usize) -> Point {
        Point { vertex: i / 3, slot: (i % 3) as u8 }
    }

    fn index(self) -> usize {
        3 * self.vertex + self.slot as usize
    }
}

/// A perfect matching on the `3n` points of `n` cubic vertices.
#[derive(Debug, Clone)]
pub struct Pairing {
    n: usize,
    matches: Vec<(Point, Point)>,
}

impl Pairing {
    /// Validates that every one of the `3n` points is matched exactly once.
    pub fn new(n: usize, matches: Vec<(Point, Point)>) -> Result<Self, ConfigError> {
        if n < 2 || n % 2 == 1 {
            return Err(ConfigError::BadVertexCount(n));
        }
        let mut cover = vec![0usize; 3 * n];
        for p in matches.iter().flat_map(|&(a, b)| [a, b]) {
            if p.vertex >= n || p.slot >= 3 {
                return Err(ConfigError::PointOutOfRange { vertex: p.vertex, slot: p.slot as usize });
            }
            cover[p.index()] += 1;
        }
        if let Some(i) = cover.iter().position(|&c| c != 1) {
            let p = Point::from_index(i);
            return Err(ConfigError::PointCover { vertex: p.vertex, slot: p.slot, times: cover[i] });
        }
        Ok(Pairing { n, matches })
    }

    fn from_point_order(n: usize, order: &[usize]) -> Result<Self, ConfigError> {
        let matches = order
            .chunks_exact(2)
            .map(|c| (Point::from_index(c[0]), Point::from_index(c[1])))
            .collect();
        Pairing::new(n, matches)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matches(&self) -> &[(Point, Point)] {
        &self.matches
    }

    /// Sorted matches with each pair ordered; equal iff the pairings are equal.
    pub fn canonical(&self) -> Vec<(Point, Point)> {
        let mut c: Vec<_> = self.matches.iter().map(|&(a, b)| if a <= b { (a, b) } else { (b, a) }).collect();
        c.sort_unstable();
        c
    }

    /// The multigraph obtained by forgetting slots.
    pub fn project(&self) -> MultiGraph {
        MultiGraph::new(self.n, self.matches.iter().map(|(a, b)| (a.vertex, b.vertex)))
            .expect("validated pairing has in-range vertices")
    }

    /// Text form: `n`, then one `u i v j` line per match.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (a, b) in &self.matches {
            out.push_str(&format!("{} {} {} {}\n", a.vertex, a.slot, b.vertex, b.slot));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let err = |line: usize, msg: &str| ConfigError::Parse { line, msg: msg.to_string() };
        let mut lines = text.split('\n');
        let [n] = lines
            .next()
            .and_then(parse_fields::<1>)
            .ok_or_else(|| err(1, "expected \"n\""))?;
        let mut matches = Vec::new();
        for (idx, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let [u, i, v, j] = parse_fields::<4>(line).ok_or_else(|| err(idx + 2, "expected \"u i v j\""))?;
            if u >= n || v >= n || i > 2 || j > 2 {
                return Err(err(idx + 2, "point out of range"));
            }
            matches.push((Point { vertex: u, slot: i as u8 }, Point { vertex: v, slot: j as u8 }));
        }
        Pairing::new(n, matches)
    }
}

impl PartialEq for Pairing {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical() == other.canonical()
    }
}

impl Eq for Pairing {}

fn check_n(n: usize) -> Result<(), ConfigError> {
    if n < 2 || n % 2 == 1 {
        Err(ConfigError::BadVertexCount(n))
    } else {
        Ok(())
    }
}

/// Uniform pairing: shuffle the `3n` points, then match consecutive ones.
pub fn random_pairing_with(n: usize, rng: &mut impl RngCore) -> Result<Pairing, ConfigError> {
    check_n(n)?;
    let mut points: Vec<usize> = (0..3 * n).collect();
    rng::shuffle(rng, &mut points);
    Pairing::from_point_order(n, &points)
}

pub fn random_pairing(n: usize, seed: u64) -> Result<Pairing, ConfigError> {
    random_pairing_with(n, &mut rng::from_seed(seed))
}

/// Largest `n` for which [`enumerate_pairings`] materializes the list.
pub const ENUMERATE_LIMIT: usize = 4;
/// Largest `n` accepted by [`for_each_pairing`] (17!! = 34,459,425 pairings).
pub const STREAM_LIMIT: usize = 6;

/// All `(3n-1)!!` pairings, each exactly once.
pub fn enumerate_pairings(n: usize) -> Result<Vec<Pairing>, ConfigError> {
    if n > ENUMERATE_LIMIT {
        return Err(ConfigError::TooLarge { n, limit: ENUMERATE_LIMIT });
    }
    let mut out = Vec::new();
    for_each_pairing(n, |p| out.push(p.clone()))?;
    Ok(out)
}

/// Streams every pairing to `visit` without storing them.
pub fn for_each_pairing(n: usize, mut visit: impl FnMut(&Pairing)) -> Result<(), ConfigError> {
    check_n(n)?;
    if n > STREAM_LIMIT {
        return Err(ConfigError::TooLarge { n, limit: STREAM_LIMIT });
    }
    let mut order = Vec::with_capacity(3 * n);
    let mut used = vec![false; 3 * n];
    fn rec(n: usize, order: &mut Vec<usize>, used: &mut [bool], visit: &mut dyn FnMut(&Pairing)) {
        let Some(first) = used.iter().position(|&u| !u) else {
            visit(&Pairing::from_point_order(n, order).expect("complete matching"));
            return;
        };
        used[first] = true;
        for partner in first + 1..used.len() {
            if !used[partner] {
                used[partner] = true;
                order.extend([first, partner]);
                rec(n, order, used, visit);
                order.truncate(order.len() - 2);
                used[partner] = false;
            }
        }
        used[first] = false;
    }
    rec(n, &mut order, &mut used, &mut visit);
    Ok(())
}

/// `ln((3n-1)!!)`, the log of the number of pairings.
pub fn log_pairing_count(n: usize) -> Result<f64, ConfigError> {
    check_n(n)?;
    Ok(log_double_factorial_odd(3 * n as u64 - 1).expect("3n - 1 is odd"))
}

/// Limiting probability that a uniform pairing projects to a simple graph of
/// girth at least `g`: `exp(-sum_{k=1}^{g-1} 2^(k-1)/k)`.
pub fn girth_limit_probability(g: usize) -> Result<f64, ConfigError> {
    if g < 3 {
        return Err(ConfigError::GirthTooSmall(g));
    }
    let sum: f64 = (1..g).map(|k| 2f64.powi(k as i32 - 1) / k as f64).sum();
    Ok((-sum).exp())
}

/// `ceil(50 / girth_limit_probability(g))`.
pub fn default_max_tries(g: usize) -> Result<u64, ConfigError> {
    Ok((50.0 / girth_limit_probability(g)?).ceil() as u64)
}

/// Whether a projected pairing lies in the conditioned class: simple, girth >= g.
pub fn accepts(graph: &MultiGraph, g: usize) -> bool {
    graph.is_simple() && graph.has_girth_at_least(g)
}

fn trial_graph(n: usize, seed: u64, trial: u64) -> MultiGraph {
    random_pairing_with(n, &mut rng::for_trial(seed, trial))
        .expect("n validated by caller")
        .project()
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionedSample {
    pub graph_text: String,
    /// Index of the accepted trial; `tries = trial + 1`.
    pub trial: u64,
    #[serde(skip)]
    pub graph: MultiGraph,
}

/// First accepted projection among trials `0..max_tries`.
pub fn sample_girth_conditioned(n: usize, g: usize, seed: u64, max_tries: u64) -> Result<ConditionedSample, ConfigError> {
    check_n(n)?;
    if g < 3 {
        return Err(ConfigError::GirthTooSmall(g));
    }
    for trial in 0..max_tries {
        let graph = trial_graph(n, seed, trial);
        if accepts(&graph, g) {
            return Ok(ConditionedSample { graph_text: graph.to_text(), trial, graph });
        }
    }
    Err(ConfigError::Exhausted { tries: max_tries })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleStats {
    pub trials: u64,
    pub accepted: u64,
    pub acceptance_rate: f64,
    /// Normal-approximation standard error of `acceptance_rate`.
    pub std_error: f64,
    pub seed: u64,
}

impl SampleStats {
    pub fn new(trials: u64, accepted: u64, seed: u64) -> Self {
        assert!(accepted <= trials);
        let p = if trials > 0 { accepted as f64 / trials as f64 } else { 0.0 };
        let std_error = if trials > 0 { (p * (1.0 - p) / trials as f64).sqrt() } else { 0.0 };
        SampleStats { trials, accepted, acceptance_rate: p, std_error, seed }
    }
}

/// Per-trial acceptance flags for trials `0..trials`, evaluated in parallel.
pub fn acceptance_flags(n: usize, g: usize, trials: u64, seed: u64) -> Result<Vec<bool>, ConfigError> {
    check_n(n)?;
    if g < 3 {
        return Err(ConfigError::GirthTooSmall(g));
    }
    Ok((0..trials).into_par_iter().map(|t| accepts(&trial_graph(n, seed, t), g)).collect())
}

/// Fraction of uniform pairings whose projection is simple with girth >= g.
pub fn estimate_acceptance(n: usize, g: usize, trials: u64, seed: u64) -> Result<SampleStats, ConfigError> {
    let accepted = acceptance_flags(n, g, trials, seed)?.into_iter().filter(|&a| a).count() as u64;
    Ok(SampleStats::new(trials, accepted, seed))
}
