//! Searches over Z/2 coefficient vectors: exhaustive enumeration and
//! single-flip heuristics.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::algebra::{Field, Z2};
use crate::error::{Error, Result};
use crate::homcomplex::MapParameterization;
use crate::parallel;

/// Refusal threshold on the number of homotopy columns for enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Minimizers kept in an [`Enumeration`]; the histogram stays exact.
pub const MAX_LISTED_MINIMIZERS: usize = 100_000;

/// Support structure of a Z/2 parameterization over the hom basis.
struct Z2Layout {
    entry_col: Vec<usize>,
    entry_row: Vec<usize>,
    base: Vec<bool>,
    homotopies: Vec<Vec<usize>>,
    cols: usize,
    rows: usize,
}

impl Z2Layout {
    fn new(p: &MapParameterization<Z2>) -> Self {
        let idx = p.index();
        let entry_col = (0..idx.len()).map(|i| idx.pair(i).0).collect();
        let entry_row = (0..idx.len()).map(|i| idx.pair(i).1).collect();
        let mut base = vec![false; idx.len()];
        for (i, _) in p.base_vector().iter() {
            base[i] = true;
        }
        let homotopies = p.homotopies().iter().map(|h| h.iter().map(|(i, _)| i).collect()).collect();
        Z2Layout { entry_col, entry_row, base, homotopies, cols: p.domain().len(), rows: p.codomain().len() }
    }
}

/// Counts of nonzero entries per row and column with O(1) maxima.
struct Counter {
    count: Vec<usize>,
    freq: Vec<usize>,
    max: usize,
}

impl Counter {
    fn new(n: usize, cap: usize) -> Self {
        let mut freq = vec![0; cap + 2];
        freq[0] = n;
        Counter { count: vec![0; n], freq, max: 0 }
    }

    fn inc(&mut self, i: usize) {
        let c = self.count[i];
        self.freq[c] -= 1;
        self.freq[c + 1] += 1;
        self.count[i] = c + 1;
        self.max = self.max.max(c + 1);
    }

    fn dec(&mut self, i: usize) {
        let c = self.count[i];
        self.freq[c] -= 1;
        self.freq[c - 1] += 1;
        self.count[i] = c - 1;
        if self.max == c && self.freq[c] == 0 {
            self.max = c - 1;
        }
    }
}

/// A current map over Z/2 with incremental penalty.
struct Z2State<'a> {
    layout: &'a Z2Layout,
    bits: Vec<bool>,
    cols: Counter,
    rows: Counter,
}

impl<'a> Z2State<'a> {
    fn new(layout: &'a Z2Layout) -> Self {
        let mut s = Z2State {
            layout,
            bits: vec![false; layout.base.len()],
            cols: Counter::new(layout.cols, layout.rows),
            rows: Counter::new(layout.rows, layout.cols),
        };
        for (e, &b) in layout.base.iter().enumerate() {
            if b {
                s.toggle(e);
            }
        }
        s
    }

    fn toggle(&mut self, e: usize) {
        let (c, r) = (self.layout.entry_col[e], self.layout.entry_row[e]);
        self.bits[e] = !self.bits[e];
        if self.bits[e] {
            self.cols.inc(c);
            self.rows.inc(r);
        } else {
            self.cols.dec(c);
            self.rows.dec(r);
        }
    }

    fn flip(&mut self, h: usize) {
        for k in 0..self.layout.homotopies[h].len() {
            self.toggle(self.layout.homotopies[h][k]);
        }
    }

    fn penalty(&self) -> usize {
        self.cols.max + self.rows.max
    }
}

/// Exhaustive enumeration result.
#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    /// Number of homotopy coefficients.
    pub width: usize,
    pub total: u64,
    pub histogram: BTreeMap<usize, u64>,
    pub min_value: usize,
    /// Coefficient vectors attaining the minimum, as integers whose bit `i`
    /// is coefficient `i`, in increasing order.
    pub minimizers: Vec<u64>,
    pub minimizers_truncated: bool,
}

impl Enumeration {
    /// Bit string of a coefficient vector, most significant coefficient first.
    pub fn bitstring(&self, k: u64) -> String {
        (0..self.width).rev().map(|i| if k >> i & 1 == 1 { '1' } else { '0' }).collect()
    }

    pub fn coefficients(&self, k: u64) -> Vec<bool> {
        (0..self.width).map(|i| k >> i & 1 == 1).collect()
    }

    pub fn to_json(&self) -> Value {
        let hist: Map<String, Value> = self.histogram.iter().map(|(v, c)| (v.to_string(), json!(c))).collect();
        let mut m = Map::new();
        m.insert("histogram".into(), Value::Object(hist));
        m.insert("min_value".into(), json!(self.min_value));
        m.insert(
            "minimizers".into(),
            Value::Array(self.minimizers.iter().map(|&k| Value::from(self.bitstring(k))).collect()),
        );
        m.insert("minimizers_truncated".into(), json!(self.minimizers_truncated));
        m.insert("total".into(), json!(self.total));
        Value::Object(m)
    }
}

struct Chunk {
    histogram: BTreeMap<usize, u64>,
    min: usize,
    minimizers: Vec<u64>,
}

/// Visits all `2^H` coefficient vectors on the raw homotopy columns and
/// tallies the bisimplicial penalty of each map.
pub fn enumerate_z2(p: &MapParameterization<Z2>, cap: usize) -> Result<Enumeration> {
    let width = p.homotopies().len();
    if width > cap {
        return Err(Error::TooLarge(format!(
            "{width} homotopy columns give 2^{width} assignments, above the cap of 2^{cap}"
        )));
    }
    if width >= 64 {
        return Err(Error::TooLarge("enumeration width must be below 64".into()));
    }
    let layout = Z2Layout::new(p);
    let high = width.min(8);
    let low = width - high;
    let run = |prefix: u64| -> Chunk {
        let mut state = Z2State::new(&layout);
        for i in 0..high {
            if prefix >> i & 1 == 1 {
                state.flip(low + i);
            }
        }
        let mut chunk = Chunk { histogram: BTreeMap::new(), min: usize::MAX, minimizers: Vec::new() };
        let mut gray = 0u64;
        for j in 0..(1u64 << low) {
            if j > 0 {
                let bit = j.trailing_zeros() as usize;
                gray ^= 1 << bit;
                state.flip(bit);
            }
            let v = state.penalty();
            *chunk.histogram.entry(v).or_insert(0) += 1;
            let k = (prefix << low) | gray;
            if v < chunk.min {
                chunk.min = v;
                chunk.minimizers.clear();
            }
            if v == chunk.min && chunk.minimizers.len() <= MAX_LISTED_MINIMIZERS {
                chunk.minimizers.push(k);
            }
        }
        chunk
    };
    let chunks: Vec<Chunk> = parallel::install(|| (0..(1u64 << high)).into_par_iter().map(run).collect());

    let mut histogram = BTreeMap::new();
    for c in &chunks {
        for (&v, &n) in &c.histogram {
            *histogram.entry(v).or_insert(0) += n;
        }
    }
    let min_value = *histogram.keys().next().expect("at least one assignment");
    let mut minimizers: Vec<u64> =
        chunks.into_iter().filter(|c| c.min == min_value).flat_map(|c| c.minimizers).collect();
    minimizers.sort_unstable();
    let truncated = histogram[&min_value] as usize > minimizers.len() || minimizers.len() > MAX_LISTED_MINIMIZERS;
    minimizers.truncate(MAX_LISTED_MINIMIZERS);
    Ok(Enumeration { width, total: 1u64 << width, histogram, min_value, minimizers, minimizers_truncated: truncated })
}

/// Objective for the heuristic searches: the bisimplicial penalty of the map
/// with raw homotopy coefficients `c`.
pub fn penalty_objective(p: &MapParameterization<Z2>) -> impl Fn(&[bool]) -> f64 + '_ {
    let layout = Z2Layout::new(p);
    move |c: &[bool]| {
        let mut s = Z2State::new(&layout);
        for (h, &on) in c.iter().enumerate() {
            if on {
                s.flip(h);
            }
        }
        s.penalty() as f64
    }
}

/// Geometric cooling `T_k = t0 * cooling^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealingSchedule {
    pub t0: f64,
    pub cooling: f64,
    pub iterations: usize,
}

impl Default for AnnealingSchedule {
    fn default() -> Self {
        AnnealingSchedule { t0: 10.0, cooling: 0.999, iterations: 25_300 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchTrace {
    pub method: &'static str,
    pub iterations: usize,
    pub best_value: f64,
    pub best_coefficients: Vec<bool>,
    pub seed: u64,
    pub schedule: Option<AnnealingSchedule>,
    pub restarts: usize,
    /// Best value after each iteration, starting with the initial value.
    pub history: Vec<f64>,
}

impl SearchTrace {
    fn start(method: &'static str, seed: u64, c: &[bool], value: f64) -> Self {
        SearchTrace {
            method,
            iterations: 0,
            best_value: value,
            best_coefficients: c.to_vec(),
            seed,
            schedule: None,
            restarts: 0,
            history: vec![value],
        }
    }

    fn record(&mut self, c: &[bool], value: f64) {
        self.iterations += 1;
        if value < self.best_value {
            self.best_value = value;
            self.best_coefficients = c.to_vec();
        }
        self.history.push(self.best_value);
    }

    pub fn is_monotone(&self) -> bool {
        self.history.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert(
            "best_coefficients".into(),
            Value::Array(self.best_coefficients.iter().map(|&b| json!(u8::from(b))).collect()),
        );
        m.insert("best_value".into(), json!(self.best_value));
        m.insert("iterations".into(), json!(self.iterations));
        m.insert("method".into(), json!(self.method));
        m.insert("restarts".into(), json!(self.restarts));
        if let Some(s) = self.schedule {
            m.insert("schedule".into(), json!({"cooling": s.cooling, "iterations": s.iterations, "t0": s.t0}));
        }
        m.insert("seed".into(), json!(self.seed));
        Value::Object(m)
    }
}

fn check_start(width: usize, start: Option<&[bool]>) -> Result<Vec<bool>> {
    match start {
        None => Ok(vec![false; width]),
        Some(s) if s.len() == width => Ok(s.to_vec()),
        Some(s) => Err(Error::InvalidInput(format!("start has {} coefficients, expected {width}", s.len()))),
    }
}

/// Simulated annealing with single-coefficient flips and Metropolis
/// acceptance.
pub fn simulated_annealing(
    width: usize,
    objective: impl Fn(&[bool]) -> f64,
    schedule: AnnealingSchedule,
    start: Option<&[bool]>,
    seed: u64,
) -> Result<SearchTrace> {
    let mut c = check_start(width, start)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = objective(&c);
    let mut trace = SearchTrace::start("anneal", seed, &c, current);
    trace.schedule = Some(schedule);
    let mut temperature = schedule.t0;
    for _ in 0..schedule.iterations {
        if width > 0 {
            let i = rng.random_range(0..width);
            c[i] = !c[i];
            let next = objective(&c);
            let delta = next - current;
            let accept = delta <= 0.0 || (temperature > 0.0 && rng.random::<f64>() < (-delta / temperature).exp());
            if accept {
                current = next;
            } else {
                c[i] = !c[i];
            }
        }
        trace.record(&c, current);
        temperature *= schedule.cooling;
    }
    Ok(trace)
}

/// Steepest descent over single flips; on reaching a local minimum it
/// restarts from a uniformly random vector, `restarts` times.
pub fn greedy_search(
    width: usize,
    objective: impl Fn(&[bool]) -> f64,
    restarts: usize,
    start: Option<&[bool]>,
    seed: u64,
) -> Result<SearchTrace> {
    let mut c = check_start(width, start)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = objective(&c);
    let mut trace = SearchTrace::start("greedy", seed, &c, current);
    loop {
        loop {
            let mut best: Option<(usize, f64)> = None;
            for i in 0..width {
                c[i] = !c[i];
                let v = objective(&c);
                c[i] = !c[i];
                if v < current && best.is_none_or(|(_, b)| v < b) {
                    best = Some((i, v));
                }
            }
            let Some((i, v)) = best else { break };
            c[i] = !c[i];
            current = v;
            trace.record(&c, current);
        }
        if trace.restarts == restarts {
            break;
        }
        trace.restarts += 1;
        c = (0..width).map(|_| rng.random::<bool>()).collect();
        current = objective(&c);
        trace.record(&c, current);
    }
    Ok(trace)
}

/// Uniform random single flips, all accepted; the best visited vector wins.
pub fn random_walk(
    width: usize,
    objective: impl Fn(&[bool]) -> f64,
    steps: usize,
    start: Option<&[bool]>,
    seed: u64,
) -> Result<SearchTrace> {
    let mut c = check_start(width, start)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = objective(&c);
    let mut trace = SearchTrace::start("random_walk", seed, &c, v);
    for _ in 0..steps {
        if width > 0 {
            let i = rng.random_range(0..width);
            c[i] = !c[i];
        }
        let v = objective(&c);
        trace.record(&c, v);
    }
    Ok(trace)
}

/// Coefficients of a Z/2 vector as field elements.
pub fn bits_to_z2(c: &[bool]) -> Vec<Z2> {
    c.iter().map(|&b| if b { Z2::one() } else { Z2::zero() }).collect()
}
