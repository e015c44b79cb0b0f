//! Single-bit-flip simulated annealing over QUBO instances.
//!
//! Each readout starts from a uniformly random vector and performs `sweeps`
//! passes over all variables while the inverse temperature follows the
//! schedule. A flip with energy change `d` is accepted when `d <= 0`, else
//! with probability `exp(-beta * d)`. Energy changes come from per-variable
//! local fields updated along the sparse coupling lists.
//!
//! Readout `r` draws from its own ChaCha stream keyed by `(seed, r)`, so the
//! result of a run does not depend on how readouts are spread over threads,
//! and the first `k` readouts of a run equal a `k`-readout run.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::qubo::{BitVector, QuboError, QuboInstance};

#[derive(Debug, Error)]
pub enum AnnealError {
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("readouts must be at least 1")]
    NoReadouts,
    #[error("sample set is empty")]
    EmptySampleSet,
    #[error("failed to build thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Qubo(#[from] QuboError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    #[default]
    Geometric,
    Linear,
}

impl FromStr for Interpolation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "geometric" => Ok(Interpolation::Geometric),
            "linear" => Ok(Interpolation::Linear),
            other => Err(format!("unknown interpolation `{other}`")),
        }
    }
}

impl fmt::Display for Interpolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Interpolation::Geometric => "geometric",
            Interpolation::Linear => "linear",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepOrder {
    /// Variables `0..n` in index order every sweep.
    #[default]
    Sequential,
    /// A fresh random permutation every sweep.
    Random,
}

/// Inverse-temperature schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnealSchedule {
    beta_start: f64,
    beta_end: f64,
    sweeps: usize,
    interpolation: Interpolation,
    order: SweepOrder,
}

impl Default for AnnealSchedule {
    /// Geometric from 2 to 10 over 2000 sequential sweeps.
    fn default() -> Self {
        AnnealSchedule {
            beta_start: 2.0,
            beta_end: 10.0,
            sweeps: 2000,
            interpolation: Interpolation::Geometric,
            order: SweepOrder::Sequential,
        }
    }
}

impl AnnealSchedule {
    pub fn new(
        beta_start: f64,
        beta_end: f64,
        sweeps: usize,
        interpolation: Interpolation,
    ) -> Result<Self, AnnealError> {
        if !(beta_start > 0.0 && beta_start.is_finite()) {
            return Err(AnnealError::Schedule(format!(
                "beta_start must be positive, got {beta_start}"
            )));
        }
        if !(beta_end >= beta_start && beta_end.is_finite()) {
            return Err(AnnealError::Schedule(format!(
                "beta_end must be finite and at least beta_start ({beta_start}), got {beta_end}"
            )));
        }
        if sweeps == 0 {
            return Err(AnnealError::Schedule("sweeps must be at least 1".into()));
        }
        Ok(AnnealSchedule {
            beta_start,
            beta_end,
            sweeps,
            interpolation,
            order: SweepOrder::Sequential,
        })
    }

    pub fn with_order(mut self, order: SweepOrder) -> Self {
        self.order = order;
        self
    }

    pub fn beta_start(&self) -> f64 {
        self.beta_start
    }

    pub fn beta_end(&self) -> f64 {
        self.beta_end
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn order(&self) -> SweepOrder {
        self.order
    }

    /// Inverse temperature during sweep `k` (0-based). The first sweep runs at
    /// `beta_start` and the last at `beta_end`.
    pub fn beta(&self, k: usize) -> f64 {
        if self.sweeps == 1 {
            return self.beta_end;
        }
        let t = k as f64 / (self.sweeps - 1) as f64;
        match self.interpolation {
            Interpolation::Geometric => self.beta_start * (self.beta_end / self.beta_start).powf(t),
            Interpolation::Linear => self.beta_start + (self.beta_end - self.beta_start) * t,
        }
    }
}

/// Coupling structure in compressed rows, both directions stored.
struct Couplings {
    linear: Vec<f64>,
    starts: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
}

impl Couplings {
    fn new(q: &QuboInstance) -> Self {
        let n = q.n();
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut linear = vec![0.0; n];
        for (i, j, w) in q.entries() {
            if i == j {
                linear[i] = w;
            } else {
                adjacency[i].push((j, w));
                adjacency[j].push((i, w));
            }
        }
        let mut starts = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        starts.push(0);
        for row in adjacency {
            for (j, w) in row {
                neighbors.push(j);
                weights.push(w);
            }
            starts.push(neighbors.len());
        }
        Couplings {
            linear,
            starts,
            neighbors,
            weights,
        }
    }

    fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.starts[i]..self.starts[i + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// `field[i]` = diagonal weight plus couplings to currently set bits, so
    /// flipping bit `i` changes the energy by `field[i]` (0 → 1) or
    /// `-field[i]` (1 → 0).
    fn fields(&self, state: &[bool]) -> Vec<f64> {
        let mut field = self.linear.clone();
        for (i, &on) in state.iter().enumerate() {
            if on {
                for (j, w) in self.row(i) {
                    field[j] += w;
                }
            }
        }
        field
    }
}

fn readout_rng(seed: u64, readout: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(readout as u64);
    rng
}

fn anneal_one(couplings: &Couplings, schedule: &AnnealSchedule, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let n = couplings.linear.len();
    let mut state: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut field = couplings.fields(&state);
    let mut order: Vec<usize> = (0..n).collect();

    for sweep in 0..schedule.sweeps {
        let beta = schedule.beta(sweep);
        if schedule.order == SweepOrder::Random {
            order.shuffle(rng);
        }
        for &i in &order {
            let delta = if state[i] { -field[i] } else { field[i] };
            let accept = delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp();
            if accept {
                state[i] = !state[i];
                let sign = if state[i] { 1.0 } else { -1.0 };
                for (j, w) in couplings.row(i) {
                    field[j] += sign * w;
                }
            }
        }
    }
    state
}

/// One readout: the final state and its energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub bits: BitVector,
    pub energy: f64,
}

/// Samples from one annealing run, in readout order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    samples: Vec<Sample>,
    instance_n: usize,
    seed: u64,
}

impl SampleSet {
    /// Wraps externally produced samples (used for synthetic sets in tests
    /// and when re-reading exported runs).
    pub fn from_samples(samples: Vec<Sample>, instance_n: usize, seed: u64) -> Self {
        SampleSet {
            samples,
            instance_n,
            seed,
        }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn instance_n(&self) -> usize {
        self.instance_n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.energy)
    }

    /// Lowest-energy sample; the earliest readout wins ties.
    pub fn best(&self) -> Result<&Sample, AnnealError> {
        let mut iter = self.samples.iter();
        let first = iter.next().ok_or(AnnealError::EmptySampleSet)?;
        Ok(iter.fold(first, |best, s| if s.energy < best.energy { s } else { best }))
    }

    pub fn summarize(&self, target: Option<f64>) -> Result<SummaryStats, AnnealError> {
        SummaryStats::from_energies(&self.energies().collect::<Vec<_>>(), target)
    }

    /// CSV with columns `readout_index,energy,bits`; bits are hex-packed,
    /// least significant bit first within each byte.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), AnnealError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["readout_index", "energy", "bits"]).map_err(csv_io)?;
        for (k, s) in self.samples.iter().enumerate() {
            w.write_record([k.to_string(), s.energy.to_string(), s.bits.to_hex()])
                .map_err(csv_io)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a CSV written by [`SampleSet::write_csv`].
    pub fn read_csv<R: std::io::Read>(input: R, instance_n: usize, seed: u64) -> Result<Self, AnnealError> {
        let mut r = csv::Reader::from_reader(input);
        let mut samples = Vec::new();
        for (line, record) in r.records().enumerate() {
            let record = record.map_err(csv_io)?;
            let parse_err = |message: String| QuboError::Parse {
                line: line + 2,
                message,
            };
            let energy: f64 = record
                .get(1)
                .ok_or_else(|| parse_err("missing energy".into()))?
                .parse()
                .map_err(|e: std::num::ParseFloatError| parse_err(e.to_string()))?;
            let bits = BitVector::from_hex(record.get(2).unwrap_or(""), instance_n)?;
            samples.push(Sample { bits, energy });
        }
        Ok(SampleSet::from_samples(samples, instance_n, seed))
    }
}

fn csv_io(e: csv::Error) -> AnnealError {
    AnnealError::Io(std::io::Error::other(e))
}

/// Energy statistics over a sample set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator); 0 for a single sample.
    pub stddev: f64,
    /// False when there is only one sample and `stddev` is a placeholder.
    pub stddev_defined: bool,
    pub count_at_min: usize,
    pub target: Option<f64>,
    pub fraction_at_target: Option<f64>,
}

impl SummaryStats {
    pub fn from_energies(energies: &[f64], target: Option<f64>) -> Result<Self, AnnealError> {
        if energies.is_empty() {
            return Err(AnnealError::EmptySampleSet);
        }
        let count = energies.len();
        let mut sorted = energies.to_vec();
        sorted.sort_by(f64::total_cmp);
        let min = sorted[0];
        let max = sorted[count - 1];
        let median = if count % 2 == 1 {
            sorted[count / 2]
        } else {
            0.5 * (sorted[count / 2 - 1] + sorted[count / 2])
        };
        let mean = energies.iter().sum::<f64>() / count as f64;
        let (stddev, stddev_defined) = if count > 1 {
            let ss: f64 = energies.iter().map(|e| (e - mean).powi(2)).sum();
            ((ss / (count - 1) as f64).sqrt(), true)
        } else {
            (0.0, false)
        };
        let count_at_min = energies.iter().filter(|&&e| e == min).count();
        let fraction_at_target = target.map(|t| energies.iter().filter(|&&e| e <= t).count() as f64 / count as f64);
        Ok(SummaryStats {
            count,
            min,
            max,
            median,
            mean,
            stddev,
            stddev_defined,
            count_at_min,
            target,
            fraction_at_target,
        })
    }

    pub fn to_json(&self) -> Result<String, AnnealError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Runs `readouts` independent annealing runs on the global rayon pool.
pub fn anneal(
    q: &QuboInstance,
    readouts: usize,
    schedule: &AnnealSchedule,
    seed: u64,
) -> Result<SampleSet, AnnealError> {
    if readouts == 0 {
        return Err(AnnealError::NoReadouts);
    }
    let couplings = Couplings::new(q);
    let samples = (0..readouts)
        .into_par_iter()
        .map(|r| {
            let mut rng = readout_rng(seed, r);
            let bits = BitVector::from_bools(anneal_one(&couplings, schedule, &mut rng));
            let energy = q.energy(&bits)?;
            Ok(Sample { bits, energy })
        })
        .collect::<Result<Vec<_>, QuboError>>()?;
    Ok(SampleSet {
        samples,
        instance_n: q.n(),
        seed,
    })
}

/// [`anneal`] on a dedicated pool of `threads` workers.
pub fn anneal_with_threads(
    q: &QuboInstance,
    readouts: usize,
    schedule: &AnnealSchedule,
    seed: u64,
    threads: usize,
) -> Result<SampleSet, AnnealError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AnnealError::ThreadPool(e.to_string()))?;
    pool.install(|| anneal(q, readouts, schedule, seed))
}
