//! Memoryless binary channels, probability vectors and noise sampling.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Random stream used for noise sampling.
pub type RngStream = ChaCha8Rng;

/// Stream for trial `trial` of a run seeded with `master_seed`: a ChaCha8
/// generator keyed by `master_seed` (expanded with `seed_from_u64`) and
/// positioned on stream number `trial`. Streams of distinct trials never
/// overlap, so results do not depend on how trials are scheduled.
pub fn trial_stream(master_seed: u64, trial: u64) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// A binary-input binary-output channel given by its likelihood table
/// `W(y|x)`, stored as `likelihood[y][x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelModel {
    likelihood: [[f64; 2]; 2],
    flip_probability: f64,
}

impl ChannelModel {
    /// Binary symmetric channel with flip probability `p` in `[0, 1/2]`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(ChannelModel {
            likelihood: [[1.0 - p, p], [p, 1.0 - p]],
            flip_probability: p,
        })
    }

    /// Parses the `bsc:<p>` form used on the command line.
    pub fn parse(spec: &str) -> Result<Self> {
        let value = spec
            .strip_prefix("bsc:")
            .ok_or_else(|| Error::Format(format!("unknown channel `{spec}`, expected bsc:<p>")))?;
        let p = parse_probability(value)?;
        Self::bsc(p)
    }

    pub fn flip_probability(&self) -> f64 {
        self.flip_probability
    }

    /// `W(y|x)`.
    #[inline]
    pub fn likelihood(&self, y: u8, x: u8) -> f64 {
        self.likelihood[y as usize][x as usize]
    }

    pub fn table(&self) -> [[f64; 2]; 2] {
        self.likelihood
    }

    /// Normalized `(W(y|0), W(y|1))`.
    pub fn likelihood_prior(&self, y: u8) -> ProbVector {
        ProbVector::normalized(1, self.likelihood[(y & 1) as usize].to_vec())
    }

    /// `length` independent flips, each 1 with the channel's flip probability.
    pub fn sample_noise<R: rand::Rng + ?Sized>(&self, length: usize, rng: &mut R) -> Vec<u8> {
        let flips = Bernoulli::new(self.flip_probability).expect("p validated at construction");
        (0..length).map(|_| u8::from(flips.sample(rng))).collect()
    }
}

/// Accepts decimals (`0.05`) and fractions (`1/20`).
pub fn parse_probability(value: &str) -> Result<f64> {
    let bad = || Error::Format(format!("cannot parse probability `{value}`"));
    let p = match value.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            num / den
        }
        None => value.trim().parse().map_err(|_| bad())?,
    };
    Ok(p)
}

/// A normalized nonnegative table over the `2^k` patterns of `k` bits.
/// Index bit `t` holds the `t`-th bit of the pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector {
    width: usize,
    table: Vec<f64>,
}

impl ProbVector {
    /// Normalizes `table` to sum 1. An all-zero table (no pattern is
    /// consistent with the observations) becomes uniform.
    pub fn normalized(width: usize, mut table: Vec<f64>) -> Self {
        assert_eq!(table.len(), 1 << width, "table size must be 2^width");
        let total: f64 = table.iter().sum();
        if total > 0.0 && total.is_finite() {
            table.iter_mut().for_each(|v| *v /= total);
        } else {
            let uniform = 1.0 / table.len() as f64;
            table.iter_mut().for_each(|v| *v = uniform);
        }
        ProbVector { width, table }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn get(&self, pattern: usize) -> f64 {
        self.table[pattern]
    }

    pub fn max_abs_diff(&self, other: &ProbVector) -> f64 {
        assert_eq!(self.width, other.width);
        self.table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
