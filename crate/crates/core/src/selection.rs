//! Undetected-error profiles and frozen-set selection.
//!
//! `P_U(i)` is the probability that input position `i` is the first flipped
//! position when the channel error pattern is pulled back through the
//! encoder, i.e. the mass of `(1-p, p)^N` on `{G v : v_j = 0 for j < i,
//! v_i = 1}`. Freezing the positions with the largest `P_U(i)` minimizes the
//! probability that the first error escapes every frozen check before it.

use std::io::Write;

use crate::channel::ChannelModel;
use crate::circuit::{optimal_width, Circuit};
use crate::decoder::Decoder;
use crate::error::{Error, Result};

/// Guard for the brute-force profile.
pub const MAX_ORACLE_BITS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorProfile {
    /// Label of the circuit the profile was computed for.
    pub circuit: String,
    pub flip_probability: f64,
    /// `P_U(i)` for every input position, 0-based.
    pub values: Vec<f64>,
}

impl ErrorProfile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Writes `i,pu` rows with 1-based positions.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        writer.write_record(["i", "pu"]).map_err(io)?;
        for (i, &v) in self.values.iter().enumerate() {
            writer
                .write_record([(i + 1).to_string(), crate::harness::fmt_g12(v)])
                .map_err(io)?;
        }
        writer.flush()?;
        Ok(())
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=0.5).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// Computes `P_U(i)` for every `i` by contracting the decoder network with
/// an all-zero received word, a zero prefix and `u_i = 1`.
pub fn pu_profile(circuit: &Circuit, p: f64) -> Result<ErrorProfile> {
    check_probability(p)?;
    let channel = ChannelModel::bsc(p)?;
    let width = optimal_width(circuit.breadth(), circuit.depth());
    let mut decoder = Decoder::new(circuit, &channel, width)?;
    let n = circuit.len();
    decoder.reset(&vec![0; n])?;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let table = decoder.window_table(1)?;
        values.push(table.value(1));
        decoder.push_decided(&[0])?;
    }
    Ok(ErrorProfile {
        circuit: circuit.label(),
        flip_probability: p,
        values,
    })
}

/// Brute-force `P_U(i)`: enumerates every input `v` with `v_j = 0` for
/// `j < i` and `v_i = 1`, weighting `e = G v` by `p^|e| (1-p)^(N-|e|)`.
pub fn pu_oracle(circuit: &Circuit, p: f64, i: usize) -> Result<f64> {
    check_probability(p)?;
    let n = circuit.len();
    if n > MAX_ORACLE_BITS {
        return Err(Error::TooLarge {
            what: "oracle block length",
            size: n,
            limit: MAX_ORACLE_BITS,
        });
    }
    if i >= n {
        return Err(Error::OutOfRange(format!("position {i} not below N={n}")));
    }
    let columns = circuit.generator_columns()?;
    let weights: Vec<f64> = (0..=n)
        .map(|k| p.powi(k as i32) * (1.0 - p).powi((n - k) as i32))
        .collect();
    let free = &columns[i + 1..];
    let mut e = columns[i];
    let mut total = weights[e.count_ones() as usize];
    for k in 1..1u64 << free.len() {
        e ^= free[k.trailing_zeros() as usize];
        total += weights[e.count_ones() as usize];
    }
    Ok(total)
}

/// Freezes the `N - K` positions with the largest `P_U(i)`; among equal
/// values the smaller position is frozen first. Returns sorted positions.
pub fn select_frozen(profile: &ErrorProfile, k: usize) -> Result<Vec<usize>> {
    let n = profile.len();
    if k > n {
        return Err(Error::InvalidK { k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        profile.values[b]
            .total_cmp(&profile.values[a])
            .then(a.cmp(&b))
    });
    let mut frozen = order[..n - k].to_vec();
    frozen.sort_unstable();
    Ok(frozen)
}

/// `P_U = sum of P_U(i)` over the non-frozen positions, added from the
/// smallest value up.
pub fn total_undetected(profile: &ErrorProfile, frozen: &[usize]) -> f64 {
    let mut is_frozen = vec![false; profile.len()];
    for &i in frozen {
        is_frozen[i] = true;
    }
    let mut kept: Vec<f64> = profile
        .values
        .iter()
        .zip(&is_frozen)
        .filter(|(_, &f)| !f)
        .map(|(&v, _)| v)
        .collect();
    kept.sort_by(f64::total_cmp);
    kept.iter().sum()
}
