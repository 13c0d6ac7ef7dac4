//! Successive cancellation decoding.
//!
//! The likelihood of a window `u_i .. u_{i+w-1}` given the decided prefix
//! `u_1 .. u_{i-1}` is obtained by contracting, at every polarization step,
//! only the causal cone of the window. Before a step the wires split into a
//! decided region (left), the active window and a free region (right). A
//! gate whose inputs are all decided produces decided outputs, and a gate
//! whose inputs are all free maps the uniform distribution to itself, so
//! after the `d` layers only a contiguous band of wires is coupled to the
//! window. That band is distributed over the `b` sub-blocks of the next
//! step, where it becomes a window again. The likelihood table of the band
//! is the product of the sub-block tables; it is pulled back through the
//! layers (gates permute entries, decided wires are sliced, free wires are
//! summed) down to a table over the window.
//!
//! Sub-block results are cached per `(start, width)`: the decided prefix of
//! a block only ever grows during one decode, so a cached table stays
//! valid until the received word or the prefix is replaced.

use std::ops::Range;

use crate::channel::{ChannelModel, ProbVector};
use crate::circuit::{optimal_width, Circuit, StepLayout};
use crate::error::{check_bits, Error, Result};

/// Guard for the brute-force effective channel.
pub const MAX_ORACLE_BITS: usize = 27;

/// Widest band the contraction will tabulate.
const MAX_BAND: usize = 26;

/// A circuit with a frozen set; frozen inputs are fixed to 0.
#[derive(Clone, Debug)]
pub struct Code {
    circuit: Circuit,
    frozen: Vec<bool>,
}

impl Code {
    pub fn new(circuit: Circuit, frozen: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = vec![false; circuit.len()];
        for i in frozen {
            if i >= circuit.len() {
                return Err(Error::OutOfRange(format!(
                    "frozen index {i} not below N={}",
                    circuit.len()
                )));
            }
            mask[i] = true;
        }
        Ok(Code {
            circuit,
            frozen: mask,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn len(&self) -> usize {
        self.circuit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuit.is_empty()
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.frozen[i]).collect()
    }

    pub fn info_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.frozen[i]).collect()
    }

    /// `K = N - |F|`.
    pub fn info_count(&self) -> usize {
        self.frozen.iter().filter(|&&f| !f).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub u_hat: Vec<u8>,
    /// Normalized likelihood of every window, in decoding order.
    pub window_likelihoods: Vec<ProbVector>,
    pub windows: Vec<Range<usize>>,
}

/// An unnormalized likelihood table `exp(log_scale) * probs`, with `probs`
/// summing to 1 (or all zero when `log_scale` is `-inf`).
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledTable {
    pub probs: Vec<f64>,
    pub log_scale: f64,
}

impl ScaledTable {
    fn scalar(value: f64) -> Self {
        ScaledTable {
            probs: vec![1.0],
            log_scale: value.ln(),
        }
    }

    fn from_raw(mut probs: Vec<f64>, log_scale: f64) -> Self {
        let total: f64 = probs.iter().sum();
        if total > 0.0 {
            probs.iter_mut().for_each(|v| *v /= total);
            ScaledTable {
                probs,
                log_scale: log_scale + total.ln(),
            }
        } else {
            probs.iter_mut().for_each(|v| *v = 0.0);
            ScaledTable {
                probs,
                log_scale: f64::NEG_INFINITY,
            }
        }
    }

    /// Absolute likelihood of `pattern`.
    pub fn value(&self, pattern: usize) -> f64 {
        if self.probs[pattern] == 0.0 {
            0.0
        } else {
            (self.log_scale + self.probs[pattern].ln()).exp()
        }
    }

    pub fn to_prob_vector(&self) -> ProbVector {
        let width = self.probs.len().trailing_zeros() as usize;
        ProbVector::normalized(width, self.probs.clone())
    }
}

/// Per-block decoding state: decided wire values after every layer and
/// the cache of window tables.
#[derive(Clone, Debug)]
struct Block {
    /// `rows[0]` is the step input, `rows[s]` the output of layer `s`.
    rows: Vec<Vec<u8>>,
    known: Vec<usize>,
    cache: Vec<Option<ScaledTable>>,
}

/// Reusable successive cancellation state for one circuit and channel.
#[derive(Clone, Debug)]
pub struct Decoder<'a> {
    circuit: &'a Circuit,
    channel: ChannelModel,
    width: usize,
    layouts: Vec<StepLayout>,
    /// First block index of every level.
    level_base: Vec<usize>,
    blocks: Vec<Block>,
    received: Vec<u8>,
    max_band: usize,
}

impl<'a> Decoder<'a> {
    /// `width` is the decoding width: bands of more than `b * width` wires
    /// are rejected with [`Error::WidthTooSmall`].
    pub fn new(circuit: &'a Circuit, channel: &ChannelModel, width: usize) -> Result<Self> {
        let b = circuit.breadth();
        let d = circuit.depth();
        let l = circuit.steps();
        if width < 1 {
            return Err(Error::InvalidParameter(
                "decoding width must be at least 1".into(),
            ));
        }
        if b * width > MAX_BAND {
            return Err(Error::TooLarge {
                what: "decoding band",
                size: b * width,
                limit: MAX_BAND,
            });
        }
        let layouts: Vec<StepLayout> = (1..=l).map(|s| circuit.layout(s)).collect();
        let mut level_base = Vec::with_capacity(l);
        let mut blocks = Vec::new();
        for (k, layout) in layouts.iter().enumerate() {
            level_base.push(blocks.len());
            let count = b.pow(k as u32);
            let len = layout.len();
            for _ in 0..count {
                blocks.push(Block {
                    rows: vec![vec![0; len]; d + 1],
                    known: vec![0; d + 1],
                    cache: vec![None; (len + 1) * (width + 1)],
                });
            }
        }
        Ok(Decoder {
            circuit,
            channel: channel.clone(),
            width,
            layouts,
            level_base,
            blocks,
            received: vec![0; circuit.len()],
            max_band: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Widest band (in wires) tabulated since the last reset.
    pub fn max_band(&self) -> usize {
        self.max_band
    }

    /// Sets the received word and clears all decided values.
    pub fn reset(&mut self, y: &[u8]) -> Result<()> {
        if y.len() != self.circuit.len() {
            return Err(Error::LengthMismatch {
                expected: self.circuit.len(),
                actual: y.len(),
            });
        }
        check_bits(y)?;
        self.received.copy_from_slice(y);
        for block in &mut self.blocks {
            block.known.iter_mut().for_each(|k| *k = 0);
            block.cache.iter_mut().for_each(|c| *c = None);
        }
        self.max_band = 0;
        Ok(())
    }

    fn prefix_len(&self) -> usize {
        self.blocks[0].known[0]
    }

    fn prefix(&self) -> &[u8] {
        &self.blocks[0].rows[0][..self.prefix_len()]
    }

    /// Appends decided input bits.
    pub fn push_decided(&mut self, bits: &[u8]) -> Result<()> {
        let start = self.prefix_len();
        if start + bits.len() > self.circuit.len() {
            return Err(Error::OutOfRange(format!(
                "prefix of {} bits exceeds N={}",
                start + bits.len(),
                self.circuit.len()
            )));
        }
        check_bits(bits)?;
        let root = &mut self.blocks[0];
        root.rows[0][start..start + bits.len()].copy_from_slice(bits);
        root.known[0] = start + bits.len();
        Ok(())
    }

    /// Replaces the decided prefix, keeping cached work when `prefix`
    /// extends the current one.
    pub fn set_prefix(&mut self, prefix: &[u8]) -> Result<()> {
        let current = self.prefix_len();
        if prefix.len() >= current && prefix[..current] == *self.prefix() {
            return self.push_decided(&prefix[current..]);
        }
        let y = self.received.clone();
        self.reset(&y)?;
        self.push_decided(prefix)
    }

    /// Unnormalized likelihood of the `len` bits following the decided
    /// prefix.
    pub fn window_table(&mut self, len: usize) -> Result<ScaledTable> {
        let start = self.prefix_len();
        if len > self.width || start + len > self.circuit.len() {
            return Err(Error::OutOfRange(format!(
                "window {start}..{} (width limit {}, N={})",
                start + len,
                self.width,
                self.circuit.len()
            )));
        }
        self.query(1, 0, start, len)
    }

    /// Normalized likelihood of the `len` bits following `prefix`.
    pub fn window(&mut self, prefix: &[u8], len: usize) -> Result<ProbVector> {
        self.set_prefix(prefix)?;
        Ok(self.window_table(len)?.to_prob_vector())
    }

    /// Successive cancellation over disjoint windows of the decoding width.
    pub fn decode(&mut self, code: &Code, y: &[u8]) -> Result<DecodeResult> {
        self.decode_inner(code, y, true)
    }

    /// Decodes without keeping the per-window likelihoods.
    pub fn decode_bits(&mut self, code: &Code, y: &[u8]) -> Result<Vec<u8>> {
        Ok(self.decode_inner(code, y, false)?.u_hat)
    }

    fn decode_inner(&mut self, code: &Code, y: &[u8], keep: bool) -> Result<DecodeResult> {
        let n = self.circuit.len();
        if code.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: code.len(),
            });
        }
        self.reset(y)?;
        let mut likelihoods = Vec::new();
        let mut windows = Vec::new();
        let mut bits = Vec::with_capacity(self.width);
        for start in (0..n).step_by(self.width) {
            let len = self.width.min(n - start);
            let table = self.window_table(len)?;
            let frozen = (0..len)
                .filter(|&t| code.is_frozen(start + t))
                .fold(0usize, |m, t| m | (1 << t));
            let best = argmax_pattern(&table.probs, len, frozen);
            bits.clear();
            bits.extend((0..len).map(|t| ((best >> t) & 1) as u8));
            self.push_decided(&bits)?;
            if keep {
                likelihoods.push(table.to_prob_vector());
                windows.push(start..start + len);
            }
        }
        Ok(DecodeResult {
            u_hat: self.prefix().to_vec(),
            window_likelihoods: likelihoods,
            windows,
        })
    }

    fn block_index(&self, level: usize, offset: usize) -> usize {
        self.level_base[level - 1] + offset
    }

    /// Table for the window `start..start + len` of block `offset` at
    /// `level`, whose input prefix `0..start` must already be decided.
    fn query(
        &mut self,
        level: usize,
        offset: usize,
        start: usize,
        len: usize,
    ) -> Result<ScaledTable> {
        let idx = self.block_index(level, offset);
        let slot = start * (self.width + 1) + len;
        if let Some(hit) = &self.blocks[idx].cache[slot] {
            return Ok(hit.clone());
        }

        let b = self.circuit.breadth();
        let d = self.circuit.depth();
        let layout = self.layouts[level - 1].clone();

        let mut lo = vec![start; d + 1];
        let mut hi = vec![start + len; d + 1];
        for s in 1..=d {
            let (l, h, _) = layout.grow(s, lo[s - 1], hi[s - 1]);
            lo[s] = l;
            hi[s] = h;
        }
        let band = hi[d] - lo[d];
        if band > b * self.width {
            return Err(Error::WidthTooSmall {
                width: self.width,
                cone: band,
                limit: b * self.width,
            });
        }
        self.max_band = self.max_band.max(band);
        for (s, &start) in lo.iter().enumerate().skip(1) {
            self.extend_known(idx, &layout, s, start);
        }

        // Likelihood of the band after the last layer: product over the
        // sub-blocks, each queried on its share of the band.
        let stride = b.pow(level as u32 - 1);
        let mut table = vec![1.0f64];
        let mut log_scale = 0.0;
        // (sub-block, bit within its window) for every band wire
        let mut placement = vec![(0usize, 0usize); band];
        let mut children = Vec::with_capacity(b);
        for r in 0..b {
            let first = if lo[d] > r {
                (lo[d] - r).div_ceil(b)
            } else {
                0
            };
            let end = if hi[d] > r {
                (hi[d] - r).div_ceil(b)
            } else {
                0
            };
            let child = if level == self.circuit.steps() {
                self.leaf(offset + r * stride, idx, d, r, first, end - first)
            } else {
                let child_idx = self.block_index(level + 1, offset + r * stride);
                self.hand_down(idx, d, child_idx, r, first);
                self.query(level + 1, offset + r * stride, first, end - first)?
            };
            log_scale += child.log_scale;
            for j in first..end {
                placement[r + j * b - lo[d]] = (r, j - first);
            }
            children.push(child);
        }
        if band > 0 {
            table = vec![0.0; 1 << band];
            for (x, slot) in table.iter_mut().enumerate() {
                let mut index = [0usize; 32];
                for (t, &(r, bit)) in placement.iter().enumerate() {
                    index[r] |= ((x >> t) & 1) << bit;
                }
                *slot = (0..b).map(|r| children[r].probs[index[r]]).product();
            }
        } else {
            table[0] = children.iter().map(|c| c.probs[0]).product();
        }

        // Pull back through layers d..1.
        let kernel = self.circuit.kernel();
        let gate_mask = (1usize << b) - 1;
        let mut scaled = ScaledTable::from_raw(table, log_scale);
        for s in (1..=d).rev() {
            let (plo, phi) = (lo[s - 1], hi[s - 1]);
            let inner = phi - plo;
            let left = plo - lo[s];
            let right = hi[s] - phi;
            let row = &self.blocks[idx].rows[s - 1];
            let known_bits =
                (0..left).fold(0usize, |acc, t| acc | (usize::from(row[lo[s] + t]) << t));
            let offsets: Vec<usize> = layout
                .touched(s, plo, phi)
                .map(|g| layout.shift(s) + g * b - lo[s])
                .collect();
            let mut pulled = vec![0.0f64; 1 << inner];
            for (z_inner, slot) in pulled.iter_mut().enumerate() {
                let base = known_bits | (z_inner << left);
                let mut acc = 0.0;
                for free in 0..1usize << right {
                    let mut z = base | (free << (left + inner));
                    for &o in &offsets {
                        let x = kernel.apply_packed(((z >> o) & gate_mask) as u32) as usize;
                        z = (z & !(gate_mask << o)) | (x << o);
                    }
                    acc += scaled.probs[z];
                }
                *slot = acc;
            }
            scaled = ScaledTable::from_raw(pulled, scaled.log_scale);
        }

        self.blocks[idx].cache[slot] = Some(scaled.clone());
        Ok(scaled)
    }

    /// Copies decided outputs of block `idx` into the input prefix of its
    /// sub-block `r` up to local position `upto`.
    fn hand_down(&mut self, idx: usize, d: usize, child: usize, r: usize, upto: usize) {
        let b = self.circuit.breadth();
        let from = self.blocks[child].known[0];
        if from >= upto {
            return;
        }
        let (parent, child_block) = two_mut(&mut self.blocks, idx, child);
        for j in from..upto {
            child_block.rows[0][j] = parent.rows[d][r + j * b];
        }
        child_block.known[0] = upto;
    }

    /// Table of a single channel wire seen as a block of length one.
    fn leaf(
        &self,
        wire: usize,
        parent: usize,
        d: usize,
        r: usize,
        start: usize,
        len: usize,
    ) -> ScaledTable {
        let y = self.received[wire];
        match (start, len) {
            (0, 1) => ScaledTable::from_raw(
                vec![self.channel.likelihood(y, 0), self.channel.likelihood(y, 1)],
                0.0,
            ),
            (0, _) => {
                ScaledTable::scalar(self.channel.likelihood(y, 0) + self.channel.likelihood(y, 1))
            }
            _ => ScaledTable::scalar(self.channel.likelihood(y, self.blocks[parent].rows[d][r])),
        }
    }

    /// Makes `rows[s][..upto]` of block `idx` available.
    fn extend_known(&mut self, idx: usize, layout: &StepLayout, s: usize, upto: usize) {
        if s == 0 {
            debug_assert!(
                self.blocks[idx].known[0] >= upto,
                "input prefix not decided"
            );
            return;
        }
        let from = self.blocks[idx].known[s];
        if from >= upto {
            return;
        }
        let b = layout.breadth();
        let mut end = from;
        while end < upto {
            end = match layout.gate_of(s, end) {
                Some(g) => g + b,
                None => end + 1,
            };
        }
        self.extend_known(idx, layout, s - 1, end);

        let kernel = self.circuit.kernel();
        let block = &mut self.blocks[idx];
        let (before, after) = block.rows.split_at_mut(s);
        let input = &before[s - 1];
        let output = &mut after[0];
        let mut pos = from;
        while pos < end {
            match layout.gate_of(s, pos) {
                Some(g) => {
                    let packed = (0..b).fold(0u32, |acc, t| acc | (u32::from(input[g + t]) << t));
                    let x = kernel.apply_packed(packed);
                    for t in 0..b {
                        output[g + t] = ((x >> t) & 1) as u8;
                    }
                    pos = g + b;
                }
                None => {
                    output[pos] = input[pos];
                    pos += 1;
                }
            }
        }
        block.known[s] = end;
    }
}

fn two_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert!(a < b);
    let (head, tail) = v.split_at_mut(b);
    (&mut head[a], &mut tail[0])
}

/// Most likely pattern with the `frozen` bits at 0; ties go to the
/// lexicographically smallest pattern read from the first bit.
fn argmax_pattern(probs: &[f64], len: usize, frozen: usize) -> usize {
    let lex = |x: usize| x.reverse_bits() >> (usize::BITS as usize - len.max(1));
    let mut best: Option<usize> = None;
    for x in 0..1usize << len {
        if x & frozen != 0 {
            continue;
        }
        best = match best {
            None => Some(x),
            Some(cur) if probs[x] > probs[cur] || (probs[x] == probs[cur] && lex(x) < lex(cur)) => {
                Some(x)
            }
            keep => keep,
        };
    }
    best.unwrap_or(0)
}

/// Likelihood of the `width` bits after `prefix`, computed from a fresh
/// contraction state with decoding width `width`.
pub fn window_likelihood(
    code: &Code,
    channel: &ChannelModel,
    y: &[u8],
    prefix: &[u8],
    width: usize,
) -> Result<ProbVector> {
    let mut decoder = Decoder::new(code.circuit(), channel, width)?;
    decoder.reset(y)?;
    decoder.window(prefix, width)
}

/// Successive cancellation decoding of `y` with windows of `width` bits.
pub fn sc_decode(
    code: &Code,
    channel: &ChannelModel,
    y: &[u8],
    width: usize,
) -> Result<DecodeResult> {
    Decoder::new(code.circuit(), channel, width)?.decode(code, y)
}

/// Decodes with the optimal width of the code's breadth and depth.
pub fn sc_decode_default(code: &Code, channel: &ChannelModel, y: &[u8]) -> Result<DecodeResult> {
    let c = code.circuit();
    sc_decode(code, channel, y, optimal_width(c.breadth(), c.depth()))
}

/// Brute-force effective channel: for every value of the `width` bits after
/// `prefix`, the sum over all completions of the remaining inputs of
/// `prod_j W(y_j | (G u)_j)`, normalized.
pub fn effective_channel_oracle(
    circuit: &Circuit,
    channel: &ChannelModel,
    y: &[u8],
    prefix: &[u8],
    width: usize,
) -> Result<ProbVector> {
    let n = circuit.len();
    if n > MAX_ORACLE_BITS {
        return Err(Error::TooLarge {
            what: "oracle block length",
            size: n,
            limit: MAX_ORACLE_BITS,
        });
    }
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: y.len(),
        });
    }
    let start = prefix.len();
    if start + width > n {
        return Err(Error::OutOfRange(format!(
            "window {start}..{} exceeds N={n}",
            start + width
        )));
    }
    check_bits(y)?;
    check_bits(prefix)?;

    let columns = circuit.generator_columns()?;
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let y_packed = y
        .iter()
        .enumerate()
        .fold(0u64, |acc, (j, &v)| acc | (u64::from(v) << j));
    let ones = y_packed.count_ones() as usize;
    let zeros = n - ones;
    let w = channel.table();
    // weights[a][c]: a wires with y=0,x=1 and c wires with y=1,x=0
    let weights: Vec<Vec<f64>> = (0..=zeros)
        .map(|a| {
            (0..=ones)
                .map(|c| {
                    w[0][1].powi(a as i32)
                        * w[0][0].powi((zeros - a) as i32)
                        * w[1][0].powi(c as i32)
                        * w[1][1].powi((ones - c) as i32)
                })
                .collect()
        })
        .collect();
    let likelihood = |x: u64| {
        let a = (x & !y_packed & mask).count_ones() as usize;
        let c = (!x & y_packed).count_ones() as usize;
        weights[a][c]
    };

    let base = prefix
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 1)
        .fold(0u64, |acc, (j, _)| acc ^ columns[j]);
    let heads: Vec<u64> = (0..1usize << width)
        .map(|v| {
            (0..width)
                .filter(|t| (v >> t) & 1 == 1)
                .fold(base, |acc, t| acc ^ columns[start + t])
        })
        .collect();
    let free = n - start - width;
    let table = if free <= start + width {
        let rest = &columns[start + width..];
        heads
            .iter()
            .map(|&head| {
                let mut x = head;
                let mut total = likelihood(x);
                for k in 1..1u64 << rest.len() {
                    x ^= rest[k.trailing_zeros() as usize];
                    total += likelihood(x);
                }
                total
            })
            .collect()
    } else {
        coset_sums_dual(&columns, w, y_packed, n, start + width, &heads)
    };
    Ok(ProbVector::normalized(width, table))
}

/// Same coset sums as the direct enumeration, `sum over v in C of
/// f(head + v)` with `C` spanned by the columns from `fixed` on, evaluated
/// over the dual space: `|C^perp|^-1 sum over s in C^perp of
/// (-1)^(s.head) f^(s)`, where `f^(s) = prod_j (W(y_j|0) + (-1)^(s_j) W(y_j|1))`.
/// `C^perp` is spanned by the first `fixed` rows of the inverse generator,
/// so this costs `2^fixed` per head instead of `2^(n - fixed)`.
fn coset_sums_dual(
    columns: &[u64],
    w: [[f64; 2]; 2],
    y_packed: u64,
    n: usize,
    fixed: usize,
    heads: &[u64],
) -> Vec<f64> {
    let dual = inverse_rows(columns, n);
    let ones = y_packed.count_ones() as usize;
    let zeros = n - ones;
    let (sum0, diff0) = (w[0][0] + w[0][1], w[0][0] - w[0][1]);
    let (sum1, diff1) = (w[1][0] + w[1][1], w[1][0] - w[1][1]);
    // spectrum[a][c]: s covers a wires with y=0 and c wires with y=1
    let spectrum: Vec<Vec<f64>> = (0..=zeros)
        .map(|a| {
            (0..=ones)
                .map(|c| {
                    diff0.powi(a as i32)
                        * sum0.powi((zeros - a) as i32)
                        * diff1.powi(c as i32)
                        * sum1.powi((ones - c) as i32)
                })
                .collect()
        })
        .collect();
    let basis = &dual[..fixed];
    let scale = 1.0 / (1u64 << fixed) as f64;
    let mut totals = vec![0.0; heads.len()];
    let mut s = 0u64;
    for k in 0..1u64 << fixed {
        if k > 0 {
            s ^= basis[k.trailing_zeros() as usize];
        }
        let a = (s & !y_packed).count_ones() as usize;
        let c = (s & y_packed).count_ones() as usize;
        let f_hat = spectrum[a][c];
        for (total, &head) in totals.iter_mut().zip(heads) {
            if (s & head).count_ones() & 1 == 0 {
                *total += f_hat;
            } else {
                *total -= f_hat;
            }
        }
    }
    totals.iter().map(|t| (t * scale).max(0.0)).collect()
}

/// Rows `h_i` of the inverse generator, packed: `h_i . g_j = [i == j]`.
fn inverse_rows(columns: &[u64], n: usize) -> Vec<u64> {
    // Gauss-Jordan on [G^T | I]; afterwards the right half is (G^T)^-1,
    // whose columns are the h_i.
    let mut rows: Vec<(u64, u64)> = columns
        .iter()
        .enumerate()
        .map(|(j, &g)| (g, 1u64 << j))
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| (rows[r].0 >> col) & 1 == 1)
            .expect("generator is invertible");
        rows.swap(col, pivot);
        let (pg, pi) = rows[col];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && (row.0 >> col) & 1 == 1 {
                row.0 ^= pg;
                row.1 ^= pi;
            }
        }
    }
    (0..n)
        .map(|i| {
            rows.iter()
                .enumerate()
                .fold(0u64, |acc, (t, &(_, inv))| acc | (((inv >> i) & 1) << t))
        })
        .collect()
}
