//! Encoding circuits for polar (`d = 1`) and convolutional polar (`d > 1`)
//! codes, causal cones of a polarization step and the width/complexity
//! figures derived from them.
//!
//! Wire positions are 0-based throughout the library; steps and layers are
//! numbered from 1 starting on the input side.
//!
//! A polarization step on a block of `n` wires is a stack of `d` layers.
//! Layer `s` holds gates starting at wires `d - s, d - s + b, ...`; gates
//! that would cross the end of the block are dropped and the uncovered
//! wires pass through unchanged. After the step, wire `j` of the block goes
//! to sub-block `j mod b` and each sub-block is encoded recursively, so at
//! step `k` the blocks are the residue classes of the global wires modulo
//! `b^(k-1)`.

use std::fmt::Write as _;
use std::ops::Range;

use crate::error::{check_bits, Error, Result};
use crate::kernel::Kernel;

/// Guard for explicit `2^N` tables.
pub const MAX_PERMUTATION_BITS: usize = 20;

/// Gate layout of a single polarization step on a block of `len` wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepLayout {
    breadth: usize,
    depth: usize,
    len: usize,
}

impl StepLayout {
    pub fn new(breadth: usize, depth: usize, len: usize) -> Self {
        StepLayout {
            breadth,
            depth,
            len,
        }
    }

    pub fn breadth(&self) -> usize {
        self.breadth
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Offset of the first gate of `layer` (1-based). The output-side layer
    /// is aligned with the block and each layer above it sits one wire
    /// further along.
    pub fn shift(&self, layer: usize) -> usize {
        self.depth - layer
    }

    /// Start positions of the gates in `layer` (1-based), left to right.
    pub fn gate_starts(&self, layer: usize) -> impl Iterator<Item = usize> + '_ {
        let shift = self.shift(layer);
        (shift..)
            .step_by(self.breadth)
            .take_while(move |&s| s + self.breadth <= self.len)
    }

    pub fn gate_count(&self, layer: usize) -> usize {
        let shift = self.shift(layer);
        if self.len < shift + self.breadth {
            0
        } else {
            (self.len - shift) / self.breadth
        }
    }

    /// Start of the gate of `layer` covering `wire`, if the wire is not a
    /// pass-through.
    pub fn gate_of(&self, layer: usize, wire: usize) -> Option<usize> {
        let shift = self.shift(layer);
        if wire < shift {
            return None;
        }
        let start = wire - (wire - shift) % self.breadth;
        (start + self.breadth <= self.len).then_some(start)
    }

    /// Starts of the gates of `layer` with a wire in `lo..hi`. For an empty
    /// range this is the gate (if any) straddling the boundary at `lo`.
    pub fn touched(&self, layer: usize, lo: usize, hi: usize) -> Range<usize> {
        let b = self.breadth;
        let shift = self.shift(layer);
        let count = self.gate_count(layer);
        // gate g starts at shift + g*b; touched iff start + b > lo && start < hi
        let first = if lo + 1 > shift + b {
            (lo + 1 - shift - b).div_ceil(b)
        } else {
            0
        };
        let end = if hi > shift {
            ((hi - shift).div_ceil(b)).min(count)
        } else {
            0
        };
        first.min(end)..end
    }

    /// The range of wires after `layer` that depends on wires `lo..hi` before
    /// it, together with the indices of the gates involved.
    pub fn grow(&self, layer: usize, lo: usize, hi: usize) -> (usize, usize, Range<usize>) {
        let gates = self.touched(layer, lo, hi);
        if gates.is_empty() {
            return (lo, hi, gates);
        }
        let shift = self.shift(layer);
        let first = shift + gates.start * self.breadth;
        let last_end = shift + gates.end * self.breadth;
        (lo.min(first), hi.max(last_end), gates)
    }

    /// Forward dependency traversal of the window `start..start + width`.
    pub fn cone(&self, start: usize, width: usize) -> CausalCone {
        let (mut lo, mut hi) = (start, start + width);
        let mut gates = Vec::with_capacity(self.depth);
        for layer in 1..=self.depth {
            let (l, h, touched) = self.grow(layer, lo, hi);
            let shift = self.shift(layer);
            gates.push(touched.map(|g| shift + g * self.breadth).collect());
            lo = l;
            hi = h;
        }
        CausalCone {
            window: start..start + width,
            gates,
            outputs: lo..hi,
        }
    }
}

/// Gates and output wires of one polarization step that depend on an input
/// window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalCone {
    pub window: Range<usize>,
    /// Start wire of every cone gate, per layer.
    pub gates: Vec<Vec<usize>>,
    /// Wires at the step output whose value depends on the window.
    pub outputs: Range<usize>,
}

impl CausalCone {
    pub fn gate_count(&self) -> usize {
        self.gates.iter().map(Vec::len).sum()
    }

    pub fn layer_counts(&self) -> Vec<usize> {
        self.gates.iter().map(Vec::len).collect()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn output_wires(&self) -> Vec<usize> {
        self.outputs.clone().collect()
    }
}

/// One gate of a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GatePlacement {
    /// 1-based polarization step.
    pub step: usize,
    /// 1-based layer within the step.
    pub layer: usize,
    /// Index of the block at this step (the residue of its wires).
    pub block: usize,
    /// First wire in block-local coordinates; the gate covers
    /// `local_start..local_start + b`.
    pub local_start: usize,
    /// Global wires acted on, in kernel order.
    pub wires: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Circuit {
    kernel: Kernel,
    depth: usize,
    steps: usize,
    len: usize,
    gates: Vec<GatePlacement>,
}

impl Circuit {
    /// Builds the `steps`-level circuit with `depth` shifted layers per step.
    pub fn new(kernel: Kernel, depth: usize, steps: usize) -> Result<Self> {
        if depth < 1 {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        if steps < 1 {
            return Err(Error::InvalidParameter("steps must be at least 1".into()));
        }
        let b = kernel.breadth();
        let len = u32::try_from(steps)
            .ok()
            .and_then(|l| b.checked_pow(l))
            .filter(|&n| n <= 1 << 26)
            .ok_or(Error::TooLarge {
                what: "block length",
                size: usize::MAX,
                limit: 1 << 26,
            })?;

        let mut gates = Vec::new();
        for step in 1..=steps {
            let stride = b.pow(step as u32 - 1);
            let layout = StepLayout::new(b, depth, len / stride);
            for layer in 1..=depth {
                for block in 0..stride {
                    for start in layout.gate_starts(layer) {
                        gates.push(GatePlacement {
                            step,
                            layer,
                            block,
                            local_start: start,
                            wires: (start..start + b).map(|j| block + j * stride).collect(),
                        });
                    }
                }
            }
        }
        Ok(Circuit {
            kernel,
            depth,
            steps,
            len,
            gates,
        })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn breadth(&self) -> usize {
        self.kernel.breadth()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Block length `N = b^l`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// All gates, ordered by step, layer, then global first wire.
    pub fn gates(&self) -> &[GatePlacement] {
        &self.gates
    }

    /// Layout of the blocks acted on by `step` (1-based).
    pub fn layout(&self, step: usize) -> StepLayout {
        let stride = self.breadth().pow(step as u32 - 1);
        StepLayout::new(self.breadth(), self.depth, self.len / stride)
    }

    /// Short label such as `cnot-d2-l4`.
    pub fn label(&self) -> String {
        format!("{}-d{}-l{}", self.kernel.name(), self.depth, self.steps)
    }

    /// Computes `x = G u` over F2.
    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: u.len(),
            });
        }
        check_bits(u)?;
        let mut x = u.to_vec();
        self.encode_in_place(&mut x);
        Ok(x)
    }

    pub(crate) fn encode_in_place(&self, x: &mut [u8]) {
        for gate in &self.gates {
            let input = gate
                .wires
                .iter()
                .enumerate()
                .fold(0u32, |acc, (t, &w)| acc | (u32::from(x[w]) << t));
            let out = self.kernel.apply_packed(input);
            for (t, &w) in gate.wires.iter().enumerate() {
                x[w] = ((out >> t) & 1) as u8;
            }
        }
    }

    /// Encodes a packed word (wire `j` in bit `j`); requires `N <= 64`.
    pub fn encode_packed(&self, u: u64) -> u64 {
        debug_assert!(self.len <= 64);
        let mut x = u;
        for gate in &self.gates {
            let input = gate
                .wires
                .iter()
                .enumerate()
                .fold(0u32, |acc, (t, &w)| acc | (((x >> w) as u32 & 1) << t));
            let out = u64::from(self.kernel.apply_packed(input));
            for (t, &w) in gate.wires.iter().enumerate() {
                x = (x & !(1 << w)) | (((out >> t) & 1) << w);
            }
        }
        x
    }

    /// Images of the unit vectors, packed; `column[j] = G e_j`.
    pub fn generator_columns(&self) -> Result<Vec<u64>> {
        if self.len > 64 {
            return Err(Error::TooLarge {
                what: "block length",
                size: self.len,
                limit: 64,
            });
        }
        Ok((0..self.len).map(|j| self.encode_packed(1 << j)).collect())
    }

    /// The encoding map as a permutation of the `2^N` basis states:
    /// `table[u] = G u` with wire `j` in bit `j`.
    pub fn as_permutation(&self) -> Result<Vec<u32>> {
        if self.len > MAX_PERMUTATION_BITS {
            return Err(Error::TooLarge {
                what: "block length",
                size: self.len,
                limit: MAX_PERMUTATION_BITS,
            });
        }
        Ok((0..1u64 << self.len)
            .map(|u| self.encode_packed(u) as u32)
            .collect())
    }

    /// Causal cone of the window `start..start + width` within one block of
    /// polarization step `step` (1-based).
    pub fn causal_cone(&self, step: usize, start: usize, width: usize) -> Result<CausalCone> {
        if step < 1 || step > self.steps {
            return Err(Error::OutOfRange(format!(
                "step {step} not in 1..={}",
                self.steps
            )));
        }
        let layout = self.layout(step);
        if width == 0 || start + width > layout.len() {
            return Err(Error::OutOfRange(format!(
                "window {start}..{} outside block of {} wires",
                start + width,
                layout.len()
            )));
        }
        Ok(layout.cone(start, width))
    }

    /// One `step layer first_wire` line per gate, 1-based.
    pub fn gate_dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            let _ = writeln!(out, "{} {} {}", g.step, g.layer, g.wires[0] + 1);
        }
        out
    }
}

/// Worst case over all windows of a single step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeStats {
    pub max_outputs: usize,
    pub max_gates: usize,
}

fn wide_layout(b: usize, d: usize, w: usize) -> StepLayout {
    StepLayout::new(b, d, 4 * (w + b * (d + 2)))
}

/// Largest cone over every `w`-wire window of a step wide enough that the
/// interior windows are unaffected by the block ends.
pub fn cone_stats(b: usize, d: usize, w: usize) -> ConeStats {
    let layout = wide_layout(b, d, w);
    (0..=layout.len() - w)
        .map(|start| layout.cone(start, w))
        .fold(
            ConeStats {
                max_outputs: 0,
                max_gates: 0,
            },
            |acc, cone| ConeStats {
                max_outputs: acc.max_outputs.max(cone.output_count()),
                max_gates: acc.max_gates.max(cone.gate_count()),
            },
        )
}

/// Smallest width whose every window has at most `b * w` cone outputs.
pub fn optimal_width(b: usize, d: usize) -> usize {
    assert!(b >= 2 && d >= 1, "breadth must be >= 2 and depth >= 1");
    (1..)
        .find(|&w| cone_stats(b, d, w).max_outputs <= b * w)
        .expect("a finite optimal width exists")
}

/// Upper bound `d * ceil((w - 1) / b) + d (d + 1) / 2` on cone gates.
pub fn cone_gate_bound(d: usize, b: usize, w: usize) -> usize {
    d * (w - 1).div_ceil(b) + d * (d + 1) / 2
}

/// Integer `l` with `b^l = n`.
pub fn log_exact(n: usize, b: usize) -> Result<usize> {
    let mut l = 0;
    let mut m = 1usize;
    while m < n {
        m = m.saturating_mul(b);
        l += 1;
    }
    if m == n && b >= 2 {
        Ok(l)
    } else {
        Err(Error::NotAPower { n, base: b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexityEstimate {
    pub w_star: usize,
    pub m_gates: usize,
    /// `2^b * (m / w*) * N * log_b N`.
    pub c_total: f64,
}

pub fn complexity_estimate(b: usize, d: usize, n: usize) -> Result<ComplexityEstimate> {
    if b < 2 || d < 1 {
        return Err(Error::InvalidParameter(format!(
            "breadth {b} and depth {d} must satisfy b >= 2, d >= 1"
        )));
    }
    let l = log_exact(n, b)?;
    let w_star = optimal_width(b, d);
    let m_gates = cone_stats(b, d, w_star).max_gates;
    let c_total = (1u64 << b) as f64 * (m_gates as f64 / w_star as f64) * n as f64 * l as f64;
    Ok(ComplexityEstimate {
        w_star,
        m_gates,
        c_total,
    })
}
