//! Monte Carlo error-correction runs, detection sweeps and their CSV tables.
//!
//! Trial `t` of a run with master seed `s` draws its noise from
//! [`trial_stream`]`(s, t)`, so a record only depends on the seed and the
//! trial count, never on how trials are spread over threads.

mod codefile;

use std::io::Write;

use rayon::prelude::*;

pub use codefile::{CodeFile, KernelEntry, CODE_FILE_VERSION};

use crate::channel::{trial_stream, ChannelModel};
use crate::circuit::{complexity_estimate, cone_gate_bound, log_exact, optimal_width, Circuit};
use crate::decoder::{Code, Decoder};
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::selection::{pu_profile, select_frozen, total_undetected, ErrorProfile};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Code rate written as `K/N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rate {
    pub num: u64,
    pub den: u64,
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "rate {num}/{den} must lie in (0, 1]"
            )));
        }
        Ok(Rate { num, den })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("cannot parse rate `{s}`, expected K/N"));
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        Self::new(
            num.trim().parse().map_err(|_| bad())?,
            den.trim().parse().map_err(|_| bad())?,
        )
    }

    /// `K = round(N * rate)`, halves rounded up.
    pub fn info_count(&self, n: usize) -> usize {
        let n = n as u64;
        ((2 * n * self.num + self.den) / (2 * self.den)).min(n) as usize
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// `%.12g`-style formatting used in every CSV table.
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (11 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimRecord {
    pub trials: u64,
    /// Wrong information bits over all trials.
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub n: usize,
    pub k: usize,
    pub breadth: usize,
    pub depth: usize,
    pub steps: usize,
    pub flip_probability: f64,
    pub seed: u64,
    pub width: usize,
}

impl SimRecord {
    pub fn ber(&self) -> f64 {
        if self.k == 0 {
            0.0
        } else {
            self.bit_errors as f64 / (self.trials as f64 * self.k as f64)
        }
    }

    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.trials as f64
    }

    pub fn fer_interval(&self) -> (f64, f64) {
        wilson_interval(self.frame_errors, self.trials)
    }

    /// Wilson interval treating every information bit as a Bernoulli trial.
    pub fn ber_interval(&self) -> (f64, f64) {
        wilson_interval(self.bit_errors, self.trials * self.k as u64)
    }

    /// Half-width of the 95% Wilson interval on the frame error rate.
    pub fn ci95_halfwidth(&self) -> f64 {
        let (lo, hi) = self.fer_interval();
        (hi - lo) / 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Sends the all-zero codeword `trials` times and decodes each noisy word.
pub fn run_montecarlo(
    code: &Code,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
    width: usize,
) -> Result<SimRecord> {
    run_montecarlo_with(code, channel, trials, seed, width, Execution::Parallel)
}

pub fn run_montecarlo_with(
    code: &Code,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
    width: usize,
    execution: Execution,
) -> Result<SimRecord> {
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    let circuit = code.circuit();
    let n = circuit.len();
    let info = code.info_indices();
    // fail early on an unusable width instead of inside the workers
    Decoder::new(circuit, channel, width)?;

    let trial = |decoder: &mut Decoder, t: u64| -> Result<(u64, u64)> {
        let y = channel.sample_noise(n, &mut trial_stream(seed, t));
        let u = decoder.decode_bits(code, &y)?;
        let wrong = info.iter().filter(|&&i| u[i] == 1).count() as u64;
        Ok((wrong, u64::from(wrong > 0)))
    };
    let add = |a: (u64, u64), b: (u64, u64)| (a.0 + b.0, a.1 + b.1);

    let (bit_errors, frame_errors) = match execution {
        Execution::Serial => {
            let mut decoder = Decoder::new(circuit, channel, width)?;
            (0..trials).try_fold((0, 0), |acc, t| {
                Ok::<_, Error>(add(acc, trial(&mut decoder, t)?))
            })?
        }
        Execution::Parallel => (0..trials)
            .into_par_iter()
            .map_init(
                || Decoder::new(circuit, channel, width).expect("width validated above"),
                |decoder, t| trial(decoder, t),
            )
            .try_reduce(|| (0, 0), |a, b| Ok(add(a, b)))?,
    };

    Ok(SimRecord {
        trials,
        bit_errors,
        frame_errors,
        n,
        k: info.len(),
        breadth: circuit.breadth(),
        depth: circuit.depth(),
        steps: circuit.steps(),
        flip_probability: channel.flip_probability(),
        seed,
        width,
    })
}

/// Resolves `cnot`, `g3`, `g4` or `file:<path>` (a TOML file with `name`
/// and `matrix`).
pub fn parse_kernel(spec: &str) -> Result<Kernel> {
    if let Some(path) = spec.strip_prefix("file:") {
        return KernelEntry::load(std::path::Path::new(path));
    }
    Kernel::named(spec).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "unknown kernel `{spec}`, expected cnot, g3, g4 or file:<path>"
        ))
    })
}

/// One code family member of a sweep.
#[derive(Clone, Debug)]
pub struct CodeParams {
    pub kernel: Kernel,
    pub depth: usize,
    pub steps: usize,
}

impl CodeParams {
    pub fn new(kernel: Kernel, depth: usize, steps: usize) -> Self {
        CodeParams {
            kernel,
            depth,
            steps,
        }
    }

    pub fn circuit(&self) -> Result<Circuit> {
        Circuit::new(self.kernel.clone(), self.depth, self.steps)
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub codes: Vec<CodeParams>,
    pub flip_probability: f64,
    pub rate: Rate,
    /// Monte Carlo trials per code (correction sweeps only).
    pub trials: u64,
    pub seed: u64,
    /// Decoding width; the optimal width of each code when absent.
    pub width: Option<usize>,
}

/// Circuit, profile and frozen set selected at the sweep's channel and rate.
pub fn design_code(params: &CodeParams, p: f64, rate: Rate) -> Result<(Code, ErrorProfile)> {
    let circuit = params.circuit()?;
    let profile = pu_profile(&circuit, p)?;
    let k = rate.info_count(circuit.len());
    let frozen = select_frozen(&profile, k)?;
    Ok((Code::new(circuit, frozen)?, profile))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectionRow {
    pub breadth: usize,
    pub depth: usize,
    pub steps: usize,
    pub n: usize,
    pub flip_probability: f64,
    pub rate: f64,
    pub pu: f64,
    pub c_total: f64,
}

pub fn detection_sweep(spec: &SweepSpec) -> Result<Vec<DetectionRow>> {
    spec.codes
        .iter()
        .map(|params| {
            let (code, profile) = design_code(params, spec.flip_probability, spec.rate)?;
            let n = code.len();
            let b = params.kernel.breadth();
            Ok(DetectionRow {
                breadth: b,
                depth: params.depth,
                steps: params.steps,
                n,
                flip_probability: spec.flip_probability,
                rate: spec.rate.value(),
                pu: total_undetected(&profile, &code.frozen_indices()),
                c_total: complexity_estimate(b, params.depth, n)?.c_total,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionRow {
    pub record: SimRecord,
    pub rate: f64,
    pub c_total: f64,
}

pub fn correction_sweep(spec: &SweepSpec) -> Result<Vec<CorrectionRow>> {
    correction_sweep_with(spec, Execution::Parallel)
}

pub fn correction_sweep_with(spec: &SweepSpec, execution: Execution) -> Result<Vec<CorrectionRow>> {
    let channel = ChannelModel::bsc(spec.flip_probability)?;
    spec.codes
        .iter()
        .map(|params| {
            let (code, _) = design_code(params, spec.flip_probability, spec.rate)?;
            let b = params.kernel.breadth();
            let width = spec.width.unwrap_or_else(|| optimal_width(b, params.depth));
            let record =
                run_montecarlo_with(&code, &channel, spec.trials, spec.seed, width, execution)?;
            Ok(CorrectionRow {
                c_total: complexity_estimate(b, params.depth, code.len())?.c_total,
                rate: spec.rate.value(),
                record,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityRow {
    pub breadth: usize,
    pub depth: usize,
    pub steps: usize,
    pub n: usize,
    pub w_star: usize,
    pub m_gates: usize,
    pub m_bound: usize,
    pub c_total: f64,
}

pub fn complexity_table(codes: &[(usize, usize, usize)]) -> Result<Vec<ComplexityRow>> {
    codes
        .iter()
        .map(|&(b, d, l)| {
            let n = b.checked_pow(l as u32).ok_or(Error::TooLarge {
                what: "block length",
                size: usize::MAX,
                limit: usize::MAX,
            })?;
            debug_assert_eq!(log_exact(n, b), Ok(l));
            let est = complexity_estimate(b, d, n)?;
            Ok(ComplexityRow {
                breadth: b,
                depth: d,
                steps: l,
                n,
                w_star: est.w_star,
                m_gates: est.m_gates,
                m_bound: cone_gate_bound(d, b, est.w_star),
                c_total: est.c_total,
            })
        })
        .collect()
}

fn write_table<W: Write>(
    out: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header).map_err(io)?;
    for row in rows {
        writer.write_record(&row).map_err(io)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_detection_csv<W: Write>(out: W, rows: &[DetectionRow]) -> Result<()> {
    write_table(
        out,
        &["b", "d", "l", "N", "p", "rate", "pu", "c_total"],
        rows.iter().map(|r| {
            vec![
                r.breadth.to_string(),
                r.depth.to_string(),
                r.steps.to_string(),
                r.n.to_string(),
                fmt_g12(r.flip_probability),
                fmt_g12(r.rate),
                fmt_g12(r.pu),
                fmt_g12(r.c_total),
            ]
        }),
    )
}

pub fn write_correction_csv<W: Write>(out: W, rows: &[CorrectionRow]) -> Result<()> {
    write_table(
        out,
        &[
            "b", "d", "l", "N", "p", "rate", "trials", "ber", "fer", "ci95", "c_total",
        ],
        rows.iter().map(|r| {
            let s = &r.record;
            vec![
                s.breadth.to_string(),
                s.depth.to_string(),
                s.steps.to_string(),
                s.n.to_string(),
                fmt_g12(s.flip_probability),
                fmt_g12(r.rate),
                s.trials.to_string(),
                fmt_g12(s.ber()),
                fmt_g12(s.fer()),
                fmt_g12(s.ci95_halfwidth()),
                fmt_g12(r.c_total),
            ]
        }),
    )
}

pub fn write_complexity_csv<W: Write>(out: W, rows: &[ComplexityRow]) -> Result<()> {
    write_table(
        out,
        &["b", "d", "l", "N", "w_star", "m", "m_bound", "c_total"],
        rows.iter().map(|r| {
            vec![
                r.breadth.to_string(),
                r.depth.to_string(),
                r.steps.to_string(),
                r.n.to_string(),
                r.w_star.to_string(),
                r.m_gates.to_string(),
                r.m_bound.to_string(),
                fmt_g12(r.c_total),
            ]
        }),
    )
}
