//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on failure.

use std::process::ExitCode;
use std::time::Instant;

use convpolar::circuit::{cone_gate_bound, cone_stats, optimal_width};
use convpolar::decoder::{effective_channel_oracle, window_likelihood, Decoder};
use convpolar::harness::{
    correction_sweep_with, design_code, detection_sweep, run_montecarlo, write_correction_csv,
    write_detection_csv, CodeParams, Execution, Rate, SimRecord, SweepSpec,
};
use convpolar::selection::{pu_oracle, pu_profile};
use convpolar::{ChannelModel, Circuit, Code, Kernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn kernel(b: usize) -> Kernel {
    match b {
        2 => Kernel::cnot(),
        3 => Kernel::g3(),
        _ => Kernel::g4(),
    }
}

fn third() -> Rate {
    Rate::new(1, 3).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let ch = ChannelModel::bsc(0.15).unwrap();
    let mut worst: f64 = 0.0;
    let mut windows = 0usize;
    for (b, d) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        for l in [2, 3] {
            let circuit = Circuit::new(kernel(b), d, l).unwrap();
            let n = circuit.len();
            let code = Code::new(circuit.clone(), []).unwrap();
            let mut decoder = Decoder::new(&circuit, &ch, optimal_width(b, d)).unwrap();
            for _ in 0..100 {
                let y: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
                let r = decoder.decode(&code, &y).unwrap();
                for (win, pv) in r.windows.iter().zip(&r.window_likelihoods) {
                    let slow = effective_channel_oracle(
                        &circuit,
                        &ch,
                        &y,
                        &r.u_hat[..win.start],
                        win.len(),
                    )
                    .unwrap();
                    worst = worst.max(pv.max_abs_diff(&slow));
                    windows += 1;
                }
            }
        }
    }
    Outcome {
        pass: worst <= 1e-9,
        detail: format!("{windows} windows, max abs diff {worst:.3e} (tol 1e-9)"),
    }
}

fn polarization_identities() -> Outcome {
    let circuit = Circuit::new(Kernel::cnot(), 1, 1).unwrap();
    let code = Code::new(circuit, []).unwrap();
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for p in [0.0, 0.1, 0.25] {
        let ch = ChannelModel::bsc(p).unwrap();
        let w = |y: u8, x: u8| ch.likelihood(y, x);
        for y1 in 0..2u8 {
            for y2 in 0..2u8 {
                let y = [y1, y2];
                // bad channel: W(y1,y2|u1) = 1/2 sum_u2 W(y1|u1+u2) W(y2|u2)
                let bad: Vec<f64> = (0..2u8)
                    .map(|u1| 0.5 * (0..2u8).map(|u2| w(y1, u1 ^ u2) * w(y2, u2)).sum::<f64>())
                    .collect();
                let got = window_likelihood(&code, &ch, &y, &[], 1).unwrap();
                let total: f64 = bad.iter().sum();
                for (u1, v) in bad.iter().enumerate() {
                    worst = worst.max((got.get(u1) - v / total).abs());
                }
                checks += 1;
                // good channel: W(y1,y2,u1|u2) = 1/2 W(y1|u1+u2) W(y2|u2)
                for u1 in 0..2u8 {
                    let good: Vec<f64> = (0..2u8)
                        .map(|u2| 0.5 * w(y1, u1 ^ u2) * w(y2, u2))
                        .collect();
                    let total: f64 = good.iter().sum();
                    if total == 0.0 {
                        continue;
                    }
                    let got = window_likelihood(&code, &ch, &y, &[u1], 1).unwrap();
                    for (u2, v) in good.iter().enumerate() {
                        worst = worst.max((got.get(u2) - v / total).abs());
                    }
                    checks += 1;
                }
            }
        }
    }
    let ch = ChannelModel::bsc(0.25).unwrap();
    let example = window_likelihood(&code, &ch, &[0, 0], &[], 1).unwrap();
    let example_ok =
        (example.get(0) - 0.625).abs() <= 1e-12 && (example.get(1) - 0.375).abs() <= 1e-12;
    Outcome {
        pass: worst <= 1e-12 && example_ok,
        detail: format!(
            "{checks} splittings, max abs diff {worst:.3e}; p=1/4 y=00 bad channel ({}, {})",
            example.get(0),
            example.get(1)
        ),
    }
}

fn detection_profile() -> Outcome {
    let mut worst_oracle: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for p in [0.05, 0.25, 0.5] {
        for (b, d) in [(2, 1), (2, 2)] {
            for l in [2, 3, 4] {
                let circuit = Circuit::new(kernel(b), d, l).unwrap();
                let profile = pu_profile(&circuit, p).unwrap();
                for (i, &v) in profile.values.iter().enumerate() {
                    let exact = pu_oracle(&circuit, p, i).unwrap();
                    worst_oracle = worst_oracle.max((v - exact).abs());
                }
                let n = circuit.len() as i32;
                worst_sum = worst_sum.max((profile.total() - (1.0 - (1.0 - p).powi(n))).abs());
            }
        }
    }
    for (b, d, l) in [(2, 1, 10), (2, 2, 10), (3, 2, 4), (4, 2, 3)] {
        let circuit = Circuit::new(kernel(b), d, l).unwrap();
        let profile = pu_profile(&circuit, 0.25).unwrap();
        let n = circuit.len() as i32;
        worst_sum = worst_sum.max((profile.total() - (1.0 - 0.75f64.powi(n))).abs());
    }
    Outcome {
        pass: worst_oracle <= 1e-12 && worst_sum <= 1e-10,
        detail: format!(
            "profile vs oracle {worst_oracle:.3e} (tol 1e-12), sum rule {worst_sum:.3e} (tol 1e-10)"
        ),
    }
}

fn width_constants() -> Outcome {
    let w22 = optimal_width(2, 2);
    let m22 = cone_stats(2, 2, w22).max_gates;
    let mut violations = Vec::new();
    for b in 2..=4 {
        for d in 1..=4 {
            let w = optimal_width(b, d);
            if w > (b * d).div_ceil(b - 1) {
                violations.push(format!("w*({b},{d})={w}"));
            }
            let m = cone_stats(b, d, w).max_gates;
            if m > cone_gate_bound(d, b, w) {
                violations.push(format!("m({b},{d})={m}"));
            }
        }
    }
    Outcome {
        pass: w22 == 3 && m22 == 5 && violations.is_empty(),
        detail: format!(
            "w*(2,2)={w22} m={m22}; bound violations: {}",
            if violations.is_empty() {
                "none".into()
            } else {
                violations.join(" ")
            }
        ),
    }
}

fn sweep(codes: Vec<CodeParams>, p: f64) -> Vec<f64> {
    let spec = SweepSpec {
        codes,
        flip_probability: p,
        rate: third(),
        trials: 0,
        seed: 0,
        width: None,
    };
    detection_sweep(&spec)
        .unwrap()
        .iter()
        .map(|r| r.pu)
        .collect()
}

fn detection_versus_length() -> Outcome {
    let ls: Vec<usize> = (4..=10).collect();
    let polar = sweep(
        ls.iter()
            .map(|&l| CodeParams::new(Kernel::cnot(), 1, l))
            .collect(),
        0.25,
    );
    let conv = sweep(
        ls.iter()
            .map(|&l| CodeParams::new(Kernel::cnot(), 2, l))
            .collect(),
        0.25,
    );
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let beats = polar.iter().zip(&conv).all(|(p, c)| c < p);
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.4e}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Outcome {
        pass: decreasing(&polar) && decreasing(&conv) && beats,
        detail: format!("l=4..10 polar [{}] d=2 [{}]", fmt(&polar), fmt(&conv)),
    }
}

fn detection_versus_breadth() -> Outcome {
    let sizes = [(2, 10), (3, 6), (4, 5)];
    let d1 = sweep(
        sizes
            .iter()
            .map(|&(b, l)| CodeParams::new(kernel(b), 1, l))
            .collect(),
        0.25,
    );
    let d2 = sweep(
        sizes
            .iter()
            .map(|&(b, l)| CodeParams::new(kernel(b), 2, l))
            .collect(),
        0.25,
    );
    let breadth_hurts = d1[1] > d1[0];
    let depth_helps = d1.iter().zip(&d2).all(|(a, b)| b < a);
    Outcome {
        pass: breadth_hurts && depth_helps,
        detail: format!(
            "d=1 (b=2,3,4) {:.4e} {:.4e} {:.4e}; d=2 {:.4e} {:.4e} {:.4e}",
            d1[0], d1[1], d1[2], d2[0], d2[1], d2[2]
        ),
    }
}

fn simulate(b: usize, d: usize, l: usize) -> SimRecord {
    let (code, _) = design_code(&CodeParams::new(kernel(b), d, l), 0.05, third()).unwrap();
    let ch = ChannelModel::bsc(0.05).unwrap();
    run_montecarlo(&code, &ch, 100_000, 2024, optimal_width(b, d)).unwrap()
}

fn bit_error_ordering() -> Outcome {
    let polar = simulate(2, 1, 8);
    let conv = simulate(2, 2, 8);
    let polar3 = simulate(3, 1, 5);
    let conv3 = simulate(3, 2, 5);
    let (_, conv_hi) = conv.ber_interval();
    let (polar_lo, _) = polar.ber_interval();
    let show = |r: &SimRecord| {
        let (lo, hi) = r.ber_interval();
        format!("{:.4e} [{lo:.4e}, {hi:.4e}]", r.ber())
    };
    Outcome {
        pass: conv.ber() < polar.ber() && conv_hi < polar_lo,
        detail: format!(
            "N=256 polar {} CP(2,2) {}; N=243 polar {} CP(3,2) {}",
            show(&polar),
            show(&conv),
            show(&polar3),
            show(&conv3)
        ),
    }
}

fn determinism() -> Outcome {
    let spec = SweepSpec {
        codes: vec![
            CodeParams::new(Kernel::cnot(), 1, 8),
            CodeParams::new(Kernel::cnot(), 2, 8),
            CodeParams::new(Kernel::g3(), 2, 4),
        ],
        flip_probability: 0.05,
        rate: third(),
        trials: 2000,
        seed: 77,
        width: None,
    };
    let correction = |execution| {
        let mut out = Vec::new();
        write_correction_csv(&mut out, &correction_sweep_with(&spec, execution).unwrap()).unwrap();
        out
    };
    let detection = || {
        let mut out = Vec::new();
        write_detection_csv(&mut out, &detection_sweep(&spec).unwrap()).unwrap();
        out
    };
    let parallel = correction(Execution::Parallel);
    let same = parallel == correction(Execution::Serial)
        && parallel == correction(Execution::Parallel)
        && detection() == detection();
    Outcome {
        pass: same,
        detail: format!("serial, parallel and repeated runs byte-identical: {same}"),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("polarization identities", polarization_identities),
        ("detection profile", detection_profile),
        ("width and cone constants", width_constants),
        ("detection vs code length", detection_versus_length),
        ("detection vs breadth and depth", detection_versus_breadth),
        ("bit error ordering", bit_error_ordering),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let started = Instant::now();
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {verdict} {name} ({:.1}s) {}",
            k + 1,
            started.elapsed().as_secs_f64(),
            outcome.detail
        );
        failed += usize::from(!outcome.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
