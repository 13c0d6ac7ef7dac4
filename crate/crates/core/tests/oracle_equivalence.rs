use convpolar::circuit::optimal_width;
use convpolar::decoder::{effective_channel_oracle, Decoder};
use convpolar::{ChannelModel, Circuit, Code, Kernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kernel(b: usize) -> Kernel {
    match b {
        2 => Kernel::cnot(),
        3 => Kernel::g3(),
        _ => Kernel::g4(),
    }
}

/// Every window along a decode path, and every single-bit position under
/// random prefixes, agrees with brute-force enumeration.
#[test]
fn contraction_matches_enumeration_on_small_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ch = ChannelModel::bsc(0.15).unwrap();
    for (b, d, l) in [
        (2, 1, 2),
        (2, 1, 4),
        (2, 2, 2),
        (2, 2, 4),
        (2, 3, 4),
        (3, 1, 2),
        (3, 2, 2),
        (2, 4, 4),
        (4, 2, 2),
        (3, 3, 2),
    ] {
        let circuit = Circuit::new(kernel(b), d, l).unwrap();
        let n = circuit.len();
        let w = optimal_width(b, d);
        for _ in 0..5 {
            let y: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
            let u: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
            let mut dec = Decoder::new(&circuit, &ch, w).unwrap();
            dec.reset(&y).unwrap();
            for i in 0..n {
                for len in 1..=w.min(n - i) {
                    let fast = dec.window(&u[..i], len).unwrap();
                    let slow = effective_channel_oracle(&circuit, &ch, &y, &u[..i], len).unwrap();
                    let diff = fast.max_abs_diff(&slow);
                    assert!(
                        diff < 1e-10,
                        "b={b} d={d} l={l} i={i} len={len} diff={diff}"
                    );
                }
            }
            let code = Code::new(circuit.clone(), []).unwrap();
            let r = dec.decode(&code, &y).unwrap();
            for (win, pv) in r.windows.iter().zip(&r.window_likelihoods) {
                let slow =
                    effective_channel_oracle(&circuit, &ch, &y, &r.u_hat[..win.start], win.len())
                        .unwrap();
                assert!(pv.max_abs_diff(&slow) < 1e-10);
            }
        }
    }
}
