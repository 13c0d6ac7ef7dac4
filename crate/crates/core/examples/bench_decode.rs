use std::time::Instant;

use convpolar::channel::trial_stream;
use convpolar::circuit::optimal_width;
use convpolar::{ChannelModel, Circuit, Code, Decoder, Kernel};

fn main() {
    let ch = ChannelModel::bsc(0.05).unwrap();
    for (k, d, l) in [
        (Kernel::cnot(), 1, 8),
        (Kernel::cnot(), 2, 8),
        (Kernel::cnot(), 3, 8),
        (Kernel::cnot(), 4, 8),
        (Kernel::g3(), 1, 5),
        (Kernel::g3(), 2, 5),
    ] {
        let b = k.breadth();
        let circuit = Circuit::new(k, d, l).unwrap();
        let n = circuit.len();
        let code = Code::new(circuit.clone(), 0..n / 2).unwrap();
        let w = optimal_width(b, d);
        let mut dec = Decoder::new(&circuit, &ch, w).unwrap();
        let trials = 2000;
        let t = Instant::now();
        let mut errs = 0;
        for i in 0..trials {
            let e = ch.sample_noise(n, &mut trial_stream(1, i));
            let u = dec.decode_bits(&code, &e).unwrap();
            errs += u.iter().filter(|&&v| v == 1).count();
        }
        println!(
            "b={b} d={d} N={n} w={w}: {:.3} ms/decode errs={errs}",
            t.elapsed().as_secs_f64() * 1e3 / trials as f64
        );
    }
}
