//! Simulate the step-reinforced walk in each regime and print T_n / scaling.
//!
//! cargo run --release --example simulate_walk

use srwalk::{classify_regime, simulate_walk, stream_rng, RandomnessTape, Stream, StepSource, WalkParams};

fn main() -> srwalk::Result<()> {
    let n = 100_000;
    let seed = 7;
    for (p, r) in [(0.5, 0.5), (0.5, 1.0), (0.9, 0.95), (1.0, 0.75)] {
        let params = WalkParams::gaussian(p, r)?;
        let (regime, scaling) = classify_regime(&params)?;
        let tape = RandomnessTape::sample(n, p, r, &mut stream_rng(seed, 0, Stream::Tape))?;
        let walk = simulate_walk(&StepSource::Gaussian, n, &tape, &mut stream_rng(seed, 0, Stream::Steps))?;
        println!(
            "p={p:<4} r={r:<4} a={:>5.2} {regime:?}: T_n = {:>10.2}, T_n/{} = {:>7.3}",
            params.a(),
            walk.last(),
            scaling.label(),
            walk.last() / scaling.at(n as f64)
        );
    }
    Ok(())
}
