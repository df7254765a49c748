//! Growth of the walk across the phase transition at a = 1/2.
//!
//! cargo run --release --example phase_regimes

use srwalk::stats::mc_mean_se;
use srwalk::{classify_regime, simulate_walk, stream_rng, RandomnessTape, Stream, StepSource, WalkParams};

fn main() -> srwalk::Result<()> {
    let p = 1.0;
    println!("{:>5} {:>14} {:>10}  E|T_n|/scaling at n = 2^10, 2^13, 2^16", "r", "regime", "scaling");
    for r in [0.6, 0.75, 0.9] {
        let params = WalkParams::gaussian(p, r)?;
        let (regime, scaling) = classify_regime(&params)?;
        let mut row = String::new();
        for j in [10, 13, 16] {
            let n = 1usize << j;
            let values: Vec<f64> = (0..200)
                .map(|i| {
                    let tape = RandomnessTape::sample(n, p, r, &mut stream_rng(4, i, Stream::Tape)).unwrap();
                    let walk = simulate_walk(&StepSource::Rademacher, n, &tape, &mut stream_rng(4, i, Stream::Steps)).unwrap();
                    walk.last().abs() / scaling.at(n as f64)
                })
                .collect();
            let (mean, se) = mc_mean_se(&values)?;
            row.push_str(&format!("  {mean:.3}+-{se:.3}"));
        }
        println!("{r:>5} {:>14} {:>10}{row}", format!("{regime:?}"), scaling.label());
    }
    Ok(())
}
