//! Weight schemes where the usual limit fails.
//!
//! cargo run --release --example counterexamples

use srwalk::stats::ks_to_cdf;
use srwalk::special::normal_cdf;
use srwalk::weights::{gen_weights, log_window_length, weighted_sum, WeightScheme};
use srwalk::{normalizer, stream_rng, NormalizingSequence, Stream, StepSource};

fn main() -> srwalk::Result<()> {
    // one weight carries all the mass: the sum is the first step
    let n = 4096;
    let w = gen_weights(&WeightScheme::Spike, n, &mut stream_rng(1, 0, Stream::Weights))?;
    let xi = StepSource::Rademacher.draw(n, &mut stream_rng(1, 0, Stream::Steps));
    println!("spike: S_n/sqrt(n) = {}, xi_1 = {}", weighted_sum(&w, &xi)? / (n as f64).sqrt(), xi[0]);

    // infinite-variance steps on a window of length log n
    let pareto = StepSource::SymmetricPareto { alpha: 2.0 };
    for n in [1_000, 10_000, 100_000] {
        let a_n = normalizer(&NormalizingSequence::SqrtNLogN, n)?;
        let m = log_window_length(n);
        let correction = ((n as f64).ln() / (m as f64).ln()).sqrt();
        let raw: Vec<f64> = (0..2000)
            .map(|i| {
                let w = gen_weights(&WeightScheme::LogWindow, n, &mut stream_rng(2, i, Stream::Weights)).unwrap();
                let xi = pareto.draw(n, &mut stream_rng(2, i, Stream::Steps));
                weighted_sum(&w, &xi).unwrap() / a_n
            })
            .collect();
        let corrected: Vec<f64> = raw.iter().map(|x| x * correction).collect();
        println!(
            "log-window n={n:>6} m={m:>2}: KS raw {:.4}, corrected {:.4}",
            ks_to_cdf(&raw, normal_cdf)?,
            ks_to_cdf(&corrected, normal_cdf)?
        );
    }
    Ok(())
}
