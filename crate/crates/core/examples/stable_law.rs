//! Symmetric stable laws: sampling, CDF and quantiles.
//!
//! cargo run --release --example stable_law

use srwalk::stats::ks_to_cdf;
use srwalk::{stream_rng, StableLaw, Stream};

fn main() -> srwalk::Result<()> {
    let mut rng = stream_rng(11, 0, Stream::Aux);
    for alpha in [0.5, 1.0, 1.5, 2.0] {
        let law = StableLaw::new(alpha)?;
        let sample: Vec<f64> = (0..20_000).map(|_| law.sample(&mut rng)).collect();
        let ks = ks_to_cdf(&sample, |x| law.cdf(x).unwrap())?;
        println!(
            "alpha={alpha}: F(1)={:.6}, q(0.95)={:.4}, KS of 20000 draws = {ks:.4}",
            law.cdf(1.0)?,
            law.quantile(0.95)?
        );
    }
    Ok(())
}
