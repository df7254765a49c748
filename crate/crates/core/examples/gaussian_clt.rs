//! Subcritical walk with finite variance: T_n / sqrt(n) against N(0, c(2,p,r)).
//!
//! cargo run --release --example gaussian_clt

use srwalk::acceptance::walk_endpoints;
use srwalk::constants::constant_closed_c2;
use srwalk::special::normal_cdf;
use srwalk::stats::ks_to_cdf;
use srwalk::StepSource;

fn main() -> srwalk::Result<()> {
    let n = 5000;
    for (p, r) in [(0.0, 0.5), (0.5, 0.5), (0.6, 0.7), (0.8, 0.25)] {
        let c = constant_closed_c2(p, r)?;
        let sample = walk_endpoints(p, r, StepSource::Rademacher, n, 5000, (n as f64).sqrt(), 17)?;
        let ks = ks_to_cdf(&sample, |x| normal_cdf(x / c.sqrt()))?;
        println!("p={p} r={r}: c = {c:.4}, KS = {ks:.4}");
    }
    Ok(())
}
