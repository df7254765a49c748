//! Stable steps: T_n / n^(1/alpha) against c^(1/alpha) times a standard stable law.
//!
//! cargo run --release --example stable_clt

use srwalk::acceptance::walk_endpoints;
use srwalk::constants::constant_series;
use srwalk::stats::ks_to_cdf;
use srwalk::stable::StableCdfTable;
use srwalk::StepSource;

fn main() -> srwalk::Result<()> {
    let n = 4000;
    for (alpha, p, r) in [(1.0, 0.5, 0.5), (1.5, 0.5, 0.8), (0.8, 0.7, 1.0)] {
        let c = constant_series(alpha, p, r, 1e-9)?.value;
        let scale = c.powf(1.0 / alpha);
        let table = StableCdfTable::new(alpha, scale, 60.0 * scale, 0.01 * scale)?;
        let a_n = (n as f64).powf(1.0 / alpha);
        let sample = walk_endpoints(p, r, StepSource::Stable { alpha }, n, 4000, a_n, 29)?;
        let ks = ks_to_cdf(&sample, |x| table.cdf(x))?;
        println!("alpha={alpha} p={p} r={r}: scale {scale:.5}, KS = {ks:.4}");
    }
    Ok(())
}
