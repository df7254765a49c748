//! The scale constant c(alpha, p, r) of the limit law.
//!
//! cargo run --release --example limit_constant

use srwalk::constants::{businger_integral, constant_closed_c2, constant_series, constant_series_mc};

fn main() -> srwalk::Result<()> {
    println!("alpha = 2 against the closed form:");
    for (p, r) in [(0.4, 1.0), (0.3, 0.75), (0.5, 0.2)] {
        let c = constant_series(2.0, p, r, 1e-10)?;
        println!("  p={p} r={r}: series {:.10} (tail {:.1e}), closed {:.10}", c.value, c.tail_bound, constant_closed_c2(p, r)?);
    }

    println!("\nr = 1, series against the integral form:");
    for (alpha, p) in [(1.5, 0.5), (1.0, 0.6), (0.5, 0.9)] {
        let s = constant_series(alpha, p, 1.0, 1e-10)?;
        let i = businger_integral(alpha, p, 1e-10)?;
        println!("  alpha={alpha} p={p}: {:.10} vs {:.10}", s.value, i.value);
    }

    let exact = constant_series(1.0, 0.5, 0.5, 1e-10)?;
    let mc = constant_series_mc(1.0, 0.5, 0.5, 512, 20_000, 5)?;
    println!("\nc(1, 0.5, 0.5): exact {:.8}, simulated {:.4} +- {:.4}", exact.value, mc.value, mc.tail_bound);
    Ok(())
}
