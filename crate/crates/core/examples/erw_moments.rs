//! Exact moments and law of the elephant random walk.
//!
//! cargo run --release --example erw_moments

use srwalk::moments::{erw_fourth_moment, erw_law, erw_second_moment_closed};

fn main() -> srwalk::Result<()> {
    let n = 1000;
    println!("{:>5} {:>14} {:>14} {:>14}", "r", "E T_n^2", "closed form", "E T_n^4");
    for r in [0.1, 0.5, 0.75, 0.9, 1.0] {
        let table = erw_fourth_moment(r, n)?;
        let closed = erw_second_moment_closed(r, n)
            .map(|c| format!("{c:14.4}"))
            .unwrap_or_else(|_| format!("{:>14}", "-"));
        println!("{r:>5} {:14.4} {closed} {:14.4e}", table.second_at(n), table.fourth_at(n));
    }

    // the whole law at a small size
    println!("\nP(T_8 = t) for r = 0.8:");
    for (t, q) in erw_law(0.8, 8)? {
        println!("{t:>4} {q:.6} {}", "#".repeat((q * 200.0) as usize));
    }
    Ok(())
}
