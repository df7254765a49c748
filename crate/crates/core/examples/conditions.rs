//! Empirical checks of the weight conditions for each family.
//!
//! cargo run --release --example conditions

use srwalk::weights::{check_conditions, ConditionRow, WeightScheme, YLaw};

fn main() -> srwalk::Result<()> {
    let schemes = [
        WeightScheme::Efron,
        WeightScheme::Bayesian,
        WeightScheme::SelfNormalized { y: YLaw::Pareto { tail: 1.5 } },
        WeightScheme::Percolation { p: 0.5, r: 0.5 },
        WeightScheme::Spike,
        WeightScheme::SlowVarying,
    ];
    for scheme in &schemes {
        let d = check_conditions(scheme, &[100, 1000, 10_000], 1.5, 2.5, 50, 8)?;
        let last = d.rows.last().unwrap();
        println!(
            "{:<30} A1 {:<5} A2 {:<5} A4 {:<5} A6 {:<5} mean sum|W|^alpha/n = {:.4}",
            scheme.label(),
            d.a1_concentrates,
            d.a2_vanishes,
            d.a4_uniform_tail,
            d.a6_uniform_tail,
            ConditionRow::mean_sd(&last.alpha_sum).0
        );
    }
    Ok(())
}
