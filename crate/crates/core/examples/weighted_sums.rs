//! Weight families and the limit of their normalized sums.
//!
//! cargo run --release --example weighted_sums

use srwalk::weights::{clt_experiment, CltExperiment, LimitSpec, WeightScheme, YLaw};
use srwalk::{NormalizingSequence, StepSource};

fn main() -> srwalk::Result<()> {
    let schemes = [
        WeightScheme::AllOnes,
        WeightScheme::Efron,
        WeightScheme::Bayesian,
        WeightScheme::SelfNormalized { y: YLaw::Exponential },
    ];
    for alpha in [2.0, 1.5] {
        let steps = if alpha == 2.0 { StepSource::Gaussian } else { StepSource::Stable { alpha } };
        for scheme in &schemes {
            let limit = match scheme {
                WeightScheme::AllOnes if alpha == 2.0 => LimitSpec::Normal { variance: 1.0 },
                WeightScheme::AllOnes => LimitSpec::Stable { alpha, scale: 1.0 },
                _ => LimitSpec::Mixture { alpha },
            };
            let exp = CltExperiment {
                scheme: *scheme,
                steps,
                normalizer: NormalizingSequence::ExactStable { alpha },
                limit,
                n: 1000,
                replicates: 3000,
                seed: 21,
                post_scale: 1.0,
            };
            let out = clt_experiment(&exp)?;
            println!("alpha={alpha} {:<28} limit {:<28} KS {:.4}", scheme.label(), out.limit, out.ks_limit);
        }
    }
    Ok(())
}
