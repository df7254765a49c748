//! Random weight arrays `W_n1..W_nn`, randomly weighted sums, empirical
//! checks of the weight conditions, and limit experiments for normalized
//! weighted sums.
//!
//! Weights and steps always come from separate streams, so the weight
//! array is independent of the steps by construction.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, check_probability, Error, Result};
use crate::percolation::grow_and_percolate;
use crate::seed::{stream_rng, Stream};
use crate::special::{normal_cdf, NeumaierSum};
use crate::stable::{cdf_stable, normalizer, sample_stable, NormalizingSequence};
use crate::stats::{ks_to_cdf, mc_mean_se, two_sample_ks};
use crate::steps::StepSource;
use crate::tape::RandomnessTape;

/// Law of the non-negative variables `Y_k` in a self-normalized scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum YLaw {
    Exponential,
    Uniform,
    /// `P(Y > y) = y^-tail` for `y >= 1`.
    Pareto { tail: f64 },
}

impl YLaw {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            YLaw::Exponential => rng.sample(Exp1),
            YLaw::Uniform => rng.random(),
            YLaw::Pareto { tail } => (1.0 - rng.random::<f64>()).powf(-1.0 / tail),
        }
    }
}

/// How the weight array is generated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WeightScheme {
    /// `W_nk = 1`: the plain sum.
    AllOnes,
    /// Multinomial counts with `n` trials and cell probability `1/n`.
    #[serde(rename = "efron-multinomial")]
    Efron,
    /// `n` times the gaps of `n - 1` sorted uniforms.
    #[serde(rename = "bayesian-gaps")]
    Bayesian,
    /// `sqrt(n) Y_k / sum_i Y_i`, with `0/0 = 0`.
    SelfNormalized { y: YLaw },
    /// Signed component sizes of the percolation forest.
    Percolation { p: f64, r: f64 },
    /// `(sqrt(n), 0, .., 0)`.
    Spike,
    /// `sqrt(n / m)` on the first `m = max(1, ceil(ln n))` coordinates.
    LogWindow,
    /// Self-normalized with `P(Y > y) = 1 / ln y` for `y >= e`.
    #[serde(rename = "slow-varying-self-normalized")]
    SlowVarying,
}

impl WeightScheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightScheme::Percolation { p, r } => {
                check_probability("p", p)?;
                check_probability("r", r)
            }
            WeightScheme::SelfNormalized { y: YLaw::Pareto { tail } } if !(tail > 0.0) => Err(Error::InvalidParameter {
                name: "tail",
                value: tail,
                reason: "must be positive",
            }),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            WeightScheme::AllOnes => "all-ones",
            WeightScheme::Efron => "efron-multinomial",
            WeightScheme::Bayesian => "bayesian-gaps",
            WeightScheme::SelfNormalized { .. } => "self-normalized",
            WeightScheme::Percolation { .. } => "percolation",
            WeightScheme::Spike => "spike",
            WeightScheme::LogWindow => "log-window",
            WeightScheme::SlowVarying => "slow-varying-self-normalized",
        }
    }
}

/// Window length `max(1, ceil(ln n))` of the log-window scheme.
pub fn log_window_length(n: usize) -> usize {
    ((n as f64).ln().ceil() as usize).clamp(1, n.max(1))
}

/// Gaps `D_n1..D_nn` of `n - 1` sorted uniforms on `(0, 1)`.
pub fn bayesian_gaps<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut cuts: Vec<f64> = (1..n).map(|_| rng.random()).collect();
    cuts.sort_unstable_by(f64::total_cmp);
    let mut prev = 0.0;
    let mut gaps = Vec::with_capacity(n);
    for c in cuts {
        gaps.push(c - prev);
        prev = c;
    }
    gaps.push(1.0 - prev);
    gaps
}

fn self_normalize(y: Vec<f64>, n: usize) -> Vec<f64> {
    let total = y.iter().copied().collect::<NeumaierSum>().total();
    if total == 0.0 {
        return vec![0.0; n];
    }
    let scale = (n as f64).sqrt() / total;
    y.into_iter().map(|v| v * scale).collect()
}

/// Draws `(W_n1, .., W_nn)`.
pub fn gen_weights<R: Rng + ?Sized>(scheme: &WeightScheme, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    scheme.validate()?;
    if n == 0 {
        return Err(Error::EmptyPath);
    }
    let nf = n as f64;
    Ok(match *scheme {
        WeightScheme::AllOnes => vec![1.0; n],
        WeightScheme::Efron => {
            let mut counts = vec![0.0; n];
            for _ in 0..n {
                counts[rng.random_range(0..n)] += 1.0;
            }
            counts
        }
        WeightScheme::Bayesian => bayesian_gaps(n, rng).into_iter().map(|d| d * nf).collect(),
        WeightScheme::SelfNormalized { y } => self_normalize((0..n).map(|_| y.sample(rng)).collect(), n),
        WeightScheme::SlowVarying => {
            // Y = exp(1/U) has P(Y > y) = 1/ln y; normalize in log space
            let logs: Vec<f64> = (0..n).map(|_| 1.0 / (1.0 - rng.random::<f64>())).collect();
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let y: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
            self_normalize(y, n)
        }
        WeightScheme::Percolation { p, r } => {
            let tape = RandomnessTape::sample(n, p, r, rng)?;
            let (_, forest) = grow_and_percolate(n, &tape)?;
            forest.weights.iter().map(|&w| w as f64).collect()
        }
        WeightScheme::Spike => {
            let mut w = vec![0.0; n];
            w[0] = nf.sqrt();
            w
        }
        WeightScheme::LogWindow => {
            let m = log_window_length(n);
            let mut w = vec![0.0; n];
            w[..m].fill((nf / m as f64).sqrt());
            w
        }
    })
}

/// `sum_k W_nk xi_k` with compensated summation.
pub fn weighted_sum(weights: &[f64], steps: &[f64]) -> Result<f64> {
    if weights.len() != steps.len() {
        return Err(Error::LengthMismatch {
            left: weights.len(),
            right: steps.len(),
        });
    }
    Ok(weights
        .iter()
        .zip(steps)
        .filter(|(&w, _)| w != 0.0)
        .map(|(&w, &x)| w * x)
        .collect::<NeumaierSum>()
        .total())
}

/// Thresholds `c` at which the tail profiles are evaluated.
pub const TAIL_LEVELS: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

/// Per-`n` summary of the weight statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRow {
    pub n: usize,
    /// Samples of `n^-1 sum W^2`.
    pub a1_stat: Vec<f64>,
    /// Samples of `max |W| / sqrt(n)`.
    pub a2_stat: Vec<f64>,
    /// Samples of `n^-1 sum |W|^alpha`.
    pub alpha_sum: Vec<f64>,
    /// `c -> n^-1 sum E(W^2 1{|W| > c})` on [`TAIL_LEVELS`].
    pub a4_profile: Vec<f64>,
    /// `c -> n^-1 sum E(|W|^beta 1{|W| > c})` on [`TAIL_LEVELS`].
    pub a6_profile: Vec<f64>,
}

impl ConditionRow {
    pub fn mean_sd(samples: &[f64]) -> (f64, f64) {
        let (mean, se) = mc_mean_se(samples).unwrap_or((f64::NAN, f64::NAN));
        (mean, se * (samples.len() as f64).sqrt())
    }
}

/// Empirical fingerprints of the weight conditions. These are diagnostics,
/// not proofs: each flag records the finite-`n` trend the condition
/// predicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub scheme: WeightScheme,
    pub alpha: f64,
    pub beta: f64,
    pub tail_levels: Vec<f64>,
    pub rows: Vec<ConditionRow>,
    /// `n^-1 sum W^2` has a small spread at the largest `n`.
    pub a1_concentrates: bool,
    /// Mean of `max |W| / sqrt(n)` falls along the grid to at most half its
    /// first value.
    pub a2_vanishes: bool,
    /// The square tail profile, maximized over `n`, drops at the last level
    /// to at most 5% of its value at the first level.
    pub a4_uniform_tail: bool,
    /// As `a4_uniform_tail` for the `beta` profile.
    pub a6_uniform_tail: bool,
}

/// Monte Carlo weight statistics over `n_grid`.
pub fn check_conditions(
    scheme: &WeightScheme,
    n_grid: &[usize],
    alpha: f64,
    beta: f64,
    replicates: usize,
    seed: u64,
) -> Result<DiagnosticsReport> {
    scheme.validate()?;
    check_alpha(alpha)?;
    if n_grid.is_empty() || replicates == 0 {
        return Err(Error::Domain("need a non-empty grid and at least one replicate".into()));
    }
    if !(beta >= 1.0 && beta > alpha) {
        return Err(Error::Domain(format!("beta = {beta} must be at least 1 and exceed alpha")));
    }
    let mut rows = Vec::with_capacity(n_grid.len());
    for (gi, &n) in n_grid.iter().enumerate() {
        let per_rep: Vec<(f64, f64, f64, Vec<f64>, Vec<f64>)> = (0..replicates as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed, (gi as u64) << 32 | i, Stream::Weights);
                let w = gen_weights(scheme, n, &mut rng)?;
                let nf = n as f64;
                let mut sq = NeumaierSum::default();
                let mut pa = NeumaierSum::default();
                let mut a4 = vec![0.0; TAIL_LEVELS.len()];
                let mut a6 = vec![0.0; TAIL_LEVELS.len()];
                let mut max = 0.0f64;
                for &x in &w {
                    let ax = x.abs();
                    if ax == 0.0 {
                        continue;
                    }
                    max = max.max(ax);
                    sq.add(x * x);
                    pa.add(ax.powf(alpha));
                    let pb = ax.powf(beta);
                    for (j, &c) in TAIL_LEVELS.iter().enumerate() {
                        if ax > c {
                            a4[j] += x * x;
                            a6[j] += pb;
                        }
                    }
                }
                a4.iter_mut().chain(a6.iter_mut()).for_each(|v| *v /= nf);
                Ok((sq.total() / nf, max / nf.sqrt(), pa.total() / nf, a4, a6))
            })
            .collect::<Result<_>>()?;
        let reps = replicates as f64;
        let mut a4_profile = vec![0.0; TAIL_LEVELS.len()];
        let mut a6_profile = vec![0.0; TAIL_LEVELS.len()];
        for rep in &per_rep {
            for j in 0..TAIL_LEVELS.len() {
                a4_profile[j] += rep.3[j] / reps;
                a6_profile[j] += rep.4[j] / reps;
            }
        }
        rows.push(ConditionRow {
            n,
            a1_stat: per_rep.iter().map(|r| r.0).collect(),
            a2_stat: per_rep.iter().map(|r| r.1).collect(),
            alpha_sum: per_rep.iter().map(|r| r.2).collect(),
            a4_profile,
            a6_profile,
        });
    }

    let last = rows.last().expect("non-empty grid");
    let (a1_mean, a1_sd) = ConditionRow::mean_sd(&last.a1_stat);
    let a1_concentrates = a1_sd <= 0.1 * a1_mean.abs().max(f64::MIN_POSITIVE);
    let a2_means: Vec<f64> = rows.iter().map(|r| ConditionRow::mean_sd(&r.a2_stat).0).collect();
    let a2_vanishes = a2_means.windows(2).all(|w| w[1] <= w[0]) && a2_means[a2_means.len() - 1] <= 0.5 * a2_means[0];
    let uniform = |profile: fn(&ConditionRow) -> &Vec<f64>| {
        let sup = |j: usize| rows.iter().map(|r| profile(r)[j]).fold(0.0f64, f64::max);
        let first = sup(0);
        first == 0.0 || sup(TAIL_LEVELS.len() - 1) <= 0.05 * first
    };
    Ok(DiagnosticsReport {
        scheme: *scheme,
        alpha,
        beta,
        tail_levels: TAIL_LEVELS.to_vec(),
        a1_concentrates,
        a2_vanishes,
        a4_uniform_tail: uniform(|r| &r.a4_profile),
        a6_uniform_tail: uniform(|r| &r.a6_profile),
        rows,
    })
}

/// Limit law a normalized weighted sum is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LimitSpec {
    /// `N(0, variance)`.
    Normal { variance: f64 },
    /// `scale * S` with `S` symmetric `alpha`-stable.
    Stable { alpha: f64, scale: f64 },
    /// `V^(1/alpha) S` (or `sqrt(V) N` at `alpha = 2`), where
    /// `V = n^-1 sum |W_nk|^alpha` is drawn from an independent weight array.
    /// Compared by a two-sample test.
    Mixture { alpha: f64 },
    /// The law of one step, compared by a two-sample test with fresh draws.
    StepLaw,
}

impl LimitSpec {
    pub fn label(&self) -> String {
        match *self {
            LimitSpec::Normal { variance } => format!("N(0, {variance})"),
            LimitSpec::Stable { alpha, scale } => format!("{scale} * S_{alpha}"),
            LimitSpec::Mixture { alpha } => format!("W^(1/{alpha}) * S_{alpha}"),
            LimitSpec::StepLaw => "ξ₁".to_string(),
        }
    }
}

/// Setup of a limit experiment for `post_scale * sum_k W_nk xi_k / a_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltExperiment {
    pub scheme: WeightScheme,
    pub steps: StepSource,
    pub normalizer: NormalizingSequence,
    pub limit: LimitSpec,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Extra deterministic factor, e.g. the log-window correction.
    pub post_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltOutcome {
    pub sample: Vec<f64>,
    pub limit: String,
    /// KS distance to the limit: one-sample for `Normal`/`Stable`,
    /// two-sample otherwise.
    pub ks_limit: f64,
    pub two_sample: bool,
    /// KS distance to `N(0, 1)`, for reference.
    pub ks_standard_normal: f64,
}

/// One normalized weighted sum per replicate.
pub fn normalized_sums(exp: &CltExperiment) -> Result<Vec<f64>> {
    exp.scheme.validate()?;
    exp.steps.validate()?;
    if exp.replicates == 0 {
        return Err(Error::EmptySample);
    }
    let a_n = normalizer(&exp.normalizer, exp.n)?;
    (0..exp.replicates as u64)
        .into_par_iter()
        .map(|i| {
            let w = gen_weights(&exp.scheme, exp.n, &mut stream_rng(exp.seed, i, Stream::Weights))?;
            let xi = exp.steps.draw(exp.n, &mut stream_rng(exp.seed, i, Stream::Steps));
            Ok(exp.post_scale * weighted_sum(&w, &xi)? / a_n)
        })
        .collect()
}

/// Draws from the limit law for the two-sample comparisons.
fn limit_sample(exp: &CltExperiment) -> Result<Vec<f64>> {
    (0..exp.replicates as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(exp.seed, i, Stream::Limit);
            match exp.limit {
                LimitSpec::StepLaw => Ok(exp.steps.sample(&mut rng)),
                LimitSpec::Mixture { alpha } => {
                    check_alpha(alpha)?;
                    let w = gen_weights(&exp.scheme, exp.n, &mut rng)?;
                    let v = w.iter().map(|x| x.abs().powf(alpha)).collect::<NeumaierSum>().total() / exp.n as f64;
                    Ok(if alpha == 2.0 {
                        v.sqrt() * rng.sample::<f64, _>(StandardNormal)
                    } else {
                        v.powf(1.0 / alpha) * sample_stable(alpha, &mut rng)
                    })
                }
                _ => unreachable!("one-sample limits have a CDF"),
            }
        })
        .collect()
}

/// Runs the experiment and measures the distance to the limit.
pub fn clt_experiment(exp: &CltExperiment) -> Result<CltOutcome> {
    let sample = normalized_sums(exp)?;
    let ks_standard_normal = ks_to_cdf(&sample, normal_cdf)?;
    let (ks_limit, two_sample) = match exp.limit {
        LimitSpec::Normal { variance } => {
            if !(variance > 0.0) {
                return Err(Error::Domain(format!("variance {variance} must be positive")));
            }
            let sd = variance.sqrt();
            (ks_to_cdf(&sample, |x| normal_cdf(x / sd))?, false)
        }
        LimitSpec::Stable { alpha, scale } => {
            check_alpha(alpha)?;
            if !(scale > 0.0) {
                return Err(Error::Domain(format!("scale {scale} must be positive")));
            }
            let cdf = |x: f64| cdf_stable(alpha, x / scale).unwrap_or(f64::NAN);
            (ks_to_cdf(&sample, cdf)?, false)
        }
        LimitSpec::Mixture { .. } | LimitSpec::StepLaw => (two_sample_ks(&sample, &limit_sample(exp)?)?, true),
    };
    Ok(CltOutcome {
        sample,
        limit: exp.limit.label(),
        ks_limit,
        two_sample,
        ks_standard_normal,
    })
}

/// Writes a single-column CSV with the given header.
pub fn write_column_csv<W: std::io::Write>(mut out: W, header: &str, values: &[f64]) -> std::io::Result<()> {
    writeln!(out, "{header}")?;
    for v in values {
        writeln!(out, "{v:?}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(i: u64) -> crate::seed::StreamRng {
        stream_rng(77, i, Stream::Weights)
    }

    #[test]
    fn efron_total_is_n() {
        for n in [1, 2, 17, 500] {
            let w = gen_weights(&WeightScheme::Efron, n, &mut rng(n as u64)).unwrap();
            assert_eq!(w.iter().sum::<f64>(), n as f64);
            assert!(w.iter().all(|x| x.fract() == 0.0 && *x >= 0.0));
        }
    }

    #[test]
    fn bayesian_gaps_on_simplex() {
        for n in [1, 2, 50, 1000] {
            let d = bayesian_gaps(n, &mut rng(n as u64));
            assert_eq!(d.len(), n);
            assert!(d.iter().all(|&x| x >= 0.0));
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spike_and_log_window() {
        let w = gen_weights(&WeightScheme::Spike, 9, &mut rng(0)).unwrap();
        assert_eq!(w, vec![3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let w = gen_weights(&WeightScheme::LogWindow, 10_000, &mut rng(0)).unwrap();
        let m = log_window_length(10_000);
        assert_eq!(m, 10);
        assert!(w[..m].iter().all(|&x| x == 1000f64.sqrt()));
        assert!(w[m..].iter().all(|&x| x == 0.0));
        assert_eq!(log_window_length(1), 1);
    }

    #[test]
    fn self_normalized_weights() {
        let n = 400;
        for scheme in [WeightScheme::SelfNormalized { y: YLaw::Exponential }, WeightScheme::SlowVarying] {
            let w = gen_weights(&scheme, n, &mut rng(3)).unwrap();
            assert!((w.iter().sum::<f64>() - (n as f64).sqrt()).abs() < 1e-9);
            assert!(w.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn weighted_sum_checks_lengths() {
        assert!(matches!(weighted_sum(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch { .. })));
        assert_eq!(weighted_sum(&[1.0], &[-1.0]).unwrap(), -1.0);
        let w = gen_weights(&WeightScheme::Spike, 25, &mut rng(1)).unwrap();
        let xi: Vec<f64> = (0..25).map(|k| k as f64 + 0.25).collect();
        assert_eq!(weighted_sum(&w, &xi).unwrap() / 5.0, xi[0]);
    }

    #[test]
    fn percolation_weights_reproduce_walk() {
        let n = 300;
        let tape = RandomnessTape::sample(n, 0.6, 0.3, &mut rng(9)).unwrap();
        let w = gen_weights(&WeightScheme::Percolation { p: 0.6, r: 0.3 }, n, &mut rng(9)).unwrap();
        let xi = StepSource::Gaussian.draw(n, &mut stream_rng(1, 0, Stream::Steps));
        let walk = crate::walk::simulate_unbalanced_walk(&tape, xi.clone()).unwrap();
        let s = weighted_sum(&w, &xi).unwrap();
        assert!((walk.last() - s).abs() <= 1e-9 * (1.0 + s.abs()));
    }

    #[test]
    fn spike_diagnostics() {
        let rep = check_conditions(&WeightScheme::Spike, &[100, 400, 2500], 1.0, 2.5, 20, 1).unwrap();
        for row in &rep.rows {
            assert!(row.a1_stat.iter().all(|&v| (v - 1.0).abs() < 1e-12));
            assert!(row.a2_stat.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        }
        assert!(rep.a1_concentrates);
        assert!(!rep.a2_vanishes);
        assert!(!rep.a4_uniform_tail);
    }

    #[test]
    fn efron_diagnostics() {
        let rep = check_conditions(&WeightScheme::Efron, &[100, 1000, 10_000], 1.0, 2.5, 40, 2).unwrap();
        let (a1, _) = ConditionRow::mean_sd(&rep.rows[2].a1_stat);
        assert!((a1 - 2.0).abs() < 0.05, "{a1}");
        assert!(rep.a1_concentrates && rep.a2_vanishes && rep.a4_uniform_tail);
        for row in &rep.rows {
            for (a1, a2) in row.a1_stat.iter().zip(&row.a2_stat) {
                assert!(*a2 <= a1.sqrt() + 1e-12);
            }
        }
    }

    #[test]
    fn streams_are_independent() {
        let exp = CltExperiment {
            scheme: WeightScheme::Efron,
            steps: StepSource::Rademacher,
            normalizer: NormalizingSequence::ExactStable { alpha: 2.0 },
            limit: LimitSpec::Normal { variance: 1.0 },
            n: 50,
            replicates: 20,
            seed: 4,
            post_scale: 1.0,
        };
        let a = normalized_sums(&exp).unwrap();
        assert_eq!(a, normalized_sums(&exp).unwrap());
        // new weights with the same steps: sums change
        let xi = exp.steps.draw(50, &mut stream_rng(4, 0, Stream::Steps));
        let w1 = gen_weights(&exp.scheme, 50, &mut stream_rng(4, 0, Stream::Weights)).unwrap();
        let w2 = gen_weights(&exp.scheme, 50, &mut stream_rng(5, 0, Stream::Weights)).unwrap();
        assert_ne!(weighted_sum(&w1, &xi).unwrap(), weighted_sum(&w2, &xi).unwrap());
    }

    #[test]
    fn spike_limit_is_step_law() {
        let exp = CltExperiment {
            scheme: WeightScheme::Spike,
            steps: StepSource::Rademacher,
            normalizer: NormalizingSequence::ExactStable { alpha: 2.0 },
            limit: LimitSpec::StepLaw,
            n: 400,
            replicates: 4000,
            seed: 5,
            post_scale: 1.0,
        };
        let out = clt_experiment(&exp).unwrap();
        assert!(out.two_sample && out.ks_limit <= 0.02);
        assert!(out.ks_standard_normal > 0.3);
        assert_eq!(out.limit, "ξ₁");
    }
}
