//! Walk parameters, derived constants and the phase classification.

use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, check_probability, Error, Result};

const CRITICAL_EPS: f64 = 1e-12;

/// The triple `(p, r, alpha)`.
///
/// `p` is the reinforcement (copy) probability, `r` the probability that a
/// copied step keeps its sign, and `alpha` the stability index of the step
/// law where one is relevant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub p: f64,
    pub r: f64,
    pub alpha: f64,
}

impl WalkParams {
    pub fn new(p: f64, r: f64, alpha: f64) -> Result<Self> {
        check_probability("p", p)?;
        check_probability("r", r)?;
        check_alpha(alpha)?;
        Ok(Self { p, r, alpha })
    }

    /// Parameters for a finite-variance step law (`alpha = 2`).
    pub fn gaussian(p: f64, r: f64) -> Result<Self> {
        Self::new(p, r, 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.p, self.r, self.alpha).map(|_| ())
    }

    /// `a = (2r - 1) p`.
    pub fn a(&self) -> f64 {
        (2.0 * self.r - 1.0) * self.p
    }

    /// `gamma = 4r - 2`, the memory exponent of the sign process.
    pub fn gamma(&self) -> f64 {
        4.0 * self.r - 2.0
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.a())
    }
}

/// Phase of the walk, decided by `a` against `1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl Regime {
    pub fn of(a: f64) -> Self {
        if (a - 0.5).abs() <= CRITICAL_EPS {
            Regime::Critical
        } else if a < 0.5 {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        }
    }
}

/// Normalization of `T_n - n mu` in each regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scaling {
    /// `sqrt(n)`
    Sqrt,
    /// `sqrt(n log n)`
    SqrtNLogN,
    /// `n^exponent`
    Power { exponent: f64 },
}

impl Scaling {
    pub fn at(&self, n: f64) -> f64 {
        match *self {
            Scaling::Sqrt => n.sqrt(),
            Scaling::SqrtNLogN => (n * n.ln()).sqrt(),
            Scaling::Power { exponent } => n.powf(exponent),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Scaling::Sqrt => "sqrt(n)".into(),
            Scaling::SqrtNLogN => "sqrt(n log n)".into(),
            Scaling::Power { exponent } => {
                // trim float noise such as 0.8099999999999999
                let text = format!("{exponent:.10}");
                format!("n^{}", text.trim_end_matches('0').trim_end_matches('.'))
            }
        }
    }
}

/// Constants attached to a parameter triple and a step law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub a: f64,
    pub gamma: f64,
    /// `(1 - r) / (1 - a)`; `None` at `a = 1`.
    pub mu_coeff: Option<f64>,
    /// `mu = mu_coeff * E xi`.
    pub mu: f64,
    /// `sigma^2 = E xi^2 - mu^2`.
    pub sigma_sq: f64,
    pub regime: Regime,
}

impl DerivedParams {
    /// Variance of the Gaussian limit in the subcritical regime,
    /// `sigma^2 / (1 - 2a)`.
    pub fn subcritical_variance(&self) -> Option<f64> {
        (self.regime == Regime::Subcritical).then(|| self.sigma_sq / (1.0 - 2.0 * self.a))
    }
}

fn mu_coeff(params: &WalkParams) -> Option<f64> {
    let a = params.a();
    (a < 1.0).then(|| (1.0 - params.r) / (1.0 - a))
}

/// Derives `a`, `gamma`, `mu`, `sigma^2` and the regime from the step moments.
pub fn derive_params(params: &WalkParams, step_mean: f64, step_second_moment: f64) -> Result<DerivedParams> {
    params.validate()?;
    let coeff = mu_coeff(params).ok_or(Error::UndefinedMean)?;
    let mu = coeff * step_mean;
    Ok(DerivedParams {
        a: params.a(),
        gamma: params.gamma(),
        mu_coeff: Some(coeff),
        mu,
        sigma_sq: step_second_moment - mu * mu,
        regime: params.regime(),
    })
}

/// Regime plus the matching normalization for finite-variance steps.
pub fn classify_regime(params: &WalkParams) -> Result<(Regime, Scaling)> {
    params.validate()?;
    let regime = params.regime();
    let scaling = match regime {
        Regime::Subcritical => Scaling::Sqrt,
        Regime::Critical => Scaling::SqrtNLogN,
        Regime::Supercritical => Scaling::Power { exponent: params.a() },
    };
    Ok((regime, scaling))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_positive_reinforcement_has_zero_drift() {
        let d = derive_params(&WalkParams::gaussian(0.5, 1.0).unwrap(), 3.0, 10.0).unwrap();
        assert_eq!(d.a, 0.5);
        assert_eq!(d.mu_coeff, Some(0.0));
        assert_eq!(d.mu, 0.0);
        assert_eq!(d.regime, Regime::Critical);
    }

    #[test]
    fn balanced_sign_gives_a_zero() {
        for p in [0.0, 0.3, 1.0] {
            let d = derive_params(&WalkParams::gaussian(p, 0.5).unwrap(), 1.0, 1.0).unwrap();
            assert_eq!(d.a, 0.0);
            assert_eq!(d.mu_coeff, Some(0.5));
            assert_eq!(d.regime, Regime::Subcritical);
        }
    }

    #[test]
    fn positive_reinforcement_p04() {
        let w = WalkParams::gaussian(0.4, 1.0).unwrap();
        let d = derive_params(&w, 0.0, 1.0).unwrap();
        assert!((d.a - 0.4).abs() < 1e-15);
        assert_eq!(d.gamma, 2.0);
        assert_eq!(d.regime, Regime::Subcritical);
        assert!((d.subcritical_variance().unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn a_equal_one_has_no_mean() {
        let w = WalkParams::gaussian(1.0, 1.0).unwrap();
        assert!(matches!(derive_params(&w, 1.0, 1.0), Err(Error::UndefinedMean)));
    }

    #[test]
    fn regimes_and_scalings() {
        let (g, s) = classify_regime(&WalkParams::gaussian(0.5, 0.5).unwrap()).unwrap();
        assert_eq!((g, s), (Regime::Subcritical, Scaling::Sqrt));
        let (g, s) = classify_regime(&WalkParams::gaussian(1.0, 0.75).unwrap()).unwrap();
        assert_eq!((g, s), (Regime::Critical, Scaling::SqrtNLogN));
        let (g, s) = classify_regime(&WalkParams::gaussian(1.0, 0.9).unwrap()).unwrap();
        assert_eq!(g, Regime::Supercritical);
        match s {
            Scaling::Power { exponent } => assert!((exponent - 0.8).abs() < 1e-12),
            other => panic!("unexpected scaling {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(WalkParams::new(1.2, 0.5, 2.0).is_err());
        assert!(WalkParams::new(0.5, -0.1, 2.0).is_err());
        assert!(WalkParams::new(0.5, 0.5, 0.0).is_err());
        assert!(WalkParams::new(0.5, 0.5, 2.1).is_err());
    }
}
