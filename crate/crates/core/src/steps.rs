use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, Result};
use crate::stable;

/// Law of the i.i.d. steps `xi_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum StepSource {
    /// Uniform on `{-1, +1}`.
    Rademacher,
    /// Standard normal.
    Gaussian,
    /// Symmetric stable with characteristic function `exp(-|t|^alpha)`.
    Stable { alpha: f64 },
    /// Symmetric with density `alpha / (2 |x|^(alpha+1))` on `|x| >= 1`.
    SymmetricPareto { alpha: f64 },
    /// Degenerate at `value`.
    PointMass { value: f64 },
}

impl StepSource {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StepSource::Stable { alpha } | StepSource::SymmetricPareto { alpha } => check_alpha(alpha),
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            StepSource::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            StepSource::Gaussian => rng.sample(StandardNormal),
            StepSource::Stable { alpha } => stable::sample_stable(alpha, rng),
            StepSource::SymmetricPareto { alpha } => {
                // 1 - U lies in (0, 1]
                let u: f64 = 1.0 - rng.random::<f64>();
                let mag = u.powf(-1.0 / alpha);
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
            StepSource::PointMass { value } => value,
        }
    }

    /// Draws `xi_1, .., xi_n`.
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }

    /// `E xi`, when finite.
    pub fn mean(&self) -> Option<f64> {
        match *self {
            StepSource::Rademacher | StepSource::Gaussian => Some(0.0),
            StepSource::Stable { alpha } | StepSource::SymmetricPareto { alpha } => (alpha > 1.0).then_some(0.0),
            StepSource::PointMass { value } => Some(value),
        }
    }

    /// `E xi^2`, when finite.
    pub fn second_moment(&self) -> Option<f64> {
        match *self {
            StepSource::Rademacher | StepSource::Gaussian => Some(1.0),
            StepSource::Stable { alpha } => (alpha == 2.0).then_some(2.0),
            StepSource::SymmetricPareto { .. } => None,
            StepSource::PointMass { value } => Some(value * value),
        }
    }

    /// Whether every draw is an integer (exact summation).
    pub fn is_integer_valued(&self) -> bool {
        match *self {
            StepSource::Rademacher => true,
            StepSource::PointMass { value } => value.fract() == 0.0,
            _ => false,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        !matches!(*self, StepSource::PointMass { value } if value != 0.0)
    }
}
