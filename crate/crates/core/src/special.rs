//! Special functions and summation helpers.

use statrs::function::{erf, gamma};

/// Natural log of the gamma function for positive arguments.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

/// `ln B(a, b)` for positive arguments.
#[inline]
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Beta function through log-gamma, stable for large `a`.
#[inline]
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

/// Standard normal CDF.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erf::erfc(-x / std::f64::consts::SQRT_2)
}

// B_2, B_4, ..., B_16
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Riemann zeta for real `s > 1` by Euler-Maclaurin with a cut at `N = 16`.
pub fn zeta_gt1(s: f64) -> f64 {
    debug_assert!(s > 1.0);
    const N: usize = 16;
    let n = N as f64;
    let mut head = NeumaierSum::default();
    for k in 1..N {
        head.add((k as f64).powf(-s));
    }
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising product s (s+1) ... (s+2j-2), divided by (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        tail += b / fact * rising * npow;
        let j2 = 2.0 * (j as f64 + 1.0);
        rising *= (s + j2 - 1.0) * (s + j2);
        fact *= (j2 + 1.0) * (j2 + 2.0);
        npow /= n * n;
    }
    head.total() + tail
}

/// Riemann zeta for real `s < 0` via the functional equation.
pub fn zeta_negative(s: f64) -> f64 {
    debug_assert!(s < 0.0);
    use std::f64::consts::PI;
    let one_minus = 1.0 - s;
    2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * ln_gamma(one_minus).exp() * zeta_gt1(one_minus)
}

/// Neumaier (improved Kahan) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<NeumaierSum>().total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn beta_small_integers() {
        assert_relative_eq!(beta(1.0, 3.0), 1.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(beta(2.0, 3.0), 1.0 / 12.0, max_relative = 1e-13);
        assert_relative_eq!(beta(3.0, 3.0), 1.0 / 30.0, max_relative = 1e-13);
    }

    #[test]
    fn ln_gamma_factorials() {
        let mut f = 1.0f64;
        for k in 1..30 {
            f *= k as f64;
            assert_relative_eq!(ln_gamma(k as f64 + 1.0), f.ln(), max_relative = 1e-13);
        }
    }

    #[test]
    fn zeta_known_values() {
        use std::f64::consts::PI;
        assert_relative_eq!(zeta_gt1(2.0), PI * PI / 6.0, max_relative = 1e-13);
        assert_relative_eq!(zeta_gt1(4.0), PI.powi(4) / 90.0, max_relative = 1e-13);
        assert_relative_eq!(zeta_negative(-1.0), -1.0 / 12.0, max_relative = 1e-12);
        assert_relative_eq!(zeta_negative(-3.0), 1.0 / 120.0, max_relative = 1e-12);
        assert!(zeta_negative(-2.0).abs() < 1e-15);
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(&xs), 2.0);
    }
}
