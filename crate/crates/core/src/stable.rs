//! Symmetric alpha-stable law with characteristic function `exp(-|t|^alpha)`.
//!
//! Sampling uses the Chambers-Mallows-Stuck construction. The CDF is
//! recovered from the characteristic function by Gil-Pelaez inversion,
//!
//! ```text
//! F(x) = 1/2 + (1/pi) * int_0^inf sin(x t) exp(-t^alpha) / t dt,
//! ```
//!
//! truncated where `exp(-t^alpha) < 1e-16` and integrated with adaptive
//! Gauss-Kronrod panels aligned to the half-periods of `sin(x t)`. When the
//! number of half-periods becomes unreasonable (large `|x|` or small
//! `alpha`), the non-oscillatory Zolotarev integral is used instead.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, Error, Result};
use crate::quadrature::{integrate, integrate_panels};
use crate::special::normal_cdf;

/// `-ln(1e-16)`: beyond `t^alpha` of this size the integrand is negligible.
const TRUNCATION_EXPONENT: f64 = 36.8;
const MAX_OSCILLATION_PANELS: f64 = 4000.0;
const CDF_ABS_TOL: f64 = 1e-11;

/// The law of `S` with `E exp(itS) = exp(-|t|^alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableLaw {
    alpha: f64,
}

impl StableLaw {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        sample_stable(self.alpha, rng)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        cdf_stable(self.alpha, x)
    }

    pub fn quantile(&self, q: f64) -> Result<f64> {
        quantile_stable(self.alpha, q)
    }
}

/// One draw of `S` (Chambers-Mallows-Stuck, symmetric case).
///
/// # Panics
/// In debug builds, if `alpha` is outside `(0, 2]`.
pub fn sample_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 2.0);
    let u = loop {
        let v: f64 = rng.random();
        if v > 0.0 {
            break PI * (v - 0.5);
        }
    };
    if alpha == 1.0 {
        return u.tan();
    }
    let e = loop {
        let v: f64 = rng.random();
        let e = -(1.0 - v).ln();
        if e > 0.0 {
            break e;
        }
    };
    let lead = (alpha * u).sin() / u.cos().powf(1.0 / alpha);
    lead * (((1.0 - alpha) * u).cos() / e).powf((1.0 - alpha) / alpha)
}

/// `P(S <= x)` to absolute accuracy about `1e-10`.
pub fn cdf_stable(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("cdf argument {x} is not finite")));
    }
    if x == 0.0 {
        return Ok(0.5);
    }
    let ax = x.abs();
    let upper = upper_tail_free(alpha, ax);
    Ok(if x > 0.0 { upper } else { 1.0 - upper })
}

// F(|x|) for |x| > 0
fn upper_tail_free(alpha: f64, ax: f64) -> f64 {
    let t_max = TRUNCATION_EXPONENT.powf(1.0 / alpha);
    let half_periods = t_max * ax / PI;
    if half_periods <= MAX_OSCILLATION_PANELS {
        return gil_pelaez(alpha, ax, t_max, half_periods);
    }
    if alpha == 1.0 {
        0.5 + ax.atan() / PI
    } else if alpha == 2.0 {
        normal_cdf(ax / std::f64::consts::SQRT_2)
    } else {
        zolotarev(alpha, ax)
    }
}

fn gil_pelaez(alpha: f64, x: f64, t_max: f64, half_periods: f64) -> f64 {
    let f = |t: f64| {
        if t == 0.0 {
            x
        } else {
            (x * t).sin() * (-t.powf(alpha)).exp() / t
        }
    };
    let panels = half_periods.ceil().max(1.0) as usize;
    let step = t_max / panels as f64;
    let mut breaks: Vec<f64> = (0..panels).map(|i| i as f64 * step).collect();
    breaks.push(t_max);
    let r = integrate_panels(&f, &breaks, CDF_ABS_TOL, 0.0, 64 * panels + 2000);
    (0.5 + r.value / PI).clamp(0.0, 1.0)
}

/// Zolotarev's integral for `x > 0`, `alpha != 1`.
pub(crate) fn zolotarev(alpha: f64, x: f64) -> f64 {
    let expo = alpha / (alpha - 1.0);
    let lnx = x.ln();
    let g = |theta: f64| {
        let c = theta.cos();
        let s = (alpha * theta).sin();
        if c <= 0.0 || s <= 0.0 {
            // endpoint limits of exp(-g)
            return if (theta < 0.5) == (alpha > 1.0) { 0.0 } else { 1.0 };
        }
        let ln_g = expo * (lnx + c.ln() - s.ln()) + ((alpha - 1.0) * theta).cos().ln() - c.ln();
        (-ln_g.exp()).exp()
    };
    let r = integrate(g, 0.0, FRAC_PI_2, 1e-13, 0.0, 4000);
    let (c1, sign) = if alpha < 1.0 { (0.5, 1.0) } else { (1.0, -1.0) };
    (c1 + sign * r.value / PI).clamp(0.0, 1.0)
}

/// Inverse CDF by bisection on [`cdf_stable`].
pub fn quantile_stable(alpha: f64, q: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("quantile level {q} outside (0, 1)")));
    }
    if q == 0.5 {
        return Ok(0.0);
    }
    // work on the upper half and reflect
    let target = if q > 0.5 { q } else { 1.0 - q };
    let mut lo = 0.0;
    let mut hi = 1.0;
    while cdf_stable(alpha, hi)? < target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Domain("quantile bracket overflow".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
        if cdf_stable(alpha, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok(if q > 0.5 { x } else { -x })
}

/// Normalizing sequence `a_n` for `sum xi_k / a_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum NormalizingSequence {
    /// `n^(1/alpha)`: exact for stable steps.
    ExactStable { alpha: f64 },
    /// `sqrt(n log n)`: steps with `P(|xi| > x) = x^-2`.
    SqrtNLogN,
}

impl NormalizingSequence {
    pub fn label(&self) -> String {
        match self {
            NormalizingSequence::ExactStable { alpha } => format!("n^(1/{alpha})"),
            NormalizingSequence::SqrtNLogN => "sqrt(n log n)".into(),
        }
    }
}

/// `a_n` for the given rule.
pub fn normalizer(rule: &NormalizingSequence, n: usize) -> Result<f64> {
    let nf = n as f64;
    match *rule {
        NormalizingSequence::ExactStable { alpha } => {
            check_alpha(alpha)?;
            if n == 0 {
                return Err(Error::Domain("n must be positive".into()));
            }
            Ok(nf.powf(1.0 / alpha))
        }
        NormalizingSequence::SqrtNLogN => {
            if n < 2 {
                return Err(Error::Domain(format!("sqrt(n log n) needs n >= 2, got {n}")));
            }
            Ok((nf * nf.ln()).sqrt())
        }
    }
}

/// Tabulated CDF with linear interpolation on `[-half_width, half_width]`
/// and direct evaluation outside. For KS checks on large samples.
#[derive(Debug, Clone)]
pub struct StableCdfTable {
    alpha: f64,
    scale: f64,
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl StableCdfTable {
    /// Table of `F(x / scale)`.
    pub fn new(alpha: f64, scale: f64, half_width: f64, step: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(scale > 0.0 && half_width > 0.0 && step > 0.0) {
            return Err(Error::Domain("scale, half width and step must be positive".into()));
        }
        let cells = (2.0 * half_width / step).ceil() as usize;
        let lo = -half_width;
        let values = (0..=cells)
            .into_par_iter()
            .map(|i| cdf_stable(alpha, (lo + i as f64 * step) / scale))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha,
            scale,
            lo,
            step,
            values,
        })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let pos = (x - self.lo) / self.step;
        if pos >= 0.0 && pos < (self.values.len() - 1) as f64 {
            let i = pos.floor() as usize;
            let w = pos - i as f64;
            self.values[i] * (1.0 - w) + self.values[i + 1] * w
        } else {
            cdf_stable(self.alpha, x / self.scale).unwrap_or(f64::NAN)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{stream_rng, Stream};

    #[test]
    fn cauchy_closed_form() {
        for i in -20..=20 {
            let x = i as f64 * 0.5;
            let f = cdf_stable(1.0, x).unwrap();
            assert!((f - (0.5 + x.atan() / PI)).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn gaussian_closed_form() {
        for i in -20..=20 {
            let x = i as f64 * 0.5;
            let f = cdf_stable(2.0, x).unwrap();
            assert!((f - normal_cdf(x / std::f64::consts::SQRT_2)).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn zolotarev_agrees_with_inversion() {
        for &alpha in &[0.6, 0.8, 1.3, 1.5, 1.9] {
            for &x in &[0.1, 0.7, 2.0, 6.0] {
                let t_max = TRUNCATION_EXPONENT.powf(1.0 / alpha);
                let gp = gil_pelaez(alpha, x, t_max, t_max * x / PI);
                let z = zolotarev(alpha, x);
                assert!((gp - z).abs() < 1e-9, "alpha={alpha} x={x} gp={gp} z={z}");
            }
        }
    }

    #[test]
    fn symmetric_and_monotone() {
        for &alpha in &[0.5, 1.0, 1.5, 2.0] {
            assert_eq!(cdf_stable(alpha, 0.0).unwrap(), 0.5);
            let mut prev = 0.0;
            for i in -40..=40 {
                let x = i as f64 * 0.25;
                let f = cdf_stable(alpha, x).unwrap();
                assert!(f >= prev - 1e-12);
                assert!((f + cdf_stable(alpha, -x).unwrap() - 1.0).abs() < 1e-12);
                prev = f;
            }
        }
        assert!(cdf_stable(1.5, 1e6).unwrap() > 1.0 - 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(cdf_stable(1.0, f64::NAN).is_err());
        assert!(cdf_stable(2.5, 1.0).is_err());
        assert!(quantile_stable(1.0, 1.0).is_err());
        assert!(quantile_stable(1.0, 0.0).is_err());
    }

    #[test]
    fn quantile_examples() {
        assert!((quantile_stable(1.0, 0.75).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(quantile_stable(1.3, 0.5).unwrap(), 0.0);
        let z = quantile_stable(2.0, 0.975).unwrap();
        assert!((z - 2f64.sqrt() * 1.959_963_984_540_054).abs() < 1e-5);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for &alpha in &[0.7, 1.2, 1.8] {
            for &q in &[0.01, 0.2, 0.6, 0.95] {
                let x = quantile_stable(alpha, q).unwrap();
                assert!((cdf_stable(alpha, x).unwrap() - q).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn gaussian_sampler_variance() {
        let mut rng = stream_rng(11, 0, Stream::Steps);
        let m = 1_000_000;
        let xs: Vec<f64> = (0..m).map(|_| sample_stable(2.0, &mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / m as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        // Var of the sample variance of N(0, 2) is 2 * 2^2 / m
        let se = (8.0 / m as f64).sqrt();
        assert!((var - 2.0).abs() < 3.0 * se, "var={var}");
    }

    #[test]
    fn cauchy_sampler_median_and_quartile() {
        let mut rng = stream_rng(12, 0, Stream::Steps);
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_stable(1.0, &mut rng)).collect();
        let s = crate::stats::EmpiricalSample::new(xs).unwrap();
        assert!(s.quantile(0.5).abs() < 0.01);
        assert!((s.ecdf(1.0) - 0.75).abs() < 0.005);
    }

    #[test]
    fn normalizer_rules() {
        assert_eq!(normalizer(&NormalizingSequence::ExactStable { alpha: 2.0 }, 100).unwrap(), 10.0);
        assert_eq!(normalizer(&NormalizingSequence::ExactStable { alpha: 1.0 }, 1000).unwrap(), 1000.0);
        let n = std::f64::consts::E.powi(2).round() as usize;
        let expected = (n as f64 * (n as f64).ln()).sqrt();
        assert_eq!(normalizer(&NormalizingSequence::SqrtNLogN, n).unwrap(), expected);
        assert!(normalizer(&NormalizingSequence::SqrtNLogN, 1).is_err());
    }

    #[test]
    fn table_matches_direct() {
        let table = StableCdfTable::new(1.5, 1.0, 20.0, 0.01).unwrap();
        for &x in &[-30.0, -3.3, -0.004, 0.5, 7.77, 25.0] {
            assert!((table.cdf(x) - cdf_stable(1.5, x).unwrap()).abs() < 1e-5);
        }
    }
}
