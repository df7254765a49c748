//! Exact moments of the elephant random walk `T_n^0` started at `X_1 = 1`.
//!
//! Given `T_n = t`, the next step is `+1` with probability
//! `1/2 + (2r - 1) t / (2n)`. This yields closed recursions for the second
//! and fourth moments and an `O(n^2)` dynamic program for the full law,
//! from which `E|T_n^0|^alpha` is read off exactly for any `alpha`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_alpha, check_probability, Error, Result};
use crate::seed::{stream_rng, Stream};
use crate::special::{ln_gamma, NeumaierSum};
use crate::stats::mc_mean_se;

/// `E (T_n^0)^2` and `E (T_n^0)^4` for `n = 1..=n_max` (slot `n - 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentTable {
    pub n_max: usize,
    pub second: Vec<f64>,
    pub fourth: Vec<f64>,
    /// `4r - 2`.
    pub gamma: f64,
}

impl MomentTable {
    pub fn second_at(&self, n: usize) -> f64 {
        self.second[n - 1]
    }

    pub fn fourth_at(&self, n: usize) -> f64 {
        self.fourth[n - 1]
    }

    /// Standard deviation of `(T_n^0)^2`.
    pub fn square_sd(&self, n: usize) -> f64 {
        (self.fourth_at(n) - self.second_at(n).powi(2)).max(0.0).sqrt()
    }

    /// Rows `n,second,fourth`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,second,fourth")?;
        for n in 1..=self.n_max {
            writeln!(out, "{},{:?},{:?}", n, self.second_at(n), self.fourth_at(n))?;
        }
        Ok(())
    }
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max == 0 {
        Err(Error::EmptyPath)
    } else {
        Ok(())
    }
}

/// `E (T_n^0)^2`, `n = 1..=n_max`, by `m_{n+1} = ((n + gamma) / n) m_n + 1`.
pub fn erw_second_moment(r: f64, n_max: usize) -> Result<Vec<f64>> {
    check_probability("r", r)?;
    check_n_max(n_max)?;
    let gamma = 4.0 * r - 2.0;
    let mut out = Vec::with_capacity(n_max);
    let mut m = 1.0;
    out.push(m);
    for n in 1..n_max {
        let nf = n as f64;
        m = m * (nf + gamma) / nf + 1.0;
        out.push(m);
    }
    Ok(out)
}

/// Second and fourth moments together. The fourth moment follows
/// `E T_{n+1}^4 = 1 + ((6n + 2 gamma) / n) E T_n^2 + ((n + 2 gamma) / n) E T_n^4`.
pub fn erw_fourth_moment(r: f64, n_max: usize) -> Result<MomentTable> {
    let second = erw_second_moment(r, n_max)?;
    let gamma = 4.0 * r - 2.0;
    let mut fourth = Vec::with_capacity(n_max);
    let mut q = 1.0;
    fourth.push(q);
    for n in 1..n_max {
        let nf = n as f64;
        q = 1.0 + second[n - 1] * (6.0 * nf + 2.0 * gamma) / nf + q * (nf + 2.0 * gamma) / nf;
        fourth.push(q);
    }
    Ok(MomentTable {
        n_max,
        second,
        fourth,
        gamma,
    })
}

/// `E (T_n^0)^2 = Gamma(n + gamma) / Gamma(n) * sum_{k<=n} Gamma(k) / Gamma(k + gamma)`,
/// evaluated in log-gamma arithmetic.
///
/// Only defined for `gamma > -1` (`r > 1/4`); below that the gamma
/// function has poles at small `k` and [`erw_second_moment`] must be used.
pub fn erw_second_moment_closed(r: f64, n: usize) -> Result<f64> {
    check_probability("r", r)?;
    check_n_max(n)?;
    let gamma = 4.0 * r - 2.0;
    if gamma <= -1.0 {
        return Err(Error::ClosedFormUnavailable(format!(
            "gamma = {gamma} hits a pole of the gamma function; use the recursion"
        )));
    }
    let lead = ln_gamma(n as f64 + gamma) - ln_gamma(n as f64);
    let sum: NeumaierSum = (1..=n)
        .map(|k| {
            let kf = k as f64;
            (lead + ln_gamma(kf) - ln_gamma(kf + gamma)).exp()
        })
        .collect();
    Ok(sum.total())
}

/// Exact law of `T_n^0` as `(t, P(T_n^0 = t))` pairs with positive mass.
pub fn erw_law(r: f64, n: usize) -> Result<Vec<(i64, f64)>> {
    check_probability("r", r)?;
    check_n_max(n)?;
    let mut law = ErwLaw::new(r);
    while law.n < n {
        law.step();
    }
    Ok(law
        .probs
        .iter()
        .enumerate()
        .filter(|(_, &q)| q > 0.0)
        .map(|(j, &q)| (2 * j as i64 - n as i64, q))
        .collect())
}

/// Law of `T_n^0` stored by the number `j` of `+1` steps, `T = 2j - n`.
///
/// Masses below `1e-40` at the edges of the support are dropped, which
/// keeps the cost per step proportional to the bulk of the law rather
/// than to `n`.
#[derive(Debug, Clone)]
pub(crate) struct ErwLaw {
    r: f64,
    n: usize,
    probs: Vec<f64>,
    lo: usize,
    hi: usize,
}

const NEGLIGIBLE_MASS: f64 = 1e-40;

impl ErwLaw {
    pub(crate) fn new(r: f64) -> Self {
        // T_1 = 1: one up-step
        Self {
            r,
            n: 1,
            probs: vec![0.0, 1.0],
            lo: 1,
            hi: 1,
        }
    }

    /// Advances from `n` to `n + 1`.
    pub(crate) fn step(&mut self) {
        let nf = self.n as f64;
        let drift = (2.0 * self.r - 1.0) / (2.0 * nf);
        let up = |j: usize| (0.5 + drift * (2.0 * j as f64 - nf)).clamp(0.0, 1.0);
        self.probs.push(0.0);
        let p = &mut self.probs;
        let (lo, hi) = (self.lo, self.hi);
        p[hi + 1] = p[hi] * up(hi);
        for j in (lo + 1..=hi).rev() {
            p[j] = p[j] * (1.0 - up(j)) + p[j - 1] * up(j - 1);
        }
        p[lo] *= 1.0 - up(lo);
        self.n += 1;
        self.hi = hi + 1;
        while self.lo < self.hi && p[self.lo] < NEGLIGIBLE_MASS {
            p[self.lo] = 0.0;
            self.lo += 1;
        }
        while self.hi > self.lo && p[self.hi] < NEGLIGIBLE_MASS {
            p[self.hi] = 0.0;
            self.hi -= 1;
        }
    }

    /// `E g(|T_n|)` given `g` tabulated on `0..=n`.
    pub(crate) fn abs_expectation(&self, g: &[f64]) -> f64 {
        let n = self.n as i64;
        (self.lo..=self.hi)
            .map(|j| self.probs[j] * g[(2 * j as i64 - n).unsigned_abs() as usize])
            .collect::<NeumaierSum>()
            .total()
    }
}

/// Exact `E|T_k^0|^alpha` for `k = 1..=k_max` by dynamic programming.
pub fn erw_abs_moments(r: f64, alpha: f64, k_max: usize) -> Result<Vec<f64>> {
    check_probability("r", r)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("moment order {alpha} must be positive")));
    }
    check_n_max(k_max)?;
    let powers: Vec<f64> = (0..=k_max).map(|t| (t as f64).powf(alpha)).collect();
    let mut law = ErwLaw::new(r);
    let mut out = Vec::with_capacity(k_max);
    out.push(1.0);
    for _ in 1..k_max {
        law.step();
        out.push(law.abs_expectation(&powers));
    }
    Ok(out)
}

/// Monte Carlo estimate of a moment with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub se: f64,
    /// Whether `value` is exact rather than simulated.
    pub exact: bool,
}

/// Estimate of `E|T_k^0|^alpha` from `samples` independent paths.
///
/// Cases with a known value bypass simulation: `k = 1` gives 1, `r = 1`
/// gives `k^alpha` and `alpha = 2` uses the second-moment recursion.
pub fn estimate_abs_moment(r: f64, k: usize, alpha: f64, samples: usize, seed: u64) -> Result<MomentEstimate> {
    check_probability("r", r)?;
    check_alpha(alpha)?;
    check_n_max(k)?;
    let exact = |value| Ok(MomentEstimate { value, se: 0.0, exact: true });
    if k == 1 {
        return exact(1.0);
    }
    if r == 1.0 {
        return exact((k as f64).powf(alpha));
    }
    if alpha == 2.0 {
        return exact(erw_second_moment(r, k)?[k - 1]);
    }
    if samples < 1000 {
        return Err(Error::Domain(format!("need at least 1000 samples, got {samples}")));
    }
    let draws: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i, Stream::Aux);
            (erw_endpoint(r, k, &mut rng).unsigned_abs() as f64).powf(alpha)
        })
        .collect();
    let (value, se) = mc_mean_se(&draws)?;
    Ok(MomentEstimate { value, se, exact: false })
}

/// Draws `T_k^0` by tracking the number of up-steps; the law of the next
/// step only depends on that count.
pub fn erw_endpoint<R: Rng + ?Sized>(r: f64, k: usize, rng: &mut R) -> i64 {
    erw_trajectory(r, k, rng, |_, _| {})
}

/// Runs `T_1^0..T_k^0`, calling `visit(n, T_n)` for each `n`; returns `T_k^0`.
pub fn erw_trajectory<R: Rng + ?Sized, F: FnMut(usize, i64)>(r: f64, k: usize, rng: &mut R, mut visit: F) -> i64 {
    let mut ups = 1usize;
    visit(1, 1);
    for n in 1..k {
        let frac_up = ups as f64 / n as f64;
        let p_up = r * frac_up + (1.0 - r) * (1.0 - frac_up);
        if rng.random::<f64>() < p_up {
            ups += 1;
        }
        visit(n + 1, 2 * ups as i64 - (n + 1) as i64);
    }
    2 * ups as i64 - k as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    // all (U, eta) outcomes for the first n steps, each with its probability
    fn enumerate(r: f64, n: usize) -> Vec<(i64, f64)> {
        fn go(r: f64, n: usize, steps: &mut Vec<i64>, prob: f64, out: &mut Vec<(i64, f64)>) {
            let k = steps.len();
            if k == n {
                out.push((steps.iter().sum(), prob));
                return;
            }
            for u in 0..k {
                for (sign, q) in [(1, r), (-1, 1.0 - r)] {
                    steps.push(sign * steps[u]);
                    go(r, n, steps, prob * q / k as f64, out);
                    steps.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(r, n, &mut vec![1], 1.0, &mut out);
        out
    }

    fn enumerated_moment(r: f64, n: usize, f: impl Fn(i64) -> f64) -> f64 {
        enumerate(r, n).into_iter().map(|(t, q)| q * f(t)).sum()
    }

    #[test]
    fn spec_values() {
        let s = erw_second_moment(1.0, 50).unwrap();
        assert!(s.iter().enumerate().all(|(i, &m)| m == ((i + 1) * (i + 1)) as f64));
        assert_eq!(erw_second_moment(0.0, 2).unwrap()[1], 0.0);
        assert!((erw_second_moment(0.75, 3).unwrap()[2] - 5.5).abs() < 1e-14);
        let t = erw_fourth_moment(0.0, 2).unwrap();
        assert_eq!(t.fourth_at(2), 0.0);
        let t = erw_fourth_moment(1.0, 40).unwrap();
        assert!((1..=40).all(|n| t.fourth_at(n) == (n as f64).powi(4)));
    }

    #[test]
    fn recursions_match_enumeration() {
        for &r in &[0.0, 0.3, 0.75, 1.0] {
            let t = erw_fourth_moment(r, 5).unwrap();
            for n in 1..=5 {
                let m2 = enumerated_moment(r, n, |t| (t * t) as f64);
                let m4 = enumerated_moment(r, n, |t| (t * t * t * t) as f64);
                assert!((t.second_at(n) - m2).abs() < 1e-12, "r={r} n={n}");
                assert!((t.fourth_at(n) - m4).abs() < 1e-11, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn closed_form_matches_recursion() {
        for &r in &[0.3, 0.5, 0.75, 0.9, 1.0] {
            let rec = erw_second_moment(r, 1000).unwrap();
            for &n in &[1, 2, 7, 100, 1000] {
                let c = erw_second_moment_closed(r, n).unwrap();
                assert!((c / rec[n - 1] - 1.0).abs() < 1e-9, "r={r} n={n}");
            }
        }
        assert!(matches!(erw_second_moment_closed(0.2, 10), Err(Error::ClosedFormUnavailable(_))));
    }

    #[test]
    fn supercritical_growth_constant() {
        let r: f64 = 0.9;
        let gamma = 4.0 * r - 2.0;
        let c0 = 1.0 / ((gamma - 1.0) * ln_gamma(gamma).exp());
        let m = erw_second_moment_closed(r, 1000).unwrap();
        let ratio = m / (c0 * 1000f64.powf(gamma));
        assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn law_matches_enumeration() {
        for &r in &[0.2, 0.5, 0.9] {
            let law = erw_law(r, 4).unwrap();
            let total: f64 = law.iter().map(|x| x.1).sum();
            assert!((total - 1.0).abs() < 1e-14);
            for (t, q) in law {
                let e: f64 = enumerate(r, 4).into_iter().filter(|x| x.0 == t).map(|x| x.1).sum();
                assert!((q - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn abs_moments_exact_cases() {
        let m = erw_abs_moments(0.5, 1.0, 3).unwrap();
        assert_eq!(m[0], 1.0);
        assert!((m[2] - enumerated_moment(0.5, 3, |t| t.abs() as f64)).abs() < 1e-14);
        let m = erw_abs_moments(1.0, 1.3, 20).unwrap();
        assert!((m[19] - 20f64.powf(1.3)).abs() < 1e-10);
        let two = erw_abs_moments(0.7, 2.0, 300).unwrap();
        let rec = erw_second_moment(0.7, 300).unwrap();
        assert!((two[299] / rec[299] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mc_estimate() {
        assert_eq!(estimate_abs_moment(0.4, 1, 0.7, 0, 1).unwrap().value, 1.0);
        assert_eq!(estimate_abs_moment(1.0, 9, 0.5, 0, 1).unwrap().value, 3.0);
        let e = estimate_abs_moment(0.5, 3, 1.0, 200_000, 3).unwrap();
        let exact = enumerated_moment(0.5, 3, |t| t.abs() as f64);
        assert!(!e.exact);
        assert!((e.value - exact).abs() < 4.0 * e.se, "{} vs {exact}", e.value);
        assert!(estimate_abs_moment(0.5, 3, 1.0, 10, 3).is_err());
    }
}
