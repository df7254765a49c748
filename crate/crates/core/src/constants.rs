//! Limit constants of the percolation weights and their rate functions.
//!
//! The main object is
//!
//! ```text
//! c(alpha, p, r) = ((1 - p) / p) * sum_{k>=1} E|T_k^0|^alpha * B(k, 1 + 1/p),
//! ```
//!
//! the almost sure limit of `n^-1 sum_k |W_nk|^alpha`. Its terms decay like
//! a power of `k`, often slowly (`k^-1.4` at `p = 0.5, r = 0.9`), so plain
//! truncation is hopeless at `1e-6`. Partial sums are taken at `K = 2^j`
//! and extrapolated to `K = infinity` by least squares on the known
//! asymptotic expansion of the tail; the spread between fits ending at
//! consecutive levels is the reported tail bound.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, check_probability, Error, Result};
use crate::moments::{erw_fourth_moment, erw_trajectory, ErwLaw};
use crate::quadrature::integrate;
use crate::seed::{stream_rng, Stream};
use crate::special::{ln_beta, ln_gamma, zeta_negative, NeumaierSum};
use crate::stats::mc_mean_se;

const TIE: f64 = 1e-12;

/// Moment growth `a_r(n)`: `n`, `n log n` or `n^(4r-2)` as `r` is below,
/// at or above `3/4`.
pub fn rate_a(r: f64, n: f64) -> f64 {
    if (r - 0.75).abs() <= TIE {
        n * n.ln()
    } else if r < 0.75 {
        n
    } else {
        n.powf(4.0 * r - 2.0)
    }
}

/// Growth `b_l(n)` of `Z_l(n)`: `n^(lp)`, `n log n` or `n` as `lp` is
/// above, at or below 1.
pub fn rate_b(p: f64, l: f64, n: f64) -> f64 {
    let lp = l * p;
    if (lp - 1.0).abs() <= TIE {
        n * n.ln()
    } else if lp > 1.0 {
        n.powf(lp)
    } else {
        n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFunctions {
    pub a: f64,
    pub b: f64,
}

/// Both rates at `n`.
pub fn rate_functions(r: f64, p: f64, l: f64, n: f64) -> Result<RateFunctions> {
    check_probability("r", r)?;
    check_probability("p", p)?;
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Domain(format!("rate argument {n} must be positive")));
    }
    Ok(RateFunctions {
        a: rate_a(r, n),
        b: rate_b(p, l, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantMethod {
    ExactSeries,
    McSeries,
    ClosedForm,
    Integral,
}

/// A computed constant with an error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantResult {
    pub value: f64,
    /// Last index summed explicitly.
    pub truncation_k: usize,
    pub tail_bound: f64,
    pub method: ConstantMethod,
}

/// `c(2, p, r) = 1 / (1 - (4r - 2) p)`.
pub fn constant_closed_c2(p: f64, r: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("r", r)?;
    let d = 1.0 - (4.0 * r - 2.0) * p;
    if d <= 0.0 {
        return Err(Error::Domain(format!("(4r-2)p = {} is not below 1", 1.0 - d)));
    }
    Ok(1.0 / d)
}

fn check_open_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "must lie in (0, 1)",
        })
    }
}

fn check_convergent(alpha: f64, p: f64, r: f64) -> Result<()> {
    let rate = (2.0 * r - 1.0) * alpha * p;
    if rate >= 1.0 {
        Err(Error::Divergent(format!("(2r-1) alpha p = {rate} is not below 1")))
    } else {
        Ok(())
    }
}

/// Powers `K^-e` (and `K^-e ln K`) describing how partial sums approach
/// their limit.
#[derive(Debug, Clone, Default)]
struct TailBasis {
    powers: Vec<f64>,
    log_powers: Vec<f64>,
}

impl TailBasis {
    fn add_family(&mut self, lead: f64, spacing: f64, count: usize) {
        for j in 0..count {
            push_exponent(&mut self.powers, lead + spacing * j as f64);
        }
    }

    fn add_log_family(&mut self, lead: f64, spacing: f64, count: usize) {
        for j in 0..count {
            push_exponent(&mut self.log_powers, lead + spacing * j as f64);
        }
    }

    fn columns(&self) -> usize {
        1 + self.powers.len() + self.log_powers.len()
    }

    fn row(&self, k: f64) -> Vec<f64> {
        let mut row = vec![1.0];
        row.extend(self.powers.iter().map(|e| k.powf(-e)));
        row.extend(self.log_powers.iter().map(|e| k.powf(-e) * k.ln()));
        row
    }
}

fn push_exponent(v: &mut Vec<f64>, e: f64) {
    if e > 1e-9 && v.iter().all(|x| (x - e).abs() > 1e-9) {
        v.push(e);
    }
}

// intercept of the least-squares fit of `sums` against the basis rows at `ks`
fn extrapolate(basis: &TailBasis, ks: &[f64], sums: &[f64]) -> f64 {
    let cols = basis.columns();
    let mut a = DMatrix::<f64>::zeros(ks.len(), cols);
    for (i, &k) in ks.iter().enumerate() {
        for (j, v) in basis.row(k).into_iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    // equilibrate columns before solving
    let scale: Vec<f64> = (0..cols)
        .map(|j| a.column(j).iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE))
        .collect();
    for (j, s) in scale.iter().enumerate() {
        a.column_mut(j).scale_mut(1.0 / s);
    }
    let b = DVector::from_column_slice(sums);
    let svd = a.svd(true, true);
    let cutoff = 1e-13 * svd.singular_values.max();
    match svd.solve(&b, cutoff) {
        Ok(x) => x[0] / scale[0],
        Err(_) => *sums.last().expect("non-empty"),
    }
}

/// Sums `terms` and extrapolates the partial sums at `K = 2^j`.
///
/// Stops at the first level where the tail bound drops below `tol`, or at
/// `k_max`. `term(k)` is called for `k = 1, 2, ..` in order.
fn extrapolated_series<F: FnMut(usize) -> f64>(
    mut term: F,
    basis: &TailBasis,
    tol: f64,
    k_max: usize,
    method: ConstantMethod,
) -> ConstantResult {
    let levels = basis.columns() + 2;
    let mut ks = Vec::new();
    let mut sums = Vec::new();
    let mut acc = NeumaierSum::default();
    let mut next_level = 1usize;
    let mut best = None;
    for k in 1..=k_max {
        acc.add(term(k));
        if k != next_level {
            continue;
        }
        next_level *= 2;
        ks.push(k as f64);
        sums.push(acc.total());
        // skip the pre-asymptotic levels K < 8
        let usable = ks.iter().filter(|&&x| x >= 8.0).count();
        if usable < levels + 1 {
            continue;
        }
        let n = ks.len();
        let value = extrapolate(basis, &ks[n - levels..], &sums[n - levels..]);
        let previous = extrapolate(basis, &ks[n - 1 - levels..n - 1], &sums[n - 1 - levels..n - 1]);
        let tail_bound = (value - previous).abs() + 1e-14 * value.abs().max(1.0);
        let result = ConstantResult {
            value,
            truncation_k: k,
            tail_bound,
            method,
        };
        best = Some(result);
        if tail_bound < tol {
            break;
        }
    }
    best.unwrap_or_else(|| {
        // too few levels to extrapolate: report the raw partial sum
        let value = acc.total();
        ConstantResult {
            value,
            truncation_k: k_max,
            tail_bound: f64::INFINITY,
            method,
        }
    })
}

/// Recursive `B(k, b)` for `k = 1, 2, ..` from `B(k+1, b) = B(k, b) k / (k + b)`.
struct BetaSequence {
    b: f64,
    k: usize,
    value: f64,
}

impl BetaSequence {
    fn new(b: f64) -> Self {
        Self {
            b,
            k: 0,
            value: f64::NAN,
        }
    }

    fn at(&mut self, k: usize) -> f64 {
        debug_assert_eq!(k, self.k + 1);
        // re-anchor with log-gamma every 4096 steps to stop drift
        self.value = if k == 1 {
            1.0 / self.b
        } else if k.is_multiple_of(4096) {
            ln_beta(k as f64, self.b).exp()
        } else {
            let prev = (k - 1) as f64;
            self.value * prev / (prev + self.b)
        };
        self.k = k;
        self.value
    }
}

/// Largest level used for the exact-moment series.
const SECOND_MOMENT_K_MAX: usize = 1 << 22;
const ABS_MOMENT_K_MAX: usize = 1 << 15;

/// `c(alpha, p, r)` from exact moments of `T_k^0`.
///
/// `alpha = 2` and `r = 1` use closed moment formulas; other cases run the
/// dynamic program for the law of `T_k^0`, which costs `O(K^2)`.
pub fn constant_series(alpha: f64, p: f64, r: f64, tol: f64) -> Result<ConstantResult> {
    check_alpha(alpha)?;
    check_open_p(p)?;
    check_probability("r", r)?;
    check_convergent(alpha, p, r)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let b = 1.0 / p;
    let weight = (1.0 - p) / p;
    let gamma = 4.0 * r - 2.0;
    let mut beta = BetaSequence::new(1.0 + b);
    let mut basis = TailBasis::default();

    if r == 1.0 {
        basis.add_family(b - alpha, 1.0, 4);
        let term = |k: usize| weight * (k as f64).powf(alpha) * beta.at(k);
        return Ok(extrapolated_series(term, &basis, tol, SECOND_MOMENT_K_MAX, ConstantMethod::ExactSeries));
    }
    if alpha == 2.0 {
        basis.add_family(b - 1.0, 1.0, 4);
        basis.add_family(b - gamma, 1.0, 4);
        if (gamma - 1.0).abs() <= TIE {
            basis.add_log_family(b - 1.0, 1.0, 3);
        }
        let mut m = 1.0;
        let term = |k: usize| {
            if k > 1 {
                let n = (k - 1) as f64;
                m = m * (n + gamma) / n + 1.0;
            }
            weight * m * beta.at(k)
        };
        return Ok(extrapolated_series(term, &basis, tol, SECOND_MOMENT_K_MAX, ConstantMethod::ExactSeries));
    }
    abs_moment_series(alpha, p, r, tol, ABS_MOMENT_K_MAX)
}

fn abs_moment_basis(alpha: f64, p: f64, r: f64) -> TailBasis {
    let b = 1.0 / p;
    let gamma = 4.0 * r - 2.0;
    let diffusive = b - alpha / 2.0;
    let mut basis = TailBasis::default();
    basis.add_family(diffusive, 0.5, 5);
    if r > 0.75 + TIE {
        basis.add_family(b - alpha * (2.0 * r - 1.0), 0.5, 4);
    } else if (r - 0.75).abs() <= TIE {
        basis.add_log_family(diffusive, 0.5, 3);
    } else if (gamma).abs() > TIE {
        // memory correction of relative order k^(gamma - 1)
        basis.add_family(diffusive + 1.0 - gamma, 0.5, 3);
    }
    basis
}

fn abs_moment_series(alpha: f64, p: f64, r: f64, tol: f64, k_max: usize) -> Result<ConstantResult> {
    let weight = (1.0 - p) / p;
    let basis = abs_moment_basis(alpha, p, r);
    let mut beta = BetaSequence::new(1.0 + 1.0 / p);
    let mut law = ErwLaw::new(r);
    let mut powers: Vec<f64> = vec![0.0, 1.0];
    let term = |k: usize| {
        if k > 1 {
            law.step();
            powers.push((k as f64).powf(alpha));
        }
        weight * law.abs_expectation(&powers) * beta.at(k)
    };
    Ok(extrapolated_series(term, &basis, tol, k_max, ConstantMethod::ExactSeries))
}

/// `c(alpha, p, r)` with `E|T_k^0|^alpha` estimated from `paths` simulated
/// walks of length `k_max`.
///
/// Each path yields `Y = ((1-p)/p) sum_{k<=k_max} |T_k^0|^alpha B(k, 1+1/p)`;
/// the value is the mean of `Y` plus a tail estimate beyond `k_max`. The
/// tail is bounded through `E|T|^alpha <= (E T^4)^(alpha/4)` and the
/// reported bound adds three standard errors.
pub fn constant_series_mc(alpha: f64, p: f64, r: f64, k_max: usize, paths: usize, seed: u64) -> Result<ConstantResult> {
    check_alpha(alpha)?;
    check_open_p(p)?;
    check_probability("r", r)?;
    check_convergent(alpha, p, r)?;
    if k_max < 16 || paths < 2 {
        return Err(Error::Domain("need k_max >= 16 and at least 2 paths".into()));
    }
    let weight = (1.0 - p) / p;
    let b = 1.0 + 1.0 / p;
    let coeff: Vec<f64> = (1..=k_max).map(|k| weight * ln_beta(k as f64, b).exp()).collect();
    let ys: Vec<f64> = (0..paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i, Stream::Aux);
            let mut acc = NeumaierSum::default();
            erw_trajectory(r, k_max, &mut rng, |k, t| {
                acc.add(coeff[k - 1] * (t.unsigned_abs() as f64).powf(alpha));
            });
            acc.total()
        })
        .collect();
    let (mean, se) = mc_mean_se(&ys)?;
    let tail = lyapunov_tail(alpha, p, r, k_max)?;
    Ok(ConstantResult {
        value: mean + 0.5 * tail,
        truncation_k: k_max,
        tail_bound: 3.0 * se + 0.5 * tail,
        method: ConstantMethod::McSeries,
    })
}

// Upper bound for sum_{k > k_max} of the terms, using fourth moments up to
// 64 k_max and a power-law integral beyond.
fn lyapunov_tail(alpha: f64, p: f64, r: f64, k_max: usize) -> Result<f64> {
    let far = 64 * k_max;
    let table = erw_fourth_moment(r, far)?;
    let weight = (1.0 - p) / p;
    let b = 1.0 + 1.0 / p;
    let term = |k: usize| weight * table.fourth_at(k).powf(alpha / 4.0) * ln_beta(k as f64, b).exp();
    let mid: NeumaierSum = (k_max + 1..=far).map(term).collect();
    // local decay exponent at the far end
    let (t1, t2) = (term(far / 2), term(far));
    let s = (t1 / t2).ln() / 2f64.ln();
    let beyond = if s > 1.0 {
        term(far) * far as f64 / (s - 1.0)
    } else {
        f64::INFINITY
    };
    Ok(mid.total() + beyond)
}

/// `y^b * sum_k k^alpha (1-y)^(k-1)` for `0 < y <= 1`.
///
/// Direct summation away from `y = 0`; close to it, the polylogarithm
/// expansion `Li_s(e^mu) = Gamma(1-s) (-mu)^(s-1) + sum_j zeta(s-j) mu^j / j!`
/// with `s = -alpha` and `mu = ln(1-y)`. The leading term is combined with
/// `y^b` in log space so that neither factor overflows.
fn scaled_power_generating(alpha: f64, b: f64, y: f64) -> f64 {
    let z = 1.0 - y;
    if y >= 0.05 {
        let mut acc = NeumaierSum::default();
        let mut zk = 1.0;
        let mut k = 1usize;
        loop {
            let t = (k as f64).powf(alpha) * zk;
            acc.add(t);
            if t < 1e-18 * acc.total() && k as f64 * y > alpha + 1.0 {
                break;
            }
            zk *= z;
            k += 1;
        }
        return y.powf(b) * acc.total();
    }
    let mu = (-y).ln_1p();
    let lead = (b * y.ln() + ln_gamma(1.0 + alpha) - (1.0 + alpha) * (-mu).ln()).exp();
    lead / z + y.powf(b) * polylog_regular_part(alpha, mu) / z
}

// sum_j zeta(-alpha - j) mu^j / j!
fn polylog_regular_part(alpha: f64, mu: f64) -> f64 {
    let mut acc = 0.0;
    let mut fact = 1.0;
    let mut mu_pow = 1.0;
    for j in 0..30 {
        if j > 0 {
            fact *= j as f64;
            mu_pow *= mu;
        }
        let s = -alpha - j as f64;
        // zeta vanishes at the negative even integers
        let zeta = if s.fract() == 0.0 && (s as i64) % 2 == 0 { 0.0 } else { zeta_negative(s) };
        let t = zeta * mu_pow / fact;
        acc += t;
        if j > 3 && t.abs() < 1e-18 * acc.abs().max(1e-300) {
            break;
        }
    }
    acc
}

/// The integral form of `c(alpha, p, 1)`:
/// `int_0^(1-p) sum_k k^alpha (1 - (x/(1-p))^p)^(k-1) (x/(1-p))^p dx`.
///
/// After `y = (x/(1-p))^p` the integrand is `((1-p)/p) y^(1/p) G(1-y)` with
/// `G(z) = sum_k k^alpha z^(k-1)`, which behaves like `y^(1/p-1-alpha)` at
/// 0. A further `y = u^q` with `q = 2/(1/p - alpha)` removes that
/// singularity.
pub fn businger_integral(alpha: f64, p: f64, tol: f64) -> Result<ConstantResult> {
    check_alpha(alpha)?;
    check_open_p(p)?;
    if alpha * p >= 1.0 {
        return Err(Error::Divergent(format!("alpha p = {} is not below 1", alpha * p)));
    }
    let b = 1.0 / p;
    let q = 2.0 / (b - alpha);
    let weight = (1.0 - p) / p;
    let f = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let y = u.powf(q);
        if y >= 1.0 {
            return 0.0;
        }
        weight * q * u.powf(q - 1.0) * scaled_power_generating(alpha, b, y)
    };
    let r = integrate(f, 0.0, 1.0, 0.1 * tol, 1e-13, 5000);
    Ok(ConstantResult {
        value: r.value,
        truncation_k: r.evaluations,
        tail_bound: r.error,
        method: ConstantMethod::Integral,
    })
}

/// Limit of `((1-p)/p) sum_k k B(k, 1 + 1/p)`, which equals 1.
///
/// The terms decay like `k^(-1/p)`, so for `p` near 1 the partial sums
/// approach 1 very slowly; the limit is extrapolated like in
/// [`constant_series`].
pub fn component_mass_identity(p: f64, tol: f64) -> Result<ConstantResult> {
    check_open_p(p)?;
    let b = 1.0 / p;
    let weight = (1.0 - p) / p;
    let mut basis = TailBasis::default();
    basis.add_family(b - 1.0, 1.0, 4);
    let mut beta = BetaSequence::new(1.0 + b);
    let term = |k: usize| weight * k as f64 * beta.at(k);
    Ok(extrapolated_series(term, &basis, tol, SECOND_MOMENT_K_MAX, ConstantMethod::ExactSeries))
}

/// Partial sums `((1-p)/p) sum_{k<=K} k B(k, 1 + 1/p)` for `K = 1..=k_max`.
pub fn component_mass_partial_sums(p: f64, k_max: usize) -> Result<Vec<f64>> {
    check_open_p(p)?;
    let weight = (1.0 - p) / p;
    let mut beta = BetaSequence::new(1.0 + 1.0 / p);
    let mut acc = NeumaierSum::default();
    Ok((1..=k_max)
        .map(|k| {
            acc.add(weight * k as f64 * beta.at(k));
            acc.total()
        })
        .collect())
}

/// Limit frequency of components of size `k`: `((1-p)/p) B(k, 1 + 1/p)`.
pub fn component_frequency(p: f64, k: usize) -> Result<f64> {
    check_open_p(p)?;
    if k == 0 {
        return Err(Error::Domain("component size must be positive".into()));
    }
    Ok((1.0 - p) / p * ln_beta(k as f64, 1.0 + 1.0 / p).exp())
}

/// Rows `alpha,p,r,value,tail_bound,k_star`.
pub fn write_constants_csv<W: std::io::Write>(mut out: W, rows: &[(f64, f64, f64, ConstantResult)]) -> std::io::Result<()> {
    writeln!(out, "alpha,p,r,value,tail_bound,k_star")?;
    for (alpha, p, r, c) in rows {
        writeln!(out, "{:?},{:?},{:?},{:?},{:?},{}", alpha, p, r, c.value, c.tail_bound, c.truncation_k)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates() {
        assert_eq!(rate_a(0.5, 100.0), 100.0);
        assert!((rate_a(0.75, std::f64::consts::E) - std::f64::consts::E).abs() < 1e-15);
        assert!((rate_a(0.9, 100.0) - 100f64.powf(1.6)).abs() < 1e-9);
        assert_eq!(rate_b(0.5, 2.0, 100.0), 100.0 * 100f64.ln());
        assert_eq!(rate_b(0.5, 1.0, 100.0), 100.0);
        assert!((rate_b(0.5, 3.0, 100.0) - 100f64.powf(1.5)).abs() < 1e-9);
    }

    #[test]
    fn closed_c2() {
        assert!((constant_closed_c2(0.4, 1.0).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(constant_closed_c2(0.3, 0.5).unwrap(), 1.0);
        assert!((constant_closed_c2(0.5, 0.6).unwrap() - 1.25).abs() < 1e-12);
        assert!(constant_closed_c2(0.5, 1.0).is_err());
    }

    #[test]
    fn series_matches_closed_form() {
        for &p in &[0.1, 0.3, 0.5] {
            for &r in &[0.0, 0.25, 0.5, 0.75, 0.9] {
                if (4.0 * r - 2.0) * p >= 0.9 {
                    continue;
                }
                let c = constant_series(2.0, p, r, 1e-9).unwrap();
                let exact = constant_closed_c2(p, r).unwrap();
                assert!((c.value - exact).abs() < 1e-6, "p={p} r={r} got {} want {exact}", c.value);
                assert!((c.value - exact).abs() <= c.tail_bound.max(1e-9), "p={p} r={r}");
            }
        }
        let c = constant_series(2.0, 0.4, 1.0, 1e-9).unwrap();
        assert!((c.value - 5.0).abs() < 1e-6);
    }

    #[test]
    fn dynamic_program_series_matches_closed_form() {
        // force the general path with alpha = 2
        for &(p, r) in &[(0.5, 0.5), (0.5, 0.3), (0.4, 0.6), (0.5, 0.9)] {
            let c = abs_moment_series(2.0, p, r, 1e-8, 1 << 15).unwrap();
            let exact = constant_closed_c2(p, r).unwrap();
            assert!((c.value - exact).abs() < 1e-5, "p={p} r={r} got {} want {exact}", c.value);
        }
    }

    #[test]
    fn divergent_region() {
        assert!(matches!(constant_series(2.0, 0.5, 1.0, 1e-6), Err(Error::Divergent(_))));
        assert!(matches!(constant_series(1.5, 0.8, 1.0, 1e-6), Err(Error::Divergent(_))));
        assert!(constant_series(1.0, 1.0, 0.5, 1e-6).is_err());
        assert!(constant_series(1.0, 0.0, 0.5, 1e-6).is_err());
    }

    #[test]
    fn cauchy_constant() {
        let c = constant_series(1.0, 0.5, 0.5, 1e-9).unwrap();
        // the simple random walk case lands on pi/2 - 1
        assert!((c.value - (std::f64::consts::FRAC_PI_2 - 1.0)).abs() < 1e-7, "{c:?}");
        let r1 = constant_series(1.0, 0.5, 1.0, 1e-9).unwrap();
        assert!((r1.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mc_series_brackets_exact() {
        let exact = constant_series(1.0, 0.5, 0.5, 1e-9).unwrap().value;
        let mc = constant_series_mc(1.0, 0.5, 0.5, 512, 20_000, 3).unwrap();
        assert!((mc.value - exact).abs() <= mc.tail_bound, "{mc:?} vs {exact}");
        assert!(mc.tail_bound < 1e-2);
    }

    #[test]
    fn tail_bound_is_honest() {
        for &(alpha, p, r) in &[(2.0, 0.5, 0.9), (1.0, 0.5, 0.5), (1.5, 0.4, 0.8)] {
            let c = constant_series(alpha, p, r, 1e-7).unwrap();
            // one more level of summation
            let finer = constant_series(alpha, p, r, c.tail_bound * 1e-3).unwrap();
            assert!((finer.value - c.value).abs() <= c.tail_bound, "{alpha} {p} {r}: {c:?} {finer:?}");
        }
    }

    #[test]
    fn businger_examples() {
        let series = constant_series(1.0, 0.5, 1.0, 1e-10).unwrap().value;
        let bi = businger_integral(1.0, 0.5, 1e-8).unwrap();
        assert!((bi.value - series).abs() < 1e-4, "{} vs {series}", bi.value);
        let bi = businger_integral(2.0, 0.25, 1e-8).unwrap();
        assert!((bi.value - 2.0).abs() < 1e-4, "{}", bi.value);
        let bi = businger_integral(1.3, 0.6, 1e-8).unwrap();
        let series = constant_series(1.3, 0.6, 1.0, 1e-10).unwrap().value;
        assert!((bi.value - series).abs() < 1e-4, "{} vs {series}", bi.value);
        assert!(businger_integral(0.05, 0.5, 1e-8).unwrap().value > 0.0);
        assert!(businger_integral(2.0, 0.5, 1e-8).is_err());
    }

    #[test]
    fn generating_function_branches_agree() {
        for &alpha in &[0.5, 1.0, 1.7, 2.0] {
            let y: f64 = 0.05;
            let direct = scaled_power_generating(alpha, 1.5, y);
            let mu = (-y).ln_1p();
            let li = (ln_gamma(1.0 + alpha) - (1.0 + alpha) * (-mu).ln()).exp() + polylog_regular_part(alpha, mu);
            let series = y.powf(1.5) * li / (1.0 - y);
            assert!((series / direct - 1.0).abs() < 1e-10, "alpha={alpha}");
        }
    }

    #[test]
    fn mass_identity() {
        for &p in &[0.2, 0.5, 0.8] {
            let c = component_mass_identity(p, 1e-10).unwrap();
            assert!((c.value - 1.0).abs() < 1e-8, "p={p} {c:?}");
        }
        let partial = component_mass_partial_sums(0.5, 3).unwrap();
        assert!((partial[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!(partial.iter().all(|&s| s < 1.0));
        assert!((component_frequency(0.5, 2).unwrap() - 1.0 / 12.0).abs() < 1e-14);
        assert!((component_frequency(0.5, 3).unwrap() - 1.0 / 30.0).abs() < 1e-14);
    }
}
