//! Empirical distributions, Kolmogorov-Smirnov distances, Monte Carlo
//! summaries and chi-square statistics.

use crate::error::{Error, Result};
use crate::special::NeumaierSum;

/// A non-empty sample sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    values: Vec<f64>,
}

impl EmpiricalSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("sample contains NaN".into()));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fraction of values `<= x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.values.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Sample quantile by the inverse ECDF.
    pub fn quantile(&self, q: f64) -> f64 {
        let m = self.len();
        let idx = ((q * m as f64).ceil() as usize).clamp(1, m) - 1;
        self.values[idx]
    }

    /// `sup_x |F_M(x) - F(x)|`, evaluated at the jump points from both sides.
    pub fn ks_to_cdf<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let m = self.len() as f64;
        let v = &self.values;
        let mut d: f64 = 0.0;
        let mut i = 0;
        while i < v.len() {
            // group ties so the ECDF jump is taken once
            let mut j = i;
            while j + 1 < v.len() && v[j + 1] == v[i] {
                j += 1;
            }
            let f = cdf(v[i]);
            let below = i as f64 / m;
            let above = (j + 1) as f64 / m;
            d = d.max((f - below).abs()).max((above - f).abs());
            i = j + 1;
        }
        d
    }
}

/// One-sample KS distance between `sample` and `cdf`.
pub fn ks_to_cdf<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64> {
    Ok(EmpiricalSample::new(sample.to_vec())?.ks_to_cdf(cdf))
}

/// Two-sample KS distance `sup_x |F_a(x) - F_b(x)|`.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = EmpiricalSample::new(a.to_vec())?;
    let b = EmpiricalSample::new(b.to_vec())?;
    Ok(two_sample_ks_sorted(&a, &b))
}

pub fn two_sample_ks_sorted(a: &EmpiricalSample, b: &EmpiricalSample) -> f64 {
    let (va, vb) = (a.values(), b.values());
    let (na, nb) = (va.len() as f64, vb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < va.len() || j < vb.len() {
        let x = match (va.get(i), vb.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < va.len() && va[i] <= x {
            i += 1;
        }
        while j < vb.len() && vb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Mean and standard error `s / sqrt(M)`.
pub fn mc_mean_se(sample: &[f64]) -> Result<(f64, f64)> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let m = sample.len() as f64;
    let mean = sample.iter().copied().collect::<NeumaierSum>().total() / m;
    if sample.len() == 1 {
        return Ok((mean, 0.0));
    }
    let ss = sample
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .collect::<NeumaierSum>()
        .total();
    let var = ss / (m - 1.0);
    Ok((mean, (var / m).sqrt()))
}

/// Pearson statistic of integer `sample` against `probs` on `support`.
///
/// Values outside the support are an error. Every expected count must be at
/// least 5.
pub fn chi_square_support(sample: &[i64], support: &[i64], probs: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if support.len() != probs.len() {
        return Err(Error::LengthMismatch {
            left: support.len(),
            right: probs.len(),
        });
    }
    let counts = tally(sample, support)?;
    let m = sample.len() as f64;
    let mut stat = 0.0;
    for (cell, (&c, &p)) in counts.iter().zip(probs).enumerate() {
        let e = m * p;
        if e < 5.0 {
            return Err(Error::SparseCell { cell, expected: e });
        }
        stat += (c as f64 - e).powi(2) / e;
    }
    Ok(stat)
}

/// Two-sample chi-square homogeneity statistic on a finite support.
///
/// Cells empty in both samples are skipped; any other cell whose pooled
/// expected count is below 5 in either sample is an error.
pub fn chi_square_homogeneity(a: &[i64], b: &[i64], support: &[i64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let ca = tally(a, support)?;
    let cb = tally(b, support)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let total = na + nb;
    let mut stat = 0.0;
    for cell in 0..support.len() {
        let pooled = (ca[cell] + cb[cell]) as f64;
        if pooled == 0.0 {
            continue;
        }
        let ea = na * pooled / total;
        let eb = nb * pooled / total;
        if ea < 5.0 || eb < 5.0 {
            return Err(Error::SparseCell {
                cell,
                expected: ea.min(eb),
            });
        }
        stat += (ca[cell] as f64 - ea).powi(2) / ea + (cb[cell] as f64 - eb).powi(2) / eb;
    }
    Ok(stat)
}

fn tally(sample: &[i64], support: &[i64]) -> Result<Vec<usize>> {
    let mut counts = vec![0usize; support.len()];
    for &x in sample {
        let cell = support
            .iter()
            .position(|&s| s == x)
            .ok_or_else(|| Error::Domain(format!("value {x} outside the support")))?;
        counts[cell] += 1;
    }
    Ok(counts)
}

/// Whether `|d_{j+1}| < |d_j|` for every pair of successive differences.
pub fn differences_shrink(seq: &[f64]) -> bool {
    let diffs: Vec<f64> = seq.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    diffs.windows(2).all(|w| w[1] < w[0])
}

/// Whether every element of `seq` lies in `[lo, hi]`.
pub fn bounded_within(seq: &[f64], lo: f64, hi: f64) -> bool {
    seq.iter().all(|&x| x >= lo && x <= hi)
}
