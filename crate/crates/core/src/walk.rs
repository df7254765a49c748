//! Exact simulation of the elephant random walk and the unbalanced
//! step-reinforced walk from a [`RandomnessTape`].

use std::io::Write;

use rand::Rng;

use crate::error::{check_probability, Error, Result};
use crate::special::NeumaierSum;
use crate::steps::StepSource;
use crate::tape::RandomnessTape;

/// Elephant random walk with `X_1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErwPath {
    pub steps: Vec<i8>,
    pub sums: Vec<i64>,
}

impl ErwPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `T_n`.
    pub fn last(&self) -> i64 {
        *self.sums.last().expect("non-empty path")
    }
}

/// Path of the unbalanced step-reinforced walk.
///
/// Besides the steps and partial sums, the path records for every `k` the
/// fresh draw it descends from (`origin[k-1] = j`) and the accumulated sign,
/// so that `X_k = sign[k-1] * xi_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkPath {
    pub steps: Vec<f64>,
    pub sums: Vec<f64>,
    pub step_values: Vec<f64>,
    pub origin: Vec<u32>,
    pub sign: Vec<i8>,
}

impl WalkPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `T_n`.
    pub fn last(&self) -> f64 {
        *self.sums.last().expect("non-empty path")
    }

    /// Writes `k,X_k,T_k` rows with a header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,X_k,T_k")?;
        for (k, (x, t)) in self.steps.iter().zip(&self.sums).enumerate() {
            writeln!(out, "{},{:?},{:?}", k + 1, x, t)?;
        }
        Ok(())
    }
}

/// Simulates `T_1^0, .., T_n^0` using the `(U, eta)` part of the tape.
///
/// The `r` argument is only validated; the tape already encodes it.
pub fn simulate_erw(r: f64, n: usize, tape: &RandomnessTape) -> Result<ErwPath> {
    check_probability("r", r)?;
    if n == 0 {
        return Err(Error::EmptyPath);
    }
    tape.require(n)?;
    let mut steps = Vec::with_capacity(n);
    let mut sums = Vec::with_capacity(n);
    steps.push(1i8);
    sums.push(1i64);
    for k in 2..=n {
        let parent = steps[tape.parent(k) - 1];
        let x = if tape.eta(k) { parent } else { -parent };
        steps.push(x);
        sums.push(sums[k - 2] + x as i64);
    }
    Ok(ErwPath { steps, sums })
}

/// Simulates `T_1, .., T_n` from the tape and pre-drawn steps
/// `xi_1, .., xi_n` (only the fresh ones are read, all are stored).
pub fn simulate_unbalanced_walk(tape: &RandomnessTape, step_values: Vec<f64>) -> Result<WalkPath> {
    let n = step_values.len();
    if n == 0 {
        return Err(Error::EmptyPath);
    }
    tape.require(n)?;
    let mut steps = Vec::with_capacity(n);
    let mut origin = Vec::with_capacity(n);
    let mut sign = Vec::with_capacity(n);
    steps.push(step_values[0]);
    origin.push(1u32);
    sign.push(1i8);
    for k in 2..=n {
        if tape.eps(k) {
            let u = tape.parent(k) - 1;
            let (x, o, s) = (steps[u], origin[u], sign[u]);
            if tape.eta(k) {
                steps.push(x);
                sign.push(s);
            } else {
                steps.push(-x);
                sign.push(-s);
            }
            origin.push(o);
        } else {
            steps.push(step_values[k - 1]);
            origin.push(k as u32);
            sign.push(1);
        }
    }
    let mut acc = NeumaierSum::default();
    let sums = steps
        .iter()
        .map(|&x| {
            acc.add(x);
            acc.total()
        })
        .collect();
    Ok(WalkPath {
        steps,
        sums,
        step_values,
        origin,
        sign,
    })
}

/// Draws `xi_1..xi_n` from `source` and runs [`simulate_unbalanced_walk`].
pub fn simulate_walk<R: Rng + ?Sized>(
    source: &StepSource,
    n: usize,
    tape: &RandomnessTape,
    step_rng: &mut R,
) -> Result<WalkPath> {
    source.validate()?;
    let xi = source.draw(n, step_rng);
    simulate_unbalanced_walk(tape, xi)
}
