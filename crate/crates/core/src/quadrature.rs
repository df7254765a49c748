#![allow(clippy::excessive_precision)]

//! Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).abs();
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]` until the estimated error drops below
/// `max(abs_tol, rel_tol * |value|)` or `max_panels` is reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Integral {
    integrate_panels(&f, &[a, b], abs_tol, rel_tol, max_panels)
}

/// Like [`integrate`], starting from the given breakpoints.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Integral {
    let mut heap: BinaryHeap<Panel> = breaks.windows(2).map(|w| gk15(f, w[0], w[1])).collect();
    let mut evaluations = 15 * heap.len();
    let (mut value, mut error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    loop {
        if error <= abs_tol.max(rel_tol * value.abs()) || heap.len() >= max_panels {
            let value = heap.iter().map(|p| p.value).collect::<crate::special::NeumaierSum>().total();
            let error = heap.iter().map(|p| p.error).sum();
            return Integral { value, error, evaluations };
        }
        let worst = heap.pop().expect("non-empty panel set");
        if worst.error == 0.0 {
            heap.push(worst);
            let value = heap.iter().map(|p| p.value).collect::<crate::special::NeumaierSum>().total();
            return Integral { value, error: 0.0, evaluations };
        }
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further in floating point
            error -= worst.error;
            heap.push(Panel { error: 0.0, ..worst });
            continue;
        }
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evaluations += 30;
    }
}
