//! Random recursive tree with Bernoulli bond percolation driven by the same
//! tape as the walk.
//!
//! Vertex `k >= 2` attaches to `U_k`. The edge `(U_k, k)` is open exactly when
//! step `k` is a copy (`eps_k = 1`), so components are the families of steps
//! sharing one fresh draw. Roots are vertex 1 and every `k` with `eps_k = 0`.
//! Signs propagate from the root through `eta`, and the signed component sum
//! `W_nj` is the coefficient of `xi_j` in `T_n`.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::rate_b;
use crate::error::{check_probability, Error, Result};
use crate::seed::{stream_rng, Stream};
use crate::special::NeumaierSum;
use crate::tape::RandomnessTape;

/// `parent[k-1] = U_k`; the root stores 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursiveTree {
    pub parent: Vec<u32>,
}

impl RecursiveTree {
    pub fn from_tape(n: usize, tape: &RandomnessTape) -> Result<Self> {
        tape.require(n)?;
        let mut parent = Vec::with_capacity(n);
        parent.push(0);
        parent.extend((2..=n).map(|k| tape.parent(k) as u32));
        Ok(Self { parent })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// Percolation clusters with signed weights.
///
/// All per-vertex arrays are indexed by `k - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PercolationForest {
    /// Edge `(U_k, k)` open; always `false` for vertex 1.
    pub open: Vec<bool>,
    pub root_of: Vec<u32>,
    pub sign: Vec<i8>,
    /// `W_nk`, zero for non-roots.
    pub weights: Vec<i64>,
    /// `N_k(n)`, zero for non-roots.
    pub component_sizes: Vec<u32>,
    nu: BTreeMap<usize, usize>,
}

impl PercolationForest {
    /// The forest on the single vertex 1.
    pub fn singleton() -> Self {
        let mut nu = BTreeMap::new();
        nu.insert(1, 1);
        Self {
            open: vec![false],
            root_of: vec![1],
            sign: vec![1],
            weights: vec![1],
            component_sizes: vec![1],
            nu,
        }
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }

    /// Adds vertex `n + 1` attached to `parent`.
    ///
    /// A copy step (`eps = true`) moves one component from size `k` to `k + 1`;
    /// a fresh step adds a singleton.
    pub fn push(&mut self, parent: usize, eps: bool, eta: bool) -> Result<()> {
        let k = self.len() + 1;
        if parent < 1 || parent >= k {
            return Err(Error::Domain(format!("U_{k} = {parent} outside 1..={}", k - 1)));
        }
        self.open.push(eps);
        if eps {
            let root = self.root_of[parent - 1];
            let s = if eta { self.sign[parent - 1] } else { -self.sign[parent - 1] };
            self.root_of.push(root);
            self.sign.push(s);
            self.weights.push(0);
            self.component_sizes.push(0);
            let r = root as usize - 1;
            let old = self.component_sizes[r] as usize;
            self.component_sizes[r] += 1;
            self.weights[r] += s as i64;
            decrement(&mut self.nu, old);
            *self.nu.entry(old + 1).or_insert(0) += 1;
        } else {
            self.root_of.push(k as u32);
            self.sign.push(1);
            self.weights.push(1);
            self.component_sizes.push(1);
            *self.nu.entry(1).or_insert(0) += 1;
        }
        Ok(())
    }

    /// `nu_k(n)` as a sparse size -> count map.
    pub fn nu(&self) -> &BTreeMap<usize, usize> {
        &self.nu
    }

    pub fn is_root(&self, k: usize) -> bool {
        self.root_of[k - 1] as usize == k
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.len()).filter(|&k| self.is_root(k))
    }

    /// `sum_k W_nk xi_k` with compensated summation.
    pub fn weighted_sum(&self, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: xi.len(),
            });
        }
        let mut acc = NeumaierSum::default();
        for (&w, &x) in self.weights.iter().zip(xi) {
            if w != 0 {
                acc.add(w as f64 * x);
            }
        }
        Ok(acc.total())
    }

    /// Writes `k,nu_k` rows.
    pub fn write_nu_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,nu_k")?;
        for (k, c) in &self.nu {
            writeln!(out, "{k},{c}")?;
        }
        Ok(())
    }

    /// Writes `j,N_j,W_nj` rows for every root.
    pub fn write_components_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "j,N_j,W_nj")?;
        for j in self.roots() {
            writeln!(out, "{},{},{}", j, self.component_sizes[j - 1], self.weights[j - 1])?;
        }
        Ok(())
    }
}

fn decrement(map: &mut BTreeMap<usize, usize>, key: usize) {
    if let Some(c) = map.get_mut(&key) {
        *c -= 1;
        if *c == 0 {
            map.remove(&key);
        }
    }
}

/// Signs and weights in increasing label order: roots get `+1`, a non-root
/// `i` copies the sign of `U_i` when `eta_i = 1` and flips it otherwise.
///
/// Returns `(sign, weights)`.
pub fn assign_signed_weights(root_of: &[u32], tape: &RandomnessTape) -> Result<(Vec<i8>, Vec<i64>)> {
    let n = root_of.len();
    tape.require(n)?;
    let mut sign = vec![0i8; n];
    let mut weights = vec![0i64; n];
    for k in 1..=n {
        let root = root_of[k - 1] as usize;
        let s = if root == k {
            1
        } else {
            let up = sign[tape.parent(k) - 1];
            if tape.eta(k) {
                up
            } else {
                -up
            }
        };
        sign[k - 1] = s;
        weights[root - 1] += s as i64;
    }
    Ok((sign, weights))
}

/// Builds the tree and the percolation clusters for vertices `1..=n`.
pub fn grow_and_percolate(n: usize, tape: &RandomnessTape) -> Result<(RecursiveTree, PercolationForest)> {
    let tree = RecursiveTree::from_tape(n, tape)?;
    let mut open = vec![false; n];
    let mut root_of = vec![0u32; n];
    let mut sizes = vec![0u32; n];
    root_of[0] = 1;
    sizes[0] = 1;
    for k in 2..=n {
        if tape.eps(k) {
            open[k - 1] = true;
            let root = root_of[tape.parent(k) - 1];
            root_of[k - 1] = root;
            sizes[root as usize - 1] += 1;
        } else {
            root_of[k - 1] = k as u32;
            sizes[k - 1] = 1;
        }
    }
    let (sign, weights) = assign_signed_weights(&root_of, tape)?;
    let mut nu = BTreeMap::new();
    for &s in sizes.iter().filter(|&&s| s > 0) {
        *nu.entry(s as usize).or_insert(0) += 1;
    }
    let forest = PercolationForest {
        open,
        root_of,
        sign,
        weights,
        component_sizes: sizes,
        nu,
    };
    Ok((tree, forest))
}

/// Component counts and their power sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub nu: BTreeMap<usize, usize>,
    /// `(l, Z_l(n))` pairs.
    pub z: Vec<(f64, f64)>,
}

/// `Z_l(n) = sum_k k^l nu_k(n)` from a size -> count map.
pub fn z_value(nu: &BTreeMap<usize, usize>, l: f64) -> f64 {
    nu.iter()
        .map(|(&k, &c)| (k as f64).powf(l) * c as f64)
        .collect::<NeumaierSum>()
        .total()
}

pub fn component_stats(forest: &PercolationForest, l_list: &[f64]) -> ComponentStats {
    let nu = forest.nu().clone();
    let z = l_list.iter().map(|&l| (l, z_value(&nu, l))).collect();
    ComponentStats { nu, z }
}

/// Conditioning event for [`conditional_weight_law`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeProfile {
    /// The full vector `(N_1(n), .., N_n(n))`.
    Exact(Vec<usize>),
    /// The multiset of component sizes, in any order.
    Sizes(Vec<usize>),
}

/// Root weights sampled under a size profile.
///
/// Columns follow `sizes`: for an exact profile, roots in label order; for a
/// multiset, components ordered by decreasing size, ties by label.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalSample {
    pub sizes: Vec<usize>,
    pub rows: Vec<Vec<i64>>,
    pub attempts: u64,
}

impl ConditionalSample {
    pub fn column(&self, c: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[c]).collect()
    }
}

/// Rejection sampler for the root weights given the component sizes.
pub fn conditional_weight_law<R: Rng + ?Sized>(
    p: f64,
    r: f64,
    n: usize,
    profile: &SizeProfile,
    samples: usize,
    attempt_budget: u64,
    rng: &mut R,
) -> Result<ConditionalSample> {
    check_probability("p", p)?;
    check_probability("r", r)?;
    if n == 0 {
        return Err(Error::EmptyPath);
    }
    let (sizes, target_sorted) = match profile {
        SizeProfile::Exact(v) => {
            if v.len() != n || v.iter().sum::<usize>() != n {
                return Err(Error::Domain("exact profile must have n entries summing to n".into()));
            }
            (v.iter().copied().filter(|&m| m > 0).collect::<Vec<_>>(), None)
        }
        SizeProfile::Sizes(v) => {
            if v.iter().sum::<usize>() != n || v.contains(&0) {
                return Err(Error::Domain("size multiset must be positive and sum to n".into()));
            }
            let mut s = v.clone();
            s.sort_unstable_by(|a, b| b.cmp(a));
            (s.clone(), Some(s))
        }
    };
    let mut rows = Vec::with_capacity(samples);
    let mut attempts = 0u64;
    while rows.len() < samples {
        if attempts >= attempt_budget {
            return Err(Error::RejectionExhausted {
                attempts,
                accepted: rows.len(),
            });
        }
        attempts += 1;
        let tape = RandomnessTape::sample(n, p, r, rng)?;
        let (_, forest) = grow_and_percolate(n, &tape)?;
        match (&target_sorted, profile) {
            (None, SizeProfile::Exact(v)) => {
                if forest.component_sizes.iter().zip(v).all(|(&a, &b)| a as usize == b) {
                    rows.push(forest.roots().map(|j| forest.weights[j - 1]).collect());
                }
            }
            (Some(target), _) => {
                let mut comps: Vec<(usize, usize)> = forest
                    .roots()
                    .map(|j| (forest.component_sizes[j - 1] as usize, j))
                    .collect();
                if comps.len() != target.len() {
                    continue;
                }
                comps.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                if comps.iter().zip(target).all(|(c, &t)| c.0 == t) {
                    rows.push(comps.iter().map(|&(_, j)| forest.weights[j - 1]).collect());
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(ConditionalSample { sizes, rows, attempts })
}

/// One grid point of [`z_rate_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZRatePoint {
    pub n: usize,
    pub mean_z: f64,
    pub se_z: f64,
    pub b_l: f64,
    pub ratio: f64,
}

/// Monte Carlo `E Z_l(n) / b_l(n)` along an increasing grid of sizes.
pub fn z_rate_check(p: f64, l: f64, n_grid: &[usize], replicates: usize, seed: u64) -> Result<Vec<ZRatePoint>> {
    check_probability("p", p)?;
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) || n_grid[0] < 2 {
        return Err(Error::Domain("grid must be strictly increasing with n >= 2".into()));
    }
    let n_max = *n_grid.last().expect("non-empty grid");
    let per_rep: Vec<Vec<f64>> = (0..replicates as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(seed, rep, Stream::Tape);
            let mut forest = PercolationForest::singleton();
            let mut out = Vec::with_capacity(n_grid.len());
            let mut next = 0;
            for k in 2..=n_max {
                let parent = rng.random_range(1..k);
                let eps = rng.random::<f64>() < p;
                forest.push(parent, eps, true).expect("parent in range");
                if k == n_grid[next] {
                    out.push(z_value(forest.nu(), l));
                    next += 1;
                }
            }
            out
        })
        .collect();
    let mut points = Vec::with_capacity(n_grid.len());
    for (i, &n) in n_grid.iter().enumerate() {
        let column: Vec<f64> = per_rep.iter().map(|v| v[i]).collect();
        let (mean_z, se_z) = crate::stats::mc_mean_se(&column)?;
        let b_l = rate_b(p, l, n as f64);
        points.push(ZRatePoint {
            n,
            mean_z,
            se_z,
            b_l,
            ratio: mean_z / b_l,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::stream_rng;
    use crate::walk::{simulate_erw, simulate_unbalanced_walk};

    fn tape(n: usize, p: f64, r: f64, seed: u64) -> RandomnessTape {
        RandomnessTape::sample(n, p, r, &mut stream_rng(seed, 0, Stream::Tape)).unwrap()
    }

    #[test]
    fn no_copies_gives_singletons() {
        let t = tape(50, 0.0, 0.3, 1);
        let (_, f) = grow_and_percolate(50, &t).unwrap();
        assert_eq!(f.nu().get(&1), Some(&50));
        assert!(f.weights.iter().all(|&w| w == 1));
        let st = component_stats(&f, &[0.0, 1.0, 2.5]);
        for (_, z) in st.z {
            assert_eq!(z, 50.0);
        }
    }

    #[test]
    fn all_copies_gives_one_component() {
        let t = tape(80, 1.0, 0.3, 2);
        let (_, f) = grow_and_percolate(80, &t).unwrap();
        assert_eq!(f.nu().len(), 1);
        assert_eq!(f.nu().get(&80), Some(&1));
        assert_eq!(f.weights[0], simulate_erw(0.3, 80, &t).unwrap().last());
        let st = component_stats(&f, &[2.0]);
        assert_eq!(st.z[0].1, 6400.0);
    }

    #[test]
    fn positive_signs_give_sizes() {
        let t = tape(300, 0.6, 1.0, 3);
        let (_, f) = grow_and_percolate(300, &t).unwrap();
        for j in f.roots() {
            assert_eq!(f.weights[j - 1], f.component_sizes[j - 1] as i64);
        }
    }

    #[test]
    fn pair_with_flip_cancels() {
        // vertex 2 copies vertex 1 with a flip, vertex 3 is fresh
        let t = RandomnessTape::from_parts(vec![1, 1], vec![true, false], vec![false, true]).unwrap();
        let (_, f) = grow_and_percolate(3, &t).unwrap();
        assert_eq!(f.weights, vec![0, 0, 1]);
        assert_eq!(f.component_sizes, vec![2, 0, 1]);
    }

    #[test]
    fn representation_matches_walk() {
        let t = tape(1000, 0.5, 0.7, 4);
        let xi = crate::steps::StepSource::Gaussian.draw(1000, &mut stream_rng(4, 0, Stream::Steps));
        let walk = simulate_unbalanced_walk(&t, xi.clone()).unwrap();
        let (_, f) = grow_and_percolate(1000, &t).unwrap();
        let rep = f.weighted_sum(&xi).unwrap();
        assert!((rep - walk.last()).abs() <= 1e-9 * walk.last().abs().max(1.0));
    }

    #[test]
    fn incremental_matches_from_scratch() {
        let t = tape(700, 0.45, 0.35, 5);
        let mut inc = PercolationForest::singleton();
        for k in 2..=700 {
            inc.push(t.parent(k), t.eps(k), t.eta(k)).unwrap();
            if k % 97 == 0 || k == 700 {
                let (_, scratch) = grow_and_percolate(k, &t).unwrap();
                assert_eq!(inc, scratch);
            }
        }
    }

    #[test]
    fn conditional_trivial_cases() {
        let mut rng = stream_rng(6, 0, Stream::Aux);
        let s = conditional_weight_law(0.5, 1.0, 5, &SizeProfile::Sizes(vec![3, 1, 1]), 200, 1_000_000, &mut rng).unwrap();
        assert!(s.rows.iter().all(|r| r == &vec![3, 1, 1]));
        let s = conditional_weight_law(0.5, 0.3, 4, &SizeProfile::Sizes(vec![2, 1, 1]), 200, 1_000_000, &mut rng).unwrap();
        assert!(s.rows.iter().all(|r| r[1] == 1 && r[2] == 1));
    }

    #[test]
    fn conditional_exact_profile() {
        let mut rng = stream_rng(7, 0, Stream::Aux);
        // vertex 1 owns 2 vertices, vertex 3 is a singleton root
        let profile = SizeProfile::Exact(vec![2, 0, 1]);
        let s = conditional_weight_law(0.5, 0.5, 3, &profile, 300, 1_000_000, &mut rng).unwrap();
        assert_eq!(s.sizes, vec![2, 1]);
        assert!(s.rows.iter().all(|r| (r[0] == 0 || r[0] == 2) && r[1] == 1));
    }

    #[test]
    fn conditional_unattainable_profile_exhausts() {
        let mut rng = stream_rng(8, 0, Stream::Aux);
        // vertex 2 can never be a root of size 2 while vertex 1 has size 2 at n = 3 with p = 0
        let profile = SizeProfile::Exact(vec![2, 1, 0]);
        let err = conditional_weight_law(0.0, 0.5, 3, &profile, 10, 5_000, &mut rng).unwrap_err();
        assert!(matches!(err, Error::RejectionExhausted { attempts: 5_000, .. }));
    }

    #[test]
    fn z_rate_l1_is_identity() {
        let pts = z_rate_check(0.5, 1.0, &[100, 1000], 8, 3).unwrap();
        for pt in pts {
            assert_eq!(pt.mean_z, pt.n as f64);
            assert!((pt.ratio - 1.0).abs() < 1e-12);
        }
    }
}
