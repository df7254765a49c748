use rand::Rng;

use crate::error::{check_probability, Error, Result};

/// The sequences `(U_k, eps_k, eta_k)` for `k = 2..=n`.
///
/// `U_k` is uniform on `{1, .., k-1}`, `eps_k` is Bernoulli(p) and marks a
/// copy step, `eta_k` is Bernoulli(r) and marks a sign-preserving copy.
/// Index 1 carries no randomness: the first step is always fresh.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomnessTape {
    parents: Vec<u32>,
    eps: Vec<bool>,
    eta: Vec<bool>,
}

impl RandomnessTape {
    /// Draws a tape covering vertices `1..=n`.
    pub fn sample<R: Rng + ?Sized>(n: usize, p: f64, r: f64, rng: &mut R) -> Result<Self> {
        check_probability("p", p)?;
        check_probability("r", r)?;
        if n == 0 {
            return Err(Error::EmptyPath);
        }
        let m = n - 1;
        let mut parents = Vec::with_capacity(m);
        let mut eps = Vec::with_capacity(m);
        let mut eta = Vec::with_capacity(m);
        for k in 2..=n {
            parents.push(rng.random_range(1..k) as u32);
            eps.push(rng.random::<f64>() < p);
            eta.push(rng.random::<f64>() < r);
        }
        Ok(Self { parents, eps, eta })
    }

    /// Builds a tape from explicit sequences indexed from `k = 2`.
    pub fn from_parts(parents: Vec<u32>, eps: Vec<bool>, eta: Vec<bool>) -> Result<Self> {
        if parents.len() != eps.len() || parents.len() != eta.len() {
            return Err(Error::LengthMismatch {
                left: parents.len(),
                right: eps.len().min(eta.len()),
            });
        }
        for (i, &u) in parents.iter().enumerate() {
            let k = i + 2;
            if u < 1 || u as usize > k - 1 {
                return Err(Error::Domain(format!("U_{k} = {u} outside 1..={}", k - 1)));
            }
        }
        Ok(Self { parents, eps, eta })
    }

    /// Number of vertices covered (`n`).
    pub fn len(&self) -> usize {
        self.parents.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn parent(&self, k: usize) -> usize {
        self.parents[k - 2] as usize
    }

    #[inline]
    pub fn eps(&self, k: usize) -> bool {
        self.eps[k - 2]
    }

    #[inline]
    pub fn eta(&self, k: usize) -> bool {
        self.eta[k - 2]
    }

    /// Appends the randomness for vertex `len() + 1`.
    pub fn push(&mut self, parent: u32, eps: bool, eta: bool) -> Result<()> {
        let k = self.len() + 1;
        if parent < 1 || parent as usize >= k {
            return Err(Error::Domain(format!("U_{k} = {parent} outside 1..={}", k - 1)));
        }
        self.parents.push(parent);
        self.eps.push(eps);
        self.eta.push(eta);
        Ok(())
    }

    pub(crate) fn require(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::EmptyPath);
        }
        if n > self.len() {
            return Err(Error::TapeTooShort {
                needed: n,
                available: self.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{stream_rng, Stream};

    #[test]
    fn parents_in_range() {
        let mut rng = stream_rng(1, 0, Stream::Tape);
        let tape = RandomnessTape::sample(500, 0.4, 0.6, &mut rng).unwrap();
        assert_eq!(tape.len(), 500);
        for k in 2..=500 {
            assert!((1..k).contains(&tape.parent(k)));
        }
        assert_eq!(tape.parent(2), 1);
    }

    #[test]
    fn degenerate_probabilities() {
        let mut rng = stream_rng(2, 0, Stream::Tape);
        let tape = RandomnessTape::sample(200, 0.0, 1.0, &mut rng).unwrap();
        assert!((2..=200).all(|k| !tape.eps(k) && tape.eta(k)));
    }

    #[test]
    fn from_parts_validates() {
        assert!(RandomnessTape::from_parts(vec![1, 2], vec![true, true], vec![true, false]).is_ok());
        assert!(RandomnessTape::from_parts(vec![1, 3], vec![true, true], vec![true, false]).is_err());
        assert!(RandomnessTape::from_parts(vec![0], vec![true], vec![true]).is_err());
    }

    #[test]
    fn empty_length_rejected() {
        let mut rng = stream_rng(3, 0, Stream::Tape);
        assert!(matches!(RandomnessTape::sample(0, 0.5, 0.5, &mut rng), Err(Error::EmptyPath)));
    }
}
