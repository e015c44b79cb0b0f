use std::collections::BTreeSet;

use super::{BitVector, QuboError, QuboInstance};

/// Variables fixed to 0 or 1 over an instance of size `n`.
///
/// Surviving (unfixed) variables are re-indexed in increasing order, so the
/// reduced index of a survivor is its rank among the survivors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    n: usize,
    zeros: BTreeSet<usize>,
    ones: BTreeSet<usize>,
    survivors: Vec<usize>,
    reduced: Vec<Option<usize>>,
}

impl PartialAssignment {
    pub fn new<Z, O>(n: usize, zeros: Z, ones: O) -> Result<Self, QuboError>
    where
        Z: IntoIterator<Item = usize>,
        O: IntoIterator<Item = usize>,
    {
        let zeros: BTreeSet<usize> = zeros.into_iter().collect();
        let ones: BTreeSet<usize> = ones.into_iter().collect();
        if let Some(&index) = zeros.iter().chain(ones.iter()).find(|&&i| i >= n) {
            return Err(QuboError::IndexOutOfRange { index, n });
        }
        if let Some(&index) = zeros.intersection(&ones).next() {
            return Err(QuboError::OverlappingAssignment(index));
        }
        let mut survivors = Vec::with_capacity(n - zeros.len() - ones.len());
        let mut reduced = vec![None; n];
        for i in 0..n {
            if !zeros.contains(&i) && !ones.contains(&i) {
                reduced[i] = Some(survivors.len());
                survivors.push(i);
            }
        }
        Ok(PartialAssignment {
            n,
            zeros,
            ones,
            survivors,
            reduced,
        })
    }

    /// Assignment that fixes nothing.
    pub fn identity(n: usize) -> Self {
        Self::new(n, [], []).expect("empty assignment is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of surviving variables.
    pub fn m(&self) -> usize {
        self.survivors.len()
    }

    pub fn zeros(&self) -> &BTreeSet<usize> {
        &self.zeros
    }

    pub fn ones(&self) -> &BTreeSet<usize> {
        &self.ones
    }

    /// Original indices of the survivors, in reduced order.
    pub fn survivors(&self) -> &[usize] {
        &self.survivors
    }

    /// Reduced index of an original variable, `None` if it is fixed.
    pub fn reduced_index(&self, original: usize) -> Option<usize> {
        self.reduced.get(original).copied().flatten()
    }

    /// Fixed value of an original variable, `None` if it survives.
    pub fn fixed_value(&self, original: usize) -> Option<bool> {
        if self.ones.contains(&original) {
            Some(true)
        } else if self.zeros.contains(&original) {
            Some(false)
        } else {
            None
        }
    }

    /// Re-inserts the fixed bits into a reduced vector.
    pub fn expand(&self, reduced: &BitVector) -> Result<BitVector, QuboError> {
        if reduced.len() != self.m() {
            return Err(QuboError::Dimension {
                expected: self.m(),
                actual: reduced.len(),
            });
        }
        let mut full = BitVector::zeros(self.n);
        for &i in &self.ones {
            full.set(i, true);
        }
        for (r, &i) in self.survivors.iter().enumerate() {
            full.set(i, reduced.get(r));
        }
        Ok(full)
    }

    /// Restriction of a full vector to the surviving variables.
    pub fn project(&self, full: &BitVector) -> Result<BitVector, QuboError> {
        if full.len() != self.n {
            return Err(QuboError::Dimension {
                expected: self.n,
                actual: full.len(),
            });
        }
        Ok(BitVector::from_bools(self.survivors.iter().map(|&i| full.get(i))))
    }

    /// Whether a full vector agrees with every fixed bit.
    pub fn is_consistent_with(&self, full: &BitVector) -> bool {
        full.len() == self.n && self.ones.iter().all(|&i| full.get(i)) && self.zeros.iter().all(|&i| !full.get(i))
    }

    /// Combines `self` with a further assignment stated in `self`'s reduced
    /// coordinates, yielding one assignment over the original variables.
    pub fn compose(&self, inner: &PartialAssignment) -> Result<PartialAssignment, QuboError> {
        if inner.n != self.m() {
            return Err(QuboError::Dimension {
                expected: self.m(),
                actual: inner.n,
            });
        }
        let zeros = self
            .zeros
            .iter()
            .copied()
            .chain(inner.zeros.iter().map(|&r| self.survivors[r]));
        let ones = self
            .ones
            .iter()
            .copied()
            .chain(inner.ones.iter().map(|&r| self.survivors[r]));
        PartialAssignment::new(self.n, zeros, ones)
    }
}

impl QuboInstance {
    /// Eliminates the fixed variables of `pa`.
    ///
    /// Couplings between a survivor and a variable fixed to 1 fold into the
    /// survivor's diagonal; weights among variables fixed to 1 fold into the
    /// offset; anything touching a variable fixed to 0 vanishes. The result is
    /// the reduced matrix `T^T Q T` with its constant row and column folded
    /// away, computed without forming `T`.
    pub fn clamp(&self, pa: &PartialAssignment) -> Result<QuboInstance, QuboError> {
        if pa.n() != self.n() {
            return Err(QuboError::Dimension {
                expected: self.n(),
                actual: pa.n(),
            });
        }
        let m = pa.m();
        let mut reduced = QuboInstance::zeros(m);
        let ones: Vec<usize> = pa.ones().iter().copied().collect();

        let mut constant = 0.0;
        for (a, &i) in ones.iter().enumerate() {
            for &j in &ones[a..] {
                constant += self.weight(i, j);
            }
        }

        for (r, &i) in pa.survivors().iter().enumerate() {
            let mut diag = self.weight(i, i);
            for &j in &ones {
                diag += self.coupling(i, j);
            }
            reduced.weights[r * m + r] = diag;
            for (s, &j) in pa.survivors().iter().enumerate().skip(r + 1) {
                reduced.weights[r * m + s] = self.weight(i, j);
            }
        }
        reduced.set_offset(self.offset() + constant)?;
        Ok(reduced)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_examples() {
        let id = PartialAssignment::identity(3);
        let x = BitVector::new(vec![1, 0, 1]).unwrap();
        assert_eq!(id.expand(&x).unwrap(), x);

        // 1-based I0 = {2}, I1 = {4} over n = 5.
        let pa = PartialAssignment::new(5, [1], [3]).unwrap();
        let x = BitVector::new(vec![1, 1, 0]).unwrap();
        assert_eq!(pa.expand(&x).unwrap().as_slice(), &[1, 0, 1, 1, 0]);
    }

    #[test]
    fn expand_rejects_wrong_length() {
        let pa = PartialAssignment::new(5, [1], [3]).unwrap();
        assert_eq!(
            pa.expand(&BitVector::zeros(5)).unwrap_err(),
            QuboError::Dimension { expected: 3, actual: 5 }
        );
    }

    #[test]
    fn overlapping_and_out_of_range_rejected() {
        assert_eq!(
            PartialAssignment::new(4, [1, 2], [2]).unwrap_err(),
            QuboError::OverlappingAssignment(2)
        );
        assert_eq!(
            PartialAssignment::new(4, [4], []).unwrap_err(),
            QuboError::IndexOutOfRange { index: 4, n: 4 }
        );
    }

    #[test]
    fn identity_clamp_is_noop() {
        let q = QuboInstance::from_entries(3, [(0, 0, -1.0), (0, 2, 3.0), (1, 1, 2.0)], 1.5).unwrap();
        assert_eq!(q.clamp(&PartialAssignment::identity(3)).unwrap(), q);
    }

    #[test]
    fn clamp_folds_into_diagonal_and_offset() {
        // E = -x0 - x1 - x2 + 3 x0 x1 + 2 x1 x2 + 5 x0 x2
        let q = QuboInstance::from_entries(
            3,
            [
                (0, 0, -1.0),
                (1, 1, -1.0),
                (2, 2, -1.0),
                (0, 1, 3.0),
                (1, 2, 2.0),
                (0, 2, 5.0),
            ],
            0.0,
        )
        .unwrap();
        let pa = PartialAssignment::new(3, [2], [0]).unwrap();
        let r = q.clamp(&pa).unwrap();
        assert_eq!(r.n(), 1);
        assert_eq!(r.weight(0, 0), -1.0 + 3.0);
        assert_eq!(r.offset(), -1.0);
    }

    #[test]
    fn clamp_size_mismatch() {
        let q = QuboInstance::zeros(3);
        assert!(q.clamp(&PartialAssignment::identity(4)).is_err());
    }

    #[test]
    fn clamp_everything_leaves_constant() {
        let q = QuboInstance::from_entries(2, [(0, 0, -1.0), (0, 1, 3.0), (1, 1, -1.0)], 0.0).unwrap();
        let pa = PartialAssignment::new(2, [], [0, 1]).unwrap();
        let r = q.clamp(&pa).unwrap();
        assert_eq!(r.n(), 0);
        assert_eq!(r.energy(&BitVector::zeros(0)).unwrap(), 1.0);
    }

    #[test]
    fn compose_maps_reduced_indices() {
        let outer = PartialAssignment::new(5, [0], [3]).unwrap();
        // survivors 1, 2, 4; fix reduced 2 (original 4) to one.
        let inner = PartialAssignment::new(3, [], [2]).unwrap();
        let both = outer.compose(&inner).unwrap();
        assert_eq!(both.ones().iter().copied().collect::<Vec<_>>(), vec![3, 4]);
        assert_eq!(both.survivors(), &[1, 2]);
    }
}
