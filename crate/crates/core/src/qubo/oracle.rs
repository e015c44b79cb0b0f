use super::{BitVector, QuboError, QuboInstance};

/// Largest instance [`brute_force_min`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 25;

/// Global minimum by exhaustive enumeration.
///
/// Vectors are visited in lexicographic order (index 0 most significant) and
/// only a strictly lower energy replaces the incumbent, so ties resolve to the
/// lexicographically smallest minimizer. The running energy is updated per
/// flipped bit; the reported value is recomputed from the winning vector.
pub fn brute_force_min(q: &QuboInstance) -> Result<(BitVector, f64), QuboError> {
    let n = q.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(QuboError::BruteForceLimit {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut x = BitVector::zeros(n);
    let mut current = q.energy(&x)?;
    let mut best = x.clone();
    let mut best_energy = current;
    let tol = |e: f64| 1e-9 * (1.0 + e.abs());

    let total: u64 = 1 << n;
    for counter in 0..total.saturating_sub(1) {
        // bits that change between counter and counter + 1
        let changed = counter ^ (counter + 1);
        let mut rest = changed;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let index = n - 1 - bit;
            current += q.flip_delta(&x, index);
            x.flip(index);
        }
        if current < best_energy - tol(best_energy) {
            best_energy = current;
            best.clone_from(&x);
        }
    }
    let exact = q.energy(&best)?;
    Ok((best, exact))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable() {
        let q = QuboInstance::from_dense(1, vec![-1.0], 0.0).unwrap();
        let (x, e) = brute_force_min(&q).unwrap();
        assert_eq!(x.as_slice(), &[1]);
        assert_eq!(e, -1.0);
    }

    #[test]
    fn lexicographic_tie_break() {
        let q = QuboInstance::from_dense(2, vec![-1.0, 3.0, 0.0, -1.0], 0.0).unwrap();
        let (x, e) = brute_force_min(&q).unwrap();
        assert_eq!(x.as_slice(), &[0, 1]);
        assert_eq!(e, -1.0);
    }

    #[test]
    fn all_zero_instance_returns_zero_vector() {
        let (x, e) = brute_force_min(&QuboInstance::zeros(4)).unwrap();
        assert_eq!(x, BitVector::zeros(4));
        assert_eq!(e, 0.0);
    }

    #[test]
    fn empty_instance_returns_offset() {
        let mut q = QuboInstance::zeros(0);
        q.set_offset(-7.0).unwrap();
        let (x, e) = brute_force_min(&q).unwrap();
        assert!(x.is_empty());
        assert_eq!(e, -7.0);
    }

    #[test]
    fn refuses_large_instances() {
        let err = brute_force_min(&QuboInstance::zeros(26)).unwrap_err();
        assert_eq!(err, QuboError::BruteForceLimit { n: 26, limit: 25 });
        assert!(err.to_string().contains("limit of 25"));
    }
}
