//! Linear constraint systems over symmetric matrix unknowns, and the seeded
//! search for an invertible member of the solution space.

use crate::matrix::{nullspace, RatMatrix};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Controls the deterministic invertible-member search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Random combinations tried after the basis vectors themselves.
    pub attempts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            attempts: 64,
        }
    }
}

/// `E_ii` and `E_ij + E_ji` for `i < j`, row-major over the upper triangle.
pub(crate) fn symmetric_basis(n: usize) -> Vec<RatMatrix> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let mut e = RatMatrix::zeros(n, n);
            e[(i, j)] = Rational::one();
            e[(j, i)] = Rational::one();
            out.push(e);
        }
    }
    out
}

/// Basis of `{S symmetric : constraint(S) = 0}` for a linear `constraint`
/// returning any number of matrices that must all vanish.
pub(crate) fn symmetric_solutions(n: usize, constraint: impl Fn(&RatMatrix) -> Vec<RatMatrix>) -> Vec<RatMatrix> {
    let basis = symmetric_basis(n);
    if basis.is_empty() {
        return Vec::new();
    }
    let columns: Vec<Vec<Rational>> = basis
        .iter()
        .map(|e| {
            constraint(e)
                .iter()
                .flat_map(|c| c.entries().to_vec())
                .collect()
        })
        .collect();
    let system = RatMatrix::from_columns(&columns);
    nullspace(&system)
        .iter()
        .map(|v| {
            basis
                .iter()
                .enumerate()
                .fold(RatMatrix::zeros(n, n), |acc, (k, e)| &acc + &e.scale(&v[(k, 0)]))
        })
        .collect()
}

/// First invertible matrix among the basis elements, then among seeded
/// small-integer combinations with a slowly widening coefficient range.
pub(crate) fn find_invertible(basis: &[RatMatrix], search: &SearchConfig) -> Option<RatMatrix> {
    if let Some(b) = basis.iter().find(|b| b.is_invertible()) {
        return Some(b.clone());
    }
    let first = basis.first()?;
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    for attempt in 0..search.attempts {
        let bound = 2 + attempt as i64 / 4;
        let mut s = RatMatrix::zeros(first.rows(), first.cols());
        for b in basis {
            let c = rng.gen_range(-bound..=bound);
            if c != 0 {
                s = &s + &b.scale(&rational::int(c));
            }
        }
        if !s.entries().iter().all(Zero::is_zero) && s.is_invertible() {
            return Some(s);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn unconstrained_space_is_full() {
        let sols = symmetric_solutions(3, |_| Vec::new());
        assert_eq!(sols.len(), 6);
        assert!(sols.iter().all(RatMatrix::is_symmetric));
    }

    #[test]
    fn combination_needed_when_basis_is_singular() {
        // diag(1,0) and diag(0,1) are singular; a combination is not.
        let basis = vec![RatMatrix::diag(&[int(1), int(0)]), RatMatrix::diag(&[int(0), int(1)])];
        let s = find_invertible(&basis, &SearchConfig::default()).unwrap();
        assert!(s.is_invertible());
        let again = find_invertible(&basis, &SearchConfig::default()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn empty_basis_has_no_member() {
        assert!(find_invertible(&[], &SearchConfig::default()).is_none());
    }
}
