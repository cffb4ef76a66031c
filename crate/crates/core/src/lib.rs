//! Exact arithmetic substrate: rationals, univariate and multivariate
//! polynomials, and dense matrices with fraction-free elimination.
//!
//! Nothing in this crate rounds. Matrices are generic over [`Ring`], so the
//! same determinant and minor code serves rational, pencil-parameter and
//! many-parameter entries.

pub mod error;
pub mod matrix;
pub mod mpoly;
pub mod poly1;
pub mod rat;
pub mod ring;

pub use error::ArithError;
pub use matrix::{adjugate, ff_det, mat_rank, solve_exact, Echelon, Matrix, Solution};
pub use mpoly::{common_monomial, var_set, MPoly, MPolyJson};
pub use poly1::{distinct_root_count, Poly1, RootCount};
pub use rat::{denominator_lcm_and_numerator_gcd, Rat};
pub use ring::Ring;

/// k-element subsets of `0..n` in lexicographic order of their increasing
/// index tuples. This ordering indexes every compound matrix and Plücker
/// vector in the workspace.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(k).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        let s = k_subsets(4, 2);
        assert_eq!(
            s,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(k_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(2, 5), 0);
    }
}
