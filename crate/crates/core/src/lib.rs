//! Exact combinatorics for polarizations of powers of the graded maximal
//! ideal: lattice points of dilated simplices, hook tableaux and the
//! L-complex, the hypersimplicial cell complex, discrete Morse reduction,
//! isotone families and their linear-syzygy graphs, plus a brute-force
//! Taylor-complex oracle.
//!
//! Indices are 0-based in memory and 1-based in every serialized form.
//! All coefficients are exact rationals.

pub mod chain;
pub mod error;
pub mod homology;
pub mod hypersimplex;
pub mod isotone_infer;
pub mod lattice;
pub mod linalg;
pub mod morse;
pub mod oracle;
pub mod polarization;
pub mod tableaux;

pub use chain::{Chain, ComplexDesc, FrameKey};
pub use error::{Error, Result};
pub use lattice::{DownEdge, Exponent, SyzygyGraph};

/// Default cap on the number of generators handed to exponential
/// lcm-lattice or Taylor-complex routines.
pub const DEFAULT_GENERATOR_GUARD: usize = 20;

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc
}

/// All k-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost index that still has room
        let mut t = k;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            if cur[t] < n - k + t {
                break;
            }
            if t == 0 {
                return out;
            }
        }
        cur[t] += 1;
        for s in t + 1..k {
            cur[s] = cur[s - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(30, 15), 155117520);
    }

    #[test]
    fn combinations_count_and_order() {
        let c = combinations(4, 2);
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![0, 1]);
        assert_eq!(c[5], vec![2, 3]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }
}
