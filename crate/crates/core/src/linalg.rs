//! Exact rank by fraction-free (Bareiss) elimination.
//!
//! Rows are cleared of denominators first (row scaling does not change the
//! rank), then eliminated over `i128` with checked arithmetic. On overflow the
//! whole computation restarts over `BigInt`. The pivot at each step is the
//! first remaining row, in input order, with a nonzero entry in the current
//! column, so results and any derived witnesses are reproducible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::chain::{Chain, Q};

fn integer_rows(rows: &[Vec<Q>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

fn bareiss_i128(mut m: Vec<Vec<i128>>, cols: usize) -> Option<usize> {
    let nrows = m.len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        let Some(p) = (rank..nrows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            if m[r][c] == 0 {
                // still needs scaling by pivot/prev to keep the invariant
                for k in c + 1..cols {
                    m[r][k] = m[r][k].checked_mul(m[rank][c])? / prev;
                }
                continue;
            }
            for k in c + 1..cols {
                let a = m[r][k].checked_mul(m[rank][c])?;
                let b = m[r][c].checked_mul(m[rank][k])?;
                m[r][k] = a.checked_sub(b)? / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    Some(rank)
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let nrows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..nrows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let piv = &head[rank];
        for row in tail.iter_mut() {
            for k in c + 1..cols {
                let v = (&row[k] * &piv[c] - &row[c] * &piv[k]) / &prev;
                row[k] = v;
            }
            row[c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Rank of a dense rational matrix given as rows.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let ints = integer_rows(rows);
    let small: Option<Vec<Vec<i128>>> = ints
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128()).collect())
        .collect();
    if let Some(m) = small {
        if let Some(r) = bareiss_i128(m, cols) {
            return r;
        }
    }
    bareiss_big(ints, cols)
}

/// Dimension of the span of a family of chains.
pub fn span_rank<K: Ord + Clone>(chains: &[Chain<K>]) -> usize {
    let mut cols: BTreeMap<&K, usize> = BTreeMap::new();
    for c in chains {
        for k in c.keys() {
            let next = cols.len();
            cols.entry(k).or_insert(next);
        }
    }
    let rows: Vec<Vec<Q>> = chains
        .iter()
        .map(|c| {
            let mut r = vec![Q::zero(); cols.len()];
            for (k, v) in c.iter() {
                r[cols[k]] = v.clone();
            }
            r
        })
        .collect();
    rank(&rows)
}
