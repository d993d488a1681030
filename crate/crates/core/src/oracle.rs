//! Brute-force checks independent of the cellular machinery: multigraded
//! Betti numbers from the Taylor complex, polarization by Betti comparison,
//! and exhaustive enumeration of polarizations for small `(n, d)`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{q, Q};
use crate::error::{Error, Result};
use crate::lattice::{DownEdge, Exponent, SyzygyGraph};
use crate::linalg;
use crate::polarization::{
    depolarize, domain_edges, enumerate_isotone_maps, family_from_maps, ls_edges, realize_ideal,
    restricted_l_ranks, spanning_tree_check, IsotoneFamily,
};

/// `β_{h, m}` of an ideal (homological degree `h`, generators in degree 0).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub graded: BTreeMap<(usize, Exponent), usize>,
}

impl BettiTable {
    pub fn totals(&self) -> Vec<usize> {
        let mut t: Vec<usize> = Vec::new();
        for (&(h, _), &b) in &self.graded {
            if t.len() <= h {
                t.resize(h + 1, 0);
            }
            t[h] += b;
        }
        t
    }
}

/// Betti numbers from the Taylor complex: subsets of generators grouped by
/// their lcm; in the strand of `m`, a subset of size `h+1` sits in degree `h`
/// and its boundary keeps only the faces that still have lcm `m` (the others
/// pick up a non-unit monomial and vanish after tensoring with `k`).
pub fn taylor_betti(gens: &[Exponent], guard: usize) -> Result<BettiTable> {
    let g = gens.len();
    if g > guard || g >= 64 {
        return Err(Error::GuardExceeded {
            what: "generator count",
            value: g as u64,
            limit: guard.min(63) as u64,
        });
    }
    if g == 0 {
        return Ok(BettiTable::default());
    }
    if let Some(bad) = gens.iter().find(|a| a.n() != gens[0].n()) {
        return Err(Error::DimensionMismatch(format!("generator {bad} has a different length")));
    }
    // lcm of each subset, built from the subset without its top bit
    let total = 1u64 << g;
    let mut lcm: Vec<Exponent> = Vec::with_capacity(total as usize);
    lcm.push(Exponent::zero(gens[0].n()));
    for s in 1..total {
        let top = 63 - s.leading_zeros() as usize;
        lcm.push(lcm[(s ^ 1 << top) as usize].lcm(&gens[top]));
    }
    let mut strands: BTreeMap<&Exponent, Vec<u64>> = BTreeMap::new();
    for s in 1..total {
        strands.entry(&lcm[s as usize]).or_default().push(s);
    }
    let graded: Vec<((usize, Exponent), usize)> = strands
        .into_par_iter()
        .flat_map_iter(|(m, subsets)| {
            let mut by_deg: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
            for s in subsets {
                by_deg.entry(s.count_ones() as usize - 1).or_default().push(s);
            }
            let top = by_deg.keys().next_back().copied().unwrap_or(0);
            // rank of the map from degree h to degree h-1
            let ranks: Vec<usize> = (0..=top + 1)
                .map(|h| {
                    if h == 0 {
                        return 0;
                    }
                    let (Some(cols), Some(rows)) = (by_deg.get(&h), by_deg.get(&(h - 1))) else {
                        return 0;
                    };
                    let row_of: BTreeMap<u64, usize> =
                        rows.iter().enumerate().map(|(r, &s)| (s, r)).collect();
                    let mut mat = vec![vec![Q::zero(); cols.len()]; rows.len()];
                    for (c, &s) in cols.iter().enumerate() {
                        let mut sign = 1;
                        for b in 0..g {
                            if s >> b & 1 == 0 {
                                continue;
                            }
                            if let Some(&r) = row_of.get(&(s ^ 1 << b)) {
                                mat[r][c] = q(sign);
                            }
                            sign = -sign;
                        }
                    }
                    linalg::rank(&mat)
                })
                .collect();
            by_deg
                .iter()
                .filter_map(|(&h, v)| {
                    let b = v.len() - ranks[h] - ranks[h + 1];
                    (b > 0).then(|| ((h, m.clone()), b))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(BettiTable {
        graded: graded.into_iter().collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteForceReport {
    pub passes: bool,
    pub betti: Vec<usize>,
    pub expected: Vec<usize>,
    pub depolarizes: bool,
}

/// A family polarizes `m^d(<=u)` iff the variable differences form a regular
/// sequence, iff tensoring the resolution with them creates no Tor, iff the
/// polarized ideal has the same total Betti numbers as `m^d(<=u)` (read off
/// the restricted L-complex). Depolarization must also give back the
/// generators.
pub fn verify_polarization_bruteforce(chi: &IsotoneFamily, guard: usize) -> Result<BruteForceReport> {
    let ideal = realize_ideal(chi)?;
    let depolarizes = depolarize(&ideal) == ideal.points;
    let mut betti = taylor_betti(&ideal.generators, guard)?.totals();
    let mut expected = restricted_l_ranks(chi.n, chi.d, chi.u.as_ref())?;
    while expected.last() == Some(&0) {
        expected.pop();
    }
    while betti.last() == Some(&0) {
        betti.pop();
    }
    Ok(BruteForceReport {
        passes: depolarizes && betti == expected,
        betti,
        expected,
        depolarizes,
    })
}

/// One accepted polarization: its family and the one-skeleton edges that
/// are not LS edges.
#[derive(Clone, Debug, Serialize)]
pub struct Enumerated {
    pub family: IsotoneFamily,
    pub removed: Vec<DownEdge>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub n: usize,
    pub d: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Exponent>,
    pub maps_per_index: Vec<usize>,
    pub families_searched: u64,
    pub accepted_families: u64,
    pub distinct_graphs: usize,
    pub results: Vec<Enumerated>,
}

/// Default cap on the size of the product search.
pub const DEFAULT_SEARCH_GUARD: u64 = 200_000;

/// Exhaustive search: all isotone maps per index (enumerated in canonical
/// order), combined in lexicographic product order; a family is accepted iff
/// its LS graph passes the spanning-tree criterion. By default one family is
/// kept per LS graph (the first in search order); `by_family` keeps all.
/// Every emitted family is confirmed by the Betti oracle.
pub fn enumerate_polarizations(
    n: usize,
    d: u32,
    u: Option<&Exponent>,
    by_family: bool,
    search_guard: u64,
    generator_guard: usize,
) -> Result<Enumeration> {
    if n < 2 {
        return Err(Error::InvalidParameters("enumeration needs n >= 2".into()));
    }
    let mut per_index = Vec::with_capacity(n);
    for i in 0..n {
        per_index.push(enumerate_isotone_maps(n, d, i, u, search_guard as usize)?);
    }
    let sizes: Vec<usize> = per_index.iter().map(|p| p.1.len()).collect();
    let space = sizes
        .iter()
        .try_fold(1u64, |acc, &s| acc.checked_mul(s as u64))
        .unwrap_or(u64::MAX);
    if space > search_guard {
        return Err(Error::GuardExceeded {
            what: "search space",
            value: space,
            limit: search_guard,
        });
    }
    let all_edges: Vec<DownEdge> = domain_edges(n, d, u)?;
    let decode = |mut x: u64| -> Vec<usize> {
        let mut digits = vec![0; n];
        for i in (0..n).rev() {
            digits[i] = (x % sizes[i] as u64) as usize;
            x /= sizes[i] as u64;
        }
        digits
    };
    let build = |x: u64| -> IsotoneFamily {
        let digits = decode(x);
        let maps: Vec<(&[Exponent], &[u32])> = (0..n)
            .map(|i| (per_index[i].0.as_slice(), per_index[i].1[digits[i]].as_slice()))
            .collect();
        family_from_maps(n, d, u, &maps)
    };
    // parallel evaluation, collected in index order
    let accepted: Vec<(u64, SyzygyGraph)> = (0..space)
        .into_par_iter()
        .map(|x| -> Result<Option<(u64, SyzygyGraph)>> {
            let graph = ls_edges(&build(x))?;
            Ok(spanning_tree_check(&graph, u)?.spans.then_some((x, graph)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut seen: BTreeSet<Vec<DownEdge>> = BTreeSet::new();
    let mut results = Vec::new();
    for (x, graph) in &accepted {
        let removed: Vec<DownEdge> = all_edges
            .iter()
            .filter(|e| !graph.contains(e))
            .cloned()
            .collect();
        let fresh = seen.insert(removed.clone());
        if by_family || fresh {
            results.push(Enumerated {
                family: build(*x),
                removed,
            });
        }
    }
    let checks: Vec<Result<bool>> = results
        .par_iter()
        .map(|r| Ok(verify_polarization_bruteforce(&r.family, generator_guard)?.passes))
        .collect();
    for (r, ok) in results.iter().zip(checks) {
        if !ok? {
            return Err(Error::CriterionDisagreement(format!(
                "spanning tree accepts but the Betti oracle rejects {}",
                serde_json::to_string(&r.family)?
            )));
        }
    }
    Ok(Enumeration {
        n,
        d,
        u: u.cloned(),
        maps_per_index: sizes,
        families_searched: space,
        accepted_families: accepted.len() as u64,
        distinct_graphs: seen.len(),
        results,
    })
}
