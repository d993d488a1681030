//! Frames, homogenization, exact rational homology and the lcm-lattice
//! criterion for a frame to support a free resolution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{Chain, ComplexDesc, FrameKey, Q};
use crate::error::{Error, Result};
use crate::lattice::Exponent;
use crate::linalg;

pub use crate::hypersimplex::frame_from_cells;

/// A based complex with a rank-one degree-0 term `Unit`; every degree-1 key
/// maps to `Unit` with coefficient 1 and carries a generator multidegree.
pub type Frame<K> = ComplexDesc<FrameKey<K>>;

pub fn validate_frame<K: Ord + Clone + Debug>(f: &Frame<K>) -> Result<()> {
    if f.basis.first().map(Vec::as_slice) != Some(&[FrameKey::Unit][..]) {
        return Err(Error::InvalidFrame("degree 0 must be the single unit".into()));
    }
    let unit = Chain::unit(FrameKey::Unit);
    for key in f.basis.get(1).into_iter().flatten() {
        if f.boundary_of(key) != unit {
            return Err(Error::InvalidFrame(format!(
                "{key:?} does not map to the unit with coefficient 1"
            )));
        }
        if f.mdeg_of(key).is_none() {
            return Err(Error::MissingMultidegrees);
        }
    }
    if f.basis.iter().flatten().any(|k| *k == FrameKey::Unit) && f.basis[0].len() != 1 {
        return Err(Error::InvalidFrame("unit appears twice".into()));
    }
    Ok(())
}

/// One entry of a homogenized differential: `coeff · x^monomial · face`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MEntry<K> {
    pub face: K,
    pub coeff: String,
    pub monomial: Exponent,
}

/// A frame lifted to a multigraded free complex: every key has a multidegree
/// and every boundary entry is a scalar times `x^{mdeg(v) - mdeg(u)}`.
#[derive(Clone, Debug)]
pub struct MultigradedComplex<K: Ord> {
    pub frame: Frame<K>,
    pub entries: BTreeMap<FrameKey<K>, Vec<(FrameKey<K>, Q, Exponent)>>,
}

impl<K: Ord + Clone + Debug> MultigradedComplex<K> {
    pub fn mdeg(&self, key: &FrameKey<K>) -> &Exponent {
        &self.frame.mdeg.as_ref().expect("homogenized")[key]
    }

    /// Generator multidegrees (degree 1 of the frame).
    pub fn generators(&self) -> Vec<Exponent> {
        self.frame
            .basis
            .get(1)
            .into_iter()
            .flatten()
            .map(|k| self.mdeg(k).clone())
            .collect()
    }

    pub fn entries_json(&self) -> Vec<(FrameKey<K>, Vec<MEntry<FrameKey<K>>>)> {
        self.entries
            .iter()
            .map(|(k, es)| {
                (
                    k.clone(),
                    es.iter()
                        .map(|(f, c, m)| MEntry {
                            face: f.clone(),
                            coeff: c.to_string(),
                            monomial: m.clone(),
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

/// Assigns multidegrees bottom-up (`mdeg(v) = lcm` of the multidegrees of the
/// faces of `v`) and scales every entry by the monomial quotient.
pub fn homogenize<K: Ord + Clone + Debug>(frame: &Frame<K>) -> Result<MultigradedComplex<K>> {
    validate_frame(frame)?;
    let n = frame
        .basis
        .get(1)
        .and_then(|b| b.first())
        .and_then(|k| frame.mdeg_of(k))
        .map(Exponent::n)
        .unwrap_or(0);
    let mut mdeg: BTreeMap<FrameKey<K>, Exponent> = BTreeMap::new();
    mdeg.insert(FrameKey::Unit, Exponent::zero(n));
    for key in frame.basis.get(1).into_iter().flatten() {
        mdeg.insert(key.clone(), frame.mdeg_of(key).unwrap().clone());
    }
    for b in frame.basis.iter().skip(2) {
        for key in b {
            let faces = frame.boundary_of(key);
            let mut it = faces.keys();
            let first = it.next().ok_or_else(|| {
                Error::InvalidFrame(format!("{key:?} has empty boundary above degree 0"))
            })?;
            let m = it.fold(mdeg[first].clone(), |acc, f| acc.lcm(&mdeg[f]));
            mdeg.insert(key.clone(), m);
        }
    }
    let mut entries = BTreeMap::new();
    for (key, b) in &frame.boundary {
        let top = &mdeg[key];
        let es = b
            .iter()
            .map(|(f, c)| {
                let quo = top
                    .checked_sub(&mdeg[f])
                    .expect("lcm dominates every face");
                (f.clone(), c.clone(), quo)
            })
            .collect();
        entries.insert(key.clone(), es);
    }
    let mut lifted = frame.clone();
    lifted.mdeg = Some(mdeg);
    Ok(MultigradedComplex {
        frame: lifted,
        entries,
    })
}

/// Forgets the grading: sets every variable to 1.
pub fn dehomogenize<K: Ord + Clone + Debug>(mc: &MultigradedComplex<K>) -> Frame<K> {
    let mut f = mc.frame.clone();
    f.boundary = mc
        .entries
        .iter()
        .map(|(k, es)| {
            (
                k.clone(),
                es.iter().map(|(face, c, _)| (face.clone(), c.clone())).collect(),
            )
        })
        .collect();
    f
}

/// `dim H_k` for every degree, by exact rank computation.
pub fn rational_homology<K: Ord + Clone + Debug>(cx: &ComplexDesc<K>) -> Result<Vec<usize>> {
    cx.check_square_zero()?;
    let ranks: Vec<usize> = (0..=cx.basis.len())
        .map(|k| linalg::rank(&cx.boundary_matrix(k)))
        .collect();
    Ok((0..cx.basis.len())
        .map(|k| cx.basis[k].len() - ranks[k] - ranks[k + 1])
        .collect())
}

/// Closure of a generator set under lcm, sorted. Guarded on the generator
/// count because the lattice can be exponential in it.
pub fn lcm_lattice(gens: &[Exponent], guard: usize) -> Result<Vec<Exponent>> {
    if gens.len() > guard {
        return Err(Error::GuardExceeded {
            what: "generator count",
            value: gens.len() as u64,
            limit: guard as u64,
        });
    }
    let mut all: BTreeSet<Exponent> = gens.iter().cloned().collect();
    let mut frontier: Vec<Exponent> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = x.lcm(g);
                if all.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok(all.into_iter().collect())
}

/// A multidegree whose restriction has nonzero homology. `homology_degree`
/// counts from the vertices (frame degree minus one), so a hollow triangle
/// reports degree 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub multidegree: Exponent,
    pub homology_degree: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionVerdict {
    pub is_resolution: bool,
    pub lattice_size: usize,
    pub witness: Option<Witness>,
}

/// Decides whether the homogenized frame is a free resolution: every
/// restriction `X_{<=m}`, `m` in the lcm lattice of the generators, must be
/// acyclic (including the unit, i.e. reduced homology).
pub fn is_cellular_resolution<K>(mc: &MultigradedComplex<K>, guard: usize) -> Result<ResolutionVerdict>
where
    K: Ord + Clone + Debug + Send + Sync,
{
    let lattice = lcm_lattice(&mc.generators(), guard)?;
    let results: Vec<Result<Option<Witness>>> = lattice
        .par_iter()
        .map(|m| {
            let sub = mc.frame.restrict_leq(m)?;
            let h = rational_homology(&sub)?;
            Ok(h.iter().position(|&x| x != 0).map(|k| Witness {
                multidegree: m.clone(),
                homology_degree: k.saturating_sub(1),
                dimension: h[k],
            }))
        })
        .collect();
    let mut witness = None;
    for r in results {
        if let Some(w) = r? {
            witness = Some(w);
            break;
        }
    }
    Ok(ResolutionVerdict {
        is_resolution: witness.is_none(),
        lattice_size: lattice.len(),
        witness,
    })
}

/// Betti numbers read off a minimal frame: its ranks above degree 0.
pub fn frame_ranks<K: Ord + Clone + Debug>(f: &Frame<K>) -> Vec<usize> {
    f.ranks().into_iter().skip(1).collect()
}

/// True when every boundary coefficient of the homogenized complex has a
/// nontrivial monomial, i.e. the resolution is minimal.
pub fn is_minimal<K: Ord + Clone + Debug>(mc: &MultigradedComplex<K>) -> bool {
    mc.entries.iter().all(|(k, es)| {
        *k == FrameKey::Unit
            || es
                .iter()
                .all(|(f, _, m)| *f == FrameKey::Unit || m.degree() > 0)
    })
}
