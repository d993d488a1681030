//! Acyclic matchings, the L-matching on the hypersimplicial complex, and the
//! Morse complex on critical cells.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::chain::{ComplexDesc, FrameKey};
use crate::error::{Error, Result};
use crate::hypersimplex::{build_complex, cell_to_tableau, frame_from_cells, Cell};
use crate::tableaux::{build_l_complex, LKey};

/// Pairs `upper -> lower` with `lower` a face of `upper` one dimension down.
/// Serialized as a list of `[upper, lower]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "K: Serialize + Ord",
    deserialize = "K: Deserialize<'de> + Ord"
))]
pub struct Matching<K: Ord> {
    pub pairs: Vec<(K, K)>,
}

impl<K: Ord + Clone> Matching<K> {
    pub fn empty() -> Self {
        Matching { pairs: Vec::new() }
    }

    pub fn up(&self) -> BTreeMap<K, K> {
        self.pairs.iter().cloned().collect()
    }

    pub fn down(&self) -> BTreeMap<K, K> {
        self.pairs.iter().map(|(u, l)| (l.clone(), u.clone())).collect()
    }

    pub fn matched(&self) -> BTreeSet<K> {
        self.pairs
            .iter()
            .flat_map(|(u, l)| [u.clone(), l.clone()])
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchingReport<K> {
    pub acyclic: bool,
    pub homogeneous: bool,
    pub cycle_witness: Option<Vec<K>>,
}

/// Validates a matching and searches the modified Hasse graph (boundary
/// edges downward, matched edges reversed) for a directed cycle.
pub fn validate_matching<K: Ord + Clone + Debug>(
    cx: &ComplexDesc<K>,
    m: &Matching<K>,
) -> Result<MatchingReport<K>> {
    let idx = cx.degree_index();
    let mut seen = BTreeSet::new();
    let mut homogeneous = true;
    for (u, l) in &m.pairs {
        for x in [u, l] {
            if !seen.insert(x.clone()) {
                return Err(Error::InvalidMatching(format!("{x:?} is matched twice")));
            }
        }
        let (Some(&du), Some(&dl)) = (idx.get(u), idx.get(l)) else {
            return Err(Error::InvalidMatching(format!("pair {u:?} -> {l:?} not in complex")));
        };
        if du != dl + 1 {
            return Err(Error::InvalidMatching(format!(
                "pair {u:?} -> {l:?} does not drop dimension by one"
            )));
        }
        if !cx.boundary_of(u).contains(l) {
            return Err(Error::InvalidMatching(format!(
                "{l:?} is not a face of {u:?}"
            )));
        }
        if let (Some(a), Some(b)) = (cx.mdeg_of(u), cx.mdeg_of(l)) {
            homogeneous &= a == b;
        }
    }

    let up = m.up();
    let succ = |x: &K| -> Vec<K> {
        let mut out: Vec<K> = cx
            .boundary_of(x)
            .keys()
            .filter(|f| up.get(x) != Some(*f))
            .cloned()
            .collect();
        // reversed matched edge: lower -> upper
        if let Some((u, _)) = m.pairs.iter().find(|(_, l)| l == x) {
            out.push(u.clone());
        }
        out
    };

    // iterative DFS with colours; a grey hit closes a cycle
    let mut colour: BTreeMap<K, u8> = BTreeMap::new();
    for start in cx.basis.iter().flatten() {
        if colour.contains_key(start) {
            continue;
        }
        let mut stack: Vec<(K, Vec<K>)> = vec![(start.clone(), succ(start))];
        colour.insert(start.clone(), 1);
        while let Some((node, rest)) = stack.last_mut() {
            match rest.pop() {
                None => {
                    colour.insert(node.clone(), 2);
                    stack.pop();
                }
                Some(next) => match colour.get(&next) {
                    Some(1) => {
                        let pos = stack.iter().position(|(k, _)| *k == next).unwrap();
                        let cycle = stack[pos..].iter().map(|(k, _)| k.clone()).collect();
                        return Ok(MatchingReport {
                            acyclic: false,
                            homogeneous,
                            cycle_witness: Some(cycle),
                        });
                    }
                    Some(_) => {}
                    None => {
                        colour.insert(next.clone(), 1);
                        let s = succ(&next);
                        stack.push((next, s));
                    }
                },
            }
        }
    }
    Ok(MatchingReport {
        acyclic: true,
        homogeneous,
        cycle_witness: None,
    })
}

/// `C_{a,J} -> C_{a + e_{min J}, J ∖ min J}` for every cell with
/// `2 <= d - |a| <= |J| - 1` and `min J <= min Supp(a)` (vacuous for `a = 0`).
pub fn l_matching(n: usize, d: u32) -> Result<Matching<Cell>> {
    let cx = build_complex(n, d, None)?;
    Ok(l_matching_on(&cx, d))
}

/// The L-matching restricted to the cells present in `cx`.
pub fn l_matching_on(cx: &ComplexDesc<Cell>, d: u32) -> Matching<Cell> {
    let present: BTreeSet<&Cell> = cx.basis.iter().flatten().collect();
    let mut pairs = Vec::new();
    for c in cx.basis.iter().flatten() {
        if c.jset.is_empty() {
            continue;
        }
        let k = (d - c.base.degree()) as usize;
        let j0 = c.jset[0];
        if k >= 2 && k < c.jset.len() && c.base.min_supp().is_none_or(|m| j0 <= m) {
            let lower = Cell {
                base: c.base.plus(j0),
                jset: c.jset[1..].to_vec(),
            };
            if present.contains(&lower) {
                pairs.push((c.clone(), lower));
            }
        }
    }
    Matching { pairs }
}

/// Morse complex on the critical keys. For a critical `c`, start from `∂c`
/// and repeatedly cancel a term `u` that is the lower end of a pair `(w, u)`
/// by subtracting the matching multiple of `∂w`; acyclicity makes this
/// terminate. Remaining terms on matched (upper) keys are then dropped.
pub fn morse_complex<K: Ord + Clone + Debug>(
    cx: &ComplexDesc<K>,
    m: &Matching<K>,
) -> Result<ComplexDesc<K>> {
    let report = validate_matching(cx, m)?;
    if !report.acyclic {
        return Err(Error::CyclicMatching);
    }
    let matched = m.matched();
    let down = m.down();
    let basis: Vec<Vec<K>> = cx
        .basis
        .iter()
        .map(|b| b.iter().filter(|k| !matched.contains(k)).cloned().collect())
        .collect();
    let mut out = ComplexDesc::new(basis);
    for c in out.basis.iter().flatten() {
        let mut x = cx.boundary_of(c);
        loop {
            let Some(u) = x.keys().find(|k| down.contains_key(*k)).cloned() else {
                break;
            };
            let w = &down[&u];
            let dw = cx.boundary_of(w);
            let s = x.get(&u) / dw.get(&u);
            x.add_scaled(&dw, &-s);
        }
        x.retain(|k| !matched.contains(k));
        if !x.is_empty() {
            out.boundary.insert(c.clone(), x);
        }
    }
    out.mdeg = cx.mdeg.as_ref().map(|md| {
        md.iter()
            .filter(|(k, _)| !matched.contains(*k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    });
    Ok(out)
}

/// Lifts a matching on cells to the frame (the unit is never matched).
pub fn frame_matching<K: Ord + Clone>(m: &Matching<K>) -> Matching<FrameKey<K>> {
    Matching {
        pairs: m
            .pairs
            .iter()
            .map(|(u, l)| (FrameKey::Basis(u.clone()), FrameKey::Basis(l.clone())))
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub isomorphic: bool,
    pub critical_counts: Vec<usize>,
    pub l_ranks: Vec<usize>,
    /// `(tableau, ±1)`: the sign by which each L-basis element is rescaled;
    /// the unit is listed under `null`.
    pub signs: Vec<(Option<crate::tableaux::HookTableau>, i8)>,
    pub witness: Option<String>,
}

/// Compares the Morse complex of `H^d_n` under the L-matching with the
/// L-complex, mapping `C_{a,J}` to `f_J ⊗ f^a` (vertices to their generator
/// tableau). Coefficients must agree up to one sign per basis element; the
/// signs are solved for by propagation along nonzero entries.
pub fn verify_l_isomorphism(n: usize, d: u32) -> Result<IsoReport> {
    let cx = build_complex(n, d, None)?;
    let frame = frame_from_cells(&cx);
    let morse = morse_complex(&frame, &frame_matching(&l_matching_on(&cx, d)))?;
    let l = build_l_complex(n, d)?;

    let critical_counts: Vec<usize> = morse.ranks().into_iter().skip(1).collect();
    let l_ranks: Vec<usize> = l.ranks().into_iter().skip(1).collect();
    let fail = |why: String| IsoReport {
        isomorphic: false,
        critical_counts: critical_counts.clone(),
        l_ranks: l_ranks.clone(),
        signs: Vec::new(),
        witness: Some(why),
    };

    let to_l = |k: &FrameKey<Cell>| -> LKey {
        match k {
            FrameKey::Unit => FrameKey::Unit,
            FrameKey::Basis(c) => FrameKey::Basis(cell_to_tableau(c)),
        }
    };
    let l_keys: BTreeSet<&LKey> = l.basis.iter().flatten().collect();
    let mut mapped = BTreeSet::new();
    for k in morse.basis.iter().flatten() {
        let t = to_l(k);
        if !l_keys.contains(&t) {
            return Ok(fail(format!("critical {k:?} maps to non-basis {t:?}")));
        }
        if morse.mdeg_of(k) != l.mdeg_of(&t) {
            return Ok(fail(format!("multidegree mismatch at {k:?}")));
        }
        mapped.insert(t);
    }
    if mapped.len() != l_keys.len() {
        return Ok(fail("critical cells do not biject onto the L-basis".into()));
    }

    // edges of the sign-constraint graph: s(src) * s(dst) = ratio
    let mut adj: BTreeMap<LKey, Vec<(LKey, i8)>> = BTreeMap::new();
    for k in morse.basis.iter().flatten() {
        let src = to_l(k);
        let dm = morse.boundary_of(k).map_keys(|f| to_l(f));
        let dl = l.boundary_of(&src);
        if dm.keys().collect::<Vec<_>>() != dl.keys().collect::<Vec<_>>() {
            return Ok(fail(format!("support mismatch in the differential of {src:?}")));
        }
        for (f, v) in dm.iter() {
            let w = dl.get(f);
            let ratio = if *v == w {
                1
            } else if *v == -w.clone() {
                -1
            } else {
                return Ok(fail(format!("coefficient {v} vs {w} at {src:?} -> {f:?}")));
            };
            adj.entry(src.clone()).or_default().push((f.clone(), ratio));
            adj.entry(f.clone()).or_default().push((src.clone(), ratio));
        }
    }
    let mut sign: BTreeMap<LKey, i8> = BTreeMap::new();
    for start in l.basis.iter().flatten() {
        if sign.contains_key(start) {
            continue;
        }
        sign.insert(start.clone(), 1);
        let mut stack = vec![start.clone()];
        while let Some(u) = stack.pop() {
            let su = sign[&u];
            for (v, r) in adj.get(&u).into_iter().flatten() {
                match sign.get(v) {
                    None => {
                        sign.insert(v.clone(), su * r);
                        stack.push(v.clone());
                    }
                    Some(&sv) if sv != su * r => {
                        return Ok(fail(format!("no consistent sign between {u:?} and {v:?}")));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(IsoReport {
        isomorphic: true,
        critical_counts,
        l_ranks,
        signs: sign
            .into_iter()
            .map(|(k, s)| (k.basis().cloned(), s))
            .collect(),
        witness: None,
    })
}

/// Greedy random acyclic matching: scan candidate (face, coface) pairs in a
/// shuffled order and keep each one that leaves the matching acyclic.
pub fn greedy_matching<K, R>(cx: &ComplexDesc<K>, rng: &mut R, homogeneous_only: bool) -> Matching<K>
where
    K: Ord + Clone + Debug,
    R: rand::Rng,
{
    use rand::seq::SliceRandom;
    let mut cands: Vec<(K, K)> = Vec::new();
    for k in cx.basis.iter().flatten() {
        for f in cx.boundary_of(k).keys() {
            if !homogeneous_only || cx.mdeg_of(k) == cx.mdeg_of(f) {
                cands.push((k.clone(), f.clone()));
            }
        }
    }
    cands.shuffle(rng);
    let mut m = Matching::empty();
    let mut used = BTreeSet::new();
    for (u, l) in cands {
        if used.contains(&u) || used.contains(&l) {
            continue;
        }
        m.pairs.push((u.clone(), l.clone()));
        if validate_matching(cx, &m).is_ok_and(|r| r.acyclic) {
            used.insert(u);
            used.insert(l);
        } else {
            m.pairs.pop();
        }
    }
    m
}
