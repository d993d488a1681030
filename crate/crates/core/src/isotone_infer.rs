//! Deciding whether a graph of linear syzygies comes from isotone maps, and
//! reconstructing the maps chain by chain.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    chain_decomposition, children_i, edge_between, enumerate_points, parents_i, DownEdge,
    Exponent, SyzygyGraph,
};
use crate::polarization::{ls_edges, IsotoneFamily, LetterSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Condition {
    G1,
    G2,
    G3,
    G4,
    #[serde(rename = "BOUNDARY")]
    Boundary,
    #[serde(rename = "STAR")]
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub condition: Condition,
    /// Index of the poset `>=_i` (1-based), absent for boundary edges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub points: Vec<Exponent>,
    pub edges: Vec<DownEdge>,
    #[serde(rename = "humanReadable")]
    pub human_readable: String,
}

fn is_neighbor(a: &Exponent, b: &Exponent) -> bool {
    edge_between(a, b).is_some()
}

/// Connected components of the graph induced on `verts`, in first-seen order.
fn components(graph: &SyzygyGraph, verts: &[Exponent]) -> Vec<Vec<Exponent>> {
    let mut uf = UnionFind::<usize>::new(verts.len());
    for x in 0..verts.len() {
        for y in x + 1..verts.len() {
            if graph.adjacent(&verts[x], &verts[y]) {
                uf.union(x, y);
            }
        }
    }
    let mut comps: Vec<(usize, Vec<Exponent>)> = Vec::new();
    for (x, v) in verts.iter().enumerate() {
        let r = uf.find(x);
        match comps.iter_mut().find(|c| c.0 == r) {
            Some(c) => c.1.push(v.clone()),
            None => comps.push((r, vec![v.clone()])),
        }
    }
    comps.into_iter().map(|c| c.1).collect()
}

/// Boundary edges `(k e_i + (d-k+1) e_j; i, j)`, `1 <= k <= d`, missing from
/// the graph.
pub fn check_boundary(graph: &SyzygyGraph) -> Vec<Diagnostic> {
    let (n, d) = (graph.n, graph.d);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 1..=d {
                let mut apex = Exponent::zero(n);
                apex.0[i] = k;
                apex.0[j] = d - k + 1;
                let e = DownEdge::new(apex, i, j).expect("boundary apex has i, j in support");
                if !graph.contains(&e) {
                    let (a, b) = e.endpoints();
                    out.push(Diagnostic {
                        condition: Condition::Boundary,
                        index: None,
                        human_readable: format!("boundary edge {e} between {a} and {b} is missing"),
                        points: vec![a, b],
                        edges: vec![e],
                    });
                }
            }
        }
    }
    out
}

/// Evaluates (G1)-(G4) for the poset `>=_i` by exhaustive enumeration, plus
/// the boundary edges. An empty list means the graph passes.
pub fn check_conditions(graph: &SyzygyGraph, i: usize) -> Result<Vec<Diagnostic>> {
    let (n, d) = (graph.n, graph.d);
    if n < 2 {
        return Err(Error::InvalidParameters("isotone conditions need n >= 2".into()));
    }
    if i >= n {
        return Err(Error::InvalidParameters(format!("index {} out of range", i + 1)));
    }
    let idx = Some(i + 1);
    let pts = enumerate_points(n, d)?;
    let mut out = check_boundary(graph);
    let missing = |a: &Exponent, b: &Exponent| -> Option<DownEdge> {
        edge_between(a, b).filter(|e| !graph.contains(e))
    };

    // (G1): children of b form at most b_i cliques
    for b in pts.iter().filter(|b| b.0[i] > 0) {
        let kids = children_i(b, i);
        let comps = components(graph, &kids);
        let k = b.0[i] as usize;
        if comps.len() > k {
            out.push(Diagnostic {
                condition: Condition::G1,
                index: idx,
                points: std::iter::once(b.clone()).chain(kids.iter().cloned()).collect(),
                edges: Vec::new(),
                human_readable: format!(
                    "children of {b} in >={} form {} components, more than its rank {k}",
                    i + 1,
                    comps.len()
                ),
            });
        }
        for comp in &comps {
            for x in 0..comp.len() {
                for y in x + 1..comp.len() {
                    if let Some(e) = missing(&comp[x], &comp[y]) {
                        out.push(Diagnostic {
                            condition: Condition::G1,
                            index: idx,
                            points: vec![b.clone(), comp[x].clone(), comp[y].clone()],
                            edges: vec![e],
                            human_readable: format!(
                                "component of the children of {b} is not complete: {} and {} are not adjacent",
                                comp[x], comp[y]
                            ),
                        });
                    }
                }
            }
        }
    }

    // (G2): three pairwise non-adjacent parents with a common parent
    for a in &pts {
        let ps = parents_i(a, i);
        for x in 0..ps.len() {
            for y in x + 1..ps.len() {
                for z in y + 1..ps.len() {
                    let trip = [&ps[x], &ps[y], &ps[z]];
                    let pairwise_apart = (0..3).all(|s| {
                        (s + 1..3).all(|t| !graph.adjacent(trip[s], trip[t]))
                    });
                    if !pairwise_apart {
                        continue;
                    }
                    let common: BTreeSet<Exponent> = trip
                        .iter()
                        .map(|p| parents_i(p, i).into_iter().collect::<BTreeSet<_>>())
                        .reduce(|s, t| &s & &t)
                        .unwrap();
                    if let Some(top) = common.into_iter().next() {
                        out.push(Diagnostic {
                            condition: Condition::G2,
                            index: idx,
                            points: vec![a.clone(), ps[x].clone(), ps[y].clone(), ps[z].clone(), top],
                            edges: Vec::new(),
                            human_readable: format!(
                                "{a} has three pairwise non-adjacent parents sharing a parent"
                            ),
                        });
                    }
                }
            }
        }
    }

    // (G3): elements covering (or covered by) two components of the same
    // child set must be pairwise adjacent
    for c in pts.iter().filter(|c| c.0[i] > 0) {
        let comps = components(graph, &children_i(c, i));
        for x in 0..comps.len() {
            for y in x + 1..comps.len() {
                let up = |comp: &[Exponent]| -> BTreeSet<Exponent> {
                    comp.iter().flat_map(|f| parents_i(f, i)).collect()
                };
                let down = |comp: &[Exponent]| -> BTreeSet<Exponent> {
                    comp.iter().flat_map(|f| children_i(f, i)).collect()
                };
                for (dir, set) in [
                    ("cover", &up(&comps[x]) & &up(&comps[y])),
                    ("are covered by", &down(&comps[x]) & &down(&comps[y])),
                ] {
                    let set: Vec<Exponent> = set.into_iter().collect();
                    for s in 0..set.len() {
                        for t in s + 1..set.len() {
                            if !is_neighbor(&set[s], &set[t]) {
                                continue;
                            }
                            if let Some(e) = missing(&set[s], &set[t]) {
                                out.push(Diagnostic {
                                    condition: Condition::G3,
                                    index: idx,
                                    points: vec![
                                        c.clone(),
                                        comps[x][0].clone(),
                                        comps[y][0].clone(),
                                        set[s].clone(),
                                        set[t].clone(),
                                    ],
                                    edges: vec![e],
                                    human_readable: format!(
                                        "{} and {} {dir} elements of two components below {c} but are not adjacent",
                                        set[s], set[t]
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    // (G4): f ~ g, d a common child, a a child of f, b a child of g;
    // d ~ a and a ~ b force d ~ b
    for e in graph.edges.iter() {
        let (f, g) = e.endpoints();
        if f.0[i] != g.0[i] || f.0[i] == 0 {
            continue;
        }
        for (f, g) in [(&f, &g), (&g, &f)] {
            let kf = children_i(f, i);
            let kg = children_i(g, i);
            for dd in kf.iter().filter(|x| kg.contains(x)) {
                for a in kf.iter().filter(|x| *x != dd) {
                    if !graph.adjacent(dd, a) {
                        continue;
                    }
                    for b in kg.iter().filter(|x| *x != dd && *x != a) {
                        if graph.adjacent(a, b) && !graph.adjacent(dd, b) {
                            out.push(Diagnostic {
                                condition: Condition::G4,
                                index: idx,
                                points: vec![f.clone(), g.clone(), dd.clone(), a.clone(), b.clone()],
                                edges: edge_between(dd, b).into_iter().collect(),
                                human_readable: format!(
                                    "{dd} ~ {a} ~ {b} below the edge {f} ~ {g}, but {dd} and {b} are not adjacent"
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All diagnostics over every index, boundary edges reported once.
pub fn check_all(graph: &SyzygyGraph) -> Result<Vec<Diagnostic>> {
    let mut out = check_boundary(graph);
    for i in 0..graph.n {
        out.extend(
            check_conditions(graph, i)?
                .into_iter()
                .filter(|d| d.condition != Condition::Boundary),
        );
    }
    Ok(out)
}

/// The permutation word labelling chain `C^p` of `>=_i`; letters 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainWord {
    pub i: usize,
    pub p: Exponent,
    pub word: Vec<usize>,
}

/// Labels the chains of `>=_i` in `≺` order. Chain `C^p` starts from the word
/// of `C^{p - e_m}` (`m = min Supp p`) and swaps positions `k, k+1` for each
/// rank `k = 1..=d-|p|` at which `C^p_k` is not adjacent to `C^{p-e_m}_k`.
/// Rank 0 never swaps: both labels are empty.
pub fn infer_words(graph: &SyzygyGraph, i: usize) -> Result<Vec<ChainWord>> {
    let d = graph.d as usize;
    let parts = chain_decomposition(graph.n, graph.d, i)?;
    let mut words: BTreeMap<Exponent, Vec<usize>> = BTreeMap::new();
    let mut elements: BTreeMap<Exponent, Vec<Exponent>> = BTreeMap::new();
    let mut out = Vec::with_capacity(parts.len());
    for part in &parts {
        let p = &part.id.p;
        let word = match p.min_supp() {
            None => (1..=d).collect(),
            Some(m) => {
                let prev = p.minus(m).unwrap();
                let mut w = words[&prev].clone();
                let below = &elements[&prev];
                for k in 1..part.elements.len() {
                    if !graph.adjacent(&part.elements[k], &below[k]) {
                        w.swap(k - 1, k);
                    }
                }
                w
            }
        };
        words.insert(p.clone(), word.clone());
        elements.insert(p.clone(), part.elements.clone());
        out.push(ChainWord {
            i: i + 1,
            p: p.clone(),
            word,
        });
    }
    Ok(out)
}

/// Reconstructs an isotone family whose LS graph is `graph`. Fails with the
/// diagnostics when the conditions do not hold.
pub fn infer_family(graph: &SyzygyGraph) -> Result<IsotoneFamily> {
    let diags = check_all(graph)?;
    if !diags.is_empty() {
        return Err(Error::ConditionsFailed(diags));
    }
    infer_family_unchecked(graph)
}

/// The construction without the condition check; used to probe graphs.
pub fn infer_family_unchecked(graph: &SyzygyGraph) -> Result<IsotoneFamily> {
    let (n, d) = (graph.n, graph.d);
    if d > 32 {
        return Err(Error::InvalidParameters("d > 32 is not supported".into()));
    }
    let mut tables: BTreeMap<Exponent, Vec<LetterSet>> = enumerate_points(n, d)?
        .into_iter()
        .map(|a| (a, vec![0; n]))
        .collect();
    if n == 1 {
        for (a, sets) in tables.iter_mut() {
            sets[0] = crate::polarization::initial_segment(a.0[0]);
        }
    } else {
        for i in 0..n {
            let parts = chain_decomposition(n, d, i)?;
            for (part, cw) in parts.iter().zip(infer_words(graph, i)?) {
                for (k, a) in part.elements.iter().enumerate() {
                    let mask = cw.word[..k].iter().fold(0, |m, &l| m | 1 << (l - 1));
                    tables.get_mut(a).unwrap()[i] = mask;
                }
            }
        }
    }
    Ok(IsotoneFamily {
        n,
        d,
        u: None,
        tables,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub holds: bool,
    /// An edge of the graph that is not an LS edge of the family.
    pub missing: Vec<DownEdge>,
    /// An LS edge of the family that is not in the graph.
    pub extra: Vec<DownEdge>,
}

/// Property (*): the family's LS edges are exactly the graph's edges.
pub fn verify_star(graph: &SyzygyGraph, chi: &IsotoneFamily) -> Result<StarReport> {
    let ls = ls_edges(chi)?;
    let missing: Vec<DownEdge> = graph.edges.difference(&ls.edges).cloned().collect();
    let extra: Vec<DownEdge> = ls.edges.difference(&graph.edges).cloned().collect();
    Ok(StarReport {
        holds: missing.is_empty() && extra.is_empty(),
        missing,
        extra,
    })
}

/// Diagnostic for a failed (*) check.
pub fn star_diagnostic(r: &StarReport) -> Option<Diagnostic> {
    let e = r.missing.first().or(r.extra.first())?;
    let (a, b) = e.endpoints();
    Some(Diagnostic {
        condition: Condition::Star,
        index: None,
        points: vec![a, b],
        edges: vec![e.clone()],
        human_readable: format!(
            "edge {e} is {} the graph but {} an LS edge of the inferred family",
            if r.missing.is_empty() { "not in" } else { "in" },
            if r.missing.is_empty() { "is" } else { "not" }
        ),
    })
}

/// The full skeleton with each non-boundary edge dropped with probability
/// `p`.
pub fn random_subgraph<R: Rng>(n: usize, d: u32, p: f64, rng: &mut R) -> Result<SyzygyGraph> {
    let full = crate::lattice::full_skeleton(n, d, None)?;
    let keep: Vec<DownEdge> = full
        .edges
        .into_iter()
        .filter(|e| e.apex.support().len() <= 2 || !rng.gen_bool(p))
        .collect();
    SyzygyGraph::new(n, d, keep)
}
