//! Isotone families, the squarefree ideals they define, linear-syzygy edges,
//! and the spanning-tree and tableau-spanning criteria for a family to be a
//! polarization (also for restricted powers `m^d(<=u)`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{ComplexDesc, FrameKey};
use crate::error::{Error, Result};
use crate::hypersimplex::{build_complex, frame_from_cells, Cell};
use crate::lattice::{
    children_i, down_graph, enumerate_points_leq, parents_i, DownEdge, Exponent, SyzygyGraph,
};
use crate::linalg::span_rank;
use crate::morse::{frame_matching, l_matching_on, morse_complex};
use crate::tableaux::{standard_basis, straighten, HookTableau};

/// Letters are `0..d` in memory, bit `j` of a mask standing for letter `j+1`.
pub type LetterSet = u32;

pub fn letters(mask: LetterSet) -> Vec<usize> {
    (0..32).filter(|j| mask >> j & 1 == 1).collect()
}

pub fn initial_segment(k: u32) -> LetterSet {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// Rank-preserving isotone maps `X_i : (Delta(n,d)_{<=u}, >=_i) -> B_d`,
/// stored per lattice point as one letter set per index.
#[derive(Clone, PartialEq, Eq)]
pub struct IsotoneFamily {
    pub n: usize,
    pub d: u32,
    pub u: Option<Exponent>,
    pub tables: BTreeMap<Exponent, Vec<LetterSet>>,
}

impl fmt::Debug for IsotoneFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsotoneFamily(n={}, d={}", self.n, self.d)?;
        if let Some(u) = &self.u {
            write!(f, ", u={u}")?;
        }
        for (a, sets) in &self.tables {
            write!(f, ", {a}:")?;
            for s in sets {
                let l: Vec<String> = letters(*s).iter().map(|j| (j + 1).to_string()).collect();
                write!(f, "{{{}}}", l.join(""))?;
            }
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyEntry {
    point: Exponent,
    sets: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    n: usize,
    d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<Exponent>,
    #[serde(rename = "X")]
    x: Vec<FamilyEntry>,
}

impl Serialize for IsotoneFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let order = enumerate_points_leq(self.n, self.d, self.u.as_ref())
            .map_err(serde::ser::Error::custom)?;
        let x = order
            .into_iter()
            .filter_map(|p| {
                self.tables.get(&p).map(|sets| FamilyEntry {
                    sets: sets
                        .iter()
                        .map(|m| letters(*m).into_iter().map(|j| j + 1).collect())
                        .collect(),
                    point: p,
                })
            })
            .collect();
        FamilyRepr {
            n: self.n,
            d: self.d,
            u: self.u.clone(),
            x,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IsotoneFamily {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = FamilyRepr::deserialize(de)?;
        if r.d > 32 {
            return Err(D::Error::custom("d > 32 is not supported"));
        }
        let mut tables = BTreeMap::new();
        for e in r.x {
            let mut masks = Vec::with_capacity(e.sets.len());
            for set in e.sets {
                let mut m: LetterSet = 0;
                for j in set {
                    if j == 0 || j > r.d as usize {
                        return Err(D::Error::custom(format!(
                            "letter {j} outside 1..={} at {}",
                            r.d, e.point
                        )));
                    }
                    m |= 1 << (j - 1);
                }
                masks.push(m);
            }
            if tables.insert(e.point.clone(), masks).is_some() {
                return Err(D::Error::custom(format!("point {} listed twice", e.point)));
            }
        }
        Ok(IsotoneFamily {
            n: r.n,
            d: r.d,
            u: r.u,
            tables,
        })
    }
}

impl IsotoneFamily {
    pub fn points(&self) -> Vec<Exponent> {
        self.tables.keys().cloned().collect()
    }

    pub fn get(&self, a: &Exponent, i: usize) -> LetterSet {
        self.tables[a][i]
    }

    fn in_domain(&self, a: &Exponent) -> bool {
        self.tables.contains_key(a)
    }

    /// Domain, rank preservation and isotonicity on every cover.
    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidFamily(s));
        if self.n == 0 || self.d == 0 || self.d > 32 {
            return bad(format!("unsupported parameters n={}, d={}", self.n, self.d));
        }
        let domain = enumerate_points_leq(self.n, self.d, self.u.as_ref())?;
        if domain.len() != self.tables.len() || domain.iter().any(|a| !self.in_domain(a)) {
            return bad(format!(
                "tables must cover exactly the {} lattice points of the domain",
                domain.len()
            ));
        }
        let all = initial_segment(self.d);
        for (a, sets) in &self.tables {
            if sets.len() != self.n {
                return bad(format!("{a} has {} sets, expected {}", sets.len(), self.n));
            }
            for (i, &m) in sets.iter().enumerate() {
                if m & !all != 0 {
                    return bad(format!("X_{}({a}) uses a letter above {}", i + 1, self.d));
                }
                if m.count_ones() != a.0[i] {
                    return bad(format!(
                        "X_{}({a}) has size {}, expected {}",
                        i + 1,
                        m.count_ones(),
                        a.0[i]
                    ));
                }
            }
        }
        for a in &domain {
            for i in 0..self.n {
                for b in parents_i(a, i) {
                    if self.in_domain(&b) && self.get(a, i) & !self.get(&b, i) != 0 {
                        return bad(format!(
                            "X_{}({a}) is not contained in X_{}({b})",
                            i + 1,
                            i + 1
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The squarefree generator of `a`: variable `x_{ij}` sits at index
    /// `i*d + j`.
    pub fn generator(&self, a: &Exponent) -> Exponent {
        let d = self.d as usize;
        let mut g = vec![0u32; self.n * d];
        for (i, &m) in self.tables[a].iter().enumerate() {
            for j in letters(m) {
                g[i * d + j] = 1;
            }
        }
        Exponent(g)
    }
}

/// `X_i(a) = {1, ..., a_i}`.
pub fn standard_family(n: usize, d: u32, u: Option<&Exponent>) -> Result<IsotoneFamily> {
    if d > 32 {
        return Err(Error::InvalidParameters("d > 32 is not supported".into()));
    }
    let tables = enumerate_points_leq(n, d, u)?
        .into_iter()
        .map(|a| {
            let sets = a.0.iter().map(|&k| initial_segment(k)).collect();
            (a, sets)
        })
        .collect();
    Ok(IsotoneFamily {
        n,
        d,
        u: u.cloned(),
        tables,
    })
}

/// The polarized ideal in `k[x_{ij}]`, one generator per lattice point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIdealTilde {
    pub n: usize,
    pub d: u32,
    pub points: Vec<Exponent>,
    pub generators: Vec<Exponent>,
}

impl MonomialIdealTilde {
    pub fn variable_name(&self, v: usize) -> String {
        let d = self.d as usize;
        format!("x{}_{}", v / d + 1, v % d + 1)
    }
}

pub fn realize_ideal(chi: &IsotoneFamily) -> Result<MonomialIdealTilde> {
    chi.validate()?;
    let points = enumerate_points_leq(chi.n, chi.d, chi.u.as_ref())?;
    let generators = points.iter().map(|a| chi.generator(a)).collect();
    Ok(MonomialIdealTilde {
        n: chi.n,
        d: chi.d,
        points,
        generators,
    })
}

/// Substitutes `x_{ij} -> x_i`.
pub fn depolarize(ideal: &MonomialIdealTilde) -> Vec<Exponent> {
    let d = ideal.d as usize;
    ideal
        .generators
        .iter()
        .map(|g| {
            let mut a = vec![0u32; ideal.n];
            for (v, &e) in g.0.iter().enumerate() {
                a[v / d] += e;
            }
            Exponent(a)
        })
        .collect()
}

/// Every one-skeleton edge whose endpoints both lie in the domain.
pub fn domain_edges(n: usize, d: u32, u: Option<&Exponent>) -> Result<Vec<DownEdge>> {
    let mut out = Vec::new();
    for c in enumerate_points_leq(n, d + 1, None)? {
        for e in down_graph(&c, None)?.1 {
            let (a, b) = e.endpoints();
            if u.is_none_or(|u| a.divides(u) && b.divides(u)) {
                out.push(e);
            }
        }
    }
    Ok(out)
}

/// Linear-syzygy edges of a family. Each edge is decided twice: by equality
/// of `X_p` for `p != i, j`, and by the two generators sharing a factor of
/// degree `d - 1`. The two must agree on isotone families.
pub fn ls_edges(chi: &IsotoneFamily) -> Result<SyzygyGraph> {
    chi.validate()?;
    let mut edges = BTreeSet::new();
    for e in domain_edges(chi.n, chi.d, chi.u.as_ref())? {
        let (a, b) = e.endpoints();
        let by_table = (0..chi.n)
            .filter(|&p| p != e.i && p != e.j)
            .all(|p| chi.get(&a, p) == chi.get(&b, p));
        let by_monomial = chi.generator(&a).gcd(&chi.generator(&b)).degree() + 1 == chi.d;
        if by_table != by_monomial {
            return Err(Error::CriterionDisagreement(format!(
                "edge {e}: table equality says {by_table}, common factor says {by_monomial}; {chi:?}"
            )));
        }
        if by_table {
            edges.insert(e);
        }
    }
    SyzygyGraph::new(chi.n, chi.d, edges)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningReport {
    pub spans: bool,
    /// First apex (in enumeration order) whose down-graph is disconnected.
    pub witness: Option<Exponent>,
}

fn down_graph_connected(c: &Exponent, present: impl Fn(&DownEdge) -> bool, r: Option<&[usize]>) -> Result<bool> {
    let (verts, edges) = down_graph(c, r)?;
    let idx: Vec<usize> = verts
        .iter()
        .map(|v| (0..c.n()).find(|&t| v.0[t] + 1 == c.0[t]).unwrap())
        .collect();
    let pos = |t: usize| idx.iter().position(|&x| x == t).unwrap();
    let mut uf = UnionFind::<usize>::new(verts.len());
    for e in edges.iter().filter(|e| present(e)) {
        uf.union(pos(e.i), pos(e.j));
    }
    Ok((1..verts.len()).all(|x| uf.equiv(0, x)))
}

/// For every apex `c` of degree `d+1` (bounded by `u` when given), the graph's
/// edges inside `D(c)` must connect all of its vertices.
pub fn spanning_tree_check(graph: &SyzygyGraph, u: Option<&Exponent>) -> Result<SpanningReport> {
    let apexes = enumerate_points_leq(graph.n, graph.d + 1, u)?;
    let results: Vec<Result<bool>> = apexes
        .par_iter()
        .map(|c| down_graph_connected(c, |e| graph.contains(e), None))
        .collect();
    for (c, ok) in apexes.iter().zip(results) {
        if !ok? {
            return Ok(SpanningReport {
                spans: false,
                witness: Some(c.clone()),
            });
        }
    }
    Ok(SpanningReport {
        spans: true,
        witness: None,
    })
}

/// `(c; r, s)` is an R-LS edge when `X_p` agrees on its endpoints for all
/// `p` in `R \ {r, s}`. Returns whether these edges span `D_R(c)`.
pub fn r_ls_check(chi: &IsotoneFamily, c: &Exponent, r: &[usize]) -> Result<bool> {
    let supp = c.support();
    if let Some(bad) = r.iter().find(|t| !supp.contains(t)) {
        return Err(Error::InvalidParameters(format!(
            "index {} is not in the support of {c}",
            bad + 1
        )));
    }
    let is_r_ls = |e: &DownEdge| {
        let (a, b) = e.endpoints();
        chi.in_domain(&a)
            && chi.in_domain(&b)
            && r
                .iter()
                .filter(|&&p| p != e.i && p != e.j)
                .all(|&p| chi.get(&a, p) == chi.get(&b, p))
    };
    down_graph_connected(c, is_r_ls, Some(r))
}

/// `f_J ⊗ f^α` with `J` possibly empty (for `ψ`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WedgeSym {
    pub wedge: Vec<usize>,
    pub sym: Exponent,
}

impl WedgeSym {
    pub fn tableau(&self) -> Result<HookTableau> {
        HookTableau::new(self.wedge.clone(), self.sym.clone())
    }
}

/// `ψ(a) = f^a`.
pub fn psi(a: &Exponent) -> WedgeSym {
    WedgeSym {
        wedge: Vec::new(),
        sym: a.clone(),
    }
}

/// `ω(c, R) = f_R ⊗ f^{c - Σ_R e_r}`.
pub fn omega(c: &Exponent, r: &[usize]) -> Result<WedgeSym> {
    let mut wedge = r.to_vec();
    wedge.sort_unstable();
    wedge.dedup();
    if wedge.len() != r.len() || wedge.is_empty() {
        return Err(Error::InvalidParameters("R must be a non-empty set".into()));
    }
    let mut sym = c.clone();
    for &t in &wedge {
        sym = sym.minus(t).ok_or_else(|| {
            Error::InvalidParameters(format!("index {} is not in the support of {c}", t + 1))
        })?;
    }
    Ok(WedgeSym { wedge, sym })
}

/// `θ(c; i, j) = f_i ∧ f_j ⊗ f^{c - e_i - e_j}`.
pub fn theta(e: &DownEdge) -> HookTableau {
    let row = e.apex.minus(e.i).and_then(|x| x.minus(e.j)).unwrap();
    HookTableau {
        col: vec![e.i, e.j],
        row,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TabSpanReport {
    pub spans: bool,
    pub rank: usize,
    pub module_rank: usize,
    /// First apex whose multidegree strand has a rank deficit.
    pub witness: Option<Exponent>,
}

/// Straightens the θ-labels of the family's LS edges and compares the rank of
/// their span with the rank of `L^1_d` (restricted to multidegrees `<= u`),
/// one multidegree strand at a time.
pub fn tab_spanning_check(chi: &IsotoneFamily) -> Result<TabSpanReport> {
    let graph = ls_edges(chi)?;
    tab_spanning_of_graph(&graph, chi.u.as_ref())
}

pub fn tab_spanning_of_graph(graph: &SyzygyGraph, u: Option<&Exponent>) -> Result<TabSpanReport> {
    let mut target: BTreeMap<Exponent, usize> = BTreeMap::new();
    if graph.n >= 2 {
        for t in standard_basis(1, graph.d as usize, graph.n)? {
            let m = t.mdeg();
            if u.is_none_or(|u| m.divides(u)) {
                *target.entry(m).or_default() += 1;
            }
        }
    }
    let mut labels: BTreeMap<Exponent, Vec<HookTableau>> = BTreeMap::new();
    for e in &graph.edges {
        if u.is_none_or(|u| e.apex.divides(u)) {
            labels.entry(e.apex.clone()).or_default().push(theta(e));
        }
    }
    let strands: Vec<(Exponent, usize, usize)> = target
        .par_iter()
        .map(|(m, &want)| {
            let chains: Vec<_> = labels
                .get(m)
                .map(|ts| ts.iter().map(straighten).collect())
                .unwrap_or_default();
            (m.clone(), span_rank(&chains), want)
        })
        .collect();
    let rank = strands.iter().map(|s| s.1).sum();
    let module_rank = strands.iter().map(|s| s.2).sum();
    let witness = strands.iter().find(|s| s.1 < s.2).map(|s| s.0.clone());
    Ok(TabSpanReport {
        spans: witness.is_none(),
        rank,
        module_rank,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarizationVerdict {
    pub spanning_tree: bool,
    pub spanning_witness: Option<Exponent>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tab_span: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
}

impl PolarizationVerdict {
    pub fn is_polarization(&self) -> bool {
        self.spanning_tree
    }
}

/// The spanning-tree criterion decides; with `cross_check` the tableau
/// criterion and the Betti oracle are evaluated too and must agree.
pub fn is_polarization(chi: &IsotoneFamily, cross_check: bool, guard: usize) -> Result<PolarizationVerdict> {
    chi.validate()?;
    let graph = ls_edges(chi)?;
    let st = spanning_tree_check(&graph, chi.u.as_ref())?;
    let mut v = PolarizationVerdict {
        spanning_tree: st.spans,
        spanning_witness: st.witness,
        tab_span: None,
        oracle: None,
    };
    if cross_check {
        let tab = tab_spanning_of_graph(&graph, chi.u.as_ref())?;
        let oracle = crate::oracle::verify_polarization_bruteforce(chi, guard)?;
        v.tab_span = Some(tab.spans);
        v.oracle = Some(oracle.passes);
        if tab.spans != st.spans || oracle.passes != st.spans {
            return Err(Error::CriterionDisagreement(format!(
                "spanning tree {} / tableau span {} (rank {} of {}) / oracle {} (betti {:?} vs {:?}); family {}",
                st.spans,
                tab.spans,
                tab.rank,
                tab.module_rank,
                oracle.passes,
                oracle.betti,
                oracle.expected,
                serde_json::to_string(chi)?
            )));
        }
    }
    Ok(v)
}

/// Everything attached to the restricted power `m^d(<=u)`.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictedSetup {
    pub n: usize,
    pub d: u32,
    pub u: Exponent,
    pub generators: Vec<Exponent>,
    /// Cells of `H^d_n(<=u)` by dimension.
    pub cell_counts: Vec<usize>,
    /// Critical cells of the restricted L-matching by dimension.
    pub critical_counts: Vec<usize>,
    /// Standard tableaux of multidegree `<= u`, by column length.
    pub l_ranks: Vec<usize>,
    #[serde(skip)]
    pub complex: Option<ComplexDesc<Cell>>,
    #[serde(skip)]
    pub morse: Option<ComplexDesc<FrameKey<Cell>>>,
}

impl RestrictedSetup {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Ranks of the L-complex restricted to multidegrees `<= u` (degree 1 first).
pub fn restricted_l_ranks(n: usize, d: u32, u: Option<&Exponent>) -> Result<Vec<usize>> {
    (0..n)
        .map(|a| {
            Ok(standard_basis(a, d as usize, n)?
                .into_iter()
                .filter(|t| u.is_none_or(|u| t.mdeg().divides(u)))
                .count())
        })
        .collect()
}

/// An empty generator set is reported through `is_empty`, not as an error.
pub fn restricted_power_setup(n: usize, d: u32, u: &Exponent) -> Result<RestrictedSetup> {
    if u.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "bound {u} has length {}, expected {n}",
            u.n()
        )));
    }
    let generators = enumerate_points_leq(n, d, Some(u))?;
    let l_ranks = restricted_l_ranks(n, d, Some(u))?;
    if generators.is_empty() {
        return Ok(RestrictedSetup {
            n,
            d,
            u: u.clone(),
            generators,
            cell_counts: Vec::new(),
            critical_counts: Vec::new(),
            l_ranks,
            complex: None,
            morse: None,
        });
    }
    let complex = build_complex(n, d, Some(u))?;
    let frame = frame_from_cells(&complex);
    let morse = morse_complex(&frame, &frame_matching(&l_matching_on(&complex, d)))?;
    Ok(RestrictedSetup {
        n,
        d,
        u: u.clone(),
        cell_counts: complex.ranks(),
        critical_counts: morse.ranks().into_iter().skip(1).collect(),
        generators,
        l_ranks,
        complex: Some(complex),
        morse: Some(morse),
    })
}

/// Edges whose θ-label is a standard tableau: the linear syzygies of the
/// L-complex's first map.
pub fn l_complex_graph(n: usize, d: u32) -> Result<SyzygyGraph> {
    let edges = domain_edges(n, d, None)?
        .into_iter()
        .filter(|e| theta(e).is_standard());
    SyzygyGraph::new(n, d, edges)
}

/// Domain points sorted by rank in `>=_i` (ties in enumeration order).
fn rank_order(n: usize, d: u32, i: usize, u: Option<&Exponent>) -> Result<Vec<Exponent>> {
    let mut pts = enumerate_points_leq(n, d, u)?;
    pts.sort_by_key(|a| a.0[i]);
    Ok(pts)
}

/// All rank-preserving isotone maps `X_i`, as letter sets aligned with the
/// rank order of the domain. Depth-first, letters tried in increasing order,
/// so the output order is canonical.
pub fn enumerate_isotone_maps(
    n: usize,
    d: u32,
    i: usize,
    u: Option<&Exponent>,
    limit: usize,
) -> Result<(Vec<Exponent>, Vec<Vec<LetterSet>>)> {
    let pts = rank_order(n, d, i, u)?;
    let pos: BTreeMap<&Exponent, usize> = pts.iter().enumerate().map(|(x, a)| (a, x)).collect();
    let kids: Vec<Vec<usize>> = pts
        .iter()
        .map(|b| {
            children_i(b, i)
                .iter()
                .filter_map(|c| pos.get(c).copied())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0 as LetterSet; pts.len()];
    fn rec(
        x: usize,
        pts: &[Exponent],
        kids: &[Vec<usize>],
        i: usize,
        d: u32,
        cur: &mut Vec<LetterSet>,
        out: &mut Vec<Vec<LetterSet>>,
        limit: usize,
    ) -> Result<()> {
        if x == pts.len() {
            if out.len() >= limit {
                return Err(Error::GuardExceeded {
                    what: "isotone maps per index",
                    value: out.len() as u64 + 1,
                    limit: limit as u64,
                });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let k = pts[x].0[i];
        let below = kids[x].iter().fold(0, |m, &c| m | cur[c]);
        let have = below.count_ones();
        if have > k {
            return Ok(());
        }
        let free: Vec<usize> = (0..d as usize).filter(|j| below >> j & 1 == 0).collect();
        for extra in crate::combinations(free.len(), (k - have) as usize) {
            cur[x] = extra.iter().fold(below, |m, &t| m | 1 << free[t]);
            rec(x + 1, pts, kids, i, d, cur, out, limit)?;
        }
        Ok(())
    }
    rec(0, &pts, &kids, i, d, &mut cur, &mut out, limit)?;
    Ok((pts, out))
}

/// Assembles a family from one enumerated map per index.
pub fn family_from_maps(
    n: usize,
    d: u32,
    u: Option<&Exponent>,
    maps: &[(&[Exponent], &[LetterSet])],
) -> IsotoneFamily {
    let mut tables: BTreeMap<Exponent, Vec<LetterSet>> = BTreeMap::new();
    for (i, (pts, sets)) in maps.iter().enumerate() {
        for (a, &m) in pts.iter().zip(sets.iter()) {
            tables.entry(a.clone()).or_insert_with(|| vec![0; n])[i] = m;
        }
    }
    IsotoneFamily {
        n,
        d,
        u: u.cloned(),
        tables,
    }
}

/// A random isotone family: each `X_i` is built bottom-up in rank order,
/// extending the union of the children's labels by random letters. Rank
/// violations restart that index (they cannot occur when `n <= 3` or `d <= 2`,
/// but can in general).
pub fn random_family<R: Rng>(n: usize, d: u32, u: Option<&Exponent>, rng: &mut R) -> Result<IsotoneFamily> {
    if d > 32 {
        return Err(Error::InvalidParameters("d > 32 is not supported".into()));
    }
    let mut tables: BTreeMap<Exponent, Vec<LetterSet>> = enumerate_points_leq(n, d, u)?
        .into_iter()
        .map(|a| (a, vec![0; n]))
        .collect();
    for i in 0..n {
        let pts = rank_order(n, d, i, u)?;
        'attempt: for attempt in 0.. {
            if attempt == 10_000 {
                return Err(Error::GuardExceeded {
                    what: "sampler restarts",
                    value: attempt,
                    limit: attempt,
                });
            }
            let mut label: BTreeMap<&Exponent, LetterSet> = BTreeMap::new();
            for b in &pts {
                let k = b.0[i];
                let below = children_i(b, i)
                    .iter()
                    .filter_map(|c| label.get(c))
                    .fold(0, |m, &x| m | x);
                if below.count_ones() > k {
                    continue 'attempt;
                }
                let mut free: Vec<usize> = (0..d as usize).filter(|j| below >> j & 1 == 0).collect();
                free.shuffle(rng);
                let m = free[..(k - below.count_ones()) as usize]
                    .iter()
                    .fold(below, |m, &j| m | 1 << j);
                label.insert(b, m);
            }
            for (b, m) in label {
                tables.get_mut(b).unwrap()[i] = m;
            }
            break;
        }
    }
    Ok(IsotoneFamily {
        n,
        d,
        u: u.cloned(),
        tables,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::lattice::full_skeleton;

    fn e(v: &[u32]) -> Exponent {
        Exponent(v.to_vec())
    }

    fn edge(apex: &[u32], i: usize, j: usize) -> DownEdge {
        DownEdge::new(e(apex), i - 1, j - 1).unwrap()
    }

    #[test]
    fn standard_family_basics() {
        let f = standard_family(3, 2, None).unwrap();
        f.validate().unwrap();
        assert_eq!(f.get(&e(&[2, 0, 0]), 0), 0b11);
        assert_eq!(ls_edges(&f).unwrap(), full_skeleton(3, 2, None).unwrap());
    }

    #[test]
    fn realize_two_variables() {
        let f = standard_family(2, 2, None).unwrap();
        let id = realize_ideal(&f).unwrap();
        // x11 x12, x11 x21, x21 x22 over (x11, x12, x21, x22)
        assert_eq!(
            id.generators,
            vec![e(&[1, 1, 0, 0]), e(&[1, 0, 1, 0]), e(&[0, 0, 1, 1])]
        );
        assert_eq!(depolarize(&id), id.points);
        assert_eq!(id.variable_name(2), "x2_1");
    }

    #[test]
    fn validation_rejects_bad_tables() {
        // X_1(1,2,0) = {3} is not below X_1(2,1,0) = {1,2}
        let mut f = standard_family(3, 3, None).unwrap();
        f.tables.get_mut(&e(&[1, 2, 0])).unwrap()[0] = 0b100;
        assert!(matches!(f.validate(), Err(Error::InvalidFamily(_))));
        let mut g = standard_family(3, 2, None).unwrap();
        g.tables.get_mut(&e(&[1, 1, 0])).unwrap()[0] = 0b11;
        assert!(g.validate().is_err());
        let mut h = standard_family(3, 2, None).unwrap();
        h.tables.remove(&e(&[1, 1, 0]));
        assert!(h.validate().is_err());
    }

    #[test]
    fn family_json_round_trip() {
        let f = standard_family(3, 2, Some(&e(&[1, 2, 1]))).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"n":3,"d":2,"u":[1,2,1],"X":[{"point":[1,1,0],"sets":[[1],[1],[]]}"#));
        let back: IsotoneFamily = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<IsotoneFamily>(
            r#"{"n":2,"d":1,"X":[{"point":[1,0],"sets":[[2],[]]}]}"#
        )
        .is_err());
    }

    #[test]
    fn spanning_examples() {
        let full = full_skeleton(3, 3, None).unwrap();
        assert!(spanning_tree_check(&full, None).unwrap().spans);
        let g = full.without(&[edge(&[2, 1, 1], 1, 2), edge(&[2, 1, 1], 1, 3)]);
        let r = spanning_tree_check(&g, None).unwrap();
        assert!(!r.spans);
        assert_eq!(r.witness, Some(e(&[2, 1, 1])));
        let one_each = full.without(&[
            edge(&[2, 1, 1], 2, 3),
            edge(&[1, 2, 1], 1, 3),
            edge(&[1, 1, 2], 1, 2),
        ]);
        assert!(spanning_tree_check(&one_each, None).unwrap().spans);
    }

    #[test]
    fn dictionary_values() {
        let t = theta(&edge(&[2, 1, 1], 1, 2));
        assert_eq!(t.col, vec![0, 1]);
        assert_eq!(t.row, e(&[1, 0, 1]));
        assert_eq!(psi(&e(&[1, 2])).sym, e(&[1, 2]));
        let w = omega(&e(&[2, 1, 1]), &[0, 1, 2]).unwrap();
        assert_eq!(w.sym, e(&[1, 0, 0]));
        assert!(omega(&e(&[2, 0, 1]), &[1]).is_err());
    }

    #[test]
    fn omega_kappa_is_signed_triangle() {
        // κ(ω(c, Supp c)) is the alternating sum of the θ-labels of the
        // triangle's edges, and straightens to zero
        use crate::chain::{q, Chain};
        use crate::tableaux::{kappa, straighten_chain};
        for c in [e(&[2, 1, 1]), e(&[1, 2, 1]), e(&[1, 1, 2])] {
            let w = omega(&c, &[0, 1, 2]).unwrap().tableau().unwrap();
            let k = kappa(&Chain::unit(w)).unwrap();
            let mut tri = Chain::new();
            for (s, (a, b)) in [(1, (1, 2)), (-1, (0, 2)), (1, (0, 1))] {
                tri.add_term(theta(&DownEdge::new(c.clone(), a, b).unwrap()), q(s));
            }
            assert_eq!(k, tri, "{c}");
            assert!(straighten_chain(&k).is_empty());
        }
    }

    #[test]
    fn tab_span_standard() {
        let f = standard_family(3, 3, None).unwrap();
        let r = tab_spanning_check(&f).unwrap();
        assert!(r.spans);
        assert_eq!((r.rank, r.module_rank), (15, 15));
    }

    #[test]
    fn restricted_setups() {
        let s = restricted_power_setup(4, 2, &e(&[1, 1, 1, 1])).unwrap();
        assert_eq!(s.generators.len(), 6);
        assert_eq!(s.critical_counts, s.l_ranks[..s.critical_counts.len()].to_vec());
        let s = restricted_power_setup(3, 2, &e(&[1, 2, 1])).unwrap();
        let want: BTreeSet<Exponent> =
            [e(&[1, 1, 0]), e(&[0, 2, 0]), e(&[0, 1, 1]), e(&[1, 0, 1])].into();
        assert_eq!(s.generators.iter().cloned().collect::<BTreeSet<_>>(), want);
        let s = restricted_power_setup(3, 3, &e(&[1, 0, 1])).unwrap();
        assert!(s.is_empty());
        let full = restricted_power_setup(3, 2, &e(&[2, 2, 2])).unwrap();
        assert_eq!(full.generators.len(), 6);
        assert_eq!(full.l_ranks, vec![6, 8, 3]);
    }

    #[test]
    fn isotone_map_counts() {
        for (n, d, want) in [(3, 2, 4), (3, 3, 48), (4, 2, 8), (2, 3, 6)] {
            for i in 0..n {
                let (_, maps) = enumerate_isotone_maps(n, d, i, None, 100_000).unwrap();
                assert_eq!(maps.len(), want, "({n},{d}) i={i}");
            }
        }
        assert!(enumerate_isotone_maps(3, 3, 0, None, 10).is_err());
    }

    #[test]
    fn random_families_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, d) in [(3, 3), (4, 2), (4, 3), (3, 4)] {
            for _ in 0..10 {
                let f = random_family(n, d, None, &mut rng).unwrap();
                f.validate().unwrap();
                ls_edges(&f).unwrap();
            }
        }
    }

    #[test]
    fn r_ls_on_standard() {
        let f = standard_family(4, 3, None).unwrap();
        assert!(r_ls_check(&f, &e(&[1, 1, 1, 1]), &[0, 2, 3]).unwrap());
        assert!(r_ls_check(&f, &e(&[1, 1, 2, 0]), &[3]).is_err());
    }

    #[test]
    fn l_complex_graph_misses_triangle() {
        let g = l_complex_graph(4, 2).unwrap();
        assert!(!g.adjacent(&e(&[1, 1, 0, 0]), &e(&[1, 0, 1, 0])));
        assert!(!g.adjacent(&e(&[1, 0, 1, 0]), &e(&[1, 0, 0, 1])));
        assert!(g.adjacent(&e(&[2, 0, 0, 0]), &e(&[1, 1, 0, 0])));
    }
}
