//! Lattice points of dilated simplices, the partial orders `>=_i`, one-skeleton
//! edges `(c; i, j)`, and the chain decomposition used for label inference.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of `N^n`; doubles as a monomial exponent vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(pub Vec<u32>);

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (t, c) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Exponent(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&t| self.0[t] > 0).collect()
    }

    /// Smallest index in the support; `None` stands for `+infinity` on the
    /// zero vector.
    pub fn min_supp(&self) -> Option<usize> {
        self.0.iter().position(|&c| c > 0)
    }

    pub fn plus(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        Exponent(v)
    }

    pub fn minus(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(Exponent(v))
    }

    pub fn add(&self, other: &Exponent) -> Self {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if nonnegative.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    /// Coordinatewise `<=`, i.e. monomial divisibility.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.n() == other.n() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Exponent) -> Self {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Exponent) -> Self {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Monomial rendering with variables `x1..xn`, `1` for the zero vector.
    pub fn monomial(&self) -> String {
        let mut s = String::new();
        for (t, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 => s.push_str(&format!("x{}", t + 1)),
                _ => s.push_str(&format!("x{}^{}", t + 1, c)),
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

/// All `a` in `N^n` with `|a| = d`, lexicographically descending.
pub fn enumerate_points(n: usize, d: u32) -> Result<Vec<Exponent>> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(t: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if t + 1 == cur.len() {
            cur[t] = left;
            out.push(Exponent(cur.clone()));
            return;
        }
        for c in (0..=left).rev() {
            cur[t] = c;
            rec(t + 1, left - c, cur, out);
        }
    }
    rec(0, d, &mut cur, &mut out);
    Ok(out)
}

/// Lattice points bounded coordinatewise by `u`, in the same order.
pub fn enumerate_points_leq(n: usize, d: u32, u: Option<&Exponent>) -> Result<Vec<Exponent>> {
    let pts = enumerate_points(n, d)?;
    Ok(match u {
        None => pts,
        Some(u) => {
            if u.n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "bound {u} has length {}, expected {n}",
                    u.n()
                )));
            }
            pts.into_iter().filter(|a| a.divides(u)).collect()
        }
    })
}

/// `b >=_i a`: `b_i >= a_i` and `b_j <= a_j` for all `j != i`.
pub fn leq_i(a: &Exponent, b: &Exponent, i: usize) -> Result<bool> {
    if a.n() != b.n() || a.degree() != b.degree() {
        return Err(Error::DimensionMismatch(format!("{a} vs {b}")));
    }
    if i >= a.n() {
        return Err(Error::InvalidParameters(format!("index {} out of range", i + 1)));
    }
    Ok((0..a.n()).all(|t| if t == i { b.0[t] >= a.0[t] } else { b.0[t] <= a.0[t] }))
}

/// Covers of `a` in `>=_i`: `a + e_i - e_t` for `t` in `Supp(a) \ {i}`.
pub fn parents_i(a: &Exponent, i: usize) -> Vec<Exponent> {
    (0..a.n())
        .filter(|&t| t != i && a.0[t] > 0)
        .map(|t| a.minus(t).unwrap().plus(i))
        .collect()
}

/// Elements covered by `b` in `>=_i`: `b - e_i + e_t` for `t != i`.
pub fn children_i(b: &Exponent, i: usize) -> Vec<Exponent> {
    match b.minus(i) {
        None => Vec::new(),
        Some(base) => (0..b.n()).filter(|&t| t != i).map(|t| base.plus(t)).collect(),
    }
}

/// The edge `(apex; i, j)` of the one-skeleton joining `apex - e_i` and
/// `apex - e_j`. Serialized with 1-based indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DownEdge {
    pub apex: Exponent,
    pub i: usize,
    pub j: usize,
}

impl fmt::Debug for DownEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{},{})", self.apex, self.i + 1, self.j + 1)
    }
}

impl fmt::Display for DownEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl DownEdge {
    pub fn new(apex: Exponent, i: usize, j: usize) -> Result<Self> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if i == j || j >= apex.n() || apex.0[i] == 0 || apex.0[j] == 0 {
            return Err(Error::InvalidParameters(format!(
                "({apex};{},{}) is not a one-skeleton edge",
                i + 1,
                j + 1
            )));
        }
        Ok(DownEdge { apex, i, j })
    }

    pub fn endpoints(&self) -> (Exponent, Exponent) {
        (
            self.apex.minus(self.i).unwrap(),
            self.apex.minus(self.j).unwrap(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct DownEdgeRepr {
    apex: Exponent,
    i: usize,
    j: usize,
}

impl Serialize for DownEdge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DownEdgeRepr {
            apex: self.apex.clone(),
            i: self.i + 1,
            j: self.j + 1,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DownEdge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DownEdgeRepr::deserialize(d)?;
        if r.i == 0 || r.j == 0 {
            return Err(serde::de::Error::custom("edge indices are 1-based"));
        }
        DownEdge::new(r.apex, r.i - 1, r.j - 1).map_err(serde::de::Error::custom)
    }
}

/// The edge joining two lattice points, if they are one-skeleton neighbours.
pub fn edge_between(a: &Exponent, b: &Exponent) -> Option<DownEdge> {
    if a.n() != b.n() || a.degree() != b.degree() {
        return None;
    }
    let mut up = None;
    let mut down = None;
    for t in 0..a.n() {
        match a.0[t] as i64 - b.0[t] as i64 {
            0 => {}
            1 if up.is_none() => up = Some(t),
            -1 if down.is_none() => down = Some(t),
            _ => return None,
        }
    }
    // a = b + e_s - e_t, so the apex is a + e_t = b + e_s
    let (s, t) = (up?, down?);
    DownEdge::new(a.plus(t), s, t).ok()
}

/// A set of one-skeleton edges of the complex on `Delta(n, d)`.
///
/// Serialized as a plain list of edges; `n` and `d` are read off the apexes.
/// The object form `{"n", "d", "edges"}` is also accepted (and required for
/// an empty graph).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyGraph {
    pub n: usize,
    pub d: u32,
    pub edges: BTreeSet<DownEdge>,
}

impl SyzygyGraph {
    pub fn new(n: usize, d: u32, edges: impl IntoIterator<Item = DownEdge>) -> Result<Self> {
        let g = SyzygyGraph {
            n,
            d,
            edges: edges.into_iter().collect(),
        };
        for e in &g.edges {
            if e.apex.n() != n || e.apex.degree() != d + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "edge {e} does not belong to the skeleton for n={n}, d={d}"
                )));
            }
        }
        Ok(g)
    }

    pub fn empty(n: usize, d: u32) -> Self {
        SyzygyGraph {
            n,
            d,
            edges: BTreeSet::new(),
        }
    }

    pub fn contains(&self, e: &DownEdge) -> bool {
        self.edges.contains(e)
    }

    pub fn adjacent(&self, a: &Exponent, b: &Exponent) -> bool {
        edge_between(a, b).is_some_and(|e| self.edges.contains(&e))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn without(&self, removed: &[DownEdge]) -> Self {
        let mut g = self.clone();
        for e in removed {
            g.edges.remove(e);
        }
        g
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GraphRepr {
    List(Vec<DownEdge>),
    Object {
        n: usize,
        d: u32,
        edges: Vec<DownEdge>,
    },
}

impl Serialize for SyzygyGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.edges.iter())
    }
}

impl<'de> Deserialize<'de> for SyzygyGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let (n, deg, edges) = match GraphRepr::deserialize(d)? {
            GraphRepr::Object { n, d, edges } => (n, d, edges),
            GraphRepr::List(edges) => {
                let first = edges.first().ok_or_else(|| {
                    D::Error::custom("empty edge list; use {\"n\",\"d\",\"edges\"}")
                })?;
                let deg = first.apex.degree().checked_sub(1).ok_or_else(|| {
                    D::Error::custom("apex of degree 0")
                })?;
                (first.apex.n(), deg, edges)
            }
        };
        SyzygyGraph::new(n, deg, edges).map_err(D::Error::custom)
    }
}

/// Vertices `c - e_r` (`r` in `R`) and all edges `(c; r, s)` of the complete
/// down-graph. `R` defaults to `Supp(c)`.
pub fn down_graph(c: &Exponent, r: Option<&[usize]>) -> Result<(Vec<Exponent>, Vec<DownEdge>)> {
    let supp = c.support();
    let rset: Vec<usize> = match r {
        None => supp,
        Some(r) => {
            let mut r = r.to_vec();
            r.sort_unstable();
            r.dedup();
            if let Some(bad) = r.iter().find(|t| !supp.contains(t)) {
                return Err(Error::InvalidParameters(format!(
                    "index {} is not in the support of {c}",
                    bad + 1
                )));
            }
            r
        }
    };
    let verts = rset.iter().map(|&t| c.minus(t).unwrap()).collect();
    let mut edges = Vec::new();
    for (x, &s) in rset.iter().enumerate() {
        for &t in &rset[x + 1..] {
            edges.push(DownEdge::new(c.clone(), s, t)?);
        }
    }
    Ok((verts, edges))
}

/// Vertices `a + e_i` and edges `(a + e_i + e_j; i, j)` of the complete
/// up-graph over a point of degree `d - 1`.
pub fn up_graph(a: &Exponent, d: u32) -> Result<(Vec<Exponent>, Vec<DownEdge>)> {
    if a.degree() + 1 != d {
        return Err(Error::DimensionMismatch(format!(
            "up-graph base {a} must have degree {}",
            d as i64 - 1
        )));
    }
    let n = a.n();
    let verts = (0..n).map(|t| a.plus(t)).collect();
    let mut edges = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            edges.push(DownEdge::new(a.plus(s).plus(t), s, t)?);
        }
    }
    Ok((verts, edges))
}

/// Every edge of the one-skeleton over `Delta(n, d)`, optionally restricted
/// to apexes bounded by `u`.
pub fn full_skeleton(n: usize, d: u32, u: Option<&Exponent>) -> Result<SyzygyGraph> {
    let mut edges = BTreeSet::new();
    for c in enumerate_points_leq(n, d + 1, u)? {
        edges.extend(down_graph(&c, None)?.1);
    }
    Ok(SyzygyGraph { n, d, edges })
}

/// Companion index of `i` in the chain decomposition: the second index if
/// `i` is the first, otherwise the first.
pub fn companion(i: usize) -> usize {
    if i == 0 {
        1
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainId {
    pub i: usize,
    pub j: usize,
    pub p: Exponent,
}

impl ChainId {
    pub fn r(&self) -> u32 {
        self.p.degree()
    }
}

/// One chain `C^p` of `(Delta(n,d), >=_i)`, its elements by rank, and its
/// maximal extension (ranks `0..=d`).
#[derive(Clone, Debug)]
pub struct ChainPart {
    pub id: ChainId,
    pub elements: Vec<Exponent>,
    pub extension: Vec<Exponent>,
}

/// Partition of `(Delta(n,d), >=_i)` into chains `C^p`, sorted by `≺`:
/// first by `|p|`, then at the first differing coordinate the larger entry
/// comes first.
pub fn chain_decomposition(n: usize, d: u32, i: usize) -> Result<Vec<ChainPart>> {
    if n < 2 {
        return Err(Error::InvalidParameters(
            "chain decomposition needs n >= 2".into(),
        ));
    }
    if i >= n {
        return Err(Error::InvalidParameters(format!("index {} out of range", i + 1)));
    }
    let j = companion(i);
    let others: Vec<usize> = (0..n).filter(|&t| t != i && t != j).collect();
    let mut ps: Vec<Exponent> = Vec::new();
    for r in 0..=d {
        if others.is_empty() {
            if r == 0 {
                ps.push(Exponent::zero(n));
            }
            continue;
        }
        for q in enumerate_points(others.len(), r)? {
            let mut p = Exponent::zero(n);
            for (x, &t) in others.iter().enumerate() {
                p.0[t] = q.0[x];
            }
            ps.push(p);
        }
    }
    ps.sort_by_key(|p| (p.degree(), Reverse(p.0.clone())));

    let mut parts: Vec<ChainPart> = Vec::with_capacity(ps.len());
    for p in ps {
        let r = p.degree();
        let elements: Vec<Exponent> = (0..=d - r)
            .map(|m| {
                let mut a = p.clone();
                a.0[i] += m;
                a.0[j] += d - m - r;
                a
            })
            .collect();
        let extension = match p.min_supp() {
            None => elements.clone(),
            Some(m) => {
                let prev = p.minus(m).unwrap();
                let parent = parts
                    .iter()
                    .find(|c| c.id.p == prev)
                    .expect("chains are processed in ≺ order");
                let mut ext = elements.clone();
                ext.extend_from_slice(&parent.extension[(d - r + 1) as usize..]);
                ext
            }
        };
        parts.push(ChainPart {
            id: ChainId { i, j, p },
            elements,
            extension,
        });
    }
    Ok(parts)
}
