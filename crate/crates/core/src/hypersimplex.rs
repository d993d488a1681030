//! The hypersimplicial cell complex on `Delta(n, d)`.
//!
//! A cell `C_{a,J}` is the hypersimplex `{a + Σ_{j∈S} e_j : S ⊆ J, |S| = k}`
//! with `k = d - |a|`; it is a cell iff `J = ∅, |a| = d` or
//! `1 <= k <= |J| - 1`.
//!
//! Orientation: faces are `C_{a+e_{j_v}, J∖j_v}` (the side `x_{j_v} = 1`)
//! and `C_{a, J∖j_v}` (the side `x_{j_v} = 0`), both with sign `(-1)^v`. An
//! edge `C_{a,{j_0,j_1}}` with `k = 1` has boundary
//! `C_{a+e_{j_0}} - C_{a+e_{j_1}}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{q, Chain, ComplexDesc, FrameKey};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_points, Exponent};
use crate::tableaux::HookTableau;
use crate::combinations;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub base: Exponent,
    pub jset: Vec<usize>,
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j: Vec<usize> = self.jset.iter().map(|x| x + 1).collect();
        write!(f, "C{}{j:?}", self.base)
    }
}

#[derive(Serialize, Deserialize)]
struct CellRepr {
    base: Exponent,
    #[serde(rename = "J")]
    jset: Vec<usize>,
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CellRepr {
            base: self.base.clone(),
            jset: self.jset.iter().map(|j| j + 1).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CellRepr::deserialize(d)?;
        if r.jset.contains(&0) {
            return Err(serde::de::Error::custom("J entries are 1-based"));
        }
        Ok(Cell {
            base: r.base,
            jset: r.jset.iter().map(|j| j - 1).collect(),
        })
    }
}

impl Cell {
    pub fn vertex(a: Exponent) -> Self {
        Cell {
            base: a,
            jset: Vec::new(),
        }
    }

    pub fn new(base: Exponent, jset: Vec<usize>, d: u32) -> Result<Self> {
        let c = Cell { base, jset };
        c.validate(d)?;
        Ok(c)
    }

    pub fn validate(&self, d: u32) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidCell(format!("{self:?}: {why}")));
        if self.jset.windows(2).any(|w| w[0] >= w[1]) {
            return bad("J must be strictly increasing");
        }
        if self.jset.last().is_some_and(|&j| j >= self.base.n()) {
            return bad("J exceeds n");
        }
        let deg = self.base.degree();
        if self.jset.is_empty() {
            return if deg == d { Ok(()) } else { bad("vertex off the simplex") };
        }
        if deg >= d {
            return bad("need |a| < d");
        }
        let k = (d - deg) as usize;
        if k > self.jset.len() - 1 {
            return bad("need d - |a| <= |J| - 1");
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.jset.len().saturating_sub(1)
    }

    /// `a + Σ_{j∈J} e_j`
    pub fn mdeg(&self) -> Exponent {
        let mut m = self.base.clone();
        for &j in &self.jset {
            m.0[j] += 1;
        }
        m
    }

    /// Lattice points spanned by the cell.
    pub fn vertices(&self, d: u32) -> Vec<Exponent> {
        if self.jset.is_empty() {
            return vec![self.base.clone()];
        }
        let k = (d - self.base.degree()) as usize;
        combinations(self.jset.len(), k)
            .into_iter()
            .map(|s| {
                let mut a = self.base.clone();
                for x in s {
                    a.0[self.jset[x]] += 1;
                }
                a
            })
            .collect()
    }
}

/// All cells, graded by dimension, optionally restricted to `mdeg <= u`.
pub fn enumerate_cells(n: usize, d: u32, bound: Option<&Exponent>) -> Result<Vec<Vec<Cell>>> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameters(format!(
            "hypersimplicial complex needs n, d >= 1 (n={n}, d={d})"
        )));
    }
    if let Some(u) = bound {
        if u.n() != n {
            return Err(Error::DimensionMismatch(format!("bound {u} for n = {n}")));
        }
    }
    let keep = |c: &Cell| bound.is_none_or(|u| c.mdeg().divides(u));
    let mut graded: Vec<Vec<Cell>> = vec![Vec::new(); n.max(1)];
    for a in enumerate_points(n, d)? {
        let c = Cell::vertex(a);
        if keep(&c) {
            graded[0].push(c);
        }
    }
    for size in 2..=n {
        for jset in combinations(n, size) {
            for k in 1..size {
                if k as u32 > d {
                    break;
                }
                for a in enumerate_points(n, d - k as u32)? {
                    let c = Cell {
                        base: a,
                        jset: jset.clone(),
                    };
                    if keep(&c) {
                        graded[size - 1].push(c);
                    }
                }
            }
        }
    }
    for g in &mut graded {
        g.sort();
    }
    while graded.len() > 1 && graded.last().is_some_and(Vec::is_empty) {
        graded.pop();
    }
    Ok(graded)
}

/// Cellular boundary in the orientation described in the module docs.
pub fn boundary(cell: &Cell, d: u32) -> Result<Chain<Cell>> {
    cell.validate(d)?;
    let mut out = Chain::new();
    let r = cell.jset.len();
    if r == 0 {
        return Ok(out);
    }
    let k = (d - cell.base.degree()) as usize;
    if r == 2 && k == 1 {
        out.add_term(Cell::vertex(cell.base.plus(cell.jset[0])), q(1));
        out.add_term(Cell::vertex(cell.base.plus(cell.jset[1])), q(-1));
        return Ok(out);
    }
    for v in 0..r {
        let jv: Vec<usize> = cell
            .jset
            .iter()
            .enumerate()
            .filter(|&(x, _)| x != v)
            .map(|(_, &j)| j)
            .collect();
        let s = if v % 2 == 0 { q(1) } else { q(-1) };
        if k >= 2 {
            out.add_term(
                Cell {
                    base: cell.base.plus(cell.jset[v]),
                    jset: jv.clone(),
                },
                s.clone(),
            );
        }
        if k + 2 <= r {
            out.add_term(
                Cell {
                    base: cell.base.clone(),
                    jset: jv,
                },
                s,
            );
        }
    }
    Ok(out)
}

/// The complex `H^d_n` (or `H^d_n(<= u)`) with multidegree labels.
pub fn build_complex(n: usize, d: u32, bound: Option<&Exponent>) -> Result<ComplexDesc<Cell>> {
    let basis = enumerate_cells(n, d, bound)?;
    let mut cx = ComplexDesc::new(basis);
    let mut mdeg = BTreeMap::new();
    for c in cx.basis.iter().flatten() {
        mdeg.insert(c.clone(), c.mdeg());
        let b = boundary(c, d)?;
        if !b.is_empty() {
            cx.boundary.insert(c.clone(), b);
        }
    }
    cx.mdeg = Some(mdeg);
    Ok(cx)
}

/// Prepends the rank-one degree-0 generator: every vertex maps to it with
/// coefficient 1 and every other degree shifts up by one.
pub fn frame_from_cells<K: Ord + Clone + fmt::Debug>(
    cx: &ComplexDesc<K>,
) -> ComplexDesc<FrameKey<K>> {
    let mut basis = vec![vec![FrameKey::Unit]];
    basis.extend(
        cx.basis
            .iter()
            .map(|b| b.iter().cloned().map(FrameKey::Basis).collect()),
    );
    let mut out = ComplexDesc::new(basis);
    for v in cx.basis.first().into_iter().flatten() {
        out.boundary
            .insert(FrameKey::Basis(v.clone()), Chain::unit(FrameKey::Unit));
    }
    for (k, b) in &cx.boundary {
        out.boundary.insert(
            FrameKey::Basis(k.clone()),
            b.map_keys(|f| FrameKey::Basis(f.clone())),
        );
    }
    out.mdeg = cx.mdeg.as_ref().map(|m| {
        let n = m.values().next().map_or(0, Exponent::n);
        let mut fm: BTreeMap<FrameKey<K>, Exponent> = m
            .iter()
            .map(|(k, v)| (FrameKey::Basis(k.clone()), v.clone()))
            .collect();
        fm.insert(FrameKey::Unit, Exponent::zero(n));
        fm
    });
    out
}

/// Vertices map to the column holding their smallest variable; other cells
/// map to `f_J ⊗ f^a`.
pub fn cell_to_tableau(cell: &Cell) -> HookTableau {
    if cell.jset.is_empty() {
        let m = cell
            .base
            .min_supp()
            .expect("vertices of a positive-degree complex are nonzero");
        HookTableau {
            col: vec![m],
            row: cell.base.minus(m).unwrap(),
        }
    } else {
        HookTableau {
            col: cell.jset.clone(),
            row: cell.base.clone(),
        }
    }
}

/// Inverse of [`cell_to_tableau`]; length-one columns are read as vertices.
pub fn tableau_to_cell(t: &HookTableau, d: u32) -> Result<Cell> {
    let c = if t.col.len() == 1 {
        Cell::vertex(t.row.plus(t.col[0]))
    } else {
        Cell {
            base: t.row.clone(),
            jset: t.col.clone(),
        }
    };
    c.validate(d)?;
    Ok(c)
}

/// Subcomplex `X_{<=m}` of cells whose multidegree divides `m`.
pub fn restrict_leq_m<K: Ord + Clone + fmt::Debug>(
    cx: &ComplexDesc<K>,
    m: &Exponent,
) -> Result<ComplexDesc<K>> {
    cx.restrict_leq(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u32]) -> Exponent {
        Exponent(v.to_vec())
    }

    fn cell(a: &[u32], j: &[usize]) -> Cell {
        Cell {
            base: e(a),
            jset: j.iter().map(|x| x - 1).collect(),
        }
    }

    #[test]
    fn census() {
        let g = enumerate_cells(3, 3, None).unwrap();
        assert_eq!(g[0].len(), 10);
        assert_eq!(g[1].len(), 18);
        assert_eq!(g[2].len(), 9);
        let g = enumerate_cells(4, 3, None).unwrap();
        assert_eq!(g.len(), 4);
        // 10 + 1 tetrahedra (k = 1, 3) and 4 octahedra (k = 2)
        assert_eq!(g[3].len(), 15);
        let octahedra: Vec<_> = g[3].iter().filter(|c| c.base.degree() == 1).collect();
        assert_eq!(octahedra.len(), 4);
        assert!(octahedra.iter().all(|c| c.jset == vec![0, 1, 2, 3]));
        let g = enumerate_cells(4, 2, Some(&e(&[1, 1, 1, 1]))).unwrap();
        assert_eq!(g[0].len(), 6);
        assert!(g[0].iter().all(|c| c.base.0.iter().all(|&x| x <= 1)));
    }

    #[test]
    fn edge_boundary_matches_vertex_case() {
        let b = boundary(&cell(&[1, 0, 1], &[2, 3]), 3).unwrap();
        let expect: Chain<Cell> = [
            (Cell::vertex(e(&[1, 1, 1])), q(1)),
            (Cell::vertex(e(&[1, 0, 2])), q(-1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(b, expect);
        assert!(boundary(&Cell::vertex(e(&[1, 1, 1])), 3).unwrap().is_empty());
        assert!(boundary(&cell(&[1, 1, 1], &[1, 2]), 3).is_err());
    }

    #[test]
    fn octahedron_boundary_squares_to_zero() {
        let oct = cell(&[1, 0, 0, 0], &[1, 2, 3, 4]);
        let b = boundary(&oct, 3).unwrap();
        assert_eq!(b.len(), 8);
        let mut bb = Chain::new();
        for (f, c) in b.iter() {
            bb.add_scaled(&boundary(f, 3).unwrap(), c);
        }
        assert!(bb.is_empty());
    }

    #[test]
    fn whole_complexes_square_to_zero() {
        for (n, d) in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (5, 3)] {
            build_complex(n, d, None).unwrap().check_square_zero().unwrap();
        }
        build_complex(4, 2, Some(&e(&[1, 1, 1, 1])))
            .unwrap()
            .check_square_zero()
            .unwrap();
    }

    #[test]
    fn cell_tableau_correspondence() {
        let t = cell_to_tableau(&cell(&[1, 0, 1], &[1, 2, 3]));
        assert_eq!(t.col, vec![0, 1, 2]);
        assert_eq!(t.row, e(&[1, 0, 1]));
        for (n, d) in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)] {
            for c in enumerate_cells(n, d, None).unwrap().into_iter().flatten() {
                let t = cell_to_tableau(&c);
                assert_eq!(t.col.len(), c.dim() + 1);
                assert_eq!(tableau_to_cell(&t, d).unwrap(), c);
            }
        }
    }

    #[test]
    fn restriction_contains_edge() {
        let cx = build_complex(3, 3, None).unwrap();
        let sub = restrict_leq_m(&cx, &e(&[1, 1, 2])).unwrap();
        let cells: Vec<&Cell> = sub.basis.iter().flatten().collect();
        assert!(cells.contains(&&cell(&[1, 0, 1], &[2, 3])));
        assert!(cells.contains(&&Cell::vertex(e(&[1, 1, 1]))));
        assert!(cells.contains(&&Cell::vertex(e(&[1, 0, 2]))));
        let single = restrict_leq_m(&cx, &e(&[3, 0, 0])).unwrap();
        assert_eq!(single.len(), 1);
        let all = restrict_leq_m(&cx, &e(&[3, 3, 3])).unwrap();
        assert_eq!(all.len(), cx.len());
    }

    #[test]
    fn cell_vertices() {
        let c = cell(&[1, 0, 0], &[1, 2, 3]);
        let v = c.vertices(3);
        assert_eq!(v.len(), 3);
        assert!(v.contains(&e(&[1, 1, 1])));
        assert!(v.contains(&e(&[2, 1, 0])));
    }
}
