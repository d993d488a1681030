//! Hook tableaux `f_J ⊗ f^α`, straightening into the standard basis of
//! `L^a_b`, the maps κ and Koszul, and the L-complex resolving `m^d`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{q, Chain, ComplexDesc, FrameKey, Q};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_points, Exponent};
use crate::{binomial, combinations};

/// A hook tableau: strictly increasing column `J` (0-based) and row weight
/// `α`. Serialized as `{"col": [1-based], "row": [weights]}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HookTableau {
    pub col: Vec<usize>,
    pub row: Exponent,
}

impl fmt::Debug for HookTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col: Vec<usize> = self.col.iter().map(|j| j + 1).collect();
        write!(f, "[col {col:?} | row {}]", self.row.monomial())
    }
}

#[derive(Serialize, Deserialize)]
struct TableauRepr {
    col: Vec<usize>,
    row: Exponent,
}

impl Serialize for HookTableau {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableauRepr {
            col: self.col.iter().map(|j| j + 1).collect(),
            row: self.row.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HookTableau {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TableauRepr::deserialize(d)?;
        if r.col.contains(&0) {
            return Err(serde::de::Error::custom("column entries are 1-based"));
        }
        HookTableau::new(r.col.iter().map(|j| j - 1).collect(), r.row)
            .map_err(serde::de::Error::custom)
    }
}

impl HookTableau {
    pub fn new(col: Vec<usize>, row: Exponent) -> Result<Self> {
        if col.is_empty() {
            return Err(Error::InvalidTableau("empty column".into()));
        }
        if col.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTableau(format!(
                "column {:?} is not strictly increasing",
                col.iter().map(|j| j + 1).collect::<Vec<_>>()
            )));
        }
        if *col.last().unwrap() >= row.n() {
            return Err(Error::InvalidTableau(format!(
                "column entry exceeds n = {}",
                row.n()
            )));
        }
        Ok(HookTableau { col, row })
    }

    pub fn n(&self) -> usize {
        self.row.n()
    }

    /// `α + Σ_{j∈J} e_j`
    pub fn mdeg(&self) -> Exponent {
        let mut m = self.row.clone();
        for &j in &self.col {
            m.0[j] += 1;
        }
        m
    }

    /// Semistandard: the corner `j_0` is at most every row entry.
    pub fn is_standard(&self) -> bool {
        self.row.min_supp().is_none_or(|m| self.col[0] <= m)
    }
}

/// Rewrites a tableau as a combination of standard tableaux modulo the image
/// of κ. For a violation (`j_1 = min α < j_0`) the relation
/// `κ(f_{j_1} ∧ f_J ⊗ f^{α - e_{j_1}}) = 0` gives
/// `f_J ⊗ f^α ≡ Σ_k (-1)^k f_{j_1 ∪ J∖j_k} ⊗ f^{α - e_{j_1} + e_{j_k}}`.
///
/// Terms are processed from a worklist; each rewrite strictly lowers the
/// corner entry, so the loop terminates.
pub fn straighten(t: &HookTableau) -> Chain<HookTableau> {
    let mut out = Chain::new();
    let mut work: Vec<(HookTableau, Q)> = vec![(t.clone(), q(1))];
    while let Some((cur, c)) = work.pop() {
        let Some(j1) = cur.row.min_supp().filter(|&m| m < cur.col[0]) else {
            out.add_term(cur, c);
            continue;
        };
        let rest = cur.row.minus(j1).unwrap();
        for (k, &jk) in cur.col.iter().enumerate() {
            let mut col = Vec::with_capacity(cur.col.len());
            col.push(j1);
            col.extend(cur.col.iter().copied().filter(|&x| x != jk));
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            work.push((
                HookTableau {
                    col,
                    row: rest.plus(jk),
                },
                &c * sign,
            ));
        }
    }
    out
}

/// Straightens every term of a chain.
pub fn straighten_chain(c: &Chain<HookTableau>) -> Chain<HookTableau> {
    let mut out = Chain::new();
    for (t, v) in c.iter() {
        out.add_scaled(&straighten(t), v);
    }
    out
}

/// `C(n+b-1, a+b) · C(a+b-1, a)`
pub fn rank_formula(n: usize, a: usize, b: usize) -> u128 {
    if b == 0 {
        return 0;
    }
    let (n, a, b) = (n as u64, a as u64, b as u64);
    binomial(n + b - 1, a + b) * binomial(a + b - 1, a)
}

/// Standard tableaux with column length `a + 1` and row weight `b - 1`,
/// ordered by column, then by row (descending).
pub fn standard_basis(a: usize, b: usize, n: usize) -> Result<Vec<HookTableau>> {
    if n == 0 || a >= n || b == 0 {
        return Err(Error::InvalidParameters(format!(
            "standard basis needs 0 <= a < n and b >= 1 (a={a}, b={b}, n={n})"
        )));
    }
    let rows = enumerate_points(n, (b - 1) as u32)?;
    let mut out = Vec::new();
    for col in combinations(n, a + 1) {
        for row in &rows {
            if row.min_supp().is_none_or(|m| col[0] <= m) {
                out.push(HookTableau {
                    col: col.clone(),
                    row: row.clone(),
                });
            }
        }
    }
    Ok(out)
}

fn shape(t: &HookTableau) -> (usize, u32) {
    (t.col.len(), t.row.degree())
}

fn common_shape<'a>(keys: impl Iterator<Item = &'a HookTableau>) -> Result<Option<(usize, u32)>> {
    let mut s = None;
    for t in keys {
        match s {
            None => s = Some(shape(t)),
            Some(x) if x != shape(t) => {
                return Err(Error::DimensionMismatch(format!(
                    "mixed tableau shapes {x:?} and {:?}",
                    shape(t)
                )))
            }
            _ => {}
        }
    }
    Ok(s)
}

/// `κ(f_J ⊗ f^α) = Σ_t (-1)^t f_{J∖j_t} ⊗ f_{j_t} f^α`, with `t` the 0-based
/// position. Needs columns of length at least two, since the image must
/// again be a tableau.
pub fn kappa(c: &Chain<HookTableau>) -> Result<Chain<HookTableau>> {
    if let Some((len, _)) = common_shape(c.keys())? {
        if len < 2 {
            return Err(Error::InvalidTableau(
                "κ needs a column of length at least two".into(),
            ));
        }
    }
    let mut out = Chain::new();
    for (t, v) in c.iter() {
        for (pos, &j) in t.col.iter().enumerate() {
            let col: Vec<usize> = t.col.iter().copied().filter(|&x| x != j).collect();
            let sign = if pos % 2 == 0 { v.clone() } else { -v.clone() };
            out.add_term(
                HookTableau {
                    col,
                    row: t.row.plus(j),
                },
                sign,
            );
        }
    }
    Ok(out)
}

/// Koszul map tensored with the identity on the row:
/// `f_J ⊗ f^α ↦ Σ_t (-1)^t ψ(f_{j_t}) · f_{J∖j_t} ⊗ f^α`.
///
/// `psi[j]` is the monomial `ψ(f_j)`; output keys are `(coefficient
/// monomial, tableau)`.
pub fn koszul(
    c: &Chain<HookTableau>,
    psi: &[Exponent],
) -> Result<Chain<(Exponent, HookTableau)>> {
    if let Some((len, _)) = common_shape(c.keys())? {
        if len < 2 {
            return Err(Error::InvalidTableau(
                "Koszul image of a length-one column is not a tableau".into(),
            ));
        }
    }
    let mut out = Chain::new();
    for (t, v) in c.iter() {
        if psi.len() != t.n() {
            return Err(Error::DimensionMismatch(format!(
                "ψ has {} entries, tableau lives over n = {}",
                psi.len(),
                t.n()
            )));
        }
        for (pos, &j) in t.col.iter().enumerate() {
            let col: Vec<usize> = t.col.iter().copied().filter(|&x| x != j).collect();
            let sign = if pos % 2 == 0 { v.clone() } else { -v.clone() };
            out.add_term(
                (
                    psi[j].clone(),
                    HookTableau {
                        col,
                        row: t.row.clone(),
                    },
                ),
                sign,
            );
        }
    }
    Ok(out)
}

/// `ψ(f_i) = x_i`
pub fn variables(n: usize) -> Vec<Exponent> {
    (0..n).map(|i| Exponent::unit(n, i)).collect()
}

pub type LKey = FrameKey<HookTableau>;

/// The L-complex resolving `m^d` as a frame: degree 0 is the rank-one
/// target, degree `k + 1` is the standard basis of `L^k_d`. Length-one
/// columns map to the unit; longer columns map by Koszul followed by
/// straightening. Multidegrees are `α + Σ_J e_j`.
pub fn build_l_complex(n: usize, d: u32) -> Result<ComplexDesc<LKey>> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameters(format!(
            "L-complex needs n, d >= 1 (n={n}, d={d})"
        )));
    }
    let mut basis: Vec<Vec<LKey>> = vec![vec![FrameKey::Unit]];
    for k in 0..n {
        basis.push(
            standard_basis(k, d as usize, n)?
                .into_iter()
                .map(FrameKey::Basis)
                .collect(),
        );
    }
    let mut complex = ComplexDesc::new(basis);
    let mut mdeg = BTreeMap::new();
    mdeg.insert(FrameKey::Unit, Exponent::zero(n));
    for key in complex.basis.iter().skip(1).flatten() {
        let FrameKey::Basis(t) = key else { unreachable!() };
        mdeg.insert(key.clone(), t.mdeg());
    }
    let mut boundary = BTreeMap::new();
    for key in complex.basis.iter().skip(1).flatten() {
        let FrameKey::Basis(t) = key else { unreachable!() };
        boundary.insert(key.clone(), l_differential(t));
    }
    complex.boundary = boundary;
    complex.mdeg = Some(mdeg);
    Ok(complex)
}

/// Frame differential of a single L-complex basis tableau.
pub fn l_differential(t: &HookTableau) -> Chain<LKey> {
    if t.col.len() == 1 {
        return Chain::unit(FrameKey::Unit);
    }
    let mut out = Chain::new();
    for (pos, &j) in t.col.iter().enumerate() {
        let face = HookTableau {
            col: t.col.iter().copied().filter(|&x| x != j).collect(),
            row: t.row.clone(),
        };
        let s = if pos % 2 == 0 { q(1) } else { q(-1) };
        out.add_scaled(&straighten(&face).map_keys(|k| FrameKey::Basis(k.clone())), &s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tab(col: &[usize], row: &[u32]) -> HookTableau {
        HookTableau::new(col.iter().map(|j| j - 1).collect(), Exponent(row.to_vec())).unwrap()
    }

    #[test]
    fn standardness() {
        assert!(tab(&[1, 3], &[0, 1, 1]).is_standard());
        assert!(!tab(&[2, 3], &[1, 0, 0]).is_standard());
        assert!(tab(&[1, 2, 3], &[0, 0, 0]).is_standard());
        assert!(HookTableau::new(vec![1, 1], Exponent(vec![0, 0, 0])).is_err());
        assert!(HookTableau::new(vec![2, 1], Exponent(vec![0, 0, 0])).is_err());
    }

    #[test]
    fn straighten_two_by_one() {
        let s = straighten(&tab(&[2, 3], &[1, 0, 0]));
        let expect: Chain<HookTableau> = [
            (tab(&[1, 3], &[0, 1, 0]), q(1)),
            (tab(&[1, 2], &[0, 0, 1]), q(-1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(s, expect);
        let t = tab(&[1, 3], &[0, 1, 1]);
        assert_eq!(straighten(&t), Chain::unit(t));
    }

    #[test]
    fn rank_formula_values() {
        assert_eq!(rank_formula(3, 1, 3), 15);
        assert_eq!(rank_formula(3, 2, 3), 6);
        assert_eq!(standard_basis(1, 3, 3).unwrap().len(), 15);
        assert_eq!(standard_basis(2, 3, 3).unwrap().len(), 6);
        assert_eq!(standard_basis(0, 4, 5).unwrap().len(), binomial(8, 4) as usize);
        assert!(standard_basis(3, 2, 3).is_err());
        assert!(standard_basis(0, 0, 3).is_err());
    }

    #[test]
    fn kappa_on_full_column() {
        let c = Chain::unit(tab(&[1, 2, 3], &[0, 0, 1]));
        let k = kappa(&c).unwrap();
        let expect: Chain<HookTableau> = [
            (tab(&[2, 3], &[1, 0, 1]), q(1)),
            (tab(&[1, 3], &[0, 1, 1]), q(-1)),
            (tab(&[1, 2], &[0, 0, 2]), q(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(k, expect);
        assert!(kappa(&Chain::unit(tab(&[2], &[1, 0, 0]))).is_err());
        let mixed: Chain<HookTableau> =
            [(tab(&[1, 2], &[1, 0, 0]), q(1)), (tab(&[1, 2, 3], &[0, 0, 0]), q(1))]
                .into_iter()
                .collect();
        assert!(kappa(&mixed).is_err());
    }

    #[test]
    fn koszul_on_full_column() {
        let psi = variables(3);
        let c = Chain::unit(tab(&[1, 2, 3], &[1, 0, 1]));
        let k = koszul(&c, &psi).unwrap();
        let expect: Chain<(Exponent, HookTableau)> = [
            ((psi[0].clone(), tab(&[2, 3], &[1, 0, 1])), q(1)),
            ((psi[1].clone(), tab(&[1, 3], &[1, 0, 1])), q(-1)),
            ((psi[2].clone(), tab(&[1, 2], &[1, 0, 1])), q(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(k, expect);

        // f_12 -> ψ(f_1) f_2 - ψ(f_2) f_1
        let k = koszul(&Chain::unit(tab(&[1, 2], &[0, 0])), &variables(2)).unwrap();
        assert_eq!(k.get(&(Exponent(vec![1, 0]), tab(&[2], &[0, 0]))), q(1));
        assert_eq!(k.get(&(Exponent(vec![0, 1]), tab(&[1], &[0, 0]))), q(-1));
        assert!(koszul(&Chain::unit(tab(&[1, 2], &[0, 0])), &variables(3)).is_err());
    }

    #[test]
    fn l_complex_ranks() {
        assert_eq!(build_l_complex(3, 3).unwrap().ranks(), vec![1, 10, 15, 6]);
        assert_eq!(build_l_complex(1, 4).unwrap().ranks(), vec![1, 1]);
        assert_eq!(build_l_complex(4, 2).unwrap().ranks(), vec![1, 10, 20, 15, 4]);
        build_l_complex(4, 3).unwrap().check_square_zero().unwrap();
    }

    #[test]
    fn tableau_json() {
        let t = tab(&[1, 3], &[0, 1, 1]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"col":[1,3],"row":[0,1,1]}"#);
        assert_eq!(serde_json::from_str::<HookTableau>(&s).unwrap(), t);
        assert!(serde_json::from_str::<HookTableau>(r#"{"col":[0,1],"row":[0,1,1]}"#).is_err());
    }
}
