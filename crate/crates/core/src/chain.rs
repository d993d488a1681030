use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::Exponent;

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

/// Finite formal sum of basis keys with nonzero rational coefficients.
///
/// Serialized as a list of `[key, "p/q"]` pairs in key order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for Chain<K> {
    fn default() -> Self {
        Chain {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Chain<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(key: K) -> Self {
        Self::term(key, Q::one())
    }

    pub fn term(key: K, coeff: Q) -> Self {
        let mut c = Self::new();
        c.add_term(key, coeff);
        c
    }

    pub fn add_term(&mut self, key: K, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += coeff;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, other: &Chain<K>, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * s);
        }
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, s);
        out
    }

    pub fn get(&self, key: &K) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn contains(&self, key: &K) -> bool {
        self.terms.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn retain(&mut self, mut f: impl FnMut(&K) -> bool) {
        self.terms.retain(|k, _| f(k));
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> Chain<L> {
        let mut out = Chain::new();
        for (k, v) in &self.terms {
            out.add_term(f(k), v.clone());
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for Chain<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut c = Chain::new();
        for (k, v) in iter {
            c.add_term(k, v);
        }
        c
    }
}

impl<K: Ord + Serialize> Serialize for Chain<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(k, v)| (k, v.to_string())))
    }
}

impl<'de, K: Ord + Clone + Deserialize<'de>> Deserialize<'de> for Chain<K> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<(K, String)>::deserialize(d)?;
        let mut out = Chain::new();
        for (k, v) in raw {
            let c: Q = v.parse().map_err(serde::de::Error::custom)?;
            out.add_term(k, c);
        }
        Ok(out)
    }
}

/// Basis key of a frame: the rank-one degree-0 generator or a cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FrameKey<K> {
    Unit,
    Basis(K),
}

impl<K> FrameKey<K> {
    pub fn basis(&self) -> Option<&K> {
        match self {
            FrameKey::Unit => None,
            FrameKey::Basis(k) => Some(k),
        }
    }
}

/// A finite based chain complex over the rationals.
///
/// `basis[k]` lists the degree-k keys; `boundary` sends every key to a chain
/// of degree-(k-1) keys (missing entries mean zero).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(
    serialize = "K: Serialize + Ord",
    deserialize = "K: Deserialize<'de> + Ord + Clone"
))]
pub struct ComplexDesc<K: Ord> {
    pub basis: Vec<Vec<K>>,
    #[serde(with = "pairs")]
    pub boundary: BTreeMap<K, Chain<K>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_pairs")]
    pub mdeg: Option<BTreeMap<K, Exponent>>,
}

impl<K: Ord + Clone + Debug> ComplexDesc<K> {
    pub fn new(basis: Vec<Vec<K>>) -> Self {
        ComplexDesc {
            basis,
            boundary: BTreeMap::new(),
            mdeg: None,
        }
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.basis.iter().rposition(|b| !b.is_empty())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.basis.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree_index(&self) -> BTreeMap<&K, usize> {
        let mut idx = BTreeMap::new();
        for (k, b) in self.basis.iter().enumerate() {
            for key in b {
                idx.insert(key, k);
            }
        }
        idx
    }

    pub fn boundary_of(&self, key: &K) -> Chain<K> {
        self.boundary.get(key).cloned().unwrap_or_default()
    }

    pub fn mdeg_of(&self, key: &K) -> Option<&Exponent> {
        self.mdeg.as_ref().and_then(|m| m.get(key))
    }

    /// Checks that boundaries land one degree lower and that the boundary
    /// squares to zero; the error names the first offending key.
    pub fn check_square_zero(&self) -> Result<()> {
        let idx = self.degree_index();
        for (k, b) in self.basis.iter().enumerate() {
            for key in b {
                let d1 = self.boundary_of(key);
                for f in d1.keys() {
                    match idx.get(f) {
                        Some(&df) if df + 1 == k => {}
                        _ => {
                            return Err(Error::NotAComplex {
                                witness: format!("{key:?} (face {f:?} has wrong degree)"),
                            })
                        }
                    }
                }
                let mut dd = Chain::new();
                for (f, c) in d1.iter() {
                    dd.add_scaled(&self.boundary_of(f), c);
                }
                if !dd.is_empty() {
                    return Err(Error::NotAComplex {
                        witness: format!("{key:?}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Subcomplex on keys accepted by `keep`; fails if the result is not
    /// closed under the boundary.
    pub fn restrict(&self, mut keep: impl FnMut(&K) -> bool) -> Result<Self> {
        let basis: Vec<Vec<K>> = self
            .basis
            .iter()
            .map(|b| b.iter().filter(|k| keep(k)).cloned().collect())
            .collect();
        let kept: BTreeSet<&K> = basis.iter().flatten().collect();
        let mut boundary = BTreeMap::new();
        for key in &kept {
            let d = self.boundary_of(key);
            if let Some(f) = d.keys().find(|f| !kept.contains(f)) {
                return Err(Error::NotClosed(format!("{key:?} has face {f:?} outside")));
            }
            if !d.is_empty() {
                boundary.insert((*key).clone(), d);
            }
        }
        let mdeg = self.mdeg.as_ref().map(|m| {
            m.iter()
                .filter(|(k, _)| kept.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect()
        });
        Ok(ComplexDesc {
            basis,
            boundary,
            mdeg,
        })
    }

    /// The subcomplex `X_{<=m}` of keys whose multidegree divides `m`.
    pub fn restrict_leq(&self, m: &Exponent) -> Result<Self> {
        let mdeg = self.mdeg.as_ref().ok_or(Error::MissingMultidegrees)?;
        self.restrict(|k| mdeg.get(k).is_some_and(|v| v.divides(m)))
    }

    /// Dense matrix of the degree-k boundary: rows index `basis[k-1]`,
    /// columns index `basis[k]`.
    pub fn boundary_matrix(&self, k: usize) -> Vec<Vec<Q>> {
        if k == 0 || k >= self.basis.len() {
            return Vec::new();
        }
        let rows: BTreeMap<&K, usize> = self.basis[k - 1]
            .iter()
            .enumerate()
            .map(|(i, key)| (key, i))
            .collect();
        let mut m = vec![vec![Q::zero(); self.basis[k].len()]; rows.len()];
        for (c, key) in self.basis[k].iter().enumerate() {
            for (f, v) in self.boundary_of(key).iter() {
                if let Some(&r) = rows.get(f) {
                    m[r][c] = v.clone();
                }
            }
        }
        m
    }
}

mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S, K, V>(map: &BTreeMap<K, V>, s: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        K: Serialize,
        V: Serialize,
    {
        s.collect_seq(map.iter())
    }

    pub fn deserialize<'de, D, K, V>(d: D) -> Result<BTreeMap<K, V>, D::Error>
    where
        D: Deserializer<'de>,
        K: Deserialize<'de> + Ord,
        V: Deserialize<'de>,
    {
        Ok(Vec::<(K, V)>::deserialize(d)?.into_iter().collect())
    }
}

mod opt_pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S, K, V>(map: &Option<BTreeMap<K, V>>, s: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        K: Serialize,
        V: Serialize,
    {
        match map {
            Some(m) => s.collect_seq(m.iter()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D, K, V>(d: D) -> Result<Option<BTreeMap<K, V>>, D::Error>
    where
        D: Deserializer<'de>,
        K: Deserialize<'de> + Ord,
        V: Deserialize<'de>,
    {
        Ok(Option::<Vec<(K, V)>>::deserialize(d)?.map(|v| v.into_iter().collect()))
    }
}
