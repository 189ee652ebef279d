//! Partitions and Jordan normal forms.
//!
//! A [`Jnf`] records, for each eigenvalue label, the partition formed by the
//! sizes of its Jordan blocks. Labels are opaque: two JNFs describe the same
//! conjugacy-class shape when they agree up to the order of their entries.
//! Everything here is combinatorial; computing the JNF of a concrete matrix
//! lives in [`crate::tuple_lab::jnf_of`].

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Non-increasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts `parts` into non-increasing order; rejects empty input and zero parts.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The conjugate partition: part `i` counts the parts exceeding `i`.
    pub fn dual(&self) -> Partition {
        let largest = self.0[0];
        let parts = (0..largest)
            .map(|i| self.0.iter().filter(|&&b| b > i).count() as u32)
            .collect();
        Partition(parts)
    }

    /// `sum (2i - 1) b_i` over the sorted parts: the centralizer dimension of a
    /// single-eigenvalue matrix with these block sizes.
    pub fn centralizer_dim(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &b)| (2 * i as u64 + 1) * b as u64).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&s.join(","))
    }
}

/// Free-function form of [`Partition::dual`].
pub fn dual(p: &Partition) -> Partition {
    p.dual()
}

/// A Jordan normal form: distinct eigenvalue labels, each with its block partition.
#[derive(Clone, Debug)]
pub struct Jnf {
    blocks: Vec<(String, Partition)>,
    size: u32,
}

impl Jnf {
    pub fn new(blocks: Vec<(String, Partition)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidJnf("no eigenvalues".into()));
        }
        let mut seen = HashSet::new();
        for (label, _) in &blocks {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidJnf(format!("repeated eigenvalue label {label:?}")));
            }
        }
        let size = blocks.iter().map(|(_, p)| p.size()).sum();
        Ok(Jnf { blocks, size })
    }

    /// Convenience constructor from `(label, block sizes)` pairs.
    pub fn from_blocks<S: Into<String>>(blocks: Vec<(S, Vec<u32>)>) -> Result<Self> {
        let blocks = blocks
            .into_iter()
            .map(|(l, b)| Partition::new(b).map(|p| (l.into(), p)))
            .collect::<Result<Vec<_>>>()?;
        Jnf::new(blocks)
    }

    /// Diagonal JNF with the given eigenvalue multiplicities, labelled `e1, e2, ...`
    /// in the order given.
    pub fn diagonal(multiplicities: &[u32]) -> Result<Self> {
        let blocks = multiplicities
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                if m == 0 {
                    return Err(Error::InvalidJnf("zero multiplicity".into()));
                }
                Ok((format!("e{}", i + 1), Partition(vec![1; m as usize])))
            })
            .collect::<Result<Vec<_>>>()?;
        Jnf::new(blocks)
    }

    /// Single eigenvalue `e1` with the given Jordan blocks.
    pub fn single(blocks: Vec<u32>) -> Result<Self> {
        Jnf::new(vec![("e1".to_string(), Partition::new(blocks)?)])
    }

    /// Scalar matrix of size `n`.
    pub fn scalar(n: u32) -> Result<Self> {
        Jnf::diagonal(&[n])
    }

    pub fn blocks(&self) -> &[(String, Partition)] {
        &self.blocks
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.blocks.iter().map(|(l, _)| l.as_str())
    }

    pub fn partition_of(&self, label: &str) -> Option<&Partition> {
        self.blocks.iter().find(|(l, _)| l == label).map(|(_, p)| p)
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|(_, p)| p.parts().iter().all(|&b| b == 1))
    }

    /// Algebraic multiplicity of each eigenvalue, in entry order.
    pub fn multiplicities(&self) -> Vec<u32> {
        self.blocks.iter().map(|(_, p)| p.size()).collect()
    }

    /// Largest number of Jordan blocks sharing one eigenvalue.
    pub fn max_block_count(&self) -> u32 {
        self.blocks.iter().map(|(_, p)| p.len() as u32).max().unwrap_or(0)
    }

    /// Entries sorted by label: the canonical order.
    pub fn canonical(&self) -> Vec<(&str, &Partition)> {
        let mut v: Vec<_> = self.blocks.iter().map(|(l, p)| (l.as_str(), p)).collect();
        v.sort();
        v
    }

    /// Diagonal multiplicity profile of the corresponding diagonal JNF,
    /// sorted non-increasing.
    pub fn multiplicity_profile(&self) -> Vec<u32> {
        let mut m: Vec<u32> =
            self.blocks.iter().flat_map(|(_, p)| p.dual().0).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    /// True when the multiplicities follow the `e1, e2, ...` pattern and every
    /// block is 1, i.e. the abbreviated JSON form reproduces this value.
    fn is_abbreviable(&self) -> bool {
        self.is_diagonal()
            && self.blocks.iter().enumerate().all(|(i, (l, _))| *l == format!("e{}", i + 1))
    }
}

/// Equality ignores entry order.
impl PartialEq for Jnf {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.canonical() == other.canonical()
    }
}

impl Eq for Jnf {}

impl fmt::Display for Jnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.blocks.iter().map(|(l, p)| format!("{l}:({p})")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `sum_l sum_i (2i - 1) b_{i,l}`: dimension of the centralizer of any matrix
/// with this JNF.
pub fn centralizer_dim_of_jnf(j: &Jnf) -> u64 {
    j.blocks.iter().map(|(_, p)| p.centralizer_dim()).sum()
}

/// Dimension of the conjugacy class: `n^2` minus the centralizer dimension.
pub fn d(j: &Jnf) -> u64 {
    let n = j.size as u64;
    n * n - centralizer_dim_of_jnf(j)
}

/// `n` minus the largest number of Jordan blocks sharing one eigenvalue.
pub fn r(j: &Jnf) -> u32 {
    j.size - j.max_block_count()
}

/// Diagonal JNF whose multiplicities are the disjoint union of the duals of the
/// block partitions, sorted non-increasing and relabelled `e1, e2, ...`.
pub fn corresponding_diagonal(j: &Jnf) -> Jnf {
    Jnf::diagonal(&j.multiplicity_profile()).expect("profile parts are positive")
}

/// The unique single-eigenvalue JNF corresponding to the same diagonal JNF.
pub fn corresponding_single_eigenvalue(j: &Jnf) -> Jnf {
    let profile = Partition(j.multiplicity_profile());
    Jnf::new(vec![("e1".to_string(), profile.dual())]).expect("one label")
}

/// Whether two JNFs correspond to the same diagonal JNF.
pub fn corresponds(a: &Jnf, b: &Jnf) -> bool {
    a.size == b.size && a.multiplicity_profile() == b.multiplicity_profile()
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    eigenvalue: String,
    blocks: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagonalJson {
    multiplicities: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JnfJson {
    Entries(Vec<EntryJson>),
    Diagonal(DiagonalJson),
}

impl Serialize for Jnf {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_abbreviable() {
            DiagonalJson { multiplicities: self.multiplicities() }.serialize(serializer)
        } else {
            self.blocks
                .iter()
                .map(|(l, p)| EntryJson { eigenvalue: l.clone(), blocks: p.0.clone() })
                .collect::<Vec<_>>()
                .serialize(serializer)
        }
    }
}

impl<'de> Deserialize<'de> for Jnf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parsed = match JnfJson::deserialize(deserializer)? {
            JnfJson::Entries(entries) => {
                Jnf::from_blocks(entries.into_iter().map(|e| (e.eigenvalue, e.blocks)).collect())
            }
            JnfJson::Diagonal(d) => Jnf::diagonal(&d.multiplicities),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual(&p(&[4, 3, 3])), p(&[3, 3, 3, 1]));
        assert_eq!(dual(&p(&[3, 2])), p(&[2, 2, 1]));
        assert_eq!(dual(&p(&[1])), p(&[1]));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(p(&[1, 3, 2]).parts(), &[3, 2, 1]);
    }

    #[test]
    fn centralizer_d_and_r() {
        let diag22 = Jnf::diagonal(&[2, 2]).unwrap();
        assert_eq!(centralizer_dim_of_jnf(&diag22), 8);
        assert_eq!(d(&diag22), 8);
        assert_eq!(r(&diag22), 2);

        let j211 = Jnf::single(vec![2, 1, 1]).unwrap();
        assert_eq!(centralizer_dim_of_jnf(&j211), 10);
        assert_eq!(d(&j211), 6);
        assert_eq!(r(&j211), 1);

        let a11 = Jnf::diagonal(&[1, 2]).unwrap();
        assert_eq!(d(&a11), 4);

        for n in 1..6 {
            let s = Jnf::scalar(n).unwrap();
            assert_eq!(centralizer_dim_of_jnf(&s), (n * n) as u64);
            assert_eq!(r(&s), 0);
        }
    }

    #[test]
    fn correspondence_examples() {
        let j = Jnf::from_blocks(vec![("x", vec![4, 3, 3]), ("y", vec![3, 2])]).unwrap();
        assert_eq!(j.size(), 15);
        assert_eq!(corresponding_diagonal(&j).multiplicities(), vec![3, 3, 3, 2, 2, 1, 1]);
        assert_eq!(corresponding_single_eigenvalue(&j), Jnf::single(vec![7, 5, 3]).unwrap());

        let diag = Jnf::from_blocks(vec![("a", vec![1, 1]), ("b", vec![1])]).unwrap();
        assert_eq!(corresponding_diagonal(&diag), Jnf::diagonal(&[2, 1]).unwrap());

        let j211 = Jnf::single(vec![2, 1, 1]).unwrap();
        assert_eq!(corresponding_diagonal(&j211).multiplicities(), vec![3, 1]);
        let d31 = Jnf::diagonal(&[3, 1]).unwrap();
        assert_eq!(corresponding_single_eigenvalue(&d31), j211);
        assert!(corresponds(&j211, &d31));
        assert!(corresponds(&j211, &j211));
        assert!(!corresponds(&Jnf::diagonal(&[2, 2]).unwrap(), &d31));

        let n = 5;
        let one_row = Jnf::scalar(n).unwrap();
        assert_eq!(corresponding_single_eigenvalue(&one_row), Jnf::single(vec![1; 5]).unwrap());
    }

    #[test]
    fn jnf_validation() {
        assert!(Jnf::new(vec![]).is_err());
        assert!(Jnf::from_blocks(vec![("a", vec![1]), ("a", vec![2])]).is_err());
        assert!(Jnf::diagonal(&[2, 0]).is_err());
    }

    #[test]
    fn equality_ignores_order() {
        let a = Jnf::from_blocks(vec![("a", vec![2]), ("b", vec![1])]).unwrap();
        let b = Jnf::from_blocks(vec![("b", vec![1]), ("a", vec![2])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_forms() {
        let j = Jnf::from_blocks(vec![("-1", vec![2, 1, 1])]).unwrap();
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"[{"eigenvalue":"-1","blocks":[2,1,1]}]"#);
        assert_eq!(serde_json::from_str::<Jnf>(&s).unwrap(), j);

        let d = serde_json::from_str::<Jnf>(r#"{"multiplicities":[3,1]}"#).unwrap();
        assert_eq!(d, Jnf::diagonal(&[3, 1]).unwrap());
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"multiplicities":[3,1]}"#);

        assert!(serde_json::from_str::<Jnf>(r#"{"multiplicities":[]}"#).is_err());
        assert!(serde_json::from_str::<Jnf>(r#"[{"eigenvalue":"a","blocks":[0]}]"#).is_err());
    }
}
