//! Exact analysis of explicit rational matrix tuples.
//!
//! All dimensions are over the full matrix algebra `gl(n)`: a centralizer
//! consisting of scalars only has dimension 1, and orbit dimensions are
//! `n^2` minus the centralizer dimension. Values quoted in `SL(n)` terms are
//! one less wherever the determinant condition is transverse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{matrix_of_linear_map, vectorize_commutator_map, EchelonBasis, RatMatrix, Rational};
use crate::jnf::{self, Jnf, Partition};
use crate::reduction::JnfTuple;
use crate::spectra::Mode;

/// Matrices `M_1, ..., M_{p+1}` (product `I`) or `A_1, ..., A_{p+1}` (sum 0),
/// each with its claimed eigenvalues listed with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixTuple {
    mode: Mode,
    matrices: Vec<RatMatrix>,
    eigenvalues: Vec<Vec<Rational>>,
}

impl MatrixTuple {
    pub fn new(mode: Mode, matrices: Vec<RatMatrix>, eigenvalues: Vec<Vec<Rational>>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::InvalidTuple("no matrices".into()));
        };
        let n = first.rows();
        if matrices.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::InvalidTuple(format!("matrices must all be {n}x{n}")));
        }
        if eigenvalues.len() != matrices.len() {
            return Err(Error::InvalidTuple(format!(
                "{} eigenvalue lists for {} matrices",
                eigenvalues.len(),
                matrices.len()
            )));
        }
        if let Some(bad) = eigenvalues.iter().position(|e| e.len() != n) {
            return Err(Error::InvalidTuple(format!("eigenvalue list {} must have length {n}", bad + 1)));
        }
        if mode == Mode::Multiplicative && eigenvalues.iter().flatten().any(Rational::is_zero) {
            return Err(Error::InvalidTuple("zero eigenvalue in multiplicative mode".into()));
        }
        Ok(MatrixTuple { mode, matrices, eigenvalues })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn matrices(&self) -> &[RatMatrix] {
        &self.matrices
    }

    pub fn eigenvalues(&self) -> &[Vec<Rational>] {
        &self.eigenvalues
    }

    pub fn n(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Simultaneous conjugation `M_j -> g M_j g^{-1}`.
    pub fn conjugate(&self, g: &RatMatrix) -> Result<MatrixTuple> {
        let gi = g.inverse()?;
        let matrices =
            self.matrices.iter().map(|m| g.matmul(m)?.matmul(&gi)).collect::<Result<Vec<_>>>()?;
        MatrixTuple::new(self.mode, matrices, self.eigenvalues.clone())
    }

    /// Block-diagonal tuple `M_j ⊕ N_j`.
    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<MatrixTuple> {
        if self.mode != other.mode || self.len() != other.len() {
            return Err(Error::InvalidTuple("direct sum of incompatible tuples".into()));
        }
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.direct_sum(b)).collect();
        let eigenvalues = self
            .eigenvalues
            .iter()
            .zip(&other.eigenvalues)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        MatrixTuple::new(self.mode, matrices, eigenvalues)
    }
}

/// Checks `M_1 ⋯ M_{p+1} = I` (multiplicative) or `A_1 + ... + A_{p+1} = 0`.
pub fn verify_closure(t: &MatrixTuple) -> Result<bool> {
    let n = t.n();
    match t.mode {
        Mode::Multiplicative => {
            if t.matrices.iter().any(|m| m.rank() < n) {
                return Err(Error::SingularMatrix);
            }
            Ok(RatMatrix::product(t.matrices.iter())?.is_identity())
        }
        Mode::Additive => {
            let sum = t.matrices[1..].iter().try_fold(t.matrices[0].clone(), |acc, m| acc.add(m))?;
            Ok(sum.is_zero())
        }
    }
}

/// Distinct values of `list` in first-occurrence order, with multiplicities.
fn group(list: &[Rational]) -> Vec<(Rational, u32)> {
    let mut out: Vec<(Rational, u32)> = Vec::new();
    for v in list {
        match out.iter_mut().find(|(w, _)| w == v) {
            Some((_, k)) => *k += 1,
            None => out.push((v.clone(), 1)),
        }
    }
    out
}

/// JNF of `m` given its eigenvalues with multiplicity. Block counts come from
/// the rank sequence of `(m - λI)^k`; eigenvalue labels are the rationals'
/// string forms.
pub fn jnf_of(m: &RatMatrix, eigenvalues: &[Rational]) -> Result<Jnf> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("jnf_of needs a square matrix".into()));
    }
    let n = m.rows();
    if eigenvalues.len() != n {
        return Err(Error::WrongSpectrum(format!("{} eigenvalues claimed for size {n}", eigenvalues.len())));
    }
    let mut blocks = Vec::new();
    for (lambda, mult) in group(eigenvalues) {
        let shifted = m.sub(&RatMatrix::scalar(n, lambda.clone()))?;
        let mut ranks = vec![n];
        let mut power = RatMatrix::identity(n);
        for _ in 0..n {
            power = power.matmul(&shifted)?;
            let r = power.rank();
            let stable = r == *ranks.last().expect("nonempty");
            ranks.push(r);
            if stable {
                break;
            }
        }
        let algebraic = n - *ranks.last().expect("nonempty");
        if algebraic != mult as usize {
            return Err(Error::WrongSpectrum(format!(
                "eigenvalue {lambda} claimed with multiplicity {mult}, found {algebraic}"
            )));
        }
        // blocks of size >= k number ranks[k-1] - ranks[k]; that sequence is
        // the dual of the block partition
        let at_least: Vec<u32> = ranks.windows(2).map(|w| (w[0] - w[1]) as u32).filter(|&c| c > 0).collect();
        let partition = Partition::new(at_least)?.dual();
        blocks.push((lambda.to_string(), partition));
    }
    Jnf::new(blocks)
}

/// Whether `m` has JNF `j`, whose labels are read as the eigenvalues' values.
/// Unparseable labels or a spectrum mismatch give `false`.
pub fn class_membership(m: &RatMatrix, j: &Jnf) -> bool {
    let mut claimed = Vec::new();
    for (label, p) in j.blocks() {
        let Ok(value) = label.parse::<Rational>() else {
            return false;
        };
        claimed.extend(std::iter::repeat_n(value, p.size() as usize));
    }
    // labels must already be in canonical rational form to compare
    let canonical = Jnf::new(
        j.blocks()
            .iter()
            .map(|(l, p)| (l.parse::<Rational>().map(|v| v.to_string()).unwrap_or_default(), p.clone()))
            .collect(),
    );
    match (jnf_of(m, &claimed), canonical) {
        (Ok(found), Ok(expected)) => found == expected,
        _ => false,
    }
}

/// Per-matrix JNFs from the claimed eigenvalues.
pub fn jnfs_of(t: &MatrixTuple) -> Result<Vec<Jnf>> {
    t.matrices.iter().zip(&t.eigenvalues).map(|(m, e)| jnf_of(m, e)).collect()
}

/// The stacked commutator maps `X -> ([M_1, X], ..., [M_{p+1}, X])`.
fn stacked_commutators(t: &MatrixTuple) -> Result<RatMatrix> {
    let maps = t.matrices.iter().map(vectorize_commutator_map).collect::<Result<Vec<_>>>()?;
    RatMatrix::vstack_all(&maps)
}

/// Dimension of `{X : [M_j, X] = 0 for all j}`; at least 1.
pub fn centralizer_dim(t: &MatrixTuple) -> usize {
    stacked_commutators(t).expect("square matrices").nullity()
}

pub fn has_trivial_centralizer(t: &MatrixTuple) -> bool {
    centralizer_dim(t) == 1
}

/// Whether `(X_1, ..., X_{p+1}) -> sum [M_j, X_j]` maps onto the trace-zero matrices.
pub fn commut_surjective(t: &MatrixTuple) -> bool {
    let n = t.n();
    let maps = t
        .matrices
        .iter()
        .map(vectorize_commutator_map)
        .collect::<Result<Vec<_>>>()
        .expect("square matrices");
    RatMatrix::hstack_all(&maps).expect("same height").rank() == n * n - 1
}

/// Dimension of the unital algebra generated by the matrices.
pub fn generated_algebra_dim(t: &MatrixTuple) -> usize {
    let n = t.n();
    let mut span = EchelonBasis::new(n * n);
    let mut basis: Vec<RatMatrix> = Vec::new();
    for m in std::iter::once(RatMatrix::identity(n)).chain(t.matrices.iter().cloned()) {
        if span.insert(&m.vectorize()) {
            basis.push(m);
        }
    }
    // close under right multiplication by the generators; each round either
    // grows the span or ends, so n^2 rounds suffice
    let mut frontier = basis.clone();
    for _ in 0..n * n {
        let mut fresh = Vec::new();
        for b in &frontier {
            for g in &t.matrices {
                let prod = b.matmul(g).expect("same size");
                if span.insert(&prod.vectorize()) {
                    fresh.push(prod);
                }
            }
        }
        if fresh.is_empty() || span.dim() == n * n {
            break;
        }
        frontier = fresh;
    }
    span.dim()
}

/// Irreducible iff the generated algebra is all of `gl(n)` (Burnside).
pub fn is_irreducible(t: &MatrixTuple) -> bool {
    let n = t.n();
    generated_algebra_dim(t) == n * n
}

/// `sum d_j - n^2 + 1`.
pub fn expected_dim(jnfs: &JnfTuple) -> i64 {
    let n = jnfs.n() as i64;
    jnfs.d().iter().sum::<u64>() as i64 - n * n + 1
}

/// Dimension of the tangent space at `t` to the variety of tuples in the
/// same classes with the same closure condition: the kernel of the
/// differential of `(X_j) -> prod (M_j + [X_j, M_j])` (resp. the sum),
/// minus the directions `X_j` in the centralizer of `M_j`, which do not move
/// `M_j`.
pub fn tangent_dim(t: &MatrixTuple) -> Result<usize> {
    if !verify_closure(t)? {
        return Err(Error::ClosureViolated);
    }
    let n = t.n();
    let k = t.len();
    let differential = match t.mode {
        Mode::Multiplicative => {
            // prefix[j] = M_1..M_j (exclusive of M_{j+1}), suffix[j] = M_{j+2}..M_{p+1}
            let mut prefix = vec![RatMatrix::identity(n)];
            for m in &t.matrices {
                let next = prefix.last().expect("nonempty").matmul(m)?;
                prefix.push(next);
            }
            let mut suffix = vec![RatMatrix::identity(n); k + 1];
            for j in (0..k).rev() {
                suffix[j] = t.matrices[j].matmul(&suffix[j + 1])?;
            }
            matrix_of_linear_map(k * n * n, |idx| {
                let (j, e) = (idx / (n * n), idx % (n * n));
                let x = RatMatrix::unit(n, e / n, e % n);
                let term = prefix[j].matmul(&x.commutator(&t.matrices[j])?)?.matmul(&suffix[j + 1])?;
                Ok(term.vectorize())
            })?
        }
        Mode::Additive => matrix_of_linear_map(k * n * n, |idx| {
            let (j, e) = (idx / (n * n), idx % (n * n));
            let x = RatMatrix::unit(n, e / n, e % n);
            Ok(x.commutator(&t.matrices[j])?.vectorize())
        })?,
    };
    let kernel = differential.nullity();
    let stabilizers: usize =
        t.matrices.iter().map(|m| vectorize_commutator_map(m).map(|l| l.nullity())).sum::<Result<usize>>()?;
    Ok(kernel - stabilizers)
}

/// Dimension of the orbit under simultaneous conjugation.
pub fn orbit_dim(t: &MatrixTuple) -> usize {
    let n = t.n();
    n * n - centralizer_dim(t)
}

/// Dimension of `{X : M_j X = X N_j for all j}`, the intertwiners between two tuples.
pub fn intertwiner_dim(a: &MatrixTuple, b: &MatrixTuple) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::InvalidTuple("tuples of different lengths".into()));
    }
    let (n, m) = (a.n(), b.n());
    let maps = a
        .matrices
        .iter()
        .zip(&b.matrices)
        .map(|(ma, mb)| {
            matrix_of_linear_map(n * m, |idx| {
                let mut x = RatMatrix::zeros(n, m);
                x[(idx / m, idx % m)] = Rational::one();
                Ok(ma.matmul(&x)?.sub(&x.matmul(mb)?)?.vectorize())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatMatrix::vstack_all(&maps)?.nullity())
}

/// Everything `verify` reports about a tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleReport {
    pub n: usize,
    pub mode: Mode,
    pub closure: bool,
    pub jnfs: Vec<Jnf>,
    pub r: Vec<u32>,
    pub d: Vec<u64>,
    pub centralizer_dim: usize,
    pub trivial_centralizer: bool,
    pub commut_surjective: bool,
    pub irreducible: bool,
    pub generated_algebra_dim: usize,
    pub orbit_dim: usize,
    pub expected_dim: Option<i64>,
    pub tangent_dim: Option<usize>,
    /// `"tangent"` at trivial-centralizer points, `"formal tangent"` elsewhere.
    pub tangent_dim_kind: Option<String>,
}

pub fn analyze(t: &MatrixTuple) -> Result<TupleReport> {
    let closure = verify_closure(t)?;
    let jnfs = jnfs_of(t)?;
    let centralizer = centralizer_dim(t);
    let trivial = centralizer == 1;
    let jnf_tuple = if jnfs.len() >= 2 { Some(JnfTuple::new(jnfs.clone())?) } else { None };
    let tangent = if closure { Some(tangent_dim(t)?) } else { None };
    Ok(TupleReport {
        n: t.n(),
        mode: t.mode,
        closure,
        r: jnfs.iter().map(jnf::r).collect(),
        d: jnfs.iter().map(jnf::d).collect(),
        jnfs,
        centralizer_dim: centralizer,
        trivial_centralizer: trivial,
        commut_surjective: commut_surjective(t),
        irreducible: is_irreducible(t),
        generated_algebra_dim: generated_algebra_dim(t),
        orbit_dim: orbit_dim(t),
        expected_dim: jnf_tuple.as_ref().map(expected_dim),
        tangent_dim: tangent,
        tangent_dim_kind: tangent.map(|_| if trivial { "tangent" } else { "formal tangent" }.to_string()),
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleJson {
    mode: Mode,
    matrices: Vec<RatMatrix>,
    eigenvalues: Vec<Vec<Rational>>,
}

impl Serialize for MatrixTuple {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TupleJson { mode: self.mode, matrices: self.matrices.clone(), eigenvalues: self.eigenvalues.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixTuple {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = TupleJson::deserialize(deserializer)?;
        MatrixTuple::new(raw.mode, raw.matrices, raw.eigenvalues).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{q, qi};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| qi(x)).collect()
    }

    fn mult(matrices: Vec<RatMatrix>, eig: Vec<Vec<Rational>>) -> MatrixTuple {
        MatrixTuple::new(Mode::Multiplicative, matrices, eig).unwrap()
    }

    #[test]
    fn closure_trivial_cases() {
        let i = RatMatrix::identity(2);
        let t = mult(vec![i.clone(), i.clone(), i.clone()], vec![ints(&[1, 1]); 3]);
        assert!(verify_closure(&t).unwrap());
        let t2 = mult(vec![i.clone(), i.scale(&qi(2))], vec![ints(&[1, 1]), ints(&[2, 2])]);
        assert!(!verify_closure(&t2).unwrap());
        let singular = mult(vec![m(&[&[1, 0], &[0, 0]]), i], vec![ints(&[1, 1]); 2]);
        assert_eq!(verify_closure(&singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn jnf_of_examples() {
        let d = RatMatrix::diag(&ints(&[2, 2, 3]));
        assert_eq!(jnf_of(&d, &ints(&[2, 2, 3])).unwrap(), Jnf::from_blocks(vec![("2", vec![1, 1]), ("3", vec![1])]).unwrap());
        let j = m(&[&[5, 1], &[0, 5]]);
        assert_eq!(jnf_of(&j, &ints(&[5, 5])).unwrap(), Jnf::from_blocks(vec![("5", vec![2])]).unwrap());
        assert!(matches!(jnf_of(&j, &ints(&[5, 4])), Err(Error::WrongSpectrum(_))));
        assert!(matches!(jnf_of(&j, &ints(&[5])), Err(Error::WrongSpectrum(_))));
        let nil = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(jnf_of(&nil, &ints(&[0, 0, 0])).unwrap(), Jnf::from_blocks(vec![("0", vec![3])]).unwrap());
    }

    #[test]
    fn membership_examples() {
        let d = RatMatrix::diag(&[qi(1), q(1, 2)]);
        let j = Jnf::from_blocks(vec![("1", vec![1]), ("1/2", vec![1])]).unwrap();
        assert!(class_membership(&d, &j));
        let s = RatMatrix::scalar(2, qi(2));
        assert!(!class_membership(&s, &Jnf::from_blocks(vec![("2", vec![2])]).unwrap()));
        assert!(!class_membership(&s, &Jnf::from_blocks(vec![("two", vec![1, 1])]).unwrap()));
        // non-canonical label spelling still reads as the value
        assert!(class_membership(&s, &Jnf::from_blocks(vec![("4/2", vec![1, 1])]).unwrap()));
    }

    #[test]
    fn centralizer_examples() {
        let i = RatMatrix::identity(3);
        let t = mult(vec![i.clone(), i.clone()], vec![ints(&[1, 1, 1]); 2]);
        assert_eq!(centralizer_dim(&t), 9);
        assert!(!commut_surjective(&t));
        let single = mult(vec![RatMatrix::diag(&ints(&[1, 2]))], vec![ints(&[1, 2])]);
        assert_eq!(centralizer_dim(&single), 2);
        assert!(!has_trivial_centralizer(&single));
        assert_eq!(orbit_dim(&t), 0);
    }

    #[test]
    fn size_one_is_irreducible() {
        let t = mult(vec![m(&[&[2]]), RatMatrix::new(1, 1, vec![q(1, 2)]).unwrap()], vec![ints(&[2]), vec![q(1, 2)]]);
        assert!(is_irreducible(&t));
        assert!(has_trivial_centralizer(&t));
        assert!(commut_surjective(&t));
    }

    #[test]
    fn triangular_pair_is_reducible() {
        let a = m(&[&[1, 1], &[0, 2]]);
        let b = m(&[&[3, 0], &[0, 1]]);
        let t = mult(vec![a, b], vec![ints(&[1, 2]), ints(&[3, 1])]);
        assert!(!is_irreducible(&t));
        assert_eq!(generated_algebra_dim(&t), 3);
    }

    #[test]
    fn tuple_validation() {
        assert!(MatrixTuple::new(Mode::Multiplicative, vec![], vec![]).is_err());
        let i = RatMatrix::identity(2);
        assert!(MatrixTuple::new(Mode::Multiplicative, vec![i.clone()], vec![ints(&[1])]).is_err());
        assert!(MatrixTuple::new(Mode::Multiplicative, vec![i.clone()], vec![ints(&[0, 1])]).is_err());
        assert!(MatrixTuple::new(Mode::Additive, vec![i.clone()], vec![ints(&[0, 1])]).is_ok());
        assert!(MatrixTuple::new(Mode::Additive, vec![i, RatMatrix::identity(3)], vec![ints(&[1, 1]), ints(&[1, 1, 1])]).is_err());
    }

    #[test]
    fn tangent_needs_closure() {
        let i = RatMatrix::identity(2);
        let t = mult(vec![i.clone(), i.scale(&qi(2))], vec![ints(&[1, 1]), ints(&[2, 2])]);
        assert_eq!(tangent_dim(&t), Err(Error::ClosureViolated));
    }

    #[test]
    fn additive_tangent_of_generic_triple() {
        let a1 = m(&[&[1, 0], &[0, 2]]);
        let a2 = m(&[&[3, 1], &[0, 4]]);
        let a3 = a1.add(&a2).unwrap().neg();
        let t = MatrixTuple::new(
            Mode::Additive,
            vec![a1, a2, a3],
            vec![ints(&[1, 2]), ints(&[3, 4]), ints(&[-4, -6])],
        )
        .unwrap();
        assert!(verify_closure(&t).unwrap());
        // common eigenvector e1
        assert!(!is_irreducible(&t));
        assert_eq!(centralizer_dim(&t), 1);
        let jt = JnfTuple::new(jnfs_of(&t).unwrap()).unwrap();
        assert_eq!(expected_dim(&jt), 3);
        assert!(tangent_dim(&t).unwrap() >= 1);
    }
}
