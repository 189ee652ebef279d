//! The five worked examples as executable fixtures.
//!
//! Every expectation names a [`Check`] that is re-evaluated against the
//! fixture's own data when the corpus runs, so a fixture cannot pass on a
//! stored number alone.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{q, qi, RatMatrix, Rational};
use crate::jnf::{self, Jnf};
use crate::reduction::{self, explore_choices, kappa, solvable_generic, JnfTuple};
use crate::spectra::{self, FormalScalar, GenericityVerdict, Mode, SpectrumAssignment};
use crate::tuple_lab::{self, MatrixTuple};

use super::builders;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A number stated in the source material.
    Stated,
    /// Follows from stated facts by arithmetic or an independent oracle.
    Derived,
    /// A sanity case.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Text(String),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    Eq,
    /// Integer lower bound.
    AtLeast,
}

/// A square block of one matrix of a named tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRef {
    pub tuple: String,
    pub index: usize,
    pub row: usize,
    pub col: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Kappa(String),
    ExpectedDim(String),
    Verdict(String),
    /// Sizes along the default reduction trace, comma-separated.
    Chain(String),
    /// κ is the same at every stage of every explored trace.
    KappaInvariant(String),
    /// Distinct verdicts over all admissible eigenvalue choices.
    VerdictsOverChoices(String),
    /// Whether entry `index` of two named JNF tuples correspond.
    JnfsCorrespond { a: String, b: String, index: usize },
    Genericity(String),
    BasicQ(String),
    BasicM(String),
    /// Whether the relation with these per-class counts is among all relations.
    HasRelation { spectrum: String, counts: Vec<Vec<u32>> },
    RelationCount(String),
    Closure(String),
    CentralizerDim(String),
    Irreducible(String),
    CommutSurjective(String),
    TangentDim(String),
    OrbitDim(String),
    ClassMembership { tuple: String, index: usize, jnf: Jnf },
    IntertwinerDim(String, String),
    /// Dimension of the span of a named list of vectors.
    SpaceDim(String),
    BlockTrace(BlockRef),
    BlockRank(BlockRef),
    BlockSquareIsZero(BlockRef),
}

impl Check {
    /// Name of the library operation this check exercises.
    pub fn operation(&self) -> &'static str {
        match self {
            Check::Kappa(_) => "kappa",
            Check::ExpectedDim(_) => "expected_dim",
            Check::Verdict(_) => "solvable_generic",
            Check::Chain(_) => "solvable_generic",
            Check::KappaInvariant(_) => "reduce_step",
            Check::VerdictsOverChoices(_) => "explore_choices",
            Check::JnfsCorrespond { .. } => "corresponds",
            Check::Genericity(_) => "classify",
            Check::BasicQ(_) | Check::BasicM(_) => "basic_relation",
            Check::HasRelation { .. } | Check::RelationCount(_) => "is_generic",
            Check::Closure(_) => "verify_closure",
            Check::CentralizerDim(_) => "centralizer_dim",
            Check::Irreducible(_) => "is_irreducible",
            Check::CommutSurjective(_) => "commut_surjective",
            Check::TangentDim(_) => "tangent_dim",
            Check::OrbitDim(_) => "orbit_dim",
            Check::ClassMembership { .. } => "class_membership",
            Check::IntertwinerDim(..) => "intertwiner_dim",
            Check::SpaceDim(_) => "rank",
            Check::BlockTrace(_) => "trace",
            Check::BlockRank(_) => "rank",
            Check::BlockSquareIsZero(_) => "matmul",
        }
    }

    pub fn evaluate(&self, fx: &Fixture) -> Result<Value> {
        let int = |v: usize| Value::Int(v as i64);
        Ok(match self {
            Check::Kappa(t) => Value::Int(kappa(fx.jnf_tuple(t)?)),
            Check::ExpectedDim(t) => Value::Int(tuple_lab::expected_dim(fx.jnf_tuple(t)?)),
            Check::Verdict(t) => Value::Text(format!("{:?}", solvable_generic(fx.jnf_tuple(t)?).verdict)),
            Check::Chain(t) => Value::Text(join(&solvable_generic(fx.jnf_tuple(t)?).chain())),
            Check::KappaInvariant(t) => {
                let t = fx.jnf_tuple(t)?;
                let k = kappa(t);
                Value::Bool(explore_choices(t).iter().all(|tr| tr.stages.iter().all(|s| s.kappa == k)))
            }
            Check::VerdictsOverChoices(t) => {
                let verdicts: BTreeSet<String> =
                    reduction::verdicts_over_choices(fx.jnf_tuple(t)?).iter().map(|v| format!("{v:?}")).collect();
                Value::Text(verdicts.into_iter().collect::<Vec<_>>().join(","))
            }
            Check::JnfsCorrespond { a, b, index } => {
                let ja = fx.jnf_tuple(a)?.jnfs().get(*index).ok_or_else(|| missing("JNF", a))?;
                let jb = fx.jnf_tuple(b)?.jnfs().get(*index).ok_or_else(|| missing("JNF", b))?;
                Value::Bool(jnf::corresponds(ja, jb))
            }
            Check::Genericity(s) => Value::Text(spectra::classify(fx.spectrum(s)?)?.label().to_string()),
            Check::BasicQ(s) => Value::Int(basic(fx.spectrum(s)?)?.q as i64),
            Check::BasicM(s) => Value::Int(basic(fx.spectrum(s)?)?.m as i64),
            Check::HasRelation { spectrum, counts } => Value::Bool(match spectra::is_generic(fx.spectrum(spectrum)?)? {
                GenericityVerdict::Generic => false,
                GenericityVerdict::NonGeneric(ws) => ws.iter().any(|w| &w.counts == counts),
            }),
            Check::RelationCount(s) => int(match spectra::is_generic(fx.spectrum(s)?)? {
                GenericityVerdict::Generic => 0,
                GenericityVerdict::NonGeneric(ws) => ws.len(),
            }),
            Check::Closure(t) => Value::Bool(tuple_lab::verify_closure(fx.tuple(t)?)?),
            Check::CentralizerDim(t) => int(tuple_lab::centralizer_dim(fx.tuple(t)?)),
            Check::Irreducible(t) => Value::Bool(tuple_lab::is_irreducible(fx.tuple(t)?)),
            Check::CommutSurjective(t) => Value::Bool(tuple_lab::commut_surjective(fx.tuple(t)?)),
            Check::TangentDim(t) => int(tuple_lab::tangent_dim(fx.tuple(t)?)?),
            Check::OrbitDim(t) => int(tuple_lab::orbit_dim(fx.tuple(t)?)),
            Check::ClassMembership { tuple, index, jnf } => {
                let m = fx.tuple(tuple)?.matrices().get(*index).ok_or_else(|| missing("matrix", tuple))?;
                Value::Bool(tuple_lab::class_membership(m, jnf))
            }
            Check::IntertwinerDim(a, b) => int(tuple_lab::intertwiner_dim(fx.tuple(a)?, fx.tuple(b)?)?),
            Check::SpaceDim(name) => {
                let vectors = fx.space(name)?;
                int(if vectors.is_empty() { 0 } else { RatMatrix::from_rows(vectors.to_vec())?.rank() })
            }
            Check::BlockTrace(b) => {
                let tr = fx.block(b)?.trace()?;
                Value::Text(tr.to_string())
            }
            Check::BlockRank(b) => int(fx.block(b)?.rank()),
            Check::BlockSquareIsZero(b) => {
                let m = fx.block(b)?;
                Value::Bool(m.matmul(&m)?.is_zero())
            }
        })
    }
}

fn join(parts: &[u32]) -> String {
    parts.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn missing(kind: &str, name: &str) -> Error {
    Error::Internal(format!("fixture has no {kind} named {name:?}"))
}

fn basic(s: &SpectrumAssignment) -> Result<spectra::BasicRelation> {
    spectra::basic_relation(s)?.ok_or_else(|| Error::Internal("multiplicities are coprime".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub name: String,
    pub check: Check,
    pub expected: Value,
    pub comparator: Comparator,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Default)]
pub struct Fixture {
    pub name: String,
    pub summary: String,
    pub jnf_tuples: Vec<(String, JnfTuple)>,
    pub spectra: Vec<(String, SpectrumAssignment)>,
    pub matrix_tuples: Vec<(String, MatrixTuple)>,
    /// Named lists of spanning vectors.
    pub spaces: Vec<(String, Vec<Vec<Rational>>)>,
    pub expectations: Vec<Expectation>,
    /// Facts that are not machine-checked, e.g. stratum dimension arithmetic.
    pub notes: Vec<String>,
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str, kind: &str) -> Result<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, v)| v).ok_or_else(|| missing(kind, name))
}

impl Fixture {
    fn new(name: &str, summary: &str) -> Self {
        Fixture { name: name.into(), summary: summary.into(), ..Default::default() }
    }

    pub fn jnf_tuple(&self, name: &str) -> Result<&JnfTuple> {
        lookup(&self.jnf_tuples, name, "JNF tuple")
    }

    pub fn spectrum(&self, name: &str) -> Result<&SpectrumAssignment> {
        lookup(&self.spectra, name, "spectrum")
    }

    pub fn tuple(&self, name: &str) -> Result<&MatrixTuple> {
        lookup(&self.matrix_tuples, name, "matrix tuple")
    }

    pub fn space(&self, name: &str) -> Result<&[Vec<Rational>]> {
        lookup(&self.spaces, name, "space").map(Vec::as_slice)
    }

    fn block(&self, b: &BlockRef) -> Result<RatMatrix> {
        let m = self.tuple(&b.tuple)?.matrices().get(b.index).ok_or_else(|| missing("matrix", &b.tuple))?;
        m.block(b.row, b.col, b.size, b.size)
    }

    fn expect(&mut self, name: &str, check: Check, expected: Value, provenance: Provenance) {
        self.expectations.push(Expectation {
            name: name.into(),
            check,
            expected,
            comparator: Comparator::Eq,
            provenance,
        });
    }

    fn expect_at_least(&mut self, name: &str, check: Check, bound: i64, provenance: Provenance) {
        self.expectations.push(Expectation {
            name: name.into(),
            check,
            expected: Value::Int(bound),
            comparator: Comparator::AtLeast,
            provenance,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectationResult {
    pub name: String,
    pub operation: &'static str,
    pub comparator: Comparator,
    pub expected: Value,
    pub actual: Option<Value>,
    pub error: Option<String>,
    pub provenance: Provenance,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub fixture: String,
    pub summary: String,
    pub results: Vec<ExpectationResult>,
    pub notes: Vec<String>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

pub fn run_fixture(fx: &Fixture) -> FixtureReport {
    let results = fx
        .expectations
        .iter()
        .map(|e| {
            let outcome = e.check.evaluate(fx);
            let pass = match (&outcome, e.comparator, &e.expected) {
                (Ok(actual), Comparator::Eq, expected) => actual == expected,
                (Ok(Value::Int(a)), Comparator::AtLeast, Value::Int(b)) => a >= b,
                _ => false,
            };
            let (actual, error) = match outcome {
                Ok(v) => (Some(v), None),
                Err(err) => (None, Some(err.to_string())),
            };
            ExpectationResult {
                name: e.name.clone(),
                operation: e.check.operation(),
                comparator: e.comparator,
                expected: e.expected.clone(),
                actual,
                error,
                provenance: e.provenance,
                pass,
            }
        })
        .collect();
    FixtureReport { fixture: fx.name.clone(), summary: fx.summary.clone(), results, notes: fx.notes.clone() }
}

pub const EXAMPLE_NAMES: [&str; 5] = ["example1", "example2", "example3", "example4", "example5"];

pub fn builtin_corpus() -> Result<Vec<Fixture>> {
    EXAMPLE_NAMES.iter().map(|n| fixture(n)).collect()
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "example1" => example1(),
        "example2" => example2(),
        "example3" => example3(),
        "example4" => example4(),
        "example5" => example5(),
        other => Err(Error::InvalidChoice(format!(
            "unknown example {other:?}; expected one of {}",
            EXAMPLE_NAMES.join(", ")
        ))),
    }
}

use Provenance::{Derived, Stated, Trivial};

fn text(s: &str) -> Value {
    Value::Text(s.into())
}

fn jt(jnfs: Vec<Jnf>) -> JnfTuple {
    JnfTuple::new(jnfs).expect("valid JNF tuple")
}

fn diag(m: &[u32]) -> Jnf {
    Jnf::diagonal(m).expect("valid multiplicities")
}

fn blocks(b: Vec<(&str, Vec<u32>)>) -> Jnf {
    Jnf::from_blocks(b).expect("valid JNF")
}

/// `J*`: three diagonal classes `(2,2)` and a single eigenvalue with blocks `(2,1,1)`.
pub fn j_star() -> JnfTuple {
    jt(vec![diag(&[2, 2]), diag(&[2, 2]), diag(&[2, 2]), Jnf::single(vec![2, 1, 1]).expect("valid")])
}

/// `J**`: as `J*` with the last class diagonal `(3,1)`.
pub fn j_star_star() -> JnfTuple {
    jt(vec![diag(&[2, 2]), diag(&[2, 2]), diag(&[2, 2]), diag(&[3, 1])])
}

fn sym(name: &str, c: i64) -> FormalScalar {
    FormalScalar::symbol(Mode::Multiplicative, name, qi(c))
}

fn mono(terms: &[(&str, i64)]) -> FormalScalar {
    let terms: Vec<(&str, Rational)> = terms.iter().map(|&(s, c)| (s, qi(c))).collect();
    FormalScalar::monomial(&terms, qi(0))
}

fn symbols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Eigenvalues `(e, 1/e), (√2, 1/√2), (3, 1/3)` of multiplicity 2 and a
/// fourth class with eigenvalue `exp(2πi·phase)` of multiplicity 4.
pub fn spectrum_size_four_quadruple(phase: Rational) -> SpectrumAssignment {
    let root2 = FormalScalar::monomial(&[("2", q(1, 2))], qi(0));
    SpectrumAssignment::new(
        Mode::Multiplicative,
        symbols(&["e", "2", "3"]),
        vec![
            vec![(sym("e", 1), 2), (sym("e", -1), 2)],
            vec![(root2.clone(), 2), (root2.inverse(), 2)],
            vec![(sym("3", 1), 2), (sym("3", -1), 2)],
            vec![(FormalScalar::root_of_unity(phase), 4)],
        ],
    )
    .expect("valid spectrum")
}

/// Classes `(a,a,b,c), (f,f,g,h), (u,u,v,w)` with `u = (abfgv)^-1` and
/// `w = bgv/(ch)`, so that `abfguv = 1` and the global condition holds.
pub fn spectrum_three_classes_size_four() -> SpectrumAssignment {
    let u = mono(&[("a", -1), ("b", -1), ("f", -1), ("g", -1), ("v", -1)]);
    let w = mono(&[("b", 1), ("g", 1), ("v", 1), ("c", -1), ("h", -1)]);
    SpectrumAssignment::new(
        Mode::Multiplicative,
        symbols(&["a", "b", "c", "f", "g", "h", "v"]),
        vec![
            vec![(sym("a", 1), 2), (sym("b", 1), 1), (sym("c", 1), 1)],
            vec![(sym("f", 1), 2), (sym("g", 1), 1), (sym("h", 1), 1)],
            vec![(u, 2), (sym("v", 1), 1), (w, 1)],
        ],
    )
    .expect("valid spectrum")
}

/// Classes `(a,a,b,b), (f,f,g,g), (u,u,v,v)` with `u = (abfgv)^-1`.
pub fn spectrum_three_classes_doubled() -> SpectrumAssignment {
    let u = mono(&[("a", -1), ("b", -1), ("f", -1), ("g", -1), ("v", -1)]);
    SpectrumAssignment::new(
        Mode::Multiplicative,
        symbols(&["a", "b", "f", "g", "v"]),
        vec![
            vec![(sym("a", 1), 2), (sym("b", 1), 2)],
            vec![(sym("f", 1), 2), (sym("g", 1), 2)],
            vec![(u, 2), (sym("v", 1), 2)],
        ],
    )
    .expect("valid spectrum")
}

/// Classes `(a,1,1), (b,1,1), (c,1,1), (d,1,1)` with `d = (abc)^-1`.
pub fn spectrum_four_classes_size_three() -> SpectrumAssignment {
    let one = FormalScalar::identity(Mode::Multiplicative);
    let d = mono(&[("a", -1), ("b", -1), ("c", -1)]);
    SpectrumAssignment::new(
        Mode::Multiplicative,
        symbols(&["a", "b", "c"]),
        vec![
            vec![(sym("a", 1), 1), (one.clone(), 2)],
            vec![(sym("b", 1), 1), (one.clone(), 2)],
            vec![(sym("c", 1), 1), (one.clone(), 2)],
            vec![(d, 1), (one, 2)],
        ],
    )
    .expect("valid spectrum")
}

fn rational_spectrum(t: &MatrixTuple) -> SpectrumAssignment {
    SpectrumAssignment::from_rationals(t.mode(), t.eigenvalues()).expect("nonzero eigenvalues")
}

fn add_tuple(fx: &mut Fixture, name: &str, t: MatrixTuple) {
    fx.matrix_tuples.push((name.into(), t));
}

/// JNF with rational labels from a 2x2 block per eigenvalue pattern.
fn numeric(b: Vec<(Rational, Vec<u32>)>) -> Jnf {
    Jnf::new(
        b.into_iter()
            .map(|(v, p)| (v.to_string(), jnf::Partition::new(p).expect("valid partition")))
            .collect(),
    )
    .expect("valid JNF")
}

fn example1() -> Result<Fixture> {
    let mut fx = Fixture::new(
        "example1",
        "size 4, four classes, index of rigidity 2; strata of direct and semi-direct sums",
    );
    fx.jnf_tuples.push(("J*".into(), j_star()));
    fx.jnf_tuples.push(("J**".into(), j_star_star()));
    fx.jnf_tuples.push(("N classes".into(), jt(vec![diag(&[1, 1]), diag(&[1, 1]), diag(&[1, 1]), diag(&[2])])));
    fx.jnf_tuples.push((
        "P classes".into(),
        jt(vec![diag(&[1, 1]), diag(&[1, 1]), diag(&[1, 1]), Jnf::single(vec![2]).expect("valid")]),
    ));
    for name in ["J*", "J**"] {
        fx.expect(&format!("kappa {name}"), Check::Kappa(name.into()), Value::Int(2), Stated);
        fx.expect(&format!("expected dimension {name}"), Check::ExpectedDim(name.into()), Value::Int(15), Stated);
        fx.expect(&format!("verdict {name}"), Check::Verdict(name.into()), text("Solvable"), Stated);
        fx.expect(&format!("chain {name}"), Check::Chain(name.into()), text("4,3,1"), Derived);
        fx.expect(&format!("kappa invariant {name}"), Check::KappaInvariant(name.into()), Value::Bool(true), Stated);
        fx.expect(
            &format!("verdict over all choices {name}"),
            Check::VerdictsOverChoices(name.into()),
            text("Solvable"),
            Derived,
        );
    }
    fx.expect(
        "fourth classes correspond",
        Check::JnfsCorrespond { a: "J*".into(), b: "J**".into(), index: 3 },
        Value::Bool(true),
        Stated,
    );
    fx.expect("kappa N classes", Check::Kappa("N classes".into()), Value::Int(2), Derived);
    fx.expect("kappa P classes", Check::Kappa("P classes".into()), Value::Int(0), Stated);

    fx.spectra.push(("fourth eigenvalue i".into(), spectrum_size_four_quadruple(q(1, 4))));
    fx.spectra.push(("fourth eigenvalue -1".into(), spectrum_size_four_quadruple(q(1, 2))));
    fx.expect("genericity with i", Check::Genericity("fourth eigenvalue i".into()), text("Generic"), Stated);
    fx.expect(
        "genericity with -1",
        Check::Genericity("fourth eigenvalue -1".into()),
        text("RelativelyGeneric"),
        Stated,
    );
    fx.expect("gcd of multiplicities with -1", Check::BasicQ("fourth eigenvalue -1".into()), Value::Int(2), Stated);
    fx.expect("basic relation order with -1", Check::BasicM("fourth eigenvalue -1".into()), Value::Int(2), Derived);
    fx.expect("basic relation order with i", Check::BasicM("fourth eigenvalue i".into()), Value::Int(1), Derived);

    let n_quad = builders::build_n_quadruple()?;
    let n_triple = builders::build_rigid_triple_n()?;
    let p_quad = builders::build_p_quadruple()?;
    let u = builders::build_u_point(&n_triple, &p_quad)?;
    let w = builders::build_w_point(&n_triple, &builders::upper_right_r4())?;
    let y = builders::build_y_point(&n_triple)?;
    fx.spectra.push(("N quadruple eigenvalues".into(), rational_spectrum(&n_quad)));
    fx.spectra.push(("P quadruple eigenvalues".into(), rational_spectrum(&p_quad)));
    fx.spectra.push(("U-point eigenvalues".into(), rational_spectrum(&u)));
    fx.expect("N eigenvalues generic", Check::Genericity("N quadruple eigenvalues".into()), text("Generic"), Stated);
    fx.expect("P eigenvalues generic", Check::Genericity("P quadruple eigenvalues".into()), text("Generic"), Stated);
    fx.expect(
        "U-point eigenvalues relatively generic",
        Check::Genericity("U-point eigenvalues".into()),
        text("RelativelyGeneric"),
        Stated,
    );
    add_tuple(&mut fx, "N quadruple", n_quad);
    add_tuple(&mut fx, "P quadruple", p_quad);
    add_tuple(&mut fx, "U-point", u);
    add_tuple(&mut fx, "W-point", w);
    add_tuple(&mut fx, "Y-point", y);

    for name in ["N quadruple", "P quadruple", "U-point", "W-point", "Y-point"] {
        fx.expect(&format!("closure {name}"), Check::Closure(name.into()), Value::Bool(true), Trivial);
    }
    fx.expect("N quadruple irreducible", Check::Irreducible("N quadruple".into()), Value::Bool(true), Stated);
    fx.expect("P quadruple irreducible", Check::Irreducible("P quadruple".into()), Value::Bool(true), Stated);
    fx.expect("tangent N quadruple", Check::TangentDim("N quadruple".into()), Value::Int(3), Stated);
    fx.expect("tangent P quadruple", Check::TangentDim("P quadruple".into()), Value::Int(5), Stated);
    fx.expect("U-point centralizer (gl)", Check::CentralizerDim("U-point".into()), Value::Int(2), Stated);
    fx.expect("W-point centralizer (gl)", Check::CentralizerDim("W-point".into()), Value::Int(2), Stated);
    fx.expect("Y-point centralizer (gl)", Check::CentralizerDim("Y-point".into()), Value::Int(4), Stated);
    fx.expect("Y-point orbit", Check::OrbitDim("Y-point".into()), Value::Int(12), Stated);
    fx.expect("U-point reducible", Check::Irreducible("U-point".into()), Value::Bool(false), Stated);
    fx.expect("W-point reducible", Check::Irreducible("W-point".into()), Value::Bool(false), Stated);
    fx.expect_at_least("U-point formal tangent", Check::TangentDim("U-point".into()), 16, Derived);

    let minus_one = qi(-1);
    let j4 = numeric(vec![(minus_one.clone(), vec![2, 1, 1])]);
    let diagonal_pairs = [(qi(2), q(1, 2)), (qi(3), q(1, 3)), (qi(5), q(1, 5))];
    for point in ["U-point", "W-point"] {
        for (j, (a, b)) in diagonal_pairs.iter().enumerate() {
            fx.expect(
                &format!("{point} matrix {} diagonalizable", j + 1),
                Check::ClassMembership {
                    tuple: point.into(),
                    index: j,
                    jnf: numeric(vec![(a.clone(), vec![1, 1]), (b.clone(), vec![1, 1])]),
                },
                Value::Bool(true),
                Stated,
            );
        }
        fx.expect(
            &format!("{point} matrix 4 blocks (2,1,1) at -1"),
            Check::ClassMembership { tuple: point.into(), index: 3, jnf: j4.clone() },
            Value::Bool(true),
            Stated,
        );
    }
    fx.expect(
        "Y-point matrix 4 scalar",
        Check::ClassMembership { tuple: "Y-point".into(), index: 3, jnf: numeric(vec![(minus_one, vec![1, 1, 1, 1])]) },
        Value::Bool(true),
        Stated,
    );
    let r4 = BlockRef { tuple: "W-point".into(), index: 3, row: 0, col: 2, size: 2 };
    fx.expect("R_4 trace", Check::BlockTrace(r4.clone()), text("0"), Stated);
    fx.expect("R_4 rank", Check::BlockRank(r4.clone()), Value::Int(1), Stated);
    fx.expect("R_4 nilpotent", Check::BlockSquareIsZero(r4), Value::Bool(true), Stated);

    fx.notes = vec![
        "centralizer dimensions are over gl(4); the SL(4) values are one less".into(),
        "dim W = 15: a one-parameter family of upper-right blocks, conjugated by SL(4) modulo a 1-dim centralizer: 1 + 15 - 1".into(),
        "dim U = 8 + 15 - 7 = 16: pairs (N, P) of dimension 3 + 5, SL(4), block-diagonal stabilizer".into(),
        "the formal tangent dimension at the U-point bounds the local dimension from above, so it is at least 16".into(),
    ];
    Ok(fx)
}

fn example2() -> Result<Fixture> {
    let mut fx = Fixture::new(
        "example2",
        "size 4, three diagonal classes (a,a,b,c), (f,f,g,h), (u,u,v,w), one relation abfguv = 1",
    );
    let classes = jt(vec![diag(&[2, 1, 1]), diag(&[2, 1, 1]), diag(&[2, 1, 1])]);
    fx.jnf_tuples.push(("classes".into(), classes));
    fx.expect("kappa", Check::Kappa("classes".into()), Value::Int(2), Stated);
    fx.expect("expected dimension", Check::ExpectedDim("classes".into()), Value::Int(15), Derived);
    fx.expect("verdict", Check::Verdict("classes".into()), text("Solvable"), Derived);
    fx.expect("chain", Check::Chain("classes".into()), text("4,2,1"), Derived);

    fx.spectra.push(("symbolic".into(), spectrum_three_classes_size_four()));
    fx.expect("genericity", Check::Genericity("symbolic".into()), text("NonGeneric"), Stated);
    fx.expect(
        "relation abfguv = 1",
        Check::HasRelation { spectrum: "symbolic".into(), counts: vec![vec![1, 1, 0]; 3] },
        Value::Bool(true),
        Stated,
    );
    fx.expect(
        "complementary relation acfhuw = 1",
        Check::HasRelation { spectrum: "symbolic".into(), counts: vec![vec![1, 0, 1]; 3] },
        Value::Bool(true),
        Derived,
    );
    fx.expect("only these two relations", Check::RelationCount("symbolic".into()), Value::Int(2), Derived);

    let l = builders::build_l_triple()?;
    let b = builders::build_b_triple()?;
    let spaces = builders::extension_spaces(&l, &b)?;
    let m = builders::assemble_extension(&l, &b, &spaces.representative)?;
    fx.spectra.push(("instantiated".into(), rational_spectrum(&m)));
    fx.expect("instantiated genericity", Check::Genericity("instantiated".into()), text("NonGeneric"), Derived);
    fx.expect(
        "instantiated relation count",
        Check::RelationCount("instantiated".into()),
        Value::Int(2),
        Derived,
    );
    fx.spaces.push(("T".into(), spaces.t_space));
    fx.spaces.push(("Q".into(), spaces.q_space));
    add_tuple(&mut fx, "L", l);
    add_tuple(&mut fx, "B", b);
    add_tuple(&mut fx, "extension", m);
    fx.expect("dim T", Check::SpaceDim("T".into()), Value::Int(5), Stated);
    fx.expect("dim Q", Check::SpaceDim("Q".into()), Value::Int(4), Stated);
    for name in ["L", "B", "extension"] {
        fx.expect(&format!("closure {name}"), Check::Closure(name.into()), Value::Bool(true), Trivial);
    }
    fx.expect("L irreducible", Check::Irreducible("L".into()), Value::Bool(true), Stated);
    fx.expect("B irreducible", Check::Irreducible("B".into()), Value::Bool(true), Stated);
    fx.expect("L and B inequivalent", Check::IntertwinerDim("L".into(), "B".into()), Value::Int(0), Stated);
    fx.expect("extension centralizer", Check::CentralizerDim("extension".into()), Value::Int(1), Stated);
    fx.expect("extension reducible", Check::Irreducible("extension".into()), Value::Bool(false), Stated);
    fx.expect("extension commutator map", Check::CommutSurjective("extension".into()), Value::Bool(true), Derived);
    fx.expect("extension tangent", Check::TangentDim("extension".into()), Value::Int(15), Derived);
    fx.notes = vec!["values a,b,c,f,g,h,u,v,w = 2,3,5,7,11,13,17,1/7854,1/15470".into()];
    Ok(fx)
}

fn example3() -> Result<Fixture> {
    let mut fx = Fixture::new(
        "example3",
        "size 4, three classes over (a,a,b,b), (f,f,g,g), (u,u,v,v) with Jordan blocks at a, b, f",
    );
    let classes = jt(vec![
        blocks(vec![("a", vec![2]), ("b", vec![2])]),
        blocks(vec![("f", vec![2]), ("g", vec![1, 1])]),
        blocks(vec![("u", vec![1, 1]), ("v", vec![1, 1])]),
    ]);
    fx.jnf_tuples.push(("classes".into(), classes));
    fx.expect("kappa", Check::Kappa("classes".into()), Value::Int(2), Stated);
    fx.expect("expected dimension", Check::ExpectedDim("classes".into()), Value::Int(15), Stated);
    fx.expect("verdict", Check::Verdict("classes".into()), text("Solvable"), Derived);
    fx.expect("chain", Check::Chain("classes".into()), text("4,3,2,1"), Derived);
    fx.expect("kappa invariant", Check::KappaInvariant("classes".into()), Value::Bool(true), Stated);

    fx.spectra.push(("symbolic".into(), spectrum_three_classes_doubled()));
    fx.expect("genericity", Check::Genericity("symbolic".into()), text("RelativelyGeneric"), Stated);
    fx.expect("gcd of multiplicities", Check::BasicQ("symbolic".into()), Value::Int(2), Derived);
    fx.expect("basic relation order", Check::BasicM("symbolic".into()), Value::Int(2), Derived);

    let l = builders::build_l_triple()?;
    let e = l.eigenvalues().to_vec();
    let member_classes = vec![
        numeric(vec![(e[0][0].clone(), vec![2]), (e[0][1].clone(), vec![2])]),
        numeric(vec![(e[1][0].clone(), vec![2]), (e[1][1].clone(), vec![1, 1])]),
        numeric(vec![(e[2][0].clone(), vec![1, 1]), (e[2][1].clone(), vec![1, 1])]),
    ];
    let m = builders::build_self_extension(&l, &member_classes)?;
    add_tuple(&mut fx, "self-extension", m);
    fx.expect("closure", Check::Closure("self-extension".into()), Value::Bool(true), Trivial);
    for (j, jnf) in member_classes.into_iter().enumerate() {
        fx.expect(
            &format!("matrix {} in its class", j + 1),
            Check::ClassMembership { tuple: "self-extension".into(), index: j, jnf },
            Value::Bool(true),
            Stated,
        );
    }
    fx.expect("centralizer (gl)", Check::CentralizerDim("self-extension".into()), Value::Int(2), Stated);
    fx.expect("reducible", Check::Irreducible("self-extension".into()), Value::Bool(false), Stated);
    fx.notes = vec![
        "dim V = 1 + 14: a one-dimensional family of upper-right blocks, conjugated by SL(4) modulo the centralizer".into(),
    ];
    Ok(fx)
}

fn example4() -> Result<Fixture> {
    let mut fx = Fixture::new(
        "example4",
        "size 3, four diagonal classes (a,1,1), (b,1,1), (c,1,1), (d,1,1) with abcd = 1",
    );
    let classes = jt(vec![diag(&[1, 2]); 4]);
    fx.jnf_tuples.push(("classes".into(), classes));
    fx.expect("expected dimension", Check::ExpectedDim("classes".into()), Value::Int(8), Stated);
    fx.expect("verdict", Check::Verdict("classes".into()), text("Solvable"), Derived);
    fx.expect("chain", Check::Chain("classes".into()), text("3,1"), Derived);

    fx.spectra.push(("symbolic".into(), spectrum_four_classes_size_three()));
    fx.expect("genericity", Check::Genericity("symbolic".into()), text("NonGeneric"), Stated);
    fx.expect(
        "relation abcd = 1",
        Check::HasRelation { spectrum: "symbolic".into(), counts: vec![vec![1, 0]; 4] },
        Value::Bool(true),
        Stated,
    );

    let first = builders::example4_first();
    let second = builders::example4_second();
    let summand = MatrixTuple::new(
        Mode::Multiplicative,
        second.matrices().iter().map(|m| m.block(0, 0, 2, 2)).collect::<Result<Vec<_>>>()?,
        second.eigenvalues().iter().map(|e| e[..2].to_vec()).collect(),
    )?;
    add_tuple(&mut fx, "first", first);
    add_tuple(&mut fx, "second", second);
    add_tuple(&mut fx, "second, rank-2 summand", summand);
    fx.expect("closure first", Check::Closure("first".into()), Value::Bool(true), Derived);
    fx.expect("closure second", Check::Closure("second".into()), Value::Bool(true), Derived);
    fx.expect("centralizer first", Check::CentralizerDim("first".into()), Value::Int(1), Stated);
    fx.expect("centralizer second (gl)", Check::CentralizerDim("second".into()), Value::Int(2), Derived);
    fx.expect("first reducible", Check::Irreducible("first".into()), Value::Bool(false), Stated);
    fx.expect("second reducible", Check::Irreducible("second".into()), Value::Bool(false), Stated);
    fx.expect("commutator map first", Check::CommutSurjective("first".into()), Value::Bool(true), Derived);
    fx.expect("tangent first", Check::TangentDim("first".into()), Value::Int(8), Stated);
    fx.expect("orbit first", Check::OrbitDim("first".into()), Value::Int(8), Derived);
    fx.expect(
        "rank-2 summand irreducible",
        Check::Irreducible("second, rank-2 summand".into()),
        Value::Bool(true),
        Stated,
    );
    fx.expect("rank-2 summand tangent", Check::TangentDim("second, rank-2 summand".into()), Value::Int(5), Stated);
    fx.notes = vec![
        "values (a, b, c, d) = (2, 3, 5, 1/30)".into(),
        "the index of rigidity computed from the classes is 18 - 4*4 = 2; the source text calls it 0, so it is not asserted".into(),
        "dim S = 5 + 8 - 4 = 9: block-diagonal quadruples, SL(3), block-diagonal stabilizer".into(),
    ];
    Ok(fx)
}

fn example5() -> Result<Fixture> {
    let mut fx = Fixture::new(
        "example5",
        "size 4 direct sum of two inequivalent 2x2 quadruples with the same generic eigenvalues, index of rigidity 0",
    );
    fx.jnf_tuples.push(("2x2 classes".into(), jt(vec![diag(&[1, 1]); 4])));
    fx.jnf_tuples.push(("4x4 classes".into(), jt(vec![diag(&[2, 2]); 4])));
    fx.expect("kappa 2x2", Check::Kappa("2x2 classes".into()), Value::Int(0), Stated);
    fx.expect("kappa 4x4", Check::Kappa("4x4 classes".into()), Value::Int(0), Stated);
    fx.expect("expected dimension 2x2", Check::ExpectedDim("2x2 classes".into()), Value::Int(5), Stated);
    fx.expect("expected dimension 4x4", Check::ExpectedDim("4x4 classes".into()), Value::Int(17), Stated);
    fx.expect("verdict 2x2", Check::Verdict("2x2 classes".into()), text("Solvable"), Stated);

    let (b, g) = builders::example5_pair()?;
    let m = b.direct_sum(&g)?;
    fx.spectra.push(("2x2 eigenvalues".into(), rational_spectrum(&b)));
    fx.spectra.push(("4x4 eigenvalues".into(), rational_spectrum(&m)));
    fx.expect("2x2 eigenvalues generic", Check::Genericity("2x2 eigenvalues".into()), text("Generic"), Stated);
    fx.expect(
        "4x4 eigenvalues relatively generic",
        Check::Genericity("4x4 eigenvalues".into()),
        text("RelativelyGeneric"),
        Stated,
    );
    add_tuple(&mut fx, "B", b);
    add_tuple(&mut fx, "G", g);
    add_tuple(&mut fx, "direct sum", m);
    for name in ["B", "G", "direct sum"] {
        fx.expect(&format!("closure {name}"), Check::Closure(name.into()), Value::Bool(true), Trivial);
    }
    fx.expect("B irreducible", Check::Irreducible("B".into()), Value::Bool(true), Stated);
    fx.expect("G irreducible", Check::Irreducible("G".into()), Value::Bool(true), Stated);
    fx.expect("B and G inequivalent", Check::IntertwinerDim("B".into(), "G".into()), Value::Int(0), Stated);
    fx.expect("tangent B", Check::TangentDim("B".into()), Value::Int(5), Stated);
    fx.expect("tangent G", Check::TangentDim("G".into()), Value::Int(5), Stated);
    fx.expect("direct sum centralizer (gl)", Check::CentralizerDim("direct sum".into()), Value::Int(2), Derived);
    fx.expect_at_least("direct sum formal tangent", Check::TangentDim("direct sum".into()), 18, Derived);
    fx.notes = vec![
        "eigenvalues (2,3), (5,7), (11,13), (1/17, 17/30030)".into(),
        "dim M = 5 + 5 = 10; dim N = 10 + 15 - 7 = 18 exceeds the expected dimension 17".into(),
    ];
    Ok(fx)
}
