//! Exact symbolic eigenvalues and the genericity classifier.
//!
//! A [`FormalScalar`] is a monomial in user-declared symbols with rational
//! exponents, times a root of unity `exp(2πi·phase)` (multiplicative mode), or
//! a rational linear form in the symbols plus a constant (additive mode).
//! Symbols are treated as independent, so equality is structural and every
//! question about relations among eigenvalues is decidable. Multiplicative
//! relations among inputs must be encoded by the caller, e.g. `1/3` as the
//! symbol `3` with exponent `-1`, or `d` as `a^-1 b^-1 c^-1`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num::integer::Integer;
use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Eigenvalues of matrices summing to zero.
    Additive,
    /// Eigenvalues of matrices whose product is the identity.
    Multiplicative,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalScalar {
    mode: Mode,
    exponents: BTreeMap<String, Rational>,
    // phase in [0, 1) for multiplicative mode, constant term for additive mode
    offset: Rational,
}

impl FormalScalar {
    /// Drops zero coefficients and reduces the phase modulo 1.
    pub fn new(mode: Mode, exponents: BTreeMap<String, Rational>, offset: Rational) -> Self {
        let exponents = exponents.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let offset = match mode {
            Mode::Multiplicative => offset.mod_one(),
            Mode::Additive => offset,
        };
        FormalScalar { mode, exponents, offset }
    }

    /// 1 in multiplicative mode, 0 in additive mode.
    pub fn identity(mode: Mode) -> Self {
        FormalScalar { mode, exponents: BTreeMap::new(), offset: Rational::zero() }
    }

    pub fn symbol(mode: Mode, name: &str, coefficient: Rational) -> Self {
        FormalScalar::new(mode, BTreeMap::from([(name.to_string(), coefficient)]), Rational::zero())
    }

    /// `exp(2πi·phase)`.
    pub fn root_of_unity(phase: Rational) -> Self {
        FormalScalar::new(Mode::Multiplicative, BTreeMap::new(), phase)
    }

    /// Additive constant.
    pub fn constant(value: Rational) -> Self {
        FormalScalar::new(Mode::Additive, BTreeMap::new(), value)
    }

    /// Monomial from `(symbol, exponent)` pairs and a phase.
    pub fn monomial(terms: &[(&str, Rational)], phase: Rational) -> Self {
        let mut exponents = BTreeMap::new();
        for (s, c) in terms {
            *exponents.entry(s.to_string()).or_insert_with(Rational::zero) += c;
        }
        FormalScalar::new(Mode::Multiplicative, exponents, phase)
    }

    /// A nonzero rational as a monomial over its prime factors (symbols `"2"`,
    /// `"3"`, ...), the sign carried by phase 1/2. Unique factorization makes the
    /// prime symbols independent, so the encoding is faithful.
    pub fn from_rational(value: &Rational) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::InvalidSpectrum("zero is not a multiplicative eigenvalue".into()));
        }
        let mut exponents: BTreeMap<String, Rational> = BTreeMap::new();
        for (prime, e) in factorize(&value.numer().magnitude().clone().into()) {
            *exponents.entry(prime).or_insert_with(Rational::zero) += &Rational::from_integer(e);
        }
        for (prime, e) in factorize(&value.denom().clone()) {
            *exponents.entry(prime).or_insert_with(Rational::zero) -= &Rational::from_integer(e);
        }
        let phase = if value.is_negative() { crate::exact_linalg::q(1, 2) } else { Rational::zero() };
        Ok(FormalScalar::new(Mode::Multiplicative, exponents, phase))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn exponents(&self) -> &BTreeMap<String, Rational> {
        &self.exponents
    }

    /// Phase (multiplicative) or constant (additive).
    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.is_empty() && self.offset.is_zero()
    }

    fn accumulate(&mut self, other: &FormalScalar, weight: &Rational) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::MixedModes);
        }
        for (s, c) in &other.exponents {
            let entry = self.exponents.entry(s.clone()).or_insert_with(Rational::zero);
            *entry += &(c * weight);
            if entry.is_zero() {
                self.exponents.remove(s);
            }
        }
        self.offset += &(&other.offset * weight);
        if self.mode == Mode::Multiplicative {
            self.offset = self.offset.mod_one();
        }
        Ok(())
    }

    /// The inverse (multiplicative) or negative (additive).
    pub fn inverse(&self) -> FormalScalar {
        let mut out = FormalScalar::identity(self.mode);
        out.accumulate(self, &-Rational::one()).expect("same mode");
        out
    }
}

/// Weighted combination: exponents add (phases add modulo 1) in multiplicative
/// mode, a linear combination in additive mode. A rational weight on a phase
/// is a choice of branch; integer weights are unambiguous.
pub fn combine(items: &[(FormalScalar, Rational)]) -> Result<FormalScalar> {
    let (first, _) = items
        .first()
        .ok_or_else(|| Error::InvalidSpectrum("nothing to combine".into()))?;
    let mut acc = FormalScalar::identity(first.mode);
    for (s, w) in items {
        acc.accumulate(s, w)?;
    }
    Ok(acc)
}

fn factorize(n: &BigInt) -> Vec<(String, i64)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    let mut p = BigInt::from(2u32);
    // trial division; a cofactor left above the bound is kept as one atom
    let bound = BigInt::from(1_000_000u32);
    while &p * &p <= n && p <= bound {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.to_string(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n.to_string(), 1));
    }
    out
}

impl fmt::Display for FormalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            Mode::Multiplicative => {
                if let Some(r) = self.as_plain_rational() {
                    return write!(f, "{r}");
                }
                let mut factors: Vec<String> = Vec::new();
                let half = crate::exact_linalg::q(1, 2);
                let quarter = crate::exact_linalg::q(1, 4);
                let three_quarters = crate::exact_linalg::q(3, 4);
                if self.offset == half {
                    factors.push("-1".into());
                } else if self.offset == quarter {
                    factors.push("i".into());
                } else if self.offset == three_quarters {
                    factors.push("-i".into());
                } else if !self.offset.is_zero() {
                    factors.push(format!("exp(2πi·{})", self.offset));
                }
                for (s, c) in &self.exponents {
                    factors.push(if c.is_one() {
                        s.clone()
                    } else if c.is_integer() {
                        format!("{s}^{c}")
                    } else {
                        format!("{s}^({c})")
                    });
                }
                if factors.is_empty() {
                    f.write_str("1")
                } else {
                    f.write_str(&factors.join("*"))
                }
            }
            Mode::Additive => {
                let mut terms: Vec<String> = self
                    .exponents
                    .iter()
                    .map(|(s, c)| if c.is_one() { s.clone() } else { format!("{c}*{s}") })
                    .collect();
                if !self.offset.is_zero() || terms.is_empty() {
                    terms.push(self.offset.to_string());
                }
                f.write_str(&terms.join(" + "))
            }
        }
    }
}

impl FormalScalar {
    /// The rational value when every symbol is an integer atom with an integer
    /// exponent and the phase is 0 or 1/2.
    fn as_plain_rational(&self) -> Option<Rational> {
        let sign = if self.offset.is_zero() {
            Rational::one()
        } else if self.offset == crate::exact_linalg::q(1, 2) {
            -Rational::one()
        } else {
            return None;
        };
        let mut value = sign;
        for (s, c) in &self.exponents {
            let base: BigInt = s.parse().ok()?;
            if base <= BigInt::one() {
                return None;
            }
            let e = c.to_i64()?;
            let e = i32::try_from(e).ok()?;
            value = value * Rational::from_bigints(base, BigInt::one()).ok()?.pow(e);
        }
        Some(value)
    }
}

/// Eigenvalues of the `p+1` conjugacy classes, each a multiset of distinct
/// scalars with multiplicities summing to `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumAssignment {
    mode: Mode,
    symbols: Vec<String>,
    classes: Vec<Vec<(FormalScalar, u32)>>,
    n: u32,
}

impl SpectrumAssignment {
    pub fn new(mode: Mode, symbols: Vec<String>, classes: Vec<Vec<(FormalScalar, u32)>>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidSpectrum("no classes".into()));
        }
        let declared: HashSet<&str> = symbols.iter().map(String::as_str).collect();
        if declared.len() != symbols.len() {
            return Err(Error::InvalidSpectrum("repeated symbol".into()));
        }
        let mut n = None;
        for (j, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidSpectrum(format!("class {} is empty", j + 1)));
            }
            let mut seen = HashSet::new();
            for (s, mult) in class {
                if s.mode != mode {
                    return Err(Error::MixedModes);
                }
                if *mult == 0 {
                    return Err(Error::InvalidSpectrum(format!("zero multiplicity in class {}", j + 1)));
                }
                if let Some(bad) = s.exponents.keys().find(|k| !declared.contains(k.as_str())) {
                    return Err(Error::InvalidSpectrum(format!("undeclared symbol {bad:?}")));
                }
                if !seen.insert(s) {
                    return Err(Error::InvalidSpectrum(format!(
                        "class {} lists {s} twice",
                        j + 1
                    )));
                }
            }
            let size: u32 = class.iter().map(|(_, m)| m).sum();
            match n {
                None => n = Some(size),
                Some(prev) if prev != size => {
                    return Err(Error::InvalidSpectrum(format!(
                        "class {} has {size} eigenvalues, expected {prev}",
                        j + 1
                    )))
                }
                _ => {}
            }
        }
        Ok(SpectrumAssignment { mode, symbols, classes, n: n.expect("nonempty") })
    }

    /// Spectrum of rational eigenvalue lists (one list per class, repeated with
    /// multiplicity). Multiplicative scalars are encoded over their prime
    /// factors, additive ones as constants.
    pub fn from_rationals(mode: Mode, lists: &[Vec<Rational>]) -> Result<Self> {
        let mut symbols: Vec<String> = Vec::new();
        let mut classes = Vec::new();
        for list in lists {
            let mut class: Vec<(FormalScalar, u32)> = Vec::new();
            for value in list {
                let s = match mode {
                    Mode::Multiplicative => FormalScalar::from_rational(value)?,
                    Mode::Additive => FormalScalar::constant(value.clone()),
                };
                for k in s.exponents.keys() {
                    if !symbols.contains(k) {
                        symbols.push(k.clone());
                    }
                }
                match class.iter_mut().find(|(t, _)| *t == s) {
                    Some((_, m)) => *m += 1,
                    None => class.push((s, 1)),
                }
            }
            classes.push(class);
        }
        symbols.sort_by_key(|s| s.parse::<u64>().unwrap_or(u64::MAX));
        SpectrumAssignment::new(mode, symbols, classes)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn classes(&self) -> &[Vec<(FormalScalar, u32)>] {
        &self.classes
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Multiplicities per class, in entry order.
    pub fn multiplicities(&self) -> Vec<Vec<u32>> {
        self.classes.iter().map(|c| c.iter().map(|(_, m)| *m).collect()).collect()
    }

    /// Product (sum) of the sub-multisets selected by `counts`.
    pub fn combined(&self, counts: &[Vec<u32>]) -> FormalScalar {
        let mut acc = FormalScalar::identity(self.mode);
        for (class, cs) in self.classes.iter().zip(counts) {
            for ((s, _), &c) in class.iter().zip(cs) {
                if c > 0 {
                    acc.accumulate(s, &Rational::from_integer(c as i64)).expect("same mode");
                }
            }
        }
        acc
    }
}

/// Whether the product of all eigenvalues is 1 (resp. their sum is 0).
pub fn global_condition(s: &SpectrumAssignment) -> bool {
    s.combined(&s.multiplicities()).is_identity()
}

/// Sub-multisets `Φ_j`, one per class and all of the same size, given as
/// per-scalar counts aligned with the class entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RelationWitness {
    pub size: u32,
    pub counts: Vec<Vec<u32>>,
}

impl RelationWitness {
    /// Renders as `({a,b},{f,g},{u,v})`.
    pub fn describe(&self, s: &SpectrumAssignment) -> String {
        let classes: Vec<String> = s
            .classes
            .iter()
            .zip(&self.counts)
            .map(|(class, cs)| {
                let items: Vec<String> = class
                    .iter()
                    .zip(cs)
                    .flat_map(|((scalar, _), &c)| std::iter::repeat_n(scalar.to_string(), c as usize))
                    .collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        format!("({})", classes.join(","))
    }
}

// all count vectors bounded by `mults` summing to `m`, ascending lexicographic
fn sub_multisets(mults: &[u32], m: u32) -> Vec<Vec<u32>> {
    fn rec(mults: &[u32], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&first, rest)) = mults.split_first() else {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        };
        let cap: u32 = rest.iter().sum();
        let lo = left.saturating_sub(cap);
        for c in lo..=first.min(left) {
            cur.push(c);
            rec(rest, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(mults, m, &mut Vec::new(), &mut out);
    out
}

// every choice across `classes` with the combined scalar
fn choices(
    s: &SpectrumAssignment,
    classes: std::ops::Range<usize>,
    m: u32,
) -> Vec<(Vec<Vec<u32>>, FormalScalar)> {
    let mut acc: Vec<(Vec<Vec<u32>>, FormalScalar)> = vec![(Vec::new(), FormalScalar::identity(s.mode))];
    for j in classes {
        let class = &s.classes[j];
        let mults: Vec<u32> = class.iter().map(|(_, k)| *k).collect();
        let options: Vec<(Vec<u32>, FormalScalar)> = sub_multisets(&mults, m)
            .into_iter()
            .map(|cs| {
                let mut v = FormalScalar::identity(s.mode);
                for ((scalar, _), &c) in class.iter().zip(&cs) {
                    if c > 0 {
                        v.accumulate(scalar, &Rational::from_integer(c as i64)).expect("same mode");
                    }
                }
                (cs, v)
            })
            .collect();
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for (prefix, value) in &acc {
            for (cs, v) in &options {
                let mut counts = prefix.clone();
                counts.push(cs.clone());
                let mut total = value.clone();
                total.accumulate(v, &Rational::one()).expect("same mode");
                next.push((counts, total));
            }
        }
        acc = next;
    }
    acc
}

/// All non-genericity relations whose sub-multisets have `m` elements,
/// deduplicated as multisets and in lexicographic order of their counts.
pub fn enumerate_relations(s: &SpectrumAssignment, m: u32) -> Vec<RelationWitness> {
    if m == 0 || m >= s.n {
        return Vec::new();
    }
    // meet in the middle: left choices indexed by their value, right choices
    // look up the inverse of theirs
    let split = s.classes.len() / 2;
    let mut left: HashMap<FormalScalar, Vec<Vec<Vec<u32>>>> = HashMap::new();
    for (counts, value) in choices(s, 0..split, m) {
        left.entry(value).or_default().push(counts);
    }
    let mut out = Vec::new();
    for (right_counts, value) in choices(s, split..s.classes.len(), m) {
        if let Some(matches) = left.get(&value.inverse()) {
            for lc in matches {
                let mut counts = lc.clone();
                counts.extend(right_counts.iter().cloned());
                out.push(RelationWitness { size: m, counts });
            }
        }
    }
    out.sort();
    out
}

fn all_relations(s: &SpectrumAssignment) -> Vec<RelationWitness> {
    (1..s.n).flat_map(|m| enumerate_relations(s, m)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenericityVerdict {
    Generic,
    NonGeneric(Vec<RelationWitness>),
}

pub fn is_generic(s: &SpectrumAssignment) -> Result<GenericityVerdict> {
    if !global_condition(s) {
        return Err(Error::GlobalConditionViolated);
    }
    let relations = all_relations(s);
    Ok(if relations.is_empty() {
        GenericityVerdict::Generic
    } else {
        GenericityVerdict::NonGeneric(relations)
    })
}

/// Data of the basic non-genericity relation for a spectrum whose
/// multiplicities have greatest common divisor `q > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicRelation {
    pub q: u32,
    /// `gcd(l, q)` where `ξ = exp(2πi l/q)`; in additive mode this is `q`.
    pub m: u32,
    /// Product (sum) of all eigenvalues with multiplicities divided by `q`.
    pub xi: FormalScalar,
    /// Present when the relation holds: multiplicities divided by `m`.
    pub relation: Option<RelationWitness>,
}

/// `None` when the multiplicities are coprime.
pub fn basic_relation(s: &SpectrumAssignment) -> Result<Option<BasicRelation>> {
    if !global_condition(s) {
        return Err(Error::GlobalConditionViolated);
    }
    let mults = s.multiplicities();
    let q = mults.iter().flatten().fold(0u32, |g, &k| g.gcd(&k));
    if q <= 1 {
        return Ok(None);
    }
    let reduced: Vec<Vec<u32>> = mults.iter().map(|c| c.iter().map(|k| k / q).collect()).collect();
    let xi = s.combined(&reduced);
    let m = match s.mode {
        Mode::Multiplicative => {
            // ξ^q = 1 forces the exponent part to vanish
            if !xi.exponents.is_empty() {
                return Err(Error::Internal(format!("ξ = {xi} is not a root of unity")));
            }
            let l = &xi.offset * &Rational::from_integer(q as i64);
            let l = l
                .to_i64()
                .ok_or_else(|| Error::Internal(format!("ξ = {xi} is not a q-th root of unity")))?;
            (l as u32).gcd(&q)
        }
        Mode::Additive => q,
    };
    let holds = match s.mode {
        Mode::Multiplicative => m > 1,
        Mode::Additive => xi.is_identity(),
    };
    let relation = holds.then(|| RelationWitness {
        size: s.n / m,
        counts: mults.iter().map(|c| c.iter().map(|k| k / m).collect()).collect(),
    });
    Ok(Some(BasicRelation { q, m, xi, relation }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Genericity {
    Generic,
    /// Only the basic relation and its corollaries hold.
    RelativelyGeneric(BasicRelation),
    /// The listed relations are not corollaries of the basic relation.
    NonGeneric(Vec<RelationWitness>),
}

impl Genericity {
    pub fn label(&self) -> &'static str {
        match self {
            Genericity::Generic => "Generic",
            Genericity::RelativelyGeneric(_) => "RelativelyGeneric",
            Genericity::NonGeneric(_) => "NonGeneric",
        }
    }
}

/// A corollary of the basic relation scales every multiplicity by one common
/// `t/m`, `1 <= t < m`.
pub fn classify(s: &SpectrumAssignment) -> Result<Genericity> {
    if !global_condition(s) {
        return Err(Error::GlobalConditionViolated);
    }
    let relations = all_relations(s);
    if relations.is_empty() {
        return Ok(Genericity::Generic);
    }
    let basic = basic_relation(s)?;
    let corollaries: HashSet<Vec<Vec<u32>>> = match &basic {
        Some(b) if b.relation.is_some() => (1..b.m)
            .map(|t| {
                s.multiplicities()
                    .iter()
                    .map(|c| c.iter().map(|k| k / b.m * t).collect())
                    .collect()
            })
            .collect(),
        _ => HashSet::new(),
    };
    let rest: Vec<RelationWitness> =
        relations.into_iter().filter(|w| !corollaries.contains(&w.counts)).collect();
    Ok(match (rest.is_empty(), basic) {
        (true, Some(b)) => Genericity::RelativelyGeneric(b),
        _ => Genericity::NonGeneric(rest),
    })
}

/// Formal `exp(2πi·)` of an additive spectrum: symbol `t` becomes `exp_t`
/// with the same coefficient and the constant becomes the phase. Scalars
/// that collide (e.g. constants differing by an integer) are merged.
pub fn exp_map(s: &SpectrumAssignment) -> Result<SpectrumAssignment> {
    if s.mode != Mode::Additive {
        return Err(Error::InvalidSpectrum("exp_map needs an additive spectrum".into()));
    }
    let map_scalar = |x: &FormalScalar| {
        let exps = x.exponents.iter().map(|(k, c)| (format!("exp_{k}"), c.clone())).collect();
        FormalScalar::new(Mode::Multiplicative, exps, x.offset.clone())
    };
    let classes = s
        .classes
        .iter()
        .map(|class| {
            let mut out: Vec<(FormalScalar, u32)> = Vec::new();
            for (x, k) in class {
                let y = map_scalar(x);
                match out.iter_mut().find(|(z, _)| *z == y) {
                    Some((_, m)) => *m += k,
                    None => out.push((y, *k)),
                }
            }
            out
        })
        .collect();
    let symbols = s.symbols.iter().map(|k| format!("exp_{k}")).collect();
    SpectrumAssignment::new(Mode::Multiplicative, symbols, classes)
}

// JSON: {"mode":..., "symbols":[...], "classes":[[{"scalar":{...},"mult":k},...],...]}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarJson {
    exponents: BTreeMap<String, Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant: Option<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryJson {
    scalar: ScalarJson,
    mult: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumJson {
    mode: Mode,
    symbols: Vec<String>,
    classes: Vec<Vec<EntryJson>>,
}

impl ScalarJson {
    fn from_scalar(s: &FormalScalar) -> Self {
        let (phase, constant) = match s.mode {
            Mode::Multiplicative => (Some(s.offset.clone()), None),
            Mode::Additive => (None, Some(s.offset.clone())),
        };
        ScalarJson { exponents: s.exponents.clone(), phase, constant }
    }

    fn into_scalar(self, mode: Mode) -> Result<FormalScalar> {
        if self.exponents.values().any(Rational::is_zero) {
            return Err(Error::InvalidSpectrum("zero exponent listed".into()));
        }
        let offset = match (mode, self.phase, self.constant) {
            (Mode::Multiplicative, phase, None) => {
                let phase = phase.unwrap_or_else(Rational::zero);
                if phase.is_negative() || phase >= Rational::one() {
                    return Err(Error::InvalidSpectrum(format!("phase {phase} outside [0,1)")));
                }
                phase
            }
            (Mode::Additive, None, constant) => constant.unwrap_or_else(Rational::zero),
            (Mode::Multiplicative, _, Some(_)) => {
                return Err(Error::InvalidSpectrum("multiplicative scalar with a constant".into()))
            }
            (Mode::Additive, Some(_), _) => {
                return Err(Error::InvalidSpectrum("additive scalar with a phase".into()))
            }
        };
        Ok(FormalScalar { mode, exponents: self.exponents, offset })
    }
}

impl Serialize for SpectrumAssignment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpectrumJson {
            mode: self.mode,
            symbols: self.symbols.clone(),
            classes: self
                .classes
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|(s, m)| EntryJson { scalar: ScalarJson::from_scalar(s), mult: *m })
                        .collect()
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpectrumAssignment {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SpectrumJson::deserialize(deserializer)?;
        let mode = raw.mode;
        let classes = raw
            .classes
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|e| e.scalar.into_scalar(mode).map(|s| (s, e.mult)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        SpectrumAssignment::new(mode, raw.symbols, classes).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{q, qi};

    fn sym(name: &str, c: Rational) -> FormalScalar {
        FormalScalar::symbol(Mode::Multiplicative, name, c)
    }

    #[test]
    fn combine_examples() {
        let e = sym("e", qi(1));
        let unit = combine(&[(e.clone(), qi(1)), (e.inverse(), qi(1))]).unwrap();
        assert!(unit.is_identity());

        let i = FormalScalar::root_of_unity(q(1, 4));
        let minus_one = combine(&[(i, qi(2))]).unwrap();
        assert_eq!(minus_one, FormalScalar::root_of_unity(q(1, 2)));

        let sqrt2 = sym("2", q(1, 2));
        let two = combine(&[(sqrt2.clone(), qi(1)), (sqrt2, qi(1))]).unwrap();
        assert_eq!(two, sym("2", qi(1)));

        let mixed = combine(&[(sym("a", qi(1)), qi(1)), (FormalScalar::constant(qi(1)), qi(1))]);
        assert_eq!(mixed, Err(Error::MixedModes));
    }

    #[test]
    fn from_rational_factorizes() {
        let s = FormalScalar::from_rational(&q(-12, 35)).unwrap();
        assert_eq!(s.exponents().get("2"), Some(&qi(2)));
        assert_eq!(s.exponents().get("3"), Some(&qi(1)));
        assert_eq!(s.exponents().get("5"), Some(&qi(-1)));
        assert_eq!(s.offset(), &q(1, 2));
        assert_eq!(s.to_string(), "-12/35");
        assert!(FormalScalar::from_rational(&qi(1)).unwrap().is_identity());
        assert!(FormalScalar::from_rational(&qi(0)).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(FormalScalar::root_of_unity(q(1, 4)).to_string(), "i");
        assert_eq!(sym("2", q(1, 2)).to_string(), "2^(1/2)");
        assert_eq!(sym("e", qi(-1)).to_string(), "e^-1");
        assert_eq!(FormalScalar::identity(Mode::Additive).to_string(), "0");
    }

    #[test]
    fn additive_zero_spectrum_is_closed() {
        let zero = FormalScalar::constant(qi(0));
        let s = SpectrumAssignment::new(Mode::Additive, vec![], vec![vec![(zero.clone(), 2)], vec![(zero, 2)]])
            .unwrap();
        assert!(global_condition(&s));
    }

    #[test]
    fn relations_need_proper_subsets() {
        // n = 2: only the total sum vanishes, a single pick does not
        let s = SpectrumAssignment::from_rationals(
            Mode::Additive,
            &[vec![qi(1), qi(2)], vec![qi(-4), qi(1)]],
        )
        .unwrap();
        assert!(global_condition(&s));
        assert!(enumerate_relations(&s, 1).is_empty());
        assert!(enumerate_relations(&s, 2).is_empty());
        // with a vanishing proper sub-sum the m = 1 relation appears
        let t = SpectrumAssignment::from_rationals(
            Mode::Additive,
            &[vec![qi(1), qi(2)], vec![qi(-1), qi(-2)]],
        )
        .unwrap();
        assert_eq!(enumerate_relations(&t, 1).len(), 2);
    }

    #[test]
    fn sub_multisets_respect_bounds() {
        assert_eq!(sub_multisets(&[2, 1], 2), vec![vec![1, 1], vec![2, 0]]);
        assert_eq!(sub_multisets(&[1, 1], 3), Vec::<Vec<u32>>::new());
    }

    #[test]
    fn spectrum_validation() {
        let a = sym("a", qi(1));
        let undeclared = SpectrumAssignment::new(Mode::Multiplicative, vec![], vec![vec![(a.clone(), 1)]]);
        assert!(matches!(undeclared, Err(Error::InvalidSpectrum(_))));
        let dup = SpectrumAssignment::new(
            Mode::Multiplicative,
            vec!["a".into()],
            vec![vec![(a.clone(), 1), (a.clone(), 1)]],
        );
        assert!(dup.is_err());
        let ragged = SpectrumAssignment::new(
            Mode::Multiplicative,
            vec!["a".into()],
            vec![vec![(a.clone(), 1)], vec![(a, 2)]],
        );
        assert!(ragged.is_err());
    }

    #[test]
    fn global_condition_required() {
        let s = SpectrumAssignment::from_rationals(Mode::Multiplicative, &[vec![qi(2)], vec![qi(3)]]).unwrap();
        assert_eq!(classify(&s), Err(Error::GlobalConditionViolated));
        assert_eq!(is_generic(&s), Err(Error::GlobalConditionViolated));
        assert_eq!(basic_relation(&s), Err(Error::GlobalConditionViolated));
    }

    #[test]
    fn exp_map_examples() {
        let s = SpectrumAssignment::new(
            Mode::Additive,
            vec!["a".into()],
            vec![
                vec![(FormalScalar::constant(qi(0)), 1), (FormalScalar::constant(q(1, 2)), 1)],
                vec![(FormalScalar::symbol(Mode::Additive, "a", qi(1)), 2)],
            ],
        )
        .unwrap();
        let m = exp_map(&s).unwrap();
        assert_eq!(m.mode(), Mode::Multiplicative);
        assert!(m.classes()[0][0].0.is_identity());
        assert_eq!(m.classes()[0][1].0, FormalScalar::root_of_unity(q(1, 2)));
        assert_eq!(m.classes()[1][0].0, sym("exp_a", qi(1)));
        assert_eq!(m.symbols(), &["exp_a".to_string()]);
        assert!(exp_map(&m).is_err());
    }

    #[test]
    fn exp_map_merges_integer_shifts() {
        let s = SpectrumAssignment::new(
            Mode::Additive,
            vec![],
            vec![vec![(FormalScalar::constant(qi(0)), 1), (FormalScalar::constant(qi(1)), 1)]],
        )
        .unwrap();
        let m = exp_map(&s).unwrap();
        assert_eq!(m.classes()[0].len(), 1);
        assert_eq!(m.classes()[0][0].1, 2);
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let text = r#"{"mode":"multiplicative","symbols":["a"],"classes":[[{"scalar":{"exponents":{"a":"1"},"phase":"0"},"mult":1},{"scalar":{"exponents":{"a":"-1"},"phase":"1/2"},"mult":1}]]}"#;
        let s: SpectrumAssignment = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), text);

        let bad_phase = text.replace(r#""phase":"1/2""#, r#""phase":"3/2""#);
        assert!(serde_json::from_str::<SpectrumAssignment>(&bad_phase).is_err());
        let zero_exp = text.replace(r#"{"a":"1"}"#, r#"{"a":"0"}"#);
        assert!(serde_json::from_str::<SpectrumAssignment>(&zero_exp).is_err());
    }
}
