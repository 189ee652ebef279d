//! The size-reducing construction on tuples of Jordan normal forms and the
//! solvability verdict for generic eigenvalues it decides.
//!
//! With `r_j = r(J_j)` and `d_j = d(J_j)`:
//!
//! * (α) `sum d_j >= 2n^2 - 2`
//! * (β) for every `j`, `sum_{k != j} r_k >= n`
//! * (ω) `sum r_j >= 2n`
//!
//! When `n > 1`, (β) holds and (ω) fails, one step maps the tuple to size
//! `n_1 = sum r_j - n`: in every JNF pick an eigenvalue with the most Jordan
//! blocks (`n - r_j` of them) and shrink its `n - n_1` smallest blocks by one.
//! Iterating until the step is undefined gives the verdict: solvable iff the
//! last tuple has size 1 or satisfies (ω).

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jnf::{self, Jnf, Partition};

/// A `(p+1)`-tuple of JNFs of common size `n`, `p + 1 >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct JnfTuple {
    jnfs: Vec<Jnf>,
}

impl JnfTuple {
    pub fn new(jnfs: Vec<Jnf>) -> Result<Self> {
        if jnfs.len() < 2 {
            return Err(Error::InvalidJnf(format!("need at least 2 JNFs, got {}", jnfs.len())));
        }
        let n = jnfs[0].size();
        if let Some(bad) = jnfs.iter().find(|j| j.size() != n) {
            return Err(Error::InvalidJnf(format!("sizes differ: {n} vs {}", bad.size())));
        }
        Ok(JnfTuple { jnfs })
    }

    pub fn jnfs(&self) -> &[Jnf] {
        &self.jnfs
    }

    pub fn n(&self) -> u32 {
        self.jnfs[0].size()
    }

    pub fn r(&self) -> Vec<u32> {
        self.jnfs.iter().map(jnf::r).collect()
    }

    pub fn d(&self) -> Vec<u64> {
        self.jnfs.iter().map(jnf::d).collect()
    }
}

impl<'de> serde::Deserialize<'de> for JnfTuple {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let jnfs = Vec::<Jnf>::deserialize(deserializer)?;
        JnfTuple::new(jnfs).map_err(serde::de::Error::custom)
    }
}

pub fn check_alpha(t: &JnfTuple) -> bool {
    let n = t.n() as u64;
    t.d().iter().sum::<u64>() + 2 >= 2 * n * n
}

pub fn check_beta(t: &JnfTuple) -> bool {
    let r = t.r();
    let total: u32 = r.iter().sum();
    r.iter().all(|&rj| total - rj >= t.n())
}

pub fn check_omega(t: &JnfTuple) -> bool {
    t.r().iter().sum::<u32>() >= 2 * t.n()
}

/// Index of rigidity `2n^2 - sum d_j`.
pub fn kappa(t: &JnfTuple) -> i64 {
    let n = t.n() as i64;
    2 * n * n - t.d().iter().sum::<u64>() as i64
}

/// Size after one reduction step, `sum r_j - n`, when the step is defined.
pub fn next_size(t: &JnfTuple) -> Option<u32> {
    let defined = t.n() > 1 && check_beta(t) && !check_omega(t);
    defined.then(|| t.r().iter().sum::<u32>() - t.n())
}

/// Labels of `j` carrying the maximal number of Jordan blocks, in canonical order.
pub fn admissible_labels(j: &Jnf) -> Vec<String> {
    let max = j.max_block_count();
    let mut labels: Vec<String> = j
        .blocks()
        .iter()
        .filter(|(_, p)| p.len() as u32 == max)
        .map(|(l, _)| l.clone())
        .collect();
    labels.sort();
    labels
}

fn shrink(j: &Jnf, label: &str, count: usize) -> Result<Jnf> {
    let mut blocks = Vec::with_capacity(j.blocks().len());
    for (l, p) in j.blocks() {
        if l != label {
            blocks.push((l.clone(), p.clone()));
            continue;
        }
        let parts = p.parts();
        let keep = parts.len() - count;
        // the smallest blocks are the last entries of the sorted partition
        let shrunk: Vec<u32> = parts[..keep]
            .iter()
            .copied()
            .chain(parts[keep..].iter().map(|b| b - 1))
            .filter(|&b| b > 0)
            .collect();
        if !shrunk.is_empty() {
            blocks.push((l.clone(), Partition::new(shrunk)?));
        }
    }
    Jnf::new(blocks)
}

/// One step of the construction. `choices` names, per JNF, the eigenvalue to
/// shrink; by default the first admissible label in canonical order is used.
pub fn reduce_step(t: &JnfTuple, choices: Option<&[String]>) -> Result<JnfTuple> {
    let n = t.n();
    if n == 1 {
        return Err(Error::PreconditionViolated("n = 1".into()));
    }
    if !check_beta(t) {
        return Err(Error::PreconditionViolated("condition (β) fails".into()));
    }
    if check_omega(t) {
        return Err(Error::PreconditionViolated("condition (ω) holds".into()));
    }
    if let Some(c) = choices {
        if c.len() != t.jnfs.len() {
            return Err(Error::InvalidChoice(format!(
                "{} labels for {} JNFs",
                c.len(),
                t.jnfs.len()
            )));
        }
    }
    let n1 = t.r().iter().sum::<u32>() - n;
    let count = (n - n1) as usize;
    let jnfs = t
        .jnfs
        .iter()
        .enumerate()
        .map(|(idx, j)| {
            let admissible = admissible_labels(j);
            let label = match choices {
                Some(c) => {
                    if !admissible.contains(&c[idx]) {
                        return Err(Error::InvalidChoice(format!(
                            "{:?} does not carry the maximal number of blocks in JNF {}",
                            c[idx],
                            idx + 1
                        )));
                    }
                    c[idx].clone()
                }
                None => admissible[0].clone(),
            };
            shrink(j, &label, count)
        })
        .collect::<Result<Vec<_>>>()?;
    let reduced = JnfTuple::new(jnfs)?;
    debug_assert_eq!(reduced.n(), n1);
    Ok(reduced)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    Solvable,
    NotSolvable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Reached size 1.
    SizeOne,
    /// Condition (ω) holds.
    Omega,
    /// Condition (β) fails.
    BetaFails,
}

impl StopReason {
    pub fn verdict(self) -> Verdict {
        match self {
            StopReason::SizeOne | StopReason::Omega => Verdict::Solvable,
            StopReason::BetaFails => Verdict::NotSolvable,
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::SizeOne => "reached n = 1",
            StopReason::Omega => "condition (ω) holds",
            StopReason::BetaFails => "condition (β) fails",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub n: u32,
    pub jnfs: JnfTuple,
    pub r: Vec<u32>,
    pub d: Vec<u64>,
    pub kappa: i64,
    pub alpha: bool,
    pub beta: bool,
    pub omega: bool,
    /// Labels shrunk to reach the next stage; `None` on the final stage.
    pub chosen: Option<Vec<String>>,
    pub n_next: Option<u32>,
}

impl Stage {
    fn of(t: &JnfTuple) -> Self {
        Stage {
            n: t.n(),
            jnfs: t.clone(),
            r: t.r(),
            d: t.d(),
            kappa: kappa(t),
            alpha: check_alpha(t),
            beta: check_beta(t),
            omega: check_omega(t),
            chosen: None,
            n_next: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub stages: Vec<Stage>,
    pub verdict: Verdict,
    pub reason: StopReason,
}

impl ReductionTrace {
    /// Sizes along the trace, e.g. `[4, 3, 1]`.
    pub fn chain(&self) -> Vec<u32> {
        self.stages.iter().map(|s| s.n).collect()
    }
}

fn stop_reason(t: &JnfTuple) -> Option<StopReason> {
    if t.n() == 1 {
        Some(StopReason::SizeOne)
    } else if !check_beta(t) {
        Some(StopReason::BetaFails)
    } else if check_omega(t) {
        Some(StopReason::Omega)
    } else {
        None
    }
}

/// Iterates the construction with the default eigenvalue choices.
pub fn solvable_generic(t: &JnfTuple) -> ReductionTrace {
    let mut stages = Vec::new();
    let mut current = t.clone();
    loop {
        let mut stage = Stage::of(&current);
        if let Some(reason) = stop_reason(&current) {
            stages.push(stage);
            return ReductionTrace { stages, verdict: reason.verdict(), reason };
        }
        let chosen: Vec<String> = current.jnfs.iter().map(|j| admissible_labels(j)[0].clone()).collect();
        let next = reduce_step(&current, Some(&chosen)).expect("step preconditions checked");
        stage.chosen = Some(chosen);
        stage.n_next = Some(next.n());
        stages.push(stage);
        current = next;
    }
}

/// Runs the construction along every admissible sequence of eigenvalue
/// choices; one trace per branch, in canonical choice order.
pub fn explore_choices(t: &JnfTuple) -> Vec<ReductionTrace> {
    fn rec(current: &JnfTuple, prefix: &mut Vec<Stage>, out: &mut Vec<ReductionTrace>) {
        let mut stage = Stage::of(current);
        if let Some(reason) = stop_reason(current) {
            let mut stages = prefix.clone();
            stages.push(stage);
            out.push(ReductionTrace { stages, verdict: reason.verdict(), reason });
            return;
        }
        let options: Vec<Vec<String>> = current.jnfs.iter().map(admissible_labels).collect();
        for combo in cartesian(&options) {
            let next = reduce_step(current, Some(&combo)).expect("admissible choice");
            stage.chosen = Some(combo);
            stage.n_next = Some(next.n());
            prefix.push(stage.clone());
            rec(&next, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, &mut Vec::new(), &mut out);
    out
}

fn cartesian(options: &[Vec<String>]) -> Vec<Vec<String>> {
    options.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

/// Distinct verdicts reached over all choice sequences.
pub fn verdicts_over_choices(t: &JnfTuple) -> BTreeSet<Verdict> {
    explore_choices(t).iter().map(|tr| tr.verdict).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rigidity {
    Rigid,
    ZeroIndex,
    NegativeIndex(i64),
    /// Odd, or positive other than 2: no irreducible realization.
    Other(i64),
}

pub fn classify_rigidity(t: &JnfTuple) -> Rigidity {
    match kappa(t) {
        2 => Rigidity::Rigid,
        0 => Rigidity::ZeroIndex,
        k if k < 0 && k % 2 == 0 => Rigidity::NegativeIndex(k),
        k => Rigidity::Other(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(jnfs: Vec<Jnf>) -> JnfTuple {
        JnfTuple::new(jnfs).unwrap()
    }

    fn diag(m: &[u32]) -> Jnf {
        Jnf::diagonal(m).unwrap()
    }

    fn j_star() -> JnfTuple {
        tuple(vec![diag(&[2, 2]), diag(&[2, 2]), diag(&[2, 2]), Jnf::single(vec![2, 1, 1]).unwrap()])
    }

    fn j_star_star() -> JnfTuple {
        tuple(vec![diag(&[2, 2]), diag(&[2, 2]), diag(&[2, 2]), diag(&[3, 1])])
    }

    #[test]
    fn alpha_examples() {
        assert!(check_alpha(&j_star()));
        let q2 = tuple(vec![diag(&[1, 1]); 4]);
        assert!(check_alpha(&q2));
        assert!(!check_alpha(&tuple(vec![diag(&[1, 1]); 2])));
    }

    #[test]
    fn beta_examples() {
        assert!(check_beta(&j_star()));
        assert!(!check_beta(&tuple(vec![diag(&[1, 1, 1]), diag(&[1, 2])])));
        assert!(!check_beta(&tuple(vec![Jnf::scalar(3).unwrap(); 4])));
    }

    #[test]
    fn omega_examples() {
        assert!(!check_omega(&j_star()));
        assert!(check_omega(&tuple(vec![diag(&[1, 1]); 4])));
        assert!(!check_omega(&tuple(vec![Jnf::scalar(2).unwrap(); 4])));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&j_star()), 2);
        assert_eq!(kappa(&tuple(vec![diag(&[1, 1]); 4])), 0);
        assert_eq!(kappa(&tuple(vec![diag(&[2, 1, 1]); 3])), 2);
        // four (a,1,1) diagonal classes of size 3
        assert_eq!(kappa(&tuple(vec![diag(&[1, 2]); 4])), 2);
    }

    #[test]
    fn reduce_step_on_j_star() {
        let t = j_star();
        let next = reduce_step(&t, None).unwrap();
        assert_eq!(next.n(), 3);
        for j in &next.jnfs()[..3] {
            let mut mult = j.multiplicities();
            mult.sort_unstable();
            assert_eq!(mult, vec![1, 2]);
            assert!(j.is_diagonal());
        }
        assert_eq!(next.jnfs()[3], Jnf::single(vec![2, 1]).unwrap());
        assert_eq!(next.r(), vec![1, 1, 1, 1]);
        let last = reduce_step(&next, None).unwrap();
        assert_eq!(last.n(), 1);
    }

    #[test]
    fn reduce_step_on_j_star_star_fourth_class() {
        let next = reduce_step(&j_star_star(), None).unwrap();
        let fourth = &next.jnfs()[3];
        assert!(fourth.is_diagonal());
        let mut m = fourth.multiplicities();
        m.sort();
        assert_eq!(m, vec![1, 2]);
    }

    #[test]
    fn reduce_step_preconditions() {
        let omega = tuple(vec![diag(&[1, 1]); 4]);
        assert!(matches!(reduce_step(&omega, None), Err(Error::PreconditionViolated(_))));
        let pair = tuple(vec![diag(&[1, 1]); 2]);
        assert!(matches!(reduce_step(&pair, None), Err(Error::PreconditionViolated(_))));
        let one = tuple(vec![diag(&[1]); 3]);
        assert!(matches!(reduce_step(&one, None), Err(Error::PreconditionViolated(_))));
        let bad = vec!["e1".to_string(), "e1".into(), "e1".into(), "nope".into()];
        assert!(matches!(reduce_step(&j_star(), Some(&bad)), Err(Error::InvalidChoice(_))));
        // in (2,1) diagonal, e2 has one block while e1 has two
        let t = tuple(vec![diag(&[2, 1]), diag(&[2, 1]), diag(&[2, 1]), diag(&[2, 1])]);
        let wrong = vec!["e2".to_string(), "e1".into(), "e1".into(), "e1".into()];
        assert!(matches!(reduce_step(&t, Some(&wrong)), Err(Error::InvalidChoice(_))));
    }

    #[test]
    fn solvable_examples() {
        let tr = solvable_generic(&j_star());
        assert_eq!(tr.verdict, Verdict::Solvable);
        assert_eq!(tr.chain(), vec![4, 3, 1]);
        assert_eq!(solvable_generic(&j_star_star()).chain(), vec![4, 3, 1]);
        let pair = solvable_generic(&tuple(vec![diag(&[1, 1, 1]), diag(&[1, 1, 1])]));
        assert_eq!(pair.verdict, Verdict::NotSolvable);
        assert_eq!(pair.reason, StopReason::BetaFails);
        let one = solvable_generic(&tuple(vec![diag(&[1]); 2]));
        assert_eq!(one.reason, StopReason::SizeOne);
    }

    #[test]
    fn trace_is_consistent() {
        let tr = solvable_generic(&j_star());
        for w in tr.stages.windows(2) {
            assert_eq!(w[0].n_next, Some(w[1].n));
            assert!(w[1].n < w[0].n);
            assert_eq!(w[0].kappa, w[1].kappa);
        }
        assert!(tr.stages.last().unwrap().chosen.is_none());
    }

    #[test]
    fn rigidity_labels() {
        assert_eq!(classify_rigidity(&j_star()), Rigidity::Rigid);
        assert_eq!(classify_rigidity(&tuple(vec![diag(&[1, 1]); 4])), Rigidity::ZeroIndex);
        assert_eq!(classify_rigidity(&tuple(vec![diag(&[1, 2]); 4])), Rigidity::Rigid);
        assert_eq!(classify_rigidity(&tuple(vec![diag(&[1, 1]); 5])), Rigidity::NegativeIndex(-2));
        assert_eq!(classify_rigidity(&tuple(vec![diag(&[1, 1]); 2])), Rigidity::Other(4));
    }

    #[test]
    fn explore_covers_every_choice() {
        // J** fourth class has a unique maximal label, classes 1-3 have two each
        let traces = explore_choices(&j_star_star());
        assert!(traces.len() >= 8);
        assert!(traces.iter().all(|t| t.verdict == Verdict::Solvable));
        assert_eq!(verdicts_over_choices(&j_star()).len(), 1);
    }

    #[test]
    fn tuple_validation() {
        assert!(JnfTuple::new(vec![diag(&[2])]).is_err());
        assert!(JnfTuple::new(vec![diag(&[2]), diag(&[3])]).is_err());
    }
}
