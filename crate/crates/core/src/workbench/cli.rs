//! The `dsp` command line.
//!
//! Exit codes: 0 when the command completed (verdicts are part of the
//! output, not the status), 2 for malformed input, 3 for an internal
//! failure including a failing corpus expectation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::jnf::{self, Partition};
use crate::reduction::{self, JnfTuple, ReductionTrace, StopReason, Verdict};
use crate::spectra::{self, Genericity, SpectrumAssignment};
use crate::tuple_lab::{self, MatrixTuple, TupleReport};

use super::corpus::{self, Comparator, FixtureReport};

/// Largest size for which the analyzer enumerates non-genericity relations.
pub const GENERICITY_SIZE_LIMIT: u32 = 12;

#[derive(Parser, Debug)]
#[command(name = "dsp", version, about = "Solvability, genericity and tuple verification for matrix conjugacy classes")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a tuple of JNFs, optionally with a spectrum.
    Analyze {
        #[arg(short, long)]
        input: PathBuf,
        /// Include every stage of the reduction.
        #[arg(long)]
        trace: bool,
        /// Run the reduction under every admissible eigenvalue choice.
        #[arg(long)]
        explore_choices: bool,
    },
    /// Verify an explicit tuple of rational matrices.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Run the built-in example corpus.
    Corpus {
        #[arg(long)]
        example: Option<String>,
    },
    /// Print the dual of a partition given as comma-separated parts.
    Dual { parts: String },
}

/// Failure of a CLI command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::ConstructionFailed(_) | Error::SolveFailed(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("writing output: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Input of `analyze`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeInput {
    pub jnfs: JnfTuple,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumAssignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicRelationReport {
    pub q: u32,
    pub m: u32,
    pub xi: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    /// `Generic`, `RelativelyGeneric`, `NonGeneric`, `GlobalConditionViolated` or `Skipped`.
    pub label: String,
    pub basic_relation: Option<BasicRelationReport>,
    /// Relations that are not corollaries of the basic one.
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoiceSummary {
    pub traces: usize,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalyzeReport {
    pub input: AnalyzeInput,
    pub n: u32,
    pub r: Vec<u32>,
    pub d: Vec<u64>,
    pub kappa: i64,
    pub rigidity: String,
    pub alpha: bool,
    pub beta: bool,
    pub omega: bool,
    pub expected_dim: i64,
    pub verdict: Verdict,
    pub reason: StopReason,
    pub chain: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genericity: Option<GenericityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<ReductionTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choices: Option<ChoiceSummary>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub input: MatrixTuple,
    #[serde(flatten)]
    pub report: TupleReport,
}

fn read_input<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Multiset of eigenvalue multiplicities must agree class by class.
fn check_spectrum_matches(jnfs: &JnfTuple, s: &SpectrumAssignment) -> CliResult<()> {
    if s.classes().len() != jnfs.jnfs().len() {
        return Err(CliError::Input(format!(
            "spectrum has {} classes, JNF tuple has {}",
            s.classes().len(),
            jnfs.jnfs().len()
        )));
    }
    for (j, (class, jnf)) in s.classes().iter().zip(jnfs.jnfs()).enumerate() {
        let mut a: Vec<u32> = class.iter().map(|(_, m)| *m).collect();
        let mut b: Vec<u32> = jnf.blocks().iter().map(|(_, p)| p.size()).collect();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(CliError::Input(format!(
                "class {}: spectrum multiplicities {a:?} do not match the JNF {b:?}",
                j + 1
            )));
        }
    }
    Ok(())
}

fn genericity_report(s: &SpectrumAssignment) -> CliResult<GenericityReport> {
    if !spectra::global_condition(s) {
        return Ok(GenericityReport {
            label: "GlobalConditionViolated".into(),
            basic_relation: None,
            relations: vec![],
        });
    }
    let basic = spectra::basic_relation(s)?.map(|b| BasicRelationReport {
        q: b.q,
        m: b.m,
        xi: b.xi.to_string(),
        holds: b.relation.is_some(),
    });
    let classified = spectra::classify(s)?;
    let relations = match &classified {
        Genericity::NonGeneric(ws) => ws.iter().map(|w| w.describe(s)).collect(),
        _ => vec![],
    };
    Ok(GenericityReport { label: classified.label().into(), basic_relation: basic, relations })
}

pub fn analyze(input: AnalyzeInput, trace: bool, explore: bool) -> CliResult<AnalyzeReport> {
    let t = &input.jnfs;
    let mut warnings = Vec::new();
    let genericity = match &input.spectrum {
        None => None,
        Some(s) => {
            check_spectrum_matches(t, s)?;
            if s.n() > GENERICITY_SIZE_LIMIT {
                warnings.push(format!(
                    "genericity not classified: size {} exceeds {GENERICITY_SIZE_LIMIT}",
                    s.n()
                ));
                Some(GenericityReport { label: "Skipped".into(), basic_relation: None, relations: vec![] })
            } else {
                Some(genericity_report(s)?)
            }
        }
    };
    let result = reduction::solvable_generic(t);
    let choices = explore.then(|| {
        let traces = reduction::explore_choices(t);
        let mut verdicts: Vec<Verdict> = traces.iter().map(|tr| tr.verdict).collect();
        verdicts.sort();
        verdicts.dedup();
        ChoiceSummary { traces: traces.len(), verdicts }
    });
    Ok(AnalyzeReport {
        n: t.n(),
        r: t.r(),
        d: t.d(),
        kappa: reduction::kappa(t),
        rigidity: format!("{:?}", reduction::classify_rigidity(t)),
        alpha: reduction::check_alpha(t),
        beta: reduction::check_beta(t),
        omega: reduction::check_omega(t),
        expected_dim: tuple_lab::expected_dim(t),
        verdict: result.verdict,
        reason: result.reason,
        chain: result.chain(),
        genericity,
        trace: trace.then(|| result.clone()),
        choices,
        warnings,
        input,
    })
}

fn holds(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn write_analyze_text(out: &mut dyn Write, rep: &AnalyzeReport) -> std::io::Result<()> {
    writeln!(out, "n = {}, {} classes", rep.n, rep.r.len())?;
    for (j, jnf) in rep.input.jnfs.jnfs().iter().enumerate() {
        writeln!(out, "  class {}: {jnf}  r = {}  d = {}", j + 1, rep.r[j], rep.d[j])?;
    }
    writeln!(out, "kappa = {} ({})", rep.kappa, rep.rigidity)?;
    writeln!(out, "alpha {}, beta {}, omega {}", holds(rep.alpha), holds(rep.beta), holds(rep.omega))?;
    writeln!(out, "expected dimension = {}", rep.expected_dim)?;
    if let Some(g) = &rep.genericity {
        write!(out, "genericity: {}", g.label)?;
        if let Some(b) = &g.basic_relation {
            write!(out, " (q = {}, m = {}, xi = {})", b.q, b.m, b.xi)?;
        }
        writeln!(out)?;
        for rel in &g.relations {
            writeln!(out, "  relation {rel}")?;
        }
    }
    let chain: Vec<String> = rep.chain.iter().map(u32::to_string).collect();
    writeln!(out, "verdict: {:?} ({}), sizes {}", rep.verdict, rep.reason, chain.join(" -> "))?;
    if let Some(tr) = &rep.trace {
        for (k, st) in tr.stages.iter().enumerate() {
            writeln!(out, "  stage {k}: n = {}  kappa = {}  r = {:?}  d = {:?}", st.n, st.kappa, st.r, st.d)?;
            if let Some(chosen) = &st.chosen {
                writeln!(out, "    shrink {}", chosen.join(", "))?;
            }
        }
    }
    if let Some(c) = &rep.choices {
        writeln!(out, "choices: {} traces, verdicts {:?}", c.traces, c.verdicts)?;
    }
    for w in &rep.warnings {
        writeln!(out, "warning: {w}")?;
    }
    Ok(())
}

pub fn verify(input: MatrixTuple) -> CliResult<VerifyReport> {
    let report = tuple_lab::analyze(&input)?;
    Ok(VerifyReport { input, report })
}

fn write_verify_text(out: &mut dyn Write, rep: &VerifyReport) -> std::io::Result<()> {
    let r = &rep.report;
    writeln!(out, "{} matrices of size {} ({:?})", r.jnfs.len(), r.n, r.mode)?;
    writeln!(out, "closure: {}", r.closure)?;
    for (j, jnf) in r.jnfs.iter().enumerate() {
        writeln!(out, "  matrix {}: {jnf}  r = {}  d = {}", j + 1, r.r[j], r.d[j])?;
    }
    writeln!(out, "centralizer dimension = {} (trivial: {})", r.centralizer_dim, r.trivial_centralizer)?;
    writeln!(out, "commutator map surjective: {}", r.commut_surjective)?;
    writeln!(out, "irreducible: {} (generated algebra of dimension {})", r.irreducible, r.generated_algebra_dim)?;
    writeln!(out, "orbit dimension = {}", r.orbit_dim)?;
    if let Some(e) = r.expected_dim {
        writeln!(out, "expected dimension = {e}")?;
    }
    match (r.tangent_dim, &r.tangent_dim_kind) {
        (Some(t), Some(kind)) => writeln!(out, "{kind} dimension = {t}")?,
        _ => writeln!(out, "tangent dimension: not defined without closure")?,
    }
    Ok(())
}

fn write_corpus_text(out: &mut dyn Write, reports: &[FixtureReport]) -> std::io::Result<()> {
    let (mut passed, mut total) = (0, 0);
    for rep in reports {
        writeln!(out, "== {}: {}", rep.fixture, rep.summary)?;
        for r in &rep.results {
            total += 1;
            passed += r.pass as usize;
            let actual = match (&r.actual, &r.error) {
                (Some(v), _) => v.to_string(),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => "-".into(),
            };
            let cmp = match r.comparator {
                Comparator::Eq => "",
                Comparator::AtLeast => ">= ",
            };
            let tag = serde_json::to_value(r.provenance).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            writeln!(
                out,
                "  [{}] {}: {} = {} (expected {cmp}{}, {tag})",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.operation,
                actual,
                r.expected
            )?;
        }
        for note in &rep.notes {
            writeln!(out, "  note: {note}")?;
        }
    }
    writeln!(out, "{passed}/{total} expectations passed")
}

fn parse_parts(text: &str) -> CliResult<Partition> {
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| CliError::Input(format!("bad part {p:?}: {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Partition::new(parts)?)
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Analyze { input, trace, explore_choices } => {
            let rep = analyze(read_input(&input)?, trace, explore_choices)?;
            if cli.json {
                emit_json(out, &rep)
            } else {
                Ok(write_analyze_text(out, &rep)?)
            }
        }
        Command::Verify { input } => {
            let rep = verify(read_input(&input)?)?;
            if cli.json {
                emit_json(out, &rep)
            } else {
                Ok(write_verify_text(out, &rep)?)
            }
        }
        Command::Corpus { example } => {
            let fixtures = match example {
                Some(name) => vec![corpus::fixture(&name).map_err(|e| match e {
                    Error::InvalidChoice(m) => CliError::Input(m),
                    other => other.into(),
                })?],
                None => corpus::builtin_corpus()?,
            };
            let reports: Vec<FixtureReport> = fixtures.iter().map(corpus::run_fixture).collect();
            if cli.json {
                emit_json(out, &reports)?;
            } else {
                write_corpus_text(out, &reports)?;
            }
            let failed = reports.iter().flat_map(|r| &r.results).filter(|r| !r.pass).count();
            if failed > 0 {
                return Err(CliError::Internal(format!("{failed} corpus expectations failed")));
            }
            Ok(())
        }
        Command::Dual { parts } => {
            let p = parse_parts(&parts)?;
            let d = jnf::dual(&p);
            if cli.json {
                emit_json(out, &serde_json::json!({ "partition": p.parts(), "dual": d.parts() }))
            } else {
                Ok(writeln!(out, "{d}")?)
            }
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let (kind, msg) = match &e {
                CliError::Input(m) => ("invalid input", m),
                CliError::Internal(m) => ("internal error", m),
            };
            let _ = writeln!(err, "dsp: {kind}: {msg}");
            e.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cli_main(std::iter::once("dsp").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn dual_command() {
        assert_eq!(run_args(&["dual", "4,3,3"]), (0, "3,3,3,1\n".into(), String::new()));
        let (code, out, _) = run_args(&["--json", "dual", "3,2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["dual"], serde_json::json!([2, 2, 1]));
    }

    #[test]
    fn malformed_input_exits_2() {
        assert_eq!(run_args(&["dual", "4,x"]).0, 2);
        assert_eq!(run_args(&["dual", "0"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["verify", "-i", "/nonexistent.json"]).0, 2);
        assert_eq!(run_args(&["corpus", "--example", "example9"]).0, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("analyze"));
    }

    #[test]
    fn spectrum_must_match_jnfs() {
        let input: AnalyzeInput = serde_json::from_str(
            r#"{"jnfs": [{"multiplicities": [1, 1]}, {"multiplicities": [1, 1]}, {"multiplicities": [1, 1]}],
                "spectrum": {"mode": "additive", "symbols": [], "classes": [
                    [{"scalar": {"exponents": {}, "constant": "1"}, "mult": 2}],
                    [{"scalar": {"exponents": {}, "constant": "-1"}, "mult": 2}],
                    [{"scalar": {"exponents": {}, "constant": "0"}, "mult": 2}]]}}"#,
        )
        .unwrap();
        assert!(matches!(analyze(input, false, false), Err(CliError::Input(_))));
    }
}
