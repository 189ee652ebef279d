//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use dsp_core::exact_linalg::{q, qi, RatMatrix, Rational};
use dsp_core::jnf::{Jnf, Partition};
use dsp_core::reduction::JnfTuple;
use dsp_core::spectra::Mode;
use dsp_core::tuple_lab::MatrixTuple;
use dsp_core::workbench::cli::AnalyzeInput;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random partition of exactly `n`.
pub fn random_partition(rng: &mut impl Rng, n: u32) -> Partition {
    let mut parts = Vec::new();
    let mut rest = n;
    while rest > 0 {
        let p = rng.gen_range(1..=rest);
        parts.push(p);
        rest -= p;
    }
    Partition::new(parts).expect("positive parts")
}

/// Random JNF of size exactly `n` with labels `e1, e2, ...`.
pub fn random_jnf(rng: &mut impl Rng, n: u32) -> Jnf {
    let mut blocks = Vec::new();
    let mut rest = n;
    while rest > 0 {
        // bias towards several eigenvalues
        let g = rng.gen_range(1..=rest.min(1 + n / 2).max(1));
        blocks.push((format!("e{}", blocks.len() + 1), random_partition(rng, g)));
        rest -= g;
    }
    Jnf::new(blocks).expect("distinct labels")
}

pub fn random_jnf_tuple(rng: &mut impl Rng, n: u32, count: usize) -> JnfTuple {
    JnfTuple::new((0..count).map(|_| random_jnf(rng, n)).collect()).expect("equal sizes")
}

fn small(rng: &mut impl Rng) -> Rational {
    qi(rng.gen_range(-2..=2))
}

/// `L D U` with unit triangular `L`, `U` and a nonzero diagonal `D`.
pub fn random_conjugator(rng: &mut impl Rng, n: usize) -> RatMatrix {
    let mut l = RatMatrix::identity(n);
    let mut u = RatMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = small(rng);
            u[(j, i)] = small(rng);
        }
    }
    let pool = [qi(1), qi(-1), qi(2), q(1, 2), qi(3), q(-2, 3)];
    let d = RatMatrix::diag(&(0..n).map(|_| pool.choose(rng).expect("nonempty").clone()).collect::<Vec<_>>());
    l.matmul(&d).unwrap().matmul(&u).unwrap()
}

/// Upper-triangular matrix with diagonal drawn from a few nonzero values and
/// sparse off-diagonal entries; returns the matrix and its eigenvalues.
fn random_triangular(rng: &mut impl Rng, n: usize, scalar: bool) -> (RatMatrix, Vec<Rational>) {
    let values = [qi(1), qi(-1), qi(2), qi(3), q(1, 2)];
    let first = values.choose(rng).expect("nonempty").clone();
    let diag: Vec<Rational> =
        (0..n).map(|_| if scalar { first.clone() } else { values.choose(rng).expect("nonempty").clone() }).collect();
    let mut m = RatMatrix::diag(&diag);
    if !scalar {
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.6) {
                    m[(i, j)] = small(rng);
                }
            }
        }
    }
    (m, diag)
}

/// Random tuple of `count` matrices of size `n` with exactly known
/// eigenvalues. The shape is drawn from a mix that produces both trivial and
/// nontrivial centralizers: independently conjugated triangular matrices,
/// a common conjugation (reducible), direct sums, and scalar members.
pub fn random_tuple(rng: &mut impl Rng, n: usize, count: usize) -> MatrixTuple {
    let shape = rng.gen_range(0..4);
    if shape == 2 && n >= 2 {
        let k = rng.gen_range(1..n);
        let a = random_tuple(rng, k, count);
        let b = random_tuple(rng, n - k, count);
        return a.direct_sum(&b).expect("same length");
    }
    let shared = random_conjugator(rng, n);
    let mut matrices = Vec::with_capacity(count);
    let mut eigenvalues = Vec::with_capacity(count);
    for _ in 0..count {
        let scalar = shape == 3 && rng.gen_bool(0.5);
        let (t, e) = random_triangular(rng, n, scalar);
        let g = if shape == 1 { shared.clone() } else { random_conjugator(rng, n) };
        matrices.push(g.matmul(&t).unwrap().matmul(&g.inverse().unwrap()).unwrap());
        eigenvalues.push(e);
    }
    MatrixTuple::new(Mode::Multiplicative, matrices, eigenvalues).expect("valid tuple")
}

/// Block-diagonal Jordan matrix realizing `j`, whose labels are replaced by
/// the integers 1, 2, ...
pub fn realize(j: &Jnf) -> (RatMatrix, Vec<Rational>, Jnf) {
    let n = j.size() as usize;
    let mut m = RatMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut relabeled = Vec::new();
    let mut at = 0;
    for (k, (_, p)) in j.blocks().iter().enumerate() {
        let value = qi(k as i64 + 1);
        for &b in p.parts() {
            for i in 0..b as usize {
                m[(at + i, at + i)] = value.clone();
                if i + 1 < b as usize {
                    m[(at + i, at + i + 1)] = qi(1);
                }
                eigenvalues.push(value.clone());
            }
            at += b as usize;
        }
        relabeled.push((value.to_string(), p.clone()));
    }
    (m, eigenvalues, Jnf::new(relabeled).expect("distinct labels"))
}

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Shipped fixture files in name order.
pub fn fixture_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())
        .expect("fixtures directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

pub fn dsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsp")).args(args).output().expect("run dsp")
}

#[derive(Deserialize)]
struct Echo<T> {
    input: T,
}

fn echo_matches<T: serde::Serialize + serde::de::DeserializeOwned>(stdout: &[u8], original: &str) -> Result<(), String> {
    let echo: Echo<T> = serde_json::from_slice(stdout).map_err(|e| format!("report does not parse: {e}"))?;
    let again = serde_json::to_string_pretty(&echo.input).map_err(|e| e.to_string())? + "\n";
    if again == original {
        Ok(())
    } else {
        Err("echoed input differs from the file".into())
    }
}

/// Runs `verify` on `*_tuple.json` fixtures and `analyze` on the others and
/// checks that the echoed input re-serializes to the file's exact bytes.
pub fn round_trip(path: &Path) -> Result<(), String> {
    let original = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let file = path.to_str().expect("utf-8 path");
    let is_tuple = file.ends_with("_tuple.json");
    let out = dsp(&["--json", if is_tuple { "verify" } else { "analyze" }, "-i", file]);
    if out.status.code() != Some(0) {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    if is_tuple {
        echo_matches::<MatrixTuple>(&out.stdout, &original)
    } else {
        echo_matches::<AnalyzeInput>(&out.stdout, &original)
    }
}
