//! Dense row-major matrices over the rationals.
//!
//! Everything that flattens a matrix into a vector (`vectorize`, the
//! commutator map, the stacked maps in `tuple_lab`) uses row-major order:
//! entry `(i, j)` of an `n x n` matrix sits at index `i * n + j`.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!("empty shape {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        RatMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer entries, mostly for tests and fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        RatMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| Rational::from_integer(x)).collect())
                .collect(),
        )
    }

    /// Builds a matrix from column vectors of equal length.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::ShapeMismatch("columns of different lengths".into()));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for c in columns {
                entries.push(c[i].clone());
            }
        }
        RatMatrix::new(rows, cols, entries)
    }

    /// Column vector.
    pub fn column(values: Vec<Rational>) -> Result<Self> {
        let n = values.len();
        RatMatrix::new(n, 1, values)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty shape");
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: usize, value: Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = value.clone();
        }
        m
    }

    pub fn diag(values: &[Rational]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    /// Elementary matrix with a single 1 at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Rational::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    /// True for `c * I`.
    pub fn is_scalar(&self) -> bool {
        self.is_square() && *self == Self::scalar(self.rows, self[(0, 0)].clone())
    }

    fn require_same_shape(&self, other: &RatMatrix, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.require_same_shape(other, "add")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(RatMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.require_same_shape(other, "sub")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(RatMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, factor: &Rational) -> RatMatrix {
        let entries = self.entries.iter().map(|a| a * factor).collect();
        RatMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> RatMatrix {
        self.scale(&-Rational::one())
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "matmul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.require_square("commutator")?;
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn trace(&self) -> Result<Rational> {
        self.require_square("trace")?;
        Ok((0..self.rows).map(|i| &self[(i, i)]).sum())
    }

    pub fn pow(&self, exp: u32) -> Result<RatMatrix> {
        self.require_square("pow")?;
        let mut out = RatMatrix::identity(self.rows);
        for _ in 0..exp {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    /// Product of a non-empty sequence of matrices, left to right.
    pub fn product<'a>(mut factors: impl Iterator<Item = &'a RatMatrix>) -> Result<RatMatrix> {
        let first = factors
            .next()
            .ok_or_else(|| Error::ShapeMismatch("empty product".into()))?
            .clone();
        factors.try_fold(first, |acc, m| acc.matmul(m))
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..a.cols {
            if pivot_row == a.rows {
                break;
            }
            let Some(found) = (pivot_row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(found, pivot_row);
            let inv = a[(pivot_row, col)].recip().expect("pivot is nonzero");
            for j in col..a.cols {
                let v = &a[(pivot_row, j)] * &inv;
                a[(pivot_row, j)] = v;
            }
            for r in 0..a.rows {
                if r == pivot_row || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in col..a.cols {
                    let delta = &factor * &a[(pivot_row, j)];
                    if !delta.is_zero() {
                        a[(r, j)] -= &delta;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right kernel as column vectors; its length is `cols - rank`.
    pub fn nullspace_basis(&self) -> Vec<RatMatrix> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, free)];
                }
                RatMatrix::column(v).expect("nonempty")
            })
            .collect()
    }

    /// One solution of `self * x = rhs` (rhs a column of matching height), if any.
    pub fn solve(&self, rhs: &RatMatrix) -> Result<Option<RatMatrix>> {
        if rhs.rows != self.rows || rhs.cols != 1 {
            return Err(Error::ShapeMismatch(format!(
                "solve: {}x{} system with {}x{} right-hand side",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let aug = self.hstack(rhs)?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Ok(Some(RatMatrix::column(x)?))
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        self.require_square("inverse")?;
        let n = self.rows;
        let (r, pivots) = self.hstack(&RatMatrix::identity(n))?.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn hstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack: row counts differ".into()));
        }
        let mut entries = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        RatMatrix::new(self.rows, self.cols + other.cols, entries)
    }

    pub fn vstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack: column counts differ".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        RatMatrix::new(self.rows + other.rows, self.cols, entries)
    }

    /// Concatenates a non-empty list of blocks horizontally.
    pub fn hstack_all(blocks: &[RatMatrix]) -> Result<RatMatrix> {
        let (first, rest) =
            blocks.split_first().ok_or_else(|| Error::ShapeMismatch("no blocks".into()))?;
        rest.iter().try_fold(first.clone(), |acc, b| acc.hstack(b))
    }

    /// Concatenates a non-empty list of blocks vertically.
    pub fn vstack_all(blocks: &[RatMatrix]) -> Result<RatMatrix> {
        let (first, rest) =
            blocks.split_first().ok_or_else(|| Error::ShapeMismatch("no blocks".into()))?;
        let mut entries = first.entries.clone();
        let mut rows = first.rows;
        for b in rest {
            if b.cols != first.cols {
                return Err(Error::ShapeMismatch("vstack: column counts differ".into()));
            }
            entries.extend_from_slice(&b.entries);
            rows += b.rows;
        }
        RatMatrix::new(rows, first.cols, entries)
    }

    /// `[[a, b], [c, d]]` assembled from four blocks.
    pub fn block2x2(a: &RatMatrix, b: &RatMatrix, c: &RatMatrix, d: &RatMatrix) -> Result<RatMatrix> {
        a.hstack(b)?.vstack(&c.hstack(d)?)
    }

    pub fn direct_sum(&self, other: &RatMatrix) -> RatMatrix {
        let top = self.hstack(&RatMatrix::zeros(self.rows, other.cols)).expect("same rows");
        let bottom = RatMatrix::zeros(other.rows, self.cols).hstack(other).expect("same rows");
        top.vstack(&bottom).expect("same cols")
    }

    /// Sub-block of `rows x cols` starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<RatMatrix> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::ShapeMismatch("block out of range".into()));
        }
        let mut out = RatMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        Ok(out)
    }

    /// Row-major flattening.
    pub fn vectorize(&self) -> Vec<Rational> {
        self.entries.clone()
    }

    /// Inverse of [`RatMatrix::vectorize`] for square matrices.
    pub fn from_vectorized(n: usize, v: &[Rational]) -> Result<RatMatrix> {
        RatMatrix::new(n, n, v.to_vec())
    }
}

/// Matrix of `X -> [m, X]` on the `n^2`-dimensional space of `n x n` matrices,
/// in row-major vectorization.
pub fn vectorize_commutator_map(m: &RatMatrix) -> Result<RatMatrix> {
    m.require_square("commutator map")?;
    let n = m.rows();
    let mut l = RatMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                // (mX)_{ij} picks up m_{ik} X_{kj}
                l[(row, k * n + j)] += &m[(i, k)];
                // (Xm)_{ij} picks up X_{ik} m_{kj}
                l[(row, i * n + k)] -= &m[(k, j)];
            }
        }
    }
    Ok(l)
}

/// Matrix of a linear map given by its action on the standard basis of the source.
pub fn matrix_of_linear_map(
    source_dim: usize,
    mut image_of_basis: impl FnMut(usize) -> Result<Vec<Rational>>,
) -> Result<RatMatrix> {
    let columns = (0..source_dim).map(&mut image_of_basis).collect::<Result<Vec<_>>>()?;
    RatMatrix::from_columns(&columns)
}

/// Incrementally grown basis of a subspace of `Q^dim`, kept in echelon form
/// so membership tests are a single reduction.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    // (pivot column, row normalized to 1 at the pivot)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        self.reduce(v).iter().all(Rational::is_zero)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip().expect("nonzero");
        for x in r.iter_mut() {
            *x *= &inv;
        }
        // keep earlier rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            self.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c:>width$}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(deserializer)?;
        RatMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
