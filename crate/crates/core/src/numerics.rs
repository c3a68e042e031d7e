//! Dense complex matrices and the small set of numerical kernels the rest of
//! the crate is built on: Hermitian eigendecomposition, nullspaces, spans and
//! tensor/direct-sum assembly.
//!
//! Matrices here are tiny (at most a few hundred rows), so everything is dense
//! and row-major. Decompositions are delegated to `nalgebra`; all rank
//! decisions go through [`rank_cutoff`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Shorthand constructor for a complex scalar.
#[inline]
pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Absolute entrywise tolerance used by every comparison in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    atol: f64,
}

impl Tolerance {
    pub const DEFAULT_ATOL: f64 = 1e-10;

    pub fn new(atol: f64) -> Result<Self> {
        if atol > 0.0 && atol.is_finite() {
            Ok(Self { atol })
        } else {
            Err(Error::InvalidTolerance(atol))
        }
    }

    #[inline]
    pub fn atol(&self) -> f64 {
        self.atol
    }

    #[inline]
    pub fn accepts(&self, residual: f64) -> bool {
        residual < self.atol
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { atol: Self::DEFAULT_ATOL }
    }
}

/// Relative singular-value cutoff below which a direction counts as null.
pub fn rank_cutoff(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * sigma_max * 1e-12
}

/// A dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} entries, expected {}",
                i,
                r.len(),
                m
            )));
        }
        Self::from_vec(n, m, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect())
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        Self::diag(&entries.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let k = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if k == 0 || n == 0 || columns.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch("ragged or empty column set".into()));
        }
        Ok(Self::from_fn(n, k, |i, j| columns[j][i]))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Row-major entries.
    #[inline]
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hilbert–Schmidt inner product Tr(self^dagger other).
    pub fn hs_inner(&self, other: &Self) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// `max |self - other|` entrywise.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.rows == other.rows && self.cols == other.cols && tol.accepts(self.distance(other))
    }

    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, tol: Tolerance) -> bool {
        tol.accepts(self.hermiticity_residual())
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        direct_sum(&[self, other])
    }

    /// Sub-block `rows r0..r0+nr, cols c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Inverse of a square matrix, `None` when numerically singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        self.to_nalgebra().try_inverse().map(|m| Self::from_nalgebra(&m))
    }

    /// Parses the JSON wire form: an array of rows, each entry `[re, im]`.
    pub fn from_json_value(value: &Value, path: &str) -> Result<Self> {
        let shape = |message: String| Error::MatrixShape { path: path.to_string(), message };
        let rows = value.as_array().ok_or_else(|| shape("expected an array of rows".into()))?;
        if rows.is_empty() {
            return Err(shape("matrix has no rows".into()));
        }
        let mut width = None;
        let mut data = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| shape(format!("row {i} is not an array")))?;
            match width {
                None if row.is_empty() => return Err(shape("matrix has no columns".into())),
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(shape(format!("row {i} has {} entries, expected {w}", row.len())))
                }
                _ => {}
            }
            for (j, entry) in row.iter().enumerate() {
                let pair = entry.as_array().filter(|p| p.len() == 2);
                let parsed = pair.and_then(|p| Some(c(p[0].as_f64()?, p[1].as_f64()?)));
                data.push(parsed.ok_or_else(|| {
                    Error::Schema {
                        path: format!("{path}[{i}][{j}]"),
                        message: "entry must be a [re, im] pair of numbers".into(),
                    }
                })?);
            }
        }
        Self::from_vec(rows.len(), width.unwrap_or(0), data).map_err(|e| shape(e.to_string()))
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self).expect("matrix serialization is infallible")
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let row = &mut out[i * m..(i + 1) * m];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(&rhs.data[l * m..(l + 1) * m]) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { rows: n, cols: m, data: out }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            // Adding 0.0 writes negative zeros as 0.0.
            let row: Vec<[f64; 2]> =
                self.data[i * self.cols..(i + 1) * self.cols].iter().map(|z| [z.re + 0.0, z.im + 0.0]).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        ComplexMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|[a, b]| c(a, b)).collect()).collect())
            .map_err(de::Error::custom)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Block-diagonal assembly of the given matrices.
pub fn direct_sum(blocks: &[&ComplexMatrix]) -> ComplexMatrix {
    let rows: usize = blocks.iter().map(|b| b.rows).sum();
    let cols: usize = blocks.iter().map(|b| b.cols).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                out[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
        r0 += b.rows;
        c0 += b.cols;
    }
    out
}

/// Eigenvalues (descending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Recomposes `V diag(f(λ)) V^dagger`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = ComplexMatrix::diag_real(&self.values.iter().map(|&l| f(l)).collect::<Vec<_>>());
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

/// Hermitian eigendecomposition with descending eigenvalues.
///
/// Degenerate eigenspaces get a canonical basis: Gram–Schmidt applied to the
/// projections of the standard basis vectors, each vector rotated so its first
/// nonzero component is real and positive. Diagonal input therefore yields
/// standard basis vectors.
pub fn hermitian_eigendecompose(m: &ComplexMatrix, tol: Tolerance) -> Result<HermitianEigen> {
    let n = m.ensure_square()?;
    let residual = m.hermiticity_residual();
    if !tol.accepts(residual) {
        return Err(Error::NotHermitian { residual });
    }
    // Symmetrize so that the solver sees an exactly Hermitian input.
    let h = (m + &m.adjoint()).scale_real(0.5);
    let eig = SymmetricEigen::new(h.to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let raw: Vec<Vec<C64>> =
        order.iter().map(|&k| (0..n).map(|i| eig.eigenvectors[(i, k)]).collect()).collect();

    let scale = values.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let gap = 1e-8 * scale;
    let mut vectors: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end - 1] - values[end]).abs() <= gap {
            end += 1;
        }
        vectors.extend(canonical_basis(&raw[start..end]));
        start = end;
    }
    Ok(HermitianEigen { values, vectors: ComplexMatrix::from_columns(&vectors)? })
}

fn canonical_basis(cluster: &[Vec<C64>]) -> Vec<Vec<C64>> {
    if cluster.len() == 1 {
        let mut v = cluster[0].clone();
        normalize_phase(&mut v);
        return vec![v];
    }
    let n = cluster[0].len();
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(cluster.len());
    for k in 0..n {
        if out.len() == cluster.len() {
            break;
        }
        // Projection of e_k onto the cluster span.
        let mut v = vec![ZERO; n];
        for u in cluster {
            let coeff = u[k].conj();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi += coeff * ui;
            }
        }
        for _ in 0..2 {
            for w in &out {
                let p = inner(w, &v);
                for (vi, wi) in v.iter_mut().zip(w) {
                    *vi -= p * wi;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > 1e-6 {
            v.iter_mut().for_each(|z| *z /= norm);
            normalize_phase(&mut v);
            out.push(v);
        }
    }
    debug_assert_eq!(out.len(), cluster.len());
    out
}

fn normalize_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-9) {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

/// `<a, b>`, conjugate-linear in the first slot.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn svd_null_columns(m: DMatrix<C64>, rows: usize, cols: usize) -> Vec<Vec<C64>> {
    // Pad wide systems with zero rows so the solver returns a full V.
    let padded = if rows < cols { m.resize_vertically(cols, ZERO) } else { m };
    let svd = SVD::new(padded, false, true);
    let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
    let cutoff = rank_cutoff(rows, cols, smax);
    let v_t = svd.v_t.expect("V requested");
    (0..cols)
        .filter(|&k| svd.singular_values[k] <= cutoff)
        .map(|k| (0..cols).map(|j| v_t[(k, j)].conj()).collect())
        .collect()
}

/// Orthonormal basis of `{x : Lx = 0}`.
pub fn nullspace(l: &ComplexMatrix, tol: Tolerance) -> Vec<Vec<C64>> {
    let basis = svd_null_columns(l.to_nalgebra(), l.rows, l.cols);
    debug_assert!(basis.iter().all(|x| l.mul_vec(x).iter().all(|z| z.norm() < tol.atol().max(1e-8))));
    basis
}

/// Numerical rank under [`rank_cutoff`].
pub fn rank(l: &ComplexMatrix) -> usize {
    let s = l.to_nalgebra().singular_values();
    let smax = s.iter().fold(0.0_f64, |a, &x| a.max(x));
    let cutoff = rank_cutoff(l.rows, l.cols, smax);
    s.iter().filter(|&&x| x > cutoff).count()
}

/// Orthonormal basis of the complex span of `vectors`.
pub fn orthonormal_span(vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let n = vectors[0].len();
    let m = ComplexMatrix::from_columns(vectors).expect("vectors of equal length");
    let svd = SVD::new(m.to_nalgebra(), true, false);
    let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
    if smax == 0.0 {
        return Vec::new();
    }
    let cutoff = rank_cutoff(n, vectors.len(), smax);
    let u = svd.u.expect("U requested");
    let mut keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > cutoff).collect();
    keep.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    keep.into_iter().map(|k| (0..n).map(|i| u[(i, k)]).collect()).collect()
}

/// Splits complex entries into `[re..., im...]`.
pub fn realify(v: &[C64]) -> Vec<f64> {
    v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect()
}

/// Inverse of [`realify`].
pub fn complexify(v: &[f64]) -> Vec<C64> {
    let n = v.len() / 2;
    (0..n).map(|k| c(v[k], v[n + k])).collect()
}

/// A real matrix used for ℝ-linear constraint systems (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn from_columns(columns: &[Vec<f64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        let mut data = vec![0.0; rows * cols];
        for (j, col) in columns.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                data[i * cols + j] = x;
            }
        }
        Self { rows, cols, data }
    }

    /// Matrix of the ℝ-linear map `f: ℂ^n -> ℂ^m` in the realified bases,
    /// obtained by evaluating `f` on `e_k` and `i e_k`.
    pub fn of_real_linear_map(n: usize, f: impl Fn(&[C64]) -> Vec<C64>) -> Self {
        let mut columns = Vec::with_capacity(2 * n);
        for unit in [ONE, I] {
            for k in 0..n {
                let mut e = vec![ZERO; n];
                e[k] = unit;
                columns.push(realify(&f(&e)));
            }
        }
        Self::from_columns(&columns)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    /// Orthonormal basis of the real nullspace.
    pub fn nullspace(&self) -> Vec<Vec<f64>> {
        if self.cols == 0 {
            return Vec::new();
        }
        if self.rows == 0 {
            return (0..self.cols).map(|k| (0..self.cols).map(|j| f64::from(u8::from(j == k))).collect()).collect();
        }
        let m = self.to_nalgebra();
        let padded = if self.rows < self.cols { m.resize_vertically(self.cols, 0.0) } else { m };
        let svd = SVD::new(padded, false, true);
        let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
        let cutoff = rank_cutoff(self.rows, self.cols, smax);
        let v_t = svd.v_t.expect("V requested");
        (0..self.cols)
            .filter(|&k| svd.singular_values[k] <= cutoff)
            .map(|k| (0..self.cols).map(|j| v_t[(k, j)]).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let s = self.to_nalgebra().singular_values();
        let smax = s.iter().fold(0.0_f64, |a, &x| a.max(x));
        let cutoff = rank_cutoff(self.rows, self.cols, smax);
        s.iter().filter(|&&x| x > cutoff).count()
    }
}

/// Orthonormal basis of the real span of `vectors` under `Re<.,.>`.
pub fn real_orthonormal_span(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if vectors.is_empty() || vectors[0].is_empty() {
        return Vec::new();
    }
    let n = vectors[0].len();
    let m = RealMatrix::from_columns(vectors).to_nalgebra();
    let svd = SVD::new(m, true, false);
    let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
    if smax == 0.0 {
        return Vec::new();
    }
    let cutoff = rank_cutoff(n, vectors.len(), smax);
    let u = svd.u.expect("U requested");
    let mut keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > cutoff).collect();
    keep.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    keep.into_iter().map(|k| (0..n).map(|i| u[(i, k)]).collect()).collect()
}

/// Projection residual `max |x - P x|` of `x` against an orthonormal basis.
pub fn projection_residual(basis: &[Vec<C64>], x: &[C64]) -> f64 {
    let mut r = x.to_vec();
    for b in basis {
        let p = inner(b, x);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri -= p * bi;
        }
    }
    r.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values (descending) and the top singular pair `(u, v)` with `A v = σ u`.
pub(crate) fn top_singular_pair(a: &ComplexMatrix) -> (f64, Vec<C64>, Vec<C64>) {
    let svd = SVD::new(a.to_nalgebra(), true, true);
    let (k, &s) = svd
        .singular_values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty matrix");
    let u = svd.u.expect("U requested");
    let v_t = svd.v_t.expect("V requested");
    let uvec = (0..a.rows()).map(|i| u[(i, k)]).collect();
    let vvec = (0..a.cols()).map(|j| v_t[(k, j)].conj()).collect();
    (s, uvec, vvec)
}

/// Smallest singular value of a square matrix.
pub fn min_singular_value(a: &ComplexMatrix) -> f64 {
    a.to_nalgebra().singular_values().iter().fold(f64::INFINITY, |m, &s| m.min(s))
}
