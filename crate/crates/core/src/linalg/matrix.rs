use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// Checked constructor from column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k % rows, col: k / rows });
        }
        Ok(Self { rows, cols, data })
    }

    /// Checked constructor from a list of columns.
    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        let rows = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns have different lengths".into()));
        }
        Self::from_col_major(rows, cols.len(), cols.concat())
    }

    /// Checked constructor from row-major nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("rows have different lengths".into()));
        }
        let mut data = Vec::with_capacity(n * k);
        for j in 0..k {
            for r in rows {
                data.push(r[j]);
            }
        }
        Self::from_col_major(n, k, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i] } else { ZERO })
    }

    /// Vandermonde matrix with rows (1, λ_i, …, λ_i^{cols−1}).
    pub fn vandermonde(nodes: &[C64], cols: usize) -> Self {
        let mut v = Self::zeros(nodes.len(), cols);
        for (i, &z) in nodes.iter().enumerate() {
            let mut p = ONE;
            for j in 0..cols {
                v[(i, j)] = p;
                p *= z;
            }
        }
        v
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn col(&self, j: usize) -> &[C64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [C64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        self.col_mut(j).copy_from_slice(v);
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(a * self.rows + i, b * self.rows + i);
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(j * self.rows + a, j * self.rows + b);
            }
        }
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        let r = self.rows;
        Self { rows: r, cols: range.len(), data: self.data[range.start * r..range.end * r].to_vec() }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows.start + i, cols.start + j)])
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let oc = out.rows;
            for k in 0..self.cols {
                let b = other[(k, j)];
                if b == ZERO {
                    continue;
                }
                let a = self.col(k);
                let dst = &mut out.data[j * oc..(j + 1) * oc];
                for (d, &x) in dst.iter_mut().zip(a) {
                    *d += x * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        let mut out = vec![ZERO; self.rows];
        for (k, &b) in v.iter().enumerate() {
            for (d, &x) in out.iter_mut().zip(self.col(k)) {
                *d += x * b;
            }
        }
        out
    }

    /// A* v
    pub fn adjoint_mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.rows, v.len(), "adjoint_mul_vec shape mismatch");
        (0..self.cols).map(|j| dot(self.col(j), v)).collect()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// A·diag(d)
    pub fn scale_columns(&self, d: &[C64]) -> Self {
        assert_eq!(d.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * d[j])
    }

    /// diag(d)·A
    pub fn scale_rows(&self, d: &[C64]) -> Self {
        assert_eq!(d.len(), self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| d[i] * self[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "sub shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "add shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn norm_fro(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn col_norm(&self, j: usize) -> f64 {
        norm2(self.col(j))
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// x* y
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).fold(ZERO, |s, (a, b)| s + a.conj() * b)
}

/// Overflow-safe Euclidean norm.
pub fn norm2(v: &[C64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = v
        .iter()
        .map(|z| {
            let (a, b) = (z.re / scale, z.im / scale);
            a * a + b * b
        })
        .sum();
    scale * s.sqrt()
}

/// Permutation stored as `map[k]` = source index placed at position k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &k in &map {
            if k >= map.len() || seen[k] {
                return Err(Error::InvalidConfig(format!("not a bijection: {map:?}")));
            }
            seen[k] = true;
        }
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        self.map.swap(a, b);
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (k, &s) in self.map.iter().enumerate() {
            inv[s] = k;
        }
        Self { map: inv }
    }

    /// out[k] = v[map[k]]
    pub fn apply<T: Copy>(&self, v: &[T]) -> Vec<T> {
        self.map.iter().map(|&s| v[s]).collect()
    }

    /// Row k of the result is row map[k] of `a` (Π·A).
    pub fn permute_rows(&self, a: &CMatrix) -> CMatrix {
        CMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(self.map[i], j)])
    }

    /// Column k of the result is column map[k] of `a` (A·Πᵀ in row terms).
    pub fn permute_cols(&self, a: &CMatrix) -> CMatrix {
        CMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, self.map[j])])
    }

    /// Inverse of `permute_rows`: row map[k] of the result is row k of `a`.
    pub fn unpermute_rows(&self, a: &CMatrix) -> CMatrix {
        self.inverse().permute_rows(a)
    }

    /// Inverse of `permute_cols`: column map[k] of the result is column k of `a`.
    pub fn unpermute_cols(&self, a: &CMatrix) -> CMatrix {
        self.inverse().permute_cols(a)
    }
}
