use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Argument(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ComplexMatrix { rows: r, cols: c, data: rows.iter().flat_map(|row| row.iter().copied()).collect() }
    }

    /// 2×2 matrix `[[a, b], [c, d]]`.
    pub fn m2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        ComplexMatrix { rows: 2, cols: 2, data: vec![a, b, c, d] }
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    /// Block matrix `[[a, b], [c, d]]` from equally sized square blocks.
    pub fn blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        let mut m = Self::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, a.get(i, j));
                m.set(i, j + n, b.get(i, j));
                m.set(i + n, j, c.get(i, j));
                m.set(i + n, j + n, d.get(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Submatrix of `nr` rows and `nc` columns starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut m = Self::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                m.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Entrywise comparison with absolute tolerance `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Largest entrywise distance; infinite for mismatched shapes.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let mut s: Vec<f64> = self.to_nalgebra().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        s
    }

    /// Numerical rank: singular values above `rel_threshold · σ_max`, and
    /// above `abs_floor` in absolute terms.
    pub fn rank_with(&self, rel_threshold: f64, abs_floor: f64) -> usize {
        let s = self.singular_values();
        let smax = s.first().copied().unwrap_or(0.0);
        if smax <= abs_floor {
            return 0;
        }
        s.iter().filter(|&&v| v > rel_threshold * smax).count()
    }

    /// Numerical rank with the default threshold `1e−9·σ_max` and an
    /// absolute floor of `1e−12`.
    pub fn rank(&self) -> usize {
        self.rank_with(RANK_THRESHOLD, RANK_FLOOR)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Argument("inverse of a non-square matrix".into()));
        }
        if self.rows == 2 {
            let det = self.data[0] * self.data[3] - self.data[1] * self.data[2];
            let scale = self.max_abs().powi(2);
            if det.norm() <= 1e-300 || det.norm() < 1e-15 * scale {
                return Err(Error::Singular("2x2 matrix with vanishing determinant".into()));
            }
            let inv = det.inv();
            return Ok(Self::m2(self.data[3] * inv, -self.data[1] * inv, -self.data[2] * inv, self.data[0] * inv));
        }
        self.to_nalgebra()
            .try_inverse()
            .map(|m| Self::from_nalgebra(&m))
            .ok_or_else(|| Error::Singular("matrix is not invertible".into()))
    }

    /// Eigenvalues of a square matrix via the complex Schur form.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        if self.rows != self.cols {
            return Err(Error::Argument("eigenvalues of a non-square matrix".into()));
        }
        if self.rows == 2 {
            let (a, b, c, d) = (self.data[0], self.data[1], self.data[2], self.data[3]);
            let half_tr = (a + d) * 0.5;
            let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
            return Ok(vec![half_tr + disc, half_tr - disc]);
        }
        let schur = nalgebra::linalg::Schur::new(self.to_nalgebra());
        let (_, t) = schur.unpack();
        Ok((0..self.rows).map(|i| t[(i, i)]).collect())
    }
}

/// Relative singular-value threshold used for numerical rank.
pub const RANK_THRESHOLD: f64 = 1e-9;
/// Absolute floor below which a matrix counts as zero.
pub const RANK_FLOOR: f64 = 1e-12;

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:.6}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch in sum");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch in difference");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}
