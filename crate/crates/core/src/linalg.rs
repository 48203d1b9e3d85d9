//! Dense real-matrix kernel.
//!
//! Storage, products and LU solves come from `nalgebra`; singular value and
//! eigenvalue decompositions from `faer`, whose SVD stays accurate on the
//! rank-deficient matrices this crate works with. Rank and subspace decisions
//! go through the SVD.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, LU};

use crate::error::{Error, Result};

/// Dense real matrix whose entries are finite at construction.
///
/// Arithmetic through the operator impls is not re-validated; a diverging
/// iteration can still overflow, which callers detect with [`Matrix::is_finite`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix(DMatrix<f64>);

impl Matrix {
    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let value = m[(i, j)];
                if !value.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j, value });
                }
            }
        }
        Ok(Matrix(m))
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::BadLength { rows, cols, got: data.len() });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &data))
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(nrows, ncols, data)
    }

    /// Column vector (n x 1).
    pub fn column(values: &[f64]) -> Result<Self> {
        Self::from_row_major(values.len(), 1, values.to_vec())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Matrix(DMatrix::identity(n, n))
    }

    /// `c * I` of order `n`.
    pub fn scalar(n: usize, c: f64) -> Self {
        Matrix(DMatrix::identity(n, n) * c)
    }

    /// `blockdiag(core, 0)` of order `n`.
    pub fn block_diag_zero(core: &Matrix, n: usize) -> Result<Self> {
        let r = core.rows();
        if !core.is_square() || r > n {
            return Err(Error::DimensionMismatch(format!(
                "core block {}x{} does not fit in order {n}",
                core.rows(),
                core.cols()
            )));
        }
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (r, r)).copy_from(&core.0);
        Ok(Matrix(m))
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.0.is_square()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        self.0.transpose().as_slice().to_vec()
    }

    /// Column-major entries, the storage order of the MatrixMarket array format.
    pub fn as_col_major(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix(self.0.transpose())
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix(&self.0 * c)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.0.is_empty() {
            return 0.0;
        }
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Smallest entry (`+inf` for an empty matrix).
    pub fn min_entry(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Leading `r x r` block.
    pub fn top_left(&self, r: usize) -> Matrix {
        Matrix(self.0.view((0, 0), (r, r)).into_owned())
    }

    /// Horizontal concatenation `[self other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} rows beside {} rows",
                self.rows(),
                other.rows()
            )));
        }
        let mut m = DMatrix::zeros(self.rows(), self.cols() + other.cols());
        m.view_mut((0, 0), self.shape()).copy_from(&self.0);
        m.view_mut((0, self.cols()), other.shape()).copy_from(&other.0);
        Ok(Matrix(m))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(Matrix(&self.0 * &other.0))
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare { rows: self.rows(), cols: self.cols() })
        }
    }

    pub fn ensure_same_shape(&self, other: &Matrix, what: &str) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )))
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                Matrix(&self.0 $op &rhs.0)
            }
        }
        impl $trait<Matrix> for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: Matrix) -> Matrix {
                Matrix(self.0 $op rhs.0)
            }
        }
        impl $trait<&Matrix> for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                Matrix(self.0 $op &rhs.0)
            }
        }
        impl $trait<Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: Matrix) -> Matrix {
                Matrix(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix(-&self.0)
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix(-self.0)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                // avoid printing "-0.0000"
                let v = self.0[(i, j)];
                let v = if v.abs() < 0.5 * 10f64.powi(-(prec as i32)) { 0.0 } else { v };
                write!(f, "{v:>width$.prec$}", width = prec + 6)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Numeric thresholds shared by every module. All fields must be positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Singular values at or below `rank_rel * max(rows, cols) * sigma_max`
    /// count as zero.
    pub rank_rel: f64,
    /// Bound on the spectral norm of a projector difference.
    pub subspace_tol: f64,
    /// Negative entries of smaller magnitude are treated as zero.
    pub nonneg_tol: f64,
    /// Bound on relative matrix residuals.
    pub mat_eq_tol: f64,
    /// Bound used when comparing against values rounded to four decimals.
    pub reference_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel: 1e-12,
            subspace_tol: 1e-8,
            nonneg_tol: 1e-10,
            mat_eq_tol: 1e-8,
            reference_tol: 1e-3,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rank_rel", self.rank_rel),
            ("subspace_tol", self.subspace_tol),
            ("nonneg_tol", self.nonneg_tol),
            ("mat_eq_tol", self.mat_eq_tol),
            ("reference_tol", self.reference_tol),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }

    fn rank_cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.rank_rel * rows.max(cols) as f64 * sigma_max
    }
}

/// `|diff| / |reference|` in the Frobenius norm, or the absolute norm when the
/// reference vanishes.
pub fn relative_norm(diff: &Matrix, reference: &Matrix) -> f64 {
    let r = reference.norm();
    if r > 0.0 {
        diff.norm() / r
    } else {
        diff.norm()
    }
}

/// Relative Frobenius distance `|a - b| / |b|`.
pub fn relative_distance(a: &Matrix, b: &Matrix) -> f64 {
    relative_norm(&(a - b), b)
}

fn to_faer(a: &Matrix) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.rows(), a.cols(), |i, j| a.0[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Singular values in decreasing order.
fn singular_values(a: &Matrix) -> Vec<f64> {
    if a.0.is_empty() {
        return Vec::new();
    }
    to_faer(a).singular_values().expect("SVD of a finite matrix converges")
}

/// Full SVD `a = U diag(s) V^t` with square `U`, `V` and decreasing `s`.
struct Decomposition {
    u: DMatrix<f64>,
    s: Vec<f64>,
    v: DMatrix<f64>,
    rank: usize,
}

fn decompose(a: &Matrix, tol: &Tolerances) -> Decomposition {
    let svd = to_faer(a).svd().expect("SVD of a finite matrix converges");
    let s: Vec<f64> = svd.S().column_vector().iter().copied().collect();
    let sigma_max = s.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_cutoff(a.rows(), a.cols(), sigma_max);
    let rank = if sigma_max == 0.0 { 0 } else { s.iter().filter(|&&v| v > cutoff).count() };
    Decomposition { u: from_faer(svd.U()), s, v: from_faer(svd.V()), rank }
}

/// Numerical rank: singular values above the relative cutoff.
pub fn rank(a: &Matrix, tol: &Tolerances) -> usize {
    let s = singular_values(a);
    let sigma_max = s.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return 0;
    }
    let cutoff = tol.rank_cutoff(a.rows(), a.cols(), sigma_max);
    s.iter().filter(|&&v| v > cutoff).count()
}

/// Orthonormal basis of the column space (`rows x rank`).
pub fn range_basis(a: &Matrix, tol: &Tolerances) -> Matrix {
    if a.0.is_empty() {
        return Matrix::zeros(a.rows(), 0);
    }
    let d = decompose(a, tol);
    Matrix(d.u.columns(0, d.rank).into_owned())
}

/// Orthonormal basis of the null space (`cols x (cols - rank)`).
pub fn null_basis(a: &Matrix, tol: &Tolerances) -> Matrix {
    let n = a.cols();
    if a.0.is_empty() {
        return Matrix::identity(n);
    }
    let d = decompose(a, tol);
    Matrix(d.v.columns(d.rank, n - d.rank).into_owned())
}

/// Which fundamental subspace to compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subspace {
    Range,
    Null,
}

fn projector(basis: &Matrix) -> Matrix {
    basis * basis.transpose()
}

/// Spectral-norm distance between the orthogonal projectors onto the chosen
/// subspaces of `a` and `b`. Lies in `[0, 1]` for subspaces of equal dimension
/// and equals 1 when the dimensions differ.
pub fn subspace_gap(a: &Matrix, b: &Matrix, which: Subspace, tol: &Tolerances) -> Result<f64> {
    a.ensure_same_shape(b, "subspace comparison")?;
    let basis = |m: &Matrix| match which {
        Subspace::Range => range_basis(m, tol),
        Subspace::Null => null_basis(m, tol),
    };
    let (ba, bb) = (basis(a), basis(b));
    if ba.cols() != bb.cols() {
        return Ok(1.0);
    }
    Ok((projector(&ba) - projector(&bb)).spectral_norm())
}

pub fn subspaces_equal(a: &Matrix, b: &Matrix, which: Subspace, tol: &Tolerances) -> Result<bool> {
    Ok(subspace_gap(a, b, which, tol)? < tol.subspace_tol)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    let n = a.ensure_square()?;
    if n == 0 || a.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let eigs = to_faer(a)
        .eigenvalues()
        .map_err(|_| Error::NumericFailure(format!("eigenvalue iteration did not converge for order {n}")))?;
    let rho = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if rho.is_finite() {
        Ok(rho)
    } else {
        Err(Error::NumericFailure("non-finite eigenvalue".into()))
    }
}

/// Moore-Penrose inverse via the truncated SVD.
pub fn moore_penrose(a: &Matrix, tol: &Tolerances) -> Matrix {
    if a.0.is_empty() {
        return Matrix::zeros(a.cols(), a.rows());
    }
    let d = decompose(a, tol);
    let r = d.rank;
    let mut v_scaled = d.v.columns(0, r).into_owned();
    for (k, mut col) in v_scaled.column_iter_mut().enumerate() {
        col /= d.s[k];
    }
    Matrix(v_scaled * d.u.columns(0, r).transpose())
}

/// Entrywise nonnegativity up to `nonneg_tol`.
pub fn is_nonneg(a: &Matrix, tol: &Tolerances) -> bool {
    a.as_dmatrix().iter().all(|&v| v >= -tol.nonneg_tol)
}

/// Amount by which `a` fails to be nonnegative (0 when it is).
pub fn negativity(a: &Matrix) -> f64 {
    (-a.min_entry()).max(0.0)
}

/// Solves `a x = b` by LU with partial pivoting.
pub fn solve_square(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.ensure_square()?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, expected {n}",
            b.rows()
        )));
    }
    if n == 0 {
        return Ok(b.clone());
    }
    let lu = LU::new(a.as_dmatrix().clone());
    let u = lu.u();
    let diag = u.diagonal();
    let max_pivot = diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min_pivot = diag.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if max_pivot == 0.0 || min_pivot <= n as f64 * f64::EPSILON * max_pivot {
        return Err(Error::Singular);
    }
    let x = lu.solve(b.as_dmatrix()).ok_or(Error::Singular)?;
    let x = Matrix(x);
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Singular)
    }
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.ensure_square()?;
    solve_square(a, &Matrix::identity(n))
}

/// Smallest singular value (0 for an empty matrix).
pub fn min_singular_value(a: &Matrix) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}
