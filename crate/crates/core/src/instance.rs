//! Random matrices with known group inverses, for tests and benchmarks.
//!
//! Every construction is a similarity `S blockdiag(C, 0) S^-1` with an
//! explicit `S`, so the group inverse `S blockdiag(C^-1, 0) S^-1` is known in
//! closed form and serves as an independent oracle.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{inverse, spectral_radius, Matrix};

fn uniform<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.random_range(lo..hi)).collect();
    Matrix::from_row_major(rows, cols, data).expect("finite entries")
}

fn check_rank(n: usize, rank: usize) -> Result<()> {
    if n == 0 || rank > n {
        return Err(Error::InvalidArgument(format!("rank {rank} is not admissible for order {n}")));
    }
    Ok(())
}

/// Random permutation matrix.
pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut data = vec![0.0; n * n];
    for (i, &j) in order.iter().enumerate() {
        data[i * n + j] = 1.0;
    }
    Matrix::from_row_major(n, n, data).expect("finite entries")
}

/// Random orthogonal matrix (Gram-Schmidt on a uniform matrix).
pub fn orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    loop {
        let g = uniform(rng, n, n, -1.0, 1.0);
        let qr = g.as_dmatrix().clone().qr();
        if qr.r().diagonal().iter().all(|d| d.abs() > 1e-3) {
            return Matrix::from_dmatrix(qr.q()).expect("finite entries");
        }
    }
}

/// An index-one matrix together with its group inverse.
#[derive(Clone, Debug)]
pub struct IndexOne {
    pub a: Matrix,
    pub ginv: Matrix,
    /// `S` with `A = S blockdiag(C, 0) S^-1`.
    pub basis: Matrix,
    pub basis_inv: Matrix,
    pub core: Matrix,
}

impl IndexOne {
    fn assemble(core: Matrix, basis: Matrix, basis_inv: Matrix) -> Result<Self> {
        let n = basis.rows();
        let core_inv = inverse(&core)?;
        let a = &basis * Matrix::block_diag_zero(&core, n)? * &basis_inv;
        let ginv = &basis * Matrix::block_diag_zero(&core_inv, n)? * &basis_inv;
        Ok(IndexOne { a, ginv, basis, basis_inv, core })
    }

    pub fn order(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.core.rows()
    }

    /// Another matrix with the same range and null space: the core is
    /// replaced by `new_core`.
    pub fn with_core(&self, new_core: &Matrix) -> Result<Matrix> {
        if new_core.shape() != self.core.shape() {
            return Err(Error::DimensionMismatch("replacement core has the wrong shape".into()));
        }
        Ok(&self.basis * Matrix::block_diag_zero(new_core, self.order())? * &self.basis_inv)
    }

    /// A random proper partner `U` of `A`.
    pub fn proper_partner<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Matrix> {
        self.with_core(&well_conditioned_core(self.rank(), rng))
    }
}

/// Nonsingular core with a dominant diagonal of random sign.
fn well_conditioned_core<R: Rng + ?Sized>(r: usize, rng: &mut R) -> Matrix {
    let mut data: Vec<f64> = (0..r * r).map(|_| rng.random_range(-1.0..1.0)).collect();
    for i in 0..r {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        data[i * r + i] += sign * (r as f64 + rng.random_range(0.0..1.0));
    }
    Matrix::from_row_major(r, r, data).expect("finite entries")
}

/// General index-one matrix `S blockdiag(C, 0) S^-1` with `S = I + G / (2 sqrt n)`.
pub fn index_one<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Result<IndexOne> {
    check_rank(n, rank)?;
    let core = well_conditioned_core(rank, rng);
    loop {
        let g = uniform(rng, n, n, -1.0, 1.0);
        let s = Matrix::identity(n) + g.scale(0.5 / (n as f64).sqrt());
        if let Ok(s_inv) = inverse(&s) {
            if s_inv.max_abs() < 1e3 {
                return IndexOne::assemble(core, s, s_inv);
            }
        }
    }
}

/// EP matrix `W blockdiag(C, 0) W^t` with orthogonal `W`; its group inverse
/// coincides with the Moore-Penrose inverse.
pub fn ep_matrix<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Result<IndexOne> {
    check_rank(n, rank)?;
    let core = well_conditioned_core(rank, rng);
    let w = orthogonal(n, rng);
    let wt = w.transpose();
    IndexOne::assemble(core, w, wt)
}

/// Group-monotone matrix `P blockdiag(sI - N, 0) P^t` with `N >= 0`,
/// `s > rho(N)` and a permutation `P`, so `A# >= 0`.
#[derive(Clone, Debug)]
pub struct GroupMonotone {
    pub inner: IndexOne,
    /// The nonnegative part `N` of the core.
    pub nonneg_part: Matrix,
    pub shift: f64,
}

impl GroupMonotone {
    pub fn a(&self) -> &Matrix {
        &self.inner.a
    }

    pub fn ginv(&self) -> &Matrix {
        &self.inner.ginv
    }

    /// Partner of a proper G-regular splitting: the core `sI - N` becomes
    /// `(sI + D) - N o mask` for a random nonnegative diagonal `D` and a random
    /// 0/1 mask, so `V = P blockdiag(D + N o (1 - mask), 0) P^t >= 0` and the
    /// new core is again a nonsingular M-matrix.
    pub fn regular_partner<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Matrix> {
        let r = self.inner.rank();
        let keep: f64 = rng.random_range(0.0..1.0);
        let mut data = vec![0.0; r * r];
        for i in 0..r {
            for j in 0..r {
                let n_ij = self.nonneg_part.get(i, j);
                let kept = if rng.random_bool(keep) { n_ij } else { 0.0 };
                data[i * r + j] = -kept;
            }
            data[i * r + i] += self.shift + rng.random_range(0.0..self.shift);
        }
        self.inner.with_core(&Matrix::from_row_major(r, r, data)?)
    }
}

/// Random group-monotone matrix of order `n` with the given nullity
/// (`nullity = 0` gives a nonsingular M-matrix up to permutation).
pub fn group_monotone<R: Rng + ?Sized>(n: usize, nullity: usize, rng: &mut R) -> Result<GroupMonotone> {
    if nullity >= n {
        return Err(Error::InvalidArgument(format!("nullity {nullity} leaves no core for order {n}")));
    }
    let r = n - nullity;
    let density: f64 = rng.random_range(0.3..1.0);
    let mut data = vec![0.0; r * r];
    for v in data.iter_mut() {
        if rng.random_bool(density) {
            *v = rng.random_range(0.0..1.0);
        }
    }
    let nonneg_part = Matrix::from_row_major(r, r, data)?;
    let rho = spectral_radius(&nonneg_part)?;
    // a floor keeps the core away from singular when N is (nearly) nilpotent
    let shift = rho.max(0.5) * (1.0 + rng.random_range(0.05..0.5));
    let core = Matrix::scalar(r, shift) - &nonneg_part;
    let p = permutation(n, rng);
    let pt = p.transpose();
    let inner = IndexOne::assemble(core, p, pt)?;
    Ok(GroupMonotone { inner, nonneg_part, shift })
}

/// Index-one `A = blockdiag(-B, 0)` with `B > 0`, paired with the G-regular
/// partner `U = blockdiag(D, 0)`, `D > 0` diagonal. Here `A#` is not
/// nonnegative and `rho(U#V) = rho(I + D^-1 B) > 1`.
pub fn nonmonotone_weak_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(Matrix, Matrix)> {
    if n < 2 {
        return Err(Error::InvalidArgument("order must be at least 2".into()));
    }
    let r = n - 1;
    loop {
        let b = uniform(rng, r, r, 0.1, 1.0);
        if inverse(&b).is_err() {
            continue;
        }
        let d: Vec<f64> = (0..r).map(|_| rng.random_range(0.5..2.0)).collect();
        let mut dm = vec![0.0; r * r];
        for (i, v) in d.iter().enumerate() {
            dm[i * r + i] = *v;
        }
        let a = Matrix::block_diag_zero(&-b, n)?;
        let u = Matrix::block_diag_zero(&Matrix::from_row_major(r, r, dm)?, n)?;
        return Ok((a, u));
    }
}
