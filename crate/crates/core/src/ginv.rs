//! Matrix index and the group inverse.
//!
//! The group inverse is computed through a change of basis that separates the
//! range and the null space: with `Q = [B_R B_N]` the matrix takes the form
//! `Q^-1 A Q = blockdiag(C, 0)` and `A# = Q blockdiag(C^-1, 0) Q^-1`.

use crate::error::{Error, Result};
use crate::linalg::{
    inverse, null_basis, range_basis, rank, relative_norm, subspaces_equal, Matrix, Subspace,
    Tolerances,
};

/// Output of [`group_inverse`].
#[derive(Clone, Debug)]
pub struct GroupInverse {
    /// The group inverse `A#`.
    pub ginv: Matrix,
    /// 0 for nonsingular input, 1 otherwise.
    pub index: usize,
    /// Invertible `Q = [B_R B_N]`; the identity for nonsingular input.
    pub change_basis: Matrix,
    /// Leading `r x r` block `C` of `Q^-1 A Q`.
    pub core: Matrix,
}

/// Smallest `k >= 0` with `rank(A^k) == rank(A^(k+1))`, where `A^0 = I`.
pub fn matrix_index(a: &Matrix, tol: &Tolerances) -> Result<usize> {
    let n = a.ensure_square()?;
    let mut prev_rank = n;
    let mut power = Matrix::identity(n);
    for k in 0..=n {
        power = &power * a;
        let next_rank = rank(&power, tol);
        if next_rank == prev_rank {
            return Ok(k);
        }
        prev_rank = next_rank;
    }
    Ok(n)
}

/// Group inverse of an index-one (or nonsingular) matrix.
pub fn group_inverse(a: &Matrix, tol: &Tolerances) -> Result<GroupInverse> {
    let n = a.ensure_square()?;
    let index = matrix_index(a, tol)?;
    match index {
        0 => {
            let ginv = inverse(a).map_err(|_| {
                Error::NumericFailure("full-rank matrix could not be inverted".into())
            })?;
            Ok(GroupInverse { ginv, index, change_basis: Matrix::identity(n), core: a.clone() })
        }
        1 => {
            let range = range_basis(a, tol);
            let null = null_basis(a, tol);
            let r = range.cols();
            if r + null.cols() != n {
                return Err(Error::NumericFailure(format!(
                    "range ({r}) and null space ({}) do not span order {n}",
                    null.cols()
                )));
            }
            let q = range.hstack(&null)?;
            let q_inv = inverse(&q).map_err(|_| {
                Error::NumericFailure("range and null space are not complementary".into())
            })?;
            let p = &q_inv * a * &q;
            let core = p.top_left(r);
            let core_inv = inverse(&core)
                .map_err(|_| Error::NumericFailure("core block is singular".into()))?;
            let d = Matrix::block_diag_zero(&core_inv, n)?;
            let ginv = &q * &d * &q_inv;
            Ok(GroupInverse { ginv, index, change_basis: q, core })
        }
        index => Err(Error::NotIndexOne { index }),
    }
}

/// Residuals of the three defining equations `AXA = A`, `XAX = X`, `AX = XA`,
/// each relative to the norm of its reference side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxiomResiduals {
    pub reproduce: f64,
    pub reflexive: f64,
    pub commute: f64,
}

impl AxiomResiduals {
    pub fn max(&self) -> f64 {
        self.reproduce.max(self.reflexive).max(self.commute)
    }
}

pub fn verify_group_axioms(a: &Matrix, x: &Matrix) -> Result<AxiomResiduals> {
    a.ensure_square()?;
    a.ensure_same_shape(x, "group inverse candidate")?;
    let ax = a * x;
    let xa = x * a;
    Ok(AxiomResiduals {
        reproduce: relative_norm(&(&ax * a - a), a),
        reflexive: relative_norm(&(&xa * x - x), x),
        commute: relative_norm(&(&ax - &xa), &ax),
    })
}

/// `R(A) == R(A^t)`.
pub fn is_ep(a: &Matrix, tol: &Tolerances) -> Result<bool> {
    a.ensure_square()?;
    subspaces_equal(a, &a.transpose(), Subspace::Range, tol)
}
