//! Comparison checks between splittings and schemes, and commuting
//! preconditioners `Q` for the system `QAx = Qb`.

use std::fmt;

use crate::alternating::{induced_splitting_report, iteration_matrix, Scheme};
use crate::error::{Error, Result};
use crate::ginv::group_inverse;
use crate::linalg::{
    inverse, is_nonneg, negativity, null_basis, relative_distance, relative_norm,
    spectral_radius, Matrix, Tolerances,
};
use crate::splitting::{Splitting, SplittingClass};

/// A nonsingular `Q` commuting with a target matrix `A`.
#[derive(Clone, Debug)]
pub struct Preconditioner {
    q: Matrix,
    q_inv: Matrix,
    target: Matrix,
    system: Matrix,
}

impl Preconditioner {
    /// Accepts `q` when `|QA - AQ| / |QA| < mat_eq_tol`.
    pub fn new(a: &Matrix, q: &Matrix, tol: &Tolerances) -> Result<Self> {
        a.ensure_square()?;
        a.ensure_same_shape(q, "preconditioner")?;
        let q_inv = inverse(q)?;
        let system = q * a;
        let residual = relative_norm(&(&system - a * q), &system);
        if residual >= tol.mat_eq_tol {
            return Err(Error::HypothesisViolation(format!(
                "preconditioner does not commute with A (relative residual {residual:.3e})"
            )));
        }
        Ok(Preconditioner { q: q.clone(), q_inv, target: a.clone(), system })
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn q_inv(&self) -> &Matrix {
        &self.q_inv
    }

    /// The original matrix `A`.
    pub fn target(&self) -> &Matrix {
        &self.target
    }

    /// The preconditioned matrix `QA`.
    pub fn system(&self) -> &Matrix {
        &self.system
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hypothesis {
    pub name: String,
    pub satisfied: bool,
    /// Size of the violation (0 when satisfied with margin).
    pub residual: f64,
}

impl Hypothesis {
    fn nonneg(name: &str, m: &Matrix, tol: &Tolerances) -> Self {
        Hypothesis { name: name.into(), satisfied: is_nonneg(m, tol), residual: negativity(m) }
    }

    fn class(name: &str, s: &Splitting, class: SplittingClass) -> Self {
        Hypothesis { name: name.into(), satisfied: s.is(class), residual: 0.0 }
    }

    fn bound(name: &str, residual: f64, bound: f64) -> Self {
        Hypothesis { name: name.into(), satisfied: residual < bound, residual }
    }
}

/// Hypotheses and conclusion `lhs <= rhs` of a comparison statement.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub hypotheses: Vec<Hypothesis>,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_label: String,
    pub rhs_label: String,
    /// `lhs <= rhs + reference_tol`.
    pub holds: bool,
}

impl ComparisonReport {
    fn new(hypotheses: Vec<Hypothesis>, lhs: (String, f64), rhs: (String, f64), tol: &Tolerances) -> Self {
        ComparisonReport {
            hypotheses,
            holds: lhs.1 <= rhs.1 + tol.reference_tol,
            lhs: lhs.1,
            rhs: rhs.1,
            lhs_label: lhs.0,
            rhs_label: rhs.0,
        }
    }

    /// True when every hypothesis is satisfied.
    pub fn supported(&self) -> bool {
        self.hypotheses.iter().all(|h| h.satisfied)
    }

    pub fn failed_hypotheses(&self) -> impl Iterator<Item = &Hypothesis> {
        self.hypotheses.iter().filter(|h| !h.satisfied)
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.hypotheses {
            let mark = if h.satisfied { "yes" } else { "NO" };
            writeln!(f, "  {:<40} {:>3}  (residual {:.2e})", h.name, mark, h.residual)?;
        }
        let rel = if self.holds { "<=" } else { ">" };
        let verdict = match (self.holds, self.supported()) {
            (true, true) => "holds",
            (true, false) => "holds (hypotheses not met)",
            (false, true) => "FAILS",
            (false, false) => "fails (hypotheses not met)",
        };
        write!(
            f,
            "  {} = {:.4} {} {:.4} = {}: {}",
            self.lhs_label, self.lhs, rel, self.rhs, self.rhs_label, verdict
        )
    }
}

fn same_matrix(s1: &Splitting, s2: &Splitting, tol: &Tolerances) -> Result<()> {
    s1.a().ensure_same_shape(s2.a(), "compared splittings")?;
    if relative_distance(s1.a(), s2.a()) >= tol.mat_eq_tol {
        return Err(Error::InvalidArgument("compared splittings split different matrices".into()));
    }
    Ok(())
}

/// Compares `A = B - C` against `A = U - V`: if the first is G-weak regular,
/// the second G-regular, `A# >= 0` and `B# >= U#`, then `rho(B#C) <= rho(U#V)`.
pub fn compare_splittings(s1: &Splitting, s2: &Splitting, tol: &Tolerances) -> Result<ComparisonReport> {
    same_matrix(s1, s2, tol)?;
    let ag = group_inverse(s1.a(), tol)?.ginv;
    let hypotheses = vec![
        Hypothesis::class("first splitting G-weak regular", s1, SplittingClass::GWeakRegular),
        Hypothesis::class("second splitting G-regular", s2, SplittingClass::GRegular),
        Hypothesis::nonneg("A# >= 0", &ag, tol),
        Hypothesis::nonneg("B# >= U#", &(s1.u_ginv() - s2.u_ginv()), tol),
    ];
    Ok(ComparisonReport::new(
        hypotheses,
        ("rho(B#C)".into(), s1.spectral_radius()?),
        ("rho(U#V)".into(), s2.spectral_radius()?),
        tol,
    ))
}

/// Compares a scheme against its own splittings: if every splitting is
/// G-regular, `A# >= 0` and the middle factor of the induced splitting shares
/// the range and null space of `A`, then `rho(H)` is at most every individual
/// radius.
pub fn check_alternating_comparison(s: &Scheme, tol: &Tolerances) -> Result<ComparisonReport> {
    let ag = group_inverse(s.matrix(), tol)?.ginv;
    let mut hypotheses: Vec<Hypothesis> = s
        .splittings()
        .iter()
        .enumerate()
        .map(|(i, sp)| Hypothesis::class(&format!("splitting {} G-regular", i + 1), sp, SplittingClass::GRegular))
        .collect();
    hypotheses.push(Hypothesis::nonneg("A# >= 0", &ag, tol));
    let induced = induced_splitting_report(s, tol)?;
    hypotheses.push(Hypothesis::bound("R(M) = R(A)", induced.range_gap, tol.subspace_tol));
    hypotheses.push(Hypothesis::bound("N(M) = N(A)", induced.null_gap, tol.subspace_tol));

    let radii = s
        .splittings()
        .iter()
        .map(Splitting::spectral_radius)
        .collect::<Result<Vec<_>>>()?;
    let min = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let rho_h = spectral_radius(&iteration_matrix(s))?;
    Ok(ComparisonReport::new(hypotheses, ("rho(H)".into(), rho_h), ("min rho(U_i#V_i)".into(), min), tol))
}

/// Scalar preconditioner `cI` when `A# >= 0` and `-cI` when `A# <= 0`.
pub fn build_scalar_preconditioner(a: &Matrix, c: f64, tol: &Tolerances) -> Result<Preconditioner> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {c}")));
    }
    let n = a.ensure_square()?;
    let ag = group_inverse(a, tol)?.ginv;
    let sign = if is_nonneg(&ag, tol) {
        1.0
    } else if is_nonneg(&-&ag, tol) {
        -1.0
    } else {
        return Err(Error::UnsupportedSign);
    };
    Preconditioner::new(a, &Matrix::scalar(n, sign * c), tol)
}

/// Residuals of the commuting-preconditioner identities, each relative to
/// its reference side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreconditionerReport {
    /// `|QA - AQ| / |QA|`
    pub commutation: f64,
    /// `|(QA)# - A#Q^-1| / |A#Q^-1|`
    pub product_ginv: f64,
    /// `|A#Q^-1 - Q^-1 A#| / |A#Q^-1|`
    pub sides: f64,
    /// `A#Q^-1 >= 0`
    pub nonneg: bool,
}

impl PreconditionerReport {
    pub fn max_residual(&self) -> f64 {
        self.commutation.max(self.product_ginv).max(self.sides)
    }

    pub fn passes(&self, bound: f64) -> bool {
        self.nonneg && self.max_residual() < bound
    }
}

pub fn validate_preconditioner(a: &Matrix, q: &Matrix, tol: &Tolerances) -> Result<PreconditionerReport> {
    a.ensure_square()?;
    a.ensure_same_shape(q, "preconditioner")?;
    let q_inv = inverse(q)?;
    let qa = q * a;
    let ag = group_inverse(a, tol)?.ginv;
    let qa_g = group_inverse(&qa, tol)?.ginv;
    let right = &ag * &q_inv;
    Ok(PreconditionerReport {
        commutation: relative_norm(&(&qa - a * q), &qa),
        product_ginv: relative_norm(&(&qa_g - &right), &right),
        sides: relative_norm(&(&right - &q_inv * &ag), &right),
        nonneg: is_nonneg(&right, tol),
    })
}

/// Compares a splitting `A = K - L` with a splitting `QA = K_q - L_q` of the
/// preconditioned matrix: under the stated hypotheses
/// `rho(K_q#L_q) <= rho(K#L)`.
pub fn check_preconditioned_comparison(
    a: &Matrix,
    s_plain: &Splitting,
    q: &Matrix,
    s_pre: &Splitting,
    tol: &Tolerances,
) -> Result<ComparisonReport> {
    a.ensure_same_shape(s_plain.a(), "plain splitting")?;
    a.ensure_same_shape(s_pre.a(), "preconditioned splitting")?;
    let ag = group_inverse(a, tol)?.ginv;
    let q_inv = inverse(q)?;
    let qa = q * a;
    let hypotheses = vec![
        Hypothesis::bound("plain splitting splits A", relative_distance(s_plain.a(), a), tol.mat_eq_tol),
        Hypothesis::class("plain splitting G-weak regular", s_plain, SplittingClass::GWeakRegular),
        Hypothesis::nonneg("A# >= 0", &ag, tol),
        Hypothesis::bound("QA = AQ", relative_norm(&(&qa - a * q), &qa), tol.mat_eq_tol),
        Hypothesis::nonneg("A#Q^-1 >= 0", &(&ag * &q_inv), tol),
        Hypothesis::bound("preconditioned splitting splits QA", relative_distance(s_pre.a(), &qa), tol.mat_eq_tol),
        Hypothesis::class("preconditioned splitting G-regular", s_pre, SplittingClass::GRegular),
        Hypothesis::nonneg("QK_q# >= K#", &(q * s_pre.u_ginv() - s_plain.u_ginv()), tol),
    ];
    Ok(ComparisonReport::new(
        hypotheses,
        ("rho(K_q#L_q)".into(), s_pre.spectral_radius()?),
        ("rho(K#L)".into(), s_plain.spectral_radius()?),
        tol,
    ))
}

/// Largest order accepted by [`nearest_commuting`]; the commutant is computed
/// from an `n^2 x n^2` system.
pub const COMMUTANT_MAX_ORDER: usize = 64;

/// Frobenius-nearest matrix to `q` that commutes with `a`.
///
/// `vec(AQ - QA) = (I (x) A - A^t (x) I) vec(Q)`, so the commutant of `A` is
/// the null space of that operator and the nearest commuting matrix is the
/// orthogonal projection of `vec(Q)` onto it.
pub fn nearest_commuting(a: &Matrix, q: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let n = a.ensure_square()?;
    a.ensure_same_shape(q, "commuting target")?;
    if n > COMMUTANT_MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "commutant projection supports order up to {COMMUTANT_MAX_ORDER}, got {n}"
        )));
    }
    let nn = n * n;
    let mut op = vec![0.0; nn * nn];
    // row index i + n*j is entry (i, j) of AQ - QA; column k + n*l is Q(k, l)
    for j in 0..n {
        for i in 0..n {
            let row = i + n * j;
            for k in 0..n {
                op[row * nn + k + n * j] += a.get(i, k);
                op[row * nn + i + n * k] -= a.get(k, j);
            }
        }
    }
    let op = Matrix::from_row_major(nn, nn, op)?;
    let basis = null_basis(&op, tol);
    let vq = Matrix::column(q.as_col_major())?;
    let projected = &basis * (basis.transpose() * vq);
    let mut out = vec![0.0; nn];
    for j in 0..n {
        for i in 0..n {
            out[i * n + j] = projected.get(i + n * j, 0);
        }
    }
    Matrix::from_row_major(n, n, out)
}
