//! One-, two- and three-step alternating iterations.
//!
//! A scheme applies its splittings in list order. For splittings
//! `A = U_i - V_i` each outer step runs the stages `x <- U_i#(V_i x + b)`, so
//! the scheme is the stationary iteration `x <- Hx + c` with
//! `H = T_m ... T_1`, `T_i = U_i# V_i` and
//! `c = sum_i (T_m ... T_{i+1}) U_i# b`.

use std::time::Instant;

use crate::analysis::Preconditioner;
use crate::error::{Error, Result};
use crate::ginv::group_inverse;
use crate::linalg::{relative_distance, solve_square, spectral_radius, subspace_gap, Matrix, Subspace, Tolerances};
use crate::splitting::{make_splitting, Splitting};

/// Ordered list of one to three splittings of the same matrix.
#[derive(Clone, Debug)]
pub struct Scheme {
    splittings: Vec<Splitting>,
    preconditioner: Option<Preconditioner>,
}

impl Scheme {
    pub fn new(splittings: Vec<Splitting>) -> Result<Self> {
        if splittings.is_empty() || splittings.len() > 3 {
            return Err(Error::InvalidArgument(format!(
                "a scheme takes 1 to 3 splittings, got {}",
                splittings.len()
            )));
        }
        let a = splittings[0].a();
        if splittings.iter().any(|s| s.a() != a) {
            return Err(Error::DimensionMismatch("splittings of a scheme must share one matrix".into()));
        }
        Ok(Scheme { splittings, preconditioner: None })
    }

    /// Scheme for the system `QAx = Qb`; the splittings must split `QA`.
    pub fn preconditioned(pre: Preconditioner, splittings: Vec<Splitting>) -> Result<Self> {
        let mut scheme = Scheme::new(splittings)?;
        if scheme.matrix() != pre.system() {
            return Err(Error::DimensionMismatch(
                "preconditioned splittings must split the product QA".into(),
            ));
        }
        scheme.preconditioner = Some(pre);
        Ok(scheme)
    }

    pub fn splittings(&self) -> &[Splitting] {
        &self.splittings
    }

    pub fn preconditioner(&self) -> Option<&Preconditioner> {
        self.preconditioner.as_ref()
    }

    pub fn steps(&self) -> usize {
        self.splittings.len()
    }

    pub fn order(&self) -> usize {
        self.matrix().rows()
    }

    /// The matrix being split (`QA` when preconditioned).
    pub fn matrix(&self) -> &Matrix {
        self.splittings[0].a()
    }

    /// Right-hand side seen by the stages: `Qb` or `b`.
    fn effective_rhs(&self, b: &Matrix) -> Result<Matrix> {
        let n = self.order();
        if b.shape() != (n, 1) {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side must be {n}x1, got {}x{}",
                b.rows(),
                b.cols()
            )));
        }
        Ok(match &self.preconditioner {
            Some(p) => p.q() * b,
            None => b.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationConfig {
    /// Starting vector; zero when absent.
    pub x0: Option<Matrix>,
    pub eps: f64,
    pub max_iter: usize,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig { x0: None, eps: 1e-6, max_iter: 2000 }
    }
}

impl IterationConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {}", self.eps)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if let Some(x0) = &self.x0 {
            if x0.shape() != (n, 1) {
                return Err(Error::DimensionMismatch(format!(
                    "initial vector must be {n}x1, got {}x{}",
                    x0.rows(),
                    x0.cols()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct IterationTrace {
    pub x_final: Matrix,
    pub iterations: usize,
    pub converged: bool,
    /// `|x_k - x_(k-1)|_2` for every outer step.
    pub step_norms: Vec<f64>,
    pub rho_h: f64,
    pub elapsed_seconds: f64,
}

/// `H = T_m ... T_1` with `T_i = U_i# V_i`.
pub fn iteration_matrix(s: &Scheme) -> Matrix {
    let mut h = Matrix::identity(s.order());
    for sp in &s.splittings {
        h = sp.iteration_matrix() * h;
    }
    h
}

/// Constant term `c` of `x <- Hx + c`, built from the closed form rather than
/// from the stage loop.
pub fn constant_term(s: &Scheme, b: &Matrix) -> Result<Matrix> {
    let rhs = s.effective_rhs(b)?;
    let mut c = Matrix::zeros(s.order(), 1);
    for (i, sp) in s.splittings.iter().enumerate() {
        let mut term = sp.u_ginv() * &rhs;
        for later in &s.splittings[i + 1..] {
            term = later.iteration_matrix() * term;
        }
        c = c + term;
    }
    Ok(c)
}

fn sweep(s: &Scheme, x: &Matrix, rhs: &Matrix) -> Matrix {
    let mut x = x.clone();
    for sp in &s.splittings {
        x = sp.u_ginv() * (sp.v() * &x + rhs);
    }
    x
}

/// Runs the staged iteration until `|x_k - x_(k-1)|_2 <= eps` or `max_iter`
/// outer steps. Stops early, unconverged, if the iterate overflows.
pub fn iterate(s: &Scheme, b: &Matrix, cfg: &IterationConfig) -> Result<IterationTrace> {
    let n = s.order();
    cfg.validate(n)?;
    let rhs = s.effective_rhs(b)?;
    let rho_h = spectral_radius(&iteration_matrix(s))?;

    let start = Instant::now();
    let mut x = cfg.x0.clone().unwrap_or_else(|| Matrix::zeros(n, 1));
    let mut step_norms = Vec::new();
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let next = sweep(s, &x, &rhs);
        let step = (&next - &x).norm();
        step_norms.push(step);
        x = next;
        if !x.is_finite() {
            break;
        }
        if step <= cfg.eps {
            converged = true;
            break;
        }
    }
    Ok(IterationTrace {
        x_final: x,
        iterations: step_norms.len(),
        converged,
        step_norms,
        rho_h,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// `(I - H)^-1 c`, the limit of a convergent scheme.
pub fn fixed_point(s: &Scheme, b: &Matrix) -> Result<Matrix> {
    let h = iteration_matrix(s);
    let rho = spectral_radius(&h)?;
    if rho >= 1.0 {
        return Err(Error::DivergentScheme { rho });
    }
    let c = constant_term(s, b)?;
    solve_square(&(Matrix::identity(s.order()) - h), &c)
}

/// Intermediate quantities of the splitting `A = B - C` induced by a scheme.
#[derive(Clone, Debug)]
pub struct InducedSplittingReport {
    /// `M = S_1 + S_m - A + V_m U_2# V_1` (three steps), `S_1 + S_2 - A`
    /// (two steps) or `S_1` (one step).
    pub middle: Matrix,
    pub range_gap: f64,
    pub null_gap: f64,
    /// `B = S_1 M# S_m`.
    pub b_formula: Option<Matrix>,
    /// `B = A (I - H)^-1`.
    pub b_fixed_point: Matrix,
    /// Relative distance between the two expressions for `B`.
    pub cross_check: Option<f64>,
}

pub fn induced_splitting_report(s: &Scheme, tol: &Tolerances) -> Result<InducedSplittingReport> {
    let a = s.matrix();
    let n = s.order();
    let sp = &s.splittings;
    let first = sp[0].u();
    let last = sp[sp.len() - 1].u();
    let middle = match sp.len() {
        1 => first.clone(),
        2 => first + last - a,
        _ => first + last - a + sp[2].v() * sp[1].u_ginv() * sp[0].v(),
    };
    let range_gap = subspace_gap(a, &middle, Subspace::Range, tol)?;
    let null_gap = subspace_gap(a, &middle, Subspace::Null, tol)?;

    let h = iteration_matrix(s);
    let shifted = Matrix::identity(n) - h;
    let b_fixed_point = solve_square(&shifted.transpose(), &a.transpose())?.transpose();

    let (b_formula, cross_check) = if range_gap < tol.subspace_tol && null_gap < tol.subspace_tol {
        let b = if sp.len() == 1 {
            first.clone()
        } else {
            first * group_inverse(&middle, tol)?.ginv * last
        };
        let d = relative_distance(&b, &b_fixed_point);
        (Some(b), Some(d))
    } else {
        (None, None)
    };
    Ok(InducedSplittingReport { middle, range_gap, null_gap, b_formula, b_fixed_point, cross_check })
}

/// The unique splitting `A = B - C` with `B#C = H`.
///
/// Requires every splitting to be G-weak regular, `A# >= 0`, and `M` to share
/// the range and null space of `A`; the two expressions for `B` must agree
/// within `mat_eq_tol`.
pub fn induced_splitting(s: &Scheme, tol: &Tolerances) -> Result<Splitting> {
    use crate::splitting::SplittingClass;

    if let Some(i) = s.splittings.iter().position(|sp| !sp.is(SplittingClass::GWeakRegular)) {
        return Err(Error::HypothesisViolation(format!(
            "splitting {} is not G-weak regular",
            i + 1
        )));
    }
    let ag = group_inverse(s.matrix(), tol)?.ginv;
    if !crate::linalg::is_nonneg(&ag, tol) {
        return Err(Error::HypothesisViolation("the group inverse is not nonnegative".into()));
    }
    let report = induced_splitting_report(s, tol)?;
    let (Some(b), Some(residual)) = (report.b_formula, report.cross_check) else {
        return Err(Error::HypothesisViolation(format!(
            "middle factor does not share range and null space with A (gaps {:.3e}, {:.3e})",
            report.range_gap, report.null_gap
        )));
    };
    if residual >= tol.mat_eq_tol {
        return Err(Error::CrossCheckFailed { residual, bound: tol.mat_eq_tol });
    }
    make_splitting(s.matrix(), &b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_nonneg;
    use crate::splitting::SplittingClass;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn sym() -> Matrix {
        m(&[&[9.0, -3.0, 6.0], &[-3.0, 5.0, -2.0], &[6.0, -2.0, 4.0]])
    }

    fn sym_scheme() -> Scheme {
        let a = sym();
        let parts = [1.1, 1.5, 1.4]
            .iter()
            .map(|&c| make_splitting(&a, &a.scale(c), &tol()).unwrap())
            .collect();
        Scheme::new(parts).unwrap()
    }

    fn regular_scheme() -> (Scheme, Matrix) {
        let a = m(&[&[3.0, 1.0, 2.0], &[1.0, -12.0, 13.0], &[2.0, 13.0, -11.0]]);
        let u = m(&[&[5.0, 2.0, 3.0], &[2.0, -12.0, 14.0], &[3.0, 14.0, -11.0]]);
        let s = make_splitting(&a, &u, &tol()).unwrap();
        (Scheme::new(vec![s]).unwrap(), a)
    }

    #[test]
    fn scheme_shape_rules() {
        let a = sym();
        let s = make_splitting(&a, &a, &tol()).unwrap();
        assert!(Scheme::new(vec![]).is_err());
        assert!(Scheme::new(vec![s.clone(); 4]).is_err());
        let other = make_splitting(&a.scale(2.0), &a.scale(2.0), &tol()).unwrap();
        assert!(Scheme::new(vec![s, other]).is_err());
    }

    #[test]
    fn trivial_scheme_collapses() {
        let a = sym();
        let s = make_splitting(&a, &a, &tol()).unwrap();
        let scheme = Scheme::new(vec![s.clone(), s.clone(), s]).unwrap();
        assert_eq!(iteration_matrix(&scheme).max_abs(), 0.0);
        let b = Matrix::column(&[1.0, -2.0, 0.5]).unwrap();
        let ag = group_inverse(&a, &tol()).unwrap().ginv;
        let c = constant_term(&scheme, &b).unwrap();
        assert!(relative_distance(&c, &(&ag * &b)) < 1e-12);
        let x = fixed_point(&scheme, &b).unwrap();
        assert!(relative_distance(&x, &(&ag * &b)) < 1e-12);

        let induced = induced_splitting(&scheme, &tol()).unwrap();
        assert!(relative_distance(induced.u(), &a) < 1e-10);
        assert!(induced.v().max_abs() < 1e-10);
    }

    #[test]
    fn scaled_partners_give_closed_form_radius() {
        // U = cA gives U#V = (1 - 1/c) AA#, so H = prod_i (1 - 1/c_i) AA#
        let scheme = sym_scheme();
        let expected = (1.0 - 1.0 / 1.1) * (1.0 - 1.0 / 1.5) * (1.0 - 1.0 / 1.4);
        let rho = spectral_radius(&iteration_matrix(&scheme)).unwrap();
        assert!((rho - expected).abs() < 1e-12);
    }

    #[test]
    fn one_step_constant_is_partner_inverse_times_rhs() {
        let (scheme, _) = regular_scheme();
        let printed = m(&[
            &[0.0885, 0.0417, 0.0469],
            &[0.0417, 0.0, 0.0417],
            &[0.0469, 0.0417, 0.0052],
        ]);
        let b = Matrix::column(&[1.0, 1.0, 0.0]).unwrap();
        let c = constant_term(&scheme, &b).unwrap();
        assert!((&c - &printed * &b).max_abs() < 1e-3);
    }

    #[test]
    fn solve_reaches_group_inverse_solution() {
        let (scheme, a) = regular_scheme();
        let b = Matrix::column(&[1.0, 1.0, 0.0]).unwrap();
        let cfg = IterationConfig { eps: 1e-10, ..IterationConfig::default() };
        let trace = iterate(&scheme, &b, &cfg).unwrap();
        assert!(trace.converged);
        assert!(*trace.step_norms.last().unwrap() <= 1e-10);
        let target = group_inverse(&a, &tol()).unwrap().ginv * &b;
        assert!((&trace.x_final - &target).norm() < 1e-8);
        assert!((&trace.x_final - fixed_point(&scheme, &b).unwrap()).norm() < 1e-8);
        assert!((trace.rho_h - 0.3983).abs() < 1e-3);
    }

    #[test]
    fn zero_rhs_converges_immediately() {
        let scheme = sym_scheme();
        let trace = iterate(&scheme, &Matrix::zeros(3, 1), &IterationConfig::default()).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.iterations, 1);
        assert_eq!(trace.x_final.max_abs(), 0.0);
    }

    #[test]
    fn staged_matches_composed() {
        let scheme = sym_scheme();
        let b = Matrix::column(&[0.3, -1.0, 2.0]).unwrap();
        let x0 = Matrix::column(&[1.0, 1.0, 1.0]).unwrap();
        let h = iteration_matrix(&scheme);
        let c = constant_term(&scheme, &b).unwrap();
        let mut x = x0.clone();
        for _ in 0..7 {
            x = &h * &x + &c;
        }
        let cfg = IterationConfig { x0: Some(x0), eps: 1e-300, max_iter: 7 };
        let trace = iterate(&scheme, &b, &cfg).unwrap();
        assert_eq!(trace.iterations, 7);
        assert!((&trace.x_final - &x).max_abs() < 1e-12);
    }

    #[test]
    fn divergent_scheme() {
        let a = sym();
        let neg = -&a;
        // U = cB gives U#V = (1 - 1/c) BB#, radius 3 for c = 1/4
        let s = make_splitting(&neg, &neg.scale(0.25), &tol()).unwrap();
        let scheme = Scheme::new(vec![s]).unwrap();
        let b = Matrix::column(&[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(fixed_point(&scheme, &b), Err(Error::DivergentScheme { .. })));
        let trace = iterate(&scheme, &b, &IterationConfig::default()).unwrap();
        assert!(!trace.converged);
        assert!(trace.rho_h > 1.0);
    }

    #[test]
    fn induced_splitting_of_scaled_partners() {
        let scheme = sym_scheme();
        let report = induced_splitting_report(&scheme, &tol()).unwrap();
        assert!(report.cross_check.unwrap() < 1e-10);
        let induced = induced_splitting(&scheme, &tol()).unwrap();
        assert!(induced.is(SplittingClass::GWeakRegular));
        let h = iteration_matrix(&scheme);
        assert!(relative_distance(&induced.iteration_matrix(), &h) < 1e-8);
        assert!(is_nonneg(induced.u_ginv(), &tol()));
    }

    #[test]
    fn induced_splitting_requires_weak_regularity() {
        let a = sym();
        let neg = -&a;
        let s = make_splitting(&neg, &neg.scale(2.0), &tol()).unwrap();
        let scheme = Scheme::new(vec![s.clone(), s.clone(), s]).unwrap();
        assert!(matches!(induced_splitting(&scheme, &tol()), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn config_validation() {
        let cfg = IterationConfig { eps: 0.0, ..IterationConfig::default() };
        assert!(cfg.validate(3).is_err());
        let cfg = IterationConfig { max_iter: 0, ..IterationConfig::default() };
        assert!(cfg.validate(3).is_err());
        let cfg = IterationConfig { x0: Some(Matrix::zeros(2, 1)), ..IterationConfig::default() };
        assert!(cfg.validate(3).is_err());
    }
}
