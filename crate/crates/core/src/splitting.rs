//! Proper splittings `A = U - V` and their nonnegativity classes.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ginv::{group_inverse, verify_group_axioms};
use crate::linalg::{
    inverse, is_nonneg, min_singular_value, range_basis, relative_norm, solve_square,
    spectral_radius, subspace_gap, Matrix, Subspace, Tolerances,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SplittingClass {
    /// `R(U) = R(A)` and `N(U) = N(A)`.
    Proper,
    /// Proper with `U# >= 0` and `V >= 0`.
    GRegular,
    /// Proper with `U# >= 0` and `U#V >= 0`.
    GWeakRegular,
}

impl fmt::Display for SplittingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingClass::Proper => "proper",
            SplittingClass::GRegular => "G-regular",
            SplittingClass::GWeakRegular => "G-weak-regular",
        })
    }
}

/// Set of classes a splitting belongs to.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Classes(BTreeSet<SplittingClass>);

impl Classes {
    pub fn contains(&self, class: SplittingClass) -> bool {
        self.0.contains(&class)
    }

    pub fn iter(&self) -> impl Iterator<Item = SplittingClass> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<SplittingClass> for Classes {
    fn from_iter<I: IntoIterator<Item = SplittingClass>>(iter: I) -> Self {
        Classes(iter.into_iter().collect())
    }
}

impl fmt::Display for Classes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.iter().map(|c| c.to_string()).collect();
        f.write_str(&names.join(", "))
    }
}

/// A validated proper splitting. `V` is always derived as `U - A`.
#[derive(Clone, Debug)]
pub struct Splitting {
    a: Matrix,
    u: Matrix,
    v: Matrix,
    u_ginv: Matrix,
    classes: Classes,
}

impl Splitting {
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn u_ginv(&self) -> &Matrix {
        &self.u_ginv
    }

    pub fn classes(&self) -> &Classes {
        &self.classes
    }

    pub fn is(&self, class: SplittingClass) -> bool {
        self.classes.contains(class)
    }

    pub fn order(&self) -> usize {
        self.a.rows()
    }

    /// `U# V`.
    pub fn iteration_matrix(&self) -> Matrix {
        &self.u_ginv * &self.v
    }

    /// Spectral radius of `U# V`.
    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius(&self.iteration_matrix())
    }
}

/// Validates `A = U - V` as a proper splitting and classifies it.
pub fn make_splitting(a: &Matrix, u: &Matrix, tol: &Tolerances) -> Result<Splitting> {
    a.ensure_square()?;
    a.ensure_same_shape(u, "splitting")?;
    let range_gap = subspace_gap(a, u, Subspace::Range, tol)?;
    let null_gap = subspace_gap(a, u, Subspace::Null, tol)?;
    if range_gap >= tol.subspace_tol || null_gap >= tol.subspace_tol {
        return Err(Error::NotProper { range_gap, null_gap });
    }
    let u_ginv = group_inverse(u, tol)?.ginv;
    let v = u - a;
    let classes = classify_parts(&u_ginv, &v, tol);
    Ok(Splitting { a: a.clone(), u: u.clone(), v, u_ginv, classes })
}

fn classify_parts(u_ginv: &Matrix, v: &Matrix, tol: &Tolerances) -> Classes {
    let mut classes = vec![SplittingClass::Proper];
    if is_nonneg(u_ginv, tol) {
        if is_nonneg(v, tol) {
            classes.push(SplittingClass::GRegular);
        }
        if is_nonneg(&(u_ginv * v), tol) {
            classes.push(SplittingClass::GWeakRegular);
        }
    }
    classes.into_iter().collect()
}

/// Recomputes the class set of a splitting under the given tolerances.
pub fn classify(s: &Splitting, tol: &Tolerances) -> Classes {
    classify_parts(&s.u_ginv, &s.v, tol)
}

/// Nearest matrix (in the Frobenius norm) whose range lies in `R(A)` and
/// whose null space contains `N(A)`: `P_R(A) K P_R(A^t)`. Used to restore the
/// proper-splitting structure of matrices transcribed at reduced precision.
pub fn project_to_proper(a: &Matrix, k: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    a.ensure_square()?;
    a.ensure_same_shape(k, "projection target")?;
    let col = range_basis(a, tol);
    let row = range_basis(&a.transpose(), tol);
    Ok(&col * col.transpose() * k * &row * row.transpose())
}

/// Residuals of the identities every proper splitting of an index-one matrix
/// satisfies. Matrix residuals are relative to the reference side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// `|AA# - UU#|`
    pub range_projector: f64,
    /// `|A#A - U#U|`
    pub null_projector: f64,
    /// `|A - U(I - U#V)|`
    pub right_factor: f64,
    /// `|A - (I - VU#)U|`
    pub left_factor: f64,
    /// Smallest singular value of `I - U#V`.
    pub right_sigma_min: f64,
    /// Smallest singular value of `I - VU#`.
    pub left_sigma_min: f64,
    /// `|A# - (I - U#V)^-1 U#|`
    pub right_ginv: f64,
    /// `|A# - U#(I - VU#)^-1|`
    pub left_ginv: f64,
}

impl IdentityResiduals {
    pub fn max_residual(&self) -> f64 {
        [
            self.range_projector,
            self.null_projector,
            self.right_factor,
            self.left_factor,
            self.right_ginv,
            self.left_ginv,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn min_sigma(&self) -> f64 {
        self.right_sigma_min.min(self.left_sigma_min)
    }
}

pub fn verify_splitting_identities(s: &Splitting, tol: &Tolerances) -> Result<IdentityResiduals> {
    let n = s.order();
    let id = Matrix::identity(n);
    let (a, u, v, ug) = (&s.a, &s.u, &s.v, &s.u_ginv);
    let ag = group_inverse(a, tol)?.ginv;

    let aag = a * &ag;
    let aga = &ag * a;
    let right = &id - ug * v;
    let left = &id - v * ug;

    // (I - U#V)^-1 U#  and  U# (I - VU#)^-1 = ((I - VU#)^-t U#^t)^t
    let right_ginv = solve_square(&right, ug)?;
    let left_ginv = solve_square(&left.transpose(), &ug.transpose())?.transpose();

    Ok(IdentityResiduals {
        range_projector: relative_norm(&(&aag - u * ug), &aag),
        null_projector: relative_norm(&(&aga - ug * u), &aga),
        right_factor: relative_norm(&(a - u * &right), a),
        left_factor: relative_norm(&(a - &left * u), a),
        right_sigma_min: min_singular_value(&right),
        left_sigma_min: min_singular_value(&left),
        right_ginv: relative_norm(&(&ag - right_ginv), &ag),
        left_ginv: relative_norm(&(&ag - left_ginv), &ag),
    })
}

/// Parameters of the randomized G-weak regular splitting search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_attempts: usize,
    /// Half-open interval the nonzero perturbation entries are drawn from.
    pub core_entry_range: (f64, f64),
    /// Upper bound of the per-attempt perturbation scale.
    pub perturbation_scale: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { seed: 0, max_attempts: 10_000, core_entry_range: (0.0, 1.0), perturbation_scale: 0.5 }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        GenConfig { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.core_entry_range;
        if self.max_attempts == 0 {
            return Err(Error::InvalidArgument("max_attempts must be at least 1".into()));
        }
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "core_entry_range must be a nonnegative interval, got [{lo}, {hi})"
            )));
        }
        if !(self.perturbation_scale > 0.0 && self.perturbation_scale.is_finite()) {
            return Err(Error::InvalidArgument("perturbation_scale must be positive".into()));
        }
        Ok(())
    }
}

/// Random search for a proper G-weak regular splitting of `a`.
///
/// Candidates come from the family `{K : R(K) = R(A), N(K) = N(A)}` written
/// in the basis `Q` that puts `A` in the form `blockdiag(C, 0)`: each attempt
/// draws a sparse nonnegative `F`, takes `E` as the leading block of
/// `Q^-1 F Q` and sets `K = Q blockdiag(C (I - sE)^-1, 0) Q^-1`. With this
/// form `K#(K - A) = s P F P` for the spectral projector `P = AA#`, so the
/// filter `K# >= 0, K#(K - A) >= 0` is met whenever the perturbation is small
/// relative to `A#`.
pub fn generate_gweak(a: &Matrix, cfg: &GenConfig, tol: &Tolerances) -> Result<Splitting> {
    cfg.validate()?;
    let n = a.ensure_square()?;
    let gi = group_inverse(a, tol)?;
    let r = gi.core.rows();
    let q = &gi.change_basis;
    let q_inv = inverse(q)?;
    let core_inv = inverse(&gi.core)?;
    let (lo, hi) = cfg.core_entry_range;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    for _ in 0..cfg.max_attempts {
        let density: f64 = rng.random();
        let scale = cfg.perturbation_scale * (1.0 - rng.random::<f64>());
        let mut f = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j || rng.random::<f64>() < density {
                    f[i * n + j] = rng.random_range(lo..hi);
                }
            }
        }
        let f = Matrix::from_row_major(n, n, f)?;
        let e = (&q_inv * &f * q).top_left(r);
        let shifted = &Matrix::identity(r) - e.scale(scale);

        // cheap filter before full validation: K# = Q blockdiag((I - sE) C^-1, 0) Q^-1
        let k_ginv = q * Matrix::block_diag_zero(&(&shifted * &core_inv), n)? * &q_inv;
        let k_ginv_l = q * Matrix::block_diag_zero(&e.scale(scale), n)? * &q_inv;
        if !is_nonneg(&k_ginv, tol) || !is_nonneg(&k_ginv_l, tol) {
            continue;
        }
        let Ok(shifted_inv) = inverse(&shifted) else { continue };
        let k = q * Matrix::block_diag_zero(&(&gi.core * &shifted_inv), n)? * &q_inv;
        match make_splitting(a, &k, tol) {
            Ok(s) if s.is(SplittingClass::GWeakRegular) => return Ok(s),
            _ => continue,
        }
    }
    Err(Error::AttemptsExhausted { attempts: cfg.max_attempts })
}

/// Checks that the cached `U#` still satisfies the group-inverse axioms for `U`.
pub fn cached_inverse_residual(s: &Splitting) -> Result<f64> {
    Ok(verify_group_axioms(&s.u, &s.u_ginv)?.max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::relative_distance;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn ex31() -> (Matrix, Matrix) {
        (
            m(&[&[1.0, -1.0, 3.0], &[-1.0, 10.0, -3.0], &[3.0, -3.0, 9.0]]),
            m(&[&[2.0, -1.0, 6.0], &[-2.0, 10.0, -6.0], &[6.0, -3.0, 18.0]]),
        )
    }

    fn ex43() -> Matrix {
        m(&[&[9.0, -3.0, 6.0], &[-3.0, 5.0, -2.0], &[6.0, -2.0, 4.0]])
    }

    #[test]
    fn weak_but_not_regular() {
        let (a, u) = ex31();
        let s = make_splitting(&a, &u, &tol()).unwrap();
        assert!(s.is(SplittingClass::Proper));
        assert!(s.is(SplittingClass::GWeakRegular));
        assert!(!s.is(SplittingClass::GRegular));
        assert!(!is_nonneg(s.v(), &tol()));
        assert!(is_nonneg(&s.iteration_matrix(), &tol()));
        assert_eq!(s.classes().to_string(), "proper, G-weak-regular");
        assert_eq!(classify(&s, &tol()), *s.classes());
        assert!(cached_inverse_residual(&s).unwrap() < 1e-12);
    }

    #[test]
    fn trivial_splitting_has_zero_remainder() {
        let a = ex43();
        let s = make_splitting(&a, &a, &tol()).unwrap();
        assert_eq!(s.v().max_abs(), 0.0);
        // A# >= 0 here, so every class applies
        assert_eq!(s.classes().len(), 3);
        let r = verify_splitting_identities(&s, &tol()).unwrap();
        assert!(r.max_residual() < 1e-10, "{r:?}");

        let neg = -&a;
        let s = make_splitting(&neg, &neg, &tol()).unwrap();
        assert_eq!(s.classes().to_string(), "proper");
    }

    #[test]
    fn non_proper_pair_is_rejected() {
        let (a, _) = ex31();
        let err = make_splitting(&a, &Matrix::identity(3), &tol()).unwrap_err();
        assert!(matches!(err, Error::NotProper { .. }));
        let j = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(make_splitting(&j, &j, &tol()), Err(Error::NotIndexOne { index: 2 })));
    }

    #[test]
    fn classes_of_nonmonotone_example() {
        let a = m(&[&[-1.0, 0.0, -3.0], &[0.0, 1.0, 2.0], &[0.0, 2.0, 4.0]]);
        let k = m(&[&[-2.0, 0.0, -6.0], &[0.0, 1.0, 2.0], &[0.0, 2.0, 4.0]]);
        let s = make_splitting(&a, &k, &tol()).unwrap();
        assert_eq!(s.classes().iter().collect::<Vec<_>>(), vec![SplittingClass::Proper]);
        let printed = m(&[&[-0.5, 0.36, -0.78], &[0.0, 0.04, 0.08], &[0.0, 0.08, 0.16]]);
        assert!((s.u_ginv() - &printed).max_abs() < 1e-3);
    }

    #[test]
    fn regular_example_with_nonnegative_remainder() {
        let a = m(&[&[3.0, 1.0, 2.0], &[1.0, -12.0, 13.0], &[2.0, 13.0, -11.0]]);
        let u = m(&[&[5.0, 2.0, 3.0], &[2.0, -12.0, 14.0], &[3.0, 14.0, -11.0]]);
        let s = make_splitting(&a, &u, &tol()).unwrap();
        assert_eq!(s.classes().len(), 3);
        assert!((s.spectral_radius().unwrap() - 0.3983).abs() < 1e-3);
        let r = verify_splitting_identities(&s, &tol()).unwrap();
        assert!(r.max_residual() < 1e-8);
        assert!(r.min_sigma() > 1e-3);
    }

    #[test]
    fn identities_on_weak_example() {
        let (a, u) = ex31();
        let s = make_splitting(&a, &u, &tol()).unwrap();
        let r = verify_splitting_identities(&s, &tol()).unwrap();
        assert!(r.max_residual() < 1e-8, "{r:?}");
        assert!(r.min_sigma() > 1e-6);
    }

    #[test]
    fn projection_restores_rounded_partner() {
        let (a, u) = ex31();
        let rounded = &u + Matrix::scalar(3, 1e-4);
        assert!(make_splitting(&a, &rounded, &tol()).is_err());
        let fixed = project_to_proper(&a, &rounded, &tol()).unwrap();
        assert!(relative_distance(&fixed, &u) < 1e-4);
        assert!(make_splitting(&a, &fixed, &tol()).is_ok());
    }

    #[test]
    fn generation_on_identity() {
        let s = generate_gweak(&Matrix::identity(3), &GenConfig::with_seed(7), &tol()).unwrap();
        assert!(s.is(SplittingClass::GWeakRegular));
        // U^-1 >= 0 and U^-1 V >= 0 force a diagonal U for A = I
        let u = s.u();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(u.get(i, j).abs() < 1e-12);
                }
            }
            assert!(u.get(i, i) >= 1.0);
        }
    }

    #[test]
    fn generation_on_group_monotone_example() {
        let a = ex43();
        let cfg = GenConfig::with_seed(3);
        let s = generate_gweak(&a, &cfg, &tol()).unwrap();
        let again = make_splitting(&a, s.u(), &tol()).unwrap();
        assert!(classify(&again, &tol()).contains(SplittingClass::GWeakRegular));
        assert!(s.spectral_radius().unwrap() < 1.0);
        let twin = generate_gweak(&a, &cfg, &tol()).unwrap();
        assert_eq!(twin.u(), s.u());
    }

    #[test]
    fn generation_on_mixed_sign_example() {
        let a = m(&[&[3.0, -1.0, -9.0], &[-5.0, -5.0, -12.0], &[-18.0, -14.0, -27.0]]);
        let cfg = GenConfig { max_attempts: 500, ..GenConfig::with_seed(11) };
        match generate_gweak(&a, &cfg, &tol()) {
            Ok(s) => {
                assert!(classify(&s, &tol()).contains(SplittingClass::GWeakRegular));
                // A# is not nonnegative, so a G-weak regular splitting cannot converge
                assert!(s.spectral_radius().unwrap() >= 1.0 - 1e-9);
            }
            Err(e) => assert_eq!(e, Error::AttemptsExhausted { attempts: 500 }),
        }
    }

    #[test]
    fn config_validation() {
        assert!(GenConfig { max_attempts: 0, ..GenConfig::default() }.validate().is_err());
        assert!(GenConfig { core_entry_range: (-1.0, 1.0), ..GenConfig::default() }.validate().is_err());
        assert!(GenConfig { perturbation_scale: 0.0, ..GenConfig::default() }.validate().is_err());
    }
}
