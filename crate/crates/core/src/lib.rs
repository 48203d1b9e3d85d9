//! Alternating iterations built from proper splittings for singular systems
//! `Ax = b` of index one, solved through the group inverse `A#`.

pub mod alternating;
pub mod analysis;
pub mod error;
pub mod ginv;
pub mod instance;
pub mod linalg;
pub mod splitting;

pub use error::{Error, Result};
pub use ginv::{group_inverse, is_ep, matrix_index, verify_group_axioms, AxiomResiduals, GroupInverse};
pub use linalg::{Matrix, Subspace, Tolerances};
pub use splitting::{
    classify, generate_gweak, make_splitting, project_to_proper, verify_splitting_identities,
    Classes, GenConfig, IdentityResiduals, Splitting, SplittingClass,
};
pub use alternating::{
    constant_term, fixed_point, induced_splitting, induced_splitting_report, iterate,
    iteration_matrix, InducedSplittingReport, IterationConfig, IterationTrace, Scheme,
};
pub use analysis::{
    build_scalar_preconditioner, check_alternating_comparison, check_preconditioned_comparison,
    compare_splittings, nearest_commuting, validate_preconditioner, ComparisonReport, Hypothesis,
    Preconditioner, PreconditionerReport,
};
