//! Subcommand bodies. Each returns the text to print; `main` only parses
//! arguments and maps errors to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use altsplit::linalg::spectral_radius;
use altsplit::{
    check_alternating_comparison, check_preconditioned_comparison, classify, compare_splittings,
    group_inverse, induced_splitting, iterate, iteration_matrix, make_splitting, nearest_commuting,
    project_to_proper, verify_group_axioms, verify_splitting_identities, Error, IterationConfig,
    Matrix, Preconditioner, Scheme, Splitting, Tolerances,
};
use thiserror::Error;

use crate::bench::{self, BenchConfig};
use crate::fixtures::{self, Fixture, Resolved};
use crate::mtx::{load_matrix, save_matrix, MtxError};
use crate::report::{self, RunReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Mtx(#[from] MtxError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Math(#[from] Error),
    #[error("{failed} of {total} reference checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    /// 1 usage or input error, 2 mathematical precondition failure,
    /// 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(e) if e.is_precondition_failure() => 2,
            CliError::Math(e) if e.is_numeric_failure() => 3,
            CliError::ChecksFailed { .. } => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Environment variables overriding the default tolerances, one per field.
pub const TOLERANCE_VARS: [&str; 5] = [
    "ALTSPLIT_RANK_REL",
    "ALTSPLIT_SUBSPACE_TOL",
    "ALTSPLIT_NONNEG_TOL",
    "ALTSPLIT_MAT_EQ_TOL",
    "ALTSPLIT_REFERENCE_TOL",
];

pub fn tolerances_from_env() -> CliResult<Tolerances> {
    tolerances_from(|var| std::env::var(var).ok())
}

pub fn tolerances_from(lookup: impl Fn(&str) -> Option<String>) -> CliResult<Tolerances> {
    let mut t = Tolerances::default();
    let fields = [&mut t.rank_rel, &mut t.subspace_tol, &mut t.nonneg_tol, &mut t.mat_eq_tol, &mut t.reference_tol];
    for (var, field) in TOLERANCE_VARS.iter().zip(fields) {
        if let Some(raw) = lookup(var) {
            *field = raw.trim().parse().map_err(|_| usage(format!("{var}: not a number: '{raw}'")))?;
        }
    }
    t.validate().map_err(|e| usage(e.to_string()))?;
    Ok(t)
}

fn fixture(id: &str) -> CliResult<Fixture> {
    fixtures::get(id)
        .ok_or_else(|| usage(format!("unknown fixture '{id}' (known: {})", fixtures::ids().join(", "))))
}

fn load_column(path: &Path, n: usize) -> CliResult<Matrix> {
    let v = load_matrix(path)?;
    if v.shape() != (n, 1) {
        return Err(usage(format!("{}: expected a {n}x1 vector, got {}x{}", path.display(), v.rows(), v.cols())));
    }
    Ok(v)
}

fn load_partner(a: &Matrix, path: &Path, project: bool, tol: &Tolerances) -> CliResult<Splitting> {
    let u = load_matrix(path)?;
    let u = if project { project_to_proper(a, &u, tol)? } else { u };
    Ok(make_splitting(a, &u, tol)?)
}

fn steps_label(steps: usize) -> &'static str {
    match steps {
        1 => "one-step",
        2 => "two-step",
        _ => "three-step",
    }
}

pub fn ginv(path: &Path, tol: &Tolerances) -> CliResult<String> {
    let a = load_matrix(path)?;
    let g = group_inverse(&a, tol)?;
    let r = verify_group_axioms(&a, &g.ginv)?;
    Ok(format!(
        "index: {}\nA# =\n{}axiom residuals: AXA=A {:.2e}, XAX=X {:.2e}, AX=XA {:.2e}\n",
        g.index, g.ginv, r.reproduce, r.reflexive, r.commute
    ))
}

fn describe_splitting(out: &mut String, name: &str, s: &Splitting, tol: &Tolerances) -> CliResult<()> {
    let r = verify_splitting_identities(s, tol)?;
    writeln!(out, "{name}: {}", classify(s, tol)).unwrap();
    writeln!(
        out,
        "  projectors {:.2e} {:.2e}, factorizations {:.2e} {:.2e}, inverses {:.2e} {:.2e}, min singular value {:.4}",
        r.range_projector,
        r.null_projector,
        r.right_factor,
        r.left_factor,
        r.right_ginv,
        r.left_ginv,
        r.min_sigma()
    )
    .unwrap();
    Ok(())
}

pub fn classify_paths(a: &Path, u: &Path, project: bool, tol: &Tolerances) -> CliResult<String> {
    let a = load_matrix(a)?;
    let s = load_partner(&a, u, project, tol)?;
    let mut out = String::new();
    describe_splitting(&mut out, "classes", &s, tol)?;
    Ok(out)
}

pub fn classify_fixture(id: &str, tol: &Tolerances) -> CliResult<String> {
    let f = fixture(id)?;
    let r = f.resolve(tol)?;
    let mut out = String::new();
    let named = f.partners.iter().zip(&r.splittings).chain(f.q_partners.iter().zip(&r.q_splittings));
    for (p, s) in named {
        describe_splitting(&mut out, p.name, s, tol)?;
    }
    Ok(out)
}

/// Options shared by both forms of `solve`.
#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub steps: Option<usize>,
    pub eps: Option<f64>,
    pub max_iter: Option<usize>,
    pub x0: Option<PathBuf>,
    /// `Some(None)`: use the fixture's preconditioner.
    pub precondition: Option<Option<PathBuf>>,
    pub project: bool,
}

impl SolveOptions {
    fn config(&self, n: usize) -> CliResult<IterationConfig> {
        let mut cfg = IterationConfig::default();
        if let Some(eps) = self.eps {
            cfg.eps = eps;
        }
        if let Some(m) = self.max_iter {
            cfg.max_iter = m;
        }
        if let Some(p) = &self.x0 {
            cfg.x0 = Some(load_column(p, n)?);
        }
        cfg.validate(n).map_err(|e| usage(e.to_string()))?;
        Ok(cfg)
    }

    fn check_steps(&self) -> CliResult<()> {
        match self.steps {
            Some(s) if !(1..=3).contains(&s) => Err(usage(format!("--steps must be 1, 2 or 3, got {s}"))),
            _ => Ok(()),
        }
    }
}

fn run(label: String, scheme: &Scheme, b: &Matrix, exact: &Matrix, cfg: &IterationConfig) -> CliResult<RunReport> {
    let trace = iterate(scheme, b, cfg)?;
    Ok(RunReport::from_trace(label, &trace, exact))
}

/// Every scheme of a fixture plus one-step runs on each partner not already
/// covered, filtered by `--steps` and `--precondition`.
pub fn solve_fixture_runs(id: &str, opts: &SolveOptions, tol: &Tolerances) -> CliResult<Vec<RunReport>> {
    opts.check_steps()?;
    let f = fixture(id)?;
    let only_pre = match &opts.precondition {
        None => false,
        Some(None) if f.q.is_some() => true,
        Some(None) => return Err(usage(format!("{id} has no preconditioner"))),
        Some(Some(_)) => return Err(usage("--precondition takes no path with --fixture")),
    };
    let r = f.resolve(tol)?;
    let b = f.rhs();
    let exact = group_inverse(&f.a, tol)?.ginv * &b;
    let cfg = opts.config(f.a.rows())?;
    let wanted = |steps: usize, pre: bool| opts.steps.is_none_or(|s| s == steps) && (!only_pre || pre);

    let mut reports = Vec::new();
    for spec in &f.schemes {
        if wanted(spec.order.len(), spec.preconditioned) {
            reports.push(run(spec.label.to_string(), &r.build(spec)?, &b, &exact, &cfg)?);
        }
    }
    for (pre, partners) in [(false, &f.partners), (true, &f.q_partners)] {
        if !wanted(1, pre) {
            continue;
        }
        for (i, p) in partners.iter().enumerate() {
            let covered = f.schemes.iter().any(|s| s.preconditioned == pre && s.order == [i]);
            if !covered {
                let spec = fixtures::SchemeSpec { label: "", order: vec![i], preconditioned: pre };
                reports.push(run(format!("one-step {}", p.name), &r.build(&spec)?, &b, &exact, &cfg)?);
            }
        }
    }
    Ok(reports)
}

/// `paths` holds `A`, `b` and one to three partners in application order.
pub fn solve_path_runs(paths: &[PathBuf], opts: &SolveOptions, tol: &Tolerances) -> CliResult<Vec<RunReport>> {
    opts.check_steps()?;
    if !(3..=5).contains(&paths.len()) {
        return Err(usage("solve expects A, b and one to three splitting partners"));
    }
    let a = load_matrix(&paths[0])?;
    let n = a.ensure_square()?;
    let b = load_column(&paths[1], n)?;
    let partners = &paths[2..];
    let steps = opts.steps.unwrap_or(partners.len());
    if steps > partners.len() {
        return Err(usage(format!("--steps {steps} needs {steps} partners, got {}", partners.len())));
    }
    let pre = match &opts.precondition {
        None => None,
        Some(None) => return Err(usage("--precondition needs a path unless --fixture is given")),
        Some(Some(p)) => {
            let q = load_matrix(p)?;
            let q = if opts.project { nearest_commuting(&a, &q, tol)? } else { q };
            Some(Preconditioner::new(&a, &q, tol)?)
        }
    };
    let system = pre.as_ref().map_or(&a, |p| p.system()).clone();
    let splittings = partners[..steps]
        .iter()
        .map(|p| load_partner(&system, p, opts.project, tol))
        .collect::<CliResult<Vec<_>>>()?;
    let scheme = match pre {
        Some(p) => Scheme::preconditioned(p, splittings)?,
        None => Scheme::new(splittings)?,
    };
    let exact = group_inverse(&a, tol)?.ginv * &b;
    let cfg = opts.config(n)?;
    Ok(vec![run(steps_label(steps).to_string(), &scheme, &b, &exact, &cfg)?])
}

/// Table of the runs; also written as CSV when `csv` is given.
pub fn render_runs(reports: &[RunReport], csv: Option<&Path>) -> CliResult<String> {
    if let Some(path) = csv {
        let file = fs::File::create(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        report::write_report_csv(file, reports)?;
    }
    Ok(report::table(reports))
}

fn ordering_line(values: &[f64], tol: &Tolerances) -> String {
    let ok = values.windows(2).all(|w| w[0] <= w[1] + tol.reference_tol);
    let chain: Vec<String> = values.iter().map(|v| format!("{v:.4}")).collect();
    format!("ordering: {} {}\n", chain.join(" ≤ "), if ok { "✓" } else { "✗" })
}

fn compare_resolved(r: &Resolved<'_>, tol: &Tolerances) -> CliResult<String> {
    let f = r.fixture;
    let mut out = format!("{}: {}\n", f.id, f.summary);
    let mut any = false;

    for spec in f.schemes.iter().filter(|s| s.order.len() > 1) {
        let scheme = r.build(spec)?;
        writeln!(out, "{} scheme:\n{}", spec.label, check_alternating_comparison(&scheme, tol)?).unwrap();
        any = true;
        if spec.order.len() == 3 {
            match induced_splitting(&scheme, tol) {
                Ok(induced) => {
                    for (&i, p) in spec.order.iter().zip(spec.order.iter().map(|&i| &f.partners[i])) {
                        let report = compare_splittings(&induced, &r.splittings[i], tol)?;
                        writeln!(out, "induced splitting against {}:\n{report}", p.name).unwrap();
                    }
                }
                Err(e) if e.is_precondition_failure() => writeln!(out, "induced splitting: {e}").unwrap(),
                Err(e) => return Err(e.into()),
            }
        }
    }

    if let (Some(pre), Some(k), Some(kq)) = (&r.preconditioner, r.splitting("K"), r.splitting("Kq")) {
        let report = check_preconditioned_comparison(&f.a, k, pre.q(), kq, tol)?;
        writeln!(out, "preconditioned against plain:\n{report}").unwrap();
        out.push_str(&ordering_line(&[report.lhs, report.rhs], tol));
        any = true;
    }

    let mut plain: Vec<_> = f.schemes.iter().filter(|s| !s.preconditioned).collect();
    if plain.len() > 1 {
        plain.sort_by_key(|x| std::cmp::Reverse(x.order.len()));
        let radii = plain
            .iter()
            .map(|s| Ok(spectral_radius(&iteration_matrix(&r.build(s)?))?))
            .collect::<CliResult<Vec<_>>>()?;
        let labels: Vec<&str> = plain.iter().map(|s| s.label).collect();
        writeln!(out, "schemes: {}", labels.join(", ")).unwrap();
        out.push_str(&ordering_line(&radii, tol));
        any = true;
    }

    if !any {
        return Err(usage(format!("{} has nothing to compare", f.id)));
    }
    Ok(out)
}

pub fn compare_fixture(id: &str, tol: &Tolerances) -> CliResult<String> {
    let f = fixture(id)?;
    compare_resolved(&f.resolve(tol)?, tol)
}

/// `A U1 U2` compares two splittings; `A K U X` compares the three-step
/// scheme with its parts.
pub fn compare_paths(paths: &[PathBuf], project: bool, tol: &Tolerances) -> CliResult<String> {
    if !(3..=4).contains(&paths.len()) {
        return Err(usage("compare expects a fixture id, A U1 U2, or A K U X"));
    }
    let a = load_matrix(&paths[0])?;
    let parts =
        paths[1..].iter().map(|p| load_partner(&a, p, project, tol)).collect::<CliResult<Vec<_>>>()?;
    let report = if parts.len() == 2 {
        compare_splittings(&parts[0], &parts[1], tol)?
    } else {
        check_alternating_comparison(&Scheme::new(parts)?, tol)?
    };
    Ok(format!("{report}\n"))
}

pub fn bench(cfg: &BenchConfig, out: Option<&Path>, tol: &Tolerances) -> CliResult<String> {
    let rows = bench::run(cfg, tol).map_err(|e| match e {
        Error::InvalidArgument(m) => usage(m),
        other => other.into(),
    })?;
    match out {
        Some(path) => {
            let file =
                fs::File::create(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            report::write_bench_csv(file, &rows)?;
            Ok(format!("wrote {} rows to {}\n", rows.len(), path.display()))
        }
        None => {
            let mut buf = Vec::new();
            report::write_bench_csv(&mut buf, &rows)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
    }
}

pub fn list_fixtures() -> String {
    fixtures::all().iter().map(|f| format!("{:<6}  {}\n", f.id, f.summary)).collect()
}

/// Writes `<id>_<name>.mtx` for every input matrix of every fixture.
pub fn export_fixtures(dir: &Path) -> CliResult<String> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    let mut count = 0;
    for f in fixtures::all() {
        let mut files: Vec<(&str, Matrix)> = vec![("A", f.a.clone()), ("b", f.rhs())];
        files.extend(f.partners.iter().chain(&f.q_partners).map(|p| (p.name, p.matrix.clone())));
        if let Some(q) = &f.q {
            files.push(("Q", q.clone()));
        }
        for (name, m) in files {
            save_matrix(&dir.join(format!("{}_{name}.mtx", f.id)), &m)?;
            count += 1;
        }
    }
    Ok(format!("wrote {count} files to {}\n", dir.display()))
}

/// Recomputes every reference value; fails when any deviates beyond its
/// tolerance.
pub fn check_fixtures(tol: &Tolerances) -> CliResult<String> {
    let mut out = String::new();
    let (mut failed, mut total) = (0, 0);
    for f in fixtures::all() {
        for c in f.resolve(tol)?.checks(tol)? {
            total += 1;
            if !c.passed() {
                failed += 1;
            }
            writeln!(
                out,
                "{:<6} {:<22} expected {:<15} computed {:<22} {}",
                f.id,
                c.label,
                c.expected,
                c.computed,
                if c.passed() { "ok" } else { "FAIL" }
            )
            .unwrap();
        }
    }
    if failed > 0 {
        eprint!("{out}");
        return Err(CliError::ChecksFailed { failed, total });
    }
    writeln!(out, "{total} reference checks passed").unwrap();
    Ok(out)
}
