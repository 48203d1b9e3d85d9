use std::path::PathBuf;
use std::process::ExitCode;

use altsplit_cli::bench::BenchConfig;
use altsplit_cli::commands::{self, CliError, CliResult, SolveOptions};
use clap::{Parser, Subcommand};

/// Alternating iterations for singular systems of index one.
///
/// Default tolerances can be overridden with ALTSPLIT_RANK_REL,
/// ALTSPLIT_SUBSPACE_TOL, ALTSPLIT_NONNEG_TOL, ALTSPLIT_MAT_EQ_TOL and
/// ALTSPLIT_REFERENCE_TOL.
#[derive(Parser)]
#[command(name = "altsplit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group inverse, index and axiom residuals of a matrix.
    Ginv { path: PathBuf },
    /// Classes of the splitting A = U - (U - A).
    Classify {
        /// Fixture whose splittings to classify, instead of paths.
        #[arg(long, conflicts_with_all = ["a", "u"])]
        fixture: Option<String>,
        #[arg(required_unless_present = "fixture")]
        a: Option<PathBuf>,
        #[arg(required_unless_present = "fixture")]
        u: Option<PathBuf>,
        /// Project U onto the proper partners of A first.
        #[arg(long)]
        project: bool,
    },
    /// Run an alternating scheme and report iterations, time and error.
    Solve {
        /// Fixture to run, instead of paths.
        #[arg(long, conflicts_with = "paths")]
        fixture: Option<String>,
        /// A, b and one to three splitting partners in application order.
        #[arg(required_unless_present = "fixture", num_args = 3..=5)]
        paths: Vec<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        steps: Option<u8>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        /// Initial iterate (default zero).
        #[arg(long)]
        x0: Option<PathBuf>,
        /// Commuting preconditioner Q; partners then split QA. Without a
        /// value, uses the fixture's Q.
        #[arg(long, num_args = 0..=1)]
        precondition: Option<Option<PathBuf>>,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Project partners (and Q) onto the admissible family first.
        #[arg(long)]
        project: bool,
    },
    /// Check comparison statements: a fixture id, A U1 U2, or A K U X.
    Compare {
        #[arg(required = true, num_args = 1..=4)]
        targets: Vec<String>,
        #[arg(long)]
        project: bool,
    },
    /// Randomized runs of one-, two- and three-step schemes, as CSV.
    Bench {
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        nullity: usize,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        /// CSV destination (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the worked examples, export their inputs, or recheck them.
    Fixtures {
        /// Write <id>_<name>.mtx files into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Recompute every reference value.
        #[arg(long, conflicts_with = "export")]
        check: bool,
    },
}

fn dispatch(cmd: Command) -> CliResult<String> {
    let tol = commands::tolerances_from_env()?;
    match cmd {
        Command::Ginv { path } => commands::ginv(&path, &tol),
        Command::Classify { fixture: Some(id), .. } => commands::classify_fixture(&id, &tol),
        Command::Classify { a, u, project, .. } => commands::classify_paths(
            a.as_deref().expect("required by clap"),
            u.as_deref().expect("required by clap"),
            project,
            &tol,
        ),
        Command::Solve { fixture, paths, steps, eps, max_iter, x0, precondition, csv, project } => {
            let opts = SolveOptions { steps: steps.map(usize::from), eps, max_iter, x0, precondition, project };
            let runs = match fixture {
                Some(id) => commands::solve_fixture_runs(&id, &opts, &tol)?,
                None => commands::solve_path_runs(&paths, &opts, &tol)?,
            };
            commands::render_runs(&runs, csv.as_deref())
        }
        Command::Compare { targets, project } => {
            if targets.len() == 1 {
                commands::compare_fixture(&targets[0], &tol)
            } else {
                let paths: Vec<PathBuf> = targets.into_iter().map(PathBuf::from).collect();
                commands::compare_paths(&paths, project, &tol)
            }
        }
        Command::Bench { n, seed, trials, nullity, eps, max_iter, out } => {
            let mut cfg = BenchConfig { nullity, ..BenchConfig::new(n, seed, trials) };
            if let Some(eps) = eps {
                cfg.iteration.eps = eps;
            }
            if let Some(m) = max_iter {
                cfg.iteration.max_iter = m;
            }
            commands::bench(&cfg, out.as_deref(), &tol)
        }
        Command::Fixtures { export: Some(dir), .. } => commands::export_fixtures(&dir),
        Command::Fixtures { check: true, .. } => commands::check_fixtures(&tol),
        Command::Fixtures { .. } => Ok(commands::list_fixtures()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &CliError) -> u8 {
    e.exit_code() as u8
}
