//! Run summaries as aligned tables and CSV.

use std::io::Write;

use altsplit::{IterationTrace, Matrix};

/// One solver run: iteration count, timing and accuracy.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub scheme_label: String,
    pub iterations: usize,
    pub elapsed_seconds: f64,
    /// `|x_final - A#b|_2`.
    pub final_error: f64,
    pub rho: f64,
    pub converged: bool,
}

impl RunReport {
    pub fn from_trace(label: impl Into<String>, trace: &IterationTrace, exact: &Matrix) -> Self {
        RunReport {
            scheme_label: label.into(),
            iterations: trace.iterations,
            elapsed_seconds: trace.elapsed_seconds,
            final_error: (&trace.x_final - exact).norm(),
            rho: trace.rho_h,
            converged: trace.converged,
        }
    }
}

pub fn table(reports: &[RunReport]) -> String {
    let width = reports.iter().map(|r| r.scheme_label.len()).max().unwrap_or(0).max(6);
    let mut out = format!(
        "{:<width$}  {:>8}  {:>6}  {:>10}  {:>12}  {:>9}\n",
        "scheme", "rho", "IT", "seconds", "error", "converged"
    );
    for r in reports {
        out.push_str(&format!(
            "{:<width$}  {:>8.4}  {:>6}  {:>10.2e}  {:>12.3e}  {:>9}\n",
            r.scheme_label,
            r.rho,
            r.iterations,
            r.elapsed_seconds,
            r.final_error,
            if r.converged { "yes" } else { "no" }
        ));
    }
    out
}

/// CSV columns of the benchmark; `elapsed_seconds` is the only
/// nondeterministic one.
pub const BENCH_COLUMNS: [&str; 8] =
    ["n", "seed", "scheme", "rho", "iterations", "elapsed_seconds", "final_error", "converged"];

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    pub report: RunReport,
}

pub fn write_bench_csv<W: Write>(out: W, rows: &[BenchRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_COLUMNS)?;
    for row in rows {
        let r = &row.report;
        w.write_record([
            row.n.to_string(),
            row.seed.to_string(),
            r.scheme_label.clone(),
            r.rho.to_string(),
            r.iterations.to_string(),
            r.elapsed_seconds.to_string(),
            r.final_error.to_string(),
            r.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report_csv<W: Write>(out: W, reports: &[RunReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&BENCH_COLUMNS[2..])?;
    for r in reports {
        w.write_record([
            r.scheme_label.clone(),
            r.rho.to_string(),
            r.iterations.to_string(),
            r.elapsed_seconds.to_string(),
            r.final_error.to_string(),
            r.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
