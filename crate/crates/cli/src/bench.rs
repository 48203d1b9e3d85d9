//! Randomized benchmark: one-, two- and three-step schemes built from
//! G-regular splittings of random group-monotone matrices.

use altsplit::instance::group_monotone;
use altsplit::{iterate, make_splitting, Error, IterationConfig, Matrix, Result, Scheme, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{BenchRow, RunReport};

/// Scheme labels and the number of leading partners each one uses.
pub const SCHEMES: [(&str, usize); 3] = [("one-step", 1), ("two-step", 2), ("three-step", 3)];

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    /// Dimension of the null space of each instance.
    pub nullity: usize,
    pub iteration: IterationConfig,
}

impl BenchConfig {
    pub fn new(n: usize, seed: u64, trials: usize) -> Self {
        BenchConfig { n, seed, trials, nullity: 1, iteration: IterationConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!("order must be at least 2, got {}", self.n)));
        }
        if self.nullity >= self.n {
            return Err(Error::InvalidArgument(format!(
                "nullity {} leaves no core for order {}",
                self.nullity, self.n
            )));
        }
        self.iteration.validate(self.n)
    }
}

/// Rows for one instance; the trial is fully determined by `seed`.
pub fn run_trial(cfg: &BenchConfig, seed: u64, tol: &Tolerances) -> Result<Vec<BenchRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = group_monotone(cfg.n, cfg.nullity, &mut rng)?;
    let splittings = (0..3)
        .map(|_| make_splitting(inst.a(), &inst.regular_partner(&mut rng)?, tol))
        .collect::<Result<Vec<_>>>()?;
    let b = Matrix::from_row_major(cfg.n, 1, (0..cfg.n).map(|_| rng.random_range(-1.0..1.0)).collect())?;
    let exact = inst.ginv() * &b;

    SCHEMES
        .iter()
        .map(|&(label, steps)| {
            let scheme = Scheme::new(splittings[..steps].to_vec())?;
            let trace = iterate(&scheme, &b, &cfg.iteration)?;
            Ok(BenchRow { n: cfg.n, seed, report: RunReport::from_trace(label, &trace, &exact) })
        })
        .collect()
}

/// Trials run in parallel; trial `t` uses seed `seed + t`, and rows keep
/// trial order.
pub fn run(cfg: &BenchConfig, tol: &Tolerances) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let per_trial = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, cfg.seed.wrapping_add(t), tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}
