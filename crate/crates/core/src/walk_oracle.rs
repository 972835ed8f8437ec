//! Seeded Monte Carlo simulation of the walks, used as an independent check
//! on exact transition probabilities.
//!
//! Trajectory `t` draws from ChaCha8 seeded with `seed` on stream `t`, so
//! every trajectory is replayable on its own and the result does not depend
//! on how rayon schedules them. Counts are summed as integers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::PSeq;
use crate::seqspace::Lattice;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub lattice: Lattice,
    pub pseq: PSeq,
    pub seed: u64,
    pub samples: u64,
}

impl WalkConfig {
    pub fn new(lattice: Lattice, pseq: PSeq, seed: u64, samples: u64) -> Result<WalkConfig> {
        pseq.validate()?;
        if samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        Ok(WalkConfig {
            lattice,
            pseq,
            seed,
            samples,
        })
    }

    fn rng(&self, trajectory: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trajectory);
        rng
    }

    fn step(&self, state: i64, rng: &mut ChaCha8Rng) -> i64 {
        let p = self.pseq.at(state);
        let up = rng.random::<f64>() < p;
        match (self.lattice, state, up) {
            (_, s, true) => s + 1,
            (Lattice::HalfLine, 0, false) => 0,
            (_, s, false) => s - 1,
        }
    }

    fn check_state(&self, i: i64) -> Result<()> {
        if self.lattice == Lattice::HalfLine && i < 0 {
            Err(Error::NegativeIndex(i))
        } else {
            Ok(())
        }
    }
}

/// Empirical transition frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Fraction of trajectories started at `i` that sit at `j` after `n` steps.
pub fn estimate_transition(cfg: &WalkConfig, n: usize, i: i64, j: i64) -> Result<TransitionEstimate> {
    cfg.check_state(i)?;
    cfg.check_state(j)?;
    let hits: u64 = (0..cfg.samples)
        .into_par_iter()
        .map(|t| {
            let mut rng = cfg.rng(t);
            let mut s = i;
            for _ in 0..n {
                s = cfg.step(s, &mut rng);
            }
            u64::from(s == j)
        })
        .sum();
    let m = cfg.samples as f64;
    let estimate = hits as f64 / m;
    Ok(TransitionEstimate {
        estimate,
        stderr: (estimate * (1.0 - estimate) / m).sqrt(),
        samples: cfg.samples,
        seed: cfg.seed,
    })
}

/// Mean number of visits to `i` at times `1..=n`, for every `n <= horizon`.
pub fn return_mass_trace(cfg: &WalkConfig, horizon: usize, i: i64) -> Result<Vec<f64>> {
    cfg.check_state(i)?;
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let counts = (0..cfg.samples)
        .into_par_iter()
        .fold(
            || vec![0u64; horizon],
            |mut acc, t| {
                let mut rng = cfg.rng(t);
                let mut s = i;
                for slot in acc.iter_mut() {
                    s = cfg.step(s, &mut rng);
                    if s == i {
                        *slot += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; horizon],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let m = cfg.samples as f64;
    let mut total = 0u64;
    Ok(counts
        .into_iter()
        .map(|c| {
            total += c;
            total as f64 / m
        })
        .collect())
}

/// Estimate of `sum_{n=1}^{horizon} A^n_{i,i}`.
pub fn estimate_return_mass(cfg: &WalkConfig, horizon: usize, i: i64) -> Result<f64> {
    Ok(*return_mass_trace(cfg, horizon, i)?.last().unwrap())
}
