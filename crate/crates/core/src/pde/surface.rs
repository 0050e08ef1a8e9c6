//! Volatility sweeps: one full price lattice per sigma, exported as CSV.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{solve_grid, GridSpec, PriceGrid};
use crate::contracts::OptionContract;
use crate::error::{PricingError, Result};

/// Seeded sigma draws are uniform on this interval.
pub const SWEEP_SIGMA_RANGE: (f64, f64) = (0.05, 0.95);

#[derive(Debug, Clone, PartialEq)]
pub enum SigmaSource {
    Explicit(Vec<f64>),
    /// `count` uniform draws from a ChaCha8 stream seeded with `seed`.
    Seeded {
        seed: u64,
        count: usize,
    },
}

impl SigmaSource {
    pub fn sigmas(&self) -> Vec<f64> {
        match self {
            SigmaSource::Explicit(v) => v.clone(),
            SigmaSource::Seeded { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let (lo, hi) = SWEEP_SIGMA_RANGE;
                (0..*count).map(|_| rng.random_range(lo..hi)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSweepSpec {
    pub source: SigmaSource,
    pub grid: GridSpec,
}

impl SigmaSweepSpec {
    /// Ten space intervals and 29 time steps; s_max follows the contract.
    pub fn new(source: SigmaSource) -> Self {
        SigmaSweepSpec {
            source,
            grid: GridSpec::new(10, 29),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceOutcome {
    pub sigma: f64,
    pub grid: Result<PriceGrid>,
}

/// Solves one lattice per sigma, in input order. Failures are kept per sigma.
pub fn sigma_surface(c_base: &OptionContract, sweep: &SigmaSweepSpec) -> Vec<SurfaceOutcome> {
    sweep
        .source
        .sigmas()
        .into_par_iter()
        .map(|sigma| {
            let grid = if sigma.is_finite() && sigma > 0.0 {
                solve_grid(&c_base.with_sigma(sigma), &sweep.grid)
            } else {
                Err(PricingError::domain("sigma", format!("must be > 0, got {sigma}")))
            };
            SurfaceOutcome { sigma, grid }
        })
        .collect()
}

pub fn surface_file_name(sigma: f64) -> String {
    format!("surface_sigma={sigma}.csv")
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header `t,S_0,…,S_M`, then one row `τ_j,U[0][j],…,U[M][j]` per level.
pub fn write_surface_csv(grid: &PriceGrid, mut out: impl Write) -> io::Result<()> {
    let mut line = String::from("t");
    for &s in grid.s_nodes() {
        line.push(',');
        line.push_str(&fmt17(s));
    }
    writeln!(out, "{line}")?;
    for (j, &tau) in grid.t_nodes().iter().enumerate() {
        line.clear();
        line.push_str(&fmt17(tau));
        for &v in grid.level(j) {
            line.push(',');
            line.push_str(&fmt17(v));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
