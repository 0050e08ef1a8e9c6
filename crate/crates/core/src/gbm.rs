//! Geometric Brownian motion paths and a risk-neutral Monte Carlo pricer.
//!
//! Paths use exact log-space stepping
//! `S_{k+1} = S_k·exp((μ − ½σ²)Δt + σ√Δt·φ_k)`. Each path draws its normals
//! from its own ChaCha8 stream: the generator is seeded with `seed` and
//! `set_stream(path_index)` selects the substream, so path `i` depends only
//! on `(seed, i)` and results do not depend on thread scheduling. Normals
//! come from `rand_distr::StandardNormal` (ziggurat).

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contracts::{validate_contract, OptionContract};
use crate::error::{PricingError, Result};
use crate::quote::{Diagnostics, Method, PriceQuote};

/// Largest number of stored path entries, n_paths · (n_steps + 1).
pub const DEFAULT_PATH_ENTRY_CAP: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmSpec {
    pub s0: f64,
    pub mu: f64,
    pub sigma: f64,
    pub horizon: f64,
    pub n_steps: usize,
    pub n_paths: usize,
    pub seed: u64,
}

impl GbmSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.s0.is_finite() && self.s0 > 0.0) {
            return Err(PricingError::domain("s0", format!("must be > 0, got {}", self.s0)));
        }
        if !self.mu.is_finite() {
            return Err(PricingError::domain("mu", "must be finite"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(PricingError::domain(
                "sigma",
                format!("must be > 0, got {}", self.sigma),
            ));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(PricingError::domain(
                "horizon",
                format!("must be > 0, got {}", self.horizon),
            ));
        }
        if self.n_steps == 0 {
            return Err(PricingError::domain("n_steps", "need at least one step"));
        }
        if self.n_paths == 0 {
            return Err(PricingError::domain("n_paths", "need at least one path"));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }
}

/// n_paths × (n_steps + 1) prices, row-major by path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    paths: Vec<f64>,
    pub spec: GbmSpec,
}

impl PathSet {
    pub fn n_paths(&self) -> usize {
        self.spec.n_paths
    }

    pub fn path(&self, i: usize) -> &[f64] {
        let w = self.spec.n_steps + 1;
        &self.paths[i * w..(i + 1) * w]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.paths.chunks_exact(self.spec.n_steps + 1)
    }

    pub fn terminal_values(&self) -> Vec<f64> {
        self.iter().map(|p| p[p.len() - 1]).collect()
    }
}

fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

struct Stepper {
    drift: f64,
    diffusion: f64,
}

impl Stepper {
    fn new(mu: f64, sigma: f64, dt: f64) -> Self {
        Stepper {
            drift: (mu - 0.5 * sigma * sigma) * dt,
            diffusion: sigma * dt.sqrt(),
        }
    }

    fn advance(&self, s: f64, rng: &mut ChaCha8Rng) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        s * (self.drift + self.diffusion * z).exp()
    }
}

pub fn simulate_paths(spec: &GbmSpec) -> Result<PathSet> {
    simulate_paths_with_cap(spec, DEFAULT_PATH_ENTRY_CAP)
}

pub fn simulate_paths_with_cap(spec: &GbmSpec, cap: u128) -> Result<PathSet> {
    spec.validate()?;
    let width = spec.n_steps + 1;
    let requested = spec.n_paths as u128 * width as u128;
    if requested > cap {
        return Err(PricingError::Capacity { requested, cap });
    }
    let stepper = Stepper::new(spec.mu, spec.sigma, spec.dt());
    let mut paths = vec![0.0; requested as usize];
    paths.par_chunks_mut(width).enumerate().for_each(|(i, row)| {
        let mut rng = path_rng(spec.seed, i);
        row[0] = spec.s0;
        for k in 1..width {
            row[k] = stepper.advance(row[k - 1], &mut rng);
        }
    });
    Ok(PathSet { paths, spec: *spec })
}

/// Pairwise summation in a fixed split order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// Sample mean and standard error of the mean.
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Discounted mean payoff under drift r. Returns the quote and its
/// standard error.
pub fn mc_price(c: &OptionContract, n_paths: usize, n_steps: usize, seed: u64) -> Result<(PriceQuote, f64)> {
    validate_contract(*c)?;
    let spec = GbmSpec {
        s0: c.spot,
        mu: c.rate,
        sigma: c.sigma,
        horizon: c.maturity,
        n_steps,
        n_paths,
        seed,
    };
    if c.spot == 0.0 {
        // Zero is absorbing: every path stays at 0.
        let price = c.discount_factor() * c.payoff(0.0);
        return Ok((mc_quote(price, 0.0, n_paths), 0.0));
    }
    spec.validate()?;
    let stepper = Stepper::new(spec.mu, spec.sigma, spec.dt());
    let payoffs: Vec<f64> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i);
            let mut s = c.spot;
            for _ in 0..n_steps {
                s = stepper.advance(s, &mut rng);
            }
            c.payoff(s)
        })
        .collect();
    let (mean, se) = mean_and_std_error(&payoffs);
    let df = c.discount_factor();
    let std_error = df * se;
    Ok((mc_quote(df * mean, std_error, n_paths), std_error))
}

fn mc_quote(price: f64, std_error: f64, n_paths: usize) -> PriceQuote {
    PriceQuote::new(price, Method::MonteCarlo).with_diagnostics(Diagnostics {
        std_error: Some(std_error),
        n_paths: Some(n_paths),
        ..Diagnostics::default()
    })
}

/// Header `path_id,t_0,…,t_n`, then one row per path.
pub fn write_paths_csv(set: &PathSet, mut out: impl Write) -> io::Result<()> {
    let mut line = String::from("path_id");
    for k in 0..=set.spec.n_steps {
        line.push_str(&format!(",t_{k}"));
    }
    writeln!(out, "{line}")?;
    for (i, p) in set.iter().enumerate() {
        line.clear();
        line.push_str(&i.to_string());
        for v in p {
            line.push_str(&format!(",{v:.16e}"));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
