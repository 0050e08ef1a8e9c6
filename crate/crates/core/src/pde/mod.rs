//! θ-scheme finite differences for the Black–Scholes equation on a
//! uniform asset grid `S_i = i·ΔS`, `i = 0..=M`.
//!
//! Time is marched in time-to-expiry `τ`, starting from the payoff at
//! `τ = 0`. With node-indexed coefficients
//!
//! ```text
//! a_i = ¼Δt(σ²i² − r·i),  b_i = −½Δt(σ²i² + r),  c_i = ¼Δt(σ²i² + r·i)
//! ```
//!
//! the spatial operator times Δt is `B = tridiag(2a, 2b, 2c)` and one step
//! solves `(I − θB)·Uⁿ⁺¹ = (I + (1−θ)B)·Uⁿ + boundary terms`. θ = ½ is
//! Crank–Nicolson; θ = 1 is implicit Euler.

mod convergence;
mod surface;
mod tridiag;

pub use convergence::{convergence_study, ConvergenceRow};
pub use surface::{
    sigma_surface, surface_file_name, write_surface_csv, SigmaSource, SigmaSweepSpec, SurfaceOutcome, SWEEP_SIGMA_RANGE,
};
pub use tridiag::{solve_tridiagonal, TridiagonalSystem, PIVOT_TOLERANCE};

use serde::{Deserialize, Serialize};

use crate::contracts::{discount_factor, payoff, OptionContract, OptionKind};
use crate::error::{PricingError, Result};
use crate::quote::{Diagnostics, GridDims, Method, PriceQuote};

/// s_max = this multiple of max(E, S) when a grid leaves it unspecified.
pub const DEFAULT_SMAX_MULTIPLE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothing {
    #[default]
    None,
    /// Replace the first two steps with four implicit half-steps.
    Rannacher,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Space intervals M.
    pub n_space: usize,
    /// Time steps N.
    pub n_time: usize,
    /// Far boundary; `None` means `DEFAULT_SMAX_MULTIPLE · max(E, S)`.
    pub s_max: Option<f64>,
    pub theta: f64,
    pub smoothing: Smoothing,
}

impl GridSpec {
    pub fn new(n_space: usize, n_time: usize) -> Self {
        GridSpec {
            n_space,
            n_time,
            s_max: None,
            theta: 0.5,
            smoothing: Smoothing::None,
        }
    }

    /// Eleven asset nodes, 29 time steps, domain [0, 10].
    pub fn unit_scale() -> Self {
        GridSpec {
            s_max: Some(10.0),
            ..GridSpec::new(10, 29)
        }
    }

    pub fn with_s_max(mut self, s_max: f64) -> Self {
        self.s_max = Some(s_max);
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_smoothing(mut self, smoothing: Smoothing) -> Self {
        self.smoothing = smoothing;
        self
    }

    pub fn resolved_s_max(&self, c: &OptionContract) -> f64 {
        self.s_max
            .unwrap_or_else(|| DEFAULT_SMAX_MULTIPLE * c.strike.max(c.spot))
    }

    pub fn validate(&self, c: &OptionContract) -> Result<()> {
        if self.n_space < 3 {
            return Err(PricingError::domain(
                "n_space",
                format!("need M >= 3, got {}", self.n_space),
            ));
        }
        if self.n_time < 1 {
            return Err(PricingError::domain("n_time", "need N >= 1"));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(PricingError::domain(
                "theta",
                format!("must lie in [0, 1], got {}", self.theta),
            ));
        }
        let s_max = self.resolved_s_max(c);
        if !s_max.is_finite() || s_max <= c.strike {
            return Err(PricingError::domain(
                "s_max",
                format!("must exceed the strike {}, got {s_max}", c.strike),
            ));
        }
        Ok(())
    }
}

/// Step sizes and asset nodes of a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub ds: f64,
    pub dt: f64,
    pub s_nodes: Vec<f64>,
}

pub fn build_grid(c: &OptionContract, g: &GridSpec) -> Result<Lattice> {
    g.validate(c)?;
    let s_max = g.resolved_s_max(c);
    let m = g.n_space;
    let ds = s_max / m as f64;
    let mut s_nodes: Vec<f64> = (0..=m).map(|i| i as f64 * ds).collect();
    s_nodes[m] = s_max;
    Ok(Lattice {
        ds,
        dt: c.maturity / g.n_time as f64,
        s_nodes,
    })
}

/// Stencil weights of interior node `i` for a step of length `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Coefficients {
    /// (lower, diag, upper) of row i in `I − θB`.
    pub fn implicit_row(&self, theta: f64) -> (f64, f64, f64) {
        (-2.0 * theta * self.a, 1.0 - 2.0 * theta * self.b, -2.0 * theta * self.c)
    }

    /// (lower, diag, upper) of row i in `I + (1−θ)B`.
    pub fn explicit_row(&self, theta: f64) -> (f64, f64, f64) {
        let w = 2.0 * (1.0 - theta);
        (w * self.a, 1.0 + w * self.b, w * self.c)
    }
}

pub fn cn_coefficients(i: usize, dt: f64, sigma: f64, rate: f64) -> Coefficients {
    let i = i as f64;
    let diffusion = sigma * sigma * i * i;
    let drift = rate * i;
    Coefficients {
        a: 0.25 * dt * (diffusion - drift),
        b: -0.5 * dt * (diffusion + rate),
        c: 0.25 * dt * (diffusion + drift),
    }
}

/// Option values on the full (asset, time-to-expiry) lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceGrid {
    values: Vec<f64>,
    s_nodes: Vec<f64>,
    t_nodes: Vec<f64>,
    pub kind: OptionKind,
    pub strike: f64,
    pub theta: f64,
}

impl PriceGrid {
    pub fn n_space(&self) -> usize {
        self.s_nodes.len() - 1
    }

    pub fn n_time(&self) -> usize {
        self.t_nodes.len() - 1
    }

    pub fn s_nodes(&self) -> &[f64] {
        &self.s_nodes
    }

    /// Time-to-expiry of each level; level 0 is expiry.
    pub fn t_nodes(&self) -> &[f64] {
        &self.t_nodes
    }

    pub fn s_max(&self) -> f64 {
        self.s_nodes[self.n_space()]
    }

    /// U[i][j]: asset node `i`, time level `j`.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.level(j)[i]
    }

    pub fn level(&self, j: usize) -> &[f64] {
        let width = self.s_nodes.len();
        &self.values[j * width..(j + 1) * width]
    }

    pub fn final_level(&self) -> &[f64] {
        self.level(self.n_time())
    }

    pub fn dims(&self) -> GridDims {
        GridDims {
            n_space: self.n_space(),
            n_time: self.n_time(),
            s_max: self.s_max(),
            theta: self.theta,
        }
    }
}

/// Dirichlet values (U[0], U[M]) at time-to-expiry `tau`.
pub fn boundary_values(kind: OptionKind, strike: f64, rate: f64, s_max: f64, tau: f64) -> (f64, f64) {
    let pv_strike = strike * discount_factor(rate, tau);
    match kind {
        OptionKind::Call => (0.0, s_max - pv_strike),
        OptionKind::Put => (pv_strike, 0.0),
    }
}

/// Precomputed bands for one step length and weight.
struct ThetaStepper {
    coeffs: Vec<Coefficients>,
    theta: f64,
    system: TridiagonalSystem,
}

impl ThetaStepper {
    fn new(m: usize, dt: f64, sigma: f64, rate: f64, theta: f64) -> Self {
        let coeffs: Vec<Coefficients> = (1..m).map(|i| cn_coefficients(i, dt, sigma, rate)).collect();
        let n = m - 1;
        let mut lower = Vec::with_capacity(n - 1);
        let mut diag = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n - 1);
        for (k, co) in coeffs.iter().enumerate() {
            let (l, d, u) = co.implicit_row(theta);
            diag.push(d);
            if k > 0 {
                lower.push(l);
            }
            if k + 1 < n {
                upper.push(u);
            }
        }
        ThetaStepper {
            coeffs,
            theta,
            system: TridiagonalSystem {
                lower,
                diag,
                upper,
                rhs: vec![0.0; n],
            },
        }
    }

    /// Advances `u` (length M+1) one step; `next_bounds` are the boundary
    /// values at the new time level.
    fn step(&mut self, u: &mut [f64], next_bounds: (f64, f64)) -> Result<()> {
        let m = u.len() - 1;
        let theta = self.theta;
        for (k, co) in self.coeffs.iter().enumerate() {
            let i = k + 1;
            let (l, d, r) = co.explicit_row(theta);
            self.system.rhs[k] = l * u[i - 1] + d * u[i] + r * u[i + 1];
        }
        let first = &self.coeffs[0];
        let last = &self.coeffs[m - 2];
        self.system.rhs[0] += 2.0 * theta * first.a * next_bounds.0;
        self.system.rhs[m - 2] += 2.0 * theta * last.c * next_bounds.1;
        let interior = solve_tridiagonal(&self.system)?;
        u[0] = next_bounds.0;
        u[1..m].copy_from_slice(&interior);
        u[m] = next_bounds.1;
        Ok(())
    }
}

fn validate_for_grid(c: &OptionContract) -> Result<()> {
    // σ = 0 degenerates the PDE to pure discounting, which the scheme handles.
    let probe = OptionContract {
        sigma: if c.sigma == 0.0 { 1.0 } else { c.sigma },
        ..*c
    };
    crate::contracts::validate_contract(probe).map(|_| ())
}

/// Marches the payoff to maturity and returns the whole lattice.
pub fn solve_grid(c: &OptionContract, g: &GridSpec) -> Result<PriceGrid> {
    validate_for_grid(c)?;
    let lattice = build_grid(c, g)?;
    let m = g.n_space;
    let n = g.n_time;
    let dt = lattice.dt;
    let s_max = lattice.s_nodes[m];
    let bounds = |tau: f64| boundary_values(c.kind, c.strike, c.rate, s_max, tau);

    let mut values = Vec::with_capacity((m + 1) * (n + 1));
    let mut u: Vec<f64> = lattice.s_nodes.iter().map(|&s| payoff(c.kind, s, c.strike)).collect();
    values.extend_from_slice(&u);

    let startup = match g.smoothing {
        Smoothing::Rannacher => n.min(2),
        Smoothing::None => 0,
    };
    let mut main = ThetaStepper::new(m, dt, c.sigma, c.rate, g.theta);
    let mut half = (startup > 0).then(|| ThetaStepper::new(m, 0.5 * dt, c.sigma, c.rate, 1.0));

    for j in 0..n {
        let tau_next = (j + 1) as f64 * dt;
        match half.as_mut() {
            Some(stepper) if j < startup => {
                stepper.step(&mut u, bounds((j as f64 + 0.5) * dt))?;
                stepper.step(&mut u, bounds(tau_next))?;
            }
            _ => main.step(&mut u, bounds(tau_next))?,
        }
        values.extend_from_slice(&u);
    }

    Ok(PriceGrid {
        values,
        s_nodes: lattice.s_nodes,
        t_nodes: (0..=n).map(|j| j as f64 * dt).collect(),
        kind: c.kind,
        strike: c.strike,
        theta: g.theta,
    })
}

/// Linear interpolation in S at the final time level.
pub fn interpolate_price(grid: &PriceGrid, spot: f64) -> Result<f64> {
    let nodes = grid.s_nodes();
    let s_max = grid.s_max();
    if !(spot >= 0.0 && spot <= s_max) {
        return Err(PricingError::OutOfDomain { spot, s_max });
    }
    let values = grid.final_level();
    let m = grid.n_space();
    let i = (nodes.partition_point(|&s| s <= spot) - 1).min(m - 1);
    if nodes[i] == spot {
        return Ok(values[i]);
    }
    let w = (spot - nodes[i]) / (nodes[i + 1] - nodes[i]);
    Ok((1.0 - w) * values[i] + w * values[i + 1])
}

pub fn price_crank_nicolson(c: &OptionContract, g: &GridSpec) -> Result<(PriceGrid, PriceQuote)> {
    let grid = solve_grid(c, g)?;
    let price = interpolate_price(&grid, c.spot)?;
    let quote = PriceQuote::new(price.max(0.0), Method::CrankNicolson).with_diagnostics(Diagnostics {
        grid: Some(grid.dims()),
        ..Diagnostics::default()
    });
    Ok((grid, quote))
}
