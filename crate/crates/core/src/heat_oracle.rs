//! Reduction of the Black–Scholes equation to the heat equation and a
//! heat-kernel quadrature pricer.
//!
//! With `S = E·eˣ`, `t = T − τ/(½σ²)` and `V = E·e^{αx + βτ}·u(x, τ)`,
//! where `k = r/(½σ²)`, `α = −½(k − 1)` and `β = −¼(k + 1)²`, the option
//! value satisfies `u_τ = u_xx` with the transformed payoff as initial data.
//! The solution is the Gaussian convolution
//!
//! ```text
//! u(x, τ) = 1/√(4πτ) ∫ u₀(s) e^{−(x−s)²/(4τ)} ds
//! ```
//!
//! evaluated here by composite Simpson quadrature in the normalised
//! variable `x' = (s − x)/√(2τ)`, split at the payoff kink `s = 0`.

use std::f64::consts::PI;

use crate::contracts::{OptionContract, OptionKind};
use crate::error::{PricingError, Result};
use crate::quote::{Diagnostics, Method, PriceQuote};

/// Heat times below this are rejected; use the payoff instead.
pub const MIN_HEAT_TIME: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatCoords {
    /// Log-moneyness ln(S/E).
    pub x: f64,
    /// Heat time ½σ²·τ.
    pub tau: f64,
    /// r/(½σ²).
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConstants {
    pub alpha: f64,
    pub beta: f64,
}

impl TransformConstants {
    pub fn from_k(k: f64) -> Self {
        TransformConstants {
            alpha: -0.5 * (k - 1.0),
            beta: -0.25 * (k + 1.0) * (k + 1.0),
        }
    }
}

/// Node count and truncation of the kernel integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Simpson nodes on each side of the kink; rounded up to odd.
    pub nodes_per_side: usize,
    /// Truncation |x'| ≤ half_width in standard deviations of the kernel.
    pub half_width: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_side: 2001,
            half_width: 10.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_side < 501 {
            return Err(PricingError::Quadrature(format!(
                "need at least 501 nodes per side, got {}",
                self.nodes_per_side
            )));
        }
        if !self.half_width.is_finite() || self.half_width < 8.0 {
            return Err(PricingError::Quadrature(format!(
                "truncation half-width must be >= 8, got {}",
                self.half_width
            )));
        }
        Ok(())
    }
}

pub fn to_heat_coords(s: f64, c: &OptionContract) -> Result<HeatCoords> {
    if s.is_nan() || s <= 0.0 {
        return Err(PricingError::domain(
            "spot",
            format!("heat coordinates need S > 0, got {s}"),
        ));
    }
    let half_var = 0.5 * c.sigma * c.sigma;
    Ok(HeatCoords {
        x: (s / c.strike).ln(),
        tau: half_var * c.maturity,
        k: c.rate / half_var,
    })
}

/// Inverse of the spatial transform: S = E·eˣ.
pub fn asset_price(coords: &HeatCoords, strike: f64) -> f64 {
    strike * coords.x.exp()
}

/// V = E·e^{αx + βτ}·u.
pub fn from_heat_value(u: f64, coords: &HeatCoords, consts: &TransformConstants, strike: f64) -> f64 {
    strike * (consts.alpha * coords.x + consts.beta * coords.tau).exp() * u
}

/// Initial data of the heat problem for each option kind.
pub fn transformed_payoff(kind: OptionKind, x: f64, k: f64) -> f64 {
    let up = (0.5 * (k + 1.0) * x).exp();
    let down = (0.5 * (k - 1.0) * x).exp();
    match kind {
        OptionKind::Call => (up - down).max(0.0),
        OptionKind::Put => (down - up).max(0.0),
    }
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, nodes: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let intervals = if nodes % 2 == 1 { nodes - 1 } else { nodes };
    let h = (b - a) / intervals as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..intervals {
        let v = f(a + i as f64 * h);
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b))
}

/// Solves `u_τ = u_xx` at `(x, tau)` for initial data `u0` by kernel
/// quadrature. `kink` is the location in `s` where `u0` loses smoothness.
pub fn heat_convolution(
    u0: impl Fn(f64) -> f64,
    x: f64,
    tau: f64,
    kink: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<f64> {
    quad.validate()?;
    if tau.is_nan() || tau < MIN_HEAT_TIME {
        return Err(PricingError::Quadrature(format!(
            "heat time {tau:e} below {MIN_HEAT_TIME:e}; use the payoff directly"
        )));
    }
    let spread = (2.0 * tau).sqrt();
    let norm = 1.0 / (2.0 * PI).sqrt();
    let integrand = |xp: f64| norm * u0(x + xp * spread) * (-0.5 * xp * xp).exp();
    let hw = quad.half_width;
    let n = quad.nodes_per_side;
    let split = kink.map(|s| (s - x) / spread).filter(|&p| p > -hw && p < hw);
    Ok(match split {
        Some(p) => simpson(&integrand, -hw, p, n) + simpson(&integrand, p, hw, n),
        None => simpson(&integrand, -hw, hw, n),
    })
}

/// Prices a European option by heat-kernel quadrature.
pub fn price_via_heat_kernel(c: &OptionContract, quad: &QuadratureSpec) -> Result<PriceQuote> {
    let coords = to_heat_coords(c.spot, c)?;
    let consts = TransformConstants::from_k(coords.k);
    let kind = c.kind;
    let k = coords.k;
    let u = heat_convolution(
        |s| transformed_payoff(kind, s, k),
        coords.x,
        coords.tau,
        Some(0.0),
        quad,
    )?;
    let price = from_heat_value(u, &coords, &consts, c.strike).max(0.0);
    Ok(
        PriceQuote::new(price, Method::HeatKernel).with_diagnostics(Diagnostics {
            quadrature_nodes: Some(2 * quad.nodes_per_side),
            ..Diagnostics::default()
        }),
    )
}
