//! Closed-form Black–Scholes prices and put–call parity.
//!
//! The normal CDF is evaluated through the complementary error function,
//! `N(x) = ½·erfc(-x/√2)`, using the musl-derived `erfc` from `libm`
//! (better than 1e-15 absolute over the real line).

use std::f64::consts::FRAC_1_SQRT_2;

use crate::contracts::{OptionContract, OptionKind};
use crate::error::{PricingError, Result};
use crate::quote::{Diagnostics, Method, PriceQuote};

/// Standard normal cumulative distribution function.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D1D2 {
    pub d1: f64,
    pub d2: f64,
}

/// σ√τ for the contract.
pub fn total_volatility(c: &OptionContract) -> f64 {
    c.sigma * c.maturity.sqrt()
}

pub fn d1_d2(c: &OptionContract) -> Result<D1D2> {
    if c.spot <= 0.0 {
        return Err(PricingError::domain("spot", "d1/d2 need spot > 0"));
    }
    let vol = total_volatility(c);
    if vol <= 0.0 || !vol.is_finite() {
        return Err(PricingError::domain("sigma", "σ√τ underflows to zero"));
    }
    let d1 = ((c.spot / c.strike).ln() + (c.rate + 0.5 * c.sigma * c.sigma) * c.maturity) / vol;
    Ok(D1D2 { d1, d2: d1 - vol })
}

/// Prices either kind in closed form.
pub fn price(c: &OptionContract) -> Result<PriceQuote> {
    match c.kind {
        OptionKind::Call => price_call(c),
        OptionKind::Put => price_put(c),
    }
}

/// C = S·N(d1) − E·e^{−rτ}·N(d2).
pub fn price_call(c: &OptionContract) -> Result<PriceQuote> {
    expect_kind(c, OptionKind::Call)?;
    if c.spot == 0.0 {
        return Ok(PriceQuote::new(0.0, Method::Analytic));
    }
    closed_form(c, |d, s, k| s * std_normal_cdf(d.d1) - k * std_normal_cdf(d.d2))
}

/// P = E·e^{−rτ}·N(−d2) − S·N(−d1).
pub fn price_put(c: &OptionContract) -> Result<PriceQuote> {
    expect_kind(c, OptionKind::Put)?;
    if c.spot == 0.0 {
        return Ok(PriceQuote::new(c.discounted_strike(), Method::Analytic));
    }
    closed_form(c, |d, s, k| k * std_normal_cdf(-d.d2) - s * std_normal_cdf(-d.d1))
}

fn expect_kind(c: &OptionContract, kind: OptionKind) -> Result<()> {
    if c.kind == kind {
        Ok(())
    } else {
        Err(PricingError::domain(
            "option_type",
            format!("expected a {kind} contract, got {}", c.kind),
        ))
    }
}

fn closed_form(c: &OptionContract, value: impl Fn(D1D2, f64, f64) -> f64) -> Result<PriceQuote> {
    let discounted_strike = c.discounted_strike();
    let d = match d1_d2(c) {
        Ok(d) => d,
        // σ√τ below double precision: the distribution is a point mass at the forward.
        Err(PricingError::Domain { field: "sigma", .. }) => {
            let forward_value = match c.kind {
                OptionKind::Call => c.spot - discounted_strike,
                OptionKind::Put => discounted_strike - c.spot,
            };
            return Ok(PriceQuote::new(forward_value.max(0.0), Method::Analytic));
        }
        Err(e) => return Err(e),
    };
    let price = value(d, c.spot, discounted_strike).max(0.0);
    Ok(PriceQuote::new(price, Method::Analytic).with_diagnostics(Diagnostics {
        d1: Some(d.d1),
        d2: Some(d.d2),
        ..Diagnostics::default()
    }))
}

/// (C − P) − (S − E·e^{−rτ}); zero when the two prices are parity-consistent.
pub fn parity_gap(call_price: f64, put_price: f64, c: &OptionContract) -> f64 {
    (call_price - put_price) - (c.spot - c.discounted_strike())
}
