//! Method dispatch shared by the CLI and the HTTP service.

use optionforge::heat_oracle::{self, QuadratureSpec, MIN_HEAT_TIME};
use optionforge::pde::{self, GridSpec};
use optionforge::{analytic, gbm, Method, OptionContract, OptionKind, PriceQuote, Result};

pub const DEFAULT_GRID_SIZE: usize = 400;
pub const DEFAULT_MC_PATHS: usize = 1_000_000;
pub const DEFAULT_MC_STEPS: usize = 1;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq)]
pub struct PricingOptions {
    pub grid: GridSpec,
    pub quadrature: QuadratureSpec,
    pub mc_paths: usize,
    pub mc_steps: usize,
    pub seed: u64,
}

impl Default for PricingOptions {
    fn default() -> Self {
        PricingOptions {
            grid: GridSpec::new(DEFAULT_GRID_SIZE, DEFAULT_GRID_SIZE),
            quadrature: QuadratureSpec::default(),
            mc_paths: DEFAULT_MC_PATHS,
            mc_steps: DEFAULT_MC_STEPS,
            seed: DEFAULT_SEED,
        }
    }
}

/// Prices a validated contract with the requested method.
pub fn price_contract(c: &OptionContract, method: Method, opts: &PricingOptions) -> Result<PriceQuote> {
    let c = optionforge::validate_contract(*c)?;
    match method {
        Method::Analytic => analytic::price(&c),
        Method::CrankNicolson => pde::price_crank_nicolson(&c, &opts.grid).map(|(_, q)| q),
        Method::HeatKernel => price_heat(&c, &opts.quadrature),
        Method::MonteCarlo => gbm::mc_price(&c, opts.mc_paths, opts.mc_steps, opts.seed).map(|(q, _)| q),
    }
}

fn price_heat(c: &OptionContract, quad: &QuadratureSpec) -> Result<PriceQuote> {
    let heat_time = 0.5 * c.sigma * c.sigma * c.maturity;
    if c.spot == 0.0 || heat_time < MIN_HEAT_TIME {
        // S = 0 boundary or vanishing heat time: exact limits, no quadrature.
        let pv = c.discounted_strike();
        let price = match c.kind {
            OptionKind::Call => (c.spot - pv).max(0.0),
            OptionKind::Put => (pv - c.spot).max(0.0),
        };
        return Ok(PriceQuote::new(price, Method::HeatKernel));
    }
    heat_oracle::price_via_heat_kernel(c, quad)
}

/// Round-half-even to two decimals on the exact binary value.
pub fn display_price(price: f64) -> String {
    // `+ 0.0` normalises -0.0.
    format!("{:.2}", price + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use optionforge::battery::flagship;

    #[test]
    fn display_rounds_half_to_even() {
        assert_eq!(display_price(0.125), "0.12");
        assert_eq!(display_price(0.375), "0.38");
        assert_eq!(display_price(19.41624), "19.42");
        assert_eq!(display_price(-0.0), "0.00");
        assert_eq!(display_price(3.0), "3.00");
    }

    #[test]
    fn every_method_prices_the_flagship() {
        let opts = PricingOptions {
            mc_paths: 100_000,
            ..PricingOptions::default()
        };
        let c = flagship(OptionKind::Call);
        let exact = price_contract(&c, Method::Analytic, &opts).unwrap().price;
        for m in [Method::CrankNicolson, Method::HeatKernel, Method::MonteCarlo] {
            let q = price_contract(&c, m, &opts).unwrap();
            assert_eq!(q.method, m);
            assert!((q.price - exact).abs() / exact < 2e-2, "{m}: {}", q.price);
        }
    }

    #[test]
    fn heat_handles_zero_spot_and_vanishing_time() {
        let opts = PricingOptions::default();
        let put = flagship(OptionKind::Put).with_spot(0.0);
        let q = price_contract(&put, Method::HeatKernel, &opts).unwrap();
        assert_eq!(q.price, put.discounted_strike());
        let tiny = OptionContract::new(OptionKind::Put, 100.0, 120.0, 0.02, 1e-4, 1e-6).unwrap();
        let q = price_contract(&tiny, Method::HeatKernel, &opts).unwrap();
        assert!((q.price - (tiny.discounted_strike() - 100.0)).abs() < 1e-9);
    }
}
