//! European vanilla option pricing by four independent routes: the
//! Black–Scholes closed form, a θ-scheme (Crank–Nicolson) finite-difference
//! solver, heat-kernel quadrature after reduction to the heat equation, and
//! GBM Monte Carlo.
//!
//! ```
//! use optionforge::{analytic, OptionContract, OptionKind};
//!
//! let c = OptionContract::new(OptionKind::Call, 100.0, 120.0, 0.02, 0.5, 89.0 / 365.0).unwrap();
//! let quote = analytic::price(&c).unwrap();
//! assert!((quote.price - 3.72).abs() < 0.01);
//! ```

pub mod analytic;
pub mod battery;
pub mod contracts;
pub mod error;
pub mod gbm;
pub mod heat_oracle;
pub mod pde;
pub mod quote;

pub use contracts::{payoff, validate_contract, year_fraction, DatePair, OptionContract, OptionKind};
pub use error::{PricingError, Result};
pub use pde::{GridSpec, PriceGrid, Smoothing};
pub use quote::{Diagnostics, GridDims, Method, PriceQuote};
