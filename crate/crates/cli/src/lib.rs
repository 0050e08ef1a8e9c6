//! Command-line and HTTP interface to the `optionforge` pricing engine.
//!
//! The CLI takes decimal rates and volatilities and a maturity in years;
//! the HTTP service mirrors a premium-calculator form and takes percentages
//! and calendar dates (ACT/365).

pub mod cli;
pub mod pricing;
pub mod request;
pub mod service;
