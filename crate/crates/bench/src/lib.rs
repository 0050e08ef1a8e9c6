//! Fixtures shared by the pricing benchmarks.

use optionforge::battery::flagship;
use optionforge::pde::{GridSpec, Smoothing};
use optionforge::{OptionContract, OptionKind};

pub fn call() -> OptionContract {
    flagship(OptionKind::Call)
}

pub fn put() -> OptionContract {
    flagship(OptionKind::Put)
}

/// Square lattices used by the finite-difference benchmarks.
pub fn square_grids() -> impl Iterator<Item = (usize, GridSpec)> {
    [50, 100, 200, 400, 800]
        .into_iter()
        .map(|m| (m, GridSpec::new(m, m).with_smoothing(Smoothing::Rannacher)))
}
