//! Reference contracts shared by cross-method checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contracts::{OptionContract, OptionKind};

/// Seed of the standard battery.
pub const BATTERY_SEED: u64 = 2014;

/// S=100, E=120, r=2%, σ=50%, 89 days (ACT/365).
pub fn flagship(kind: OptionKind) -> OptionContract {
    OptionContract::new(kind, 100.0, 120.0, 0.02, 0.5, 89.0 / 365.0).expect("flagship contract is valid")
}

/// `n` contracts with S/E ∈ [0.5, 2], σ ∈ [0.1, 0.8], r ∈ [0, 0.1],
/// τ ∈ [0.05, 2] and E ∈ [50, 150], alternating call and put.
pub fn contract_battery(n: usize, seed: u64) -> Vec<OptionContract> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let strike = rng.random_range(50.0..150.0);
            let moneyness = rng.random_range(0.5..2.0);
            let sigma = rng.random_range(0.1..0.8);
            let rate = rng.random_range(0.0..0.1);
            let maturity = rng.random_range(0.05..2.0);
            let kind = if i % 2 == 0 { OptionKind::Call } else { OptionKind::Put };
            OptionContract::new(kind, moneyness * strike, strike, rate, sigma, maturity)
                .expect("battery ranges are valid")
        })
        .collect()
}

/// The 50-contract battery used by the acceptance suite.
pub fn standard_battery() -> Vec<OptionContract> {
    contract_battery(50, BATTERY_SEED)
}
