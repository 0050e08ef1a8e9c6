use serde::Serialize;

use super::{price_crank_nicolson, GridSpec, Smoothing};
use crate::analytic;
use crate::contracts::OptionContract;
use crate::error::{PricingError, Result};

/// One refinement level of a grid-convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_space: usize,
    pub n_time: usize,
    /// Asset step ΔS.
    pub h: f64,
    pub price: f64,
    /// |CN price − closed form| at the spot.
    pub error: f64,
    /// log2(e_{ℓ−1}/e_ℓ); `None` on the first level or when both errors vanish.
    pub observed_order: Option<f64>,
}

impl ConvergenceRow {
    /// Both this level and the previous one reproduce the closed form exactly.
    pub fn is_exact(&self) -> bool {
        self.error == 0.0 && self.observed_order.is_none()
    }
}

/// Doubles M and N together `levels − 1` times starting from `base`,
/// always with Rannacher start-up, and measures the error against the
/// closed form.
pub fn convergence_study(c: &OptionContract, levels: usize, base: &GridSpec) -> Result<Vec<ConvergenceRow>> {
    if levels < 3 {
        return Err(PricingError::domain(
            "levels",
            format!("need at least 3 levels, got {levels}"),
        ));
    }
    // σ = 0 falls through to the forward limit inside the closed form.
    let exact = analytic::price(c)?;
    let base = base.with_smoothing(Smoothing::Rannacher);
    let s_max = base.resolved_s_max(c);

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels);
    for level in 0..levels {
        let scale = 1usize << level;
        let g = GridSpec {
            n_space: base.n_space * scale,
            n_time: base.n_time * scale,
            s_max: Some(s_max),
            ..base
        };
        let (_, quote) = price_crank_nicolson(c, &g)?;
        let error = (quote.price - exact.price).abs();
        let observed_order = rows.last().and_then(|prev| {
            if prev.error == 0.0 && error == 0.0 {
                None
            } else {
                Some((prev.error / error).log2())
            }
        });
        rows.push(ConvergenceRow {
            n_space: g.n_space,
            n_time: g.n_time,
            h: s_max / g.n_space as f64,
            price: quote.price,
            error,
            observed_order,
        });
    }
    Ok(rows)
}
