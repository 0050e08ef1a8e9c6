//! Agreement between independent pricing routes.

use optionforge::battery::{flagship, standard_battery};
use optionforge::heat_oracle::{price_via_heat_kernel, QuadratureSpec};
use optionforge::pde::{price_crank_nicolson, GridSpec, Smoothing};
use optionforge::{analytic, gbm, OptionKind};

#[test]
fn heat_kernel_matches_closed_form_on_battery() {
    let quad = QuadratureSpec::default();
    for c in standard_battery() {
        let exact = analytic::price(&c).unwrap().price;
        if exact < 1e-4 * c.strike {
            continue;
        }
        let heat = price_via_heat_kernel(&c, &quad).unwrap().price;
        assert!(((heat - exact) / exact).abs() <= 1e-6, "{c:?}: {heat} vs {exact}");
    }
}

#[test]
fn heat_kernel_parity() {
    let quad = QuadratureSpec::default();
    for c in standard_battery() {
        let call = price_via_heat_kernel(&c.with_kind(OptionKind::Call), &quad)
            .unwrap()
            .price;
        let put = price_via_heat_kernel(&c.with_kind(OptionKind::Put), &quad)
            .unwrap()
            .price;
        let gap = analytic::parity_gap(call, put, &c);
        let scale = call.max(put);
        assert!(gap.abs() <= 2e-6 * scale, "{c:?}: gap {gap:e}");
    }
}

#[test]
fn doubling_quadrature_nodes_does_not_hurt() {
    for c in standard_battery().into_iter().take(10) {
        let exact = analytic::price(&c).unwrap().price;
        let mut prev = f64::INFINITY;
        for nodes in [501, 1001, 2001, 4001] {
            let quad = QuadratureSpec {
                nodes_per_side: nodes,
                half_width: 10.0,
            };
            let err = (price_via_heat_kernel(&c, &quad).unwrap().price - exact).abs();
            // Monotone until the rounding floor.
            let floor = 1e-12 * exact.max(c.strike);
            assert!(err <= prev.max(floor), "{c:?} nodes {nodes}: {err:e} after {prev:e}");
            prev = err.max(floor);
        }
    }
}

// The signed error can cross zero between levels and plateaus at the s_max
// truncation floor, so the battery-wide guard compares the finest grid with
// the worst coarser one. The flagship sequence is clean and checked level by level.
#[test]
fn crank_nicolson_refinement_never_amplifies_error() {
    let error_at = |c: &optionforge::OptionContract, m: usize| {
        let g = GridSpec::new(m, m)
            .with_s_max(4.0 * c.strike)
            .with_smoothing(Smoothing::Rannacher);
        (price_crank_nicolson(c, &g).unwrap().1.price - analytic::price(c).unwrap().price).abs()
    };
    for c in standard_battery() {
        if analytic::price(&c).unwrap().price < 1e-2 * c.strike {
            continue;
        }
        let coarse = [50, 100, 200].map(|m| error_at(&c, m));
        let fine = error_at(&c, 400);
        let worst = coarse.iter().cloned().fold(0.0, f64::max);
        assert!(fine <= 1.1 * worst, "{c:?}: {fine:e} vs coarser {coarse:?}");
    }
    for kind in [OptionKind::Call, OptionKind::Put] {
        let c = flagship(kind);
        let errs: Vec<f64> = [100, 200, 400, 800].iter().map(|&m| error_at(&c, m)).collect();
        for w in errs.windows(2) {
            assert!(w[1] <= 1.1 * w[0], "{kind}: {errs:?}");
        }
    }
}

#[test]
fn crank_nicolson_grids_stay_bounded() {
    for c in standard_battery().into_iter().take(12) {
        let g = GridSpec::new(200, 200).with_smoothing(Smoothing::Rannacher);
        let (grid, _) = price_crank_nicolson(&c, &g).unwrap();
        let upper = grid.s_max().max(c.strike);
        for j in 0..=grid.n_time() {
            for &v in grid.level(j) {
                assert!(v.is_finite() && v >= -1e-8 * c.strike && v <= upper, "{c:?}: {v}");
            }
        }
    }
}

#[test]
fn crank_nicolson_parity_within_grid_error() {
    let g = GridSpec::new(201, 201).with_smoothing(Smoothing::Rannacher);
    for c in standard_battery().into_iter().take(20) {
        let call_c = c.with_kind(OptionKind::Call);
        let put_c = c.with_kind(OptionKind::Put);
        let call = price_crank_nicolson(&call_c, &g).unwrap().1.price;
        let put = price_crank_nicolson(&put_c, &g).unwrap().1.price;
        let grid_error = (call - analytic::price(&call_c).unwrap().price)
            .abs()
            .max((put - analytic::price(&put_c).unwrap().price).abs());
        let gap = analytic::parity_gap(call, put, &c).abs();
        assert!(
            gap <= 2.0 * grid_error + 1e-9 * c.strike,
            "{c:?}: gap {gap:e}, grid error {grid_error:e}"
        );
    }
}

#[test]
fn monte_carlo_agrees_with_closed_form() {
    let c = flagship(OptionKind::Call);
    let (q, se) = gbm::mc_price(&c, 200_000, 1, 99).unwrap();
    let exact = analytic::price_call(&c).unwrap().price;
    assert!((q.price - exact).abs() <= 3.0 * se, "{} ± {se} vs {exact}", q.price);
    assert_eq!(q.diagnostics.std_error, Some(se));
}

#[test]
fn monte_carlo_parity_with_shared_seed() {
    let call_c = flagship(OptionKind::Call);
    let (call, se_c) = gbm::mc_price(&call_c, 200_000, 4, 5).unwrap();
    let (put, se_p) = gbm::mc_price(&call_c.with_kind(OptionKind::Put), 200_000, 4, 5).unwrap();
    let gap = analytic::parity_gap(call.price, put.price, &call_c);
    assert!(gap.abs() <= 3.0 * (se_c * se_c + se_p * se_p).sqrt(), "gap {gap}");
}
