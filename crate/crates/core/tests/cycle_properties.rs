use btz_otto::cycle::{
    engine_window, fridge_window, run_cycle, run_cycle_with_rates, CycleConfig, EngineMetrics,
    EntropyConvention,
};
use btz_otto::optimize::{emp_curve, optimize_engine, EngineObjective, SearchOptions};
use btz_otto::response::{BathSpec, Boundary, RateData};
use btz_otto::sweep::{figure_spec, run_sweep, Figure};
use proptest::prelude::*;

fn config(oc: f64, oh: f64, th: f64, tc: f64, tau_h: f64, tau_c: f64, b: Boundary) -> CycleConfig {
    CycleConfig {
        omega_c: oc,
        omega_h: oh,
        hot: BathSpec::new(th, 0.01, b).unwrap(),
        cold: BathSpec::new(tc, 0.01, b).unwrap(),
        tau_h,
        tau_c,
        entropy: EntropyConvention::Standard,
    }
}

fn synthetic(gamma: f64, omega: f64, t: f64) -> RateData {
    let kappa = -(0.5 * omega / t).tanh();
    RateData::from_rates(0.5 * gamma * (1.0 + kappa), 0.5 * gamma * (1.0 - kappa))
}

/// Cycle with both isochores run for `γτ = 50`.
fn long_strokes(oc: f64, oh: f64, th: f64, tc: f64) -> btz_otto::cycle::CycleResult {
    let cfg = config(oc, oh, th, tc, 50.0, 50.0, Boundary::Transparent);
    run_cycle_with_rates(&cfg, &synthetic(1.0, oh, th), &synthetic(1.0, oc, tc)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn first_law_closes(
        oc in 0.01..1.0f64,
        gap_ratio in 1.01..8.0f64,
        th in 0.1..3.0f64,
        temp_ratio in 0.05..0.95f64,
        tau_h in 0.0..30.0f64,
        tau_c in 0.0..30.0f64,
        z in 0usize..3,
    ) {
        let cfg = config(oc, oc * gap_ratio, th, th * temp_ratio, tau_h, tau_c, Boundary::ALL[z]);
        let res = run_cycle(&cfg).unwrap();
        let lhs = res.w1 + res.qh + res.w3 + res.qc;
        prop_assert!((lhs - res.internal_energy_change(&cfg)).abs() < 1e-12);
    }

    #[test]
    fn regime_follows_gap_ratio(
        oc in 0.05..1.0f64,
        th in 0.2..3.0f64,
        temp_ratio in 0.1..0.9f64,
        inside in 0.05..0.95f64,
        offset in 0.02..0.5f64,
    ) {
        let tc = th * temp_ratio;
        let edge = th / tc;
        let engine = long_strokes(oc, oc * (1.0 + (edge - 1.0) * inside), th, tc);
        prop_assert!(engine.w_tot > 0.0);
        prop_assert!(engine.qc < 0.0);
        let fridge = long_strokes(oc, oc * edge * (1.0 + offset), th, tc);
        prop_assert!(fridge.qc > 0.0);
        prop_assert!(fridge.w_tot < 0.0);
    }
}

#[test]
fn windows_match_asymptotic_signs() {
    let (oc, th, tc) = (0.1, 2.0, 0.5);
    let (lo, hi) = engine_window(oc, th, tc).unwrap();
    assert!(long_strokes(oc, lo + 0.01, th, tc).w_tot > 0.0);
    assert!(long_strokes(oc, hi - 0.01, th, tc).w_tot > 0.0);
    assert!(long_strokes(oc, hi + 0.01, th, tc).w_tot < 0.0);

    let oh = 1.0;
    let (_, top) = fridge_window(oh, th, tc).unwrap();
    assert!(long_strokes(top - 0.01, oh, th, tc).qc > 0.0);
    assert!(long_strokes(top + 0.01, oh, th, tc).qc < 0.0);
}

#[test]
fn power_vanishes_at_both_window_ends() {
    let (oc, th, tc) = (0.1, 2.0, 0.5);
    let (lo, hi) = engine_window(oc, th, tc).unwrap();
    let power = |oh: f64| {
        let cfg = config(oc, oh, th, tc, 50.0, 50.0, Boundary::Transparent);
        let res = run_cycle_with_rates(&cfg, &synthetic(1.0, oh, th), &synthetic(1.0, oc, tc)).unwrap();
        EngineMetrics::evaluate(&res, &cfg).power
    };
    let mid = power(0.5 * (lo + hi));
    for d in [1e-2, 1e-4, 1e-6] {
        assert!(power(lo + d).abs() < 10.0 * d * mid.max(1.0));
        assert!(power(hi - d).abs() < 10.0 * d * mid.max(1.0));
    }
}

#[test]
fn work_sweep_approaches_long_time_value() {
    let ds = run_sweep(&figure_spec(Figure::F2).unwrap()).unwrap();
    let last = ds.rows.last().unwrap();
    for v in &last[1..] {
        assert!((v.unwrap() - 0.097739).abs() < 1e-4);
    }
}

#[test]
fn cooling_sweep_approaches_long_time_value_slowest_for_dirichlet() {
    let ds = run_sweep(&figure_spec(Figure::F4b).unwrap()).unwrap();
    let last = ds.rows.last().unwrap();
    for v in &last[1..] {
        assert!((v.unwrap() - 0.0193083).abs() < 1e-5);
    }
    // midway the Dirichlet curve still lags both others
    let mid = &ds.rows[10];
    assert!(mid[3].unwrap() < mid[1].unwrap() && mid[3].unwrap() < mid[2].unwrap());
}

#[test]
fn emp_rows_are_bit_identical_across_runs() {
    let spec = figure_spec(Figure::F3).unwrap();
    let btz_otto::sweep::Template::Cycle(template) = spec.template else {
        unreachable!()
    };
    let ratios = [0.2, 0.5, 0.8];
    let a = emp_curve(&template, &ratios, &SearchOptions::default()).unwrap();
    let b = emp_curve(&template, &ratios, &SearchOptions::default()).unwrap();
    assert_eq!(a, b);
    for row in &a {
        assert!(row.eta_star.unwrap() <= row.eta_carnot.unwrap());
    }
}

#[test]
fn empty_ratio_rows_are_absent() {
    let spec = figure_spec(Figure::F3).unwrap();
    let btz_otto::sweep::Template::Cycle(template) = spec.template else {
        unreachable!()
    };
    let rows = emp_curve(&template, &[1.0, 1.2], &SearchOptions::default()).unwrap();
    assert!(rows.iter().all(|r| r.eta_star.is_none() && r.eta_carnot.is_none()));
}

/// Dense-grid check of the power optimum at the engine-figure parameters.
/// About a minute in release mode.
#[test]
#[ignore]
fn power_optimum_matches_dense_grid() {
    let spec = figure_spec(Figure::F3).unwrap();
    let btz_otto::sweep::Template::Cycle(mut template) = spec.template else {
        unreachable!()
    };
    template.cold.temperature = 0.5 * template.hot.temperature;
    let report = optimize_engine(&template, EngineObjective::Power, &SearchOptions::default()).unwrap();

    let (lo, hi) = report.bracket;
    let cold = btz_otto::response::rate_data(template.omega_c, &template.cold).unwrap();
    let n = 100_000;
    let h = (hi - lo) / (n - 1) as f64;
    let mut best = (lo, f64::MIN);
    for i in 0..n {
        let oh = lo + i as f64 * h;
        let mut cfg = template;
        cfg.omega_h = oh;
        let hot = btz_otto::response::rate_data(oh, &cfg.hot).unwrap();
        let res = run_cycle_with_rates(&cfg, &hot, &cold).unwrap();
        let p = EngineMetrics::evaluate(&res, &cfg).power;
        if p > best.1 {
            best = (oh, p);
        }
    }
    assert!((report.argmax - best.0).abs() < 1e-4, "{} vs {}", report.argmax, best.0);
}
