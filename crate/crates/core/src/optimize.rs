//! Bounded one-dimensional maximization over a qubit gap, and the
//! efficiency/COP-at-optimum curves built on it.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{
    reference_bounds, run_cycle_with_rates, CycleConfig, CycleResult, EngineMetrics, FridgeMetrics,
};
use crate::error::{Error, Result};
use crate::response::{rate_data, RateData};

/// Pre-scan spread below which an objective counts as flat.
pub const FLAT_SPREAD: f64 = 1e-14;
/// Distance from an interval end that flags an optimum as sitting on it.
pub const EDGE_MARGIN: f64 = 1e-6;
/// Offset keeping searches off the degenerate open ends of a window.
pub const WINDOW_FLOOR: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Number of equally spaced points sampled before refinement.
    pub prescan: usize,
    /// Final bracket width.
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prescan: 64,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumReport {
    pub argmax: f64,
    pub objective_value: f64,
    /// Efficiency (engine) or COP (refrigerator) at `argmax`, when meaningful.
    pub efficiency_or_cop_at_opt: Option<f64>,
    /// Search interval.
    pub bracket: (f64, f64),
    /// Objective evaluations spent in the golden-section stage.
    pub iterations: usize,
    /// `argmax` lies within [`EDGE_MARGIN`] of an end of `bracket`.
    pub at_edge: bool,
}

pub fn maximize_scalar<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<OptimumReport>
where
    F: FnMut(f64) -> f64,
{
    let opts = SearchOptions {
        tol,
        ..SearchOptions::default()
    };
    try_maximize_scalar(|x| Ok(f(x)), lo, hi, &opts)
}

/// Pre-scan `[lo, hi]` on an even grid, then refine the best grid cell's
/// neighbourhood by golden-section search down to `opts.tol`.
pub fn try_maximize_scalar<F>(mut f: F, lo: f64, hi: f64, opts: &SearchOptions) -> Result<OptimumReport>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain("maximize_scalar", "hi - lo", hi - lo, "lo < hi, both finite"));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::domain("maximize_scalar", "tol", opts.tol, "tol > 0"));
    }
    if opts.prescan < 3 {
        return Err(Error::domain(
            "maximize_scalar",
            "prescan",
            opts.prescan as f64,
            "at least 3 points",
        ));
    }

    let n = opts.prescan;
    let step = (hi - lo) / (n - 1) as f64;
    let grid_point = |i: usize| if i == n - 1 { hi } else { lo + i as f64 * step };

    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let x = grid_point(i);
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::domain("maximize_scalar", "objective", v, "finite on [lo, hi]"));
        }
        values.push(v);
    }

    let (mut best_i, mut best_v) = (0, values[0]);
    let mut worst_v = values[0];
    for (i, &v) in values.iter().enumerate() {
        if v > best_v {
            best_i = i;
            best_v = v;
        }
        worst_v = worst_v.min(v);
    }
    if best_v - worst_v < FLAT_SPREAD {
        return Err(Error::FlatObjective {
            lo,
            hi,
            spread: best_v - worst_v,
        });
    }

    let mut a = grid_point(best_i.saturating_sub(1));
    let mut b = grid_point((best_i + 1).min(n - 1));
    let mut best_x = grid_point(best_i);

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 2;
    while b - a > opts.tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        iterations += 1;
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v >= best_v {
            best_x = x;
            best_v = v;
        }
    }

    Ok(OptimumReport {
        argmax: best_x,
        objective_value: best_v,
        efficiency_or_cop_at_opt: None,
        bracket: (lo, hi),
        iterations,
        at_edge: best_x - lo < EDGE_MARGIN || hi - best_x < EDGE_MARGIN,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineObjective {
    Power,
    Ecological,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FridgeObjective {
    /// `χ = ε Q_c / τ_cycle`
    Chi,
    Ecological,
}

/// Cycles over a varying gap with the opposite isochore's rates held fixed.
/// Rates at previously visited gaps are memoized, so several objectives can
/// share one set of pre-scan evaluations.
struct GapProblem {
    template: CycleConfig,
    fixed: RateData,
    vary_hot: bool,
    cache: HashMap<u64, RateData>,
}

impl GapProblem {
    fn engine(template: &CycleConfig) -> Result<Self> {
        let fixed = rate_data(template.omega_c, &template.cold)?;
        Ok(GapProblem {
            template: *template,
            fixed,
            vary_hot: true,
            cache: HashMap::new(),
        })
    }

    fn fridge(template: &CycleConfig) -> Result<Self> {
        let fixed = rate_data(template.omega_h, &template.hot)?;
        Ok(GapProblem {
            template: *template,
            fixed,
            vary_hot: false,
            cache: HashMap::new(),
        })
    }

    fn cycle(&mut self, gap: f64) -> Result<(CycleConfig, CycleResult)> {
        let mut cfg = self.template;
        let bath = if self.vary_hot {
            cfg.omega_h = gap;
            cfg.hot
        } else {
            cfg.omega_c = gap;
            cfg.cold
        };
        let rates = match self.cache.get(&gap.to_bits()) {
            Some(r) => *r,
            None => {
                let r = rate_data(gap, &bath)?;
                self.cache.insert(gap.to_bits(), r);
                r
            }
        };
        let res = if self.vary_hot {
            run_cycle_with_rates(&cfg, &rates, &self.fixed)?
        } else {
            run_cycle_with_rates(&cfg, &self.fixed, &rates)?
        };
        Ok((cfg, res))
    }

    fn engine_value(&mut self, gap: f64, objective: EngineObjective) -> Result<f64> {
        let (cfg, res) = self.cycle(gap)?;
        let m = EngineMetrics::evaluate(&res, &cfg);
        Ok(match objective {
            EngineObjective::Power => m.power,
            EngineObjective::Ecological => m.ecological,
        })
    }

    fn fridge_value(&mut self, gap: f64, objective: FridgeObjective) -> Result<f64> {
        let (cfg, res) = self.cycle(gap)?;
        let m = FridgeMetrics::evaluate(&res, &cfg);
        Ok(match objective {
            FridgeObjective::Chi => m.chi,
            FridgeObjective::Ecological => m.ecological,
        })
    }
}

fn check_finite_time(template: &CycleConfig) -> Result<()> {
    if !(template.tau_cycle() > 0.0) {
        return Err(Error::invalid(
            "tau_h",
            "optimization needs a cycle of nonzero duration",
        ));
    }
    Ok(())
}

/// Hot-gap search interval `[Ω_c + floor, Ω_c T_h/T_c]`.
fn engine_interval(template: &CycleConfig) -> Option<(f64, f64)> {
    let (t_h, t_c) = (template.hot.temperature, template.cold.temperature);
    let lo = template.omega_c + WINDOW_FLOOR;
    let hi = template.omega_c * t_h / t_c;
    (t_c < t_h && hi > lo).then_some((lo, hi))
}

/// Cold-gap search interval `[floor, Ω_h T_c/T_h]`.
fn fridge_interval(template: &CycleConfig) -> Option<(f64, f64)> {
    let (t_h, t_c) = (template.hot.temperature, template.cold.temperature);
    let hi = template.omega_h * t_c / t_h;
    (t_c < t_h && hi > WINDOW_FLOOR).then_some((WINDOW_FLOOR, hi))
}

fn empty_window(op: &'static str, regime: &'static str) -> Error {
    Error::Regime {
        op,
        regime,
        detail: "the gap window is empty".into(),
    }
}

/// Maximize an engine objective over `Ω_h`; `omega_h` of the template is ignored.
pub fn optimize_engine(
    template: &CycleConfig,
    objective: EngineObjective,
    opts: &SearchOptions,
) -> Result<OptimumReport> {
    check_finite_time(template)?;
    let (lo, hi) = engine_interval(template).ok_or_else(|| empty_window("optimize_engine", "engine"))?;
    let mut problem = GapProblem::engine(template)?;
    engine_optimum(&mut problem, objective, lo, hi, opts)
}

fn engine_optimum(
    problem: &mut GapProblem,
    objective: EngineObjective,
    lo: f64,
    hi: f64,
    opts: &SearchOptions,
) -> Result<OptimumReport> {
    let omega_c = problem.template.omega_c;
    let mut report = try_maximize_scalar(|x| problem.engine_value(x, objective), lo, hi, opts)?;
    report.efficiency_or_cop_at_opt = Some(1.0 - omega_c / report.argmax);
    Ok(report)
}

/// Maximize a refrigerator objective over `Ω_c`; `omega_c` of the template is ignored.
pub fn optimize_fridge(
    template: &CycleConfig,
    objective: FridgeObjective,
    opts: &SearchOptions,
) -> Result<OptimumReport> {
    check_finite_time(template)?;
    let (lo, hi) =
        fridge_interval(template).ok_or_else(|| empty_window("optimize_fridge", "refrigerator"))?;
    let mut problem = GapProblem::fridge(template)?;
    fridge_optimum(&mut problem, objective, lo, hi, opts)
}

fn fridge_optimum(
    problem: &mut GapProblem,
    objective: FridgeObjective,
    lo: f64,
    hi: f64,
    opts: &SearchOptions,
) -> Result<OptimumReport> {
    let omega_h = problem.template.omega_h;
    let mut report = try_maximize_scalar(|x| problem.fridge_value(x, objective), lo, hi, opts)?;
    report.efficiency_or_cop_at_opt = Some(report.argmax / (omega_h - report.argmax));
    Ok(report)
}

/// One point of the efficiency-at-optimum curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpRow {
    /// `T_c / T_h`
    pub ratio: f64,
    /// Efficiency at maximum power.
    pub eta_star: Option<f64>,
    /// Efficiency at maximum ecological function.
    pub eta_eco: Option<f64>,
    pub eta_carnot: Option<f64>,
    pub eta_ca: Option<f64>,
    pub power_opt: Option<OptimumReport>,
    pub eco_opt: Option<OptimumReport>,
}

/// One point of the COP-at-optimum curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopRow {
    pub ratio: f64,
    /// COP at maximum figure of merit.
    pub cop_star: Option<f64>,
    /// COP at maximum ecological function.
    pub cop_eco: Option<f64>,
    pub cop_carnot: Option<f64>,
    pub cop_yan: Option<f64>,
    pub chi_opt: Option<OptimumReport>,
    pub eco_opt: Option<OptimumReport>,
}

fn at_ratio(template: &CycleConfig, ratio: f64) -> Option<CycleConfig> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return None;
    }
    let mut cfg = *template;
    cfg.cold.temperature = ratio * template.hot.temperature;
    Some(cfg)
}

/// Efficiencies at maximum power and at maximum ecological function against
/// `T_c/T_h`, holding `T_h` of the template fixed. Rows are evaluated in
/// parallel and returned in the order of `ratios`.
pub fn emp_curve(template: &CycleConfig, ratios: &[f64], opts: &SearchOptions) -> Result<Vec<EmpRow>> {
    check_finite_time(template)?;
    ratios
        .par_iter()
        .map(|&ratio| {
            let mut row = EmpRow {
                ratio,
                eta_star: None,
                eta_eco: None,
                eta_carnot: None,
                eta_ca: None,
                power_opt: None,
                eco_opt: None,
            };
            let Some(cfg) = at_ratio(template, ratio) else {
                return Ok(row);
            };
            let bounds = reference_bounds(cfg.hot.temperature, cfg.cold.temperature)?;
            row.eta_carnot = Some(bounds.eta_carnot);
            row.eta_ca = Some(bounds.eta_ca);
            let Some((lo, hi)) = engine_interval(&cfg) else {
                return Ok(row);
            };
            let mut problem = GapProblem::engine(&cfg)?;
            row.power_opt = optional(engine_optimum(&mut problem, EngineObjective::Power, lo, hi, opts))?;
            row.eco_opt =
                optional(engine_optimum(&mut problem, EngineObjective::Ecological, lo, hi, opts))?;
            row.eta_star = row.power_opt.and_then(|r| r.efficiency_or_cop_at_opt);
            row.eta_eco = row.eco_opt.and_then(|r| r.efficiency_or_cop_at_opt);
            Ok(row)
        })
        .collect()
}

/// COPs at maximum `χ` and at maximum ecological function against `T_c/T_h`,
/// holding `T_h` and `Ω_h` of the template fixed.
pub fn cop_curve(template: &CycleConfig, ratios: &[f64], opts: &SearchOptions) -> Result<Vec<CopRow>> {
    check_finite_time(template)?;
    ratios
        .par_iter()
        .map(|&ratio| {
            let mut row = CopRow {
                ratio,
                cop_star: None,
                cop_eco: None,
                cop_carnot: None,
                cop_yan: None,
                chi_opt: None,
                eco_opt: None,
            };
            let Some(cfg) = at_ratio(template, ratio) else {
                return Ok(row);
            };
            let bounds = reference_bounds(cfg.hot.temperature, cfg.cold.temperature)?;
            row.cop_carnot = Some(bounds.cop_carnot);
            row.cop_yan = Some(bounds.cop_yan);
            let Some((lo, hi)) = fridge_interval(&cfg) else {
                return Ok(row);
            };
            let mut problem = GapProblem::fridge(&cfg)?;
            row.chi_opt = optional(fridge_optimum(&mut problem, FridgeObjective::Chi, lo, hi, opts))?;
            row.eco_opt =
                optional(fridge_optimum(&mut problem, FridgeObjective::Ecological, lo, hi, opts))?;
            row.cop_star = row.chi_opt.and_then(|r| r.efficiency_or_cop_at_opt);
            row.cop_eco = row.eco_opt.and_then(|r| r.efficiency_or_cop_at_opt);
            Ok(row)
        })
        .collect()
}

// A flat objective leaves the row's value absent rather than failing the curve.
fn optional(r: Result<OptimumReport>) -> Result<Option<OptimumReport>> {
    match r {
        Ok(report) => Ok(Some(report)),
        Err(Error::FlatObjective { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
