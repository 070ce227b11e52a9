//! Four-stroke quantum Otto cycle with finite-time isochores.
//!
//! Stroke order: adiabatic expansion `Ω_c → Ω_h`, hot isochore for `τ_h`,
//! adiabatic compression `Ω_h → Ω_c`, cold isochore for `τ_c`. Adiabats are
//! instantaneous. Each reported cycle starts from the cold Gibbs state.

use serde::{Deserialize, Serialize};

use crate::dynamics::{asymptotic_state, evolve_bloch, StrokeClock};
use crate::error::{Error, Result};
use crate::response::{rate_data, BathSpec, RateData};

/// How the entropy production of a cycle is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyConvention {
    /// `σ = −(Q_h/T_h + Q_c/T_c)`, nonnegative for a closed cycle.
    #[default]
    Standard,
    /// `S = Q_c/T_c − Q_h/T_h`.
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    pub omega_c: f64,
    pub omega_h: f64,
    pub hot: BathSpec,
    pub cold: BathSpec,
    pub tau_h: f64,
    pub tau_c: f64,
    pub entropy: EntropyConvention,
}

impl CycleConfig {
    pub fn validate(&self) -> Result<()> {
        self.hot.validate()?;
        self.cold.validate()?;
        if !(self.omega_c > 0.0) {
            return Err(Error::invalid("omega_c", format!("{} must be positive", self.omega_c)));
        }
        if !(self.omega_h > self.omega_c && self.omega_h.is_finite()) {
            return Err(Error::invalid(
                "omega_h",
                format!("{} must exceed omega_c = {}", self.omega_h, self.omega_c),
            ));
        }
        if !(self.cold.temperature < self.hot.temperature) {
            return Err(Error::invalid(
                "Tc",
                format!(
                    "{} must be below Th = {}",
                    self.cold.temperature, self.hot.temperature
                ),
            ));
        }
        for (key, tau) in [("tau_h", self.tau_h), ("tau_c", self.tau_c)] {
            if !(tau >= 0.0 && tau.is_finite()) {
                return Err(Error::invalid(key, format!("{tau} must be finite and nonnegative")));
            }
        }
        Ok(())
    }

    pub fn tau_cycle(&self) -> f64 {
        self.tau_h + self.tau_c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineMetrics {
    /// `1 − Ω_c/Ω_h`
    pub efficiency: f64,
    pub power: f64,
    pub entropy_rate: f64,
    pub ecological: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FridgeMetrics {
    /// `Ω_c/(Ω_h − Ω_c)`
    pub cop: f64,
    pub cooling_power: f64,
    pub chi: f64,
    pub ecological: f64,
}

/// Energy bookkeeping of one cycle. Energies are means; positive heat flows
/// into the qubit and positive work is done on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    pub r3_in: f64,
    pub r3_h: f64,
    pub r3_c: f64,
    pub w1: f64,
    pub qh: f64,
    pub w3: f64,
    pub qc: f64,
    /// Extracted work `−(W₁ + W₃)`.
    pub w_tot: f64,
    pub tau_cycle: f64,
    /// `|r₃` after the cold isochore `− r₃` at the start`|`.
    pub closure_defect: f64,
    /// `W_tot / Q_h` at finite time, when `Q_h > 0`.
    pub finite_time_efficiency: Option<f64>,
    pub hot_rates: RateData,
    pub cold_rates: RateData,
    pub engine: Option<EngineMetrics>,
    pub fridge: Option<FridgeMetrics>,
}

impl CycleResult {
    /// Change of internal energy over the cycle, `(Ω_c/2)(r₃_final − r₃_in)`.
    pub fn internal_energy_change(&self, cfg: &CycleConfig) -> f64 {
        0.5 * cfg.omega_c * (self.r3_c - self.r3_in)
    }

    /// True if either bath's image sum hit its `n_max` cap.
    pub fn truncated(&self) -> bool {
        self.hot_rates.truncated || self.cold_rates.truncated
    }
}

/// Carnot and finite-time reference bounds for a pair of bath temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBounds {
    pub eta_carnot: f64,
    /// Curzon–Ahlborn efficiency.
    pub eta_ca: f64,
    pub cop_carnot: f64,
    /// Yan–Chen COP.
    pub cop_yan: f64,
}

pub fn reference_bounds(t_h: f64, t_c: f64) -> Result<ReferenceBounds> {
    if !(t_c > 0.0) {
        return Err(Error::domain("reference_bounds", "Tc", t_c, "Tc > 0"));
    }
    if !(t_c < t_h) {
        return Err(Error::domain("reference_bounds", "Tc", t_c, "Tc < Th"));
    }
    let cop_carnot = t_c / (t_h - t_c);
    Ok(ReferenceBounds {
        eta_carnot: (t_h - t_c) / t_h,
        eta_ca: 1.0 - (t_c / t_h).sqrt(),
        cop_carnot,
        cop_yan: (1.0 + cop_carnot).sqrt() - 1.0,
    })
}

pub fn run_cycle(cfg: &CycleConfig) -> Result<CycleResult> {
    cfg.validate()?;
    let hot = rate_data(cfg.omega_h, &cfg.hot)?;
    let cold = rate_data(cfg.omega_c, &cfg.cold)?;
    run_cycle_with_rates(cfg, &hot, &cold)
}

/// [`run_cycle`] with the isochore rates supplied by the caller.
///
/// `hot` must be the hot-bath rates at `Ω_h` and `cold` the cold-bath rates
/// at `Ω_c`; optimizers reuse whichever side stays fixed.
pub fn run_cycle_with_rates(cfg: &CycleConfig, hot: &RateData, cold: &RateData) -> Result<CycleResult> {
    cfg.validate()?;
    let (oc, oh) = (cfg.omega_c, cfg.omega_h);

    let start = asymptotic_state(oc, cfg.cold.temperature);
    let w1 = 0.5 * (oh - oc) * start.r3;

    let after_hot = evolve_bloch(start, hot, StrokeClock::new(cfg.tau_h)?, oh);
    let qh = 0.5 * oh * (after_hot.r3 - start.r3);
    let w3 = 0.5 * (oc - oh) * after_hot.r3;

    let after_cold = evolve_bloch(after_hot, cold, StrokeClock::new(cfg.tau_c)?, oc);
    let qc = 0.5 * oc * (after_cold.r3 - after_hot.r3);

    let mut res = CycleResult {
        r3_in: start.r3,
        r3_h: after_hot.r3,
        r3_c: after_cold.r3,
        w1,
        qh,
        w3,
        qc,
        w_tot: -(w1 + w3),
        tau_cycle: cfg.tau_cycle(),
        closure_defect: (after_cold.r3 - start.r3).abs(),
        finite_time_efficiency: (qh > 0.0).then(|| -(w1 + w3) / qh),
        hot_rates: *hot,
        cold_rates: *cold,
        engine: None,
        fridge: None,
    };
    res.engine = engine_metrics(&res, cfg).ok();
    res.fridge = fridge_metrics(&res, cfg).ok();
    Ok(res)
}

/// Entropy change of the baths over one cycle under the configured convention.
pub fn entropy_per_cycle(res: &CycleResult, cfg: &CycleConfig) -> f64 {
    let from_hot = res.qh / cfg.hot.temperature;
    let from_cold = res.qc / cfg.cold.temperature;
    match cfg.entropy {
        EntropyConvention::Standard => -(from_hot + from_cold),
        EntropyConvention::Paper => from_cold - from_hot,
    }
}

impl EngineMetrics {
    /// Metrics without the regime check; the optimizer needs them on the
    /// whole search interval.
    pub fn evaluate(res: &CycleResult, cfg: &CycleConfig) -> Self {
        let tau = res.tau_cycle;
        let power = res.w_tot / tau;
        let entropy_rate = entropy_per_cycle(res, cfg) / tau;
        EngineMetrics {
            efficiency: 1.0 - cfg.omega_c / cfg.omega_h,
            power,
            entropy_rate,
            ecological: power - cfg.cold.temperature * entropy_rate,
        }
    }
}

impl FridgeMetrics {
    pub fn evaluate(res: &CycleResult, cfg: &CycleConfig) -> Self {
        let tau = res.tau_cycle;
        let cop = cfg.omega_c / (cfg.omega_h - cfg.omega_c);
        let (t_h, t_c) = (cfg.hot.temperature, cfg.cold.temperature);
        let cop_carnot = t_c / (t_h - t_c);
        FridgeMetrics {
            cop,
            cooling_power: res.qc / tau,
            chi: cop * res.qc / tau,
            ecological: (res.qc - cop_carnot * t_h * entropy_per_cycle(res, cfg)) / tau,
        }
    }
}

pub fn engine_metrics(res: &CycleResult, cfg: &CycleConfig) -> Result<EngineMetrics> {
    if !(res.w_tot > 0.0) {
        return Err(Error::Regime {
            op: "engine_metrics",
            regime: "engine",
            detail: format!("extracted work {} is not positive", res.w_tot),
        });
    }
    if !(res.tau_cycle > 0.0) {
        return Err(Error::Regime {
            op: "engine_metrics",
            regime: "engine",
            detail: "cycle has zero duration".into(),
        });
    }
    Ok(EngineMetrics::evaluate(res, cfg))
}

pub fn fridge_metrics(res: &CycleResult, cfg: &CycleConfig) -> Result<FridgeMetrics> {
    if !(res.qc >= 0.0 && res.qh <= 0.0) {
        return Err(Error::Regime {
            op: "fridge_metrics",
            regime: "refrigerator",
            detail: format!("heat from cold bath {} and from hot bath {}", res.qc, res.qh),
        });
    }
    if !(res.tau_cycle > 0.0) {
        return Err(Error::Regime {
            op: "fridge_metrics",
            regime: "refrigerator",
            detail: "cycle has zero duration".into(),
        });
    }
    Ok(FridgeMetrics::evaluate(res, cfg))
}

/// Open interval of hot gaps `(Ω_c, Ω_c T_h/T_c)` where the asymptotic cycle
/// extracts work; `None` when it is empty.
pub fn engine_window(omega_c: f64, t_h: f64, t_c: f64) -> Option<(f64, f64)> {
    let hi = omega_c * t_h / t_c;
    (hi > omega_c).then_some((omega_c, hi))
}

/// Open interval of cold gaps `(0, Ω_h T_c/T_h)` where the asymptotic cycle
/// refrigerates; `None` when it is empty.
pub fn fridge_window(omega_h: f64, t_h: f64, t_c: f64) -> Option<(f64, f64)> {
    let hi = omega_h * t_c / t_h;
    (hi > 0.0 && hi < omega_h).then_some((0.0, hi))
}
