//! Closed-form GKSL evolution of the detector qubit during an isochore.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::response::RateData;

/// Slack allowed on the unit-ball constraint.
pub const BALL_SLACK: f64 = 1e-12;

/// Qubit state `ρ = (I + r·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let v = BlochVector { r1, r2, r3 };
        if !(v.norm() <= 1.0 + BALL_SLACK) {
            return Err(Error::invalid(
                "bloch_vector",
                format!("norm {} exceeds 1", v.norm()),
            ));
        }
        Ok(v)
    }

    /// Diagonal state with polarization `r3`.
    pub fn diagonal(r3: f64) -> Result<Self> {
        Self::new(0.0, 0.0, r3)
    }

    pub fn norm(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3).sqrt()
    }

    /// Mean energy `tr(ρ H)` for `H = Ω σ₃ / 2`.
    pub fn energy(&self, omega: f64) -> f64 {
        0.5 * omega * self.r3
    }
}

/// Duration of an isochoric stroke, in units of the inverse squared coupling.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct StrokeClock(f64);

impl StrokeClock {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau >= 0.0) {
            return Err(Error::invalid("tau", format!("{tau} must be nonnegative")));
        }
        Ok(StrokeClock(tau))
    }

    pub fn tau(self) -> f64 {
        self.0
    }
}

/// Evolve `r0` for a time `tau` at gap `omega` under the given rates.
///
/// Populations relax as `r₃(τ) = e^{−γτ} r₃(0) + κ(1 − e^{−γτ})`; coherences
/// rotate at the gap and decay at half the population rate,
/// `r₁ + i r₂ → e^{−γτ/2} e^{−iΩτ} (r₁ + i r₂)`.
pub fn evolve_bloch(r0: BlochVector, rates: &RateData, tau: StrokeClock, omega: f64) -> BlochVector {
    let t = tau.tau();
    if t == 0.0 {
        return r0;
    }
    let gt = rates.gamma * t;
    let decay = (-gt).exp();
    let r3 = decay * r0.r3 - rates.kappa * (-gt).exp_m1();

    let amp = (-0.5 * gt).exp();
    let (sin, cos) = (omega * t).sin_cos();
    BlochVector {
        r1: amp * (r0.r1 * cos + r0.r2 * sin),
        r2: amp * (r0.r2 * cos - r0.r1 * sin),
        r3,
    }
}

/// Gibbs state of the gap `omega` at temperature `temperature`.
pub fn asymptotic_state(omega: f64, temperature: f64) -> BlochVector {
    BlochVector {
        r1: 0.0,
        r2: 0.0,
        r3: -(0.5 * omega / temperature).tanh(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::{rate_data, BathSpec, Boundary};
    use proptest::prelude::*;

    fn synthetic(gamma: f64, kappa: f64) -> RateData {
        RateData {
            gamma_plus: 0.5 * gamma * (1.0 + kappa),
            gamma_minus: 0.5 * gamma * (1.0 - kappa),
            gamma,
            kappa,
            truncated: false,
        }
    }

    fn clock(t: f64) -> StrokeClock {
        StrokeClock::new(t).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let r0 = BlochVector::new(0.3, -0.2, 0.5).unwrap();
        assert_eq!(evolve_bloch(r0, &synthetic(1.3, -0.4), clock(0.0), 0.7), r0);
    }

    #[test]
    fn long_time_reaches_fixed_point() {
        let rates = synthetic(2.0, -0.35);
        let r0 = BlochVector::new(0.6, 0.0, 0.8).unwrap();
        let r = evolve_bloch(r0, &rates, clock(25.0), 1.0);
        assert!((r.r3 - rates.kappa).abs() < 1e-20);
        // coherences decay at half the rate
        assert!(r.r1.abs() <= (-25.0f64).exp() && r.r2.abs() <= (-25.0f64).exp());

        let d = evolve_bloch(BlochVector::diagonal(0.8).unwrap(), &rates, clock(25.0), 1.0);
        assert_eq!((d.r1, d.r2), (0.0, 0.0));
    }

    #[test]
    fn half_life() {
        let r = evolve_bloch(BlochVector::default(), &synthetic(1.0, 1.0), clock(2f64.ln()), 0.3);
        assert!((r.r3 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_values() {
        let hot = asymptotic_state(1.0, 1e12);
        assert!(hot.norm() < 1e-12);
        let r = asymptotic_state(1.0, 2.0);
        assert!((r.r3 + 0.25f64.tanh()).abs() < 1e-16);
        assert!((r.r3 + 0.244919).abs() < 1e-6);
    }

    #[test]
    fn asymptotic_state_is_fixed_point_of_physical_rates() {
        for boundary in Boundary::ALL {
            let bath = BathSpec::new(0.3, 0.01, boundary).unwrap();
            let rates = rate_data(0.4, &bath).unwrap();
            let gibbs = asymptotic_state(0.4, 0.3);
            for tau in [0.1, 1.0, 17.0] {
                let r = evolve_bloch(gibbs, &rates, clock(tau), 0.4);
                assert!((r.r3 - gibbs.r3).abs() < 1e-12);
                assert_eq!((r.r1, r.r2), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(StrokeClock::new(-1e-9).is_err());
        assert!(StrokeClock::new(f64::NAN).is_err());
        assert!(BlochVector::new(1.0, 0.5, 0.0).is_err());
        assert!(BlochVector::new(0.6, 0.0, 0.8).is_ok());
    }

    fn unit_vector() -> impl Strategy<Value = BlochVector> {
        (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(th, ph)| BlochVector {
            r1: th.sin() * ph.cos(),
            r2: th.sin() * ph.sin(),
            r3: th.cos(),
        })
    }

    proptest! {
        #[test]
        fn semigroup_on_populations(
            r3 in -1.0..1.0f64,
            gamma in 0.01..5.0f64,
            kappa in -0.999..0.0f64,
            t1 in 0.0..10.0f64,
            t2 in 0.0..10.0f64,
        ) {
            let rates = synthetic(gamma, kappa);
            let r0 = BlochVector::diagonal(r3).unwrap();
            let two = evolve_bloch(evolve_bloch(r0, &rates, clock(t1), 0.5), &rates, clock(t2), 0.5);
            let one = evolve_bloch(r0, &rates, clock(t1 + t2), 0.5);
            prop_assert!((two.r3 - one.r3).abs() < 1e-12);
        }

        #[test]
        fn monotone_approach(
            r3 in -1.0..1.0f64,
            gamma in 0.01..5.0f64,
            kappa in -0.999..0.0f64,
            t in 0.0..5.0f64,
            dt in 0.01..1.0f64,
        ) {
            prop_assume!((r3 - kappa).abs() > 1e-6);
            let rates = synthetic(gamma, kappa);
            let r0 = BlochVector::diagonal(r3).unwrap();
            let a = evolve_bloch(r0, &rates, clock(t), 0.5);
            let b = evolve_bloch(r0, &rates, clock(t + dt), 0.5);
            prop_assert!((b.r3 - kappa).abs() < (a.r3 - kappa).abs());
        }

        #[test]
        fn stays_in_ball(
            r0 in unit_vector(),
            gamma in 0.01..5.0f64,
            kappa in -0.999..0.999f64,
            frac in 0.0..1.0f64,
            omega in 0.01..3.0f64,
        ) {
            let rates = synthetic(gamma, kappa);
            let tau = clock(frac * 50.0 / gamma);
            let r = evolve_bloch(r0, &rates, tau, omega);
            prop_assert!(r.norm() <= 1.0 + BALL_SLACK, "norm {}", r.norm());
        }
    }
}
