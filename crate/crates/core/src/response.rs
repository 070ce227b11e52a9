//! Response of a static detector to the conformally coupled field in the
//! Hartle–Hawking state of a spinless BTZ black hole.
//!
//! Lengths are in units of the AdS radius (`ℓ = 1`) and times are rescaled by
//! the squared coupling, so rates are dimensionless.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::conical::{conical_p_angle, legendre_half_angle};

pub const DEFAULT_N_MAX: usize = 200;
pub const DEFAULT_TERM_TOL: f64 = 1e-12;

/// Field boundary condition at spatial infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    /// ζ = −1
    Neumann,
    /// ζ = 0
    Transparent,
    /// ζ = +1
    Dirichlet,
}

impl Boundary {
    pub const ALL: [Boundary; 3] = [Boundary::Neumann, Boundary::Transparent, Boundary::Dirichlet];

    pub fn zeta(self) -> i32 {
        match self {
            Boundary::Neumann => -1,
            Boundary::Transparent => 0,
            Boundary::Dirichlet => 1,
        }
    }

    pub fn from_zeta(zeta: i64) -> Result<Self> {
        match zeta {
            -1 => Ok(Boundary::Neumann),
            0 => Ok(Boundary::Transparent),
            1 => Ok(Boundary::Dirichlet),
            other => Err(Error::invalid(
                "zeta",
                format!("{other} is not one of -1, 0, 1"),
            )),
        }
    }
}

/// A thermal BTZ environment as seen by a static detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    /// Local KMS temperature.
    pub temperature: f64,
    /// Black hole mass parameter; the horizon sits at `r = √M`.
    pub mass: f64,
    pub boundary: Boundary,
    /// Largest image index summed.
    pub n_max: usize,
    /// An image term below this magnitude ends the sum.
    pub term_tol: f64,
}

impl BathSpec {
    pub fn new(temperature: f64, mass: f64, boundary: Boundary) -> Result<Self> {
        let bath = BathSpec {
            temperature,
            mass,
            boundary,
            n_max: DEFAULT_N_MAX,
            term_tol: DEFAULT_TERM_TOL,
        };
        bath.validate()?;
        Ok(bath)
    }

    pub fn with_truncation(mut self, n_max: usize, term_tol: f64) -> Result<Self> {
        self.n_max = n_max;
        self.term_tol = term_tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_temperature(mut self, temperature: f64) -> Result<Self> {
        self.temperature = temperature;
        self.validate()?;
        Ok(self)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::invalid(
                "temperature",
                format!("{} must be positive and finite", self.temperature),
            ));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::invalid(
                "mass",
                format!("{} must be positive and finite", self.mass),
            ));
        }
        if !(self.term_tol > 0.0) {
            return Err(Error::invalid(
                "term_tol",
                format!("{} must be positive", self.term_tol),
            ));
        }
        Ok(())
    }

    fn zeta(&self) -> f64 {
        f64::from(self.boundary.zeta())
    }

    // Accuracy asked of each conical function inside the image sum.
    fn conical_tol(&self) -> f64 {
        (0.1 * self.term_tol).min(crate::specfun::conical::DEFAULT_TOL)
    }
}

/// Local temperature `T = √M / (2π √(r² − M))` of a static detector at radius `r`.
pub fn kms_temperature(r: f64, mass: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::domain("kms_temperature", "mass", mass, "M > 0"));
    }
    let horizon = mass.sqrt();
    if !(r > horizon) {
        return Err(Error::domain(
            "kms_temperature",
            "r",
            r,
            "r > sqrt(M) (outside the horizon)",
        ));
    }
    Ok(horizon / (2.0 * PI * ((r - horizon) * (r + horizon)).sqrt()))
}

/// Which of the two image families `cosh αₙ∓`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageSign {
    Minus,
    Plus,
}

/// `cosh αₙ∓ = (1 + 4π²T²) cosh(2πn√M) ∓ 4π²T²`.
pub fn cosh_alpha(n: i64, temperature: f64, mass: f64, sign: ImageSign) -> f64 {
    let a = 4.0 * PI * PI * temperature * temperature;
    let c = (2.0 * PI * n as f64 * mass.sqrt()).cosh();
    match sign {
        ImageSign::Minus => (1.0 + a) * c - a,
        ImageSign::Plus => (1.0 + a) * c + a,
    }
}

/// `αₙ∓` itself, accurate near zero and free of overflow for large `n`.
pub fn image_angle(n: i64, temperature: f64, mass: f64, sign: ImageSign) -> f64 {
    let a = 4.0 * PI * PI * temperature * temperature;
    let half = PI * n.unsigned_abs() as f64 * mass.sqrt();
    if half > 300.0 {
        return (1.0 + a).ln() + 2.0 * half;
    }
    // cosh α − 1 = 2 sinh²(α/2)
    let sh = half.sinh();
    let mut s2 = (1.0 + a) * sh * sh;
    if sign == ImageSign::Plus {
        s2 += a;
    }
    2.0 * s2.sqrt().asinh()
}

/// `Σₙ [P(cosh αₙ⁻) − ζ P(cosh αₙ⁺)]` over all integers `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSum {
    pub value: f64,
    /// Highest image index included.
    pub terms: usize,
    /// True when `n_max` was reached before the terms fell below `term_tol`.
    pub truncated: bool,
}

/// The Legendre image sum shared by `Γ(Ω)` and `Γ(−Ω)`; depends on `|Ω|` only.
pub fn image_sum(omega: f64, bath: &BathSpec) -> Result<ImageSum> {
    bath.validate()?;
    let xi = omega.abs() / (2.0 * PI * bath.temperature);
    let zeta = bath.zeta();
    let tol = bath.conical_tol();
    let (t, m) = (bath.temperature, bath.mass);

    let pair = |n: i64| -> Result<f64> {
        let minus = conical_p_angle(xi, image_angle(n, t, m, ImageSign::Minus), tol)?;
        if zeta == 0.0 {
            return Ok(minus);
        }
        let plus = conical_p_angle(xi, image_angle(n, t, m, ImageSign::Plus), tol)?;
        Ok(minus - zeta * plus)
    };

    let mut value = pair(0)?;
    let mut terms = 0;
    let mut truncated = true;
    // Image n_max + 1 is only bounded, never added.
    for n in 1..=bath.n_max + 1 {
        // |P_{-1/2+iξ}| ≤ P_{-1/2}, and αₙ⁺ > αₙ⁻.
        let alpha = image_angle(n as i64, t, m, ImageSign::Minus);
        let bound = 2.0 * (1.0 + zeta.abs()) * legendre_half_angle(alpha);
        if bound < bath.term_tol {
            truncated = false;
            break;
        }
        if n > bath.n_max {
            break;
        }
        value += 2.0 * pair(n as i64)?;
        terms = n;
    }
    Ok(ImageSum {
        value,
        terms,
        truncated,
    })
}

/// `1 / (e^x + 1)` without overflow.
fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Transition rate `Γ(Ω)` for a signed gap; `Ω > 0` is excitation.
pub fn transition_rate(omega: f64, bath: &BathSpec) -> Result<f64> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::domain(
            "transition_rate",
            "omega",
            omega,
            "nonzero and finite",
        ));
    }
    let sum = image_sum(omega, bath)?;
    Ok(0.5 * fermi(omega / bath.temperature) * sum.value)
}

/// Up and down rates at a gap together with the decay rate and asymptotic
/// polarization they imply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateData {
    /// Γ(Ω)
    pub gamma_plus: f64,
    /// Γ(−Ω)
    pub gamma_minus: f64,
    /// γ = Γ(Ω) + Γ(−Ω)
    pub gamma: f64,
    /// κ = (Γ(Ω) − Γ(−Ω)) / γ
    pub kappa: f64,
    pub truncated: bool,
}

impl RateData {
    pub fn from_rates(gamma_plus: f64, gamma_minus: f64) -> Self {
        let gamma = gamma_plus + gamma_minus;
        RateData {
            gamma_plus,
            gamma_minus,
            gamma,
            kappa: (gamma_plus - gamma_minus) / gamma,
            truncated: false,
        }
    }
}

pub fn rate_data(omega: f64, bath: &BathSpec) -> Result<RateData> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain("rate_data", "omega", omega, "omega > 0"));
    }
    let sum = image_sum(omega, bath)?;
    let x = omega / bath.temperature;
    let mut rates = RateData::from_rates(0.5 * fermi(x) * sum.value, 0.5 * fermi(-x) * sum.value);
    rates.truncated = sum.truncated;
    Ok(rates)
}

/// The image-sum Wightman function along the static worldline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pullback {
    pub value: Complex64,
    pub terms: usize,
    pub truncated: bool,
}

/// `W(s − iε)` for proper-time separation `s` along the static detector.
///
/// With `b = 1/(4π²T²)` the geodesic-interval function of the `n`-th image is
/// `σₙ = (1 + b) cosh(2πn√M) − 1 − b cosh(2πT(s − iε))`, and each image
/// contributes `[σₙ^{−1/2} − ζ (σₙ + 2)^{−1/2}] / (4√2 π)` on the principal
/// branch. Only used to cross-check [`transition_rate`].
pub fn wightman_pullback(s: f64, bath: &BathSpec, epsilon: f64) -> Result<Pullback> {
    bath.validate()?;
    if !(epsilon > 0.0) {
        return Err(Error::domain("wightman_pullback", "epsilon", epsilon, "epsilon > 0"));
    }
    let t = bath.temperature;
    let b = 1.0 / (4.0 * PI * PI * t * t);
    let c = 2.0 * PI * bath.mass.sqrt();
    let zeta = bath.zeta();
    let norm = 1.0 / (4.0 * 2f64.sqrt() * PI);

    // σₙ = 2(1 + b) sinh²(cn/2) − 2b sinh²(z/2), z = 2πT(s − iε)
    let z = Complex64::new(2.0 * PI * t * s, -2.0 * PI * t * epsilon);
    let sh = (z * 0.5).sinh();
    let time_part = sh * sh * (2.0 * b);

    let kernel = |n: usize| -> (Complex64, f64) {
        let shn = (0.5 * c * n as f64).sinh();
        let space = 2.0 * (1.0 + b) * shn * shn;
        let sigma = Complex64::new(space, 0.0) - time_part;
        let mut k = sigma.sqrt().inv();
        if zeta != 0.0 {
            k -= (sigma + 2.0).sqrt().inv() * zeta;
        }
        (k, space)
    };

    let (mut value, _) = kernel(0);
    let mut terms = 0;
    let mut truncated = true;
    for n in 1..=bath.n_max {
        let (k, space) = kernel(n);
        let past_light_cone = space > 2.0 * time_part.norm();
        if past_light_cone && 2.0 * norm * k.norm() < bath.term_tol {
            truncated = false;
            break;
        }
        value += k * 2.0;
        terms = n;
    }
    Ok(Pullback {
        value: value * norm,
        terms,
        truncated,
    })
}
