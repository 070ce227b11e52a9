//! Conical (Mehler) functions `P_{-1/2+iξ}(x)` for real `ξ` and `x ≥ 1`.
//!
//! Evaluated from the Mehler–Dirichlet representation
//!
//! ```text
//! P_{-1/2+iξ}(cosh α) = (√2/π) ∫₀^α cos(ξt) / √(cosh α − cosh t) dt
//! ```
//!
//! With `t = α − u²` and `cosh α − cosh t = 2 sinh(α − u²/2) sinh(u²/2)` the
//! endpoint singularity disappears and, after pulling out `e^{α/2}`,
//!
//! ```text
//! P = (2/π) e^{−α/2} ∫₀^√α 2u cos(ξ(α − u²)) / √((1 − e^{u²−2α})(1 − e^{−u²})) du
//! ```
//!
//! which is free of cancellation and overflow for any `α > 0`.

use std::f64::consts::FRAC_2_PI;

use super::quadrature::gauss_kronrod;
use crate::error::{Error, Result};

/// Default absolute accuracy of [`conical_p`].
pub const DEFAULT_TOL: f64 = 1e-10;

/// Arguments of a conical function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicalArgs {
    pub xi: f64,
    pub x: f64,
    pub tol: f64,
}

impl ConicalArgs {
    pub fn new(xi: f64, x: f64) -> Self {
        ConicalArgs {
            xi,
            x,
            tol: DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.xi.is_finite() {
            return Err(Error::domain("conical_p", "xi", self.xi, "finite"));
        }
        if !(self.x >= 1.0) {
            return Err(Error::domain("conical_p", "x", self.x, "x >= 1"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::domain("conical_p", "tol", self.tol, "tol > 0"));
        }
        Ok(())
    }
}

/// `P_{-1/2+iξ}(x)` to absolute accuracy `args.tol`.
pub fn conical_p(args: &ConicalArgs) -> Result<f64> {
    args.validate()?;
    if args.x == 1.0 {
        return Ok(1.0);
    }
    if args.xi == 0.0 {
        return Ok(legendre_half(args.x));
    }
    mehler_dirichlet(args.xi, args.x.acosh(), args.tol)
}

/// `P_{-1/2+iξ}(cosh α)` parameterized by `α ≥ 0`.
///
/// Used by the image sums, whose arguments `cosh α` overflow long before
/// `α` does.
pub fn conical_p_angle(xi: f64, alpha: f64, tol: f64) -> Result<f64> {
    if !(alpha >= 0.0) || alpha.is_infinite() {
        return Err(Error::domain("conical_p", "alpha", alpha, "0 <= alpha < inf"));
    }
    if !xi.is_finite() {
        return Err(Error::domain("conical_p", "xi", xi, "finite"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("conical_p", "tol", tol, "tol > 0"));
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    if xi == 0.0 {
        return Ok(legendre_half_angle(alpha));
    }
    mehler_dirichlet(xi, alpha, tol)
}

/// Quadrature route, exposed so the `ξ = 0` closed form can check it.
pub(crate) fn mehler_dirichlet(xi: f64, alpha: f64, tol: f64) -> Result<f64> {
    let xi = xi.abs();
    let scale = FRAC_2_PI * (-0.5 * alpha).exp();
    let integrand = |u: f64| {
        let u2 = u * u;
        let g1 = -(u2 - 2.0 * alpha).exp_m1();
        let g2 = -(-u2).exp_m1();
        2.0 * u * (xi * (alpha - u2)).cos() / (g1 * g2).sqrt()
    };
    let inner_tol = tol / scale;
    let integral = gauss_kronrod(integrand, 0.0, alpha.sqrt(), inner_tol).map_err(|e| match e {
        Error::Convergence {
            iterations,
            estimate,
            target,
            ..
        } => Error::Convergence {
            op: "conical_p",
            iterations,
            estimate: estimate * scale,
            target: target * scale,
        },
        other => other,
    })?;
    Ok(scale * integral)
}

/// `P_{-1/2}(x) = 1 / AGM(√((1+x)/2), 1)`, the `ξ = 0` member in closed form.
pub fn legendre_half(x: f64) -> f64 {
    agm((0.5 * (1.0 + x)).sqrt(), 1.0).recip()
}

/// `P_{-1/2}(cosh α)`; dominates `|P_{-1/2+iξ}(cosh α)|` for every real `ξ`.
pub fn legendre_half_angle(alpha: f64) -> f64 {
    agm((0.5 * alpha).cosh(), 1.0).recip()
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let m = 0.5 * (a + b);
        b = a.sqrt() * b.sqrt();
        a = m;
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ₂F₁(1/2 − iξ, 1/2 + iξ; 1; (1 − x)/2) summed term by term.
    fn hypergeometric_oracle(xi: f64, x: f64) -> f64 {
        let z = 0.5 * (1.0 - x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..20_000 {
            let kf = k as f64;
            term *= ((kf + 0.5).powi(2) + xi * xi) / ((kf + 1.0) * (kf + 1.0)) * z;
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 8 {
                break;
            }
        }
        sum
    }

    #[test]
    fn unit_argument_is_one() {
        for xi in [0.0, 0.7, -3.0, 12.0] {
            assert_eq!(conical_p(&ConicalArgs::new(xi, 1.0)).unwrap(), 1.0);
        }
    }

    #[test]
    fn matches_series_at_two() {
        let v = conical_p(&ConicalArgs::new(0.5, 2.0)).unwrap();
        let oracle = hypergeometric_oracle(0.5, 2.0);
        assert!(((v - oracle) / oracle).abs() < 1e-10, "{v} vs {oracle}");
    }

    #[test]
    fn even_in_order() {
        let a = conical_p(&ConicalArgs::new(0.3, 5.0)).unwrap();
        let b = conical_p(&ConicalArgs::new(-0.3, 5.0)).unwrap();
        assert!((a - b).abs() <= 2.0 * DEFAULT_TOL);
    }

    #[test]
    fn zero_order_closed_form_matches_quadrature() {
        for x in [1.001, 1.5, 3.0, 17.0, 400.0] {
            let alpha = f64::acosh(x);
            let quad = mehler_dirichlet(0.0, alpha, 1e-13).unwrap();
            assert!((quad - legendre_half(x)).abs() < 1e-12, "x={x}");
            assert!((legendre_half_angle(alpha) - legendre_half(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn near_unit_argument() {
        let x = 1.0 + 1e-9;
        let v = conical_p(&ConicalArgs::new(2.0, x)).unwrap();
        assert!((v - hypergeometric_oracle(2.0, x)).abs() < 1e-10);
    }

    #[test]
    fn huge_angles_do_not_overflow() {
        let v = conical_p_angle(1.3, 900.0, 1e-12).unwrap();
        assert!(v.abs() < 1e-190);
        assert!(legendre_half_angle(900.0) > 0.0);
    }

    #[test]
    fn positive_and_decaying_for_small_order() {
        for xi in [0.0, 0.05, 0.1] {
            let mut prev = f64::INFINITY;
            let mut x = 2.0;
            while x <= 1024.0 {
                let v = conical_p(&ConicalArgs::new(xi, x).with_tol(1e-13)).unwrap();
                assert!(v > 0.0 && v <= 1.0, "xi={xi} x={x} v={v}");
                assert!(v < prev, "xi={xi} x={x}");
                prev = v;
                x *= 2.0;
            }
            assert!(prev < 0.2);
        }
    }

    #[test]
    fn bounded_by_zero_order() {
        for &(xi, alpha) in &[(0.4, 2.0), (3.0, 5.0), (8.0, 0.3), (1.0, 30.0)] {
            let v = conical_p_angle(xi, alpha, 1e-13).unwrap();
            assert!(v.abs() <= legendre_half_angle(alpha) + 1e-13);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            conical_p(&ConicalArgs::new(0.5, 0.99)),
            Err(Error::Domain { name: "x", .. })
        ));
        assert!(conical_p(&ConicalArgs::new(0.5, f64::NAN)).is_err());
        assert!(conical_p(&ConicalArgs::new(0.5, 2.0).with_tol(0.0)).is_err());
        assert!(conical_p_angle(0.5, -1.0, 1e-10).is_err());
    }

    #[test]
    fn small_angle_tends_to_one() {
        let v = conical_p_angle(5.0, 1e-8, 1e-14).unwrap();
        assert!((v - 1.0).abs() < 1e-7);
    }
}
