//! Adaptive Gauss–Kronrod quadrature.
//!
//! Globally adaptive bisection driven by the 7/15-point Gauss–Kronrod pair,
//! with the QUADPACK error scaling. The segment with the largest error
//! estimate is split until the summed estimate meets the target.

#![allow(clippy::excessive_precision)] // node tables copied at full published precision

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Maximum number of bisections before giving up.
pub const MAX_SUBDIVISIONS: usize = 4000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();

    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Segment { a, b, value, error }
}

/// Integrate a smooth `f` over `[a, b]` to absolute accuracy `tol`.
///
/// The target is relaxed to a few ulps of the result when `tol` is below
/// what double precision can deliver.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain("gauss_kronrod", "tol", tol, "tol > 0"));
    }
    if a == b {
        return Ok(0.0);
    }

    let first = kronrod15(&f, a, b);
    let mut total = first.value;
    let mut total_error = first.error;
    let mut heap = BinaryHeap::from([first]);
    let mut splits = 0;

    loop {
        let target = tol.max(64.0 * f64::EPSILON * total.abs());
        if total.is_finite() && total_error <= target {
            return Ok(total);
        }
        if !total.is_finite() || splits >= MAX_SUBDIVISIONS {
            return Err(Error::Convergence {
                op: "gauss_kronrod",
                iterations: splits,
                estimate: total_error,
                target,
            });
        }

        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);

        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        splits += 1;

        // Re-sum periodically so incremental updates cannot drift.
        if splits % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_error = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Integrate `f` over `(a, b)` where `f` may carry an inverse-square-root
/// singularity at `b`.
///
/// The substitution `t = b - u²` turns `∫ f(t) dt` into
/// `∫₀^√(b-a) 2u f(b - u²) du`, whose integrand stays bounded at `u = 0`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::domain("integrate_adaptive", "b - a", b - a, "a < b"));
    }
    let width = (b - a).sqrt();
    gauss_kronrod(|u| 2.0 * u * f(b - u * u), 0.0, width, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn constant_is_exact() {
        let v = integrate_adaptive(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let v = integrate_adaptive(|t| 1.0 / (1.0 - t).sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn cosine_quarter_period() {
        let v = integrate_adaptive(f64::cos, 0.0, FRAC_PI_2, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn plain_rule_handles_oscillation() {
        let v = gauss_kronrod(|t| (40.0 * t).cos(), 0.0, PI, 1e-12).unwrap();
        let exact = (40.0 * PI).sin() / 40.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn sharp_peak_needs_refinement() {
        let eps = 1e-4;
        let v = gauss_kronrod(|t| eps / (t * t + eps * eps), -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((v - exact).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            integrate_adaptive(|t| t, 1.0, 0.0, 1e-8),
            Err(Error::Domain { .. })
        ));
        assert!(gauss_kronrod(|t| t, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = gauss_kronrod(|t| 1.0 / t, 0.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::Convergence { .. })), "{r:?}");
    }
}
