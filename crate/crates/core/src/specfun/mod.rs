//! Special functions needed by the detector response.

pub mod conical;
pub mod quadrature;

pub use conical::{conical_p, conical_p_angle, legendre_half, ConicalArgs};
pub use quadrature::{gauss_kronrod, integrate_adaptive};
