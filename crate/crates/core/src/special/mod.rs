//! Special functions: Laguerre, Hermite, Bessel and Airy, plus the uniform
//! asymptotics of weighted Laguerre polynomials.

pub mod airy;
pub mod asymptotic;
pub mod bessel;
pub mod hermite;
pub mod laguerre;

pub use airy::{airy, airy_all, AiryKind, AiryValues};
pub use asymptotic::{
    classify_regime, classify_regime_with, laguerre_asymptotic, laguerre_asymptotic_with, mu, phi_deriv, phi_map,
    psi_deriv, psi_map, AsymptoticValue, Regime, RegimeClassification, RegimeConstants,
};
pub use bessel::{bessel, BesselKind};
pub use hermite::{hermite_function, hermite_functions, hermite_scaled, hermite_scaled_all};
pub use laguerre::{gamma_ratio, laguerre, laguerre_normalized, laguerre_weighted};

/// `L_k^α(x)` by the three-term recurrence; alias of [`laguerre`].
pub fn laguerre_exact(k: usize, alpha: f64, x: f64) -> crate::Result<f64> {
    laguerre(k, alpha, x)
}
