//! Regime-dispatched uniform asymptotics of the weighted Laguerre functions
//! `w_k(x) = Γ(k+1)/Γ(k+n) · L_k^{n−1}(x) e^{−x/2} x^{n−1}`.
//!
//! With `μ = 2(2k+n)` and `t = x/μ`, the Bessel regimes use Erdélyi's form
//!
//! ```text
//! w_k(x) ≈ 2^{n−3/2} μ^{1−n/2} x^{n/2−1} (ψ(t)/ψ′(t))^{1/2} J_{n−1}(μ ψ(t))
//! ```
//!
//! and the Airy regimes
//!
//! ```text
//! w_k(x) ≈ (−1)^k √π 2^{5/6} N^{N+1/6} e^{−N} / Γ(k+n) · x^{n/2−1} (−φ′(t))^{−1/2} Ai(ξ),
//! ```
//!
//! with `N = μ/4` and `ξ = −μ^{2/3} φ(t)`. Each regime then substitutes the
//! appropriate leading behaviour of `J` or `Ai`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use super::airy::{airy, airy_envelope, AiryKind};
use super::bessel::{bessel, BesselKind};
use crate::error::{invalid, Error, Result};

/// Half-width in `s = 1 − t` of the band where `φ` is taken from its power
/// series instead of the closed form.
const PHI_SERIES_BAND: f64 = 0.1;

/// The six asymptotic regimes of `w_k(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    BesselSmall,
    BesselOscillatory,
    AiryLeft,
    AiryCenter,
    AiryRight,
    Exponential,
}

impl Regime {
    pub const ALL: [Regime; 6] = [
        Regime::BesselSmall,
        Regime::BesselOscillatory,
        Regime::AiryLeft,
        Regime::AiryCenter,
        Regime::AiryRight,
        Regime::Exponential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::BesselSmall => "bessel_small",
            Regime::BesselOscillatory => "bessel_oscillatory",
            Regime::AiryLeft => "airy_left",
            Regime::AiryCenter => "airy_center",
            Regime::AiryRight => "airy_right",
            Regime::Exponential => "exponential",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Regime boundaries: Bessel up to `bμ`, Airy from `aμ`, a turning-point
/// window of half-width `cμ^{1/3}`, and the threshold `k0` below which the
/// asymptotics are refused.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k0: usize,
}

impl Default for RegimeConstants {
    fn default() -> Self {
        Self {
            a: 0.25,
            b: 0.75,
            c: 1.0,
            k0: 30,
        }
    }
}

impl RegimeConstants {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.a && self.a < self.b && self.b < 1.0) {
            return Err(invalid(
                "a,b",
                format!("need 0 < a < b < 1, got a={} b={}", self.a, self.b),
            ));
        }
        if !(self.c > 0.0) {
            return Err(invalid("c", format!("need c > 0, got {}", self.c)));
        }
        Ok(())
    }
}

/// Which regime `(k, n, x)` falls in, together with `μ = 2(2k+n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeClassification {
    pub regime: Regime,
    pub mu: f64,
}

/// `μ = 2(2k+n)`.
pub fn mu(k: usize, n: usize) -> f64 {
    2.0 * (2 * k + n) as f64
}

/// Classify with the default constants.
pub fn classify_regime(k: usize, n: usize, x: f64) -> RegimeClassification {
    classify_regime_with(k, n, x, &RegimeConstants::default())
}

/// Classify `x` against the regime table. Overlaps are resolved in the
/// order BesselSmall, BesselOscillatory, AiryCenter, AiryLeft, AiryRight,
/// Exponential.
pub fn classify_regime_with(k: usize, n: usize, x: f64, consts: &RegimeConstants) -> RegimeClassification {
    let m = mu(k, n);
    let window = consts.c * m.cbrt();
    let regime = if x <= 1.0 / m {
        Regime::BesselSmall
    } else if x <= consts.b * m {
        Regime::BesselOscillatory
    } else if (x - m).abs() <= window {
        Regime::AiryCenter
    } else if x >= consts.a * m && x <= m - window {
        Regime::AiryLeft
    } else if x >= m + window && x <= 1.5 * m {
        Regime::AiryRight
    } else if x >= 1.5 * m {
        Regime::Exponential
    } else {
        // Unreachable with a < b: (bμ, μ − cμ^{1/3}) lies inside AiryLeft.
        Regime::AiryLeft
    };
    RegimeClassification { regime, mu: m }
}

/// Asymptotic approximation of `w_k(x)` in one regime.
///
/// `envelope` is the local amplitude of `w_k` that relative errors are
/// measured against; in the oscillatory regimes it does not vanish at the
/// zeros of the leading term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticValue {
    pub regime: Regime,
    pub value: f64,
    pub leading_term: f64,
    pub error_bound_order: f64,
    pub envelope: f64,
}

/// `ψ(t) = ½[(t − t²)^{1/2} + arcsin √t]` on `[0, 1]`.
pub fn psi_map(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid("t", format!("ψ is defined on [0, 1], got {t}")));
    }
    Ok(0.5 * ((t - t * t).max(0.0).sqrt() + t.sqrt().asin()))
}

/// `ψ′(t) = ½(1/t − 1)^{1/2}` on `(0, 1]`.
pub fn psi_deriv(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid("t", format!("ψ′ is defined on (0, 1], got {t}")));
    }
    Ok(0.5 * (1.0 / t - 1.0).max(0.0).sqrt())
}

/// `G(s)` and `G′(s)` with `φ(1 − s) = 2^{−2/3} s G(s)^{2/3}`,
/// `G(s) = Σ 3 c_m s^m / (2m + 3)`, `c_m = C(2m, m)/4^m`.
fn phi_series_g(s: f64) -> (f64, f64) {
    let mut c = 1.0;
    let mut pow = 1.0;
    let mut g = 1.0;
    let mut dg = 0.0;
    for m in 1..60 {
        let mf = m as f64;
        c *= (2.0 * mf - 1.0) / (2.0 * mf);
        dg += 3.0 * mf * c * pow / (2.0 * mf + 3.0);
        pow *= s;
        let term = 3.0 * c * pow / (2.0 * mf + 3.0);
        g += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    (g, dg)
}

const TWO_POW_M2_3: f64 = 0.629_960_524_947_436_6; // 2^{−2/3}

/// `φ(t)`: `(3/4)^{2/3}[arccos √t − (t − t²)^{1/2}]^{2/3}` for `0 < t ≤ 1`,
/// `−(3/4)^{2/3}[(t² − t)^{1/2} − arccosh √t]^{2/3}` for `t > 1`.
pub fn phi_map(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("φ is defined for t > 0, got {t}")));
    }
    let s = 1.0 - t;
    if s.abs() <= PHI_SERIES_BAND {
        let (g, _) = phi_series_g(s);
        return Ok(TWO_POW_M2_3 * s * g.powf(2.0 / 3.0));
    }
    let pre = 0.75f64.powf(2.0 / 3.0);
    if t <= 1.0 {
        let f = t.sqrt().acos() - (t - t * t).sqrt();
        Ok(pre * f.powf(2.0 / 3.0))
    } else {
        let f = (t * t - t).sqrt() - t.sqrt().acosh();
        Ok(-pre * f.powf(2.0 / 3.0))
    }
}

/// `φ′(t)`, negative on `(0, ∞)`; from `φ (φ′)² = ¼(1/t − 1)` away from
/// `t = 1` and from the series near it.
pub fn phi_deriv(t: f64) -> Result<f64> {
    let phi = phi_map(t)?;
    let s = 1.0 - t;
    if s.abs() <= PHI_SERIES_BAND {
        let (g, dg) = phi_series_g(s);
        let dphi_ds = TWO_POW_M2_3 * (g.powf(2.0 / 3.0) + 2.0 / 3.0 * s * g.powf(-1.0 / 3.0) * dg);
        return Ok(-dphi_ds);
    }
    Ok(-0.5 * ((1.0 / t - 1.0).abs() / phi.abs()).sqrt())
}

/// Asymptotic value with the default constants.
pub fn laguerre_asymptotic(k: usize, n: usize, x: f64) -> Result<AsymptoticValue> {
    laguerre_asymptotic_with(k, n, x, &RegimeConstants::default())
}

/// Leading-order asymptotic of `w_k(x)` in the regime that `x` falls in.
///
/// `error_bound_order` is the size of the remainder with all implied
/// constants set to one: `leading·(xμ)^{1/2}` for small `x`,
/// `prefactor·(xμ)^{−3/4}` in the oscillatory Bessel band, `envelope/|ξ|^{3/2}`
/// left of the turning point, `envelope/x` at it, `|value|·μ^{−1/4}(x−μ)^{−3/4}`
/// right of it and `μ^{−n/2−1/2} x^{n/2−1} e^{−2x/3}` in the exponential
/// regime.
pub fn laguerre_asymptotic_with(k: usize, n: usize, x: f64, consts: &RegimeConstants) -> Result<AsymptoticValue> {
    consts.validate()?;
    if n == 0 {
        return Err(invalid("n", "dimension must be ≥ 1"));
    }
    if k < consts.k0 {
        return Err(Error::BelowAsymptoticThreshold { k, k0: consts.k0 });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid("x", format!("need finite x ≥ 0, got {x}")));
    }
    let class = classify_regime_with(k, n, x, consts);
    let m = class.mu;
    let nf = n as f64;
    let t = x / m;
    match class.regime {
        Regime::BesselSmall => {
            let leading = if n == 1 {
                1.0
            } else {
                (((n - 1) as f64) * x.ln() - libm::lgamma(nf)).exp()
            };
            let value = if x == 0.0 {
                leading
            } else {
                bessel_prefactor(n, m, x)? * bessel(BesselKind::J, nf - 1.0, m * psi_map(t)?)?
            };
            Ok(AsymptoticValue {
                regime: class.regime,
                value,
                leading_term: leading,
                error_bound_order: leading.abs() * (x * m).sqrt(),
                envelope: leading.abs(),
            })
        }
        Regime::BesselOscillatory => {
            let pre = bessel_prefactor(n, m, x)?;
            let arg = m * psi_map(t)?;
            let amp = pre * (2.0 / (PI * arg)).sqrt();
            let value = amp * (arg - FRAC_PI_2 * (nf - 1.0) - FRAC_PI_4).cos();
            Ok(AsymptoticValue {
                regime: class.regime,
                value,
                leading_term: value,
                error_bound_order: pre * (x * m).powf(-0.75),
                envelope: amp,
            })
        }
        Regime::AiryLeft | Regime::AiryCenter | Regime::AiryRight | Regime::Exponential => {
            let (sign, log_pre) = airy_log_prefactor(k, n, m, x)?;
            let xi = -m.powf(2.0 / 3.0) * phi_map(t)?;
            match class.regime {
                Regime::AiryLeft => {
                    let a = xi.abs();
                    let zeta = 2.0 / 3.0 * a.powf(1.5);
                    let env = (log_pre - 0.25 * a.ln()).exp() / PI.sqrt();
                    let value = sign * env * (zeta - FRAC_PI_4).cos();
                    Ok(AsymptoticValue {
                        regime: class.regime,
                        value,
                        leading_term: value,
                        error_bound_order: env / a.powf(1.5),
                        envelope: env,
                    })
                }
                Regime::AiryCenter => {
                    let pre = log_pre.exp();
                    let value = sign * pre * airy(AiryKind::Ai, xi)?;
                    let env = pre * airy_envelope(xi)?;
                    Ok(AsymptoticValue {
                        regime: class.regime,
                        value,
                        leading_term: value,
                        error_bound_order: env / x,
                        envelope: env,
                    })
                }
                _ => {
                    let zeta = 2.0 / 3.0 * xi.powf(1.5);
                    let log_abs = log_pre - 0.5 * PI.ln() - 2f64.ln() - 0.25 * xi.ln() - zeta;
                    let value = sign * log_abs.exp();
                    let err = if class.regime == Regime::AiryRight {
                        value.abs() * m.powf(-0.25) * (x - m).powf(-0.75)
                    } else {
                        ((-0.5 * nf - 0.5) * m.ln() + (0.5 * nf - 1.0) * x.ln() - 2.0 / 3.0 * x).exp()
                    };
                    Ok(AsymptoticValue {
                        regime: class.regime,
                        value,
                        leading_term: value,
                        error_bound_order: err,
                        envelope: value.abs(),
                    })
                }
            }
        }
    }
}

/// `2^{n−3/2} μ^{1−n/2} x^{n/2−1} (ψ/ψ′)^{1/2}` at `t = x/μ`.
fn bessel_prefactor(n: usize, m: f64, x: f64) -> Result<f64> {
    let nf = n as f64;
    let t = x / m;
    let ratio = psi_map(t)? / psi_deriv(t)?;
    Ok(((nf - 1.5) * 2f64.ln() + (1.0 - 0.5 * nf) * m.ln() + (0.5 * nf - 1.0) * x.ln()).exp() * ratio.sqrt())
}

/// Sign and log-magnitude of
/// `(−1)^k √π 2^{5/6} N^{N+1/6} e^{−N} / Γ(k+n) · x^{n/2−1} (−φ′(t))^{−1/2}`.
fn airy_log_prefactor(k: usize, n: usize, m: f64, x: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    let big_n = m / 4.0;
    let dphi = phi_deriv(x / m)?;
    let log =
        0.5 * PI.ln() + 5.0 / 6.0 * 2f64.ln() + (big_n + 1.0 / 6.0) * big_n.ln() - big_n - libm::lgamma((k + n) as f64)
            + (0.5 * nf - 1.0) * x.ln()
            - 0.5 * (-dphi).ln();
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok((sign, log))
}

/// Relative positions used to compare the asymptotics across `k`: for each
/// regime, a map from a unit parameter `s ∈ [0, 1]` to `x` that stays inside
/// the regime interior for every `k ≥ k0`.
pub fn regime_interior_point(regime: Regime, k: usize, n: usize, s: f64) -> f64 {
    let m = mu(k, n);
    let lerp = |lo: f64, hi: f64| lo + (hi - lo) * s;
    match regime {
        Regime::BesselSmall => lerp(0.05, 0.95) / m,
        Regime::BesselOscillatory => m * lerp(0.05, 0.7),
        Regime::AiryLeft => m * lerp(0.78, 0.92),
        Regime::AiryCenter => m + lerp(-0.9, 0.9) * m.cbrt(),
        Regime::AiryRight => m * lerp(1.05, 1.45),
        Regime::Exponential => m * lerp(1.6, 2.5),
    }
}
