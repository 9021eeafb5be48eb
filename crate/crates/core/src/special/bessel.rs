//! Bessel functions `J_α`, `Y_α` of real order `α ≥ 0` and real argument.
//!
//! Below [`BESSEL_SWITCH`] the ascending series is summed directly (with the
//! logarithmic series for `Y` at integer order and the reflection formula
//! otherwise). Above it the Hankel expansion is evaluated at the fractional
//! order and its successor, then carried up to `α` by forward recurrence,
//! which is stable for `Y` always and for `J` while the order stays below
//! the argument. For `α ≥ u ≥` [`BESSEL_SWITCH`] the series is used again;
//! that corner loses accuracy and is outside what this crate needs.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// Series/asymptotic switchover for `J` and `Y`.
pub const BESSEL_SWITCH: f64 = 12.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Which Bessel function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    J,
    Y,
}

/// `J_α(u)` or `Y_α(u)`.
pub fn bessel(kind: BesselKind, alpha: f64, u: f64) -> Result<f64> {
    if alpha.is_nan() || u.is_nan() {
        return Err(invalid("u", "NaN argument"));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(invalid("alpha", format!("order must be finite and ≥ 0, got {alpha}")));
    }
    match kind {
        BesselKind::J => Ok(bessel_j(alpha, u)),
        BesselKind::Y => {
            if !(u > 0.0) {
                return Err(invalid("u", format!("Y needs u > 0, got {u}")));
            }
            Ok(bessel_y(alpha, u))
        }
    }
}

fn is_integer(alpha: f64) -> bool {
    alpha.fract() == 0.0
}

fn bessel_j(alpha: f64, u: f64) -> f64 {
    if u < 0.0 {
        // J_α(−u) = (−1)^α J_α(u) is real only for integer order.
        if is_integer(alpha) {
            let sign = if (alpha as i64) % 2 == 0 { 1.0 } else { -1.0 };
            return sign * bessel_j(alpha, -u);
        }
        return f64::NAN;
    }
    if u < BESSEL_SWITCH || alpha >= u {
        return j_series(alpha, u);
    }
    let (j, _) = hankel_recur(alpha, u);
    j
}

fn bessel_y(alpha: f64, u: f64) -> f64 {
    if u < BESSEL_SWITCH {
        return y_small(alpha, u);
    }
    let (_, y) = hankel_recur(alpha, u);
    y
}

fn j_series(alpha: f64, u: f64) -> f64 {
    if u == 0.0 {
        return if alpha == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * u;
    let q = -half * half;
    // Leading term (u/2)^α / Γ(α+1), in log space for large α.
    let mut term = (alpha * half.ln() - libm::lgamma(alpha + 1.0)).exp();
    let mut sum = term;
    for m in 1..500 {
        let mf = m as f64;
        term *= q / (mf * (mf + alpha));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && mf > half {
            break;
        }
    }
    sum
}

/// Series for `J_{−ν}` with non-integer `ν`, through `Γ` of negative
/// arguments.
fn j_negative_series(nu: f64, u: f64) -> f64 {
    let half = 0.5 * u;
    let q = -half * half;
    let pw = half.powf(-nu);
    let mut sum = 0.0;
    let mut fact = 1.0;
    let mut qp = 1.0;
    for m in 0..500 {
        let mf = m as f64;
        if m > 0 {
            fact *= mf;
            qp *= q;
        }
        let term = qp / (fact * libm::tgamma(mf - nu + 1.0));
        sum += term;
        if mf > half + nu && term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum * pw
}

fn y_small(alpha: f64, u: f64) -> f64 {
    if is_integer(alpha) {
        return y_integer_series(alpha as usize, u);
    }
    let (s, c) = (alpha * PI).sin_cos();
    (j_series(alpha, u) * c - j_negative_series(alpha, u)) / s
}

fn y_integer_series(n: usize, u: f64) -> f64 {
    let half = 0.5 * u;
    let mut finite = 0.0;
    if n > 0 {
        // Σ_{k<n} (n−k−1)!/k! (u/2)^{2k−n}
        for k in 0..n {
            let lg = libm::lgamma((n - k) as f64) - libm::lgamma(k as f64 + 1.0);
            finite += (lg + (2.0 * k as f64 - n as f64) * half.ln()).exp();
        }
    }
    // Σ_k [ψ(k+1) + ψ(n+k+1)] (−1)^k (u/2)^{2k+n} / (k!(n+k)!)
    let mut digamma_k = -EULER_GAMMA;
    let mut digamma_nk = -EULER_GAMMA + (1..=n).map(|j| 1.0 / j as f64).sum::<f64>();
    let q = -half * half;
    let mut term = (n as f64 * half.ln() - libm::lgamma(n as f64 + 1.0)).exp();
    let mut series = (digamma_k + digamma_nk) * term;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + n as f64));
        digamma_k += 1.0 / kf;
        digamma_nk += 1.0 / (kf + n as f64);
        let add = (digamma_k + digamma_nk) * term;
        series += add;
        if kf > half && add.abs() < 1e-17 * series.abs().max(1e-300) {
            break;
        }
    }
    (2.0 / PI) * j_series(n as f64, u) * half.ln() - finite / PI - series / PI
}

/// Hankel's expansion `J, Y = √(2/(πu)) (P cos χ ∓ Q sin χ …)` at order `ν`.
fn hankel(nu: f64, u: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let z8 = 8.0 * u;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * z8);
        if term.abs() > last || term == 0.0 {
            break;
        }
        last = term.abs();
        // P collects even k with alternating sign, Q the odd ones.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = u - (0.5 * nu + 0.25) * PI;
    let (s, c) = chi.sin_cos();
    let amp = (2.0 / (PI * u)).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

fn hankel_recur(alpha: f64, u: f64) -> (f64, f64) {
    let frac = alpha.fract();
    let steps = alpha.floor() as usize;
    let (mut j0, mut y0) = hankel(frac, u);
    if steps == 0 {
        return (j0, y0);
    }
    let (mut j1, mut y1) = hankel(frac + 1.0, u);
    for i in 1..steps {
        let nu = frac + i as f64;
        let j2 = 2.0 * nu / u * j1 - j0;
        let y2 = 2.0 * nu / u * y1 - y0;
        j0 = j1;
        y0 = y1;
        j1 = j2;
        y1 = y2;
    }
    (j1, y1)
}

/// `J̃_α(u)`: `(J² + Y²)^{1/2}`, a non-vanishing envelope of `J_α` away from
/// the origin; `|J_α(u)|` at `u = 0`.
pub fn bessel_envelope(alpha: f64, u: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(bessel(BesselKind::J, alpha, 0.0)?.abs());
    }
    let j = bessel(BesselKind::J, alpha, u)?;
    let y = bessel(BesselKind::Y, alpha, u)?;
    Ok(j.hypot(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF: [(f64, f64, f64, f64); 10] = [
        // (α, u, J_α(u), Y_α(u)) from a 30-digit evaluation.
        (0.0, 1.0, 0.765_197_686_557_966_6, 0.088_256_964_215_676_96),
        (0.0, 8.0, 0.171_650_807_137_553_9, 0.223_521_489_387_566_2),
        (0.0, 12.0, 0.047_689_310_796_833_54, -0.225_237_312_634_361_4),
        (0.0, 30.0, -0.086_367_983_581_040_21, -0.117_295_731_686_664),
        (1.0, 5.0, -0.327_579_137_591_465_2, 0.147_863_143_391_226_8),
        (1.0, 20.0, 0.066_833_124_175_850_05, -0.165_511_614_362_521_3),
        (2.0, 0.5, 0.030_604_023_458_682_64, -5.441_370_837_174_266),
        (2.5, 9.0, -0.024_772_919_406_788_79, -0.269_886_454_063_607_2),
        (0.4, 3.0, -0.000_531_307_421_085_808_7, 0.459_646_217_576_463_1),
        (0.0, 100.5, 0.054_436_573_814_413_59, -0.058_061_227_570_355_75),
    ];

    #[test]
    fn reference_values() {
        for &(a, u, j, y) in &REF {
            let gj = bessel(BesselKind::J, a, u).unwrap();
            let gy = bessel(BesselKind::Y, a, u).unwrap();
            assert!((gj - j).abs() < 1e-10, "J_{a}({u}) = {gj}, want {j}");
            assert!((gy - y).abs() < 1e-10, "Y_{a}({u}) = {gy}, want {y}");
        }
    }

    #[test]
    fn origin_and_errors() {
        assert_eq!(bessel(BesselKind::J, 0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel(BesselKind::J, 2.0, 0.0).unwrap(), 0.0);
        assert!(bessel(BesselKind::Y, 0.0, 0.0).is_err());
        assert!(bessel(BesselKind::Y, 1.0, -1.0).is_err());
        assert!(bessel(BesselKind::J, f64::NAN, 1.0).is_err());
        assert!(bessel(BesselKind::J, 0.0, f64::NAN).is_err());
        assert!(bessel(BesselKind::J, -1.0, 1.0).is_err());
    }

    #[test]
    fn wronskian_is_two_over_pi_u() {
        // J_{a+1} Y_a − J_a Y_{a+1} = 2/(πu)
        for &a in &[0.0, 0.5, 1.0, 1.7, 2.0] {
            for i in 1..80 {
                let u = 0.37 * i as f64;
                let j0 = bessel(BesselKind::J, a, u).unwrap();
                let j1 = bessel(BesselKind::J, a + 1.0, u).unwrap();
                let y0 = bessel(BesselKind::Y, a, u).unwrap();
                let y1 = bessel(BesselKind::Y, a + 1.0, u).unwrap();
                let w = j1 * y0 - j0 * y1;
                let target = 2.0 / (PI * u);
                assert!(
                    (w - target).abs() < 1e-9 * target.max(1.0) * (1.0 + y0.abs()),
                    "a={a} u={u}: {w} vs {target}"
                );
            }
        }
    }

    #[test]
    fn continuity_at_switch() {
        for &a in &[0.0, 1.0, 2.0, 0.5] {
            let below = bessel(BesselKind::J, a, BESSEL_SWITCH - 1e-13).unwrap();
            let above = bessel(BesselKind::J, a, BESSEL_SWITCH + 1e-13).unwrap();
            assert!((below - above).abs() < 1e-10, "a={a}: {below} vs {above}");
            let below = bessel(BesselKind::Y, a, BESSEL_SWITCH - 1e-13).unwrap();
            let above = bessel(BesselKind::Y, a, BESSEL_SWITCH + 1e-13).unwrap();
            assert!((below - above).abs() < 1e-10, "a={a}: {below} vs {above}");
        }
    }

    #[test]
    fn odd_order_reflection() {
        let j = bessel(BesselKind::J, 1.0, -2.5).unwrap();
        assert!((j + bessel(BesselKind::J, 1.0, 2.5).unwrap()).abs() < 1e-16);
        assert!(bessel_envelope(0.0, 5.0).unwrap() > 0.0);
    }
}
