//! Airy functions `Ai`, `Bi` and their derivatives for real arguments.
//!
//! * `|u| < 8`: Maclaurin series, except `Ai` and `Ai′` on `2 ≤ u < 8`,
//!   where the series cancels badly and a Laplace-type integral is used.
//! * `|u| ≥ 8`: the standard asymptotic expansions, truncated at the
//!   smallest term.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{invalid, Result};
use crate::quadrature::{integrate_panels, uniform_breaks};

/// Switch from series to asymptotic expansions.
pub const AIRY_SWITCH: f64 = 8.0;

// Ai(0) and −Ai′(0).
const C1: f64 = 0.355_028_053_887_817_2;
const C2: f64 = 0.258_819_403_792_806_8;
const SQRT3: f64 = 1.732_050_807_568_877_2;

/// `Ai(u), Ai′(u), Bi(u), Bi′(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
}

/// Which Airy function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiryKind {
    Ai,
    Bi,
}

/// `Ai(u)` or `Bi(u)`.
pub fn airy(kind: AiryKind, u: f64) -> Result<f64> {
    let v = airy_all(u)?;
    Ok(match kind {
        AiryKind::Ai => v.ai,
        AiryKind::Bi => v.bi,
    })
}

/// All four Airy values at `u`.
pub fn airy_all(u: f64) -> Result<AiryValues> {
    if u.is_nan() {
        return Err(invalid("u", "NaN argument"));
    }
    if u <= -AIRY_SWITCH {
        return Ok(asymptotic_negative(-u));
    }
    if u >= AIRY_SWITCH {
        return Ok(asymptotic_positive(u));
    }
    let (f, fp, g, gp) = series(u);
    let mut out = AiryValues {
        ai: C1 * f - C2 * g,
        aip: C1 * fp - C2 * gp,
        bi: SQRT3 * (C1 * f + C2 * g),
        bip: SQRT3 * (C1 * fp + C2 * gp),
    };
    if u >= 2.0 {
        let (ai, aip) = ai_laplace(u);
        out.ai = ai;
        out.aip = aip;
    }
    Ok(out)
}

fn series(x: f64) -> (f64, f64, f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut tf) = (1.0, 1.0);
    let (mut g, mut tg) = (x, x);
    let (mut fp, mut tfp) = (0.5 * x * x, 0.5 * x * x);
    let (mut gp, mut tgp) = (1.0, 1.0);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / (k3 * (k3 - 1.0));
        tg *= x3 / ((k3 + 1.0) * k3);
        tgp *= x3 / (k3 * (k3 - 2.0));
        if k >= 2 {
            tfp *= x3 / ((k3 - 1.0) * (k3 - 3.0));
            fp += tfp;
        }
        f += tf;
        g += tg;
        gp += tgp;
        let tiny = 1e-18 * (f.abs() + g.abs() + fp.abs() + gp.abs());
        if k > 2 && tf.abs() + tg.abs() + tfp.abs() + tgp.abs() < tiny {
            break;
        }
    }
    (f, fp, g, gp)
}

/// `Ai(x) = e^{−ζ}/π ∫₀^∞ exp(−√x s²) cos(s³/3) ds`, `ζ = ⅔x^{3/2}`, and
/// the matching representation of `Ai′`.
fn ai_laplace(x: f64) -> (f64, f64) {
    let a = x.sqrt();
    let zeta = 2.0 / 3.0 * x * a;
    let smax = (42.0 / a).sqrt();
    let breaks = uniform_breaks(0.0, smax, 48);
    let i0 = integrate_panels(
        |s: f64| (-a * s * s).exp() * (s * s * s / 3.0).cos(),
        &breaks,
        1e-17,
        1 << 16,
    );
    let i2 = integrate_panels(
        |s: f64| s * s * (-a * s * s).exp() * (s * s * s / 3.0).cos(),
        &breaks,
        1e-17,
        1 << 16,
    );
    // Both integrands are smooth and the panel grid resolves them; fall back to
    // the raw estimate if the (very strict) tolerance was not certified.
    let v0 = i0.map(|e| e.value).unwrap_or_else(|_| panel_sum(&breaks, a, 0));
    let v2 = i2.map(|e| e.value).unwrap_or_else(|_| panel_sum(&breaks, a, 2));
    let scale = (-zeta).exp() / PI;
    let ai = scale * v0;
    let aip = -a * ai - scale * v2 / (2.0 * a);
    (ai, aip)
}

fn panel_sum(breaks: &[f64], a: f64, power: i32) -> f64 {
    let f = |s: f64| s.powi(power) * (-a * s * s).exp() * (s * s * s / 3.0).cos();
    breaks
        .windows(2)
        .map(|w| crate::quadrature::gauss_kronrod(&f, w[0], w[1]).0)
        .sum()
}

/// Coefficients `u_k`, `v_k` of the Airy asymptotic expansions, summed
/// against `±1/ζ^k` until the terms stop decreasing.
struct AsymSums {
    u_even: f64,
    u_odd: f64,
    v_even: f64,
    v_odd: f64,
    u_all: f64,
    v_all: f64,
    u_alt: f64,
    v_alt: f64,
}

fn asym_sums(zeta: f64) -> AsymSums {
    let mut s = AsymSums {
        u_even: 1.0,
        u_odd: 0.0,
        v_even: 1.0,
        v_odd: 0.0,
        u_all: 1.0,
        v_all: 1.0,
        u_alt: 1.0,
        v_alt: 1.0,
    };
    let mut uk = 1.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        uk *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let vk = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk;
        pow /= zeta;
        let tu = uk * pow;
        let tv = vk * pow;
        let size = tu.abs().max(tv.abs());
        if size > last || size < 1e-18 {
            break;
        }
        last = size;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s.u_all += tu;
        s.v_all += tv;
        s.u_alt += sign * tu;
        s.v_alt += sign * tv;
        // Alternating sign within the even and odd subsequences.
        let sub = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            s.u_even += sub * tu;
            s.v_even += sub * tv;
        } else {
            s.u_odd += sub * tu;
            s.v_odd += sub * tv;
        }
    }
    s
}

fn asymptotic_positive(x: f64) -> AiryValues {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let q = x.powf(0.25);
    let s = asym_sums(zeta);
    let sp = PI.sqrt();
    let em = (-zeta).exp();
    let ep = zeta.exp();
    AiryValues {
        ai: em / (2.0 * sp * q) * s.u_alt,
        aip: -q * em / (2.0 * sp) * s.v_alt,
        bi: ep / (sp * q) * s.u_all,
        bip: q * ep / sp * s.v_all,
    }
}

fn asymptotic_negative(x: f64) -> AiryValues {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let q = x.powf(0.25);
    let s = asym_sums(zeta);
    let sp = PI.sqrt();
    let (sn, cs) = (zeta - FRAC_PI_4).sin_cos();
    AiryValues {
        ai: (cs * s.u_even + sn * s.u_odd) / (sp * q),
        aip: q * (sn * s.v_even - cs * s.v_odd) / sp,
        bi: (-sn * s.u_even + cs * s.u_odd) / (sp * q),
        bip: q * (cs * s.v_even + sn * s.v_odd) / sp,
    }
}

/// `Ãi(u)`: `Ai(u)` for `u ≥ 0`, `(Ai² + Bi²)^{1/2}` for `u < 0`, a
/// non-vanishing envelope of `Ai`.
pub fn airy_envelope(u: f64) -> Result<f64> {
    let v = airy_all(u)?;
    Ok(if u >= 0.0 { v.ai } else { v.ai.hypot(v.bi) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wronskian(u: f64) -> f64 {
        let v = airy_all(u).unwrap();
        v.ai * v.bip - v.aip * v.bi
    }

    #[test]
    fn origin_values() {
        let v = airy_all(0.0).unwrap();
        let expected = 3f64.powf(-2.0 / 3.0) / libm::tgamma(2.0 / 3.0);
        assert!((v.ai - expected).abs() < 1e-15);
        assert!((v.ai - 0.355_028_053_887_817).abs() < 1e-14);
        assert!((v.bi - 0.614_926_627_446_000_7).abs() < 1e-14);
        assert!((v.aip + 0.258_819_403_792_806_8).abs() < 1e-15);
        assert!((v.bip - 0.448_288_357_353_826_4).abs() < 1e-14);
    }

    #[test]
    fn wronskian_at_spec_points() {
        for &u in &[-2.0, 0.0, 2.0] {
            assert!((wronskian(u) - 1.0 / PI).abs() < 1e-8, "u={u}");
        }
    }

    #[test]
    fn wronskian_across_switchovers() {
        for i in -200..=120 {
            let u = 0.1 * i as f64;
            let w = wronskian(u);
            // relative to the size of the Bi-dominated products
            assert!((w * PI - 1.0).abs() < 1e-9, "u={u}: {w}");
        }
    }

    #[test]
    fn reference_values() {
        // (u, Ai, Ai′, Bi) from a 30-digit evaluation.
        let cases = [
            (
                -10.0,
                0.040_241_238_486_443_19,
                0.996_265_044_132_790_1,
                -0.314_679_829_643_838_6,
            ),
            (
                -8.5,
                -0.330_290_237_630_208_9,
                -0.032_313_348_284_639_14,
                0.007_754_436_447_658_404,
            ),
            (
                -5.0,
                0.350_761_009_024_114_3,
                0.327_192_818_554_443_1,
                -0.138_369_134_901_600_6,
            ),
            (
                -2.0,
                0.227_407_428_201_685_6,
                0.618_259_020_741_691,
                -0.412_302_587_956_398_5,
            ),
            (
                1.0,
                0.135_292_416_312_881_4,
                -0.159_147_441_296_793_2,
                1.207_423_594_952_871,
            ),
            (
                2.0,
                0.034_924_130_423_274_38,
                -0.053_090_384_433_653_63,
                3.298_094_999_978_215,
            ),
            (
                3.3,
                0.003_787_288_426_826_755,
                -0.007_142_487_785_884_74,
                23.248_303_262_941_57,
            ),
            (
                5.0,
                1.083_444_281_360_744e-4,
                -2.474_138_908_684_625e-4,
                657.792_044_171_171_2,
            ),
            (
                7.9,
                6.239_640_097_283_934e-8,
                -1.772_995_832_943_034e-7,
                907_790.616_061_994_7,
            ),
            (
                10.0,
                1.104_753_255_289_869e-10,
                -3.520_633_676_738_924e-10,
                455_641_153.548_225_1,
            ),
        ];
        for &(u, ai, aip, bi) in &cases {
            let v = airy_all(u).unwrap();
            assert!(
                (v.ai - ai).abs() <= 1e-9 * ai.abs().max(0.05),
                "Ai({u}) = {}, want {ai}",
                v.ai
            );
            assert!(
                (v.aip - aip).abs() <= 1e-9 * aip.abs().max(0.05),
                "Ai'({u}) = {}, want {aip}",
                v.aip
            );
            assert!(
                (v.bi - bi).abs() <= 1e-9 * bi.abs().max(0.05),
                "Bi({u}) = {}, want {bi}",
                v.bi
            );
        }
    }

    #[test]
    fn envelope_is_positive() {
        for i in -100..40 {
            assert!(airy_envelope(0.25 * i as f64).unwrap() > 0.0);
        }
        assert!(airy(AiryKind::Ai, f64::NAN).is_err());
    }
}
