//! Laguerre polynomials and the exponentially weighted, gamma-normalised
//! Laguerre functions that appear in the Korányi sphere integrals.

use crate::error::{invalid, Result};

/// `L_k^α(x)` by the three-term recurrence.
pub fn laguerre(k: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(invalid("alpha", format!("need alpha > -1, got {alpha}")));
    }
    if !x.is_finite() {
        return Err(invalid("x", "argument must be finite"));
    }
    let mut prev = 1.0;
    if k == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `Γ(k+1) / Γ(k+n)` from log-gamma differences.
pub fn gamma_ratio(k: usize, n: usize) -> f64 {
    (libm::lgamma(k as f64 + 1.0) - libm::lgamma((k + n) as f64)).exp()
}

const RESCALE_EXP: i32 = 512;
const RESCALE_AT: f64 = 1.340_780_792_994_259_7e154; // 2^512

/// `Γ(n) Γ(k+1)/Γ(k+n) · L_k^{n−1}(x) · e^{−x/2}`, which equals `1` at `x = 0`
/// and is bounded by `1` in absolute value for `x ≥ 0`.
///
/// The recurrence runs on the normalised polynomials
/// `m_{j+1} = ((2j + n − x) m_j − j m_{j−1}) / (j + n)` with the weight
/// `e^{−x/2}` carried as a separate power-of-two exponent, so neither the
/// polynomial nor the exponential is ever formed on its own.
pub fn laguerre_normalized(k: usize, n: usize, x: f64) -> f64 {
    debug_assert!(n >= 1);
    let (mantissa, exp2) = normalized_scaled(k, n, x);
    libm::scalbn(mantissa, exp2)
}

/// Mantissa/exponent pair behind [`laguerre_normalized`]; the value is
/// `mantissa · 2^exp2`.
fn normalized_scaled(k: usize, n: usize, x: f64) -> (f64, i32) {
    let nf = n as f64;
    let log2_weight = -0.5 * x / std::f64::consts::LN_2;
    let whole = log2_weight.floor();
    let mut exp2 = whole as i32;
    let start = (log2_weight - whole).exp2();
    let mut prev = start;
    if k == 0 {
        return (prev, exp2);
    }
    let mut cur = start * (nf - x) / nf;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + nf - x) * cur - jf * prev) / (jf + nf);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur = libm::scalbn(cur, -RESCALE_EXP);
            prev = libm::scalbn(prev, -RESCALE_EXP);
            exp2 += RESCALE_EXP;
        }
    }
    (cur, exp2)
}

/// `w_k(x) = Γ(k+1)/Γ(k+n) · L_k^{n−1}(x) · e^{−x/2} · x^{n−1}`.
///
/// Finite for `k` in the tens of thousands and `x` up to `10⁵` and beyond;
/// deep in the exponential regime the result underflows to zero.
pub fn laguerre_weighted(k: usize, n: usize, x: f64) -> f64 {
    debug_assert!(n >= 1);
    if n == 1 {
        return laguerre_normalized(k, 1, x);
    }
    if x == 0.0 {
        return 0.0;
    }
    let (mantissa, exp2) = normalized_scaled(k, n, x);
    // x^{n-1}/Γ(n) folded into the exponent before the final scaling.
    let log2_factor = ((n - 1) as f64 * x.ln() - libm::lgamma(n as f64)) / std::f64::consts::LN_2;
    let whole = log2_factor.floor();
    let scaled = mantissa * (log2_factor - whole).exp2();
    libm::scalbn(scaled, exp2.saturating_add(whole as i32))
}
