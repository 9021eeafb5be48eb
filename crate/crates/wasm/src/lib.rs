//! Browser bindings for the static demo in `www/`.
//!
//! Each export returns a flat `Float64Array`; the layout is given per
//! function. The `*_values` functions hold the logic and are what the
//! native tests exercise.

use koranyi_core::special::asymptotic::laguerre_asymptotic;
use koranyi_core::special::laguerre::laguerre_weighted;
use koranyi_core::spectral::rk_coefficient;
use koranyi_core::{sample_ball_uniform, HPoint};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 20_000;

fn check_count(name: &str, count: usize) -> Result<(), String> {
    if !(2..=MAX_POINTS).contains(&count) {
        return Err(format!("{name} must lie in [2, {MAX_POINTS}], got {count}"));
    }
    Ok(())
}

/// `[λ_0, R_k(λ_0), λ_1, R_k(λ_1), …]` for log-spaced `λ`.
pub fn rk_curve_values(
    k: usize,
    n: usize,
    r: f64,
    lambda_min: f64,
    lambda_max: f64,
    count: usize,
) -> Result<Vec<f64>, String> {
    check_count("count", count)?;
    if !(lambda_min > 0.0 && lambda_max > lambda_min) {
        return Err(format!("need 0 < λ_min < λ_max, got [{lambda_min}, {lambda_max}]"));
    }
    let (a, b) = (lambda_min.ln(), lambda_max.ln());
    let mut out = Vec::with_capacity(2 * count);
    for i in 0..count {
        let lambda = (a + (b - a) * i as f64 / (count - 1) as f64).exp();
        let c = rk_coefficient(k, n, lambda, r, 1e-9).map_err(|e| e.to_string())?;
        out.extend([lambda, c.value]);
    }
    Ok(out)
}

/// `[x, w_k(x), asymptotic, regime index, …]` on `count` points of
/// `[0, x_max]`; the asymptotic entry is NaN where it is not defined.
pub fn laguerre_compare_values(k: usize, n: usize, x_max: f64, count: usize) -> Result<Vec<f64>, String> {
    check_count("count", count)?;
    if n == 0 || !(x_max > 0.0) {
        return Err(format!("need n ≥ 1 and x_max > 0, got n = {n}, x_max = {x_max}"));
    }
    let mut out = Vec::with_capacity(4 * count);
    for i in 0..count {
        let x = x_max * i as f64 / (count - 1) as f64;
        let (approx, regime) = match laguerre_asymptotic(k, n, x) {
            Ok(a) => (a.value, a.regime as u8 as f64),
            Err(_) => (f64::NAN, f64::NAN),
        };
        out.extend([x, laguerre_weighted(k, n, x), approx, regime]);
    }
    Ok(out)
}

/// Uniform points of the Korányi ball `B(0, r)` in ℍ¹: `[x, y, t, …]`.
pub fn koranyi_sample_values(r: f64, count: usize, seed: u64) -> Result<Vec<f64>, String> {
    check_count("count", count)?;
    let pts = sample_ball_uniform(&HPoint::origin(1), r, count, seed).map_err(|e| e.to_string())?;
    Ok(pts.iter().flat_map(|p| [p.x()[0], p.y()[0], p.t()]).collect())
}

#[wasm_bindgen]
pub fn rk_curve(
    k: usize,
    n: usize,
    r: f64,
    lambda_min: f64,
    lambda_max: f64,
    count: usize,
) -> Result<Vec<f64>, JsError> {
    rk_curve_values(k, n, r, lambda_min, lambda_max, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn laguerre_compare(k: usize, n: usize, x_max: f64, count: usize) -> Result<Vec<f64>, JsError> {
    laguerre_compare_values(k, n, x_max, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn koranyi_sample(r: f64, count: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    koranyi_sample_values(r, count, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn version() -> String {
    koranyi_core::VERSION.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rk_curve_starts_near_one() {
        let v = rk_curve_values(0, 1, 1.0, 1e-6, 1e2, 8).unwrap();
        assert_eq!(v.len(), 16);
        assert!((v[0] - 1e-6).abs() < 1e-18 && (v[1] - 1.0).abs() < 1e-5);
        assert!((v[14] - 1e2).abs() < 1e-10);
        assert!(rk_curve_values(0, 1, 1.0, 2.0, 1.0, 8).is_err());
    }

    #[test]
    fn laguerre_compare_layout() {
        let v = laguerre_compare_values(60, 1, 400.0, 101).unwrap();
        assert_eq!(v.len(), 404);
        let mut defined = 0;
        for row in v.chunks(4) {
            if row[2].is_finite() {
                defined += 1;
                assert!((row[1] - row[2]).abs() < 0.2, "{row:?}");
            }
        }
        assert!(defined > 90);
        assert!(laguerre_compare_values(10, 1, 10.0, 5).unwrap()[2].is_nan());
    }

    #[test]
    fn samples_lie_in_ball() {
        let v = koranyi_sample_values(2.0, 500, 3).unwrap();
        assert_eq!(v.len(), 1500);
        for p in v.chunks(3) {
            let z2 = p[0] * p[0] + p[1] * p[1];
            assert!(z2 * z2 + p[2] * p[2] < 16.0);
        }
        assert_eq!(v, koranyi_sample_values(2.0, 500, 3).unwrap());
        assert!(koranyi_sample_values(2.0, 1, 3).is_err());
    }
}
