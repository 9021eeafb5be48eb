//! L²-normalised Hermite functions and their `λ`-scaled versions.

use std::f64::consts::PI;

/// `h_0, …, h_{count-1}` at `x`, where
/// `h_k(x) = (2^k k! √π)^{−1/2} H_k(x) e^{−x²/2}`.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let h0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(h0);
    if count == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * h0);
    for k in 1..count - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// `h_k(x)`.
pub fn hermite_function(k: usize, x: f64) -> f64 {
    hermite_functions(k + 1, x)[k]
}

/// `Φ_k^λ(x) = |λ|^{1/4} h_k(√|λ| x)`, the one-dimensional scaled Hermite
/// function; products of these over the axes give the multi-index version.
pub fn hermite_scaled(k: usize, lambda: f64, x: f64) -> f64 {
    let s = lambda.abs();
    s.powf(0.25) * hermite_function(k, s.sqrt() * x)
}

/// `Φ_0^λ, …, Φ_{count-1}^λ` at `x`.
pub fn hermite_scaled_all(count: usize, lambda: f64, x: f64) -> Vec<f64> {
    let s = lambda.abs();
    let norm = s.powf(0.25);
    let mut v = hermite_functions(count, s.sqrt() * x);
    v.iter_mut().for_each(|h| *h *= norm);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_panels, uniform_breaks};

    #[test]
    fn value_at_origin() {
        assert!((hermite_function(0, 0.0) - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert_eq!(hermite_function(1, 0.0), 0.0);
        // h_2(0) = −(1/√2) π^{−1/4}
        assert!((hermite_function(2, 0.0) + PI.powf(-0.25) / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn orthonormal_up_to_twelve() {
        let breaks = uniform_breaks(-14.0, 14.0, 56);
        let m = 13;
        for j in 0..m {
            for k in j..m {
                let est = integrate_panels(
                    |x: f64| {
                        let h = hermite_functions(m, x);
                        h[j] * h[k]
                    },
                    &breaks,
                    1e-12,
                    1 << 18,
                )
                .unwrap();
                let target = if j == k { 1.0 } else { 0.0 };
                assert!((est.value - target).abs() < 1e-8, "({j},{k}) -> {}", est.value);
            }
        }
    }

    #[test]
    fn scaled_ground_state_has_unit_norm() {
        for &lambda in &[0.5, 1.0, 4.0, -4.0] {
            let breaks = uniform_breaks(-20.0, 20.0, 40);
            let est = integrate_panels(|x: f64| hermite_scaled(0, lambda, x).powi(2), &breaks, 1e-13, 1 << 16).unwrap();
            assert!((est.value - 1.0).abs() < 1e-10, "lambda={lambda}");
        }
    }

    #[test]
    fn batch_matches_single() {
        let all = hermite_scaled_all(8, 2.5, 0.7);
        for (k, v) in all.iter().enumerate() {
            assert!((v - hermite_scaled(k, 2.5, 0.7)).abs() < 1e-15);
        }
        assert!(hermite_functions(0, 1.0).is_empty());
    }
}
