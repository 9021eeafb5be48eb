//! Heisenberg group arithmetic and Korányi geometry.
//!
//! Points of `ℍⁿ = ℂⁿ × ℝ` are stored as `(x, y, t)` with `z = x + iy`. The
//! group law is
//!
//! ```text
//! (z, t) · (w, s) = (z + w, t + s + ½ Im(z · w̄)),   Im(z · w̄) = Σ (y_i u_i − x_i v_i)
//! ```
//!
//! for `w = u + iv`. Every routine in the crate uses this one sign convention.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature;

/// Dimension `n` of `ℍⁿ` with its homogeneous dimension `Q = 2n + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "dimension must be at least 1"));
        }
        Ok(Self(n))
    }

    pub fn n(self) -> usize {
        self.0
    }

    /// Homogeneous dimension `2n + 2`.
    pub fn homogeneous(self) -> usize {
        2 * self.0 + 2
    }
}

/// A point `(z, t)` of `ℍⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    x: Vec<f64>,
    y: Vec<f64>,
    t: f64,
}

impl HPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>, t: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(invalid("x", "dimension must be at least 1"));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if !t.is_finite() || x.iter().chain(&y).any(|c| !c.is_finite()) {
            return Err(invalid("point", "all coordinates must be finite"));
        }
        Ok(Self { x, y, t })
    }

    /// The identity element of `ℍⁿ`.
    pub fn origin(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Self {
            x: vec![0.0; n],
            y: vec![0.0; n],
            t: 0.0,
        }
    }

    /// Convenience constructor for `ℍ¹`.
    pub fn h1(x: f64, y: f64, t: f64) -> Self {
        Self::new(vec![x], vec![y], t).expect("finite coordinates")
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Squared Euclidean norm of the horizontal part.
    pub fn horizontal_norm_sq(&self) -> f64 {
        let h = self.horizontal_norm();
        h * h
    }

    /// Euclidean norm `|z|`, computed with scaling so that it cannot overflow.
    pub fn horizontal_norm(&self) -> f64 {
        let scale = self.x.iter().chain(&self.y).fold(0.0_f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let sum: f64 = self.x.iter().chain(&self.y).map(|c| (c / scale) * (c / scale)).sum();
        scale * sum.sqrt()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Group product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let symplectic: f64 = (0..self.dim())
            .map(|i| self.y[i] * other.x[i] - self.x[i] * other.y[i])
            .sum();
        Ok(Self {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
            t: self.t + other.t + 0.5 * symplectic,
        })
    }

    /// Group inverse `(−z, −t)`.
    pub fn inverse(&self) -> Self {
        Self {
            x: self.x.iter().map(|c| -c).collect(),
            y: self.y.iter().map(|c| -c).collect(),
            t: -self.t,
        }
    }

    /// Non-isotropic dilation `δ_r(z, t) = (rz, r²t)`.
    pub fn dilate(&self, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(invalid("r", format!("dilation factor must be positive, got {r}")));
        }
        Ok(Self {
            x: self.x.iter().map(|c| r * c).collect(),
            y: self.y.iter().map(|c| r * c).collect(),
            t: r * r * self.t,
        })
    }

    /// Korányi gauge `(|z|⁴ + t²)^{1/4}`.
    pub fn koranyi_norm(&self) -> f64 {
        let a = self.horizontal_norm();
        let b = self.t.abs();
        if a == 0.0 && b == 0.0 {
            return 0.0;
        }
        // Factor out m = max(|z|², |t|) before raising to the fourth power.
        if b <= a * a {
            let q = b / a / a;
            a * (1.0 + q * q).powf(0.25)
        } else {
            let q = a * a / b;
            b.sqrt() * (q * q + 1.0).powf(0.25)
        }
    }

    /// Componentwise distance used by the algebraic property tests.
    pub fn max_coord_diff(&self, other: &Self) -> f64 {
        self.x
            .iter()
            .zip(&other.x)
            .chain(self.y.iter().zip(&other.y))
            .map(|(a, b)| (a - b).abs())
            .fold((self.t - other.t).abs(), f64::max)
    }
}

/// Left-invariant Korányi distance `d_K(p, q) = |q⁻¹ · p|_K`.
pub fn koranyi_dist(p: &HPoint, q: &HPoint) -> Result<f64> {
    Ok(q.inverse().mul(p)?.koranyi_norm())
}

fn volume_cache() -> &'static RwLock<HashMap<usize, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Volume `C_Q` of the unit Korányi ball in `ℍⁿ`.
///
/// Slicing at height `t` leaves a Euclidean ball in `ℝ²ⁿ` of radius
/// `(1 − t²)^{1/4}`, so `C_Q = ω_{2n} ∫_{−1}^{1} (1 − t²)^{n/2} dt`. The
/// substitution `t = sin s` makes the integrand smooth; the result is cached
/// per `n`.
pub fn unit_ball_volume(n: Dimension) -> f64 {
    if let Some(v) = volume_cache().read().expect("cache lock").get(&n.n()) {
        return *v;
    }
    let nn = n.n();
    let omega = std::f64::consts::PI.powi(nn as i32) / libm::tgamma(nn as f64 + 1.0);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let slices = quadrature::integrate(|s: f64| s.cos().powi(nn as i32 + 1), -half_pi, half_pi, 1e-13, 1 << 16)
        .expect("smooth integrand converges");
    let v = omega * slices.value;
    volume_cache().write().expect("cache lock").entry(nn).or_insert(v);
    v
}

/// Volume `C_Q r^Q` of any Korányi ball of radius `r`.
pub fn ball_volume(n: Dimension, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid("r", format!("radius must be positive, got {r}")));
    }
    Ok(unit_ball_volume(n) * r.powi(n.homogeneous() as i32))
}

/// Draw `count` i.i.d. uniform points from the Korányi ball `B(center, r)`.
///
/// Rejection sampling from the box `[−r, r]^{2n} × [−r², r²]` followed by
/// left translation by `center`. Deterministic for a given `seed`.
pub fn sample_ball_uniform(center: &HPoint, r: f64, count: usize, seed: u64) -> Result<Vec<HPoint>> {
    if !(r > 0.0) {
        return Err(invalid("r", format!("radius must be positive, got {r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = center.dim();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = sample_box(&mut rng, n, r);
        if p.koranyi_norm() < r {
            out.push(center.mul(&p)?);
        }
    }
    Ok(out)
}

/// One uniform draw from the bounding box `[−r, r]^{2n} × [−r², r²]`.
pub(crate) fn sample_box<R: Rng>(rng: &mut R, n: usize, r: f64) -> HPoint {
    let mut coord = |half: f64| (2.0 * rng.random::<f64>() - 1.0) * half;
    let x: Vec<f64> = (0..n).map(|_| coord(r)).collect();
    let y: Vec<f64> = (0..n).map(|_| coord(r)).collect();
    let t = coord(r * r);
    HPoint { x, y, t }
}

/// Volume of the rejection box used by [`sample_ball_uniform`].
pub fn bounding_box_volume(n: Dimension, r: f64) -> f64 {
    (2.0 * r).powi(2 * n.n() as i32) * 2.0 * r * r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_matches_group_law() {
        let p = HPoint::h1(1.0, 0.0, 0.0);
        let q = HPoint::h1(0.0, 1.0, 0.0);
        assert_eq!(p.mul(&q).unwrap(), HPoint::h1(1.0, 1.0, -0.5));
    }

    #[test]
    fn identity_and_inverse() {
        let p = HPoint::new(vec![0.3, -1.2], vec![2.0, 0.5], 0.7).unwrap();
        let e = HPoint::origin(2);
        assert_eq!(p.mul(&e).unwrap(), p);
        assert_eq!(e.mul(&p).unwrap(), p);
        assert_eq!(p.mul(&p.inverse()).unwrap(), e);
        assert_eq!(p.inverse().inverse(), p);
        assert_eq!(HPoint::h1(1.0, 0.0, 2.0).inverse(), HPoint::h1(-1.0, 0.0, -2.0));
        assert_eq!(e.inverse(), e);
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let p = HPoint::origin(1);
        let q = HPoint::origin(2);
        assert!(matches!(p.mul(&q), Err(Error::DimensionMismatch { .. })));
        assert!(koranyi_dist(&p, &q).is_err());
        assert!(HPoint::new(vec![1.0], vec![], 0.0).is_err());
        assert!(HPoint::new(vec![f64::NAN], vec![0.0], 0.0).is_err());
    }

    #[test]
    fn dilation_examples() {
        let p = HPoint::h1(1.0, 0.0, 1.0);
        assert_eq!(p.dilate(1.0).unwrap(), p);
        assert_eq!(p.dilate(3.0).unwrap(), HPoint::h1(3.0, 0.0, 9.0));
        assert!(p.dilate(0.0).is_err());
        assert!(p.dilate(-1.0).is_err());
        let q = HPoint::h1(0.4, -0.2, 1.3);
        assert_relative_eq!(
            q.dilate(2.0).unwrap().koranyi_norm(),
            2.0 * q.koranyi_norm(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn norm_examples() {
        assert_eq!(HPoint::h1(1.0, 0.0, 0.0).koranyi_norm(), 1.0);
        assert_relative_eq!(HPoint::h1(0.0, 0.0, 4.0).koranyi_norm(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(
            HPoint::h1(0.0, 1.0, 1.0).koranyi_norm(),
            2f64.powf(0.25),
            max_relative = 1e-15
        );
        assert_eq!(HPoint::origin(3).koranyi_norm(), 0.0);
    }

    #[test]
    fn norm_survives_huge_coordinates() {
        let p = HPoint::h1(1e160, 0.0, 1e300);
        let expected = 1e160 * (1.0 + 1e-40f64 * 1e-40).powf(0.25);
        assert_relative_eq!(p.koranyi_norm(), expected, max_relative = 1e-14);
        let q = HPoint::h1(1e8, 1e8, 3e16);
        let a2 = 2e16_f64;
        assert_relative_eq!(q.koranyi_norm(), (a2 * a2 + 9e32).powf(0.25), max_relative = 1e-14);
    }

    #[test]
    fn distance_basics() {
        let p = HPoint::h1(0.5, 1.5, -2.0);
        let e = HPoint::origin(1);
        assert_eq!(koranyi_dist(&p, &p).unwrap(), 0.0);
        assert_relative_eq!(koranyi_dist(&e, &p).unwrap(), p.koranyi_norm());
    }

    #[test]
    fn unit_ball_volume_matches_closed_form() {
        // ω_{2n} · √π Γ(n/2 + 1) / Γ(n/2 + 3/2)
        for n in 1..=4 {
            let nf = n as f64;
            let omega = std::f64::consts::PI.powi(n as i32) / libm::tgamma(nf + 1.0);
            let beta = std::f64::consts::PI.sqrt() * libm::tgamma(nf / 2.0 + 1.0) / libm::tgamma(nf / 2.0 + 1.5);
            let v = unit_ball_volume(Dimension::new(n).unwrap());
            assert_relative_eq!(v, omega * beta, max_relative = 1e-12);
        }
        let pi = std::f64::consts::PI;
        assert_relative_eq!(
            unit_ball_volume(Dimension::new(1).unwrap()),
            pi * pi / 2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn ball_volume_homogeneity() {
        for n in 1..=3 {
            let d = Dimension::new(n).unwrap();
            let ratio = ball_volume(d, 2.0).unwrap() / ball_volume(d, 1.0).unwrap();
            assert_relative_eq!(ratio, 2f64.powi(2 * n as i32 + 2), max_relative = 1e-13);
            assert!(ball_volume(d, 1.01).unwrap() > ball_volume(d, 1.0).unwrap());
        }
        assert!(ball_volume(Dimension::new(1).unwrap(), 0.0).is_err());
    }

    #[test]
    fn sampling_contract() {
        let c = HPoint::h1(1.0, -2.0, 0.5);
        assert!(sample_ball_uniform(&c, 1.0, 0, 7).unwrap().is_empty());
        let pts = sample_ball_uniform(&c, 0.75, 2000, 7).unwrap();
        assert_eq!(pts.len(), 2000);
        for p in &pts {
            assert!(koranyi_dist(&c, p).unwrap() < 0.75 + 1e-12);
        }
        assert_eq!(pts, sample_ball_uniform(&c, 0.75, 2000, 7).unwrap());
        assert_ne!(pts, sample_ball_uniform(&c, 0.75, 2000, 8).unwrap());
    }

    #[test]
    fn acceptance_rate_matches_volume_ratio() {
        let d = Dimension::new(1).unwrap();
        let trials = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let hits = (0..trials)
            .filter(|_| sample_box(&mut rng, 1, 1.0).koranyi_norm() < 1.0)
            .count();
        let p = ball_volume(d, 1.0).unwrap() / bounding_box_volume(d, 1.0);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let rate = hits as f64 / trials as f64;
        assert!((rate - p).abs() < 3.0 * sigma, "rate {rate} vs {p}");
    }
}
