//! Weyl transforms on `ℍ¹` in the scaled Hermite basis.
//!
//! The Schrödinger representation acts on `L²(ℝ)` by
//!
//! ```text
//! π_λ(z, t) φ(ξ) = e^{iλt} e^{iλ(xξ + ½xy)} φ(ξ + y),   z = x + iy,
//! ```
//!
//! which is a homomorphism for the group law of [`crate::geometry`]. An
//! operator `T` truncated to `span{Φ_0^λ, …, Φ_{N−1}^λ}` is stored as the
//! matrix `M[l][j] = ⟨T Φ_j^λ, Φ_l^λ⟩`, so `M` acts on coefficient vectors
//! in the usual way.
//!
//! Everything here is for `n = 1`: the identities are dimension-generic and
//! the quadratures get expensive fast in higher dimension.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate, integrate_panels, kronrod_rule, uniform_breaks};
use crate::special::{hermite_scaled_all, laguerre};

/// Default truncation dimension.
pub const DEFAULT_TRUNCATION: usize = 12;
/// Default samples per axis of a [`GridFunction2D`].
pub const DEFAULT_GRID_POINTS: usize = 64;

// Hermite functions below index N are negligible beyond their turning
// point plus this many units of 1/√|λ|.
const XI_MARGIN: f64 = 9.0;
const REP_TOL: f64 = 1e-9;

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda == 0.0 {
        return Err(invalid("lambda", format!("must be finite and non-zero, got {lambda}")));
    }
    Ok(())
}

/// A finite matrix in the basis `{Φ_j^λ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedOperator {
    pub dim: usize,
    pub lambda: f64,
    /// Row-major: `entries[l * dim + j] = ⟨T Φ_j, Φ_l⟩`.
    pub entries: Vec<Complex64>,
}

impl TruncatedOperator {
    pub fn zeros(dim: usize, lambda: f64) -> Self {
        Self {
            dim,
            lambda,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// `c · P_k`, a multiple of the projection onto `Φ_k`.
    pub fn projection(dim: usize, lambda: f64, k: usize, c: f64) -> Self {
        let mut op = Self::zeros(dim, lambda);
        if k < dim {
            op.entries[k * dim + k] = Complex64::new(c, 0.0);
        }
        op
    }

    pub fn get(&self, l: usize, j: usize) -> Complex64 {
        self.entries[l * self.dim + j]
    }

    /// Hilbert–Schmidt norm, i.e. the Frobenius norm of the entries.
    pub fn hs_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|j| self.get(j, j)).collect()
    }

    pub fn max_offdiag(&self) -> f64 {
        let mut m = 0.0f64;
        for l in 0..self.dim {
            for j in 0..self.dim {
                if l != j {
                    m = m.max(self.get(l, j).norm());
                }
            }
        }
        m
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖T Φ_j‖²` within the truncation.
    pub fn column_norm_sq(&self, j: usize) -> f64 {
        (0..self.dim).map(|l| self.get(l, j).norm_sqr()).sum()
    }
}

/// Test profiles on `ℍ¹` that depend only on `|z|` and `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HeisenbergProfile {
    Zero,
    /// `exp(−a|z|² − b t²)`.
    Gaussian {
        a: f64,
        b: f64,
    },
    /// `½ erfc((‖(z,t)‖_K − radius) / width)`, a smoothed Korányi-ball indicator.
    SmoothBall {
        radius: f64,
        width: f64,
    },
}

impl HeisenbergProfile {
    pub fn eval(&self, rho: f64, t: f64) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Gaussian { a, b } => (-a * rho * rho - b * t * t).exp(),
            Self::SmoothBall { radius, width } => {
                let norm = (rho.powi(4) + t * t).sqrt().sqrt();
                0.5 * libm::erfc((norm - radius) / width)
            }
        }
    }

    fn extent_z(&self) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Gaussian { a, .. } => (46.0 / a).sqrt(),
            Self::SmoothBall { radius, width } => radius + 6.5 * width,
        }
    }

    fn extent_t(&self) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Gaussian { b, .. } => (46.0 / b).sqrt(),
            Self::SmoothBall { radius, width } => (radius + 6.5 * width).powi(2),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Zero => true,
            Self::Gaussian { a, b } => a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite(),
            Self::SmoothBall { radius, width } => {
                radius > 0.0 && width > 0.0 && radius.is_finite() && width.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(invalid("profile", format!("bad parameters in {self:?}")))
        }
    }

    /// `f^λ(ρ) = ∫ f(ρ, t) e^{iλt} dt`; real because the profiles are even in `t`.
    pub fn slice(&self, rho: f64, lambda: f64) -> Result<f64> {
        if matches!(self, Self::Zero) {
            return Ok(0.0);
        }
        let tmax = self.extent_t();
        let periods = (lambda.abs() * tmax / (2.0 * PI)).ceil() as usize;
        let breaks = uniform_breaks(0.0, tmax, (2 * periods).max(8));
        let est = integrate_panels(|t: f64| self.eval(rho, t) * (lambda * t).cos(), &breaks, 1e-14, 1 << 18)?;
        Ok(2.0 * est.value)
    }
}

/// Radial functions on `ℂ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RadialProfile {
    Zero,
    /// `exp(−a|z|²)`.
    Gaussian {
        a: f64,
    },
    /// `φ_{k,λ}(z) = L_k(½|λ||z|²) e^{−¼|λ||z|²}`, with `λ` taken from the transform.
    Laguerre {
        k: usize,
    },
    /// `½ erfc((|z| − radius) / width)`.
    SmoothDisc {
        radius: f64,
        width: f64,
    },
    /// `f^λ` for a profile on `ℍ¹`.
    Slice(HeisenbergProfile),
}

impl RadialProfile {
    pub fn eval(&self, rho: f64, lambda: f64) -> Result<f64> {
        Ok(match self {
            Self::Zero => 0.0,
            Self::Gaussian { a } => (-a * rho * rho).exp(),
            Self::Laguerre { k } => {
                let x = 0.5 * lambda.abs() * rho * rho;
                laguerre(*k, 0.0, x)? * (-0.5 * x).exp()
            }
            Self::SmoothDisc { radius, width } => 0.5 * libm::erfc((rho - radius) / width),
            Self::Slice(p) => p.slice(rho, lambda)?,
        })
    }

    /// Radius beyond which the profile is treated as zero.
    pub fn extent(&self, lambda: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Gaussian { a } => (46.0 / a).sqrt(),
            Self::Laguerre { k } => (2.0 * ((2 * k + 1) as f64).sqrt() + 12.0) / lambda.abs().sqrt(),
            Self::SmoothDisc { radius, width } => radius + 6.5 * width,
            Self::Slice(p) => p.extent_z(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Gaussian { a } if !(*a > 0.0 && a.is_finite()) => Err(invalid("a", "must be positive")),
            Self::SmoothDisc { radius, width } if !(*radius > 0.0 && *width > 0.0) => {
                Err(invalid("profile", "radius and width must be positive"))
            }
            Self::Slice(p) => p.validate(),
            _ => Ok(()),
        }
    }

    /// `∫ |g|² dz` by radial quadrature.
    pub fn l2_norm_sq(&self, lambda: f64) -> Result<f64> {
        let r = self.extent(lambda);
        if r == 0.0 {
            return Ok(0.0);
        }
        let rule = kronrod_rule(0.0, r, 48);
        let mut s = 0.0;
        for (rho, w) in rule {
            let g = self.eval(rho, lambda)?;
            s += w * rho * g * g;
        }
        Ok(2.0 * PI * s)
    }
}

/// Trapezoid sum of `e^{iλxξ} Φ_j(ξ + y) Φ_l(ξ)` over a uniform `ξ` grid with
/// `refine` times the base resolution.
fn rep_block(lambda: f64, x: f64, y: f64, dim: usize, refine: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    let s = lambda.abs();
    let sq = s.sqrt();
    let turning = ((2 * dim + 1) as f64).sqrt();
    let a = (turning + XI_MARGIN) / sq;
    let lo = (-a).max(-a - y);
    let hi = a.min(a - y);
    if lo >= hi {
        return out;
    }
    let omega = (lambda * x).abs() + (2.0 * turning + 10.0) * sq;
    let count = (((hi - lo) * omega / PI).ceil() as usize).max(16) * refine;
    let h = (hi - lo) / count as f64;
    let mut shifted = vec![0.0; dim];
    for i in 0..=count {
        let xi = lo + i as f64 * h;
        let w = if i == 0 || i == count { 0.5 * h } else { h };
        let base = hermite_scaled_all(dim, lambda, xi);
        shifted.copy_from_slice(&hermite_scaled_all(dim, lambda, xi + y));
        let c = Complex64::from_polar(w, lambda * x * xi);
        for (l, &bl) in base.iter().enumerate() {
            let cb = c * bl;
            let row = &mut out[l * dim..(l + 1) * dim];
            for (e, &aj) in row.iter_mut().zip(&shifted) {
                *e += cb * aj;
            }
        }
    }
    let phase = Complex64::from_polar(1.0, 0.5 * lambda * x * y);
    out.iter_mut().for_each(|e| *e *= phase);
    out
}

/// The block `⟨π_λ(z,0)Φ_j^λ, Φ_l^λ⟩` for `j, l < dim`, row-major in `l`.
pub fn rep_matrix(lambda: f64, z: Complex64, dim: usize) -> Result<Vec<Complex64>> {
    check_lambda(lambda)?;
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(invalid("z", "non-finite point"));
    }
    let coarse = rep_block(lambda, z.re, z.im, dim, 1);
    let fine = rep_block(lambda, z.re, z.im, dim, 2);
    let err = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if err > REP_TOL {
        return Err(Error::QuadratureNotConverged {
            tol: REP_TOL,
            estimate: err,
            max_nodes: 0,
        });
    }
    Ok(fine)
}

/// `⟨π_λ(z,0)Φ_j^λ, Φ_l^λ⟩`.
pub fn rep_matrix_element(lambda: f64, z: Complex64, j: usize, l: usize) -> Result<Complex64> {
    let dim = j.max(l) + 1;
    Ok(rep_matrix(lambda, z, dim)?[l * dim + j])
}

/// Quadrature resolution for [`weyl_transform_radial_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylGrid {
    /// 15-point Kronrod panels on `[0, extent]`.
    pub radial_panels: usize,
    /// Trapezoid nodes on the circle; raised to `2N + 4` if smaller.
    pub angular_nodes: usize,
}

impl Default for WeylGrid {
    fn default() -> Self {
        Self {
            radial_panels: 12,
            angular_nodes: 32,
        }
    }
}

/// `W_λ(g) = ∫ g(z) π_λ(z,0) dz` truncated to `dim × dim`.
pub fn weyl_transform_radial(profile: &RadialProfile, lambda: f64, dim: usize) -> Result<TruncatedOperator> {
    weyl_transform_radial_with(profile, lambda, dim, WeylGrid::default())
}

pub fn weyl_transform_radial_with(
    profile: &RadialProfile,
    lambda: f64,
    dim: usize,
    grid: WeylGrid,
) -> Result<TruncatedOperator> {
    check_lambda(lambda)?;
    profile.validate()?;
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let mut op = TruncatedOperator::zeros(dim, lambda);
    let r = profile.extent(lambda);
    if r == 0.0 {
        return Ok(op);
    }
    let rule = kronrod_rule(0.0, r, grid.radial_panels.max(1));
    let mut weights = Vec::with_capacity(rule.len());
    let mut peak = 0.0f64;
    for &(rho, w) in &rule {
        let g = profile.eval(rho, lambda)?;
        peak = peak.max(g.abs());
        weights.push((rho, w * rho * g));
    }
    let edge = profile.eval(r, lambda)?.abs();
    if edge > 1e-10 * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::Precondition(format!(
            "insufficient grid extent: |g({r})| = {edge:e} against peak {peak:e}"
        )));
    }
    let m = grid.angular_nodes.max(2 * dim + 4);
    let dalpha = 2.0 * PI / m as f64;
    for &(rho, w) in &weights {
        if w.abs() < 1e-300 {
            continue;
        }
        for q in 0..m {
            let (sn, cs) = (q as f64 * dalpha).sin_cos();
            let block = rep_block(lambda, rho * cs, rho * sn, dim, 1);
            let c = w * dalpha;
            for (e, b) in op.entries.iter_mut().zip(&block) {
                *e += b * c;
            }
        }
    }
    Ok(op)
}

/// Distance between `W_λ(φ_{k,λ})` and `(2π/|λ|) P_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylLaguerreReport {
    pub k: usize,
    pub lambda: f64,
    pub dim: usize,
    pub diagonal_entry: f64,
    pub target: f64,
    pub max_abs_deviation: f64,
}

fn check_headroom(k: usize, dim: usize) -> Result<()> {
    if k + 2 >= dim {
        return Err(Error::Precondition(format!(
            "truncation headroom: need k < N − 2, got k = {k}, N = {dim}"
        )));
    }
    Ok(())
}

/// `W_λ(φ_{k,λ}) = (2π/|λ|) P_k`, checked entrywise.
pub fn verify_weyl_laguerre(k: usize, lambda: f64, dim: usize) -> Result<WeylLaguerreReport> {
    check_headroom(k, dim)?;
    let op = weyl_transform_radial(&RadialProfile::Laguerre { k }, lambda, dim)?;
    let target = 2.0 * PI / lambda.abs();
    let expected = TruncatedOperator::projection(dim, lambda, k, target);
    Ok(WeylLaguerreReport {
        k,
        lambda,
        dim,
        diagonal_entry: op.get(k, k).re,
        target,
        max_abs_deviation: op.max_abs_diff(&expected)?,
    })
}

/// Samples of a function on the square `[−S, S)²` at `x_i = −S + i h`,
/// `h = 2S / M`, stored row-major in `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction2D {
    pub half_width: f64,
    pub points: usize,
    pub spacing: f64,
    pub samples: Vec<Complex64>,
}

impl GridFunction2D {
    pub fn new(half_width: f64, points: usize, samples: Vec<Complex64>) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(invalid("half_width", "must be positive"));
        }
        if points < 2 || !points.is_multiple_of(2) {
            return Err(invalid(
                "points",
                "need an even count of at least 2 so the origin is a node",
            ));
        }
        if samples.len() != points * points {
            return Err(Error::DimensionMismatch {
                left: samples.len(),
                right: points * points,
            });
        }
        Ok(Self {
            half_width,
            points,
            spacing: 2.0 * half_width / points as f64,
            samples,
        })
    }

    pub fn from_fn(half_width: f64, points: usize, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let mut g = Self::new(half_width, points, vec![Complex64::new(0.0, 0.0); points * points])?;
        for i in 0..points {
            for j in 0..points {
                g.samples[i * points + j] = f(g.coord(i), g.coord(j));
            }
        }
        Ok(g)
    }

    pub fn from_radial(profile: &RadialProfile, lambda: f64, half_width: f64, points: usize) -> Result<Self> {
        let mut g = Self::new(half_width, points, vec![Complex64::new(0.0, 0.0); points * points])?;
        for i in 0..points {
            for j in 0..points {
                let rho = g.coord(i).hypot(g.coord(j));
                g.samples[i * points + j] = Complex64::new(profile.eval(rho, lambda)?, 0.0);
            }
        }
        Ok(g)
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.samples[i * self.points + j]
    }

    /// `Σ |f|² h²`.
    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.spacing * self.spacing
    }

    /// Largest modulus on the outermost ring of samples, relative to the
    /// largest modulus overall.
    pub fn boundary_ratio(&self) -> f64 {
        let m = self.points;
        let peak = self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0f64;
        for i in 0..m {
            for &(a, b) in &[(0, i), (m - 1, i), (i, 0), (i, m - 1)] {
                edge = edge.max(self.get(a, b).norm());
            }
        }
        edge / peak
    }

    fn compatible(&self, other: &Self) -> bool {
        self.points == other.points && (self.half_width - other.half_width).abs() <= 1e-12 * self.half_width
    }
}

/// `(f ∗_λ g)(z) = ∫ f(z − w) g(w) e^{i(λ/2) Im(z·w̄)} dw` as a direct sum
/// over the grid; `f` is taken as zero off the grid.
pub fn twisted_convolution(f: &GridFunction2D, g: &GridFunction2D, lambda: f64) -> Result<GridFunction2D> {
    if !f.compatible(g) {
        return Err(invalid("g", "grid does not match f"));
    }
    if !lambda.is_finite() {
        return Err(invalid("lambda", "must be finite"));
    }
    let m = f.points;
    let half = (m / 2) as isize;
    let coords: Vec<f64> = (0..m).map(|i| f.coord(i)).collect();
    // Im(z·w̄) = y u − x v for z = x + iy, w = u + iv.
    let table: Vec<Complex64> = coords
        .iter()
        .flat_map(|&a| {
            coords
                .iter()
                .map(move |&b| Complex64::from_polar(1.0, 0.5 * lambda * a * b))
        })
        .collect();
    let h2 = f.spacing * f.spacing;
    let mut out = vec![Complex64::new(0.0, 0.0); m * m];
    for px in 0..m {
        for py in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for qx in 0..m {
                let fx = px as isize - qx as isize + half;
                if fx < 0 || fx >= m as isize {
                    continue;
                }
                let ty = table[py * m + qx];
                let frow = &f.samples[fx as usize * m..(fx as usize + 1) * m];
                let grow = &g.samples[qx * m..(qx + 1) * m];
                let mut inner = Complex64::new(0.0, 0.0);
                for qy in 0..m {
                    let fy = py as isize - qy as isize + half;
                    if fy < 0 || fy >= m as isize {
                        continue;
                    }
                    inner += frow[fy as usize] * grow[qy] * table[px * m + qy].conj();
                }
                acc += inner * ty;
            }
            out[px * m + py] = acc * h2;
        }
    }
    GridFunction2D::new(f.half_width, m, out)
}

/// Two sides of an identity and their relative gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_gap: f64,
}

impl IdentityReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let rel_gap = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
        Self { lhs, rhs, rel_gap }
    }
}

/// Half-width of the grid used for `f^λ ∗_λ φ_k`: wide enough that
/// `φ_k` has decayed below 1e−6 of its peak on the boundary.
pub fn twisted_grid_half_width(k: usize, lambda: f64) -> f64 {
    (8.0 + 1.5 * k as f64) / lambda.abs().sqrt()
}

/// `Σ_j |⟨f̂(λ)Φ_k, Φ_j⟩|²` against `(2π)^{−1}|λ| ‖f^λ ∗_λ φ_{k,λ}‖²`.
pub fn verify_twisted_identity(
    profile: &HeisenbergProfile,
    lambda: f64,
    k: usize,
    dim: usize,
) -> Result<IdentityReport> {
    verify_twisted_identity_with(profile, lambda, k, dim, DEFAULT_GRID_POINTS)
}

pub fn verify_twisted_identity_with(
    profile: &HeisenbergProfile,
    lambda: f64,
    k: usize,
    dim: usize,
    points: usize,
) -> Result<IdentityReport> {
    check_lambda(lambda)?;
    check_headroom(k, dim)?;
    profile.validate()?;
    if matches!(profile, HeisenbergProfile::Zero) {
        return Ok(IdentityReport::new(0.0, 0.0));
    }
    let slice = RadialProfile::Slice(profile.clone());
    let fhat = weyl_transform_radial(&slice, lambda, dim)?;
    let lhs = fhat.column_norm_sq(k);

    let half_width = twisted_grid_half_width(k, lambda);
    let fg = GridFunction2D::from_radial(&slice, lambda, half_width, points)?;
    let phi = GridFunction2D::from_radial(&RadialProfile::Laguerre { k }, lambda, half_width, points)?;
    let conv = twisted_convolution(&fg, &phi, lambda)?;
    let tail = conv.boundary_ratio();
    if tail > 1e-4 {
        return Err(Error::Precondition(format!(
            "grid tail: boundary/peak = {tail:e} on [−{half_width}, {half_width}]²"
        )));
    }
    let rhs = lambda.abs() / (2.0 * PI) * conv.norm_sq();
    Ok(IdentityReport::new(lhs, rhs))
}

/// `∫ |g|²` against `(2π)^{−1}|λ| ‖W_λ(g)‖²_HS`; the gap is the Hermite
/// tail beyond the truncation plus quadrature error.
pub fn verify_plancherel_weyl(profile: &RadialProfile, lambda: f64, dim: usize) -> Result<IdentityReport> {
    check_lambda(lambda)?;
    let lhs = profile.l2_norm_sq(lambda)?;
    let op = weyl_transform_radial(profile, lambda, dim)?;
    let rhs = lambda.abs() / (2.0 * PI) * op.hs_norm().powi(2);
    Ok(IdentityReport::new(lhs, rhs))
}

/// `∫ |g|²` by adaptive quadrature; used to cross-check the fixed rule.
pub fn l2_norm_sq_adaptive(profile: &RadialProfile, lambda: f64) -> Result<f64> {
    let r = profile.extent(lambda);
    if r == 0.0 {
        return Ok(0.0);
    }
    let est = integrate(
        |rho: f64| {
            let g = profile.eval(rho, lambda).unwrap_or(f64::NAN);
            rho * g * g
        },
        0.0,
        r,
        1e-13,
        1 << 18,
    )?;
    Ok(2.0 * PI * est.value)
}
