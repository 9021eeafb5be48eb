//! Distance sets in `ℍⁿ`: the quantitative Steinhaus constant, and an
//! explicit set that avoids a sparse sequence of distances `R_m` while
//! keeping density at least `f(R_m)` in `B(0, R_m)`.
//!
//! Lattice bookkeeping is exact. For `(z, t) ∈ ℤ^{2n} × ½ℤ` write
//! `S = |z|²` and `u = 2t`; then `4|(z,t)|_K⁴ = 4S² + u²` is an integer.
//! Half-integer heights appear because `w₂ · w₁⁻¹` has height
//! `t₂ − t₁ − ½ Im(z₂ · z̄₁)` for integer points `w₁, w₂`, so the distances
//! between shifted lattice points are norms of points of `ℤ^{2n} × ½ℤ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{koranyi_dist, sample_ball_uniform, Dimension, HPoint};

/// `(1 + c√(2n))^{2n} (1 + c² + c√(n/2))`, the volume of the box that
/// contains `E ∪ x·E` when `E ⊆ B(0,1)` and `x ∈ [0,c]^{2n} × [0,c²]`.
pub fn steinhaus_product(n: usize, c: f64) -> f64 {
    let nf = n as f64;
    (1.0 + c * (2.0 * nf).sqrt()).powi(2 * n as i32) * (1.0 + c * c + c * (nf / 2.0).sqrt())
}

/// Bracket width of the bisection in [`steinhaus_constant`].
pub const STEINHAUS_BRACKET: f64 = 1e-10;

/// The largest `c` with `steinhaus_product(n, c) < 2(1 − ρ)`, to within
/// [`STEINHAUS_BRACKET`]. The returned value always satisfies the strict
/// inequality.
pub fn steinhaus_constant(n: usize, rho: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "dimension must be at least 1"));
    }
    if !(rho > 0.0 && rho < 0.5) {
        return Err(invalid("rho", format!("must lie in (0, 1/2), got {rho}")));
    }
    let target = 2.0 * (1.0 - rho);
    let (mut lo, mut hi) = (0.0, 1.0);
    while steinhaus_product(n, hi) < target {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > STEINHAUS_BRACKET {
        let mid = 0.5 * (lo + hi);
        if steinhaus_product(n, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// A subset of `B(0, 1) ⊂ ℍ¹` on a uniform voxel grid of the box
/// `[−1, 1]² × [−1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoxelSet {
    pub cells: usize,
    occupied: Vec<bool>,
}

/// Default voxel count per axis.
pub const DEFAULT_VOXELS: usize = 64;

impl VoxelSet {
    /// Voxels whose centres lie in the unit ball and satisfy `keep`.
    pub fn from_predicate(cells: usize, keep: impl Fn(&HPoint) -> bool) -> Result<Self> {
        if cells < 2 {
            return Err(invalid("cells", "need at least 2 voxels per axis"));
        }
        let mut occupied = vec![false; cells * cells * cells];
        let mut v = Self {
            cells,
            occupied: vec![],
        };
        for i in 0..cells {
            for j in 0..cells {
                for k in 0..cells {
                    let p = HPoint::h1(v.center(i), v.center(j), v.center(k));
                    occupied[(i * cells + j) * cells + k] = p.koranyi_norm() < 1.0 && keep(&p);
                }
            }
        }
        v.occupied = occupied;
        Ok(v)
    }

    pub fn ball(cells: usize) -> Result<Self> {
        Self::from_predicate(cells, |_| true)
    }

    fn center(&self, i: usize) -> f64 {
        -1.0 + (i as f64 + 0.5) * 2.0 / self.cells as f64
    }

    fn index(&self, c: f64) -> Option<usize> {
        let s = (c + 1.0) * self.cells as f64 / 2.0;
        if s < 0.0 || s >= self.cells as f64 {
            None
        } else {
            Some(s as usize)
        }
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        if p.dim() != 1 {
            return false;
        }
        match (self.index(p.x()[0]), self.index(p.y()[0]), self.index(p.t())) {
            (Some(i), Some(j), Some(k)) => self.occupied[(i * self.cells + j) * self.cells + k],
            _ => false,
        }
    }

    pub fn count(&self) -> usize {
        self.occupied.iter().filter(|&&b| b).count()
    }

    fn centers(&self) -> Vec<HPoint> {
        let m = self.cells;
        let mut out = Vec::with_capacity(self.count());
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    if self.occupied[(i * m + j) * m + k] {
                        out.push(HPoint::h1(self.center(i), self.center(j), self.center(k)));
                    }
                }
            }
        }
        out
    }
}

/// Outcome of testing one `x` against `E · E⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverOutcome {
    Covered,
    NotCovered,
    /// `|x|_K > 2`, beyond the diameter of `E · E⁻¹` for `E ⊆ B(0,1)`.
    OutOfRange,
}

/// Whether `(x · E) ∩ E` is non-empty at voxel resolution.
pub fn steinhaus_cover_at(set: &VoxelSet, x: &HPoint) -> Result<CoverOutcome> {
    if x.dim() != 1 {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: 1,
        });
    }
    if x.koranyi_norm() > 2.0 {
        return Ok(CoverOutcome::OutOfRange);
    }
    for e in set.centers() {
        if set.contains(&x.mul(&e)?) {
            return Ok(CoverOutcome::Covered);
        }
    }
    Ok(CoverOutcome::NotCovered)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinhausCoverReport {
    pub c_rho: f64,
    pub measure_ratio: f64,
    pub tested: usize,
    pub covered: usize,
    pub failures: Vec<HPoint>,
}

/// Samples `x ∈ B(0, c_ρ)` and checks `x ∈ E · E⁻¹` for each.
pub fn verify_steinhaus_cover(
    n: usize,
    rho: f64,
    set: &VoxelSet,
    sample_count: usize,
    seed: u64,
) -> Result<SteinhausCoverReport> {
    if n != 1 {
        return Err(invalid("n", "voxel verification is implemented for n = 1"));
    }
    let c_rho = steinhaus_constant(n, rho)?;
    let ball = VoxelSet::ball(set.cells)?.count();
    let measure_ratio = set.count() as f64 / ball as f64;
    if measure_ratio < 1.0 - rho {
        return Err(Error::Precondition(format!(
            "voxel measure ratio {measure_ratio:.6} is below 1 − ρ = {}",
            1.0 - rho
        )));
    }
    let centers = set.centers();
    let mut covered = 0;
    let mut failures = Vec::new();
    for x in sample_ball_uniform(&HPoint::origin(1), c_rho, sample_count, seed)? {
        let mut hit = false;
        for e in &centers {
            if set.contains(&x.mul(e)?) {
                hit = true;
                break;
            }
        }
        if hit {
            covered += 1;
        } else {
            failures.push(x);
        }
    }
    Ok(SteinhausCoverReport {
        c_rho,
        measure_ratio,
        tested: sample_count,
        covered,
        failures,
    })
}

/// Default deduplication resolution of [`distance_set`], relative to
/// `max(1, d)`.
pub const DEFAULT_DISTANCE_RESOLUTION: f64 = 1e-12;

/// All pairwise Korányi distances, `0` included, sorted and deduplicated.
pub fn distance_set(points: &[HPoint]) -> Result<Vec<f64>> {
    distance_set_with(points, DEFAULT_DISTANCE_RESOLUTION)
}

pub fn distance_set_with(points: &[HPoint], resolution: f64) -> Result<Vec<f64>> {
    let mut d = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2 + 1);
    if !points.is_empty() {
        d.push(0.0);
    }
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d.push(koranyi_dist(p, q)?);
        }
    }
    d.sort_by(f64::total_cmp);
    d.dedup_by(|b, a| (*b - *a).abs() <= resolution * a.abs().max(1.0));
    Ok(d)
}

/// A decreasing profile `f : (0, ∞) → [0, 1]` with `f(R) → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DensityProfile {
    /// `min(1, scale · R^{−power})`.
    InversePower { scale: f64, power: f64 },
    /// `min(1, scale · e^{−rate R})`.
    Exponential { scale: f64, rate: f64 },
}

impl DensityProfile {
    /// Profile used by the desk-scale counterexample run.
    pub const DESK: Self = Self::Exponential { scale: 1e-4, rate: 0.5 };

    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Self::InversePower { scale, power } => (scale * r.powf(-power)).min(1.0),
            Self::Exponential { scale, rate } => (scale * (-rate * r).exp()).min(1.0),
        }
    }

    /// Smallest `R` with `f(R) ≤ bound`.
    pub fn threshold(&self, bound: f64) -> f64 {
        match *self {
            Self::InversePower { scale, power } => (scale / bound).powf(1.0 / power),
            Self::Exponential { scale, rate } => ((scale / bound).ln() / rate).max(0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::InversePower { scale, power } => scale > 0.0 && power > 0.0,
            Self::Exponential { scale, rate } => scale > 0.0 && rate > 0.0,
        };
        if ok && self.eval(1.0).is_finite() {
            Ok(())
        } else {
            Err(invalid(
                "f",
                format!("profile must be positive and vanishing, got {self:?}"),
            ))
        }
    }
}

/// Half-widths `(N_z, N_t)` of the integer block `{|x_i|, |y_i| ≤ N_z, |t| ≤ N_t}`
/// used at radius `R`. With the block shifted to `(R/4, 0, …)`, the
/// horizontal part stays within `[R/8, 3R/8]` and the height below
/// `5R²/64`, which puts the whole block inside `B(0, R/2) ∖ B(0, R/8)`.
pub fn lattice_block(n: usize, r: f64) -> (i64, i64) {
    let nz = (r / (8.0 * (2.0 * n as f64).sqrt())).floor() as i64;
    let nt = (r * r / 16.0).floor() as i64;
    (nz, nt)
}

fn block_count(n: usize, nz: i64, nt: i64) -> f64 {
    ((2 * nz + 1) as f64).powi(2 * n as i32) * (2 * nt + 1) as f64
}

/// `|P_m| / |B(0, R_m)|` for disjoint balls of radius `radius` around each
/// shifted lattice point.
pub fn stage_density(n: usize, r: f64, radius: f64) -> f64 {
    let (nz, nt) = lattice_block(n, r);
    block_count(n, nz, nt) * (radius / r).powi(2 * n as i32 + 2)
}

/// A point of `ℤ^{2n} × ½ℤ` given by its horizontal coordinates and `u = 2t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub z: Vec<i64>,
    pub u: i64,
}

impl LatticePoint {
    pub fn norm(&self) -> f64 {
        let s: i64 = self.z.iter().map(|c| c * c).sum();
        norm_from(s as u64, self.u.unsigned_abs())
    }
}

fn norm_from(s: u64, u: u64) -> f64 {
    let s = s as f64;
    let t = 0.5 * u as f64;
    (s * s + t * t).sqrt().sqrt()
}

fn isqrt(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = (v as f64).sqrt() as u128;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

/// Calls `visit(S, z)` for every value `S = |z|²` of an integer vector in
/// `ℤ^{2n}` with `S ≤ smax`. For `n = 1` each representation `x ≤ y` is
/// visited; for `n ≥ 2` every integer is a sum of four squares and `z` is
/// left empty.
fn for_each_square_sum(n: usize, smax: u64, mut visit: impl FnMut(u64, Option<(i64, i64)>)) {
    if n == 1 {
        let bound = isqrt(smax as u128) as i64;
        for x in 0..=bound {
            let rem = smax - (x * x) as u64;
            let ymax = isqrt(rem as u128) as i64;
            for y in x..=ymax {
                visit((x * x + y * y) as u64, Some((x, y)));
            }
        }
    } else {
        for s in 0..=smax {
            visit(s, None);
        }
    }
}

fn decompose(n: usize, s: u64) -> Vec<i64> {
    let mut z = vec![0i64; 2 * n];
    let mut rem = s;
    for slot in 0..2 * n {
        let left = (2 * n - slot - 1) as u64;
        let mut c = isqrt(rem as u128) as u64;
        // Greedy with backtracking on the remainder being representable.
        loop {
            let r = rem - c * c;
            if representable(left as usize, r) {
                z[slot] = c as i64;
                rem = r;
                break;
            }
            c -= 1;
        }
    }
    z
}

fn representable(squares: usize, r: u64) -> bool {
    match squares {
        0 => r == 0,
        1 => {
            let q = isqrt(r as u128) as u64;
            q * q == r
        }
        2 => {
            let mut a = 0u64;
            while 2 * a * a <= r {
                let b = isqrt((r - a * a) as u128) as u64;
                if a * a + b * b == r {
                    return true;
                }
                a += 1;
            }
            false
        }
        3 => {
            // Legendre: r is a sum of three squares unless r = 4^a (8b + 7).
            let mut v = r;
            while v > 0 && v.is_multiple_of(4) {
                v /= 4;
            }
            v % 8 != 7
        }
        _ => true,
    }
}

/// The `keep` points of `ℤ^{2n} × ½ℤ` whose Korányi norms are closest to
/// `r`, with their distances, nearest first. Exhaustive: every `S ≤ (r+1)²`
/// is visited and the two heights closest to the sphere are tested.
pub fn nearest_lattice_norms(n: usize, r: f64, keep: usize) -> Vec<(f64, LatticePoint)> {
    let smax = ((r + 1.0) * (r + 1.0)).floor() as u64;
    let r4 = 4.0 * r.powi(4);
    let mut best: Vec<(f64, u64, u64, Option<(i64, i64)>)> = Vec::new();
    let worst = |b: &Vec<(f64, u64, u64, Option<(i64, i64)>)>| b.last().map_or(f64::INFINITY, |e| e.0);
    for_each_square_sum(n, smax, |s, z| {
        let base = 4.0 * (s as f64) * (s as f64);
        let target = r4 - base;
        let u0 = if target > 0.0 { target.sqrt().floor() as u64 } else { 0 };
        for u in [u0.saturating_sub(1), u0, u0 + 1] {
            let d = (norm_from(s, u) - r).abs();
            if best.len() < keep || d < worst(&best) {
                if best.iter().any(|e| e.1 == s && e.2 == u && e.3 == z) {
                    continue;
                }
                best.push((d, s, u, z));
                best.sort_by(|a, b| a.0.total_cmp(&b.0));
                best.truncate(keep);
            }
        }
    });
    best.into_iter()
        .map(|(d, s, u, z)| {
            let z = match z {
                Some((x, y)) => vec![x, y],
                None => decompose(n, s),
            };
            (d, LatticePoint { z, u: u as i64 })
        })
        .collect()
}

/// Distance from `r` to the nearest Korányi norm of `ℤ^{2n} × ½ℤ`.
pub fn lattice_clearance(n: usize, r: f64) -> f64 {
    nearest_lattice_norms(n, r, 1).first().map_or(f64::INFINITY, |e| e.0)
}

/// Sorted distinct lattice norms in `[a, b]`.
fn lattice_norms_in(n: usize, a: f64, b: f64) -> Vec<f64> {
    let lo = (4.0 * a.powi(4)).ceil() as u128;
    let hi = (4.0 * b.powi(4)).floor() as u128;
    let smax = (b * b).floor() as u64;
    let mut ms: Vec<u128> = Vec::new();
    for_each_square_sum(n, smax, |s, _| {
        let base = 4 * (s as u128) * (s as u128);
        if base > hi {
            return;
        }
        let umin = if base >= lo {
            0
        } else {
            let v = lo - base;
            let q = isqrt(v);
            if q * q == v {
                q
            } else {
                q + 1
            }
        };
        let umax = isqrt(hi - base);
        let mut u = umin;
        while u <= umax {
            ms.push(base + u * u);
            u += 1;
        }
    });
    ms.sort_unstable();
    ms.dedup();
    ms.into_iter().map(|m| (m as f64 / 4.0).sqrt().sqrt()).collect()
}

/// Midpoint and half-width of the widest gap between consecutive lattice
/// norms inside `[a, a + w]`, widening `w` until at least two norms are seen.
fn widest_gap(n: usize, a: f64) -> (f64, f64) {
    let q = 2 * n + 2;
    let mut w = (2e5 / (16.0 * a.powi(q as i32 - 1) + 1.0)).min(1.0);
    loop {
        let norms = lattice_norms_in(n, a, a + w);
        if norms.len() >= 2 {
            let (mut best, mut at) = (0.0, a);
            for p in norms.windows(2) {
                if p[1] - p[0] > best {
                    best = p[1] - p[0];
                    at = 0.5 * (p[0] + p[1]);
                }
            }
            return (at, 0.5 * best);
        }
        w *= 2.0;
    }
}

/// Tuning of [`rice_sequences_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiceOptions {
    /// `ε₀`, which sets the ball radius `ε₀/4` at the first stage.
    pub eps0: f64,
    pub r1_min: f64,
    pub r1_max: f64,
    pub max_radius: f64,
    /// Also require `f(R_m) ≤ ½ |P_m| / |B(0, R_m)|`, so that the density
    /// claim holds by counting rather than only the lattice conditions.
    pub density_guard: bool,
    pub max_attempts: usize,
}

impl Default for RiceOptions {
    fn default() -> Self {
        Self {
            eps0: 1.0,
            r1_min: 1.1,
            r1_max: 50.0,
            max_radius: 1e4,
            density_guard: false,
            max_attempts: 200,
        }
    }
}

/// Radii, scales and the lattice clearance each radius was chosen with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiceSequences {
    pub radii: Vec<f64>,
    pub eps: Vec<f64>,
    pub clearance: Vec<f64>,
}

// Clearances below this multiple of R are not resolved reliably by the
// floating-point distance checks downstream.
const CLEARANCE_FLOOR: f64 = 1e-13;

pub fn rice_sequences(n: usize, f: &DensityProfile, m_max: usize) -> Result<RiceSequences> {
    rice_sequences_with(n, f, m_max, &RiceOptions::default())
}

/// Chooses `R_1, ε_1, R_2, ε_2, …` in that order. Each `R_m` is the midpoint
/// of the widest gap of lattice norms in a window starting at the smallest
/// admissible radius; `ε_m = min(clearance/8, ε_{m−1})/2`.
pub fn rice_sequences_with(n: usize, f: &DensityProfile, m_max: usize, opts: &RiceOptions) -> Result<RiceSequences> {
    if n == 0 {
        return Err(invalid("n", "dimension must be at least 1"));
    }
    if m_max == 0 {
        return Err(invalid("m_max", "need at least one stage"));
    }
    f.validate()?;
    if !(opts.eps0 > 0.0 && opts.eps0 <= 1.0) {
        return Err(invalid(
            "eps0",
            "must lie in (0, 1] so the first-stage balls stay disjoint",
        ));
    }
    let mut out = RiceSequences {
        radii: Vec::new(),
        eps: Vec::new(),
        clearance: Vec::new(),
    };
    let mut eps_prev = opts.eps0;
    for m in 1..=m_max {
        let (mut start, limit) = if m == 1 {
            (opts.r1_min, opts.r1_max)
        } else {
            let prev = out.radii[m - 2];
            let fbound = (eps_prev / 16.0).powi(2);
            ((100.0 * prev).max(f.threshold(fbound)), opts.max_radius)
        };
        let mut chosen = None;
        for _ in 0..opts.max_attempts {
            if start > limit {
                break;
            }
            let (r, clearance) = widest_gap(n, start);
            if clearance < CLEARANCE_FLOOR * r.max(1.0) {
                return Err(Error::SearchFailed(format!(
                    "stage {m}: widest lattice gap near R = {r} has half-width {clearance:e}, \
                     below the double-precision floor {:e}",
                    CLEARANCE_FLOOR * r.max(1.0)
                )));
            }
            if opts.density_guard && f.eval(r) > 0.5 * stage_density(n, r, eps_prev / 4.0) {
                start = r * 1.05;
                continue;
            }
            chosen = Some((r, clearance));
            break;
        }
        let Some((r, clearance)) = chosen else {
            return Err(Error::SearchFailed(format!(
                "stage {m}: no admissible radius in window [{start}, {limit}]"
            )));
        };
        let eps = (clearance / 8.0).min(eps_prev) / 2.0;
        out.radii.push(r);
        out.eps.push(eps);
        out.clearance.push(clearance);
        eps_prev = eps;
    }
    Ok(out)
}

/// Inputs of the counterexample set `A = ∪_m P_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub n: usize,
    pub density_profile: DensityProfile,
    pub m_max: usize,
    pub radii: Vec<f64>,
    pub eps: Vec<f64>,
    pub eps0: f64,
    /// Shift `(z_m, t_m)` of the stage-`m` lattice block.
    pub centers: Vec<HPoint>,
    /// `(N_z, N_t)` per stage.
    pub blocks: Vec<(i64, i64)>,
}

impl CounterexampleSpec {
    /// Spec with the shifts at `(R_m/4, 0, …, 0)`.
    pub fn from_sequences(n: usize, f: DensityProfile, seq: &RiceSequences, eps0: f64) -> Result<Self> {
        let dim = Dimension::new(n)?;
        let centers = seq
            .radii
            .iter()
            .map(|&r| {
                let mut x = vec![0.0; dim.n()];
                x[0] = r / 4.0;
                HPoint::new(x, vec![0.0; dim.n()], 0.0)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            density_profile: f,
            m_max: seq.radii.len(),
            radii: seq.radii.clone(),
            eps: seq.eps.clone(),
            eps0,
            centers,
            blocks: seq.radii.iter().map(|&r| lattice_block(n, r)).collect(),
        })
    }

    /// `ε_{m−1}` for stage `m` (1-based), with `ε₀` at the first stage.
    pub fn eps_before(&self, m: usize) -> f64 {
        if m == 1 {
            self.eps0
        } else {
            self.eps[m - 2]
        }
    }

    pub fn ball_radius(&self, m: usize) -> f64 {
        0.25 * self.eps_before(m)
    }

    pub fn eps_min(&self) -> f64 {
        self.eps.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Result of machine-checking every spec invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecCertificate {
    /// Nearest lattice norm to `R_j`, per `j`.
    pub clearance: Vec<f64>,
    pub growth_ok: bool,
    pub profile_ok: bool,
    pub lattice_ok: bool,
    pub containment_ok: bool,
}

impl SpecCertificate {
    pub fn ok(&self) -> bool {
        self.growth_ok && self.profile_ok && self.lattice_ok && self.containment_ok
    }
}

/// Upper bound on `|x|_K` and lower bound on `|z|` over the stage-`m` block.
fn block_bounds(spec: &CounterexampleSpec, m: usize) -> (f64, f64) {
    let (nz, nt) = spec.blocks[m - 1];
    let c = &spec.centers[m - 1];
    let a = c.horizontal_norm();
    let reach = (2.0 * spec.n as f64).sqrt() * nz as f64;
    let zmax = a + reach;
    let tmax = c.t().abs() + nt as f64 + 0.5 * a * reach;
    ((zmax.powi(4) + tmax * tmax).sqrt().sqrt(), (a - reach).max(0.0))
}

pub fn certify_spec(spec: &CounterexampleSpec) -> Result<SpecCertificate> {
    let m_max = spec.m_max;
    if spec.radii.len() != m_max || spec.eps.len() != m_max || spec.centers.len() != m_max || spec.blocks.len() != m_max
    {
        return Err(invalid("spec", "per-stage lists must all have length m_max"));
    }
    let mut growth_ok = spec.eps.iter().all(|&e| e > 0.0) && spec.eps.windows(2).all(|w| w[1] <= w[0]);
    let mut profile_ok = true;
    for m in 2..=m_max {
        growth_ok &= spec.radii[m - 1] >= 100.0 * spec.radii[m - 2];
        profile_ok &= spec.density_profile.eval(spec.radii[m - 1]) <= (spec.eps[m - 2] / 16.0).powi(2);
    }
    let clearance: Vec<f64> = spec.radii.iter().map(|&r| lattice_clearance(spec.n, r)).collect();
    let mut lattice_ok = true;
    for m in 1..=m_max {
        for j in 1..=m {
            lattice_ok &= clearance[j - 1] > 4.0 * spec.eps[m - 1];
        }
    }
    let mut containment_ok = spec.eps0 <= 1.0;
    for m in 1..=m_max {
        let (outer, inner) = block_bounds(spec, m);
        let prev = if m == 1 { 0.0 } else { spec.radii[m - 2] };
        containment_ok &= outer < spec.radii[m - 1] / 2.0 && inner > 10.0 * prev;
    }
    Ok(SpecCertificate {
        clearance,
        growth_ok,
        profile_ok,
        lattice_ok,
        containment_ok,
    })
}

/// Membership oracle for `A = ∪_m P_m`, where
/// `P_m = {p : d_K(p, q) < ε_{m−1}/4 for some q ∈ L_m}` and
/// `L_m = {c_m · w⁻¹ : w in the stage-m integer block}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetOracle {
    pub spec: CounterexampleSpec,
    pub certificate: SpecCertificate,
}

pub fn build_counterexample(spec: CounterexampleSpec) -> Result<SetOracle> {
    let certificate = certify_spec(&spec)?;
    if !certificate.ok() {
        return Err(Error::Precondition(format!(
            "spec invariants violated: {certificate:?}"
        )));
    }
    Ok(SetOracle { spec, certificate })
}

impl SetOracle {
    /// Stage-`m` lattice point `c_m · w⁻¹`.
    pub fn lattice_point(&self, m: usize, z: &[i64], t: i64) -> Result<HPoint> {
        let n = self.spec.n;
        let w = HPoint::new(
            z[..n].iter().map(|&c| c as f64).collect(),
            z[n..].iter().map(|&c| c as f64).collect(),
            t as f64,
        )?;
        self.spec.centers[m - 1].mul(&w.inverse())
    }

    /// The stage `m` (1-based) whose `P_m` contains `p`, if any.
    pub fn stage_of(&self, p: &HPoint) -> Option<usize> {
        if p.dim() != self.spec.n {
            return None;
        }
        (1..=self.spec.m_max).find(|&m| self.in_stage(m, p))
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.stage_of(p).is_some()
    }

    fn in_stage(&self, m: usize, p: &HPoint) -> bool {
        let n = self.spec.n;
        let (nz, nt) = self.spec.blocks[m - 1];
        let r = self.spec.ball_radius(m);
        let Ok(v) = self.spec.centers[m - 1].inverse().mul(p) else {
            return false;
        };
        // |w · v|_K < r < ½ forces w's horizontal part to round −v's.
        let mut zw = Vec::with_capacity(2 * n);
        for &c in v.x().iter().chain(v.y()) {
            let k = (-c).round();
            if k.abs() > nz as f64 {
                return false;
            }
            zw.push(k);
        }
        let symplectic: f64 = (0..n).map(|i| zw[n + i] * v.x()[i] - zw[i] * v.y()[i]).sum();
        let tw = (-v.t() - 0.5 * symplectic).round();
        if tw.abs() > nt as f64 {
            return false;
        }
        let Ok(w) = HPoint::new(zw[..n].to_vec(), zw[n..].to_vec(), tw) else {
            return false;
        };
        w.mul(&v).map(|q| q.koranyi_norm() < r).unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub m: usize,
    pub radius: f64,
    pub f: f64,
    pub samples: usize,
    pub hits: usize,
    pub estimate: f64,
    /// Binomial standard deviation at `f(R_m)`.
    pub sigma: f64,
    /// `|P_m| / |B(0, R_m)|` from the disjoint-ball count.
    pub counted: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub pairs: usize,
    pub eps_min: f64,
    /// `min_j |d_K(x, y) − R_j|` over all sampled pairs.
    pub min_margin: f64,
    pub witness: Option<(HPoint, HPoint)>,
    pub avoidance_ok: bool,
    /// Lattice differences scanned to cover every pair of block centres,
    /// and the minimum margin among them.
    pub center_pairs: usize,
    pub center_margin: f64,
    pub density: Vec<DensityCheck>,
    pub ok: bool,
}

fn random_block_point<R: Rng>(rng: &mut R, n: usize, nz: i64, nt: i64) -> (Vec<i64>, i64) {
    let z = (0..2 * n).map(|_| rng.random_range(-nz..=nz)).collect();
    (z, rng.random_range(-nt..=nt))
}

/// `q · δ` with `δ` uniform in the Korányi ball of radius `r`.
fn perturb<R: Rng>(rng: &mut R, q: &HPoint, r: f64) -> Result<HPoint> {
    let n = q.dim();
    loop {
        let x: Vec<f64> = (0..n).map(|_| r * (2.0 * rng.random::<f64>() - 1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| r * (2.0 * rng.random::<f64>() - 1.0)).collect();
        let t = r * r * (2.0 * rng.random::<f64>() - 1.0);
        let d = HPoint::new(x, y, t)?;
        if d.koranyi_norm() < r {
            return q.mul(&d);
        }
    }
}

fn margin(spec: &CounterexampleSpec, d: f64) -> f64 {
    spec.radii.iter().map(|&r| (d - r).abs()).fold(f64::INFINITY, f64::min)
}

/// Block points `w₁, w₂ = g · w₁` realising a lattice difference `g` whose
/// norm is close to a radius; `None` if the half-integer height cannot be
/// realised or the pair leaves the block.
fn realise_difference(g: &LatticePoint, n: usize, nz: i64, nt: i64) -> Option<((Vec<i64>, i64), (Vec<i64>, i64))> {
    let mut shifts = vec![vec![0i64; 2 * n]];
    for i in 0..2 * n {
        let mut e = vec![0i64; 2 * n];
        e[i] = 1;
        shifts.push(e);
    }
    for z1 in shifts {
        // g · w₁ has height u/2 + t₁ + ½ Σ(y_g x₁ − x_g y₁).
        let sym: i64 = (0..n).map(|i| g.z[n + i] * z1[i] - g.z[i] * z1[n + i]).sum();
        if (g.u + sym).rem_euclid(2) != 0 {
            continue;
        }
        let t1 = 0;
        let t2 = (g.u + sym) / 2 + t1;
        let z2: Vec<i64> = g.z.iter().zip(&z1).map(|(a, b)| a + b).collect();
        if z2.iter().chain(&z1).all(|c| c.abs() <= nz) && t2.abs() <= nt {
            return Some(((z1, t1), (z2, t2)));
        }
    }
    None
}

/// Checks distance avoidance on sampled member pairs and density by Monte
/// Carlo in each `B(0, R_m)`.
pub fn verify_counterexample(
    oracle: &SetOracle,
    pair_samples: usize,
    density_samples: usize,
    seed: u64,
) -> Result<CounterexampleReport> {
    let spec = &oracle.spec;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_margin = f64::INFINITY;
    let mut witness = None;
    let mut pairs = 0usize;
    let record = |p: HPoint, q: HPoint, min_margin: &mut f64, witness: &mut Option<(HPoint, HPoint)>| -> Result<()> {
        let d = koranyi_dist(&p, &q)?;
        let g = margin(spec, d);
        if g < *min_margin {
            *min_margin = g;
            *witness = Some((p, q));
        }
        Ok(())
    };

    // Pairs whose block difference has a norm as close to some R_j as the lattice allows.
    for m in 1..=spec.m_max {
        let (nz, nt) = spec.blocks[m - 1];
        let r = spec.ball_radius(m);
        for &rj in &spec.radii {
            for (_, g) in nearest_lattice_norms(n, rj, 16) {
                let Some(((z1, t1), (z2, t2))) = realise_difference(&g, n, nz, nt) else {
                    continue;
                };
                let p = oracle.lattice_point(m, &z1, t1)?;
                let q = oracle.lattice_point(m, &z2, t2)?;
                for _ in 0..8 {
                    let a = perturb(&mut rng, &p, r)?;
                    let b = perturb(&mut rng, &q, r)?;
                    record(a, b, &mut min_margin, &mut witness)?;
                    pairs += 1;
                }
                record(p, q, &mut min_margin, &mut witness)?;
                pairs += 1;
            }
        }
    }

    // Random member pairs, within one stage and across stages.
    let stages = spec.m_max;
    let draw = |rng: &mut ChaCha8Rng, m: usize| -> Result<HPoint> {
        let (nz, nt) = spec.blocks[m - 1];
        let (z, t) = random_block_point(rng, n, nz, nt);
        let q = oracle.lattice_point(m, &z, t)?;
        perturb(rng, &q, spec.ball_radius(m))
    };
    while pairs < pair_samples {
        let m1 = rng.random_range(1..=stages);
        let m2 = if rng.random::<f64>() < 0.75 {
            m1
        } else {
            rng.random_range(1..=stages)
        };
        let a = draw(&mut rng, m1)?;
        let b = draw(&mut rng, m2)?;
        for p in [&a, &b] {
            if !oracle.contains(p) {
                return Err(Error::Precondition(format!("sampled point {p:?} is not a member")));
            }
        }
        record(a, b, &mut min_margin, &mut witness)?;
        pairs += 1;
    }

    // Every centre pair of a block differs by some g = w₂ · w₁⁻¹ with
    // |z_g| ≤ 2N_z per coordinate and |t_g| ≤ 2N_t + n N_z², so scanning that
    // box of ℤ^{2n} × ½ℤ covers all centre pairs at once.
    let mut center_pairs = 0usize;
    let mut center_margin = f64::INFINITY;
    for m in 1..=stages {
        let (nz, nt) = spec.blocks[m - 1];
        let zr = 2 * nz;
        let umax = 2 * (2 * nt + n as i64 * nz * nz);
        let side = (2 * zr + 1) as usize;
        for idx in 0..side.pow(2 * n as u32) {
            let mut k = idx;
            let mut s2 = 0i64;
            for _ in 0..2 * n {
                let c = (k % side) as i64 - zr;
                s2 += c * c;
                k /= side;
            }
            for u in -umax..=umax {
                if s2 == 0 && u == 0 {
                    continue;
                }
                center_margin = center_margin.min(margin(spec, norm_from(s2 as u64, u.unsigned_abs())));
                center_pairs += 1;
            }
        }
    }

    let eps_min = spec.eps_min();
    let avoidance_ok = min_margin > 2.0 * eps_min && (center_pairs == 0 || center_margin > 2.0 * eps_min);

    let mut density = Vec::with_capacity(stages);
    for m in 1..=stages {
        let radius = spec.radii[m - 1];
        let pts = sample_ball_uniform(&HPoint::origin(n), radius, density_samples, seed.wrapping_add(m as u64))?;
        let hits = pts.iter().filter(|p| oracle.contains(p)).count();
        let estimate = hits as f64 / density_samples as f64;
        let f = spec.density_profile.eval(radius);
        let sigma = (f * (1.0 - f) / density_samples as f64).sqrt();
        let counted = (1..=m)
            .map(|j| {
                let (nz, nt) = spec.blocks[j - 1];
                block_count(n, nz, nt) * (spec.ball_radius(j) / radius).powi(2 * n as i32 + 2)
            })
            .sum();
        density.push(DensityCheck {
            m,
            radius,
            f,
            samples: density_samples,
            hits,
            estimate,
            sigma,
            counted,
            ok: estimate >= f - 3.0 * sigma,
        });
    }
    let ok = avoidance_ok && density.iter().all(|d| d.ok);
    Ok(CounterexampleReport {
        pairs,
        eps_min,
        min_margin,
        witness,
        avoidance_ok,
        center_pairs,
        center_margin,
        density,
        ok,
    })
}

/// Sequences, spec and oracle for a run with the density guard on.
pub fn desk_counterexample(n: usize, f: DensityProfile, m_max: usize) -> Result<SetOracle> {
    let opts = RiceOptions {
        density_guard: true,
        ..RiceOptions::default()
    };
    let seq = rice_sequences_with(n, &f, m_max, &opts)?;
    build_counterexample(CounterexampleSpec::from_sequences(n, f, &seq, opts.eps0)?)
}
