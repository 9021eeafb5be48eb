//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Integration starts from a caller-supplied partition, which is how the
//! oscillatory integrals in [`crate::spectral`] get one panel per fraction of
//! an oscillation, and then bisects the panel with the largest error estimate
//! until the summed estimate is below the absolute tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Nodes evaluated per Gauss–Kronrod panel.
pub const NODES_PER_PANEL: usize = 15;

/// Hard cap on integrand evaluations used by routines that do not take one.
pub const DEFAULT_MAX_NODES: usize = 1 << 20;

// Kronrod abscissae on [0, 1] (descending), then the 15-point weights and
// the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub nodes: usize,
}

/// One G7/K15 panel on `[a, b]`: Kronrod value and `|K − G|`.
pub fn gauss_kronrod<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod = kronrod + sum * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + sum * WG[j / 2];
        }
    }
    let k = kronrod * half;
    let g = gauss * half;
    (k, (k - g).magnitude())
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_nodes: usize,
) -> Result<Estimate<V>> {
    integrate_panels(f, &[a, b], tol, max_nodes)
}

/// Integrate `f` over the partition `breaks[0] < breaks[1] < …` to absolute
/// tolerance `tol`, bisecting the worst panel until the summed error
/// estimate drops below `tol` or `max_nodes` evaluations are spent.
pub fn integrate_panels<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    breaks: &[f64],
    tol: f64,
    max_nodes: usize,
) -> Result<Estimate<V>> {
    if breaks.len() < 2 {
        return Err(invalid("breaks", "need at least two break points"));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("tolerance must be positive, got {tol}")));
    }
    let mut heap = BinaryHeap::with_capacity(2 * breaks.len());
    let mut nodes = 0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        let (value, error) = gauss_kronrod(&f, w[0], w[1]);
        nodes += NODES_PER_PANEL;
        total_err += error;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    while total_err > tol {
        if nodes + 2 * NODES_PER_PANEL > max_nodes {
            return Err(Error::QuadratureNotConverged {
                tol,
                estimate: total_err,
                max_nodes,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gauss_kronrod(&f, worst.a, mid);
        let (rv, re) = gauss_kronrod(&f, mid, worst.b);
        nodes += 2 * NODES_PER_PANEL;
        total_err += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        // Recompute occasionally to keep the running sum from drifting.
        if heap.len() % 4096 == 0 {
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    // Sum in partition order so the result does not depend on heap layout.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().fold(V::zero(), |acc, p| acc + p.value);
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Estimate { value, error, nodes })
}

/// `count + 1` uniformly spaced break points on `[a, b]`.
pub fn uniform_breaks(a: f64, b: f64, count: usize) -> Vec<f64> {
    let count = count.max(1);
    (0..=count)
        .map(|i| {
            if i == count {
                b
            } else {
                a + (b - a) * (i as f64) / (count as f64)
            }
        })
        .collect()
}

/// Nodes and weights of the composite 15-point Kronrod rule on `panels`
/// equal panels of `[a, b]`.
pub fn kronrod_rule(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let breaks = uniform_breaks(a, b, panels);
    let mut out = Vec::with_capacity(NODES_PER_PANEL * (breaks.len() - 1));
    for w in breaks.windows(2) {
        let center = 0.5 * (w[0] + w[1]);
        let half = 0.5 * (w[1] - w[0]);
        for j in 0..7 {
            out.push((center - half * XGK[j], half * WGK[j]));
            out.push((center + half * XGK[j], half * WGK[j]));
        }
        out.push((center, half * WGK[7]));
    }
    out
}
