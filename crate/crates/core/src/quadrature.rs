//! Deterministic one- and two-dimensional quadrature rules.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::math::{cos, exp};

/// A node of a rule on `(0, 1)`: position, distance to the right endpoint
/// (kept separately to avoid cancellation), and weight.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    /// Abscissa in `(0, 1)`.
    pub x: f64,
    /// `1 − x`, computed directly.
    pub one_minus_x: f64,
    /// Weight.
    pub w: f64,
}

/// Tanh-sinh (double exponential) rule on `(0, 1)` with step `1/level`
/// over `t ∈ [−4, 4]`. Endpoint singularities of integrable power type are
/// handled without special treatment.
pub fn tanh_sinh(level: usize) -> Vec<Node> {
    let h = 1.0 / level as f64;
    let kmax = (4.0 * level as f64) as i64;
    let mut nodes = Vec::with_capacity(2 * kmax as usize + 1);
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let s = FRAC_PI_2 * libm::sinh(t);
        let e = exp(2.0 * s);
        // x = 1/(1+e^{-2s}), 1−x = 1/(1+e^{2s})
        let x = e / (1.0 + e);
        let omx = 1.0 / (1.0 + e);
        let ch = libm::cosh(s);
        let w = h * 0.5 * FRAC_PI_2 * libm::cosh(t) / (ch * ch);
        if x > 0.0 && omx > 0.0 && w > 0.0 && w.is_finite() {
            nodes.push(Node { x, one_minus_x: omx, w });
        }
    }
    nodes
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = x;
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Simpson rule for `f` on `[a, b]` with `2·half_panels` intervals.
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, half_panels: usize) -> f64 {
    let n = 2 * half_panels.max(1);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let c = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += c * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `∫_a^b f` with the tanh-sinh rule mapped onto `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, level: usize) -> f64 {
    let span = b - a;
    tanh_sinh(level).iter().map(|n| n.w * span * f(a + span * n.x)).sum()
}
