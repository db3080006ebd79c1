//! Needlet layer: smooth spectral cut-offs, Littlewood-Paley multipliers,
//! disk cubature, localized atoms, and the tight-frame analysis/synthesis
//! transforms built on the SVD basis.

pub mod atoms;
pub mod cubature;
pub mod frame;

pub use atoms::{AtomKind, NeedletAtom, NeedletLevel};
pub use cubature::{cubature_disk, disk_moment, level_rule, moment_check, CubatureRule, RingInfo};
pub use frame::{frame_analyze, frame_synthesize, FrameCoefficients, NeedletFrame};

use crate::svd::{enumerate_indices, eval_f, CoefficientVector, DiskPoint};

/// Spectral cut-off family. `a` equals one on [0, 1/2], vanishes beyond 1,
/// and decreases in between; `b(t) = a(t/2) - a(t)` is the induced band
/// window supported in [1/2, 2].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffKind {
    /// C-infinity transition through the bump quotient
    /// h(u) = e(u)/(e(u)+e(1-u)), e(u) = exp(-1/u).
    SmoothExp,
    /// C^1 raised-cosine transition.
    CosineTaper,
    /// Indicator of [0, 1); kept for the non-smooth comparison runs.
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutoffFunction {
    kind: CutoffKind,
}

/// Builds the cut-off of the requested kind.
pub fn build_cutoff(kind: CutoffKind) -> CutoffFunction {
    CutoffFunction { kind }
}

impl CutoffFunction {
    pub fn kind(&self) -> CutoffKind {
        self.kind
    }

    /// Low-pass window a(t).
    pub fn a(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        if t <= 0.5 {
            return 1.0;
        }
        if t >= 1.0 {
            return match self.kind {
                // half-open support so that a(1) = 0 for every kind; this is
                // what makes the band windows telescope exactly
                _ => 0.0,
            };
        }
        match self.kind {
            CutoffKind::SmoothExp => {
                let u = 2.0 * (1.0 - t);
                let e = |v: f64| if v > 0.0 { (-1.0 / v).exp() } else { 0.0 };
                e(u) / (e(u) + e(1.0 - u))
            }
            CutoffKind::CosineTaper => {
                let c = (std::f64::consts::PI * (t - 0.5)).cos();
                c * c
            }
            CutoffKind::Hard => 1.0,
        }
    }

    /// Band window b(t) = a(t/2) - a(t), supported in [1/2, 2].
    pub fn b(&self, t: f64) -> f64 {
        self.a(t / 2.0) - self.a(t)
    }
}

/// Geodesic-type metric of the closed disk:
/// d(x, y) = arccos(<x, y> + sqrt(1-|x|^2) sqrt(1-|y|^2)).
pub fn metric_d(x: DiskPoint, y: DiskPoint) -> f64 {
    let inner = x.r * y.r * (x.theta - y.theta).cos();
    let lift = (1.0 - x.r * x.r).max(0.0).sqrt() * (1.0 - y.r * y.r).max(0.0).sqrt();
    (inner + lift).clamp(-1.0, 1.0).acos()
}

/// Boundary-adapted weight W_j(x) = 2^{-j} + sqrt(1 - |x|^2).
pub fn weight_w(j: u32, radius: f64) -> f64 {
    2f64.powi(-(j as i32)) + (1.0 - radius * radius).max(0.0).sqrt()
}

/// Reproducing kernel of the degree-k orthogonal component:
/// L_k(x, y) = sum over the k+1 basis pairs of f_{k,l,i}(x) f_{k,l,i}(y).
pub fn kernel_l(k: u32, x: DiskPoint, y: DiskPoint) -> f64 {
    let mut acc = 0.0;
    for idx in enumerate_indices(k) {
        if idx.k() == k {
            acc += eval_f(idx, x) * eval_f(idx, y);
        }
    }
    acc
}

/// Spectral window selector for `apply_multiplier`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    A,
    B,
    SqrtA,
    SqrtB,
}

/// Multiplies the degree-k block of `c` by window(k / 2^j). Realizes the
/// smoothing operators A_j, B_j and their square-root splittings C_j, D_j in
/// coefficient space.
pub fn apply_multiplier(
    c: &CoefficientVector,
    j: u32,
    window: Window,
    cutoff: CutoffFunction,
) -> CoefficientVector {
    let scale = 2f64.powi(j as i32);
    let mut out = c.clone();
    let mut offset = 0usize;
    for k in 0..=c.max_degree() {
        let t = k as f64 / scale;
        let w = match window {
            Window::A => cutoff.a(t),
            Window::B => cutoff.b(t),
            Window::SqrtA => cutoff.a(t).sqrt(),
            Window::SqrtB => cutoff.b(t).sqrt(),
        };
        let len = k as usize + 1;
        for v in &mut out.values_mut()[offset..offset + len] {
            *v *= w;
        }
        offset += len;
    }
    out
}
