//! The Radon SVD pair on the unit disk.
//!
//! `eval_f` evaluates the orthonormal polynomial basis of L2(B^2), `eval_g`
//! the matching orthonormal basis of the sinogram space L2(S^1 x [-1,1], dmu)
//! with dmu = dtheta ds / sqrt(1-s^2). The Radon transform acts diagonally
//! between the two: R f_{k,l,i} = lambda_k g_{k,l,i} with
//! lambda_k = 2 sqrt(pi) / sqrt(k+1) in two dimensions.
//!
//! `radon_line_integral` is an independent brute-force chord integrator used
//! to validate the diagonal identity numerically.

use crate::error::{Error, Result};
use crate::orthopoly::{self, GegenbauerParam, JacobiParams};
use std::f64::consts::PI;

/// Which circular harmonic a basis element carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Harmonic {
    /// cos(l theta); the only harmonic at l = 0.
    Cos,
    /// sin(l theta); only valid for l >= 1.
    Sin,
}

impl Harmonic {
    /// 1-based selector as in the index triple (k, l, i).
    pub fn selector(self) -> u32 {
        match self {
            Harmonic::Cos => 1,
            Harmonic::Sin => 2,
        }
    }

    pub fn from_selector(i: u32) -> Result<Self> {
        match i {
            1 => Ok(Harmonic::Cos),
            2 => Ok(Harmonic::Sin),
            _ => Err(Error::InvalidIndex(format!("harmonic selector must be 1 or 2, got {i}"))),
        }
    }
}

/// Index triple (k, l, i) of an SVD basis element.
///
/// Invariants: l <= k, l == k (mod 2), and the sine harmonic is excluded at
/// l = 0 (it vanishes identically, and keeping it would make the degree-k
/// block rank deficient).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SvdIndex {
    k: u32,
    l: u32,
    harmonic: Harmonic,
}

impl SvdIndex {
    pub fn new(k: u32, l: u32, harmonic: Harmonic) -> Result<Self> {
        if l > k {
            return Err(Error::InvalidIndex(format!("l = {l} exceeds degree k = {k}")));
        }
        if (k - l) % 2 != 0 {
            return Err(Error::InvalidIndex(format!(
                "l = {l} must have the same parity as k = {k}"
            )));
        }
        if l == 0 && harmonic == Harmonic::Sin {
            return Err(Error::InvalidIndex(
                "sine harmonic is excluded at l = 0".to_string(),
            ));
        }
        Ok(Self { k, l, harmonic })
    }

    pub fn from_triple(k: u32, l: u32, i: u32) -> Result<Self> {
        Self::new(k, l, Harmonic::from_selector(i)?)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn harmonic(&self) -> Harmonic {
        self.harmonic
    }

    /// j = (k - l) / 2, the radial Jacobi degree.
    pub fn radial_degree(&self) -> u32 {
        (self.k - self.l) / 2
    }

    /// Position of this index in the canonical (k, l, i)-lexicographic order.
    pub fn rank(&self) -> usize {
        let block = self.k as usize * (self.k as usize + 1) / 2;
        let pos = if self.l == 0 {
            0
        } else {
            self.l as usize - 1 + (self.harmonic == Harmonic::Sin) as usize
        };
        block + pos
    }
}

/// Number of coefficients for degrees 0..=max_degree: (K+1)(K+2)/2.
pub fn coefficient_count(max_degree: u32) -> usize {
    let k = max_degree as usize;
    (k + 1) * (k + 2) / 2
}

/// All valid indices with k <= max_degree, in (k, l, i)-lexicographic order.
pub fn enumerate_indices(max_degree: u32) -> Vec<SvdIndex> {
    let mut out = Vec::with_capacity(coefficient_count(max_degree));
    for k in 0..=max_degree {
        let mut l = k % 2;
        loop {
            if l == 0 {
                out.push(SvdIndex { k, l, harmonic: Harmonic::Cos });
            } else {
                out.push(SvdIndex { k, l, harmonic: Harmonic::Cos });
                out.push(SvdIndex { k, l, harmonic: Harmonic::Sin });
            }
            l += 2;
            if l > k {
                break;
            }
        }
    }
    out
}

/// Dense coefficient storage addressed by `SvdIndex::rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    max_degree: u32,
    values: Vec<f64>,
}

impl CoefficientVector {
    pub fn zeros(max_degree: u32) -> Self {
        Self { max_degree, values: vec![0.0; coefficient_count(max_degree)] }
    }

    pub fn from_values(max_degree: u32, values: Vec<f64>) -> Result<Self> {
        if values.len() != coefficient_count(max_degree) {
            return Err(Error::InvalidParam(format!(
                "coefficient vector for degree {max_degree} needs {} values, got {}",
                coefficient_count(max_degree),
                values.len()
            )));
        }
        Ok(Self { max_degree, values })
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, idx: SvdIndex) -> f64 {
        self.values[idx.rank()]
    }

    pub fn set(&mut self, idx: SvdIndex, value: f64) {
        self.values[idx.rank()] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Slice of the degree-k block (k+1 entries).
    pub fn block(&self, k: u32) -> &[f64] {
        let start = k as usize * (k as usize + 1) / 2;
        &self.values[start..start + k as usize + 1]
    }

    /// Truncate to a lower maximum degree, copying the retained blocks.
    pub fn truncated(&self, max_degree: u32) -> CoefficientVector {
        let k = max_degree.min(self.max_degree);
        let n = coefficient_count(k);
        CoefficientVector { max_degree: k, values: self.values[..n].to_vec() }
    }

    /// Sum of squared coefficients (the squared L2 norm of the synthesis).
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Point of the closed unit disk in polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    pub r: f64,
    pub theta: f64,
}

impl DiskPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0 + 1e-12).contains(&r) {
            return Err(Error::InvalidParam(format!("radius {r} outside [0, 1]")));
        }
        Ok(Self { r: r.min(1.0), theta })
    }

    pub fn from_cartesian(x: f64, y: f64) -> Result<Self> {
        Self::new(x.hypot(y), y.atan2(x))
    }

    pub fn x(&self) -> f64 {
        self.r * self.theta.cos()
    }

    pub fn y(&self) -> f64 {
        self.r * self.theta.sin()
    }
}

/// Singular value lambda_k of the Radon transform on B^d:
/// lambda_k^2 = 2^d pi^{d-1} / ((k+1)(k+2)...(k+d-1)).
pub fn singular_value(k: u32, d: u32) -> f64 {
    assert!(d >= 2, "dimension must be at least 2");
    if d == 2 {
        return 2.0 * PI.sqrt() / ((k as f64 + 1.0)).sqrt();
    }
    let mut pochhammer = 1.0;
    for m in 1..d {
        pochhammer *= (k + m) as f64;
    }
    (2f64.powi(d as i32) * PI.powi(d as i32 - 1) / pochhammer).sqrt()
}

/// lambda_k for the disk (d = 2).
pub fn singular_value_disk(k: u32) -> f64 {
    singular_value(k, 2)
}

/// Angular factor Y_{l,i}(theta): c_l cos(l theta) or c_l sin(l theta), with
/// c_0 = 1/sqrt(2 pi) and c_l = 1/sqrt(pi) for l >= 1.
pub fn angular_factor(l: u32, harmonic: Harmonic, theta: f64) -> f64 {
    let c = if l == 0 { 1.0 / (2.0 * PI).sqrt() } else { 1.0 / PI.sqrt() };
    match harmonic {
        Harmonic::Cos => c * ((l as f64) * theta).cos(),
        Harmonic::Sin => c * ((l as f64) * theta).sin(),
    }
}

/// Radial factor sqrt(2k+2) P_j^{(0,l)}(2r^2-1) r^l of the disk basis.
pub fn radial_factor(k: u32, l: u32, r: f64) -> f64 {
    let j = (k - l) / 2;
    let params = JacobiParams { alpha: 0.0, beta: l as f64 };
    let p = orthopoly::jacobi_eval(j, params, 2.0 * r * r - 1.0);
    (2.0 * k as f64 + 2.0).sqrt() * p * r.powi(l as i32)
}

/// Evaluates the disk basis element f_{k,l,i} at a point.
pub fn eval_f(idx: SvdIndex, p: DiskPoint) -> f64 {
    radial_factor(idx.k, idx.l, p.r) * angular_factor(idx.l, idx.harmonic, p.theta)
}

/// Evaluates the sinogram basis element g_{k,l,i}(theta, s):
/// sqrt(2/pi) (1-s^2)^{1/2} C_k^1(s) Y_{l,i}(theta).
///
/// |s| >= 1 is rejected: the measure dmu is singular at the endpoints.
pub fn eval_g(idx: SvdIndex, theta: f64, s: f64) -> Result<f64> {
    if s.abs() >= 1.0 {
        return Err(Error::InvalidParam(format!("|s| must be < 1, got {s}")));
    }
    Ok(eval_g_unchecked(idx, theta, s))
}

pub(crate) fn eval_g_unchecked(idx: SvdIndex, theta: f64, s: f64) -> f64 {
    // h_k^{(1)} = pi/2 for every degree, so the normalizer is sqrt(2/pi).
    let norm = (2.0 / PI).sqrt();
    let cheb = orthopoly::gegenbauer_eval(idx.k, GegenbauerParam { lambda: 1.0 }, s);
    norm * (1.0 - s * s).sqrt() * cheb * angular_factor(idx.l, idx.harmonic, theta)
}

/// Apply the Radon transform in coefficient space: multiply block k by lambda_k.
pub fn radon_forward_svd(c: &CoefficientVector) -> CoefficientVector {
    scale_blocks(c, |k| singular_value_disk(k))
}

/// Invert the Radon transform in coefficient space: divide block k by lambda_k.
pub fn radon_inverse_svd(y: &CoefficientVector) -> CoefficientVector {
    scale_blocks(y, |k| 1.0 / singular_value_disk(k))
}

fn scale_blocks(c: &CoefficientVector, factor: impl Fn(u32) -> f64) -> CoefficientVector {
    let mut out = c.clone();
    let mut offset = 0usize;
    for k in 0..=c.max_degree {
        let f = factor(k);
        let len = k as usize + 1;
        for v in &mut out.values[offset..offset + len] {
            *v *= f;
        }
        offset += len;
    }
    out
}

/// Brute-force Radon transform: composite Gauss-Legendre integration of f
/// along the chord <y, e_theta> = s of the unit disk, with roughly n_quad
/// total points split into 32-point panels.
///
/// This is the independent oracle for the SVD identity; it never touches the
/// coefficient-space implementation. Composite panels keep discontinuous
/// integrands (piecewise-constant phantoms) converging at O(1/n_quad).
pub fn radon_line_integral<F>(f: F, theta: f64, s: f64, n_quad: usize) -> f64
where
    F: Fn(DiskPoint) -> f64,
{
    use std::sync::OnceLock;
    static PANEL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();

    assert!(s.abs() <= 1.0, "|s| must be <= 1");
    assert!(n_quad >= 2, "need at least two quadrature points");
    let half_chord = (1.0 - s * s).max(0.0).sqrt();
    if half_chord == 0.0 {
        return 0.0;
    }
    let (nodes, weights) = PANEL.get_or_init(|| orthopoly::gauss_legendre(32));
    let panels = (n_quad / 32).max(1);
    let (dir_x, dir_y) = (-theta.sin(), theta.cos());
    let (base_x, base_y) = (s * theta.cos(), s * theta.sin());
    let width = 2.0 * half_chord / panels as f64;
    let mut acc = 0.0;
    for panel in 0..panels {
        let mid = -half_chord + (panel as f64 + 0.5) * width;
        let mut panel_acc = 0.0;
        for (&t, &w) in nodes.iter().zip(weights) {
            let tt = mid + t * width / 2.0;
            let x = base_x + tt * dir_x;
            let y = base_y + tt * dir_y;
            let r = x.hypot(y).min(1.0);
            let p = DiskPoint { r, theta: y.atan2(x) };
            panel_acc += w * f(p);
        }
        acc += panel_acc * width / 2.0;
    }
    acc
}

/// Fan-beam (theta1, theta2) to parallel-beam (theta, s) conversion:
/// theta = theta1 - theta2 (mod 2 pi), s = sin(theta2).
pub fn fanbeam_to_parallel(theta1: f64, theta2: f64) -> (f64, f64) {
    ((theta1 - theta2).rem_euclid(2.0 * PI), theta2.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::gauss_legendre;

    const SQRT_PI: f64 = 1.7724538509055159;

    #[test]
    fn index_validation() {
        assert!(SvdIndex::from_triple(1, 0, 1).is_err()); // parity violation
        assert!(SvdIndex::from_triple(2, 0, 2).is_err()); // sine at l = 0
        assert!(SvdIndex::from_triple(2, 4, 1).is_err()); // l > k
        assert!(SvdIndex::from_triple(2, 0, 3).is_err()); // bad selector
        assert!(SvdIndex::from_triple(4, 2, 2).is_ok());
    }

    #[test]
    fn enumeration_counts_and_order() {
        let idx0 = enumerate_indices(0);
        assert_eq!(idx0.len(), 1);
        assert_eq!((idx0[0].k(), idx0[0].l(), idx0[0].harmonic().selector()), (0, 0, 1));

        // block k = 4 has l in {0, 2, 4} with 1 + 2 + 2 = 5 entries
        let idx4: Vec<_> = enumerate_indices(4).into_iter().filter(|i| i.k() == 4).collect();
        assert_eq!(idx4.len(), 5);
        let ls: Vec<u32> = idx4.iter().map(|i| i.l()).collect();
        assert_eq!(ls, vec![0, 2, 2, 4, 4]);

        assert_eq!(enumerate_indices(8).len(), 45);
        assert_eq!(coefficient_count(8), 45);

        // ranks agree with enumeration order
        for (pos, idx) in enumerate_indices(9).iter().enumerate() {
            assert_eq!(idx.rank(), pos);
        }
    }

    #[test]
    fn singular_values() {
        assert!((singular_value(0, 2) - 2.0 * SQRT_PI).abs() < 1e-12);
        assert!((singular_value(0, 2) - 3.5449077018110318).abs() < 1e-12);
        assert!((singular_value(3, 2) - SQRT_PI).abs() < 1e-12);
        // d = 3: lambda_0^2 = 8 pi^2 / 2 -> lambda_0 = 2 pi
        assert!((singular_value(0, 3) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn singular_values_strictly_decreasing() {
        for k in 0..512u32 {
            assert!(singular_value_disk(k + 1) < singular_value_disk(k));
        }
    }

    #[test]
    fn eval_f_examples() {
        // constant element: sqrt(2) / sqrt(2 pi) = 1/sqrt(pi)
        let idx = SvdIndex::from_triple(0, 0, 1).unwrap();
        let p = DiskPoint::new(0.37, 1.1).unwrap();
        assert!((eval_f(idx, p) - 0.5641895835477563).abs() < 1e-12);

        // f_{1,1,1}(r=1, theta=0) = 2 / sqrt(pi)
        let idx = SvdIndex::from_triple(1, 1, 1).unwrap();
        let p = DiskPoint::new(1.0, 0.0).unwrap();
        assert!((eval_f(idx, p) - 2.0 / SQRT_PI).abs() < 1e-12);

        // sine harmonics vanish on the positive x-axis
        for (k, l) in [(2u32, 2u32), (5, 3), (7, 7)] {
            let idx = SvdIndex::from_triple(k, l, 2).unwrap();
            let p = DiskPoint::new(0.8, 0.0).unwrap();
            assert_eq!(eval_f(idx, p), 0.0);
        }
    }

    #[test]
    fn eval_g_examples() {
        let idx = SvdIndex::from_triple(0, 0, 1).unwrap();
        // sqrt(2/pi) * C_0^1(0) * 1/sqrt(2 pi) = 1/pi at s = 0
        let got = eval_g(idx, 0.33, 0.0).unwrap();
        assert!((got - 1.0 / PI).abs() < 1e-14);
        assert!(eval_g(idx, 0.0, 1.0).is_err());
        assert!(eval_g(idx, 0.0, -1.2).is_err());
    }

    /// Tensor-product quadrature of int g^2 dmu: trapezoid in theta (exact for
    /// trig polynomials) times Gauss-Chebyshev in s (weight 1/sqrt(1-s^2)).
    fn g_norm_sq(idx: SvdIndex) -> f64 {
        let n_theta = 128;
        let n_s = 128;
        let mut total = 0.0;
        for q in 0..n_theta {
            let theta = 2.0 * PI * q as f64 / n_theta as f64;
            let mut inner = 0.0;
            for m in 0..n_s {
                let s = (PI * (2.0 * m as f64 + 1.0) / (2.0 * n_s as f64)).cos();
                inner += eval_g(idx, theta, s).unwrap().powi(2);
            }
            total += inner * PI / n_s as f64;
        }
        total * 2.0 * PI / n_theta as f64
    }

    #[test]
    fn g_basis_orthonormal_under_mu() {
        for idx in enumerate_indices(6) {
            let n = g_norm_sq(idx);
            assert!((n - 1.0).abs() < 1e-10, "{idx:?}: {n}");
        }
    }

    #[test]
    fn f_basis_orthonormal_under_disk_measure() {
        // Gram matrix up to K = 8 with a polar product quadrature of high degree.
        let indices = enumerate_indices(8);
        let (u_nodes, u_weights) = gauss_legendre(24);
        let n_theta = 48;
        let mut gram = vec![vec![0.0; indices.len()]; indices.len()];
        for (ui, &u) in u_nodes.iter().enumerate() {
            let r = ((1.0 + u) / 2.0).sqrt();
            for q in 0..n_theta {
                let theta = 2.0 * PI * q as f64 / n_theta as f64;
                let w = u_weights[ui] / 4.0 * 2.0 * PI / n_theta as f64;
                let p = DiskPoint { r, theta };
                let vals: Vec<f64> = indices.iter().map(|&i| eval_f(i, p)).collect();
                for a in 0..indices.len() {
                    for b in a..indices.len() {
                        gram[a][b] += w * vals[a] * vals[b];
                    }
                }
            }
        }
        for a in 0..indices.len() {
            for b in a..indices.len() {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!(
                    (gram[a][b] - expect).abs() < 1e-9,
                    "({:?}, {:?}): {}",
                    indices[a],
                    indices[b],
                    gram[a][b]
                );
            }
        }
    }

    #[test]
    fn forward_inverse_round_trip() {
        let mut c = CoefficientVector::zeros(64);
        // deterministic pseudo-random fill
        let mut state = 0x9e3779b97f4a7c15u64;
        for v in c.values_mut() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *v = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        }
        let round = radon_inverse_svd(&radon_forward_svd(&c));
        for (a, b) in c.values().iter().zip(round.values()) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        // unit vector at (0,0,1) maps to lambda_0 at (0,0,1)
        let mut e = CoefficientVector::zeros(2);
        let idx = SvdIndex::from_triple(0, 0, 1).unwrap();
        e.set(idx, 1.0);
        let y = radon_forward_svd(&e);
        assert!((y.get(idx) - singular_value_disk(0)).abs() < 1e-15);
        assert_eq!(y.values().iter().filter(|v| **v != 0.0).count(), 1);

        // zero maps to zero
        let z = CoefficientVector::zeros(3);
        assert!(radon_forward_svd(&z).values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn line_integral_of_constant() {
        let one = |_: DiskPoint| 1.0;
        assert!((radon_line_integral(one, 0.7, 0.0, 64) - 2.0).abs() < 1e-12);
        assert!((radon_line_integral(one, 0.0, 0.6, 64) - 1.6).abs() < 1e-12);
        assert!((radon_line_integral(one, 1.2, 1.0, 64) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn radon_of_basis_elements_is_diagonal() {
        // R f_{k,l,i}(theta, s) = lambda_k g_{k,l,i}(theta, s), checked on a
        // small grid for k <= 6 (the full k <= 8 version runs in acceptance).
        for idx in enumerate_indices(6) {
            let lam = singular_value_disk(idx.k());
            let mut max_diff: f64 = 0.0;
            let mut max_ref: f64 = 0.0;
            for q in 0..8 {
                // offset grid so no harmonic of order <= 6 aliases to zero
                let theta = 2.0 * PI * (q as f64 + 0.3) / 8.0;
                for m in 0..8 {
                    let s = -1.0 + 2.0 * (m as f64 + 0.5) / 8.0;
                    let numeric = radon_line_integral(|p| eval_f(idx, p), theta, s, 128);
                    let reference = lam * eval_g(idx, theta, s).unwrap();
                    max_diff = max_diff.max((numeric - reference).abs());
                    max_ref = max_ref.max(reference.abs());
                }
            }
            assert!(max_diff <= 1e-6 * max_ref.max(1e-30), "{idx:?}: {max_diff} vs {max_ref}");
        }
    }

    #[test]
    fn fanbeam_conversion() {
        let (theta, s) = fanbeam_to_parallel(PI / 2.0, 0.0);
        assert!((theta - PI / 2.0).abs() < 1e-15);
        assert_eq!(s, 0.0);

        let (theta, s) = fanbeam_to_parallel(0.0, PI / 6.0);
        assert!((theta - (2.0 * PI - PI / 6.0)).abs() < 1e-12);
        assert!((s - 0.5).abs() < 1e-15);

        let (theta, s) = fanbeam_to_parallel(1.234, 1.234);
        assert_eq!(theta, 0.0);
        assert!((s - 1.234f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn coefficient_vector_accessors() {
        let mut c = CoefficientVector::zeros(5);
        assert_eq!(c.len(), 21);
        let idx = SvdIndex::from_triple(4, 2, 2).unwrap();
        c.set(idx, 3.25);
        assert_eq!(c.get(idx), 3.25);
        assert_eq!(c.block(4).len(), 5);
        assert_eq!(c.block(4)[2], 3.25);
        let t = c.truncated(3);
        assert_eq!(t.len(), 10);
        assert_eq!(t.max_degree(), 3);
        assert!(CoefficientVector::from_values(2, vec![0.0; 5]).is_err());
    }
}
