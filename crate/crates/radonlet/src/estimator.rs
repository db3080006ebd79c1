//! Observation models and the linear estimators built on the SVD pair.
//!
//! White-noise observations perturb every sinogram coefficient lambda_k c
//! by epsilon times an independent standard normal. Regression observations
//! sample the sinogram itself on the uniform fan-beam grid and recover
//! sinogram coefficients by Riemann sums. All estimators act componentwise:
//! needlet smoothing multiplies by a(k/2^J)/lambda_k, truncated SVD by
//! 1{k <= kS}/lambda_k, and naive inversion is the SVD estimator at the full
//! observed degree.

use crate::error::{Error, Result};
use crate::needlet::{build_cutoff, CutoffKind, NeedletLevel};
use crate::orthopoly::{gegenbauer_eval, GegenbauerParam};
use crate::svd::{
    coefficient_count, singular_value_disk, CoefficientVector, Harmonic, SvdIndex,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Riemann sums over the uniform (theta1, theta2) grid average against the
/// design measure, which carries total mass 2 pi^2 under d mu; this constant
/// rescales them to target <Rf, g>_mu itself. Validated by the sigma = 0
/// convergence oracle below.
pub const RIEMANN_CALIBRATION: f64 = 2.0 * PI * PI;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Standard normal draw keyed by (seed, realization, rank). Counter-based so
/// parallel simulation is reproducible independent of scheduling.
pub fn normal_sample(seed: u64, realization: u64, rank: u64) -> f64 {
    let key = splitmix(splitmix(seed ^ splitmix(realization)) ^ rank);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    StandardNormal.sample(&mut rng)
}

/// Noisy sinogram-side coefficients under the white-noise model.
#[derive(Debug, Clone)]
pub struct WhiteNoiseObservation {
    pub y: CoefficientVector,
    pub epsilon: f64,
    pub k0: u32,
    pub seed: u64,
}

/// y_{k,l,i} = lambda_k c_{k,l,i} + epsilon W_{k,l,i} for k <= k0, with W
/// i.i.d. standard normal keyed by (seed, realization, coefficient rank).
pub fn simulate_white_noise(
    c_true: &CoefficientVector,
    epsilon: f64,
    k0: u32,
    seed: u64,
    realization: u64,
) -> Result<WhiteNoiseObservation> {
    if c_true.max_degree() < k0 {
        return Err(Error::InvalidParam(format!(
            "true coefficients reach degree {} < k0 = {k0}",
            c_true.max_degree()
        )));
    }
    let mut y = c_true.truncated(k0);
    let mut offset = 0usize;
    for k in 0..=k0 {
        let lam = singular_value_disk(k);
        let len = k as usize + 1;
        for (pos, v) in y.values_mut()[offset..offset + len].iter_mut().enumerate() {
            let rank = (offset + pos) as u64;
            *v = lam * *v
                + if epsilon == 0.0 { 0.0 } else { epsilon * normal_sample(seed, realization, rank) };
        }
        offset += len;
    }
    Ok(WhiteNoiseObservation { y, epsilon, k0, seed })
}

/// Noisy point samples of the sinogram on the uniform fan-beam grid.
#[derive(Debug, Clone)]
pub struct RegressionObservation {
    /// grid[i1 * n2 + i2] = Rf(2 pi (i1/n1 - i2/n2), sin(2 pi i2/n2)) + noise
    pub grid: Vec<f64>,
    pub n1: usize,
    pub n2: usize,
    pub sigma: f64,
    pub seed: u64,
}

/// Samples the sinogram on the n1 x n2 fan-beam grid and adds N(0, sigma^2)
/// noise keyed by (seed, realization, grid rank).
pub fn simulate_regression(
    radon_sampler: impl Fn(f64, f64) -> f64 + Sync,
    n1: usize,
    n2: usize,
    sigma: f64,
    seed: u64,
    realization: u64,
) -> RegressionObservation {
    assert!(n1 >= 1 && n2 >= 1);
    let mut grid = vec![0.0; n1 * n2];
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            let theta = 2.0 * PI * (i1 as f64 / n1 as f64 - i2 as f64 / n2 as f64);
            let s = (2.0 * PI * i2 as f64 / n2 as f64).sin();
            let rank = (i1 * n2 + i2) as u64;
            let noise =
                if sigma == 0.0 { 0.0 } else { sigma * normal_sample(seed, realization, rank) };
            grid[i1 * n2 + i2] = radon_sampler(theta, s) + noise;
        }
    }
    RegressionObservation { grid, n1, n2, sigma, seed }
}

/// Sinogram synthesized from disk coefficients:
/// Rf(theta, s) = sum lambda_k c_{k,l,i} g_{k,l,i}(theta, s).
pub fn radon_sampler_from_coefficients(c: &CoefficientVector) -> impl Fn(f64, f64) -> f64 + '_ {
    move |theta: f64, s: f64| {
        let max_degree = c.max_degree();
        let norm = (2.0 / PI).sqrt() * (1.0 - s * s).max(0.0).sqrt();
        // angular sums per degree block, then the Gegenbauer recurrence in k
        let mut acc = 0.0;
        let lam1 = GegenbauerParam { lambda: 1.0 };
        for k in 0..=max_degree {
            let cheb = gegenbauer_eval(k, lam1, s);
            let lam = singular_value_disk(k);
            let mut angular = 0.0;
            let mut l = k % 2;
            loop {
                let cl = if l == 0 { 1.0 / (2.0 * PI).sqrt() } else { 1.0 / PI.sqrt() };
                let idx_cos = SvdIndex::new(k, l, Harmonic::Cos).unwrap();
                angular += cl * (l as f64 * theta).cos() * c.values()[idx_cos.rank()];
                if l > 0 {
                    let idx_sin = SvdIndex::new(k, l, Harmonic::Sin).unwrap();
                    angular += cl * (l as f64 * theta).sin() * c.values()[idx_sin.rank()];
                }
                l += 2;
                if l > k {
                    break;
                }
            }
            acc += lam * cheb * angular;
        }
        norm * acc
    }
}

/// Estimated sinogram coefficients from regression samples, via the
/// calibrated Riemann sum over the fan-beam grid.
pub fn riemann_svd_coeffs(obs: &RegressionObservation, max_degree: u32) -> CoefficientVector {
    let (n1, n2) = (obs.n1, obs.n2);
    // trig transforms of the data over i1 at the n1 fundamental frequencies
    let mut cos_i1 = vec![0.0; n1 * n2];
    let mut sin_i1 = vec![0.0; n1 * n2];
    for f in 0..n1 {
        for i2 in 0..n2 {
            let mut cacc = 0.0;
            let mut sacc = 0.0;
            for i1 in 0..n1 {
                let phase = 2.0 * PI * (f * i1) as f64 / n1 as f64;
                let v = obs.grid[i1 * n2 + i2];
                cacc += v * phase.cos();
                sacc += v * phase.sin();
            }
            cos_i1[f * n2 + i2] = cacc;
            sin_i1[f * n2 + i2] = sacc;
        }
    }
    // radial profile table: radial[i2][k] = sqrt(2/pi) sqrt(1-s^2) C_k(s),
    // one recurrence per grid column (C^1_k is Chebyshev of the second kind:
    // C_k = 2 s C_{k-1} - C_{k-2})
    let kk = max_degree as usize;
    let mut radial_tab = vec![0.0; n2 * (kk + 1)];
    for i2 in 0..n2 {
        let s = (2.0 * PI * i2 as f64 / n2 as f64).sin();
        let weight = (2.0 / PI).sqrt() * (1.0 - s * s).max(0.0).sqrt();
        let (mut c_prev, mut c_cur) = (1.0f64, 2.0 * s);
        for k in 0..=kk {
            let cheb = match k {
                0 => 1.0,
                1 => c_cur,
                _ => {
                    let next = 2.0 * s * c_cur - c_prev;
                    c_prev = c_cur;
                    c_cur = next;
                    next
                }
            };
            radial_tab[i2 * (kk + 1) + k] = weight * cheb;
        }
        debug_assert!(
            (radial_tab[i2 * (kk + 1) + kk]
                - weight * gegenbauer_eval(kk as u32, GegenbauerParam { lambda: 1.0 }, s))
            .abs()
                < 1e-9 * weight.max(1e-12)
        );
    }

    let mut out = CoefficientVector::zeros(max_degree);
    let scale = RIEMANN_CALIBRATION / (n1 * n2) as f64;
    for k in 0..=max_degree {
        let mut l = k % 2;
        loop {
            let cl = if l == 0 { 1.0 / (2.0 * PI).sqrt() } else { 1.0 / PI.sqrt() };
            let f1 = (l as usize) % n1;
            let mut acc_cos = 0.0;
            let mut acc_sin = 0.0;
            for i2 in 0..n2 {
                let radial = radial_tab[i2 * (kk + 1) + k as usize];
                // theta = A - B with A = 2 pi l i1/n1, B = 2 pi l i2/n2
                let b = 2.0 * PI * (l as f64) * i2 as f64 / n2 as f64;
                let (cb, sb) = (b.cos(), b.sin());
                let ca = cos_i1[f1 * n2 + i2];
                let sa = sin_i1[f1 * n2 + i2];
                // cos(A - B) = cosA cosB + sinA sinB; sin(A - B) = sinA cosB - cosA sinB
                acc_cos += radial * (cb * ca + sb * sa);
                acc_sin += radial * (cb * sa - sb * ca);
            }
            let idx_cos = SvdIndex::new(k, l, Harmonic::Cos).unwrap();
            out.values_mut()[idx_cos.rank()] = scale * cl * acc_cos;
            if l > 0 {
                let idx_sin = SvdIndex::new(k, l, Harmonic::Sin).unwrap();
                out.values_mut()[idx_sin.rank()] = scale * cl * acc_sin;
            }
            l += 2;
            if l > k {
                break;
            }
        }
    }
    out
}

/// The three componentwise estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorSpec {
    /// Needlet smoothing at level J: multiplier a(k/2^J)/lambda_k.
    Needlet { level: u32, cutoff: CutoffKind },
    /// Truncated SVD: multiplier 1{k <= max_degree}/lambda_k.
    Svd { max_degree: u32 },
    /// Naive inversion: SVD at the full observed degree.
    Naive,
}

impl std::fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EstimatorSpec::Needlet { level, .. } => write!(f, "needlet(J={level})"),
            EstimatorSpec::Svd { max_degree } => write!(f, "svd(k={max_degree})"),
            EstimatorSpec::Naive => write!(f, "naive"),
        }
    }
}

/// Applies an estimator to sinogram-side coefficients y (degree = observed
/// k0), returning disk-side coefficients of the same degree.
pub fn estimate(y: &CoefficientVector, spec: &EstimatorSpec) -> CoefficientVector {
    let k0 = y.max_degree();
    let mut out = y.clone();
    let mut offset = 0usize;
    for k in 0..=k0 {
        let multiplier = match spec {
            EstimatorSpec::Needlet { level, cutoff } => {
                build_cutoff(*cutoff).a(k as f64 / 2f64.powi(*level as i32))
            }
            EstimatorSpec::Svd { max_degree } => {
                if k <= *max_degree {
                    1.0
                } else {
                    0.0
                }
            }
            EstimatorSpec::Naive => 1.0,
        };
        let f = multiplier / singular_value_disk(k);
        let len = k as usize + 1;
        for v in &mut out.values_mut()[offset..offset + len] {
            *v *= f;
        }
        offset += len;
    }
    out
}

/// Monte-Carlo check of the needlet-coefficient noise variance bound:
/// Var(Z_{j,xi}) <= 1.5 (1/pi) 2^j eps^2 for every node.
#[derive(Debug, Clone)]
pub struct SigmaBoundReport {
    pub level: u32,
    pub epsilon: f64,
    pub bound: f64,
    /// (ring radius, Monte-Carlo variance, analytic variance) per ring.
    pub rings: Vec<(f64, f64, f64)>,
}

impl SigmaBoundReport {
    pub fn max_mc_variance(&self) -> f64 {
        self.rings.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn max_analytic_variance(&self) -> f64 {
        self.rings.iter().map(|r| r.2).fold(0.0, f64::max)
    }

    pub fn holds(&self) -> bool {
        self.max_mc_variance() <= self.bound && self.max_analytic_variance() <= self.bound
    }
}

/// Simulates Z_{j,xi} = sum gamma^{j,xi} (eps/lambda_k) W over `trials`
/// noise draws; variances are reported per ring (they are rotation
/// invariant) together with the exact coefficient-space value.
pub fn empirical_sigma_bound(
    j: u32,
    epsilon: f64,
    trials: usize,
    cutoff: CutoffKind,
    seed: u64,
) -> SigmaBoundReport {
    let level = NeedletLevel::new(j, cutoff);
    let kind = crate::needlet::AtomKind::Father;
    let max_deg = level.max_active_degree(kind);
    let n_coef = coefficient_count(max_deg);

    // gamma / lambda_k per coefficient, one row per ring representative
    let ring_weights: Vec<Vec<f64>> = level
        .rule()
        .rings()
        .iter()
        .map(|ring| {
            let atom = level.atom(ring.start, kind);
            let mut weights = vec![0.0; n_coef];
            for idx in crate::svd::enumerate_indices(max_deg) {
                weights[idx.rank()] = level.gamma(&atom, idx) / singular_value_disk(idx.k());
            }
            weights
        })
        .collect();

    // one noise vector per trial, shared by every ring (all the Z_{j,xi} of
    // a level live on the same realization of the observation noise)
    let n_rings = ring_weights.len();
    let mut mean = vec![0.0; n_rings];
    let mut m2 = vec![0.0; n_rings];
    let mut noise = vec![0.0; n_coef];
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(t as u64)));
        for slot in noise.iter_mut() {
            *slot = StandardNormal.sample(&mut rng);
        }
        for (ri, weights) in ring_weights.iter().enumerate() {
            let z: f64 =
                epsilon * weights.iter().zip(&noise).map(|(g, w)| g * w).sum::<f64>();
            let delta = z - mean[ri];
            mean[ri] += delta / (t as f64 + 1.0);
            m2[ri] += delta * (z - mean[ri]);
        }
    }

    let rings = level
        .rule()
        .rings()
        .iter()
        .enumerate()
        .map(|(ri, ring)| {
            let atom = level.atom(ring.start, kind);
            let analytic = epsilon * epsilon * level.noise_variance(&atom);
            let mc_var = if trials > 1 { m2[ri] / (trials as f64 - 1.0) } else { 0.0 };
            (ring.radius, mc_var, analytic)
        })
        .collect();

    let bound = 1.5 * (1.0 / PI) * 2f64.powi(j as i32) * epsilon * epsilon;
    SigmaBoundReport { level: j, epsilon, bound, rings }
}
