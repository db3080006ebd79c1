//! Lp risk evaluation and the benchmark harness comparing the needlet,
//! truncated-SVD, and naive estimators over noise levels and norms.

use crate::error::{Error, Result};
use crate::estimator::{
    estimate, normal_sample, radon_sampler_from_coefficients, riemann_svd_coeffs,
    EstimatorSpec, RegressionObservation,
};
use crate::needlet::{cubature_disk, CubatureRule, CutoffKind};
use crate::phantom::{shepp_logan, Phantom, PhantomVariant};
use crate::svd::{radon_forward_svd, CoefficientVector, DiskPoint};
use crate::transform::{synthesize_at_point, RingSynthesizer};
use crate::Lp;
use rayon::prelude::*;

/// Rasterized reconstruction. Pixels outside the unit disk carry NaN.
#[derive(Debug, Clone)]
pub struct ImageGrid {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub values: Vec<f64>,
}

/// Synthesizes the coefficient vector on a square pixel grid covering
/// [-1, 1]^2, top row at y = +1.
pub fn render(c: &CoefficientVector, resolution: usize) -> ImageGrid {
    assert!(resolution >= 1);
    let n = resolution;
    let mut values = vec![f64::NAN; n * n];
    values
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(row, out)| {
            let y = 1.0 - 2.0 * (row as f64 + 0.5) / n as f64;
            for (col, v) in out.iter_mut().enumerate() {
                let x = -1.0 + 2.0 * (col as f64 + 0.5) / n as f64;
                let r = x.hypot(y);
                if r <= 1.0 {
                    *v = synthesize_at_point(c, DiskPoint { r, theta: y.atan2(x) });
                }
            }
        });
    ImageGrid { width: n, height: n, values }
}

/// Fixed quadrature, cached synthesis tables, and truth values for repeated
/// Lp error evaluation against one reference object.
pub struct RiskContext {
    rule: CubatureRule,
    synth: RingSynthesizer,
    truth: Vec<f64>,
}

impl RiskContext {
    /// Truth sampled from the phantom itself; estimates may have any degree
    /// up to `estimate_degree`.
    pub fn new(phantom: &Phantom, estimate_degree: u32, quad_degree: u32) -> Self {
        let rule = cubature_disk(quad_degree);
        let truth = rule.nodes().par_iter().map(|&p| phantom.eval(p)).collect();
        let synth = RingSynthesizer::new(&rule, estimate_degree);
        Self { rule, synth, truth }
    }

    /// Truth given directly as values at the rule nodes.
    pub fn with_truth_values(rule: CubatureRule, estimate_degree: u32, truth: Vec<f64>) -> Self {
        assert_eq!(truth.len(), rule.len());
        let synth = RingSynthesizer::new(&rule, estimate_degree);
        Self { rule, synth, truth }
    }

    pub fn rule(&self) -> &CubatureRule {
        &self.rule
    }

    /// Quadrature Lp errors between the truth and the synthesis of c_hat,
    /// one synthesis pass for all requested norms.
    pub fn lp_errors(&self, c_hat: &CoefficientVector, ps: &[Lp]) -> Vec<f64> {
        let n_rings = self.synth.n_rings();
        let (sums, max_abs) = (0..n_rings)
            .into_par_iter()
            .fold(
                || (vec![0.0; ps.len()], 0.0f64, Vec::new()),
                |(mut sums, mut max_abs, mut buf), t| {
                    let m = self.synth.ring_len(t);
                    buf.resize(m, 0.0);
                    self.synth.synthesize_ring(t, c_hat, &mut buf);
                    let start = self.synth.ring_start(t);
                    let w = self.rule.weights()[start];
                    for (q, &v) in buf.iter().enumerate() {
                        let d = (self.truth[start + q] - v).abs();
                        max_abs = max_abs.max(d);
                        for (i, p) in ps.iter().enumerate() {
                            if let Lp::Finite(p) = p {
                                sums[i] += w * pow_abs(d, *p);
                            }
                        }
                    }
                    (sums, max_abs, buf)
                },
            )
            .map(|(sums, max_abs, _)| (sums, max_abs))
            .reduce(
                || (vec![0.0; ps.len()], 0.0f64),
                |(mut a, am), (b, bm)| {
                    for (x, y) in a.iter_mut().zip(&b) {
                        *x += y;
                    }
                    (a, am.max(bm))
                },
            );
        ps.iter()
            .enumerate()
            .map(|(i, p)| match p {
                Lp::Finite(p) => sums[i].powf(1.0 / p),
                Lp::Infinity => max_abs,
            })
            .collect()
    }
}

fn pow_abs(d: f64, p: f64) -> f64 {
    if p == 1.0 {
        d
    } else if p == 2.0 {
        d * d
    } else if p.fract() == 0.0 && p <= 16.0 {
        d.powi(p as i32)
    } else {
        d.powf(p)
    }
}

/// One-shot Lp error of an estimate against a phantom on a given rule.
pub fn lp_error(
    c_hat: &CoefficientVector,
    phantom: &Phantom,
    p: Lp,
    quad_degree: u32,
) -> f64 {
    let ctx = RiskContext::new(phantom, c_hat.max_degree(), quad_degree);
    ctx.lp_errors(c_hat, &[p])[0]
}

/// Observation sampler shared by the tuner and the benchmark: produces the
/// sinogram-side coefficient vector for one noise realization.
pub enum ObservationEngine {
    WhiteNoise {
        /// lambda_k c_{k,l,i} for k <= k0.
        lambda_c: CoefficientVector,
        epsilon: f64,
    },
    Regression {
        /// Noiseless sinogram samples on the fan-beam grid.
        base_grid: Vec<f64>,
        n1: usize,
        n2: usize,
        sigma: f64,
        k0: u32,
    },
}

impl ObservationEngine {
    pub fn white_noise(c_truth: &CoefficientVector, epsilon: f64, k0: u32) -> Result<Self> {
        if c_truth.max_degree() < k0 {
            return Err(Error::InvalidParam(format!(
                "truth degree {} below k0 = {k0}",
                c_truth.max_degree()
            )));
        }
        Ok(Self::WhiteNoise { lambda_c: radon_forward_svd(&c_truth.truncated(k0)), epsilon })
    }

    /// Samples the degree-`c_truth.max_degree()` sinogram synthesis on the
    /// fan-beam grid once; realizations only add noise.
    pub fn regression(
        c_truth: &CoefficientVector,
        n1: usize,
        n2: usize,
        sigma: f64,
        k0: u32,
    ) -> Self {
        let sampler = radon_sampler_from_coefficients(c_truth);
        let mut base_grid = vec![0.0; n1 * n2];
        let cells: Vec<(usize, usize)> =
            (0..n1).flat_map(|i1| (0..n2).map(move |i2| (i1, i2))).collect();
        let values: Vec<f64> = cells
            .par_iter()
            .map(|&(i1, i2)| {
                let theta =
                    std::f64::consts::TAU * (i1 as f64 / n1 as f64 - i2 as f64 / n2 as f64);
                let s = (std::f64::consts::TAU * i2 as f64 / n2 as f64).sin();
                sampler(theta, s)
            })
            .collect();
        for (slot, v) in base_grid.iter_mut().zip(values) {
            *slot = v;
        }
        Self::Regression { base_grid, n1, n2, sigma, k0 }
    }

    /// Sinogram-side coefficients for one realization of the noise.
    pub fn observe(&self, seed: u64, realization: u64) -> CoefficientVector {
        match self {
            Self::WhiteNoise { lambda_c, epsilon } => {
                let mut y = lambda_c.clone();
                if *epsilon != 0.0 {
                    for (rank, v) in y.values_mut().iter_mut().enumerate() {
                        *v += epsilon * normal_sample(seed, realization, rank as u64);
                    }
                }
                y
            }
            Self::Regression { base_grid, n1, n2, sigma, k0 } => {
                let mut grid = base_grid.clone();
                if *sigma != 0.0 {
                    for (rank, v) in grid.iter_mut().enumerate() {
                        *v += sigma * normal_sample(seed, realization, rank as u64);
                    }
                }
                let obs = RegressionObservation {
                    grid,
                    n1: *n1,
                    n2: *n2,
                    sigma: *sigma,
                    seed,
                };
                riemann_svd_coeffs(&obs, *k0)
            }
        }
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            Self::WhiteNoise { .. } => "white-noise",
            Self::Regression { .. } => "regression",
        }
    }
}

/// Mean and sample standard deviation of per-realization Lp errors for every
/// (candidate, norm) pair; realizations share their noise across candidates.
pub fn sweep_errors(
    engine: &ObservationEngine,
    risk: &RiskContext,
    candidates: &[EstimatorSpec],
    norms: &[Lp],
    realizations: u32,
    seed: u64,
) -> Vec<Vec<(f64, f64)>> {
    // errors[realization][candidate][norm]
    let errors: Vec<Vec<Vec<f64>>> = (0..realizations as u64)
        .into_par_iter()
        .map(|r| {
            let y = engine.observe(seed, r);
            candidates
                .iter()
                .map(|spec| risk.lp_errors(&estimate(&y, spec), norms))
                .collect()
        })
        .collect();
    let n = realizations as f64;
    (0..candidates.len())
        .map(|ci| {
            (0..norms.len())
                .map(|pi| {
                    let mean =
                        errors.iter().map(|per| per[ci][pi]).sum::<f64>() / n;
                    let var = if realizations > 1 {
                        errors
                            .iter()
                            .map(|per| (per[ci][pi] - mean).powi(2))
                            .sum::<f64>()
                            / (n - 1.0)
                    } else {
                        0.0
                    };
                    (mean, var.sqrt())
                })
                .collect()
        })
        .collect()
}

/// Picks the candidate minimizing the mean Lp error over `realizations`
/// seeded noise draws; ties go to the earlier candidate in the list, so list
/// smoother candidates first.
pub fn select_best(
    engine: &ObservationEngine,
    risk: &RiskContext,
    candidates: &[EstimatorSpec],
    p: Lp,
    realizations: u32,
    seed: u64,
) -> (EstimatorSpec, f64, f64) {
    assert!(!candidates.is_empty() && realizations >= 1);
    let stats = sweep_errors(engine, risk, candidates, &[p], realizations, seed);
    let mut best = 0usize;
    for (ci, stat) in stats.iter().enumerate() {
        if stat[0].0 < stats[best][0].0 {
            best = ci;
        }
    }
    (candidates[best], stats[best][0].0, stats[best][0].1)
}

/// Which observation model a benchmark runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    WhiteNoise,
    /// Grid sizes of the fan-beam design; sigma is derived from the noise
    /// level via epsilon^2 = sigma^2 / (n1 n2).
    Regression { n1: usize, n2: usize },
}

/// Full benchmark configuration; defaults reproduce the reference sweep.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub model: ModelKind,
    pub noise_levels: Vec<f64>,
    pub norms: Vec<Lp>,
    pub k0: u32,
    pub truth_degree: u32,
    pub quad_degree: u32,
    pub needlet_levels: Vec<u32>,
    pub svd_degrees: Vec<u32>,
    pub cutoff: CutoffKind,
    pub realizations: u32,
    pub seed: u64,
    pub variant: PhantomVariant,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::WhiteNoise,
            noise_levels: vec![0.5, 1.0, 2.0, 4.0, 8.0],
            norms: vec![
                Lp::Finite(1.0),
                Lp::Finite(2.0),
                Lp::Finite(4.0),
                Lp::Finite(6.0),
                Lp::Finite(8.0),
                Lp::Finite(10.0),
                Lp::Infinity,
            ],
            k0: 256,
            truth_degree: 512,
            quad_degree: 2048,
            needlet_levels: (3..=9).collect(),
            svd_degrees: vec![8, 16, 32, 64, 128, 256],
            cutoff: CutoffKind::SmoothExp,
            realizations: 50,
            seed: 20_177,
            variant: PhantomVariant::Original,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.noise_levels.is_empty() {
            return Err(Error::InvalidParam("noise_levels is empty".into()));
        }
        if self.norms.is_empty() {
            return Err(Error::InvalidParam("norms is empty".into()));
        }
        if self.realizations == 0 {
            return Err(Error::InvalidParam("realizations must be >= 1".into()));
        }
        if self.truth_degree < self.k0 {
            return Err(Error::InvalidParam(format!(
                "truth_degree {} below k0 {}",
                self.truth_degree, self.k0
            )));
        }
        if self.quad_degree < 4 * self.truth_degree {
            return Err(Error::InvalidParam(format!(
                "quad_degree {} below 4 x truth_degree {}",
                self.quad_degree,
                4 * self.truth_degree
            )));
        }
        if self.needlet_levels.is_empty() && self.svd_degrees.is_empty() {
            return Err(Error::InvalidParam("no candidates configured".into()));
        }
        if let Some(bad) = self.svd_degrees.iter().find(|&&k| k > self.k0) {
            return Err(Error::InvalidParam(format!(
                "svd candidate degree {bad} exceeds k0 {}",
                self.k0
            )));
        }
        Ok(())
    }
}

/// One row of the benchmark output.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub model: String,
    pub estimator: String,
    /// Best tuning value: the level J for needlet, kS for svd, k0 for naive.
    pub tuning: u32,
    pub noise: f64,
    pub p: Lp,
    pub mean_error: f64,
    pub std_error: f64,
    pub realizations: u32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
}

/// Runs the full sweep: per noise level and norm, tunes the needlet level
/// and SVD degree by minimizing the mean error over the configured number of
/// realizations, and records those best errors alongside naive inversion.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchResult> {
    config.validate()?;
    let phantom = shepp_logan(config.variant);
    let rule = cubature_disk(config.quad_degree);
    let c_truth = phantom.project_coefficients(config.truth_degree, &rule)?;
    let truth_values: Vec<f64> =
        rule.nodes().par_iter().map(|&p| phantom.eval(p)).collect();
    let risk = RiskContext::with_truth_values(rule, config.k0, truth_values);
    run_benchmark_with(config, &c_truth, &risk)
}

/// Benchmark core against prepared truth coefficients and risk context; used
/// by the acceptance suite to share the expensive projection.
pub fn run_benchmark_with(
    config: &BenchConfig,
    c_truth: &CoefficientVector,
    risk: &RiskContext,
) -> Result<BenchResult> {
    config.validate()?;
    let mut needlet_cands: Vec<EstimatorSpec> = config
        .needlet_levels
        .iter()
        .map(|&level| EstimatorSpec::Needlet { level, cutoff: config.cutoff })
        .collect();
    needlet_cands.sort_by_key(|s| match s {
        EstimatorSpec::Needlet { level, .. } => *level,
        _ => unreachable!(),
    });
    let mut svd_cands: Vec<EstimatorSpec> = config
        .svd_degrees
        .iter()
        .map(|&max_degree| EstimatorSpec::Svd { max_degree })
        .collect();
    svd_cands.sort_by_key(|s| match s {
        EstimatorSpec::Svd { max_degree } => *max_degree,
        _ => unreachable!(),
    });
    let candidates: Vec<EstimatorSpec> = needlet_cands
        .iter()
        .chain(svd_cands.iter())
        .chain(std::iter::once(&EstimatorSpec::Naive))
        .copied()
        .collect();

    let mut rows = Vec::new();
    for (ei, &noise) in config.noise_levels.iter().enumerate() {
        let engine = match config.model {
            ModelKind::WhiteNoise => {
                ObservationEngine::white_noise(c_truth, noise, config.k0)?
            }
            ModelKind::Regression { n1, n2 } => {
                let sigma = noise * ((n1 * n2) as f64).sqrt();
                ObservationEngine::regression(c_truth, n1, n2, sigma, config.k0)
            }
        };
        let cell_seed = config
            .seed
            .wrapping_mul(0x9e3779b97f4a7c15)
            .wrapping_add(ei as u64 + 1);
        let stats = sweep_errors(
            &engine,
            risk,
            &candidates,
            &config.norms,
            config.realizations,
            cell_seed,
        );
        let model = engine.model_name().to_string();
        for (pi, &p) in config.norms.iter().enumerate() {
            // needlet candidates occupy the front of the list, then svd,
            // then naive; scan each family with strict < so ties resolve
            // toward stronger smoothing (candidates are sorted ascending)
            let mut cursor = 0usize;
            if !needlet_cands.is_empty() {
                let mut best = cursor;
                for ci in cursor..cursor + needlet_cands.len() {
                    if stats[ci][pi].0 < stats[best][pi].0 {
                        best = ci;
                    }
                }
                let tuning = match candidates[best] {
                    EstimatorSpec::Needlet { level, .. } => level,
                    _ => unreachable!(),
                };
                rows.push(BenchRow {
                    model: model.clone(),
                    estimator: "needlet".into(),
                    tuning,
                    noise,
                    p,
                    mean_error: stats[best][pi].0,
                    std_error: stats[best][pi].1,
                    realizations: config.realizations,
                });
            }
            cursor += needlet_cands.len();
            if !svd_cands.is_empty() {
                let mut best = cursor;
                for ci in cursor..cursor + svd_cands.len() {
                    if stats[ci][pi].0 < stats[best][pi].0 {
                        best = ci;
                    }
                }
                let tuning = match candidates[best] {
                    EstimatorSpec::Svd { max_degree } => max_degree,
                    _ => unreachable!(),
                };
                rows.push(BenchRow {
                    model: model.clone(),
                    estimator: "svd".into(),
                    tuning,
                    noise,
                    p,
                    mean_error: stats[best][pi].0,
                    std_error: stats[best][pi].1,
                    realizations: config.realizations,
                });
            }
            cursor += svd_cands.len();
            rows.push(BenchRow {
                model: model.clone(),
                estimator: "naive".into(),
                tuning: config.k0,
                noise,
                p,
                mean_error: stats[cursor][pi].0,
                std_error: stats[cursor][pi].1,
                realizations: config.realizations,
            });
        }
    }
    Ok(BenchResult { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svd::enumerate_indices;

    fn random_coefficients(max_degree: u32, seed: u64) -> CoefficientVector {
        let mut c = CoefficientVector::zeros(max_degree);
        let mut state = seed | 1;
        for v in c.values_mut() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            *v = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        }
        c
    }

    #[test]
    fn lp_error_of_projection_satisfies_pythagoras() {
        // || f - P_K f ||_2 via quadrature equals sqrt(quad(f^2) - sum c^2)
        let ph = shepp_logan(PhantomVariant::Original);
        let rule = cubature_disk(128);
        let c = ph.project_coefficients(32, &rule).unwrap();
        let f_sq = rule.integrate(|p| ph.eval(p).powi(2));
        let expect = (f_sq - c.norm_sq()).max(0.0).sqrt();
        let got = lp_error(&c, &ph, Lp::Finite(2.0), 128);
        assert!(
            (got - expect).abs() <= 1e-8 * expect,
            "{got} vs {expect} (rel {})",
            ((got - expect) / expect).abs()
        );
    }

    #[test]
    fn zero_error_for_matching_truth() {
        // truth synthesized from the same coefficients compared to itself
        let c = random_coefficients(10, 3);
        let rule = cubature_disk(24);
        let synth = RingSynthesizer::new(&rule, 10);
        let mut truth = vec![0.0; rule.len()];
        let mut buf = Vec::new();
        for t in 0..synth.n_rings() {
            buf.resize(synth.ring_len(t), 0.0);
            synth.synthesize_ring(t, &c, &mut buf);
            let start = synth.ring_start(t);
            truth[start..start + buf.len()].copy_from_slice(&buf);
        }
        let ctx = RiskContext::with_truth_values(rule, 10, truth);
        for p in [Lp::Finite(1.0), Lp::Finite(2.0), Lp::Infinity] {
            let err = ctx.lp_errors(&c, &[p])[0];
            assert!(err < 1e-12, "{p}: {err}");
        }
    }

    #[test]
    fn lp_error_is_homogeneous() {
        let c = random_coefficients(8, 7);
        let c_hat = random_coefficients(8, 8);
        let rule = cubature_disk(20);
        let synth = RingSynthesizer::new(&rule, 8);
        let mut truth = vec![0.0; rule.len()];
        let mut buf = Vec::new();
        for t in 0..synth.n_rings() {
            buf.resize(synth.ring_len(t), 0.0);
            synth.synthesize_ring(t, &c, &mut buf);
            truth[synth.ring_start(t)..synth.ring_start(t) + buf.len()].copy_from_slice(&buf);
        }
        let ctx1 = RiskContext::with_truth_values(rule.clone(), 8, truth.clone());
        let doubled: Vec<f64> = truth.iter().map(|v| 2.0 * v).collect();
        let ctx2 = RiskContext::with_truth_values(rule, 8, doubled);
        let mut c2 = c_hat.clone();
        for v in c2.values_mut() {
            *v *= 2.0;
        }
        for p in [Lp::Finite(1.0), Lp::Finite(2.0), Lp::Finite(4.0), Lp::Infinity] {
            let base = ctx1.lp_errors(&c_hat, &[p])[0];
            let scaled = ctx2.lp_errors(&c2, &[p])[0];
            assert!(
                (scaled - 2.0 * base).abs() <= 1e-10 * base.max(1e-12),
                "{p}: {scaled} vs 2 x {base}"
            );
        }
    }

    #[test]
    fn zero_noise_selects_exact_candidates() {
        // epsilon = 0: every needlet level with 2^{J-1} >= k0 gives the pure
        // truncation; smaller levels oversmooth, so the tie-break picks the
        // smallest exact level
        let ph = shepp_logan(PhantomVariant::Original);
        let rule = cubature_disk(64);
        let c = ph.project_coefficients(16, &rule).unwrap();
        let truth: Vec<f64> = rule.nodes().iter().map(|&p| ph.eval(p)).collect();
        let risk = RiskContext::with_truth_values(rule, 8, truth);
        let engine = ObservationEngine::white_noise(&c, 0.0, 8).unwrap();
        let candidates: Vec<EstimatorSpec> = (2..=6)
            .map(|level| EstimatorSpec::Needlet { level, cutoff: CutoffKind::SmoothExp })
            .collect();
        let (best, _, std) = select_best(&engine, &risk, &candidates, Lp::Finite(2.0), 3, 5);
        assert_eq!(best, EstimatorSpec::Needlet { level: 4, cutoff: CutoffKind::SmoothExp });
        assert_eq!(std, 0.0);
    }

    #[test]
    fn benchmark_structure_and_determinism() {
        let config = BenchConfig {
            noise_levels: vec![0.5, 2.0],
            norms: vec![Lp::Finite(2.0), Lp::Infinity],
            k0: 8,
            truth_degree: 16,
            quad_degree: 64,
            needlet_levels: vec![2, 3, 4],
            svd_degrees: vec![2, 4, 8],
            realizations: 3,
            seed: 99,
            ..BenchConfig::default()
        };
        let a = run_benchmark(&config).unwrap();
        assert_eq!(a.rows.len(), 2 * 2 * 3);
        let b = run_benchmark(&config).unwrap();
        assert_eq!(a, b);
        for row in &a.rows {
            assert!(row.mean_error >= 0.0);
            assert!(row.realizations == 3);
        }
    }

    #[test]
    fn zero_noise_benchmark_needlet_matches_naive() {
        // with a full-window candidate available and no noise, the needlet
        // best equals naive inversion (both are the k0 truncation)
        let config = BenchConfig {
            noise_levels: vec![0.0],
            norms: vec![Lp::Finite(2.0)],
            k0: 8,
            truth_degree: 16,
            quad_degree: 64,
            needlet_levels: vec![3, 4],
            svd_degrees: vec![8],
            realizations: 1,
            seed: 1,
            ..BenchConfig::default()
        };
        let out = run_benchmark(&config).unwrap();
        let needlet = out.rows.iter().find(|r| r.estimator == "needlet").unwrap();
        let naive = out.rows.iter().find(|r| r.estimator == "naive").unwrap();
        assert!((needlet.mean_error - naive.mean_error).abs() <= 1e-12 * naive.mean_error);
        assert_eq!(needlet.tuning, 4);
    }

    #[test]
    fn render_constant_vector() {
        let mut c = CoefficientVector::zeros(0);
        c.values_mut()[0] = std::f64::consts::PI.sqrt(); // synthesis == 1
        let img = render(&c, 32);
        assert_eq!(img.values.len(), 32 * 32);
        let center = img.values[16 * 32 + 16];
        assert!((center - 1.0).abs() < 1e-12);
        assert!(img.values[0].is_nan()); // corner outside the disk
        let inside = img.values.iter().filter(|v| !v.is_nan()).count();
        // ~ pi/4 of the pixels are inside
        let frac = inside as f64 / 1024.0;
        assert!((frac - std::f64::consts::FRAC_PI_4).abs() < 0.05, "{frac}");
        for v in img.values.iter().filter(|v| !v.is_nan()) {
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn engine_white_noise_matches_simulate() {
        let c = random_coefficients(8, 13);
        let engine = ObservationEngine::white_noise(&c, 1.5, 6).unwrap();
        let y = engine.observe(77, 3);
        let direct = crate::estimator::simulate_white_noise(&c, 1.5, 6, 77, 3).unwrap();
        for idx in enumerate_indices(6) {
            assert_eq!(y.get(idx), direct.y.get(idx));
        }
    }
}
