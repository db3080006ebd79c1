//! The acceptance suite: every numbered criterion as a callable check with
//! pinned tolerances, shared by the `selftest` CLI verb and the integration
//! test target.

use crate::bench::{run_benchmark_with, BenchConfig, BenchResult, ModelKind, RiskContext};
use crate::estimator::{empirical_sigma_bound, estimate, EstimatorSpec};
use crate::needlet::frame::{analyze_level_kind, synthesize_level_kind};
use crate::needlet::{
    cubature_disk, moment_check, AtomKind, CutoffKind, NeedletFrame, NeedletLevel,
};
use crate::phantom::{shepp_logan, PhantomVariant};
use crate::svd::{
    enumerate_indices, eval_f, eval_g, radon_forward_svd, radon_inverse_svd,
    radon_line_integral, singular_value_disk, CoefficientVector, DiskPoint,
};
use crate::transform::synthesize_at_point;
use crate::{needlet::weight_w, Lp};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::time::Instant;

/// Atom-norm scaling constants frozen from the level-3 calibration run:
/// measured ratio bands (p = 1: [0.779, 2.428], p = inf: [0.0288, 0.1445])
/// give the geometric centers below; C is twice the half-band.
const A6_SCALE_P1: f64 = 1.3755;
const A6_C_P1: f64 = 3.5312;
const A6_SCALE_PINF: f64 = 0.06451;
const A6_C_PINF: f64 = 4.4798;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{:>3}  {}  [{:7.1}s]  {} - {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.seconds,
            self.name,
            self.detail
        )
    }
}

fn report(
    id: &'static str,
    name: &'static str,
    started: Instant,
    passed: bool,
    detail: String,
) -> CriterionReport {
    CriterionReport { id, name, passed, detail, seconds: started.elapsed().as_secs_f64() }
}

fn pseudo_random_vector(max_degree: u32, seed: u64) -> CoefficientVector {
    let mut c = CoefficientVector::zeros(max_degree);
    let mut state = seed | 1;
    for v in c.values_mut() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *v = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    }
    c
}

/// A1: the numeric line-integral Radon transform of f_{k,l,i} matches
/// lambda_k g_{k,l,i} on a 32 x 32 (theta, s) grid for every k <= 8,
/// single-threaded, within the runtime budget.
pub fn criterion_a1() -> CriterionReport {
    let t = Instant::now();
    let mut worst_rel: f64 = 0.0;
    for idx in enumerate_indices(8) {
        let lam = singular_value_disk(idx.k());
        let mut max_diff: f64 = 0.0;
        let mut max_ref: f64 = 0.0;
        for q in 0..32 {
            // half-step offset keeps sine harmonics off their zero set
            let theta = 2.0 * PI * (q as f64 + 0.5) / 32.0;
            for m in 0..32 {
                let s = -1.0 + 2.0 * (m as f64 + 0.5) / 32.0;
                let numeric = radon_line_integral(|p| eval_f(idx, p), theta, s, 512);
                let reference = lam * eval_g(idx, theta, s).expect("interior s");
                max_diff = max_diff.max((numeric - reference).abs());
                max_ref = max_ref.max(reference.abs());
            }
        }
        worst_rel = worst_rel.max(max_diff / max_ref);
    }
    let elapsed = t.elapsed().as_secs_f64();
    let passed = worst_rel <= 1e-5 && elapsed < 60.0;
    report(
        "A1",
        "SVD identity against the line-integral oracle",
        t,
        passed,
        format!("max rel err {worst_rel:.2e} (tol 1e-5), {elapsed:.1}s single-threaded (< 60s)"),
    )
}

/// A2: forward then inverse Radon in coefficient space is the identity.
pub fn criterion_a2() -> CriterionReport {
    let t = Instant::now();
    let c = pseudo_random_vector(64, 2024);
    let round = radon_inverse_svd(&radon_forward_svd(&c));
    let worst = c
        .values()
        .iter()
        .zip(round.values())
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .fold(0.0f64, f64::max);
    report(
        "A2",
        "diagonal round trip at K = 64",
        t,
        worst <= 1e-12,
        format!("max rel err {worst:.2e} (tol 1e-12)"),
    )
}

/// A3: every monomial moment of total degree <= 32 is exact.
pub fn criterion_a3() -> CriterionReport {
    let t = Instant::now();
    let rule = cubature_disk(32);
    let worst = moment_check(&rule, 32).expect("rule is exact to degree 32");
    report(
        "A3",
        "cubature exactness against closed-form disk moments",
        t,
        worst <= 1e-10,
        format!("worst relative moment error {worst:.2e} (tol 1e-10)"),
    )
}

/// A4: the discretized low-pass operator reproduces polynomials of degree
/// <= 2^{j-1} through the needlet grid.
pub fn criterion_a4() -> CriterionReport {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for j in 3..=6u32 {
        let level = NeedletLevel::new(j, CutoffKind::SmoothExp);
        let deg = 1u32 << (j - 1);
        for trial in 0..20u64 {
            let p = pseudo_random_vector(deg, 1000 + j as u64 * 100 + trial);
            let alphas = analyze_level_kind(&level, AtomKind::Father, &p);
            let mut back = CoefficientVector::zeros((1u32 << j) - 1);
            synthesize_level_kind(&level, AtomKind::Father, &alphas, &mut back);
            // sup over a 64 x 64 in-disk grid
            let sup = (0..64)
                .into_par_iter()
                .map(|row| {
                    let y = 1.0 - 2.0 * (row as f64 + 0.5) / 64.0;
                    let mut local: f64 = 0.0;
                    for col in 0..64 {
                        let x = -1.0 + 2.0 * (col as f64 + 0.5) / 64.0;
                        let r = x.hypot(y);
                        if r <= 1.0 {
                            let pt = DiskPoint { r, theta: y.atan2(x) };
                            local = local.max(
                                (synthesize_at_point(&back, pt) - synthesize_at_point(&p, pt))
                                    .abs(),
                            );
                        }
                    }
                    local
                })
                .reduce(|| 0.0, f64::max);
            worst = worst.max(sup);
        }
    }
    report(
        "A4",
        "polynomial reproduction through the needlet grid",
        t,
        worst <= 1e-8,
        format!("sup |A_j P - P| = {worst:.2e} over j in 3..6 (tol 1e-8)"),
    )
}

/// A5: Parseval identity and frame round trip for degree-31 vectors.
pub fn criterion_a5() -> CriterionReport {
    let t = Instant::now();
    let frame = NeedletFrame::new(6, CutoffKind::SmoothExp);
    let mut worst_parseval: f64 = 0.0;
    let mut worst_round: f64 = 0.0;
    for trial in 0..20u64 {
        let c = pseudo_random_vector(31, 7000 + trial);
        let fc = frame.analyze(&c).expect("degree < 2^6");
        worst_parseval =
            worst_parseval.max(((fc.norm_sq() - c.norm_sq()) / c.norm_sq()).abs());
        let back = frame.synthesize(&fc, 31);
        let num: f64 = c
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        worst_round = worst_round.max(num / c.norm_sq().sqrt());
    }
    let passed = worst_parseval <= 1e-8 && worst_round <= 1e-8;
    report(
        "A5",
        "tight frame: Parseval and reconstruction",
        t,
        passed,
        format!("parseval rel {worst_parseval:.2e}, round trip rel {worst_round:.2e} (tol 1e-8)"),
    )
}

/// A6: atom L2 norms stay at or below one, and the L1/Linf norms follow the
/// (2^{2j}/W_j)^{1/2-1/p} scaling within the constants frozen at level 3.
pub fn criterion_a6() -> CriterionReport {
    let t = Instant::now();
    let mut worst_l2: f64 = 0.0;
    for j in 0..=5u32 {
        let level = NeedletLevel::new(j, CutoffKind::SmoothExp);
        for kind in [AtomKind::Father, AtomKind::Mother] {
            for ring in level.rule().rings() {
                let atom = level.atom(ring.start, kind);
                worst_l2 = worst_l2.max(level.l2_norm_sq(&atom).sqrt());
            }
        }
    }

    let mut ratio_ok = true;
    let mut band_detail = String::new();
    for j in 3..=6u32 {
        let level = NeedletLevel::new(j, CutoffKind::SmoothExp);
        let starts: Vec<usize> = level.rule().rings().iter().map(|r| r.start).collect();
        let ratios: Vec<(f64, f64)> = starts
            .par_iter()
            .map(|&start| {
                let atom = level.atom(start, AtomKind::Father);
                let base = 2f64.powi(2 * j as i32) / weight_w(j, atom.node.r);
                let r1 = level.lp_norm(&atom, Lp::Finite(1.0)) / base.powf(-0.5);
                let rinf = level.lp_norm(&atom, Lp::Infinity) / base.powf(0.5);
                (r1, rinf)
            })
            .collect();
        for &(r1, rinf) in &ratios {
            let n1 = r1 / A6_SCALE_P1;
            let ninf = rinf / A6_SCALE_PINF;
            if !(1.0 / A6_C_P1..=A6_C_P1).contains(&n1)
                || !(1.0 / A6_C_PINF..=A6_C_PINF).contains(&ninf)
            {
                ratio_ok = false;
            }
        }
        let lo1 = ratios.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        let hi1 = ratios.iter().map(|r| r.0).fold(0.0f64, f64::max);
        band_detail.push_str(&format!(" j{j}:[{lo1:.2},{hi1:.2}]"));
    }
    let passed = worst_l2 <= 1.0 + 1e-6 && ratio_ok;
    report(
        "A6",
        "atom norms: L2 bound and Lp scaling with frozen constants",
        t,
        passed,
        format!(
            "max ||phi||_2 = {worst_l2:.9} (tol 1+1e-6); p=1 ratio bands{band_detail}, \
             frozen scale {A6_SCALE_P1}/C {A6_C_P1} (p=1), {A6_SCALE_PINF}/{A6_C_PINF} (p=inf): {}",
            if ratio_ok { "inside" } else { "OUTSIDE" }
        ),
    )
}

/// A7: growth of the stability sums matches the theoretical exponents
/// (fitted log2 slope over levels 3..6; individual increments reported).
pub fn criterion_a7() -> CriterionReport {
    let t = Instant::now();
    let ps = [1.0, 2.0, 4.0, 6.0];
    // d = 2 exponents dp/2 + (p/2 - 2)_+; p = 4 carries the extra log factor
    let centers = [1.0, 2.0, 4.0, 7.0];
    let slack_hi = [0.75, 0.75, 0.75 + 0.5, 0.75];
    let slack_lo = [0.75, 0.75, 0.75, 0.75];
    let sums: Vec<Vec<f64>> = (3..=6u32)
        .map(|j| {
            let level = NeedletLevel::new(j, CutoffKind::SmoothExp);
            ps.iter().map(|&p| level.stability_sum(AtomKind::Father, p)).collect()
        })
        .collect();
    let mut passed = true;
    let mut detail = String::new();
    for (pi, &p) in ps.iter().enumerate() {
        let slope = ((sums[3][pi] / sums[0][pi]).log2()) / 3.0;
        let increments: Vec<f64> = (0..3)
            .map(|w| (sums[w + 1][pi] / sums[w][pi]).log2())
            .collect();
        let lo = centers[pi] - slack_lo[pi];
        let hi = centers[pi] + slack_hi[pi];
        if !(lo..=hi).contains(&slope) {
            passed = false;
        }
        detail.push_str(&format!(
            " p{p}: slope {slope:.2} in [{lo:.2},{hi:.2}] (steps {:.2},{:.2},{:.2});",
            increments[0], increments[1], increments[2]
        ));
    }
    report("A7", "stability sum growth exponents", t, passed, detail.trim().to_string())
}

/// A8: far-field decay of a smooth-cutoff father atom at the stated
/// threshold, with the hard cutoff violating the bound tenfold.
pub fn criterion_a8() -> CriterionReport {
    let t = Instant::now();
    let mut passed = true;
    let mut detail = String::new();
    for j in [4u32, 5] {
        let smooth = NeedletLevel::new(j, CutoffKind::SmoothExp);
        let hard = NeedletLevel::new(j, CutoffKind::Hard);
        let ring = smooth
            .rule()
            .rings()
            .iter()
            .min_by(|a, b| {
                (a.radius - 0.5).abs().partial_cmp(&(b.radius - 0.5).abs()).unwrap()
            })
            .unwrap()
            .start;
        let thr = 10.0 * 2f64.powi(-(j as i32));
        let smooth_ratio =
            smooth.far_field_ratio(&smooth.atom(ring, AtomKind::Father), thr);
        let hard_ratio = hard.far_field_ratio(&hard.atom(ring, AtomKind::Father), thr);
        if smooth_ratio > 0.01 || hard_ratio < 0.1 {
            passed = false;
        }
        detail.push_str(&format!(
            " j{j}: smooth {smooth_ratio:.4} (tol 0.01), hard {hard_ratio:.4} (need >= 0.1);"
        ));
    }
    report(
        "A8",
        "needlet localization at 10 cells and hard-cutoff violation",
        t,
        passed,
        detail.trim().to_string(),
    )
}

/// A9: Monte-Carlo needlet-coefficient noise variance stays under the
/// (1.5/pi) 2^j eps^2 bound at every node.
pub fn criterion_a9() -> CriterionReport {
    let t = Instant::now();
    let epsilon = 1.0;
    let mut passed = true;
    let mut detail = String::new();
    for j in 2..=5u32 {
        let rep = empirical_sigma_bound(j, epsilon, 10_000, CutoffKind::SmoothExp, 4242);
        if !rep.holds() {
            passed = false;
        }
        detail.push_str(&format!(
            " j{j}: max var {:.4} (mc) / {:.4} (exact) vs bound {:.4};",
            rep.max_mc_variance(),
            rep.max_analytic_variance(),
            rep.bound
        ));
    }
    report("A9", "needlet noise variance bound", t, passed, detail.trim().to_string())
}

/// A10: analytic versus brute-force numeric Radon transform of the phantom.
pub fn criterion_a10() -> CriterionReport {
    let t = Instant::now();
    let ph = shepp_logan(PhantomVariant::Original);
    let mut state = 0x6a09e667f3bcc909u64;
    let mut rand = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let lines: Vec<(f64, f64)> =
        (0..100).map(|_| (rand() * 2.0 * PI, rand() * 1.98 - 0.99)).collect();
    let results: Vec<(f64, f64)> = lines
        .par_iter()
        .map(|&(theta, s)| {
            let analytic = ph.radon(theta, s);
            let numeric = radon_line_integral(|p| ph.eval(p), theta, s, 4_000_000);
            (analytic, numeric)
        })
        .collect();
    let worst = results.iter().map(|(a, n)| (a - n).abs()).fold(0.0f64, f64::max);
    let scale = results.iter().map(|(a, _)| a.abs()).fold(0.0f64, f64::max);
    let rel = worst / scale;
    report(
        "A10",
        "phantom sinogram: analytic vs numeric on 100 random lines",
        t,
        rel <= 1e-6,
        format!("max rel err {rel:.2e} (tol 1e-6)"),
    )
}

/// A11: with no noise and a full window, the needlet estimate is exactly the
/// degree-k0 truncation.
pub fn criterion_a11() -> CriterionReport {
    let t = Instant::now();
    let c = pseudo_random_vector(300, 11);
    let k0 = 256u32;
    let obs = crate::estimator::simulate_white_noise(&c, 0.0, k0, 1, 0).unwrap();
    let spec = EstimatorSpec::Needlet { level: 9, cutoff: CutoffKind::SmoothExp };
    let est = estimate(&obs.y, &spec);
    let truth = c.truncated(k0);
    let worst = est
        .values()
        .iter()
        .zip(truth.values())
        .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
        .fold(0.0f64, f64::max);
    report(
        "A11",
        "zero-noise needlet estimate equals the truncation",
        t,
        worst <= 1e-12,
        format!("max rel deviation {worst:.2e} (tol 1e-12)"),
    )
}

/// Benchmark outcome shared by A12 and A13.
pub struct BenchOutcome {
    pub white: BenchResult,
    pub regression: BenchResult,
    pub a12: CriterionReport,
    pub a13: CriterionReport,
}

/// A12 and A13: the white-noise sweep reproduces the published comparisons
/// and the regression model tracks it under the noise calibration.
pub fn bench_criteria(quick: bool) -> BenchOutcome {
    let t = Instant::now();
    let (config, reg_eps) = if quick {
        (
            BenchConfig {
                model: ModelKind::WhiteNoise,
                noise_levels: vec![1.0, 4.0],
                norms: vec![Lp::Finite(1.0), Lp::Finite(2.0), Lp::Infinity],
                k0: 64,
                truth_degree: 128,
                quad_degree: 512,
                needlet_levels: (3..=7).collect(),
                svd_degrees: vec![8, 16, 32, 64],
                realizations: 6,
                ..BenchConfig::default()
            },
            vec![4.0],
        )
    } else {
        (BenchConfig::default_acceptance(), vec![2.0, 4.0, 8.0])
    };

    let phantom = shepp_logan(config.variant);
    let rule = cubature_disk(config.quad_degree);
    let c_truth = phantom
        .project_coefficients(config.truth_degree, &rule)
        .expect("rule has the 4x margin");
    let truth_values: Vec<f64> =
        rule.nodes().par_iter().map(|&p| phantom.eval(p)).collect();
    let risk = RiskContext::with_truth_values(rule, config.k0, truth_values);

    let white = run_benchmark_with(&config, &c_truth, &risk).expect("white-noise sweep");

    let reg_config = BenchConfig {
        model: ModelKind::Regression { n1: 64, n2: 64 },
        noise_levels: reg_eps,
        norms: vec![Lp::Finite(2.0)],
        ..config.clone()
    };
    let regression =
        run_benchmark_with(&reg_config, &c_truth, &risk).expect("regression sweep");

    let a12 = judge_a12(&config, &white, t);
    let a13 = judge_a13(&reg_config, &white, &regression);
    BenchOutcome { white, regression, a12, a13 }
}

impl BenchConfig {
    /// The full acceptance sweep parameters.
    pub fn default_acceptance() -> Self {
        BenchConfig {
            noise_levels: vec![0.5, 1.0, 2.0, 4.0, 8.0],
            norms: vec![Lp::Finite(1.0), Lp::Finite(2.0), Lp::Infinity],
            ..BenchConfig::default()
        }
    }
}

fn judge_a12(config: &BenchConfig, white: &BenchResult, started: Instant) -> CriterionReport {
    let get = |estimator: &str, noise: f64, p: Lp| -> f64 {
        white
            .rows
            .iter()
            .find(|r| r.estimator == estimator && r.noise == noise && r.p == p)
            .map(|r| r.mean_error)
            .expect("benchmark row present")
    };
    let mut cells = 0usize;
    let mut needlet_wins = 0usize;
    let mut naive_beaten = true;
    let mut inversions_detail = String::new();
    let mut inversions_ok = true;
    for &p in &config.norms {
        for &eps in &config.noise_levels {
            cells += 1;
            let ne = get("needlet", eps, p);
            let sv = get("svd", eps, p);
            if ne <= 1.05 * sv {
                needlet_wins += 1;
            }
            if eps >= 2.0 {
                let na = get("naive", eps, p);
                if !(ne < na && sv < na) {
                    naive_beaten = false;
                }
            }
        }
        for estimator in ["needlet", "svd", "naive"] {
            let mut inv = 0usize;
            for w in config.noise_levels.windows(2) {
                if get(estimator, w[1], p) < get(estimator, w[0], p) {
                    inv += 1;
                }
            }
            if inv > 1 {
                inversions_ok = false;
                inversions_detail.push_str(&format!(" {estimator}@p{p}:{inv}inv"));
            }
        }
    }
    let frac = needlet_wins as f64 / cells as f64;
    let elapsed = started.elapsed().as_secs_f64();
    let passed = frac >= 0.6 && naive_beaten && inversions_ok && elapsed < 1800.0;
    report(
        "A12",
        "white-noise benchmark reproduction",
        started,
        passed,
        format!(
            "needlet <= 1.05 svd in {needlet_wins}/{cells} cells ({:.0}%), tuned beat naive at \
             eps >= 2: {naive_beaten}, monotone: {}{}; {elapsed:.0}s (< 1800s)",
            frac * 100.0,
            inversions_ok,
            inversions_detail
        ),
    )
}

fn judge_a13(
    reg_config: &BenchConfig,
    white: &BenchResult,
    regression: &BenchResult,
) -> CriterionReport {
    let t = Instant::now();
    let mut passed = true;
    let mut detail = String::new();
    for &eps in &reg_config.noise_levels {
        for estimator in ["needlet", "svd"] {
            let wn = white
                .rows
                .iter()
                .find(|r| {
                    r.estimator == estimator && r.noise == eps && r.p == Lp::Finite(2.0)
                })
                .map(|r| r.mean_error)
                .expect("white-noise counterpart");
            let rg = regression
                .rows
                .iter()
                .find(|r| {
                    r.estimator == estimator && r.noise == eps && r.p == Lp::Finite(2.0)
                })
                .map(|r| r.mean_error)
                .expect("regression row");
            let ratio = rg / wn;
            if !(0.5..=2.0).contains(&ratio) {
                passed = false;
            }
            detail.push_str(&format!(" {estimator}@eps{eps}: x{ratio:.2};"));
        }
    }
    report(
        "A13",
        "regression model tracks white noise under the calibration",
        t,
        passed,
        detail.trim().to_string(),
    )
}

/// Runs the full suite in order; `quick` shrinks the benchmark criteria.
pub fn run_all(quick: bool) -> Vec<CriterionReport> {
    let mut out = vec![
        criterion_a1(),
        criterion_a2(),
        criterion_a3(),
        criterion_a4(),
        criterion_a5(),
        criterion_a6(),
        criterion_a7(),
        criterion_a8(),
        criterion_a9(),
        criterion_a10(),
        criterion_a11(),
    ];
    let bench = bench_criteria(quick);
    out.push(bench.a12);
    out.push(bench.a13);
    out
}
