// one epsilon cell of the acceptance sweep, timed
use radonlet::bench::*;
use radonlet::needlet::{cubature_disk, CutoffKind};
use radonlet::phantom::{shepp_logan, PhantomVariant};
use radonlet::estimator::EstimatorSpec;
use radonlet::Lp;
use rayon::prelude::*;

fn main() {
    let ph = shepp_logan(PhantomVariant::Original);
    let rule = cubature_disk(2048);
    let truth: Vec<f64> = rule.nodes().par_iter().map(|&p| ph.eval(p)).collect();
    let risk = RiskContext::with_truth_values(rule, 256, truth);
    let c = ph.project_coefficients(512, &cubature_disk(2048)).unwrap();
    let engine = ObservationEngine::white_noise(&c, 2.0, 256).unwrap();
    let candidates: Vec<EstimatorSpec> = (3..=9)
        .map(|level| EstimatorSpec::Needlet { level, cutoff: CutoffKind::SmoothExp })
        .chain([8u32, 16, 32, 64, 128, 256].iter().map(|&d| EstimatorSpec::Svd { max_degree: d }))
        .chain(std::iter::once(EstimatorSpec::Naive))
        .collect();
    let norms = [Lp::Finite(1.0), Lp::Finite(2.0), Lp::Infinity];
    let t0 = std::time::Instant::now();
    let stats = sweep_errors(&engine, &risk, &candidates, &norms, 50, 7);
    println!("one epsilon cell (50 x 14): {:?}; needlet J3 p2 mean {:.4}", t0.elapsed(), stats[0][1].0);
}
