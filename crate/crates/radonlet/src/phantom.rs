//! Piecewise-constant test objects built from ellipses, with an analytic
//! Radon transform. Ships the classical head phantom in its original and
//! high-contrast variants.

use crate::error::{Error, Result};
use crate::needlet::CubatureRule;
use crate::svd::{CoefficientVector, DiskPoint};
use crate::transform::project_on_rule;
use rayon::prelude::*;

/// One constant-density ellipse, contained in the closed unit disk.
/// Densities are additive where ellipses overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center_x: f64,
    pub center_y: f64,
    pub semi_a: f64,
    pub semi_b: f64,
    /// Rotation of the a-axis, radians counterclockwise.
    pub phi: f64,
    pub density: f64,
}

impl Ellipse {
    pub fn new(
        center_x: f64,
        center_y: f64,
        semi_a: f64,
        semi_b: f64,
        phi: f64,
        density: f64,
    ) -> Result<Self> {
        if semi_a <= 0.0 || semi_b <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "ellipse semi-axes must be positive, got ({semi_a}, {semi_b})"
            )));
        }
        // conservative containment check: center offset plus the larger axis
        let reach = center_x.hypot(center_y) + semi_a.max(semi_b);
        if reach > 1.0 + 1e-9 {
            return Err(Error::InvalidParam(format!(
                "ellipse reaches {reach:.6} > 1, outside the unit disk"
            )));
        }
        Ok(Self { center_x, center_y, semi_a, semi_b, phi, density })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (dx, dy) = (x - self.center_x, y - self.center_y);
        let (c, s) = (self.phi.cos(), self.phi.sin());
        let xr = c * dx + s * dy;
        let yr = -s * dx + c * dy;
        (xr / self.semi_a).powi(2) + (yr / self.semi_b).powi(2) <= 1.0
    }

    /// Chord integral of the ellipse along the line <y, e_theta> = s.
    pub fn radon(&self, theta: f64, s: f64) -> f64 {
        // shift the line to the ellipse frame, then rotate
        let s_shifted = s - (self.center_x * theta.cos() + self.center_y * theta.sin());
        let th = theta - self.phi;
        let a2 = (self.semi_a * th.cos()).powi(2) + (self.semi_b * th.sin()).powi(2);
        let rem = a2 - s_shifted * s_shifted;
        if rem <= 0.0 {
            return 0.0;
        }
        self.density * 2.0 * self.semi_a * self.semi_b * rem.sqrt() / a2
    }
}

/// Additive union of ellipses.
#[derive(Debug, Clone, PartialEq)]
pub struct Phantom {
    ellipses: Vec<Ellipse>,
}

/// Density convention of the head phantom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhantomVariant {
    /// The original table (skull density 2, interior offsets -0.98, 0.01...).
    Original,
    /// The widely used high-contrast table (densities 1, -0.8, 0.1...).
    Modified,
}

impl Phantom {
    pub fn new(ellipses: Vec<Ellipse>) -> Result<Self> {
        if ellipses.is_empty() {
            return Err(Error::InvalidParam("phantom needs at least one ellipse".into()));
        }
        Ok(Self { ellipses })
    }

    pub fn ellipses(&self) -> &[Ellipse] {
        &self.ellipses
    }

    /// Pointwise density: sum of the densities of the ellipses containing p.
    pub fn eval(&self, p: DiskPoint) -> f64 {
        let (x, y) = (p.x(), p.y());
        self.ellipses
            .iter()
            .filter(|e| e.contains(x, y))
            .map(|e| e.density)
            .sum()
    }

    /// Analytic Radon transform: sum of the per-ellipse chord integrals.
    pub fn radon(&self, theta: f64, s: f64) -> f64 {
        assert!(s.abs() <= 1.0, "|s| must be <= 1");
        self.ellipses.iter().map(|e| e.radon(theta, s)).sum()
    }

    /// Projects the phantom onto basis coefficients up to max_degree using
    /// the supplied rule, which must be exact at least to 4 x max_degree
    /// (safety factor for the discontinuous integrand).
    pub fn project_coefficients(
        &self,
        max_degree: u32,
        rule: &CubatureRule,
    ) -> Result<CoefficientVector> {
        if rule.exact_degree() < 4 * max_degree {
            return Err(Error::InsufficientExactness {
                need: 4 * max_degree,
                got: rule.exact_degree(),
                context: "phantom projection uses a 4x exactness margin".to_string(),
            });
        }
        let values: Vec<f64> = rule.nodes().par_iter().map(|&p| self.eval(p)).collect();
        project_on_rule(rule, max_degree, &values)
    }
}

/// The canonical ten-ellipse head phantom.
pub fn shepp_logan(variant: PhantomVariant) -> Phantom {
    // (cx, cy, a, b, phi_degrees)
    const GEOMETRY: [(f64, f64, f64, f64, f64); 10] = [
        (0.0, 0.0, 0.69, 0.92, 0.0),
        (0.0, -0.0184, 0.6624, 0.874, 0.0),
        (0.22, 0.0, 0.11, 0.31, -18.0),
        (-0.22, 0.0, 0.16, 0.41, 18.0),
        (0.0, 0.35, 0.21, 0.25, 0.0),
        (0.0, 0.1, 0.046, 0.046, 0.0),
        (0.0, -0.1, 0.046, 0.046, 0.0),
        (-0.08, -0.605, 0.046, 0.023, 0.0),
        (0.0, -0.605, 0.023, 0.023, 0.0),
        (0.06, -0.605, 0.023, 0.046, 0.0),
    ];
    const ORIGINAL: [f64; 10] =
        [2.0, -0.98, -0.02, -0.02, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01];
    const MODIFIED: [f64; 10] = [1.0, -0.8, -0.2, -0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1];

    let densities = match variant {
        PhantomVariant::Original => &ORIGINAL,
        PhantomVariant::Modified => &MODIFIED,
    };
    let ellipses = GEOMETRY
        .iter()
        .zip(densities)
        .map(|(&(cx, cy, a, b, phi_deg), &rho)| {
            Ellipse::new(cx, cy, a, b, phi_deg.to_radians(), rho)
                .expect("canonical table is inside the disk")
        })
        .collect();
    Phantom { ellipses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::needlet::cubature_disk;
    use crate::svd::radon_line_integral;

    #[test]
    fn canonical_table_has_ten_ellipses() {
        for variant in [PhantomVariant::Original, PhantomVariant::Modified] {
            assert_eq!(shepp_logan(variant).ellipses().len(), 10);
        }
    }

    #[test]
    fn eval_at_center_and_outside_skull() {
        let ph = shepp_logan(PhantomVariant::Original);
        // membership oracle: the center lies in the two big ellipses only
        let center = DiskPoint::new(0.0, 0.0).unwrap();
        assert!((ph.eval(center) - (2.0 - 0.98)).abs() < 1e-15);
        let outside = DiskPoint::new(0.99, 0.0).unwrap();
        assert_eq!(ph.eval(outside), 0.0);
    }

    #[test]
    fn circle_chord_length() {
        let disk = Phantom::new(vec![
            Ellipse::new(0.0, 0.0, 0.5, 0.5, 0.0, 1.0).unwrap(),
        ])
        .unwrap();
        assert!((disk.radon(1.1, 0.0) - 1.0).abs() < 1e-14); // 2 rho
        assert_eq!(disk.radon(0.0, 0.6), 0.0); // misses the circle
        assert_eq!(disk.radon(0.3, 1.0), 0.0); // tangent to the unit disk
    }

    #[test]
    fn analytic_matches_numeric_line_integrals() {
        use rayon::prelude::*;
        let ph = shepp_logan(PhantomVariant::Original);
        let mut state = 0x853c49e6748fea9bu64;
        let mut rand = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let lines: Vec<(f64, f64)> = (0..16)
            .map(|_| (rand() * std::f64::consts::TAU, rand() * 1.98 - 0.99))
            .collect();
        // jumps inside panels limit convergence to O(1/n), so the oracle
        // runs with a few million points per line
        let results: Vec<(f64, f64)> = lines
            .par_iter()
            .map(|&(theta, s)| {
                let analytic = ph.radon(theta, s);
                let numeric = radon_line_integral(|p| ph.eval(p), theta, s, 4_000_000);
                (analytic, numeric)
            })
            .collect();
        let worst =
            results.iter().map(|(a, n)| (a - n).abs()).fold(0.0f64, f64::max);
        let scale = results.iter().map(|(a, _)| a.abs()).fold(0.0f64, f64::max);
        assert!(worst <= 1e-6 * scale, "worst {worst} at scale {scale}");
    }

    #[test]
    fn constant_phantom_projects_onto_the_constant() {
        let one = Phantom::new(vec![
            Ellipse::new(0.0, 0.0, 1.0, 1.0, 0.0, 1.0).unwrap(),
        ])
        .unwrap();
        let rule = cubature_disk(32);
        let c = one.project_coefficients(8, &rule).unwrap();
        // <1, f_{0,0,1}> = integral of 1/sqrt(pi) over the disk = sqrt(pi)
        let expect = std::f64::consts::PI.sqrt();
        assert!((c.values()[0] - expect).abs() < 1e-9, "got {}", c.values()[0]);
        for v in &c.values()[1..] {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn projection_requires_exactness_margin() {
        let ph = shepp_logan(PhantomVariant::Original);
        let rule = cubature_disk(16);
        assert!(ph.project_coefficients(8, &rule).is_err());
        assert!(ph.project_coefficients(4, &rule).is_ok());
    }

    #[test]
    fn bessel_inequality_for_projection() {
        let ph = shepp_logan(PhantomVariant::Original);
        let rule = cubature_disk(128);
        let c = ph.project_coefficients(32, &rule).unwrap();
        let f_sq = rule.integrate(|p| ph.eval(p).powi(2));
        assert!(c.norm_sq() <= f_sq + 1e-9, "{} vs {}", c.norm_sq(), f_sq);
    }

    #[test]
    fn l1_projection_error_decays_with_degree() {
        let ph = shepp_logan(PhantomVariant::Original);
        let rule = cubature_disk(512);
        let synth_rule = cubature_disk(512);
        let values: Vec<f64> =
            synth_rule.nodes().iter().map(|&p| ph.eval(p)).collect();
        let mut prev = f64::INFINITY;
        for k in [32u32, 64, 128] {
            let c = ph.project_coefficients(k, &rule).unwrap();
            let synth = crate::transform::RingSynthesizer::new(&synth_rule, k);
            let mut err = 0.0;
            let mut buf = Vec::new();
            for t in 0..synth.n_rings() {
                buf.resize(synth.ring_len(t), 0.0);
                synth.synthesize_ring(t, &c, &mut buf);
                let start = synth.ring_start(t);
                let w = synth_rule.weights()[start];
                for (q, &v) in buf.iter().enumerate() {
                    err += w * (v - values[start + q]).abs();
                }
            }
            assert!(err < prev, "L1 error did not decay at K={k}: {err} vs {prev}");
            prev = err;
        }
    }

    #[test]
    fn ellipse_validation() {
        assert!(Ellipse::new(0.5, 0.5, 0.4, 0.4, 0.0, 1.0).is_err()); // reaches 1.107
        assert!(Ellipse::new(0.0, 0.0, 0.0, 0.5, 0.0, 1.0).is_err());
        assert!(Ellipse::new(0.3, 0.0, 0.3, 0.2, 1.0, -0.5).is_ok());
    }
}
