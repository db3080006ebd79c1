//! Tight-frame analysis and synthesis with mother needlets.
//!
//! For coefficient vectors of degree < 2^{j_max} the band windows telescope
//! exactly, so analysis followed by synthesis is the identity and the
//! Parseval identity holds up to cubature roundoff. The level -1 atom is the
//! unit-normalized constant 1/sqrt(pi); its coefficient is exactly the
//! (0,0,1) coefficient of the input.

use super::atoms::{AtomKind, NeedletLevel};
use super::CutoffKind;
use crate::error::{Error, Result};
use crate::svd::{radial_factor, CoefficientVector, SvdIndex};
use std::f64::consts::PI;

/// Per-level needlet coefficients beta_{j,xi}.
#[derive(Debug, Clone)]
pub struct FrameCoefficients {
    pub minus_one: f64,
    /// levels[j][atom] for j = 0..=j_max.
    pub levels: Vec<Vec<f64>>,
}

impl FrameCoefficients {
    pub fn j_max(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// Total squared mass, including the level -1 coefficient.
    pub fn norm_sq(&self) -> f64 {
        self.minus_one * self.minus_one
            + self
                .levels
                .iter()
                .map(|l| l.iter().map(|b| b * b).sum::<f64>())
                .sum::<f64>()
    }
}

/// Mother-needlet frame over levels -1, 0, ..., j_max.
pub struct NeedletFrame {
    levels: Vec<NeedletLevel>,
}

impl NeedletFrame {
    pub fn new(j_max: u32, kind: CutoffKind) -> Self {
        let levels = (0..=j_max).map(|j| NeedletLevel::new(j, kind)).collect();
        Self { levels }
    }

    pub fn levels(&self) -> &[NeedletLevel] {
        &self.levels
    }

    pub fn j_max(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// Computes beta_{j,xi} = <f, psi_{j,xi}> for every atom. The input
    /// degree must stay below 2^{j_max} so no band is lost.
    pub fn analyze(&self, c: &CoefficientVector) -> Result<FrameCoefficients> {
        let j_max = self.j_max();
        if c.max_degree() >= (1u32 << j_max) && c.max_degree() > 0 {
            return Err(Error::DegreeTooHigh { degree: c.max_degree(), level: j_max });
        }
        let levels = self
            .levels
            .iter()
            .map(|level| analyze_level(level, c))
            .collect();
        Ok(FrameCoefficients { minus_one: c.values()[0], levels })
    }

    /// Adjoint of `analyze`: accumulates beta against the atom coefficients.
    pub fn synthesize(&self, fc: &FrameCoefficients, max_degree: u32) -> CoefficientVector {
        let mut out = CoefficientVector::zeros(max_degree);
        out.values_mut()[0] = fc.minus_one;
        for (level, betas) in self.levels.iter().zip(&fc.levels) {
            synthesize_level(level, betas, &mut out);
        }
        out
    }
}

/// One-call analysis on a freshly built frame.
pub fn frame_analyze(
    c: &CoefficientVector,
    j_max: u32,
    kind: CutoffKind,
) -> Result<FrameCoefficients> {
    NeedletFrame::new(j_max, kind).analyze(c)
}

/// One-call synthesis on a freshly built frame.
pub fn frame_synthesize(
    fc: &FrameCoefficients,
    max_degree: u32,
    kind: CutoffKind,
) -> CoefficientVector {
    NeedletFrame::new(fc.j_max(), kind).synthesize(fc, max_degree)
}

/// Angular orders l with window-weighted radial sums at one ring radius:
/// A_l = sum_jj w^{1/2}(k) R_{k,l}(r) c_{k,l,cos}, B_l likewise for sine.
/// beta at angle theta_q is then sqrt(omega) sum_l (A_l cos + B_l sin).
pub(crate) fn analyze_level(level: &NeedletLevel, c: &CoefficientVector) -> Vec<f64> {
    analyze_level_kind(level, AtomKind::Mother, c)
}

pub(crate) fn analyze_level_kind(
    level: &NeedletLevel,
    kind: AtomKind,
    c: &CoefficientVector,
) -> Vec<f64> {
    let max_deg = level.max_active_degree(kind).min(c.max_degree());
    if (0..=max_deg).all(|k| level.window_sqrt(kind, k) == 0.0) {
        return vec![0.0; level.n_atoms()];
    }
    let mut betas = vec![0.0; level.n_atoms()];
    for ring in level.rule().rings() {
        let (a_l, b_l) = ring_profiles(level, kind, c, ring.radius, max_deg);
        let sqrt_w = ring.node_weight.sqrt();
        for q in 0..ring.n_theta {
            let theta = 2.0 * PI * q as f64 / ring.n_theta as f64;
            let mut acc = 0.0;
            for l in 0..=max_deg as usize {
                if a_l[l] != 0.0 || b_l[l] != 0.0 {
                    let lt = l as f64 * theta;
                    acc += a_l[l] * lt.cos() + b_l[l] * lt.sin();
                }
            }
            betas[ring.start + q] = sqrt_w * acc;
        }
    }
    betas
}

pub(crate) fn synthesize_level(
    level: &NeedletLevel,
    betas: &[f64],
    out: &mut CoefficientVector,
) {
    synthesize_level_kind(level, AtomKind::Mother, betas, out)
}

pub(crate) fn synthesize_level_kind(
    level: &NeedletLevel,
    kind: AtomKind,
    betas: &[f64],
    out: &mut CoefficientVector,
) {
    let max_deg = level.max_active_degree(kind).min(out.max_degree());
    if (0..=max_deg).all(|k| level.window_sqrt(kind, k) == 0.0) {
        return;
    }
    for ring in level.rule().rings() {
        // accumulate the angular transform of betas on this ring
        let mut a_acc = vec![0.0; max_deg as usize + 1];
        let mut b_acc = vec![0.0; max_deg as usize + 1];
        let sqrt_w = ring.node_weight.sqrt();
        for q in 0..ring.n_theta {
            let beta = betas[ring.start + q];
            if beta == 0.0 {
                continue;
            }
            let theta = 2.0 * PI * q as f64 / ring.n_theta as f64;
            for l in 0..=max_deg as usize {
                let lt = l as f64 * theta;
                a_acc[l] += beta * lt.cos();
                b_acc[l] += beta * lt.sin();
            }
        }
        for l in 0..=max_deg {
            let cl = if l == 0 { 1.0 / (2.0 * PI).sqrt() } else { 1.0 / PI.sqrt() };
            let mut jj = 0u32;
            loop {
                let k = l + 2 * jj;
                if k > max_deg {
                    break;
                }
                let w = level.window_sqrt(kind, k);
                if w != 0.0 {
                    let rf = radial_factor(k, l, ring.radius);
                    let cos_idx = SvdIndex::new(k, l, crate::svd::Harmonic::Cos).unwrap();
                    let add = sqrt_w * w * rf * cl;
                    out.values_mut()[cos_idx.rank()] += add * a_acc[l as usize];
                    if l > 0 {
                        let sin_idx = SvdIndex::new(k, l, crate::svd::Harmonic::Sin).unwrap();
                        out.values_mut()[sin_idx.rank()] += add * b_acc[l as usize];
                    }
                }
                jj += 1;
            }
        }
    }
}

fn ring_profiles(
    level: &NeedletLevel,
    kind: AtomKind,
    c: &CoefficientVector,
    radius: f64,
    max_deg: u32,
) -> (Vec<f64>, Vec<f64>) {
    let mut a_l = vec![0.0; max_deg as usize + 1];
    let mut b_l = vec![0.0; max_deg as usize + 1];
    for l in 0..=max_deg {
        let cl = if l == 0 { 1.0 / (2.0 * PI).sqrt() } else { 1.0 / PI.sqrt() };
        let mut jj = 0u32;
        loop {
            let k = l + 2 * jj;
            if k > max_deg {
                break;
            }
            let w = level.window_sqrt(kind, k);
            if w != 0.0 {
                let rf = radial_factor(k, l, radius);
                let cos_idx = SvdIndex::new(k, l, crate::svd::Harmonic::Cos).unwrap();
                a_l[l as usize] += w * rf * cl * c.values()[cos_idx.rank()];
                if l > 0 {
                    let sin_idx = SvdIndex::new(k, l, crate::svd::Harmonic::Sin).unwrap();
                    b_l[l as usize] += w * rf * cl * c.values()[sin_idx.rank()];
                }
            }
            jj += 1;
        }
    }
    (a_l, b_l)
}
