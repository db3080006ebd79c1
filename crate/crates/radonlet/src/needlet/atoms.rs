//! Father and mother needlet atoms on the disk.
//!
//! An atom at level j and cubature node xi is sqrt(omega_xi) K_j(x, xi),
//! where K_j is the square-root-windowed kernel sum_k w(k/2^j)^{1/2} L_k.
//! The father family uses the low-pass window a, the mother family the band
//! window b. Because the backing rule is a product rule, atoms on the same
//! ring are rotates of each other; all norm computations exploit that.

use super::cubature::{cubature_disk, level_rule, CubatureRule};
use super::{metric_d, CutoffFunction, CutoffKind};
use crate::error::{Error, Result};
use crate::orthopoly::{jacobi_eval, JacobiParams};
use crate::svd::{radial_factor, DiskPoint, SvdIndex};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Father,
    Mother,
}

/// One needlet atom: level, node, node weight, and window family.
#[derive(Debug, Clone, Copy)]
pub struct NeedletAtom {
    pub level: u32,
    pub kind: AtomKind,
    pub node: DiskPoint,
    pub weight: f64,
    /// Ring and angular position of the node within the level rule.
    pub ring: usize,
    pub slot: usize,
}

/// All atoms of one level share the cut-off and the backing cubature rule.
#[derive(Debug, Clone)]
pub struct NeedletLevel {
    j: u32,
    cutoff: CutoffFunction,
    rule: CubatureRule,
}

impl NeedletLevel {
    /// Builds the level on the standard level rule (exact for degree 2^{j+2}).
    pub fn new(j: u32, kind: CutoffKind) -> Self {
        Self { j, cutoff: super::build_cutoff(kind), rule: level_rule(j) }
    }

    /// Uses a caller-provided rule; it must be exact at least to 2^{j+2}.
    pub fn with_rule(j: u32, kind: CutoffKind, rule: CubatureRule) -> Result<Self> {
        let need = 1u32 << (j + 2);
        if rule.exact_degree() < need {
            return Err(Error::InsufficientExactness {
                need,
                got: rule.exact_degree(),
                context: format!("needlet level {j}"),
            });
        }
        Ok(Self { j, cutoff: super::build_cutoff(kind), rule })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn cutoff(&self) -> CutoffFunction {
        self.cutoff
    }

    pub fn rule(&self) -> &CubatureRule {
        &self.rule
    }

    pub fn n_atoms(&self) -> usize {
        self.rule.len()
    }

    /// Highest degree with a nonzero window: 2^j - 1 for father atoms,
    /// 2^{j+1} - 1 for mother atoms.
    pub fn max_active_degree(&self, kind: AtomKind) -> u32 {
        match kind {
            AtomKind::Father => (1u32 << self.j) - 1,
            AtomKind::Mother => (1u32 << (self.j + 1)) - 1,
        }
    }

    /// Square root of the spectral window at degree k.
    pub fn window_sqrt(&self, kind: AtomKind, k: u32) -> f64 {
        let t = k as f64 / 2f64.powi(self.j as i32);
        match kind {
            AtomKind::Father => self.cutoff.a(t).sqrt(),
            AtomKind::Mother => self.cutoff.b(t).sqrt(),
        }
    }

    pub fn atom(&self, node_index: usize, kind: AtomKind) -> NeedletAtom {
        let (ring, slot) = self.locate(node_index);
        NeedletAtom {
            level: self.j,
            kind,
            node: self.rule.nodes()[node_index],
            weight: self.rule.weights()[node_index],
            ring,
            slot,
        }
    }

    pub fn atoms(&self, kind: AtomKind) -> impl Iterator<Item = NeedletAtom> + '_ {
        (0..self.n_atoms()).map(move |i| self.atom(i, kind))
    }

    fn locate(&self, node_index: usize) -> (usize, usize) {
        let rings = self.rule.rings();
        let ring = rings.partition_point(|r| r.start <= node_index) - 1;
        (ring, node_index - rings[ring].start)
    }

    /// Pointwise atom value sqrt(omega) sum_k w^{1/2}(k/2^j) L_k(x, xi).
    pub fn eval(&self, atom: &NeedletAtom, x: DiskPoint) -> f64 {
        let dtheta = x.theta - atom.node.theta;
        atom.weight.sqrt() * self.kernel_field(atom.kind, atom.node.r, x.r, dtheta)
    }

    /// Inner product of the atom with a basis element:
    /// <f_{k,l,i}, atom> = sqrt(omega) w^{1/2}(k/2^j) f_{k,l,i}(xi).
    pub fn gamma(&self, atom: &NeedletAtom, idx: SvdIndex) -> f64 {
        let w = self.window_sqrt(atom.kind, idx.k());
        if w == 0.0 {
            return 0.0;
        }
        atom.weight.sqrt() * w * crate::svd::eval_f(idx, atom.node)
    }

    /// Exact squared L2 norm: omega * sum_k w(k/2^j) L_k(xi, xi).
    pub fn l2_norm_sq(&self, atom: &NeedletAtom) -> f64 {
        let r = atom.node.r;
        let mut acc = 0.0;
        for k in 0..=self.max_active_degree(atom.kind) {
            let w = self.window_sqrt(atom.kind, k);
            if w == 0.0 {
                continue;
            }
            let mut diag = 0.0;
            let mut l = k % 2;
            loop {
                let cl2 = if l == 0 { 1.0 / (2.0 * PI) } else { 1.0 / PI };
                let rf = radial_factor(k, l, r);
                diag += rf * rf * cl2;
                l += 2;
                if l > k {
                    break;
                }
            }
            acc += w * w * diag;
        }
        atom.weight * acc
    }

    /// Windowed kernel K_j((rx, dtheta), (rt, 0)) evaluated through the
    /// angular-order decomposition sum_l G_l(rx) cos(l dtheta).
    fn kernel_field(&self, kind: AtomKind, rt: f64, rx: f64, dtheta: f64) -> f64 {
        let max_deg = self.max_active_degree(kind);
        let profile = self.angular_profile(kind, rt, rx, max_deg);
        let mut acc = 0.0;
        for (l, g) in profile.iter().enumerate() {
            if *g != 0.0 {
                acc += g * (l as f64 * dtheta).cos();
            }
        }
        acc
    }

    /// G_l(rx) for l = 0..=max_deg; field(x) = sum_l G_l cos(l dtheta).
    fn angular_profile(&self, kind: AtomKind, rt: f64, rx: f64, max_deg: u32) -> Vec<f64> {
        let mut out = vec![0.0; max_deg as usize + 1];
        let ut = 2.0 * rt * rt - 1.0;
        let ux = 2.0 * rx * rx - 1.0;
        for l in 0..=max_deg {
            let params = JacobiParams { alpha: 0.0, beta: l as f64 };
            let cl2 = if l == 0 { 1.0 / (2.0 * PI) } else { 1.0 / PI };
            let rl = (rx * rt).powi(l as i32);
            if rl == 0.0 && l > 0 {
                continue;
            }
            // run both Jacobi recurrences jointly over jj
            let (mut pt_prev, mut px_prev) = (0.0, 0.0);
            let (mut pt, mut px) = (1.0, 1.0);
            let mut jj = 0u32;
            let mut acc = 0.0;
            loop {
                let k = l + 2 * jj;
                if k > max_deg {
                    break;
                }
                let w = self.window_sqrt(kind, k);
                if w != 0.0 {
                    acc += w * (2.0 * k as f64 + 2.0) * pt * px;
                }
                // advance P_{jj} -> P_{jj+1} for params (0, l)
                let step = |p: f64, p_prev: f64, u: f64| -> f64 {
                    let m = jj as f64 + 1.0;
                    let (a, b) = (0.0, l as f64);
                    if jj == 0 {
                        ((a + b + 2.0) * u + a - b) / 2.0
                    } else {
                        let c = 2.0 * m + a + b;
                        let num1 = (c - 1.0) * (c * (c - 2.0) * u + a * a - b * b);
                        let num2 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * c;
                        let den = 2.0 * m * (m + a + b) * (c - 2.0);
                        (num1 * p - num2 * p_prev) / den
                    }
                };
                let pt_next = step(pt, pt_prev, ut);
                let px_next = step(px, px_prev, ux);
                pt_prev = pt;
                pt = pt_next;
                px_prev = px;
                px = px_next;
                jj += 1;
            }
            debug_assert!({
                let check = jacobi_eval(0, params, ut);
                check == 1.0
            });
            out[l as usize] = acc * cl2 * rl;
        }
        out
    }

    /// Lp norm of one atom. p = 2 is exact (coefficient identity); even
    /// integer p uses a cubature of sufficient degree; everything else falls
    /// back to a dense polar grid of size 2^{j+4} x 2^{j+4}.
    pub fn lp_norm(&self, atom: &NeedletAtom, p: crate::Lp) -> f64 {
        match p {
            crate::Lp::Finite(q) if q == 2.0 => self.l2_norm_sq(atom).sqrt(),
            crate::Lp::Finite(q) if q > 2.0 && q.fract() == 0.0 && (q as u32) % 2 == 0 => {
                self.even_p_norm(atom, q as u32)
            }
            crate::Lp::Finite(q) => self.grid_norms(atom, &[q]).0[0].powf(1.0 / q),
            crate::Lp::Infinity => self.grid_norms(atom, &[]).1,
        }
    }

    fn even_p_norm(&self, atom: &NeedletAtom, p: u32) -> f64 {
        let max_deg = self.max_active_degree(atom.kind);
        let deg = p * (max_deg + 1);
        let rule = cubature_disk(deg);
        let n_angles = rule.rings()[0].n_theta;
        let cos_tab = cos_table(max_deg as usize, n_angles);
        let mut total = 0.0;
        let sqrt_w = atom.weight.sqrt();
        let mut row = vec![0.0; n_angles];
        for ring in rule.rings() {
            debug_assert_eq!(ring.n_theta, n_angles);
            let profile = self.angular_profile(atom.kind, atom.node.r, ring.radius, max_deg);
            accumulate_row(&profile, &cos_tab, &mut row);
            let mut ring_sum = 0.0;
            for &v in &row {
                ring_sum += (sqrt_w * v).powi(p as i32);
            }
            total += ring.node_weight * ring_sum;
        }
        total.powf(1.0 / p as f64)
    }

    /// Riemann sums of |atom|^p on the dense polar grid, plus the grid max.
    /// Atom norms are rotation invariant, so the node is taken at angle zero.
    fn grid_norms(&self, atom: &NeedletAtom, ps: &[f64]) -> (Vec<f64>, f64) {
        let n = (1usize << (self.j + 4)).min(4096);
        let sqrt_w = atom.weight.sqrt();
        let max_deg = self.max_active_degree(atom.kind);
        let cos_tab = cos_table(max_deg as usize, n);
        let mut sums = vec![0.0; ps.len()];
        let mut max_abs: f64 = 0.0;
        let mut row = vec![0.0; n];
        for a in 0..n {
            let r = (a as f64 + 0.5) / n as f64;
            let cell = r * (1.0 / n as f64) * (2.0 * PI / n as f64);
            let profile = self.angular_profile(atom.kind, atom.node.r, r, max_deg);
            accumulate_row(&profile, &cos_tab, &mut row);
            for &f in &row {
                let v = (sqrt_w * f).abs();
                max_abs = max_abs.max(v);
                for (i, &p) in ps.iter().enumerate() {
                    sums[i] += cell * pow_p(v, p);
                }
            }
        }
        (sums, max_abs)
    }

    /// Ratio of the far-field maximum (metric distance >= threshold from the
    /// node) to the global maximum of |atom| on the dense grid.
    pub fn far_field_ratio(&self, atom: &NeedletAtom, threshold: f64) -> f64 {
        let n = (1usize << (self.j + 4)).min(4096);
        let sqrt_w = atom.weight.sqrt();
        let max_deg = self.max_active_degree(atom.kind);
        let node = DiskPoint { r: atom.node.r, theta: 0.0 };
        let cos_tab = cos_table(max_deg as usize, n);
        let mut global: f64 = 0.0;
        let mut far: f64 = 0.0;
        let mut row = vec![0.0; n];
        for a in 0..n {
            let r = (a as f64 + 0.5) / n as f64;
            let profile = self.angular_profile(atom.kind, atom.node.r, r, max_deg);
            accumulate_row(&profile, &cos_tab, &mut row);
            for (b, &f) in row.iter().enumerate() {
                let theta = 2.0 * PI * b as f64 / n as f64;
                let v = (sqrt_w * f).abs();
                global = global.max(v);
                if metric_d(DiskPoint { r, theta }, node) >= threshold {
                    far = far.max(v);
                }
            }
        }
        far / global
    }

    /// sum over all atoms of the level of ||atom||_p^p for finite p, using
    /// the rotation invariance along rings.
    pub fn stability_sum(&self, kind: AtomKind, p: f64) -> f64 {
        assert!(p >= 1.0 && p.is_finite());
        use rayon::prelude::*;
        let rings: Vec<(usize, usize)> =
            self.rule.rings().iter().map(|r| (r.start, r.n_theta)).collect();
        rings
            .par_iter()
            .map(|&(start, n_theta)| {
                let atom = self.atom(start, kind);
                let norm_p = if p == 2.0 {
                    self.l2_norm_sq(&atom)
                } else if p > 2.0 && p.fract() == 0.0 && (p as u32) % 2 == 0 {
                    self.even_p_norm(&atom, p as u32).powf(p)
                } else {
                    self.grid_norms(&atom, &[p]).0[0]
                };
                norm_p * n_theta as f64
            })
            .sum()
    }

    /// Largest analytic coefficient-noise variance over the level's atoms for
    /// unit noise: max_xi sum_{k,l,i} gamma^2 / lambda_k^2.
    pub fn max_noise_variance(&self, kind: AtomKind) -> f64 {
        let mut worst: f64 = 0.0;
        for ring in self.rule.rings() {
            let atom = self.atom(ring.start, kind);
            worst = worst.max(self.noise_variance(&atom));
        }
        worst
    }

    /// sum_{k,l,i} (gamma^{j,xi}_{k,l,i} / lambda_k)^2 for the atom.
    pub fn noise_variance(&self, atom: &NeedletAtom) -> f64 {
        let r = atom.node.r;
        let mut acc = 0.0;
        for k in 0..=self.max_active_degree(atom.kind) {
            let w = self.window_sqrt(atom.kind, k);
            if w == 0.0 {
                continue;
            }
            let lam = crate::svd::singular_value_disk(k);
            let mut diag = 0.0;
            let mut l = k % 2;
            loop {
                let cl2 = if l == 0 { 1.0 / (2.0 * PI) } else { 1.0 / PI };
                let rf = radial_factor(k, l, r);
                diag += rf * rf * cl2;
                l += 2;
                if l > k {
                    break;
                }
            }
            acc += w * w * diag / (lam * lam);
        }
        atom.weight * acc
    }
}


/// cos(l theta_q) for l = 0..=max_l over n equispaced angles, packed [l][q].
fn cos_table(max_l: usize, n_angles: usize) -> Vec<f64> {
    let mut tab = vec![0.0; (max_l + 1) * n_angles];
    for l in 0..=max_l {
        for q in 0..n_angles {
            tab[l * n_angles + q] = (l as f64 * 2.0 * PI * q as f64 / n_angles as f64).cos();
        }
    }
    tab
}

/// row[q] = sum_l profile[l] cos(l theta_q).
fn accumulate_row(profile: &[f64], cos_tab: &[f64], row: &mut [f64]) {
    let n = row.len();
    row.fill(0.0);
    for (l, &g) in profile.iter().enumerate() {
        if g == 0.0 {
            continue;
        }
        if l == 0 {
            for v in row.iter_mut() {
                *v += g;
            }
        } else {
            for (v, c) in row.iter_mut().zip(&cos_tab[l * n..(l + 1) * n]) {
                *v += g * c;
            }
        }
    }
}

fn pow_p(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v
    } else if p == 2.0 {
        v * v
    } else if p.fract() == 0.0 && p <= 16.0 {
        v.powi(p as i32)
    } else {
        v.powf(p)
    }
}

/// Convenience wrapper matching the flat operation list: builds a level on
/// the standard rule and evaluates one atom.
pub fn needlet_eval(level: &NeedletLevel, atom: &NeedletAtom, x: DiskPoint) -> f64 {
    level.eval(atom, x)
}
