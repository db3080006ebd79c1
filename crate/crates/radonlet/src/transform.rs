//! Fast projection and synthesis between point values on a ring-structured
//! cubature rule and SVD-basis coefficients.
//!
//! The basis is tensorial in polar coordinates, so both directions factor
//! through one angular transform per ring followed by radial contractions.
//! This turns the naive O(nodes x coefficients) cost into
//! O(nodes x max_degree + rings x coefficients).

use crate::error::{Error, Result};
use crate::needlet::CubatureRule;
use crate::svd::{
    coefficient_count, CoefficientVector, DiskPoint, Harmonic, SvdIndex,
};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Rank of the (k, l, cos) coefficient; the sine partner sits at rank + 1.
fn cos_rank(k: u32, l: u32) -> usize {
    SvdIndex::new(k, l, Harmonic::Cos).expect("valid (k, l) pair").rank()
}

/// Calls sink(l, k, radial_value) for every pair l <= k <= max_degree with
/// k = l + 2 jj, sharing the Jacobi recurrence across jj.
fn for_each_radial_pair(max_degree: u32, r: f64, mut sink: impl FnMut(u32, u32, f64)) {
    let u = 2.0 * r * r - 1.0;
    for l in 0..=max_degree {
        let rl = r.powi(l as i32);
        if rl == 0.0 && l > 0 {
            break;
        }
        let (mut p_prev, mut p) = (0.0f64, 1.0f64);
        let mut jj = 0u32;
        loop {
            let k = l + 2 * jj;
            if k > max_degree {
                break;
            }
            sink(l, k, (2.0 * k as f64 + 2.0).sqrt() * p * rl);
            // advance the (0, l) Jacobi recurrence
            let m = jj as f64 + 1.0;
            let b = l as f64;
            let p_next = if jj == 0 {
                ((b + 2.0) * u - b) / 2.0
            } else {
                let c = 2.0 * m + b;
                let num1 = (c - 1.0) * (c * (c - 2.0) * u - b * b);
                let num2 = 2.0 * (m - 1.0) * (m + b - 1.0) * c;
                (num1 * p - num2 * p_prev) / (2.0 * m * (m + b) * (c - 2.0))
            };
            p_prev = p;
            p = p_next;
            jj += 1;
        }
    }
}

/// Angular normalizer c_l of the harmonic factor.
fn c_l(l: u32) -> f64 {
    if l == 0 {
        1.0 / (2.0 * PI).sqrt()
    } else {
        1.0 / PI.sqrt()
    }
}

/// Projects point values given at the rule nodes onto coefficients up to
/// max_degree: c = sum omega f(node) basis(node).
pub fn project_on_rule(
    rule: &CubatureRule,
    max_degree: u32,
    values: &[f64],
) -> Result<CoefficientVector> {
    if values.len() != rule.len() {
        return Err(Error::InvalidParam(format!(
            "expected {} node values, got {}",
            rule.len(),
            values.len()
        )));
    }
    let partials: Vec<Vec<f64>> = rule
        .rings()
        .par_iter()
        .map(|ring| {
            let mut acc = vec![0.0; coefficient_count(max_degree)];
            let m = ring.n_theta;
            let ring_vals = &values[ring.start..ring.start + m];
            // angular transform: a_l = sum_q v_q cos(l theta_q), b_l likewise
            let max_l = max_degree as usize;
            let mut a_l = vec![0.0; max_l + 1];
            let mut b_l = vec![0.0; max_l + 1];
            for (q, &v) in ring_vals.iter().enumerate() {
                let theta = 2.0 * PI * q as f64 / m as f64;
                for l in 0..=max_l {
                    let lt = l as f64 * theta;
                    a_l[l] += v * lt.cos();
                    b_l[l] += v * lt.sin();
                }
            }
            let w = ring.node_weight;
            for_each_radial_pair(max_degree, ring.radius, |l, k, radial| {
                let base = w * radial * c_l(l);
                let rank = cos_rank(k, l);
                acc[rank] += base * a_l[l as usize];
                if l > 0 {
                    acc[rank + 1] += base * b_l[l as usize];
                }
            });
            acc
        })
        .collect();

    let mut total = vec![0.0; coefficient_count(max_degree)];
    for part in partials {
        for (t, p) in total.iter_mut().zip(&part) {
            *t += p;
        }
    }
    CoefficientVector::from_values(max_degree, total)
}

/// Evaluates the synthesis sum c . basis at one point.
pub fn synthesize_at_point(c: &CoefficientVector, p: DiskPoint) -> f64 {
    let max_degree = c.max_degree();
    let mut s_cos = vec![0.0; max_degree as usize + 1];
    let mut s_sin = vec![0.0; max_degree as usize + 1];
    for_each_radial_pair(max_degree, p.r, |l, k, radial| {
        let rank = cos_rank(k, l);
        s_cos[l as usize] += radial * c.values()[rank];
        if l > 0 {
            s_sin[l as usize] += radial * c.values()[rank + 1];
        }
    });
    let mut acc = 0.0;
    for l in 0..=max_degree as usize {
        let lt = l as f64 * p.theta;
        acc += c_l(l as u32) * (s_cos[l] * lt.cos() + s_sin[l] * lt.sin());
    }
    acc
}

/// Precomputed tables for repeated synthesis of degree-bounded coefficient
/// vectors at the nodes of one ring rule. Holds the radial factors
/// (rings x pairs) and the per-ring trig tables.
pub struct RingSynthesizer {
    max_degree: u32,
    rings: Vec<RingGeom>,
    /// radial[ring][pair] in the pair order of `for_each_radial_pair`.
    radial: Vec<f64>,
    n_pairs: usize,
    /// pair index of (l, jj=0); pairs for fixed l are consecutive in jj.
    l_offsets: Vec<usize>,
    trig_tables: Vec<TrigTable>,
}

struct RingGeom {
    n_theta: usize,
    start: usize,
    /// Index into the shared trig tables (rings with equal angular counts
    /// share one table).
    trig: usize,
}

struct TrigTable {
    /// cos(l theta_q), sin(l theta_q) packed as [l][q].
    cos_tab: Vec<f64>,
    sin_tab: Vec<f64>,
}

impl RingSynthesizer {
    pub fn new(rule: &CubatureRule, max_degree: u32) -> Self {
        let mut l_offsets = vec![0usize; max_degree as usize + 2];
        for l in 0..=max_degree {
            let count = (max_degree - l) / 2 + 1;
            l_offsets[l as usize + 1] = l_offsets[l as usize] + count as usize;
        }
        let n_pairs = l_offsets[max_degree as usize + 1];

        let radial: Vec<f64> = rule
            .rings()
            .par_iter()
            .flat_map_iter(|ring| {
                let mut row = vec![0.0; n_pairs];
                let mut cursor = vec![0usize; max_degree as usize + 1];
                for_each_radial_pair(max_degree, ring.radius, |l, _k, value| {
                    let at = l_offsets[l as usize] + cursor[l as usize];
                    row[at] = value;
                    cursor[l as usize] += 1;
                });
                row
            })
            .collect();

        let max_l = max_degree as usize;
        let mut trig_of_count: std::collections::HashMap<usize, usize> =
            std::collections::HashMap::new();
        let mut trig_tables: Vec<TrigTable> = Vec::new();
        let rings = rule
            .rings()
            .iter()
            .map(|ring| {
                let m = ring.n_theta;
                let trig = *trig_of_count.entry(m).or_insert_with(|| {
                    let mut cos_tab = vec![0.0; (max_l + 1) * m];
                    let mut sin_tab = vec![0.0; (max_l + 1) * m];
                    for l in 0..=max_l {
                        for q in 0..m {
                            let lt = l as f64 * 2.0 * PI * q as f64 / m as f64;
                            cos_tab[l * m + q] = lt.cos();
                            sin_tab[l * m + q] = lt.sin();
                        }
                    }
                    trig_tables.push(TrigTable { cos_tab, sin_tab });
                    trig_tables.len() - 1
                });
                RingGeom { n_theta: m, start: ring.start, trig }
            })
            .collect();

        Self { max_degree, rings, radial, n_pairs, l_offsets, trig_tables }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Writes the synthesis values at every node of ring `t` into `out`
    /// (length n_theta of that ring). `c` may have any degree <= max_degree.
    pub fn synthesize_ring(&self, t: usize, c: &CoefficientVector, out: &mut [f64]) {
        let geom = &self.rings[t];
        let m = geom.n_theta;
        debug_assert_eq!(out.len(), m);
        let deg = c.max_degree().min(self.max_degree);
        let radial = &self.radial[t * self.n_pairs..(t + 1) * self.n_pairs];
        out.fill(0.0);
        for l in 0..=deg {
            let mut s_cos = 0.0;
            let mut s_sin = 0.0;
            let base = self.l_offsets[l as usize];
            let mut jj = 0usize;
            loop {
                let k = l + 2 * jj as u32;
                if k > deg {
                    break;
                }
                let rank = cos_rank(k, l);
                let rv = radial[base + jj];
                s_cos += rv * c.values()[rank];
                if l > 0 {
                    s_sin += rv * c.values()[rank + 1];
                }
                jj += 1;
            }
            s_cos *= c_l(l);
            s_sin *= c_l(l);
            if s_cos == 0.0 && s_sin == 0.0 {
                continue;
            }
            let tab = &self.trig_tables[geom.trig];
            let cos_row = &tab.cos_tab[l as usize * m..(l as usize + 1) * m];
            let sin_row = &tab.sin_tab[l as usize * m..(l as usize + 1) * m];
            if l == 0 {
                for v in out.iter_mut() {
                    *v += s_cos;
                }
            } else {
                // two contiguous axpy passes keep the loop vectorizable
                if s_cos != 0.0 {
                    for (v, c) in out.iter_mut().zip(cos_row) {
                        *v += s_cos * c;
                    }
                }
                if s_sin != 0.0 {
                    for (v, s) in out.iter_mut().zip(sin_row) {
                        *v += s_sin * s;
                    }
                }
            }
        }
    }

    pub fn n_rings(&self) -> usize {
        self.rings.len()
    }

    pub fn ring_start(&self, t: usize) -> usize {
        self.rings[t].start
    }

    pub fn ring_len(&self, t: usize) -> usize {
        self.rings[t].n_theta
    }
}
