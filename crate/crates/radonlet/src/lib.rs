//! Reconstruction of functions on the unit disk from noisy Radon-transform
//! observations, via needlet-smoothed inversion in the Radon SVD basis.
//!
//! The crate provides the orthogonal-polynomial layer, the SVD pair
//! diagonalizing the Radon transform, needlet frames with positive-weight
//! disk cubature, the Shepp-Logan test object with its analytic sinogram,
//! white-noise and regression observation models, the linear estimators
//! (needlet, truncated SVD, naive inversion), and an Lp risk benchmark
//! harness. The `radonlet` binary exposes all of it on the command line.

pub mod error;
pub mod orthopoly;
pub mod svd;
pub mod transform;
pub mod phantom;
pub mod estimator;
pub mod bench;
pub mod io;
pub mod selftest;
pub mod needlet;

pub use error::{Error, Result};

/// Exponent of an Lp norm, finite or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lp {
    Finite(f64),
    Infinity,
}

impl Lp {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "oo" => Ok(Lp::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid norm exponent: {other}")))?;
                if p < 1.0 {
                    return Err(Error::InvalidParam(format!("norm exponent {p} < 1")));
                }
                Ok(Lp::Finite(p))
            }
        }
    }
}

impl std::fmt::Display for Lp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Lp::Finite(p) => {
                if p.fract() == 0.0 {
                    write!(f, "{}", *p as u64)
                } else {
                    write!(f, "{p}")
                }
            }
            Lp::Infinity => write!(f, "inf"),
        }
    }
}
