//! Jacobi and Gegenbauer polynomials: evaluation by three-term recurrence,
//! L2 normalization constants, and Gauss-Legendre quadrature nodes.
//!
//! All basis functions of the library reduce to these scalar evaluations.

use crate::error::{Error, Result};

/// Parameters (alpha, beta) of a Jacobi weight (1-t)^alpha (1+t)^beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0) || !(beta > -1.0) {
            return Err(Error::InvalidParam(format!(
                "jacobi parameters must satisfy alpha > -1 and beta > -1, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }
}

/// Gegenbauer parameter lambda, lambda > -1/2 and lambda != 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParam {
    pub lambda: f64,
}

impl GegenbauerParam {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > -0.5) || lambda == 0.0 {
            return Err(Error::InvalidParam(format!(
                "gegenbauer parameter must satisfy lambda > -1/2 and lambda != 0, got {lambda}"
            )));
        }
        Ok(Self { lambda })
    }
}

/// Evaluates P_n^{(alpha,beta)}(t) with the normalization P_n(1) = binom(n+alpha, n).
///
/// Forward three-term recurrence; stable for the (0, l) parameter range used by
/// the disk basis.
pub fn jacobi_eval(n: u32, params: JacobiParams, t: f64) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    if n == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = ((a + b + 2.0) * t + a - b) / 2.0;
    for m in 2..=n as u64 {
        let m = m as f64;
        let c = 2.0 * m + a + b;
        // 2m(m+a+b)(c-2) P_m = (c-1)[c(c-2)t + a^2-b^2] P_{m-1} - 2(m+a-1)(m+b-1)c P_{m-2}
        let num1 = (c - 1.0) * (c * (c - 2.0) * t + a * a - b * b);
        let num2 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * c;
        let den = 2.0 * m * (m + a + b) * (c - 2.0);
        let p_next = (num1 * p - num2 * p_prev) / den;
        p_prev = p;
        p = p_next;
    }
    p
}

/// Squared L2 norm h_n of P_n^{(alpha,beta)} under the Jacobi weight:
///
///   h_n = 2^{a+b+1}/(2n+a+b+1) * G(n+a+1)G(n+b+1) / (G(n+1)G(n+a+b+1))
///
/// computed in log space so that degrees up to a few thousand do not overflow.
pub fn jacobi_norm(n: u32, params: JacobiParams) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    let n = n as f64;
    let log_h = (a + b + 1.0) * std::f64::consts::LN_2 - (2.0 * n + a + b + 1.0).ln()
        + ln_gamma(n + a + 1.0)
        + ln_gamma(n + b + 1.0)
        - ln_gamma(n + 1.0)
        - ln_gamma(n + a + b + 1.0);
    log_h.exp()
}

/// Evaluates the Gegenbauer polynomial C_n^lambda(t).
///
/// Recurrence seeded with C_0 = 1, C_1 = 2 lambda t.
pub fn gegenbauer_eval(n: u32, param: GegenbauerParam, t: f64) -> f64 {
    let lam = param.lambda;
    if n == 0 {
        return 1.0;
    }
    let mut c_prev = 1.0;
    let mut c = 2.0 * lam * t;
    for m in 2..=n as u64 {
        let m = m as f64;
        let c_next = (2.0 * (m + lam - 1.0) * t * c - (m + 2.0 * lam - 2.0) * c_prev) / m;
        c_prev = c;
        c = c_next;
    }
    c
}

/// Squared L2 norm of C_n^lambda under the weight (1-t^2)^{lambda-1/2}:
///
///   h_n = 2^{1-2 lambda} pi / Gamma(lambda)^2 * Gamma(n+2 lambda) / ((n+lambda) Gamma(n+1))
pub fn gegenbauer_norm(n: u32, param: GegenbauerParam) -> f64 {
    let lam = param.lambda;
    let n = n as f64;
    let log_h = (1.0 - 2.0 * lam) * std::f64::consts::LN_2 + std::f64::consts::PI.ln()
        - 2.0 * ln_gamma(lam)
        + ln_gamma(n + 2.0 * lam)
        - (n + lam).ln()
        - ln_gamma(n + 1.0);
    log_h.exp()
}

/// Natural log of the Gamma function (Lanczos approximation, g = 7, n = 9).
///
/// Accurate to ~1e-13 relative over the positive reals used here.
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection formula
        let pi = std::f64::consts::PI;
        return pi.ln() - (pi * x).sin().abs().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Gauss-Legendre nodes and weights on [-1, 1], exact for degree <= 2n-1.
///
/// Newton iteration on P_n from the Chebyshev initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let params = JacobiParams { alpha: 0.0, beta: 0.0 };
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let p = jacobi_eval(n as u32, params, x);
            // derivative via P_{n-1}: (1-x^2) P_n' = n (P_{n-1} - x P_n)
            let pm1 = jacobi_eval(n as u32 - 1, params, x);
            dp = n as f64 * (pm1 - x * p) / (1.0 - x * x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u32, k: u32) -> f64 {
        (ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0))
            .exp()
    }

    /// Quadrature oracle: integral of f over [-1,1] by 256-point Gauss-Legendre.
    fn integrate<F: Fn(f64) -> f64>(f: F) -> f64 {
        let (x, w) = gauss_legendre(256);
        x.iter().zip(&w).map(|(&t, &wt)| wt * f(t)).sum()
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn jacobi_at_one_is_binomial() {
        for n in 0..=8u32 {
            for alpha in 0..=3u32 {
                let p = JacobiParams::new(alpha as f64, 1.0).unwrap();
                let expect = binom(n + alpha, n);
                let got = jacobi_eval(n, p, 1.0);
                assert!(
                    (got - expect).abs() < 1e-10 * expect.max(1.0),
                    "n={n} alpha={alpha}: {got} vs {expect}"
                );
            }
        }
        // specifically binom(3+0,3) = 1
        let p = JacobiParams::new(0.0, 1.0).unwrap();
        assert!((jacobi_eval(3, p, 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_degree_zero_and_one() {
        let p = JacobiParams::new(0.0, 1.0).unwrap();
        assert_eq!(jacobi_eval(0, p, 0.37), 1.0);
        assert_eq!(jacobi_eval(0, p, -1.0), 1.0);
        // degree-1 closed form: (alpha+1) + (alpha+beta+2)(t-1)/2 at t=0
        let expect = 1.0 + 3.0 * (0.0 - 1.0) / 2.0;
        assert!((jacobi_eval(1, p, 0.0) - expect).abs() < 1e-15);
        assert!((jacobi_eval(1, p, 0.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn jacobi_degree_one_orthogonal_to_constants() {
        // cross-check the degree-1 value by orthogonality against P_0 under (1+t)
        let p = JacobiParams::new(0.0, 1.0).unwrap();
        let ip = integrate(|t| jacobi_eval(1, p, t) * (1.0 + t));
        assert!(ip.abs() < 1e-12, "got {ip}");
    }

    #[test]
    fn jacobi_norm_against_quadrature() {
        let p00 = JacobiParams::new(0.0, 0.0).unwrap();
        assert!((jacobi_norm(0, p00) - 2.0).abs() < 1e-12);

        let p01 = JacobiParams::new(0.0, 1.0).unwrap();
        assert!((jacobi_norm(0, p01) - 2.0).abs() < 1e-12);

        let oracle = integrate(|t| {
            let v = jacobi_eval(2, p01, t);
            v * v * (1.0 + t)
        });
        assert!((jacobi_norm(2, p01) - oracle).abs() < 1e-10);

        // a batch of (0, l) parameters
        for l in 0..=6u32 {
            let p = JacobiParams::new(0.0, l as f64).unwrap();
            for n in 0..=6u32 {
                let oracle = integrate(|t| {
                    let v = jacobi_eval(n, p, t);
                    v * v * (1.0 + t).powi(l as i32)
                });
                let h = jacobi_norm(n, p);
                assert!((h - oracle).abs() < 1e-9 * h, "n={n} l={l}: {h} vs {oracle}");
            }
        }
    }

    #[test]
    fn jacobi_norm_closed_form_small_rational() {
        // for alpha = 0, beta = l integer: h_n = 2^{l+1} / (2n + l + 1)
        for l in 0..=8u32 {
            for n in 0..=8u32 {
                let p = JacobiParams::new(0.0, l as f64).unwrap();
                let expect = 2f64.powi(l as i32 + 1) / (2 * n + l + 1) as f64;
                assert!((jacobi_norm(n, p) - expect).abs() < 1e-12 * expect);
            }
        }
    }

    #[test]
    fn jacobi_orthogonality() {
        for l in 0..=16u32 {
            let p = JacobiParams::new(0.0, l as f64).unwrap();
            for n in 0..=16u32 {
                for m in 0..n {
                    let ip = integrate(|t| {
                        jacobi_eval(n, p, t) * jacobi_eval(m, p, t) * (1.0 + t).powi(l as i32)
                    });
                    assert!(ip.abs() < 1e-9, "n={n} m={m} l={l}: {ip}");
                }
            }
        }
    }

    #[test]
    fn jacobi_params_validated() {
        assert!(JacobiParams::new(-1.0, 0.0).is_err());
        assert!(JacobiParams::new(0.0, -1.5).is_err());
        assert!(JacobiParams::new(-0.5, -0.5).is_ok());
    }

    #[test]
    fn gegenbauer_low_degrees() {
        let lam1 = GegenbauerParam::new(1.0).unwrap();
        // C_1^lambda(t) = 2 lambda t
        assert!((gegenbauer_eval(1, lam1, 0.3) - 0.6).abs() < 1e-15);
        // C_n^lambda(1) = binom(n + 2 lambda - 1, n); lambda=1, n=4 -> binom(5,4) = 5
        assert!((gegenbauer_eval(4, lam1, 1.0) - 5.0).abs() < 1e-12);
        assert_eq!(gegenbauer_eval(0, lam1, -0.9), 1.0);
    }

    #[test]
    fn gegenbauer_lambda_one_is_chebyshev_u() {
        // C_n^1(cos x) = sin((n+1)x)/sin(x)
        let lam1 = GegenbauerParam::new(1.0).unwrap();
        for n in 0..=10u32 {
            for &x in &[0.3f64, 1.0, 2.2] {
                let expect = (((n + 1) as f64) * x).sin() / x.sin();
                let got = gegenbauer_eval(n, lam1, x.cos());
                assert!((got - expect).abs() < 1e-11, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn gegenbauer_norm_values() {
        let lam1 = GegenbauerParam::new(1.0).unwrap();
        let half = GegenbauerParam::new(0.5).unwrap();
        let pi_half = std::f64::consts::FRAC_PI_2;
        for n in 0..=8u32 {
            assert!((gegenbauer_norm(n, lam1) - pi_half).abs() < 1e-12);
            // Gauss-Chebyshev (second kind) oracle: exact for the polynomial
            // C_n^2 under the weight sqrt(1 - t^2)
            let m = 64usize;
            let oracle: f64 = (1..=m)
                .map(|i| {
                    let phi = std::f64::consts::PI * i as f64 / (m + 1) as f64;
                    let t = phi.cos();
                    let w = std::f64::consts::PI / (m + 1) as f64 * phi.sin() * phi.sin();
                    let v = gegenbauer_eval(n, lam1, t);
                    w * v * v
                })
                .sum();
            assert!((gegenbauer_norm(n, lam1) - oracle).abs() < 1e-12);
        }
        assert!((gegenbauer_norm(3, lam1) - pi_half).abs() < 1e-12);
        // Legendre case: h_0 = int_{-1}^{1} dt = 2
        assert!((gegenbauer_norm(0, half) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gegenbauer_param_validated() {
        assert!(GegenbauerParam::new(0.0).is_err());
        assert!(GegenbauerParam::new(-0.5).is_err());
        assert!(GegenbauerParam::new(-0.4).is_ok());
    }

    #[test]
    fn gegenbauer_raising_identity() {
        // C_n^{lambda+1}(t) = sum_{j=0}^{floor(n/2)} ((n-2j+lambda)/lambda) C_{n-2j}^lambda(t)
        for &lam in &[0.5f64, 1.0] {
            let lo = GegenbauerParam::new(lam).unwrap();
            let hi = GegenbauerParam::new(lam + 1.0).unwrap();
            for n in 0..=12u32 {
                for s in 0..50 {
                    let t = -1.0 + 2.0 * (s as f64 + 0.5) / 50.0;
                    let lhs = gegenbauer_eval(n, hi, t);
                    let mut rhs = 0.0;
                    let mut j = 0;
                    while 2 * j <= n {
                        let m = n - 2 * j;
                        rhs += ((m as f64 + lam) / lam) * gegenbauer_eval(m, lo, t);
                        j += 1;
                    }
                    assert!(
                        (lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0),
                        "lam={lam} n={n} t={t}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(8);
        // integrates t^k exactly for k <= 15
        for k in 0..=15u32 {
            let got: f64 = x.iter().zip(&w).map(|(&t, &wt)| wt * t.powi(k as i32)).sum();
            let expect = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - expect).abs() < 1e-13, "k={k}: {got} vs {expect}");
        }
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
    }
}
