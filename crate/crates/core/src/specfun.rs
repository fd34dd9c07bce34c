//! Jacobi polynomials, log-Gamma and Gauss-Jacobi quadrature.

use alloc::vec::Vec;

use crate::eigen::SymTridiagonal;
use crate::math::{exp, log, sqrt};
use crate::{Error, Result};

fn check_exponents(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && a > -1.0) {
        return Err(Error::Domain("jacobi exponent a must be > -1"));
    }
    if !(b.is_finite() && b > -1.0) {
        return Err(Error::Domain("jacobi exponent b must be > -1"));
    }
    Ok(())
}

/// `P_n^(a,b)(z)` by the three-term recurrence.
pub fn jacobi_eval(n: u32, a: f64, b: f64, z: f64) -> Result<f64> {
    check_exponents(a, b)?;
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::Domain("jacobi argument must lie in [-1, 1]"));
    }
    Ok(jacobi_unchecked(n, a, b, z))
}

/// Recurrence without argument checks; callers guarantee `a, b > -1`.
pub(crate) fn jacobi_unchecked(n: u32, a: f64, b: f64, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * ((a - b) + (a + b + 2.0) * z);
    for m in 2..=n {
        let m = f64::from(m);
        let s = 2.0 * m + a + b;
        let c1 = 2.0 * m * (m + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * z + a * a - b * b);
        let c3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * s;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dz P_n^(a,b)(z) = (n+a+b+1)/2 P_{n-1}^(a+1,b+1)(z)`.
pub fn jacobi_derivative(n: u32, a: f64, b: f64, z: f64) -> Result<f64> {
    check_exponents(a, b)?;
    if n == 0 {
        return Ok(0.0);
    }
    let inner = jacobi_eval(n - 1, a + 1.0, b + 1.0, z)?;
    Ok(0.5 * (f64::from(n) + a + b + 1.0) * inner)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Pole);
    }
    Ok(libm::lgamma_r(x).0)
}

/// `ln B(x, y)`.
pub fn log_beta(x: f64, y: f64) -> Result<f64> {
    Ok(log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?)
}

/// `ln h_n` with `h_n = int_{-1}^{1} (1-z)^a (1+z)^b P_n^2 dz`.
pub fn log_jacobi_norm(n: u32, a: f64, b: f64) -> Result<f64> {
    check_exponents(a, b)?;
    let nf = f64::from(n);
    let ln2 = core::f64::consts::LN_2;
    if n == 0 {
        return Ok((a + b + 1.0) * ln2 + log_beta(a + 1.0, b + 1.0)?);
    }
    Ok(
        (a + b + 1.0) * ln2 - log(2.0 * nf + a + b + 1.0) + log_gamma(nf + a + 1.0)? + log_gamma(nf + b + 1.0)?
            - log_gamma(nf + 1.0)?
            - log_gamma(nf + a + b + 1.0)?,
    )
}

/// Gauss-Jacobi nodes and weights for the weight `(1-z)^a (1+z)^b` on `(-1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// Nodes, strictly increasing in `(-1, 1)`.
    pub nodes: Vec<f64>,
    /// Positive weights.
    pub weights: Vec<f64>,
    /// Number of nodes.
    pub order: usize,
    /// Exponent of `(1-z)`.
    pub a: f64,
    /// Exponent of `(1+z)`.
    pub b: f64,
}

impl QuadratureRule {
    /// `sum_i w_i f(z_i)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }
}

/// Golub-Welsch construction of the `n`-point Gauss-Jacobi rule.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    check_exponents(a, b)?;
    if n == 0 {
        return Err(Error::Domain("quadrature order must be >= 1"));
    }
    let ab = a + b;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        let i = i as f64;
        let s = 2.0 * i + ab;
        diag.push(if i == 0.0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        });
    }
    for i in 1..n {
        let i = i as f64;
        let s = 2.0 * i + ab;
        let beta_i = if i == 1.0 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * i * (i + a) * (i + b) * (i + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off.push(sqrt(beta_i));
    }
    let mu0 = exp((ab + 1.0) * core::f64::consts::LN_2 + log_beta(a + 1.0, b + 1.0)?);
    let (nodes, first) = SymTridiagonal::new(diag, off).eigen_first_components()?;
    let weights = first.iter().map(|v| mu0 * v * v).collect();
    Ok(QuadratureRule {
        order: n,
        nodes,
        weights,
        a,
        b,
    })
}
