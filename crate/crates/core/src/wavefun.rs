//! Closed-form radial wavefunctions built from Jacobi polynomials.

use crate::deformation::{Branch, BranchKind, DerivedConstants, ModelParams};
use crate::math::{cis, cos, exp, log, pow, sin, sqrt};
use crate::radial::{apply_b_plus_nodes, GridFunction, RadialGrid, Stagger};
use crate::specfun::{gauss_jacobi, jacobi_unchecked, log_jacobi_norm};
use crate::spectrum::{energy_sq_minus_msq_raw, positive_energy, telescoped_closed_form};
use crate::{Complex, Error, QuantumNumbers, Result};

/// `C p^c (1 - beta p^2)^(body_exp + i phase_exp) P_n^(a,b)(2 beta p^2 - 1)`
/// with `c = b + 1/2` and `body_exp = a/2 + 1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiForm {
    /// Exponent of `p`.
    pub c: f64,
    /// Jacobi exponent `a` (weight `(1-z)^a`).
    pub a: f64,
    /// Jacobi exponent `b` (weight `(1+z)^b`).
    pub b: f64,
    /// Real exponent of `1 - beta p^2`.
    pub body_exp: f64,
    /// Imaginary exponent of `1 - beta p^2`.
    pub phase_exp: f64,
    /// Polynomial degree.
    pub degree: u32,
    /// Normalization coefficient.
    pub coefficient: Complex,
    /// Momentum deformation parameter.
    pub beta: f64,
}

impl JacobiForm {
    /// Canonical form; rejects exponents without a finite norm.
    pub fn new(a: f64, b: f64, degree: u32, coefficient: Complex, phase_exp: f64, beta: f64) -> Result<Self> {
        if a.is_nan() || a <= -1.0 {
            return Err(Error::NotNormalizable {
                condition: "a > -1 (square integrability at beta p^2 = 1)",
            });
        }
        if b.is_nan() || b <= -1.0 {
            return Err(Error::NotNormalizable {
                condition: "b > -1 (square integrability at p = 0)",
            });
        }
        Ok(JacobiForm {
            c: b + 0.5,
            a,
            b,
            body_exp: 0.5 * a + 0.25,
            phase_exp,
            degree,
            coefficient,
            beta,
        })
    }

    /// Value at `p` in `(0, 1/sqrt(beta))`.
    pub fn eval(&self, p: f64) -> Complex {
        let w = 1.0 - self.beta * p * p;
        let z = 2.0 * self.beta * p * p - 1.0;
        let mag = pow(p, self.c) * pow(w, self.body_exp) * jacobi_unchecked(self.degree, self.a, self.b, z);
        self.coefficient * cis(self.phase_exp * log(w)) * mag
    }

    /// Value at `theta`, where `p = sin(theta)/sqrt(beta)`.
    pub fn eval_theta(&self, theta: f64) -> Complex {
        let (s, c) = (sin(theta), cos(theta));
        let p = s / sqrt(self.beta);
        let lw = 2.0 * log(c);
        let z = s * s - c * c;
        let mag = pow(p, self.c) * exp(self.body_exp * lw) * jacobi_unchecked(self.degree, self.a, self.b, z);
        self.coefficient * cis(self.phase_exp * lw) * mag
    }

    /// Samples on a grid.
    pub fn sample(&self, grid: &RadialGrid, stagger: Stagger) -> GridFunction {
        GridFunction::sample(*grid, stagger, |t| self.eval_theta(t))
    }

    /// Same form with a different coefficient.
    pub fn with_coefficient(self, coefficient: Complex) -> Self {
        JacobiForm { coefficient, ..self }
    }

    /// Exact `int |R|^2 dp/sqrt(1 - beta p^2)` from the Jacobi norm.
    pub fn norm_sq(&self) -> Result<f64> {
        let ln2 = core::f64::consts::LN_2;
        let ln = log_jacobi_norm(self.degree, self.a, self.b)?
            - (self.a + self.b + 2.0) * ln2
            - (self.b + 1.0) * log(self.beta);
        Ok(self.coefficient.norm_sqr() * exp(ln))
    }

    /// Same form scaled to unit norm with a positive real coefficient.
    pub fn unit(self) -> Result<Self> {
        let unit = self.with_coefficient(Complex::new(1.0, 0.0));
        let n = unit.norm_sq()?;
        Ok(unit.with_coefficient(Complex::new(1.0 / sqrt(n), 0.0)))
    }
}

/// `int conj(f) g dp/sqrt(1 - beta p^2)` by Gauss-Jacobi quadrature, exact up to rounding.
pub fn jacobi_inner(f: &JacobiForm, g: &JacobiForm) -> Result<Complex> {
    if f.phase_exp != g.phase_exp || f.beta != g.beta {
        return Err(Error::Domain("forms must share beta and phase exponent"));
    }
    let beta = f.beta;
    let wa = f.body_exp + g.body_exp - 0.5;
    let wb = 0.5 * (f.c + g.c - 1.0);
    let order = ((f.degree + g.degree) / 2 + 1) as usize;
    let rule = gauss_jacobi(order, wa, wb)?;
    let sum = rule.integrate(|z| jacobi_unchecked(f.degree, f.a, f.b, z) * jacobi_unchecked(g.degree, g.a, g.b, z));
    let ln2 = core::f64::consts::LN_2;
    let scale = exp(-(wa * ln2 + wb * log(2.0 * beta) + log(4.0 * beta)));
    Ok(f.coefficient.conj() * g.coefficient * (sum * scale))
}

/// Jacobi exponents `(a, b) = (xi'/beta - 1/2, k' - 1/2)` of a branch's large component.
pub fn jacobi_exponents(branch: &Branch, beta: f64) -> (f64, f64) {
    (branch.xi_prime / beta - 0.5, f64::from(branch.k_prime) - 0.5)
}

fn check_branch(branch: &Branch, dc: &DerivedConstants, beta: f64, k: i32) -> Result<(f64, f64)> {
    if branch.k != k {
        return Err(Error::InvalidBranch {
            branch: branch.kind.as_str(),
            reason: "branch was built for a different k",
        });
    }
    let (a, b) = jacobi_exponents(branch, beta);
    if b.is_nan() || b <= -1.0 {
        return Err(Error::NotNormalizable {
            condition: match branch.s {
                crate::Spin::Up => "k > 0 required",
                crate::Spin::Down => "k < 0 required",
            },
        });
    }
    if a.is_nan() || a <= -1.0 {
        return Err(Error::NotNormalizable {
            condition: "a > -1 (square integrability at beta p^2 = 1)",
        });
    }
    match branch.kind {
        BranchKind::ZeroGS if dc.xi_tilde <= 0.5 => Err(Error::NotNormalizable {
            condition: "xi_tilde > 1/2 required for a finite momentum square",
        }),
        BranchKind::PosSpinShifted | BranchKind::NegSpinShifted if dc.xi_tilde >= 0.5 => Err(Error::NotNormalizable {
            condition: "xi_tilde < 1/2 required for a finite momentum square",
        }),
        _ => Ok((a, b)),
    }
}

fn phase_exp(dc: &DerivedConstants) -> f64 {
    -dc.zeta / (2.0 * dc.beta)
}

/// Unit-norm degree-zero large component of `branch`.
pub fn ground_state_wf(branch: &Branch, dc: &DerivedConstants, beta: f64, k: i32) -> Result<JacobiForm> {
    let (a, b) = check_branch(branch, dc, beta, k)?;
    JacobiForm::new(a, b, 0, Complex::new(1.0, 0.0), phase_exp(dc), beta)?.unit()
}

fn check_quantum(branch: &Branch, qn: &QuantumNumbers) -> Result<()> {
    if qn.s != branch.s || qn.k() != branch.k {
        return Err(Error::InvalidBranch {
            branch: branch.kind.as_str(),
            reason: "quantum numbers do not match the branch",
        });
    }
    Ok(())
}

fn energy(branch: &Branch, params: &ModelParams, qn: &QuantumNumbers) -> f64 {
    let value = energy_sq_minus_msq_raw(
        branch.kind,
        params.alpha,
        params.beta,
        params.m_omega(),
        qn.j.value(),
        qn.n,
    );
    positive_energy(params.m, value)
}

/// `C_{1;n}` with `C^2 = beta^(b+1) (2n+a+b+1) n! Gamma(n+a+b+1) / (Gamma(n+a+1) Gamma(n+b+1)) (E+m)/E`.
pub fn normalization_constant(
    branch: &Branch,
    dc: &DerivedConstants,
    params: &ModelParams,
    qn: &QuantumNumbers,
) -> Result<f64> {
    check_quantum(branch, qn)?;
    let (a, b) = check_branch(branch, dc, params.beta, qn.k())?;
    let e = energy(branch, params, qn);
    let ln2 = core::f64::consts::LN_2;
    let ln_c2 = (a + b + 2.0) * ln2 + (b + 1.0) * log(params.beta) - log_jacobi_norm(qn.n, a, b)?
        + log((e + params.m) / (2.0 * e));
    Ok(exp(0.5 * ln_c2))
}

/// Large component `R_{1;n}`.
pub fn large_component(
    branch: &Branch,
    dc: &DerivedConstants,
    params: &ModelParams,
    qn: &QuantumNumbers,
) -> Result<JacobiForm> {
    let coef = normalization_constant(branch, dc, params, qn)?;
    let (a, b) = jacobi_exponents(branch, params.beta);
    JacobiForm::new(a, b, qn.n, Complex::new(coef, 0.0), phase_exp(dc), params.beta)
}

/// Small component `R~_{2;n} = conj(omega_tilde) b- R_{1;n} / (E + m)`; `None` for the
/// zero-energy ground state.
pub fn small_component(
    branch: &Branch,
    dc: &DerivedConstants,
    params: &ModelParams,
    qn: &QuantumNumbers,
) -> Result<Option<JacobiForm>> {
    let large = large_component(branch, dc, params, qn)?;
    let (a, b, n, beta) = (large.a, large.b, f64::from(qn.n), params.beta);
    let e = energy(branch, params, qn);
    let pre = dc.omega_tilde.conj() / (e + params.m) * large.coefficient;
    let (da, db, degree, factor) = match branch.kind {
        BranchKind::ZeroGS => {
            if qn.n == 0 {
                return Ok(None);
            }
            (1.0, 1.0, qn.n - 1, 2.0 * beta * (n + a + b + 1.0))
        }
        BranchKind::PosSpinShifted => (-1.0, 1.0, qn.n, -2.0 * beta * (n + a)),
        BranchKind::NegSpinSameXi => (1.0, -1.0, qn.n, 2.0 * (n + b)),
        BranchKind::NegSpinShifted => (-1.0, -1.0, qn.n + 1, -2.0 * (n + 1.0)),
    };
    JacobiForm::new(a + da, b + db, degree, pre * factor, phase_exp(dc), beta).map(Some)
}

/// Large and small components of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialWavefunction {
    /// `R_{1;n}`.
    pub large: JacobiForm,
    /// `R~_{2;n}`; `None` exactly for the zero-energy ground state.
    pub small: Option<JacobiForm>,
    /// Quantum numbers.
    pub quantum: QuantumNumbers,
    /// Branch.
    pub branch: Branch,
}

impl RadialWavefunction {
    /// Builds both components.
    pub fn new(branch: &Branch, dc: &DerivedConstants, params: &ModelParams, qn: &QuantumNumbers) -> Result<Self> {
        Ok(RadialWavefunction {
            large: large_component(branch, dc, params, qn)?,
            small: small_component(branch, dc, params, qn)?,
            quantum: *qn,
            branch: *branch,
        })
    }

    /// `int (|R_1|^2 + |R~_2|^2) dp/sqrt(1 - beta p^2)` by quadrature.
    pub fn joint_norm(&self) -> Result<f64> {
        let mut total = jacobi_inner(&self.large, &self.large)?.re;
        if let Some(s) = &self.small {
            total += jacobi_inner(s, s)?.re;
        }
        Ok(total)
    }
}

/// Level-`n` large component rebuilt from the top of the hierarchy by repeated
/// `b+` on nodes, with unit norm.
///
/// Starts from the unit ground state at `(k' + n, xi' + n beta)` and applies
/// `b+(k' + i, xi' + i beta + i zeta) / sqrt(e)` for `i = n-1, ..., 0`.
pub fn recursion_large_component(
    branch: &Branch,
    dc: &DerivedConstants,
    beta: f64,
    n: u32,
    grid: &RadialGrid,
) -> Result<GridFunction> {
    let top = Branch {
        kind: BranchKind::ZeroGS,
        s: branch.s,
        k: branch.k_prime + n as i32,
        k_prime: branch.k_prime + n as i32,
        xi_prime: branch.xi_prime + f64::from(n) * beta,
    };
    let (a, b) = jacobi_exponents(&top, beta);
    let start = JacobiForm::new(a, b, 0, Complex::new(1.0, 0.0), phase_exp(dc), beta)?.unit()?;
    let mut f = start.sample(grid, Stagger::Nodes);
    for i in (0..n).rev() {
        let k = branch.k_prime + i as i32;
        let xi = branch.xi_prime + f64::from(i) * beta;
        let e = telescoped_closed_form(f64::from(k), xi, beta, n - i);
        f = apply_b_plus_nodes(k, Complex::new(xi, dc.zeta), &f)?.scaled(Complex::new(1.0 / sqrt(e), 0.0));
    }
    Ok(f)
}
