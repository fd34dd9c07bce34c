//! Model parameters, derived constants, minimal uncertainties and the regime
//! classification of the four ground-state branches.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::math::{abs, sqrt};
use crate::quantum::{k_of, HalfInt, Spin};
use crate::{Complex, Error, Result};

/// Physical parameters in natural units (`hbar = c = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Position-side deformation (inverse length squared), `> 0`.
    pub alpha: f64,
    /// Momentum-side deformation (inverse momentum squared), `> 0`.
    pub beta: f64,
    /// Gauge parameter of the momentum representation; any finite real.
    pub lambda: f64,
    /// Mass, `> 0`.
    pub m: f64,
    /// Oscillator frequency, `> 0`.
    pub omega: f64,
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be finite and > 0",
        })
    }
}

impl ModelParams {
    /// Validated constructor.
    pub fn new(alpha: f64, beta: f64, lambda: f64, m: f64, omega: f64) -> Result<Self> {
        let p = ModelParams {
            alpha,
            beta,
            lambda,
            m,
            omega,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks every invariant.
    pub fn validate(&self) -> Result<()> {
        positive("alpha", self.alpha)?;
        positive("beta", self.beta)?;
        positive("m", self.m)?;
        positive("omega", self.omega)?;
        if !self.lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Same parameters with a different gauge parameter.
    pub fn with_lambda(self, lambda: f64) -> Self {
        ModelParams { lambda, ..self }
    }

    /// `m omega`.
    pub fn m_omega(&self) -> f64 {
        self.m * self.omega
    }

    /// `Q(m omega) = beta (m omega)^2 - 2 m omega + alpha`.
    ///
    /// `Q < 0` exactly when `m omega` lies strictly inside the interval
    /// `((1 - sqrt(1 - alpha beta))/beta, (1 + sqrt(1 - alpha beta))/beta)`,
    /// i.e. when `xi_tilde > 1/2`.
    pub fn q(&self) -> f64 {
        let mw = self.m_omega();
        self.beta * mw * mw - 2.0 * mw + self.alpha
    }

    /// Interval of `m omega` admitting a zero-energy ground state, if any.
    pub fn zero_gs_interval(&self) -> Option<(f64, f64)> {
        let disc = 1.0 - self.alpha * self.beta;
        if disc <= 0.0 {
            return None;
        }
        let r = sqrt(disc);
        Some(((1.0 - r) / self.beta, (1.0 + r) / self.beta))
    }

    /// `m^2 omega^2 beta + alpha`, the coefficient of the quadratic terms in every spectrum.
    pub fn quadratic_coefficient(&self) -> f64 {
        let mw = self.m_omega();
        mw * mw * self.beta + self.alpha
    }
}

/// Constants of the algebra that every downstream formula consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// `m omega + i sqrt(alpha/beta)`.
    pub omega_tilde: Complex,
    /// `|omega_tilde|^2 = m^2 omega^2 + alpha/beta`.
    pub omega_tilde_sq: f64,
    /// `m omega / (alpha + beta m^2 omega^2)`.
    pub xi_tilde: f64,
    /// `(sqrt(alpha/beta)(1-lambda) - m^2 omega^2 lambda sqrt(beta/alpha)) / (alpha + beta m^2 omega^2)`.
    pub zeta_tilde: f64,
    /// `beta xi_tilde`, the real part of `eta`.
    pub xi: f64,
    /// `beta zeta_tilde`, the imaginary part of `eta`.
    pub zeta: f64,
    /// `xi + i zeta`.
    pub eta: Complex,
    /// Copy of `beta`, carried for convenience.
    pub beta: f64,
}

/// Computes [`DerivedConstants`] from validated parameters.
pub fn derive_constants(params: &ModelParams) -> Result<DerivedConstants> {
    params.validate()?;
    let ModelParams {
        alpha, beta, lambda, ..
    } = *params;
    let mw = params.m_omega();
    let ratio = sqrt(alpha / beta);
    let denom = alpha + beta * mw * mw;
    let xi_tilde = mw / denom;
    let zeta_tilde = (ratio * (1.0 - lambda) - mw * mw * lambda / ratio) / denom;
    let xi = beta * xi_tilde;
    let zeta = beta * zeta_tilde;
    Ok(DerivedConstants {
        omega_tilde: Complex::new(mw, ratio),
        omega_tilde_sq: mw * mw + alpha / beta,
        xi_tilde,
        zeta_tilde,
        xi,
        zeta,
        eta: Complex::new(xi, zeta),
        beta,
    })
}

impl DerivedConstants {
    /// Shorthand for [`derive_constants`].
    pub fn from_params(params: &ModelParams) -> Result<Self> {
        derive_constants(params)
    }

    /// `|eta|^2`.
    pub fn eta_norm_sq(&self) -> f64 {
        self.xi * self.xi + self.zeta * self.zeta
    }
}

/// Minimal position and momentum uncertainties for a state with the given means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    /// `(sqrt(alpha) <X> + sqrt(beta) <P>)^2`.
    pub gamma: f64,
    /// `sqrt(beta (1+gamma) / (1 + 2 sqrt(alpha beta)))`.
    pub dx_min: f64,
    /// `sqrt(alpha (1+gamma) / (1 + 2 sqrt(alpha beta)))`.
    pub dp_min: f64,
    /// `alpha / (1 + sqrt(alpha beta))`.
    pub alpha_bar: f64,
    /// `beta / (1 + sqrt(alpha beta))`.
    pub beta_bar: f64,
    /// Rescaling `sqrt((1 + sqrt(alpha beta)) / (1 + gamma))` mapping `dX` to `dX_bar`.
    pub rescale: f64,
    alpha: f64,
    beta: f64,
}

/// Evaluates the minimal uncertainties and the Kempf-form rescaling.
pub fn uncertainty_bounds(params: &ModelParams, mean_x: f64, mean_p: f64) -> Result<UncertaintyReport> {
    params.validate()?;
    uncertainty_bounds_raw(params.alpha, params.beta, mean_x, mean_p)
}

/// [`uncertainty_bounds`] without the mass/frequency checks, for pure algebra studies.
pub fn uncertainty_bounds_raw(alpha: f64, beta: f64, mean_x: f64, mean_p: f64) -> Result<UncertaintyReport> {
    positive("alpha", alpha)?;
    positive("beta", beta)?;
    if !(mean_x.is_finite() && mean_p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "mean",
            reason: "expectation values must be finite",
        });
    }
    let shift = sqrt(alpha) * mean_x + sqrt(beta) * mean_p;
    let gamma = shift * shift;
    let s = sqrt(alpha * beta);
    Ok(UncertaintyReport {
        gamma,
        dx_min: sqrt(beta * (1.0 + gamma) / (1.0 + 2.0 * s)),
        dp_min: sqrt(alpha * (1.0 + gamma) / (1.0 + 2.0 * s)),
        alpha_bar: alpha / (1.0 + s),
        beta_bar: beta / (1.0 + s),
        rescale: sqrt((1.0 + s) / (1.0 + gamma)),
        alpha,
        beta,
    })
}

impl UncertaintyReport {
    /// Minimal `dX_bar` of the rescaled relation
    /// `dX_bar dP_bar >= (1 + alpha_bar dX_bar^2 + beta_bar dP_bar^2)/2`.
    pub fn kempf_dx_bar_min(&self) -> f64 {
        sqrt(self.beta_bar / (1.0 - self.alpha_bar * self.beta_bar))
    }

    /// Minimal `dP_bar` of the rescaled relation.
    pub fn kempf_dp_bar_min(&self) -> f64 {
        sqrt(self.alpha_bar / (1.0 - self.alpha_bar * self.beta_bar))
    }

    /// `dx_min` obtained by undoing the rescaling of the Kempf-form bound.
    pub fn dx_min_via_kempf(&self) -> f64 {
        self.kempf_dx_bar_min() / self.rescale
    }

    /// `dp_min` obtained by undoing the rescaling of the Kempf-form bound.
    pub fn dp_min_via_kempf(&self) -> f64 {
        self.kempf_dp_bar_min() / self.rescale
    }

    /// Slack of `dX dP >= (1 + gamma + alpha dX^2 + beta dP^2 - 2 sqrt(alpha beta) dX dP)/2`;
    /// non-negative iff the pair is admissible.
    pub fn slack(&self, dx: f64, dp: f64) -> f64 {
        let s = sqrt(self.alpha * self.beta);
        dx * dp - 0.5 * (1.0 + self.gamma + self.alpha * dx * dx + self.beta * dp * dp - 2.0 * s * dx * dp)
    }

    /// Slack of the rescaled (Kempf-form) relation at the rescaled pair.
    pub fn kempf_slack(&self, dx_bar: f64, dp_bar: f64) -> f64 {
        dx_bar * dp_bar - 0.5 * (1.0 + self.alpha_bar * dx_bar * dx_bar + self.beta_bar * dp_bar * dp_bar)
    }
}

/// Which re-factorization `(k', xi')` determines the ground state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchKind {
    /// `s = +1/2`, `k' = k`, `xi' = xi`: zero ground-state energy.
    ZeroGS,
    /// `s = +1/2`, `k' = k`, `xi' = beta - xi`.
    PosSpinShifted,
    /// `s = -1/2`, `k' = 1 - k`, `xi' = xi`.
    NegSpinSameXi,
    /// `s = -1/2`, `k' = 1 - k`, `xi' = beta - xi`; no nondeformed limit.
    NegSpinShifted,
}

impl BranchKind {
    /// All four branches in a fixed order.
    pub const ALL: [BranchKind; 4] = [
        BranchKind::ZeroGS,
        BranchKind::PosSpinShifted,
        BranchKind::NegSpinSameXi,
        BranchKind::NegSpinShifted,
    ];

    /// Spin projection the branch belongs to.
    pub fn spin(self) -> Spin {
        match self {
            BranchKind::ZeroGS | BranchKind::PosSpinShifted => Spin::Up,
            BranchKind::NegSpinSameXi | BranchKind::NegSpinShifted => Spin::Down,
        }
    }

    /// `true` when `xi' = beta - xi`.
    pub fn shifts_xi(self) -> bool {
        matches!(self, BranchKind::PosSpinShifted | BranchKind::NegSpinShifted)
    }

    /// Stable tag used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            BranchKind::ZeroGS => "ZeroGS",
            BranchKind::PosSpinShifted => "PosSpinShifted",
            BranchKind::NegSpinSameXi => "NegSpinSameXi",
            BranchKind::NegSpinShifted => "NegSpinShifted",
        }
    }
}

impl fmt::Display for BranchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BranchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BranchKind::ALL
            .into_iter()
            .find(|b| b.as_str().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameter {
                name: "branch",
                reason: "must be one of ZeroGS, PosSpinShifted, NegSpinSameXi, NegSpinShifted",
            })
    }
}

/// A branch together with its re-factorized parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    /// Branch tag.
    pub kind: BranchKind,
    /// Spin projection of the branch.
    pub s: Spin,
    /// `k` of the original factorization.
    pub k: i32,
    /// Re-factorized `k'`.
    pub k_prime: i32,
    /// Re-factorized `xi'`.
    pub xi_prime: f64,
}

impl Branch {
    /// Re-factorized parameters of `kind` for the original `(k, xi)`.
    pub fn new(kind: BranchKind, k: i32, dc: &DerivedConstants) -> Self {
        let k_prime = match kind {
            BranchKind::ZeroGS | BranchKind::PosSpinShifted => k,
            BranchKind::NegSpinSameXi | BranchKind::NegSpinShifted => 1 - k,
        };
        let xi_prime = if kind.shifts_xi() { dc.beta - dc.xi } else { dc.xi };
        Branch {
            kind,
            s: kind.spin(),
            k,
            k_prime,
            xi_prime,
        }
    }
}

/// One line of [`classify_regime`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeEntry {
    /// The branch and its re-factorized parameters.
    pub branch: Branch,
    /// Admissible per the boundary, normalizability and spin conditions.
    pub valid: bool,
    /// Additionally has a finite momentum-square expectation value.
    pub physical: bool,
    /// `false` only for `NegSpinShifted` with `4 alpha beta <= 1`, where the
    /// positivity of the ground-state energy is not covered by the general argument.
    pub epsilon_positivity_proven: bool,
    /// Machine-readable reason.
    pub reason: &'static str,
}

/// Classifies all four branches for `(params, j, s)` by the sign of `Q(m omega)`.
pub fn classify_regime(params: &ModelParams, j: HalfInt, s: Spin) -> Result<Vec<RegimeEntry>> {
    let dc = derive_constants(params)?;
    HalfInt::total_j(j.twice())?;
    let q = params.q();
    if q == 0.0 {
        return Err(Error::RegimeBoundary);
    }
    let k = k_of(s, j);
    let inside = q < 0.0;
    let strong = 4.0 * params.alpha * params.beta > 1.0;
    let entries = BranchKind::ALL
        .into_iter()
        .map(|kind| {
            let branch = Branch::new(kind, k, &dc);
            let (valid, physical, reason) = if kind.spin() != s {
                (
                    false,
                    false,
                    match kind.spin() {
                        Spin::Up => "requires_s_plus_half",
                        Spin::Down => "requires_s_minus_half",
                    },
                )
            } else {
                match (kind, inside) {
                    (BranchKind::ZeroGS, true) => (true, true, "q_negative_zero_mode_admissible"),
                    (BranchKind::ZeroGS, false) => (false, false, "q_positive_momentum_square_diverges"),
                    (BranchKind::PosSpinShifted, true) => (false, false, "q_negative_shifted_state_not_admissible"),
                    (BranchKind::PosSpinShifted, false) => (true, true, "q_positive_nonzero_ground_state"),
                    (BranchKind::NegSpinSameXi, true) => (true, true, "xi_positive_nonzero_ground_state"),
                    (BranchKind::NegSpinSameXi, false) => {
                        (true, false, "xi_positive_normalizable_momentum_square_diverges")
                    }
                    (BranchKind::NegSpinShifted, true) => (false, false, "q_negative_shifted_state_not_admissible"),
                    (BranchKind::NegSpinShifted, false) => (true, true, "q_positive_nonzero_ground_state"),
                }
            };
            RegimeEntry {
                branch,
                valid,
                physical,
                epsilon_positivity_proven: !(kind == BranchKind::NegSpinShifted && !strong),
                reason,
            }
        })
        .collect();
    Ok(entries)
}

/// The unique branch that is both valid and physical for `(params, j, s)`.
pub fn physical_branch(params: &ModelParams, j: HalfInt, s: Spin) -> Result<Branch> {
    classify_regime(params, j, s)?
        .into_iter()
        .find(|e| e.valid && e.physical)
        .map(|e| e.branch)
        .ok_or(Error::RegimeBoundary)
}

/// Returns `Ok` when `kind` is valid for `(params, j)`, otherwise the matching error.
pub fn require_valid(params: &ModelParams, kind: BranchKind, j: HalfInt) -> Result<RegimeEntry> {
    let entries = classify_regime(params, j, kind.spin())?;
    let entry = entries
        .into_iter()
        .find(|e| e.branch.kind == kind)
        .expect("classify_regime lists every branch");
    if entry.valid {
        Ok(entry)
    } else {
        Err(Error::InvalidBranch {
            branch: kind.as_str(),
            reason: entry.reason,
        })
    }
}

/// Relative difference used by consistency checks: `|a-b| / max(|a|,|b|,floor)`.
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    let scale = abs(a).max(abs(b)).max(floor);
    if scale == 0.0 {
        0.0
    } else {
        abs(a - b) / scale
    }
}
