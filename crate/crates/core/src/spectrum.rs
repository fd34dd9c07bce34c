//! Closed-form energies of the four branches and the shape-invariance
//! hierarchy that generates them.

use alloc::vec::Vec;

use crate::deformation::{derive_constants, require_valid, Branch, BranchKind, DerivedConstants, ModelParams};
use crate::math::sqrt;
use crate::quantum::{k_of, HalfInt, QuantumNumbers};
use crate::{Error, Result};

/// Largest radial quantum number tabulated by [`spectrum_table`].
pub const MAX_TABLE_N: u32 = 64;

/// One level of the shape-invariance hierarchy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeInvarianceStep {
    /// Step index.
    pub i: u32,
    /// `k + i`.
    pub k_i: f64,
    /// `xi + beta i`.
    pub xi_i: f64,
    /// Constant along the hierarchy.
    pub zeta_i: f64,
    /// Energy shift gained by this step; zero for the initial level.
    pub epsilon_i: f64,
}

/// `f(k, xi) = beta k^2 + 2 k xi + (xi^2 + zeta^2)/beta`; the constant part of `b- b+`.
pub fn factorization_constant(k: f64, xi: f64, zeta: f64, beta: f64) -> f64 {
    beta * k * k + 2.0 * k * xi + (xi * xi + zeta * zeta) / beta
}

impl ShapeInvarianceStep {
    /// Level zero for the factorization `(k, xi, zeta)`.
    pub fn initial(k: f64, xi: f64, zeta: f64) -> Self {
        ShapeInvarianceStep {
            i: 0,
            k_i: k,
            xi_i: xi,
            zeta_i: zeta,
            epsilon_i: 0.0,
        }
    }
}

/// Next level: `k -> k + 1`, `xi -> xi + beta`, `zeta` fixed, and
/// `epsilon = f(k+1, xi+beta) - f(k, xi)`.
pub fn shape_invariance_step(step: ShapeInvarianceStep, beta: f64) -> ShapeInvarianceStep {
    let k = step.k_i + 1.0;
    let xi = step.xi_i + beta;
    ShapeInvarianceStep {
        i: step.i + 1,
        k_i: k,
        xi_i: xi,
        zeta_i: step.zeta_i,
        epsilon_i: factorization_constant(k, xi, step.zeta_i, beta)
            - factorization_constant(step.k_i, step.xi_i, step.zeta_i, beta),
    }
}

/// Sum of the first `n` step energies starting at `(k, xi, zeta)`.
pub fn telescoped_sum(k: f64, xi: f64, zeta: f64, beta: f64, n: u32) -> f64 {
    let mut step = ShapeInvarianceStep::initial(k, xi, zeta);
    let mut total = 0.0;
    for _ in 0..n {
        step = shape_invariance_step(step, beta);
        total += step.epsilon_i;
    }
    total
}

/// `4 n (beta (n + k) + xi)`.
pub fn telescoped_closed_form(k: f64, xi: f64, beta: f64, n: u32) -> f64 {
    let n = f64::from(n);
    4.0 * n * (beta * (n + k) + xi)
}

/// Ground-state energy `epsilon` of `branch` in units of `|omega_tilde|^2`.
pub fn ground_state_epsilon(branch: &Branch, dc: &DerivedConstants, beta: f64, k: i32) -> Result<f64> {
    let expected_sign = branch.s.sign();
    if k == 0 || k.signum() != expected_sign {
        return Err(Error::InvalidBranch {
            branch: branch.kind.as_str(),
            reason: "sign of k must match the spin of the branch",
        });
    }
    let (kf, xi) = (f64::from(k), dc.xi);
    Ok(match branch.kind {
        BranchKind::ZeroGS => 0.0,
        BranchKind::PosSpinShifted => (beta - 2.0 * xi) * (1.0 + 2.0 * kf),
        BranchKind::NegSpinSameXi => (beta + 2.0 * xi) * (1.0 - 2.0 * kf),
        BranchKind::NegSpinShifted => 4.0 * (beta * (1.0 - kf) - xi),
    })
}

/// `epsilon = f(k', xi') - f(k, xi)` for any re-factorization.
pub fn refactorization_epsilon(branch: &Branch, dc: &DerivedConstants) -> f64 {
    factorization_constant(f64::from(branch.k_prime), branch.xi_prime, dc.zeta, dc.beta)
        - factorization_constant(f64::from(branch.k), dc.xi, dc.zeta, dc.beta)
}

/// Branch spectrum `E^2 - m^2` without any validity checks.
///
/// Accepts `alpha = beta = 0` and negative `m omega`, which the validated
/// entry points reject.
pub fn energy_sq_minus_msq_raw(kind: BranchKind, alpha: f64, beta: f64, m_omega: f64, j: f64, n: u32) -> f64 {
    let n = f64::from(n);
    let quad = m_omega * m_omega * beta + alpha;
    match kind {
        BranchKind::ZeroGS => 4.0 * n * (m_omega + quad * (n + j + 0.5)),
        BranchKind::PosSpinShifted => 4.0 * (n + j + 1.0) * (-m_omega + quad * (n + 0.5)),
        BranchKind::NegSpinSameXi => 4.0 * (n + j + 1.0) * (m_omega + quad * (n + 0.5)),
        BranchKind::NegSpinShifted => 4.0 * (n + 1.0) * (-m_omega + quad * (n + j + 1.5)),
    }
}

/// `E^2 - m^2` of level `n` on a branch admissible for `(params, j)`.
pub fn energy_sq_minus_msq(kind: BranchKind, params: &ModelParams, j: HalfInt, n: u32) -> Result<f64> {
    require_valid(params, kind, j)?;
    Ok(energy_sq_minus_msq_raw(
        kind,
        params.alpha,
        params.beta,
        params.m_omega(),
        j.value(),
        n,
    ))
}

/// Positive root `E = sqrt(m^2 + value)`.
pub fn positive_energy(m: f64, e2_minus_m2: f64) -> f64 {
    sqrt(m * m + e2_minus_m2)
}

/// `E^2 - m^2` written in the principal number `N = 2n + j - s`.
pub fn principal_form(kind: BranchKind, params: &ModelParams, j: HalfInt, principal: u32) -> Result<f64> {
    require_valid(params, kind, j)?;
    QuantumNumbers::n_from_principal(kind.spin(), j, principal)?;
    let big_n = f64::from(principal);
    let jv = j.value();
    let mw = params.m_omega();
    let quad = params.quadratic_coefficient();
    Ok(match kind {
        BranchKind::ZeroGS => 2.0 * (big_n - jv + 0.5) * (mw + 0.5 * quad * (big_n + jv + 1.5)),
        BranchKind::PosSpinShifted => 2.0 * (big_n + jv + 2.5) * (-mw + 0.5 * quad * (big_n - jv + 1.5)),
        BranchKind::NegSpinSameXi => 2.0 * (big_n + jv + 1.5) * (mw + 0.5 * quad * (big_n - jv + 0.5)),
        BranchKind::NegSpinShifted => 2.0 * (big_n - jv + 1.5) * (-mw + 0.5 * quad * (big_n + jv + 2.5)),
    })
}

/// One tabulated level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    /// Radial quantum number.
    pub n: u32,
    /// Principal number `2n + j - s`.
    pub principal: u32,
    /// `E^2 - m^2`.
    pub e2_minus_m2: f64,
    /// Positive root `E`.
    pub energy: f64,
    /// `(E^2 - m^2) / |omega_tilde|^2`, the eigenvalue of `b+ b-`.
    pub e_n: f64,
}

/// Levels `0..=n_max` of one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    /// Branch with its re-factorized parameters.
    pub branch: Branch,
    /// Parameters the table was computed for.
    pub params: ModelParams,
    /// Total angular momentum.
    pub j: HalfInt,
    /// Whether the branch has a finite momentum-square expectation.
    pub physical: bool,
    /// `false` when ground-state positivity is flagged as unproven.
    pub epsilon_positivity_proven: bool,
    /// Rows ordered by `n`.
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    /// The `e_n` column.
    pub fn e_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.e_n).collect()
    }
}

/// Tabulates `n = 0..=n_max` for a valid branch.
pub fn spectrum_table(kind: BranchKind, params: &ModelParams, j: HalfInt, n_max: u32) -> Result<SpectrumTable> {
    if n_max > MAX_TABLE_N {
        return Err(Error::InvalidParameter {
            name: "n-max",
            reason: "must be <= 64",
        });
    }
    let entry = require_valid(params, kind, j)?;
    let dc = derive_constants(params)?;
    let s = kind.spin();
    let rows = (0..=n_max)
        .map(|n| {
            let value = energy_sq_minus_msq_raw(kind, params.alpha, params.beta, params.m_omega(), j.value(), n);
            SpectrumRow {
                n,
                principal: QuantumNumbers { s, j, n }.principal(),
                e2_minus_m2: value,
                energy: positive_energy(params.m, value),
                e_n: value / dc.omega_tilde_sq,
            }
        })
        .collect();
    Ok(SpectrumTable {
        branch: Branch::new(kind, k_of(s, j), &dc),
        params: *params,
        j,
        physical: entry.physical,
        epsilon_positivity_proven: entry.epsilon_positivity_proven,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::derive_constants;
    use crate::quantum::Spin;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const HALF: HalfInt = HalfInt::from_twice(1);

    fn set_a() -> ModelParams {
        ModelParams::new(0.04, 0.04, 0.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_gs_examples() {
        let p = set_a();
        assert_eq!(energy_sq_minus_msq(BranchKind::ZeroGS, &p, HALF, 0).unwrap(), 0.0);
        assert_relative_eq!(
            energy_sq_minus_msq(BranchKind::ZeroGS, &p, HALF, 1).unwrap(),
            4.64,
            max_relative = 1e-14
        );
        let t = spectrum_table(BranchKind::ZeroGS, &p, HALF, 2).unwrap();
        assert_relative_eq!(t.rows[2].e2_minus_m2, 9.92, max_relative = 1e-14);
        assert_relative_eq!(t.rows[1].e_n, 2.32, max_relative = 1e-14);
        assert_eq!(t.rows[1].principal, 2);
        assert_eq!(t.rows[0].energy, 1.0);
        assert_eq!(
            principal_form(BranchKind::ZeroGS, &p, HALF, 2).unwrap(),
            energy_sq_minus_msq(BranchKind::ZeroGS, &p, HALF, 1).unwrap()
        );
        assert!(principal_form(BranchKind::ZeroGS, &p, HALF, 1).is_err());
    }

    #[test]
    fn shifted_branch_example() {
        let p = ModelParams::new(0.04, 0.04, 0.5, 1.0, 60.0).unwrap();
        let dc = derive_constants(&p).unwrap();
        let value = energy_sq_minus_msq(BranchKind::PosSpinShifted, &p, HALF, 0).unwrap();
        assert_relative_eq!(value, 72.12, max_relative = 1e-12);
        let b = Branch::new(BranchKind::PosSpinShifted, 1, &dc);
        let eps = ground_state_epsilon(&b, &dc, 0.04, 1).unwrap();
        assert!((eps - 0.020028).abs() < 1e-6);
        assert_relative_eq!(eps * dc.omega_tilde_sq, value, max_relative = 1e-12);
        assert!(energy_sq_minus_msq(BranchKind::ZeroGS, &p, HALF, 0).is_err());
    }

    #[test]
    fn step_example() {
        let s0 = ShapeInvarianceStep::initial(1.0, 0.5, 0.0);
        let s1 = shape_invariance_step(s0, 0.04);
        assert_eq!(s1.k_i, 2.0);
        assert_relative_eq!(s1.xi_i, 0.54, max_relative = 1e-15);
        assert_eq!(
            s1.epsilon_i,
            factorization_constant(2.0, 0.54, 0.0, 0.04) - factorization_constant(1.0, 0.5, 0.0, 0.04)
        );
        let mut s = ShapeInvarianceStep::initial(1.0, 0.5, 0.3);
        for _ in 0..10 {
            s = shape_invariance_step(s, 0.04);
            assert_eq!(s.zeta_i, 0.3);
        }
    }

    #[test]
    fn epsilon_rejects_inconsistent_k() {
        let dc = derive_constants(&set_a()).unwrap();
        let b = Branch::new(BranchKind::NegSpinSameXi, -1, &dc);
        assert!(ground_state_epsilon(&b, &dc, 0.04, 1).is_err());
        let eps = ground_state_epsilon(&b, &dc, 0.04, -1).unwrap();
        assert_relative_eq!(eps, (0.04 + 2.0 * dc.xi) * 3.0, max_relative = 1e-15);
    }

    #[test]
    fn classical_limits() {
        for n in 0..5 {
            assert_eq!(
                energy_sq_minus_msq_raw(BranchKind::ZeroGS, 0.0, 0.0, 2.0, 1.5, n),
                4.0 * f64::from(n) * 2.0
            );
            assert_eq!(
                energy_sq_minus_msq_raw(BranchKind::NegSpinSameXi, 0.0, 0.0, 2.0, 1.5, n),
                4.0 * (f64::from(n) + 2.5) * 2.0
            );
        }
        assert_eq!(
            energy_sq_minus_msq_raw(BranchKind::NegSpinShifted, 0.0, 0.0, 2.0, 0.5, 0),
            -8.0
        );
    }

    #[test]
    fn table_limits() {
        assert!(spectrum_table(BranchKind::ZeroGS, &set_a(), HALF, 65).is_err());
        assert_eq!(
            spectrum_table(BranchKind::ZeroGS, &set_a(), HALF, 64)
                .unwrap()
                .rows
                .len(),
            65
        );
    }

    fn valid_params() -> impl Strategy<Value = (ModelParams, HalfInt)> {
        (
            0.001f64..2.0,
            0.001f64..2.0,
            -2.0f64..2.0,
            0.1f64..3.0,
            0.1f64..50.0,
            0i32..5,
        )
            .prop_filter_map("off the regime boundary", |(a, b, l, m, w, jj)| {
                let p = ModelParams::new(a, b, l, m, w).ok()?;
                (p.q().abs() > 1e-9).then_some((p, HalfInt::from_twice(2 * jj + 1)))
            })
    }

    proptest! {
        #[test]
        fn telescoping_matches_closed_form(k in 1i32..6, xi in 0.001f64..5.0, zeta in -3.0f64..3.0, beta in 0.001f64..2.0, n in 0u32..=10) {
            let stepped = telescoped_sum(f64::from(k), xi, zeta, beta, n);
            let closed = telescoped_closed_form(f64::from(k), xi, beta, n);
            prop_assert!((stepped - closed).abs() <= 1e-12 * closed.abs().max(1e-300));
        }

        #[test]
        fn hierarchy_reproduces_every_branch((p, j) in valid_params(), n in 0u32..12) {
            let dc = derive_constants(&p).unwrap();
            for kind in BranchKind::ALL {
                let Ok(value) = energy_sq_minus_msq(kind, &p, j, n) else { continue };
                let b = Branch::new(kind, k_of(kind.spin(), j), &dc);
                let eps = ground_state_epsilon(&b, &dc, p.beta, b.k).unwrap();
                prop_assert!((eps - refactorization_epsilon(&b, &dc)).abs() <= 1e-9 * eps.abs().max(1.0));
                let route = dc.omega_tilde_sq * (eps + telescoped_closed_form(f64::from(b.k_prime), b.xi_prime, p.beta, n));
                prop_assert!((route - value).abs() <= 1e-9 * value.abs().max(1.0), "{}: {} vs {}", kind, route, value);
                let pf = principal_form(kind, &p, j, QuantumNumbers::new(kind.spin(), j, n).unwrap().principal()).unwrap();
                // Both forms cancel -m omega against the quadratic term; compare on that scale.
                let scale = 4.0 * (f64::from(n) + j.value() + 2.0)
                    * (p.m_omega() + p.quadratic_coefficient() * (f64::from(n) + j.value() + 2.0));
                prop_assert!((pf - value).abs() <= 1e-13 * scale);
            }
        }

        #[test]
        fn valid_tables_are_positive_and_increasing((p, j) in valid_params()) {
            for kind in BranchKind::ALL {
                let Ok(t) = spectrum_table(kind, &p, j, 12) else { continue };
                prop_assert!(t.rows.iter().all(|r| r.e2_minus_m2 >= 0.0));
                prop_assert!(t.rows.windows(2).all(|w| w[1].e2_minus_m2 > w[0].e2_minus_m2));
            }
        }

        #[test]
        fn spectra_ignore_lambda((p, j) in valid_params(), l2 in -3.0f64..3.0, n in 0u32..8) {
            for kind in BranchKind::ALL {
                if let Ok(v) = energy_sq_minus_msq(kind, &p, j, n) {
                    prop_assert_eq!(v, energy_sq_minus_msq(kind, &p.with_lambda(l2), j, n).unwrap());
                }
            }
        }

        #[test]
        fn spin_frequency_duality(a in 0.0f64..2.0, b in 0.0f64..2.0, mw in -20.0f64..20.0, jj in 0i32..5, n in 0u32..10) {
            let j = f64::from(2 * jj + 1) / 2.0;
            let neg = energy_sq_minus_msq_raw(BranchKind::NegSpinSameXi, a, b, mw, j, n);
            let pos = energy_sq_minus_msq_raw(BranchKind::PosSpinShifted, a, b, -mw, j, n);
            prop_assert_eq!(neg, pos);
        }

        #[test]
        fn minimal_length_reduction(b in 0.001f64..2.0, mw in 0.01f64..0.9, jj in 0i32..5, n in 0u32..10) {
            let j = f64::from(2 * jj + 1) / 2.0;
            let nf = f64::from(n);
            let expected = 4.0 * nf * (mw + mw * mw * b * (nf + j + 0.5));
            let got = energy_sq_minus_msq_raw(BranchKind::ZeroGS, 0.0, b, mw, j, n);
            prop_assert!((got - expected).abs() <= 1e-13 * expected.max(1e-300));
        }
    }

    #[test]
    fn spin_of_branch_is_enforced() {
        let p = set_a();
        assert!(energy_sq_minus_msq(BranchKind::NegSpinSameXi, &p, HALF, 0).is_ok());
        let dc = derive_constants(&p).unwrap();
        let b = Branch::new(BranchKind::ZeroGS, k_of(Spin::Up, HALF), &dc);
        assert_eq!(ground_state_epsilon(&b, &dc, p.beta, 1).unwrap(), 0.0);
    }
}
