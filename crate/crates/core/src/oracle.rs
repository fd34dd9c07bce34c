//! Numerical diagonalization of the discretized superpartner Hamiltonians.
//!
//! `H = B-^H B-` and `H' = B- B-^H` are never formed densely. After removing
//! the phases of the bidiagonal `B-`, the eigenvalues of `H` are squared
//! singular values computed to high relative accuracy, and the partner
//! spectrum comes from bisection on the real tridiagonal `|B||B|^T`.

use alloc::vec::Vec;

use crate::deformation::{DerivedConstants, ModelParams};
use crate::math::{abs, log, sqrt};
use crate::radial::{apply_h_expanded, build_b_minus, inner_product, make_grid, GridFunction, RadialGrid, Stagger};
use crate::spectrum::SpectrumTable;
use crate::wavefun::JacobiForm;
use crate::{Complex, Error, Result};

/// Smallest grid accepted by [`diagonalize_h`].
pub const MIN_ORACLE_GRID: usize = 256;
/// Largest grid accepted by [`diagonalize_h`].
pub const MAX_ORACLE_GRID: usize = 4096;
/// Largest number of levels per report.
pub const MAX_LEVELS: usize = 12;

/// Lowest eigenpairs of `H` and the lowest partner eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenReport {
    /// Parameters used.
    pub params: ModelParams,
    /// `k` of the factorization.
    pub k: i32,
    /// Interior grid size.
    pub grid_size: usize,
    /// Lowest eigenvalues of `B-^H B-`, ascending and non-negative.
    pub h_eigenvalues: Vec<f64>,
    /// Lowest eigenvalues of `B- B-^H`, ascending; includes its structural zero.
    pub partner_eigenvalues: Vec<f64>,
    /// Unit eigenvectors of `H` on the interior nodes.
    pub eigenvectors: Vec<GridFunction>,
    /// `|| h0 v - lambda v ||` for the expanded second-order form `h0` of `b+ b-`.
    pub expanded_residuals: Vec<f64>,
}

impl EigenReport {
    /// `h_eigenvalues[1] - h_eigenvalues[0]`.
    pub fn gap(&self) -> f64 {
        self.h_eigenvalues[1] - self.h_eigenvalues[0]
    }

    /// `true` when the lowest eigenvalue is below `1e-6` times the gap.
    pub fn has_zero_mode(&self) -> bool {
        self.h_eigenvalues[0] <= 1e-6 * self.gap()
    }

    /// Largest `|H_i - H'_j|` after discarding eigenvalues below `1e-6` times the gap
    /// from both lists and pairing the rest in order.
    pub fn partner_mismatch(&self) -> f64 {
        let cut = 1e-6 * self.gap();
        let h: Vec<f64> = self.h_eigenvalues.iter().copied().filter(|v| *v > cut).collect();
        let p: Vec<f64> = self.partner_eigenvalues.iter().copied().filter(|v| *v > cut).collect();
        h.iter().zip(&p).map(|(a, b)| abs(a - b)).fold(0.0, f64::max)
    }

    /// `|<v_0, f>| / (||v_0|| ||f||)` for a closed-form ground state `f`.
    pub fn ground_state_overlap(&self, form: &JacobiForm) -> Result<f64> {
        let v = &self.eigenvectors[0];
        let f = form.sample(&v.grid, Stagger::Nodes);
        Ok(inner_product(v, &f)?.norm() / (v.norm() * f.norm()))
    }
}

/// Diagonalizes `H = B-^H B-` for `(dc, k)` on `grid`.
pub fn diagonalize_h(
    dc: &DerivedConstants,
    params: &ModelParams,
    k: i32,
    grid: &RadialGrid,
    n_levels: usize,
) -> Result<EigenReport> {
    params.validate()?;
    if grid.size < MIN_ORACLE_GRID || grid.size > MAX_ORACLE_GRID {
        return Err(Error::GridTooSmall {
            min: MIN_ORACLE_GRID,
            got: grid.size,
        });
    }
    if !(2..=MAX_LEVELS).contains(&n_levels) {
        return Err(Error::InvalidParameter {
            name: "levels",
            reason: "must lie in 2..=12",
        });
    }
    let b = build_b_minus(dc, k, grid)?;
    let (chain, node_phase, _) = b.phase_normalized()?;
    let h_eigenvalues: Vec<f64> = chain.lowest_singular_values(n_levels).iter().map(|s| s * s).collect();
    let partner_eigenvalues = chain.cogram().lowest_eigenvalues(n_levels + 1);
    let gram = chain.gram();
    let mut real_vectors: Vec<Vec<f64>> = Vec::with_capacity(n_levels);
    let mut eigenvectors = Vec::with_capacity(n_levels);
    let mut expanded_residuals = Vec::with_capacity(n_levels);
    let w = sqrt(grid.weight());
    for &lambda in &h_eigenvalues {
        let v = gram.eigenvector(lambda, &real_vectors);
        let values = v.iter().zip(&node_phase).map(|(x, ph)| ph * (*x / w)).collect();
        let f = GridFunction::from_values(*grid, Stagger::Nodes, values)?;
        let h0 = apply_h_expanded(k, dc.eta, &f)?;
        expanded_residuals.push(h0.sub(&f.scaled(Complex::new(lambda, 0.0)))?.norm());
        real_vectors.push(v);
        eigenvectors.push(f);
    }
    Ok(EigenReport {
        params: *params,
        k,
        grid_size: grid.size,
        h_eigenvalues,
        partner_eigenvalues,
        eigenvectors,
        expanded_residuals,
    })
}

/// One compared level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelResidual {
    /// Level index `n`.
    pub n: usize,
    /// Oracle eigenvalue.
    pub oracle: f64,
    /// Closed-form `e_n`.
    pub closed: f64,
    /// `|oracle - closed| / |closed|`, or divided by the mean level spacing when `closed = 0`.
    pub relative: f64,
}

/// Level-by-level comparison of an [`EigenReport`] with a [`SpectrumTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Per-level residuals.
    pub levels: Vec<LevelResidual>,
    /// Tolerance applied.
    pub tolerance: f64,
    /// `true` when every level is within tolerance.
    pub passed: bool,
}

impl ComparisonReport {
    /// Largest relative residual.
    pub fn max_relative(&self) -> f64 {
        self.levels.iter().map(|l| l.relative).fold(0.0, f64::max)
    }
}

fn relative_residuals(oracle: &[f64], closed: &[f64]) -> Vec<LevelResidual> {
    let spacing = (closed[closed.len() - 1] - closed[0]) / (closed.len() - 1).max(1) as f64;
    oracle
        .iter()
        .zip(closed)
        .enumerate()
        .map(|(n, (&o, &c))| {
            let denom = if c != 0.0 { abs(c) } else { abs(spacing) };
            LevelResidual {
                n,
                oracle: o,
                closed: c,
                relative: abs(o - c) / denom,
            }
        })
        .collect()
}

/// Compares the lowest `levels` eigenvalues against `e_n` of `table`.
pub fn compare_to_closed_form(
    report: &EigenReport,
    table: &SpectrumTable,
    levels: usize,
    tolerance: f64,
) -> Result<ComparisonReport> {
    if levels > report.h_eigenvalues.len() || levels > table.rows.len() || levels < 2 {
        return Err(Error::LevelMismatch {
            left: report.h_eigenvalues.len(),
            right: table.rows.len(),
        });
    }
    if report.k != table.branch.k || report.params != table.params {
        return Err(Error::InvalidBranch {
            branch: table.branch.kind.as_str(),
            reason: "table and report describe different parameters",
        });
    }
    let closed: Vec<f64> = table.rows[..levels].iter().map(|r| r.e_n).collect();
    let levels = relative_residuals(&report.h_eigenvalues[..closed.len()], &closed);
    let passed = levels.iter().all(|l| l.relative <= tolerance);
    Ok(ComparisonReport {
        levels,
        tolerance,
        passed,
    })
}

/// Grid-refinement study on three sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Grid sizes, coarse to fine.
    pub sizes: [usize; 3],
    /// Relative residual per size and level.
    pub residuals: [Vec<f64>; 3],
    /// Observed order per level from the two finer pairs, `log(r1/r2)/log(h1/h2)`.
    pub orders: Vec<f64>,
    /// Relative residual of the Richardson extrapolation from the two finest grids.
    pub richardson: Vec<f64>,
    /// Oracle eigenvalues per size.
    pub eigenvalues: [Vec<f64>; 3],
}

/// Runs [`diagonalize_h`] on three grids and compares each against `table`.
pub fn convergence_study(
    dc: &DerivedConstants,
    params: &ModelParams,
    table: &SpectrumTable,
    sizes: [usize; 3],
    levels: usize,
) -> Result<ConvergenceReport> {
    let k = table.branch.k;
    let closed: Vec<f64> = table.rows.iter().take(levels).map(|r| r.e_n).collect();
    if closed.len() < levels {
        return Err(Error::LevelMismatch {
            left: levels,
            right: table.rows.len(),
        });
    }
    let mut eigs: [Vec<f64>; 3] = Default::default();
    let mut res: [Vec<f64>; 3] = Default::default();
    let mut hs = [0.0; 3];
    for (slot, &n) in sizes.iter().enumerate() {
        let grid = make_grid(params.beta, n)?;
        hs[slot] = grid.h;
        let report = diagonalize_h(dc, params, k, &grid, levels.max(2))?;
        let cmp = compare_to_closed_form(&report, table, levels, f64::INFINITY)?;
        res[slot] = cmp.levels.iter().map(|l| l.relative).collect();
        eigs[slot] = report.h_eigenvalues[..levels].to_vec();
    }
    let ratio = hs[1] / hs[2];
    let orders = (0..levels).map(|i| log(res[1][i] / res[2][i]) / log(ratio)).collect();
    let r2 = ratio * ratio;
    let extrapolated: Vec<f64> = (0..levels)
        .map(|i| (r2 * eigs[2][i] - eigs[1][i]) / (r2 - 1.0))
        .collect();
    let richardson = relative_residuals(&extrapolated, &closed)
        .iter()
        .map(|l| l.relative)
        .collect();
    Ok(ConvergenceReport {
        sizes,
        residuals: res,
        orders,
        richardson,
        eigenvalues: eigs,
    })
}

/// Largest relative difference between the eigenvalues at two gauge parameters.
pub fn lambda_invariance_check(
    first: &ModelParams,
    second: &ModelParams,
    k: i32,
    grid: &RadialGrid,
    levels: usize,
) -> Result<f64> {
    if first.with_lambda(second.lambda) != *second {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: "parameter sets must differ only in lambda",
        });
    }
    let d1 = DerivedConstants::from_params(first)?;
    let d2 = DerivedConstants::from_params(second)?;
    let e1 = diagonalize_h(&d1, first, k, grid, levels)?.h_eigenvalues;
    let e2 = diagonalize_h(&d2, second, k, grid, levels)?.h_eigenvalues;
    Ok(e1
        .iter()
        .zip(&e2)
        .map(|(a, b)| {
            let scale = abs(*a).max(abs(*b));
            if scale == 0.0 {
                0.0
            } else {
                abs(a - b) / scale
            }
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{Branch, BranchKind};
    use crate::spectrum::spectrum_table;
    use crate::wavefun::ground_state_wf;
    use crate::HalfInt;

    fn set_a() -> ModelParams {
        ModelParams::new(0.04, 0.04, 0.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn set_a_levels_and_zero_mode() {
        let p = set_a();
        let dc = DerivedConstants::from_params(&p).unwrap();
        let grid = make_grid(p.beta, 1000).unwrap();
        let report = diagonalize_h(&dc, &p, 1, &grid, 5).unwrap();
        let table = spectrum_table(BranchKind::ZeroGS, &p, HalfInt::from_twice(1), 8).unwrap();
        let cmp = compare_to_closed_form(&report, &table, 5, 1e-4).unwrap();
        assert!(cmp.passed, "{cmp:?}");
        assert!(report.has_zero_mode());
        assert!(report.partner_mismatch() < 1e-8 * report.h_eigenvalues[4]);
        assert_eq!(report.partner_eigenvalues.len(), 6);
        assert!(report.partner_eigenvalues[0] <= 1e-10 * report.gap());
        let gs = ground_state_wf(&Branch::new(BranchKind::ZeroGS, 1, &dc), &dc, p.beta, 1).unwrap();
        assert!(report.ground_state_overlap(&gs).unwrap() > 1.0 - 1e-9);
        for v in &report.eigenvectors {
            assert!((v.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn no_zero_mode_below_half() {
        // xi_tilde ~ 0.07: the lowest eigenvalue of H is strictly positive.
        let p = ModelParams::new(25.0, 0.04, 0.0, 1.0, 1.0).unwrap();
        let dc = DerivedConstants::from_params(&p).unwrap();
        let report = diagonalize_h(&dc, &p, 1, &make_grid(p.beta, 1000).unwrap(), 3).unwrap();
        assert!(!report.has_zero_mode());
        assert!(report.partner_mismatch() < 1e-8 * report.h_eigenvalues[2]);
    }

    #[test]
    fn second_order_convergence() {
        let p = set_a();
        let dc = DerivedConstants::from_params(&p).unwrap();
        let table = spectrum_table(BranchKind::ZeroGS, &p, HalfInt::from_twice(1), 6).unwrap();
        let study = convergence_study(&dc, &p, &table, [500, 1000, 2000], 4).unwrap();
        for (order, rich) in study.orders.iter().zip(&study.richardson).skip(1) {
            assert!((order - 2.0).abs() < 0.05, "order {order}");
            assert!(*rich < study.residuals[2][1] / 10.0);
        }
    }

    #[test]
    fn gauge_invariance() {
        let p = set_a();
        let grid = make_grid(p.beta, 500).unwrap();
        let d = lambda_invariance_check(&p.with_lambda(0.0), &p.with_lambda(1.0), 1, &grid, 4).unwrap();
        assert!(d < 1e-10);
        let other = ModelParams::new(0.05, 0.04, 1.0, 1.0, 1.0).unwrap();
        assert!(lambda_invariance_check(&p, &other, 1, &grid, 4).is_err());
    }

    #[test]
    fn rejections() {
        let p = set_a();
        let dc = DerivedConstants::from_params(&p).unwrap();
        assert!(matches!(
            diagonalize_h(&dc, &p, 1, &make_grid(p.beta, 100).unwrap(), 4),
            Err(Error::GridTooSmall { .. })
        ));
        let grid = make_grid(p.beta, 300).unwrap();
        assert!(diagonalize_h(&dc, &p, 1, &grid, 1).is_err());
        assert!(diagonalize_h(&dc, &p, 1, &grid, 13).is_err());
        let report = diagonalize_h(&dc, &p, 1, &grid, 3).unwrap();
        let table = spectrum_table(BranchKind::ZeroGS, &p, HalfInt::from_twice(1), 8).unwrap();
        assert!(matches!(
            compare_to_closed_form(&report, &table, 5, 1.0),
            Err(Error::LevelMismatch { .. })
        ));
        let table3 = spectrum_table(BranchKind::ZeroGS, &p, HalfInt::from_twice(3), 8).unwrap();
        assert!(compare_to_closed_form(&report, &table3, 3, 1.0).is_err());
    }

    #[test]
    fn zero_closed_value_uses_spacing() {
        let r = relative_residuals(&[1e-9, 2.0, 4.0], &[0.0, 2.0, 4.0]);
        assert!((r[0].relative - 0.5e-9).abs() < 1e-20);
        assert_eq!(r[1].relative, 0.0);
    }
}
