//! Radial momentum grid, ladder operators and the momentum-square form.
//!
//! All numerics use `p = sin(theta)/sqrt(beta)`, which maps `0 < p < 1/sqrt(beta)`
//! onto `0 < theta < pi/2` and turns the measure `dp/sqrt(1 - beta p^2)` into
//! `dtheta/sqrt(beta)`. Functions live either on the interior nodes
//! `theta_i = (i+1) h` or on the cell midpoints `(i + 1/2) h`, with
//! `h = (pi/2)/(N+1)` and zero values at both walls.

use alloc::vec;
use alloc::vec::Vec;

use crate::deformation::DerivedConstants;
use crate::eigen::BidiagonalChain;
use crate::math::{abs, cis, cos, log, sin, sqrt, tan, unit_phase, FRAC_PI_2};
use crate::{Complex, Error, Result};

/// Smallest admissible grid.
pub const MIN_GRID: usize = 16;

/// Uniform grid on `(0, pi/2)` with `size` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    /// Momentum deformation parameter.
    pub beta: f64,
    /// Number of interior nodes `N`.
    pub size: usize,
    /// Spacing `(pi/2)/(N+1)`.
    pub h: f64,
}

/// Builds a [`RadialGrid`].
pub fn make_grid(beta: f64, size: usize) -> Result<RadialGrid> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: "must be finite and > 0",
        });
    }
    if size < MIN_GRID {
        return Err(Error::GridTooSmall {
            min: MIN_GRID,
            got: size,
        });
    }
    Ok(RadialGrid {
        beta,
        size,
        h: FRAC_PI_2 / (size as f64 + 1.0),
    })
}

/// Which set of points a grid function is sampled on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stagger {
    /// `N` interior nodes.
    Nodes,
    /// `N + 1` cell midpoints.
    Midpoints,
}

impl RadialGrid {
    /// `theta` of interior node `i`.
    pub fn theta_node(&self, i: usize) -> f64 {
        (i as f64 + 1.0) * self.h
    }

    /// `theta` of midpoint `i`, between nodes `i - 1` and `i`.
    pub fn theta_mid(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.h
    }

    /// All interior node angles.
    pub fn theta_nodes(&self) -> Vec<f64> {
        (0..self.size).map(|i| self.theta_node(i)).collect()
    }

    /// All interior node momenta.
    pub fn p_nodes(&self) -> Vec<f64> {
        (0..self.size).map(|i| self.p_of(self.theta_node(i))).collect()
    }

    /// `sin(theta)/sqrt(beta)`.
    pub fn p_of(&self, theta: f64) -> f64 {
        sin(theta) / sqrt(self.beta)
    }

    /// Number of points for a stagger.
    pub fn len(&self, stagger: Stagger) -> usize {
        match stagger {
            Stagger::Nodes => self.size,
            Stagger::Midpoints => self.size + 1,
        }
    }

    /// Angle of point `i`.
    pub fn theta(&self, stagger: Stagger, i: usize) -> f64 {
        match stagger {
            Stagger::Nodes => self.theta_node(i),
            Stagger::Midpoints => self.theta_mid(i),
        }
    }

    /// Quadrature weight `h/sqrt(beta)` shared by every point.
    pub fn weight(&self) -> f64 {
        self.h / sqrt(self.beta)
    }
}

/// Complex samples on a grid; the walls carry implicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    /// Samples aligned with the grid points.
    pub values: Vec<Complex>,
    /// Owning grid.
    pub grid: RadialGrid,
    /// Node or midpoint sampling.
    pub stagger: Stagger,
}

impl GridFunction {
    /// Zero function.
    pub fn zeros(grid: RadialGrid, stagger: Stagger) -> Self {
        GridFunction {
            values: vec![Complex::new(0.0, 0.0); grid.len(stagger)],
            grid,
            stagger,
        }
    }

    /// Samples `f(theta)`.
    pub fn sample<F: FnMut(f64) -> Complex>(grid: RadialGrid, stagger: Stagger, mut f: F) -> Self {
        let values = (0..grid.len(stagger)).map(|i| f(grid.theta(stagger, i))).collect();
        GridFunction { values, grid, stagger }
    }

    /// Wraps explicit samples.
    pub fn from_values(grid: RadialGrid, stagger: Stagger, values: Vec<Complex>) -> Result<Self> {
        if values.len() != grid.len(stagger) {
            return Err(Error::GridMismatch);
        }
        Ok(GridFunction { values, grid, stagger })
    }

    /// Discrete norm.
    pub fn norm(&self) -> f64 {
        sqrt(self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.weight())
    }

    /// `self * c`.
    pub fn scaled(&self, c: Complex) -> Self {
        GridFunction {
            values: self.values.iter().map(|v| v * c).collect(),
            ..*self
        }
    }

    /// `self - other`.
    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.check_same(other)?;
        Ok(GridFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            ..*self
        })
    }

    fn check_same(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid || self.stagger != other.stagger {
            Err(Error::GridMismatch)
        } else {
            Ok(())
        }
    }
}

/// `<f, g> = sum conj(f_i) g_i h/sqrt(beta)`.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Result<Complex> {
    f.check_same(g)?;
    let s: Complex = f.values.iter().zip(&g.values).map(|(a, b)| a.conj() * b).sum();
    Ok(s * f.grid.weight())
}

/// Operator identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorLabel {
    /// Lowering operator `b-`.
    BMinus,
    /// Raising operator `b+`, assembled from its own formula.
    BPlus,
    /// Conjugate transpose of another operator.
    Adjoint,
}

/// Two-point staggered operator between nodes and midpoints.
///
/// From nodes: `out[i] = left[i] f[i-1] + right[i] f[i]` for the `N + 1`
/// midpoints, with `f[-1] = f[N] = 0`.
/// From midpoints: `out[c] = left[c] u[c] + right[c] u[c+1]` for the `N` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    /// Owning grid.
    pub grid: RadialGrid,
    /// What the operator represents.
    pub label: OperatorLabel,
    /// Input sampling.
    pub domain: Stagger,
    left: Vec<Complex>,
    right: Vec<Complex>,
}

fn zero() -> Complex {
    Complex::new(0.0, 0.0)
}

impl OperatorMatrix {
    /// Output sampling.
    pub fn range(&self) -> Stagger {
        match self.domain {
            Stagger::Nodes => Stagger::Midpoints,
            Stagger::Midpoints => Stagger::Nodes,
        }
    }

    /// Applies the operator.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if f.grid != self.grid || f.stagger != self.domain {
            return Err(Error::GridMismatch);
        }
        let n = self.grid.size;
        let v = &f.values;
        let values = match self.domain {
            Stagger::Nodes => (0..=n)
                .map(|i| {
                    let l = if i > 0 { self.left[i] * v[i - 1] } else { zero() };
                    let r = if i < n { self.right[i] * v[i] } else { zero() };
                    l + r
                })
                .collect(),
            Stagger::Midpoints => (0..n).map(|c| self.left[c] * v[c] + self.right[c] * v[c + 1]).collect(),
        };
        Ok(GridFunction {
            values,
            grid: self.grid,
            stagger: self.range(),
        })
    }

    /// Conjugate transpose; the shared quadrature weight makes this the
    /// adjoint for [`inner_product`].
    pub fn adjoint(&self) -> OperatorMatrix {
        let n = self.grid.size;
        let (left, right) = match self.domain {
            Stagger::Nodes => (
                (0..n).map(|c| self.right[c].conj()).collect(),
                (0..n).map(|c| self.left[c + 1].conj()).collect(),
            ),
            Stagger::Midpoints => {
                let mut left = vec![zero(); n + 1];
                let mut right = vec![zero(); n + 1];
                for c in 0..n {
                    right[c] = self.left[c].conj();
                    left[c + 1] = self.right[c].conj();
                }
                (left, right)
            }
        };
        OperatorMatrix {
            grid: self.grid,
            label: OperatorLabel::Adjoint,
            domain: self.range(),
            left,
            right,
        }
    }

    /// Dense row-major form.
    pub fn to_dense(&self) -> Vec<Vec<Complex>> {
        let n = self.grid.size;
        match self.domain {
            Stagger::Nodes => (0..=n)
                .map(|i| {
                    let mut row = vec![zero(); n];
                    if i > 0 {
                        row[i - 1] = self.left[i];
                    }
                    if i < n {
                        row[i] = self.right[i];
                    }
                    row
                })
                .collect(),
            Stagger::Midpoints => (0..n)
                .map(|c| {
                    let mut row = vec![zero(); n + 1];
                    row[c] = self.left[c];
                    row[c + 1] = self.right[c];
                    row
                })
                .collect(),
        }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.left.iter().chain(&self.right).map(|z| z.norm_sqr()).sum())
    }

    /// Frobenius distance to an operator of the same shape.
    pub fn frobenius_distance(&self, other: &OperatorMatrix) -> Result<f64> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(Error::GridMismatch);
        }
        let d: f64 = self
            .left
            .iter()
            .zip(&other.left)
            .chain(self.right.iter().zip(&other.right))
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok(sqrt(d))
    }

    /// Phase-normalized chain of a node-to-midpoint operator.
    ///
    /// Returns `(chain, node_phases, mid_phases)` with
    /// `B = diag(mid_phases) |B| diag(node_phases)^H`.
    pub fn phase_normalized(&self) -> Result<(BidiagonalChain, Vec<Complex>, Vec<Complex>)> {
        if self.domain != Stagger::Nodes {
            return Err(Error::GridMismatch);
        }
        let n = self.grid.size;
        let mut mid = vec![Complex::new(1.0, 0.0); n + 1];
        let mut node = vec![Complex::new(1.0, 0.0); n];
        let mut path = Vec::with_capacity(2 * n);
        for c in 0..n {
            // Row c to column c through B[c][c].
            let upper = self.right[c];
            node[c] = mid[c] * unit_phase(upper).conj();
            path.push(upper.norm());
            // Column c to row c+1 through B[c+1][c].
            let lower = self.left[c + 1];
            mid[c + 1] = node[c] * unit_phase(lower);
            path.push(lower.norm());
        }
        Ok((BidiagonalChain::new(path), node, mid))
    }
}

fn check_k(k: i32) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidParameter {
            name: "k",
            reason: "must be nonzero",
        })
    } else {
        Ok(())
    }
}

fn centrifugal(k: i32, beta: f64, theta: f64) -> f64 {
    -f64::from(k) * sqrt(beta) * cos(theta) / sin(theta)
}

fn confining(xi: f64, beta: f64, theta: f64) -> f64 {
    xi * tan(theta) / sqrt(beta)
}

/// Half the potential on the link from `node` to `mid`.
///
/// The confining part sits on the midpoint. The centrifugal part sits on the
/// midpoint for `k > 0` and on the node for `k < 0`, so that the link is exact
/// to second order on the `theta^k` and `theta^(1-k)` behaviour at the origin.
fn link_potential(k: i32, xi: f64, beta: f64, node: f64, mid: f64) -> f64 {
    let at = if k > 0 { mid } else { node };
    0.5 * (centrifugal(k, beta, at) + confining(xi, beta, mid))
}

/// Gauge phase `exp(i (zeta/beta) ln cos theta)` carrying the imaginary part of `eta`.
fn gauge(zeta: f64, beta: f64, theta: f64) -> Complex {
    cis(zeta / beta * log(cos(theta)))
}

/// `b- = sqrt(beta) d/dtheta - k sqrt(beta) cot + conj(eta) tan/sqrt(beta)` from nodes to midpoints.
///
/// The imaginary part of `eta` enters through gauge links, so operators at
/// different `zeta` are exactly unitarily equivalent.
pub fn build_b_minus(dc: &DerivedConstants, k: i32, grid: &RadialGrid) -> Result<OperatorMatrix> {
    build_b_minus_with(k, dc.xi, dc.zeta, grid)
}

/// [`build_b_minus`] for explicit `(k, xi, zeta)`.
pub fn build_b_minus_with(k: i32, xi: f64, zeta: f64, grid: &RadialGrid) -> Result<OperatorMatrix> {
    check_k(k)?;
    let n = grid.size;
    let beta = grid.beta;
    let d = sqrt(beta) / grid.h;
    let mut left = vec![zero(); n + 1];
    let mut right = vec![zero(); n + 1];
    for i in 0..=n {
        let t = grid.theta_mid(i);
        let out = gauge(zeta, beta, t).conj();
        if i > 0 {
            let tn = grid.theta_node(i - 1);
            left[i] = out * (link_potential(k, xi, beta, tn, t) - d) * gauge(zeta, beta, tn);
        }
        if i < n {
            let tn = grid.theta_node(i);
            right[i] = out * (link_potential(k, xi, beta, tn, t) + d) * gauge(zeta, beta, tn);
        }
    }
    Ok(OperatorMatrix {
        grid: *grid,
        label: OperatorLabel::BMinus,
        domain: Stagger::Nodes,
        left,
        right,
    })
}

/// `b+ = -sqrt(beta) d/dtheta - k sqrt(beta) cot + eta tan/sqrt(beta)` from midpoints to nodes.
///
/// Each link carries the same potential as the matching link of `b-`.
pub fn build_b_plus(dc: &DerivedConstants, k: i32, grid: &RadialGrid) -> Result<OperatorMatrix> {
    check_k(k)?;
    let n = grid.size;
    let beta = grid.beta;
    let d = sqrt(beta) / grid.h;
    let (xi, zeta) = (dc.xi, dc.zeta);
    let mut left = vec![zero(); n];
    let mut right = vec![zero(); n];
    for c in 0..n {
        let out = gauge(zeta, beta, grid.theta_node(c)).conj();
        let (tc, ta, tb) = (grid.theta_node(c), grid.theta_mid(c), grid.theta_mid(c + 1));
        left[c] = out * (d + link_potential(k, xi, beta, tc, ta)) * gauge(zeta, beta, ta);
        right[c] = out * (-d + link_potential(k, xi, beta, tc, tb)) * gauge(zeta, beta, tb);
    }
    Ok(OperatorMatrix {
        grid: *grid,
        label: OperatorLabel::BPlus,
        domain: Stagger::Midpoints,
        left,
        right,
    })
}

/// `b+` with parameters `(k, eta)` applied on nodes by central differences.
pub fn apply_b_plus_nodes(k: i32, eta: Complex, f: &GridFunction) -> Result<GridFunction> {
    check_k(k)?;
    if f.stagger != Stagger::Nodes {
        return Err(Error::GridMismatch);
    }
    let grid = f.grid;
    let n = grid.size;
    let sb = sqrt(grid.beta);
    let v = &f.values;
    let values = (0..n)
        .map(|i| {
            let t = grid.theta_node(i);
            let prev = if i > 0 { v[i - 1] } else { zero() };
            let next = if i + 1 < n { v[i + 1] } else { zero() };
            let pot = eta * (tan(t) / sb) - f64::from(k) * sb * cos(t) / sin(t);
            (next - prev) * (-sb / (2.0 * grid.h)) + pot * v[i]
        })
        .collect();
    Ok(GridFunction {
        values,
        grid,
        stagger: Stagger::Nodes,
    })
}

/// Expanded second-order form of `b+ b-` applied on nodes:
/// `-beta f'' + 2 i zeta tan f' + [(k^2-k) beta csc^2 + (|eta|^2/beta - conj(eta)) sec^2
///  - 2 k xi - k^2 beta - |eta|^2/beta] f`.
pub fn apply_h_expanded(k: i32, eta: Complex, f: &GridFunction) -> Result<GridFunction> {
    check_k(k)?;
    if f.stagger != Stagger::Nodes {
        return Err(Error::GridMismatch);
    }
    let grid = f.grid;
    let n = grid.size;
    let (beta, h) = (grid.beta, grid.h);
    let kf = f64::from(k);
    let eta2 = eta.norm_sqr();
    let v = &f.values;
    let values = (0..n)
        .map(|i| {
            let t = grid.theta_node(i);
            let prev = if i > 0 { v[i - 1] } else { zero() };
            let next = if i + 1 < n { v[i + 1] } else { zero() };
            let (s, c) = (sin(t), cos(t));
            let second = (next - 2.0 * v[i] + prev) / (h * h);
            let first = (next - prev) / (2.0 * h);
            let pot = Complex::new((kf * kf - kf) * beta / (s * s), 0.0) + (eta2 / beta - eta.conj()) / (c * c)
                - 2.0 * kf * eta.re
                - kf * kf * beta
                - eta2 / beta;
            -second * beta + Complex::new(0.0, 2.0 * eta.im * tan(t)) * first + pot * v[i]
        })
        .collect();
    Ok(GridFunction {
        values,
        grid,
        stagger: Stagger::Nodes,
    })
}

/// Result of [`p_squared_expectation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PSquared {
    /// `<P^2>` for the state `R/p`.
    pub value: f64,
    /// Imaginary part accumulated by the complex form; rounding only.
    pub imag_residue: f64,
    /// Fitted exponent of the per-shell contributions near `beta p^2 = 1`;
    /// the integral converges when it is positive.
    pub tail_exponent: f64,
}

/// `<R/p | P^2 | R/p>` with the `p^2 dp/sqrt(1-beta p^2)` measure for orbital number `l`.
///
/// Evaluated as the Hermitian form
/// `int dtheta/sqrt(beta) [ kappa^2 beta (|R' - cot R|^2 + l(l+1) cot^2 |R|^2)
///  + mu^2 tan^2 |R|^2 / beta + 2 kappa mu tan Im(conj(R) R') ]`
/// with `kappa = sqrt(alpha/beta)` and `mu = 1 - lambda`, using one midpoint per cell.
pub fn p_squared_expectation(
    dc: &DerivedConstants,
    params: &crate::ModelParams,
    l: u32,
    f: &GridFunction,
) -> Result<PSquared> {
    params.validate()?;
    if f.stagger != Stagger::Nodes {
        return Err(Error::GridMismatch);
    }
    if abs(dc.beta - params.beta) > 1e-14 * params.beta || abs(f.grid.beta - params.beta) > 1e-14 * params.beta {
        return Err(Error::GridMismatch);
    }
    let grid = f.grid;
    let n = grid.size;
    let beta = params.beta;
    let kappa = sqrt(params.alpha / beta);
    let mu = 1.0 - params.lambda;
    let ll = f64::from(l) * (f64::from(l) + 1.0);
    let v = &f.values;
    let mut cells = Vec::with_capacity(n + 1);
    let mut imag = 0.0;
    for i in 0..=n {
        let left = if i > 0 { v[i - 1] } else { zero() };
        let right = if i < n { v[i] } else { zero() };
        let t = grid.theta_mid(i);
        let r = 0.5 * (left + right);
        let dr = (right - left) / grid.h;
        let (cot, tn) = (cos(t) / sin(t), tan(t));
        let kinetic = kappa * kappa * beta * ((dr - r * cot).norm_sqr() + ll * cot * cot * r.norm_sqr());
        let confining = mu * mu * tn * tn * r.norm_sqr() / beta;
        // 2 Im(conj(R) R') written as the Hermitian combination -i (conj(R) R' - R conj(R')).
        let cross = Complex::new(0.0, -1.0) * (r.conj() * dr - r * dr.conj()) * (kappa * mu * tn);
        imag += cross.im;
        cells.push(kinetic + confining + cross.re);
    }
    let w = grid.weight();
    let value: f64 = cells.iter().sum::<f64>() * w;
    let tail_exponent = tail_exponent(&cells);
    if tail_exponent <= 0.0 {
        return Err(Error::Divergent { tail_exponent });
    }
    Ok(PSquared {
        value,
        imag_residue: imag * w,
        tail_exponent,
    })
}

/// Fits `S(d) ~ d^tau` to dyadic shells of the cell contributions toward `theta = pi/2`.
fn tail_exponent(cells: &[f64]) -> f64 {
    let total: f64 = cells.iter().map(|c| abs(*c)).sum();
    if total == 0.0 {
        return f64::INFINITY;
    }
    // Shell s holds cells whose distance to the wall lies in [2^s, 2^(s+1)) cells.
    let n = cells.len();
    let mut shells: Vec<f64> = Vec::new();
    let mut lo = 1usize;
    while 2 * lo <= n / 4 {
        let s: f64 = (lo..2 * lo).map(|j| abs(cells[n - j])).sum();
        shells.push(s);
        lo *= 2;
    }
    // Skip the two innermost shells, which resolve the singular behaviour poorly.
    let usable: Vec<f64> = shells.iter().copied().skip(2).collect();
    if usable.len() < 3 {
        return f64::INFINITY;
    }
    let near: f64 = usable[..3].iter().sum();
    if near <= 1e-13 * total {
        return f64::INFINITY;
    }
    let mut acc = 0.0;
    let mut count = 0.0;
    for w in usable[..4.min(usable.len())].windows(2) {
        if w[0] > 0.0 && w[1] > 0.0 {
            acc += libm::log2(w[1] / w[0]);
            count += 1.0;
        }
    }
    if count == 0.0 {
        f64::INFINITY
    } else {
        acc / count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{derive_constants, Branch, BranchKind};
    use crate::wavefun::{ground_state_wf, jacobi_inner, JacobiForm};
    use crate::ModelParams;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn set_a() -> ModelParams {
        ModelParams::new(0.04, 0.04, 0.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn grid_examples() {
        let g = make_grid(1.0, 3);
        assert_eq!(g, Err(Error::GridTooSmall { min: MIN_GRID, got: 3 }));
        let g = RadialGrid {
            beta: 1.0,
            size: 3,
            h: FRAC_PI_2 / 4.0,
        };
        let pi = core::f64::consts::PI;
        let t = g.theta_nodes();
        assert_relative_eq!(t[0], pi / 8.0, max_relative = 1e-15);
        assert_relative_eq!(t[1], pi / 4.0, max_relative = 1e-15);
        assert_relative_eq!(t[2], 3.0 * pi / 8.0, max_relative = 1e-15);
        let p = g.p_nodes();
        assert_relative_eq!(p[1], 0.5f64.sqrt(), max_relative = 1e-15);

        let g = make_grid(0.04, 100).unwrap();
        let p = g.p_nodes();
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert!(p[0] > 0.0 && *p.last().unwrap() < 5.0);

        let g = make_grid(1.0, 1000).unwrap();
        // N+1 cells of width h cover (0, pi/2) exactly.
        assert_relative_eq!(g.weight() * 1001.0, FRAC_PI_2, max_relative = 1e-12);
        assert!(make_grid(0.0, 100).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let g = make_grid(0.25, 1000).unwrap();
        let one = GridFunction::sample(g, Stagger::Nodes, |_| Complex::new(1.0, 0.0));
        let zero = GridFunction::zeros(g, Stagger::Nodes);
        assert_eq!(inner_product(&zero, &one).unwrap(), Complex::new(0.0, 0.0));
        let v = inner_product(&one, &one).unwrap();
        // Missing one boundary cell: (pi/2)/sqrt(beta) * N/(N+1).
        assert_relative_eq!(v.re, FRAC_PI_2 / 0.5 * 1000.0 / 1001.0, max_relative = 1e-12);
        let mid = GridFunction::zeros(g, Stagger::Midpoints);
        assert_eq!(inner_product(&one, &mid), Err(Error::GridMismatch));
        let other = GridFunction::zeros(make_grid(0.25, 999).unwrap(), Stagger::Nodes);
        assert_eq!(inner_product(&one, &other), Err(Error::GridMismatch));
        // Sesquilinearity.
        let i = Complex::new(0.0, 1.0);
        let f = GridFunction::sample(g, Stagger::Nodes, |t| Complex::new(t.sin(), t.cos()));
        assert!((inner_product(&f.scaled(i), &one).unwrap() - (-i) * inner_product(&f, &one).unwrap()).norm() < 1e-12);
        assert!((inner_product(&one, &f.scaled(i)).unwrap() - i * inner_product(&one, &f).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn different_k_ground_states_overlap() {
        let p = set_a();
        let dc = derive_constants(&p).unwrap();
        let f = ground_state_wf(&Branch::new(BranchKind::ZeroGS, 1, &dc), &dc, p.beta, 1).unwrap();
        let g = ground_state_wf(&Branch::new(BranchKind::ZeroGS, 2, &dc), &dc, p.beta, 2).unwrap();
        let exact = jacobi_inner(&f, &g).unwrap();
        let mut prev = f64::INFINITY;
        for n in [1000, 2000, 4000] {
            let grid = make_grid(p.beta, n).unwrap();
            let d = (inner_product(&f.sample(&grid, Stagger::Nodes), &g.sample(&grid, Stagger::Nodes)).unwrap()
                - exact)
                .norm();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-8);
    }

    #[test]
    fn operators_reject_bad_input() {
        let p = set_a();
        let dc = derive_constants(&p).unwrap();
        let g = make_grid(p.beta, 64).unwrap();
        assert!(build_b_minus(&dc, 0, &g).is_err());
        assert!(build_b_plus(&dc, 0, &g).is_err());
        let b = build_b_minus(&dc, 1, &g).unwrap();
        let zero = GridFunction::zeros(g, Stagger::Nodes);
        assert!(b.apply(&zero).unwrap().values.iter().all(|v| v.norm() == 0.0));
        assert_eq!(
            b.apply(&GridFunction::zeros(g, Stagger::Midpoints)),
            Err(Error::GridMismatch)
        );
        assert_eq!(b.range(), Stagger::Midpoints);
        assert_eq!(
            b.adjoint().adjoint(),
            OperatorMatrix {
                label: OperatorLabel::Adjoint,
                ..b.clone()
            }
        );
    }

    #[test]
    fn dense_form_matches_apply() {
        let p = ModelParams::new(0.3, 0.5, 0.1, 1.0, 1.0).unwrap();
        let dc = derive_constants(&p).unwrap();
        let g = make_grid(p.beta, 20).unwrap();
        let b = build_b_minus(&dc, 2, &g).unwrap();
        let f = GridFunction::sample(g, Stagger::Nodes, |t| Complex::new(t.sin(), t * t));
        let applied = b.apply(&f).unwrap();
        let dense = b.to_dense();
        assert_eq!(dense.len(), 21);
        for (row, out) in dense.iter().zip(&applied.values) {
            let s: Complex = row.iter().zip(&f.values).map(|(a, x)| a * x).sum();
            assert!((s - out).norm() < 1e-12 * out.norm().max(1.0));
        }
        let bp = build_b_plus(&dc, 2, &g).unwrap();
        assert!(bp.frobenius_distance(&b.adjoint()).unwrap() <= 1e-12 * bp.frobenius_norm());
    }

    #[test]
    fn ground_state_is_annihilated() {
        let p = set_a();
        let dc = derive_constants(&p).unwrap();
        let gs = ground_state_wf(&Branch::new(BranchKind::ZeroGS, 1, &dc), &dc, p.beta, 1).unwrap();
        let residual = |n| {
            let g = make_grid(p.beta, n).unwrap();
            let f = gs.sample(&g, Stagger::Nodes);
            build_b_minus(&dc, 1, &g).unwrap().apply(&f).unwrap().norm() / f.norm()
        };
        let (r1, r2) = (residual(1000), residual(2000));
        assert!(r2 < 1e-4);
        assert!(r1 / r2 > 3.5);
    }

    #[test]
    fn partner_zero_state_is_not_normalizable() {
        // p^(-k) (1 - beta p^2)^(-xi_tilde/2 + i zeta_tilde/2) solves b+ u = 0.
        let p = set_a();
        let dc = derive_constants(&p).unwrap();
        let norm = |n| {
            let g = make_grid(p.beta, n).unwrap();
            GridFunction::sample(g, Stagger::Nodes, |t| {
                let pp = g.p_of(t);
                let w = t.cos().powi(2);
                Complex::new(0.0, 0.5 * dc.zeta_tilde * w.ln()).exp() * pp.powi(-1) * w.powf(-dc.xi_tilde / 2.0)
            })
            .norm()
        };
        let (a, b, c) = (norm(250), norm(500), norm(1000));
        assert!(b > 2.0 * a && c > 2.0 * b);
    }

    fn p2_direct(params: &ModelParams, l: u32, r: impl Fn(f64) -> Complex, samples: usize) -> Complex {
        // Applies the momentum-square operator to psi = R/p in p and integrates with p^2 dp/sqrt(w).
        let beta = params.beta;
        let kappa = (params.alpha / beta).sqrt();
        let mu = 1.0 - params.lambda;
        let ll = f64::from(l * (l + 1));
        let psi = |p: f64| r((p * beta.sqrt()).asin()) / p;
        let h = 1e-4 / beta.sqrt();
        let dt = FRAC_PI_2 / samples as f64;
        let i = Complex::new(0.0, 1.0);
        let mut acc = Complex::new(0.0, 0.0);
        for s in 0..samples {
            let t = (s as f64 + 0.5) * dt;
            let p = t.sin() / beta.sqrt();
            if p < 2.0 * h || 1.0 - beta * (p + 2.0 * h).powi(2) <= 0.0 {
                continue;
            }
            let w = 1.0 - beta * p * p;
            let f = psi(p);
            let d1 = (psi(p + h) - psi(p - h)) / (2.0 * h);
            let d2 = (psi(p + h) - 2.0 * f + psi(p - h)) / (h * h);
            let op = -(d2 * w + d1 * (2.0 * w / p) - f * (ll * w / (p * p)) - d1 * (beta * p)) * (kappa * kappa)
                - i * (2.0 * kappa * mu * p) * d1
                + f * (Complex::new(mu, -kappa * beta) * (mu * p * p / w))
                - i * (3.0 * kappa * mu) * f;
            acc += f.conj() * op * (p * p) * (dt / beta.sqrt());
        }
        acc
    }

    #[test]
    fn momentum_square_matches_direct_operator() {
        let params = ModelParams::new(0.3, 0.5, 0.2, 1.0, 1.0).unwrap();
        let dc = derive_constants(&params).unwrap();
        let r = |t: f64| Complex::new(0.0, 0.7 * t).exp() * t.sin().powi(2) * t.cos().powi(3) * (1.0 + 0.3 * t.sin());
        for l in [0, 1, 2] {
            let direct = p2_direct(&params, l, r, 200_000);
            let g = make_grid(params.beta, 20_000).unwrap();
            let f = GridFunction::sample(g, Stagger::Nodes, r);
            let form = p_squared_expectation(&dc, &params, l, &f).unwrap();
            assert!(
                direct.im.abs() < 1e-5 * direct.re.abs(),
                "operator not Hermitian: {direct}"
            );
            assert_relative_eq!(form.value, direct.re, max_relative = 1e-5);
            assert!(form.imag_residue.abs() <= 1e-8 * form.value.abs());
        }
    }

    #[test]
    fn momentum_square_ground_state_and_divergence() {
        let p = set_a();
        let dc = derive_constants(&p).unwrap();
        let gs = ground_state_wf(&Branch::new(BranchKind::ZeroGS, 1, &dc), &dc, p.beta, 1).unwrap();
        let value = |n| {
            let g = make_grid(p.beta, n).unwrap();
            p_squared_expectation(&dc, &p, 0, &gs.sample(&g, Stagger::Nodes))
                .unwrap()
                .value
        };
        let (a, b) = (value(1000), value(2000));
        assert!(a > 0.0 && ((a - b) / b).abs() < 0.01);

        let zero = GridFunction::zeros(make_grid(p.beta, 500).unwrap(), Stagger::Nodes);
        assert_eq!(p_squared_expectation(&dc, &p, 0, &zero).unwrap().value, 0.0);

        // xi_tilde = 0.3 < 1/2: the zero-energy form is normalizable but P^2 diverges.
        let slow = ModelParams::new(1.0, 0.04, 0.5, 1.0, 0.3056).unwrap();
        let dcs = derive_constants(&slow).unwrap();
        assert!(dcs.xi_tilde < 0.5);
        let form = JacobiForm::new(dcs.xi_tilde - 0.5, 0.5, 0, Complex::new(1.0, 0.0), 0.0, slow.beta)
            .unwrap()
            .unit()
            .unwrap();
        let g = make_grid(slow.beta, 2000).unwrap();
        let err = p_squared_expectation(&dcs, &slow, 0, &form.sample(&g, Stagger::Nodes));
        assert!(
            matches!(err, Err(Error::Divergent { tail_exponent }) if tail_exponent < 0.0),
            "{err:?}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn ladder_operators_are_adjoint(
            alpha in 0.01f64..3.0, beta in 0.01f64..3.0, lambda in -2.0f64..2.0,
            mw in 0.1f64..20.0, k in prop_oneof![1i32..5, -5i32..-1],
            cf in proptest::collection::vec(-1.0f64..1.0, 8),
            cg in proptest::collection::vec(-1.0f64..1.0, 8),
        ) {
            let p = ModelParams::new(alpha, beta, lambda, 1.0, mw).unwrap();
            let dc = derive_constants(&p).unwrap();
            let g = make_grid(beta, 500).unwrap();
            let smooth = |c: Vec<f64>| move |t: f64| {
                let bump = (t * (FRAC_PI_2 - t)).powi(2);
                Complex::new(c[0] + c[1] * t + c[2] * t.cos() + c[3] * (3.0 * t).sin(), c[4] + c[5] * t * t + c[6] * (2.0 * t).cos() + c[7]) * bump
            };
            let f = GridFunction::sample(g, Stagger::Midpoints, smooth(cf.clone()));
            let u = GridFunction::sample(g, Stagger::Nodes, smooth(cg.clone()));
            let bp = build_b_plus(&dc, k, &g).unwrap();
            let bm = build_b_minus(&dc, k, &g).unwrap();
            let lhs = inner_product(&bp.apply(&f).unwrap(), &u).unwrap();
            let rhs = inner_product(&f, &bm.apply(&u).unwrap()).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-8 * f.norm() * u.norm());
        }
    }
}
