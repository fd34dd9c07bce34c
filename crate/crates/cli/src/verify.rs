//! Verification suites behind `sds verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sds_core::deformation::{derive_constants, physical_branch, rel_diff, uncertainty_bounds_raw};
use sds_core::oracle::{compare_to_closed_form, diagonalize_h, lambda_invariance_check};
use sds_core::radial::{build_b_minus, build_b_plus, inner_product, make_grid, GridFunction, RadialGrid, Stagger};
use sds_core::spectrum::{
    energy_sq_minus_msq_raw, positive_energy, spectrum_table, telescoped_closed_form, telescoped_sum,
};
use sds_core::wavefun::{ground_state_wf, jacobi_inner, recursion_large_component, RadialWavefunction};
use sds_core::{Branch, BranchKind, Complex, Error, HalfInt, ModelParams, QuantumNumbers};

use crate::args::{Suite, VerifyArgs};
use crate::commands::model;
use crate::report::{Meta, ParamsMeta, Report, Row};

/// Comparison direction of a [`Check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Passes when `value <= bound`.
    AtMost,
    /// Passes when `value >= bound`.
    AtLeast,
}

/// One verified quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    /// Suite name.
    pub suite: &'static str,
    /// What was measured.
    pub name: String,
    /// Measured value.
    pub value: f64,
    /// Acceptance bound.
    pub bound: f64,
    /// Direction of the bound.
    pub relation: Relation,
}

impl Check {
    fn at_most(suite: &'static str, name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            suite,
            name: name.into(),
            value,
            bound,
            relation: Relation::AtMost,
        }
    }

    fn at_least(suite: &'static str, name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            relation: Relation::AtLeast,
            ..Check::at_most(suite, name, value, bound)
        }
    }

    /// `false` for NaN values.
    pub fn passed(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.value <= self.bound,
            Relation::AtLeast => self.value >= self.bound,
        }
    }

    fn row(&self) -> Row {
        Row::new()
            .with("suite", self.suite)
            .with("check", self.name.clone())
            .with("value", self.value)
            .with(
                "relation",
                match self.relation {
                    Relation::AtMost => "<=",
                    Relation::AtLeast => ">=",
                },
            )
            .with("bound", self.bound)
            .with("passed", self.passed())
    }
}

/// Inputs shared by all suites.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    /// Model parameters.
    pub params: ModelParams,
    /// Total angular momentum.
    pub j: HalfInt,
    /// Physical branch for `(params, j, s)`.
    pub branch: Branch,
    /// Grid size.
    pub grid: usize,
    /// Oracle level tolerance.
    pub tolerance: f64,
    /// Oracle level count.
    pub levels: usize,
    /// Highest level in the normalization check.
    pub n_max: u32,
}

fn grid_order(coarse: f64, fine: f64, n_coarse: usize, n_fine: usize) -> f64 {
    (coarse / fine).ln() / ((n_fine as f64 + 1.0) / (n_coarse as f64 + 1.0)).ln()
}

fn oracle(ctx: &Context) -> Result<Vec<Check>, Error> {
    const S: &str = "oracle";
    let p = &ctx.params;
    let dc = derive_constants(p)?;
    let table = spectrum_table(ctx.branch.kind, p, ctx.j, ctx.levels as u32)?;
    let report = diagonalize_h(&dc, p, ctx.branch.k, &make_grid(p.beta, ctx.grid)?, ctx.levels)?;
    let cmp = compare_to_closed_form(&report, &table, ctx.levels, ctx.tolerance)?;
    let mut checks: Vec<Check> = cmp
        .levels
        .iter()
        .map(|l| Check::at_most(S, format!("level {} relative error", l.n), l.relative, ctx.tolerance))
        .collect();
    let expect_zero = ctx.branch.kind == BranchKind::ZeroGS;
    let zero_ratio = report.h_eigenvalues[0] / report.gap();
    checks.push(if expect_zero {
        Check::at_most(S, "zero mode present: lambda_0/gap", zero_ratio, 1e-6)
    } else {
        Check::at_least(S, "zero mode absent: lambda_0/gap", zero_ratio, 1e-6)
    });
    let top = report.h_eigenvalues.last().copied().unwrap_or(1.0);
    checks.push(Check::at_most(
        S,
        "partner spectrum mismatch",
        report.partner_mismatch() / top,
        1e-8,
    ));
    Ok(checks)
}

fn small_times_energy(wf: &RadialWavefunction, p: &ModelParams, j: HalfInt, n: u32, grid: &RadialGrid) -> GridFunction {
    let e = positive_energy(
        p.m,
        energy_sq_minus_msq_raw(wf.branch.kind, p.alpha, p.beta, p.m_omega(), j.value(), n),
    );
    let dc = derive_constants(p).expect("validated parameters");
    match &wf.small {
        Some(s) => s
            .sample(grid, Stagger::Midpoints)
            .scaled(Complex::new(e + p.m, 0.0) / dc.omega_tilde.conj()),
        None => GridFunction::zeros(*grid, Stagger::Midpoints),
    }
}

fn wavefunction(ctx: &Context) -> Result<Vec<Check>, Error> {
    const S: &str = "wavefunction";
    let p = &ctx.params;
    let dc = derive_constants(p)?;
    let br = ctx.branch;
    let wfs = (0..=ctx.n_max.max(6))
        .map(|n| RadialWavefunction::new(&br, &dc, p, &QuantumNumbers::new(br.s, ctx.j, n)?))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut norm = 0.0f64;
    for wf in &wfs[..=ctx.n_max as usize] {
        norm = norm.max((wf.joint_norm()? - 1.0).abs());
    }
    let mut ortho = 0.0f64;
    for n in 0..=6 {
        for m in n + 1..=6 {
            ortho = ortho.max(jacobi_inner(&wfs[n].large, &wfs[m].large)?.norm());
        }
    }
    let mut checks = vec![
        Check::at_most(
            S,
            format!("joint normalization |norm - 1|, n <= {}", ctx.n_max),
            norm,
            1e-8,
        ),
        Check::at_most(S, "orthogonality |<R_n, R_m>|, n != m <= 6", ortho, 1e-8),
    ];

    let half = (ctx.grid / 2).max(sds_core::radial::MIN_GRID);
    let mut residuals = [0.0f64; 2];
    for (slot, size) in [half, ctx.grid].into_iter().enumerate() {
        let grid = make_grid(p.beta, size)?;
        let b = build_b_minus(&dc, br.k, &grid)?;
        for (n, wf) in wfs.iter().take(4).enumerate() {
            let large = wf.large.sample(&grid, Stagger::Nodes);
            let diff = b
                .apply(&large)?
                .sub(&small_times_energy(wf, p, ctx.j, n as u32, &grid))?;
            residuals[slot] = residuals[slot].max(diff.norm() / large.norm());
        }
    }
    checks.push(Check::at_least(
        S,
        "intertwining convergence order, n <= 3",
        grid_order(residuals[0], residuals[1], half, ctx.grid),
        1.9,
    ));

    let grid = make_grid(p.beta, ctx.grid)?;
    let rec = recursion_large_component(&br, &dc, p.beta, 1, &grid)?;
    let closed = wfs[1].large.sample(&grid, Stagger::Nodes);
    let closed = closed.scaled(Complex::new(1.0 / closed.norm(), 0.0));
    let scale = closed.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let dev = rec
        .values
        .iter()
        .zip(&closed.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale;
    checks.push(Check::at_most(S, "recursion n=1 max pointwise deviation", dev, 1e-4));
    Ok(checks)
}

fn adjoint(ctx: &Context) -> Result<Vec<Check>, Error> {
    const S: &str = "adjoint";
    let p = &ctx.params;
    let dc = derive_constants(p)?;
    let grid = make_grid(p.beta, ctx.grid)?;
    let bm = build_b_minus(&dc, ctx.branch.k, &grid)?;
    let bp = build_b_plus(&dc, ctx.branch.k, &grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xad);
    let mut random = |stagger| {
        let values = (0..grid.len(stagger))
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        GridFunction::from_values(grid, stagger, values)
    };
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = random(Stagger::Midpoints)?;
        let g = random(Stagger::Nodes)?;
        let d = inner_product(&bp.apply(&f)?, &g)? - inner_product(&f, &bm.apply(&g)?)?;
        worst = worst.max(d.norm() / (f.norm() * g.norm()));
    }
    let mut checks = vec![
        Check::at_most(S, "|<b+ f, g> - <f, b- g>| / (|f| |g|), 20 random pairs", worst, 1e-8),
        Check::at_most(
            S,
            "|b+ - (b-)^H|_F / |b+|_F",
            bp.frobenius_distance(&bm.adjoint())? / bp.frobenius_norm(),
            1e-12,
        ),
    ];
    if ctx.branch.kind == BranchKind::ZeroGS {
        let gs = ground_state_wf(&ctx.branch, &dc, p.beta, ctx.branch.k)?;
        let half = (ctx.grid / 2).max(sds_core::radial::MIN_GRID);
        let residual = |size| -> Result<f64, Error> {
            let grid = make_grid(p.beta, size)?;
            let f = gs.sample(&grid, Stagger::Nodes);
            Ok(build_b_minus(&dc, ctx.branch.k, &grid)?.apply(&f)?.norm() / f.norm())
        };
        let (coarse, fine) = (residual(half)?, residual(ctx.grid)?);
        checks.push(Check::at_most(
            S,
            "ground-state annihilation |b- psi_0| / |psi_0|",
            fine,
            1e-4,
        ));
        checks.push(Check::at_least(
            S,
            "annihilation convergence order",
            grid_order(coarse, fine, half, ctx.grid),
            1.9,
        ));
    }
    Ok(checks)
}

fn lambda(ctx: &Context) -> Result<Vec<Check>, Error> {
    let p = &ctx.params;
    let grid = make_grid(p.beta, ctx.grid)?;
    let lambdas = [0.0, 0.5, 1.0];
    let mut worst = 0.0f64;
    for (i, &a) in lambdas.iter().enumerate() {
        for &b in &lambdas[i + 1..] {
            worst = worst.max(lambda_invariance_check(
                &p.with_lambda(a),
                &p.with_lambda(b),
                ctx.branch.k,
                &grid,
                ctx.levels,
            )?);
        }
    }
    Ok(vec![Check::at_most(
        "lambda",
        "eigenvalue spread over lambda in {0, 0.5, 1}",
        worst,
        1e-8,
    )])
}

fn limits(ctx: &Context) -> Vec<Check> {
    const S: &str = "limits";
    let p = &ctx.params;
    let (mw, beta, j) = (p.m_omega(), p.beta, ctx.j.value());
    let mut continuity = 0.0f64;
    let mut classical = 0.0f64;
    for n in 0..=10u32 {
        let nf = f64::from(n);
        let near = energy_sq_minus_msq_raw(BranchKind::ZeroGS, 1e-12, beta, mw, j, n);
        let exact = 4.0 * nf * (mw + mw * mw * beta * (nf + j + 0.5));
        continuity = continuity.max(rel_diff(near, exact, 0.0));
        let zero = energy_sq_minus_msq_raw(BranchKind::ZeroGS, 0.0, 0.0, mw, j, n);
        let same = energy_sq_minus_msq_raw(BranchKind::NegSpinSameXi, 0.0, 0.0, mw, j, n);
        classical =
            classical
                .max(rel_diff(zero, 4.0 * nf * mw, 0.0))
                .max(rel_diff(same, 4.0 * (nf + j + 1.0) * mw, 0.0));
    }
    let shifted = energy_sq_minus_msq_raw(BranchKind::NegSpinShifted, 1e-14, 1e-14, mw, j, 0);
    vec![
        Check::at_most(
            S,
            "alpha=1e-12 against the alpha=0 ZeroGS formula, n <= 10",
            continuity,
            1e-8,
        ),
        Check::at_most(
            S,
            "alpha=beta=0 against 4n m omega and 4(n+j+1) m omega",
            classical,
            1e-12,
        ),
        Check::at_most(
            S,
            "NegSpinShifted n=0 against -4 m omega as alpha, beta -> 0",
            rel_diff(shifted, -4.0 * mw, 0.0),
            1e-10,
        ),
    ]
}

fn telescoping(ctx: &Context) -> Result<Vec<Check>, Error> {
    let dc = derive_constants(&ctx.params)?;
    let k = f64::from(ctx.branch.k);
    let mut worst = 0.0f64;
    for n in 1..=10 {
        let stepwise = telescoped_sum(k, dc.xi, dc.zeta, dc.beta, n);
        worst = worst.max(rel_diff(stepwise, telescoped_closed_form(k, dc.xi, dc.beta, n), 0.0));
    }
    Ok(vec![Check::at_most(
        "telescoping",
        "stepwise sum against 4n(beta(n+k)+xi), n <= 10",
        worst,
        1e-12,
    )])
}

fn uncertainty(ctx: &Context) -> Result<Vec<Check>, Error> {
    const S: &str = "uncertainty";
    let p = &ctx.params;
    let mut worst = 0.0f64;
    for (x, q) in [(0.0, 0.0), (1.0, -0.5), (-2.0, 3.0)] {
        let r = uncertainty_bounds_raw(p.alpha, p.beta, x, q)?;
        worst =
            worst
                .max(rel_diff(r.dx_min_via_kempf(), r.dx_min, 0.0))
                .max(rel_diff(r.dp_min_via_kempf(), r.dp_min, 0.0));
    }
    let sym = uncertainty_bounds_raw(p.alpha, p.alpha, 0.7, -0.2)?;
    Ok(vec![
        Check::at_most(S, "direct against rescaled minimal uncertainties", worst, 1e-12),
        Check::at_most(
            S,
            "alpha = beta symmetry |dx_min - dp_min|",
            (sym.dx_min - sym.dp_min).abs(),
            0.0,
        ),
    ])
}

/// Runs `suite` and returns every check.
pub fn run_suite(suite: Suite, ctx: &Context) -> Result<Vec<Check>, Error> {
    Ok(match suite {
        Suite::Oracle => oracle(ctx)?,
        Suite::Wavefunction => wavefunction(ctx)?,
        Suite::Adjoint => adjoint(ctx)?,
        Suite::Lambda => lambda(ctx)?,
        Suite::Limits => limits(ctx),
        Suite::Telescoping => telescoping(ctx)?,
        Suite::Uncertainty => uncertainty(ctx)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Oracle,
                Suite::Wavefunction,
                Suite::Adjoint,
                Suite::Lambda,
                Suite::Limits,
                Suite::Telescoping,
                Suite::Uncertainty,
            ] {
                all.extend(run_suite(s, ctx)?);
            }
            all
        }
    })
}

/// Builds the context, runs the suite and returns the report with the number of failed checks.
pub fn verify(args: &VerifyArgs, grid: usize) -> Result<(Report, usize), Error> {
    if !(args.tolerance.is_finite() && args.tolerance > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tolerance",
            reason: "must be finite and > 0",
        });
    }
    let (params, j) = model(&args.physics)?;
    let ctx = Context {
        params,
        j,
        branch: physical_branch(&params, j, args.physics.s)?,
        grid,
        tolerance: args.tolerance,
        levels: args.levels,
        n_max: args.n_max,
    };
    let checks = run_suite(args.suite, &ctx)?;
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let report = Report {
        meta: Meta {
            command: "verify",
            params: ParamsMeta::from(&params),
            branch: Some(ctx.branch.kind.as_str().into()),
            grid: Some(grid),
        },
        rows: checks.iter().map(Check::row).collect(),
    };
    Ok((report, failed))
}
