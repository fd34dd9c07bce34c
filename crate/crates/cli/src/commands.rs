//! `spectrum`, `classify`, `wavefunction` and `uncertainty`.

use sds_core::deformation::{
    classify_regime, derive_constants, physical_branch, require_valid, uncertainty_bounds_raw,
};
use sds_core::radial::make_grid;
use sds_core::spectrum::spectrum_table;
use sds_core::wavefun::RadialWavefunction;
use sds_core::{Branch, BranchKind, Error, HalfInt, ModelParams, QuantumNumbers};

use crate::args::{ClassifyArgs, PhysicsArgs, SpectrumArgs, UncertaintyArgs, WavefunctionArgs};
use crate::report::{Meta, ParamsMeta, Report, Row};

/// Validated model parameters and total angular momentum.
pub fn model(physics: &PhysicsArgs) -> Result<(ModelParams, HalfInt), Error> {
    let p = ModelParams::new(physics.alpha, physics.beta, physics.lambda, physics.m, physics.omega)?;
    let j = HalfInt::total_j(physics.j.twice())?;
    Ok((p, j))
}

/// The requested branch, or the physical one when none is given.
pub fn select_branch(physics: &PhysicsArgs, requested: Option<BranchKind>) -> Result<BranchKind, Error> {
    let (p, j) = model(physics)?;
    match requested {
        Some(kind) if kind.spin() != physics.s => Err(Error::InvalidBranch {
            branch: kind.as_str(),
            reason: "spin of the branch differs from --s",
        }),
        Some(kind) => require_valid(&p, kind, j).map(|_| kind),
        None => physical_branch(&p, j, physics.s).map(|b| b.kind),
    }
}

/// Levels `0..=n_max` of one branch.
pub fn spectrum(args: &SpectrumArgs) -> Result<Report, Error> {
    let (p, j) = model(&args.physics)?;
    let kind = select_branch(&args.physics, args.branch)?;
    let table = spectrum_table(kind, &p, j, args.n_max)?;
    let rows = table
        .rows
        .iter()
        .map(|r| {
            Row::new()
                .with("n", r.n)
                .with("principal", r.principal)
                .with("e2_minus_m2", r.e2_minus_m2)
                .with("energy", r.energy)
                .with("e_n", r.e_n)
                .with("branch", kind.as_str())
                .with("valid", true)
                .with("physical", table.physical)
                .with("epsilon_positivity_proven", table.epsilon_positivity_proven)
        })
        .collect();
    Ok(Report {
        meta: Meta {
            command: "spectrum",
            params: ParamsMeta::from(&p),
            branch: Some(kind.as_str().into()),
            grid: None,
        },
        rows,
    })
}

/// One row per branch with validity and reason.
pub fn classify(args: &ClassifyArgs) -> Result<Report, Error> {
    let (p, j) = model(&args.physics)?;
    let entries = classify_regime(&p, j, args.physics.s)?;
    let physical = entries
        .iter()
        .find(|e| e.valid && e.physical)
        .map(|e| e.branch.kind.as_str().to_owned());
    let rows = entries
        .iter()
        .map(|e| {
            Row::new()
                .with("branch", e.branch.kind.as_str())
                .with("spin", e.branch.s.to_string())
                .with("valid", e.valid)
                .with("physical", e.physical)
                .with("epsilon_positivity_proven", e.epsilon_positivity_proven)
                .with("k", e.branch.k)
                .with("k_prime", e.branch.k_prime)
                .with("xi_prime", e.branch.xi_prime)
                .with("reason", e.reason)
        })
        .collect();
    Ok(Report {
        meta: Meta {
            command: "classify",
            params: ParamsMeta::from(&p),
            branch: physical,
            grid: None,
        },
        rows,
    })
}

/// Both radial components at the interior grid nodes.
pub fn wavefunction(args: &WavefunctionArgs, grid_size: usize) -> Result<Report, Error> {
    let (p, j) = model(&args.physics)?;
    let kind = select_branch(&args.physics, args.branch)?;
    let dc = derive_constants(&p)?;
    let qn = QuantumNumbers::new(args.physics.s, j, args.n)?;
    let wf = RadialWavefunction::new(&Branch::new(kind, qn.k(), &dc), &dc, &p, &qn)?;
    let grid = make_grid(p.beta, grid_size)?;
    let rows = grid
        .theta_nodes()
        .into_iter()
        .map(|t| {
            let r1 = wf.large.eval_theta(t);
            let r2 = wf.small.as_ref().map(|s| s.eval_theta(t)).unwrap_or_default();
            Row::new()
                .with("p", grid.p_of(t))
                .with("re_r1", r1.re)
                .with("im_r1", r1.im)
                .with("re_r2", r2.re)
                .with("im_r2", r2.im)
        })
        .collect();
    Ok(Report {
        meta: Meta {
            command: "wavefunction",
            params: ParamsMeta::from(&p),
            branch: Some(kind.as_str().into()),
            grid: Some(grid_size),
        },
        rows,
    })
}

/// Minimal uncertainties and their rescaled form.
pub fn uncertainty(args: &UncertaintyArgs) -> Result<Report, Error> {
    let r = uncertainty_bounds_raw(args.alpha, args.beta, args.mean_x, args.mean_p)?;
    let row = Row::new()
        .with("gamma", r.gamma)
        .with("dx_min", r.dx_min)
        .with("dp_min", r.dp_min)
        .with("product", r.dx_min * r.dp_min)
        .with("alpha_bar", r.alpha_bar)
        .with("beta_bar", r.beta_bar)
        .with("rescale", r.rescale)
        .with("kempf_dx_bar_min", r.kempf_dx_bar_min())
        .with("kempf_dp_bar_min", r.kempf_dp_bar_min())
        .with("dx_min_via_kempf", r.dx_min_via_kempf())
        .with("dp_min_via_kempf", r.dp_min_via_kempf());
    Ok(Report {
        meta: Meta {
            command: "uncertainty",
            params: ParamsMeta {
                alpha: Some(args.alpha),
                beta: Some(args.beta),
                ..ParamsMeta::default()
            },
            branch: None,
            grid: None,
        },
        rows: vec![row],
    })
}
