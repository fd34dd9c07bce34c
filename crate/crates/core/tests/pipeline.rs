use sds_core::deformation::{classify_regime, derive_constants, physical_branch, uncertainty_bounds};
use sds_core::oracle::{compare_to_closed_form, convergence_study, diagonalize_h};
use sds_core::radial::{apply_b_plus_nodes, make_grid, Stagger};
use sds_core::spectrum::{principal_form, spectrum_table};
use sds_core::wavefun::{ground_state_wf, recursion_large_component, RadialWavefunction};
use sds_core::{Branch, BranchKind, Complex, Error, HalfInt, ModelParams, QuantumNumbers, Spin};

fn set_a() -> ModelParams {
    ModelParams::new(0.04, 0.04, 0.5, 1.0, 1.0).unwrap()
}

#[test]
fn classify_then_diagonalize() {
    let cases = [
        (set_a(), Spin::Up, BranchKind::ZeroGS),
        (set_a(), Spin::Down, BranchKind::NegSpinSameXi),
        (
            ModelParams::new(25.0, 0.04, 0.0, 1.0, 1.0).unwrap(),
            Spin::Up,
            BranchKind::PosSpinShifted,
        ),
        (
            ModelParams::new(25.0, 0.04, 0.0, 1.0, 1.0).unwrap(),
            Spin::Down,
            BranchKind::NegSpinShifted,
        ),
    ];
    for (p, s, expected) in cases {
        for twice_j in [1, 3] {
            let j = HalfInt::from_twice(twice_j);
            let branch = physical_branch(&p, j, s).unwrap();
            assert_eq!(branch.kind, expected);
            let entries = classify_regime(&p, j, s).unwrap();
            assert_eq!(entries.len(), 4);
            assert_eq!(entries.iter().filter(|e| e.valid && e.physical).count(), 1);

            let dc = derive_constants(&p).unwrap();
            let table = spectrum_table(branch.kind, &p, j, 6).unwrap();
            let report = diagonalize_h(&dc, &p, branch.k, &make_grid(p.beta, 1500).unwrap(), 4).unwrap();
            let cmp = compare_to_closed_form(&report, &table, 4, 1e-3).unwrap();
            assert!(cmp.passed, "{expected} j={twice_j}/2: {cmp:?}");
            assert_eq!(report.has_zero_mode(), expected == BranchKind::ZeroGS);

            for row in &table.rows {
                let by_principal = principal_form(branch.kind, &p, j, row.principal).unwrap();
                assert!((by_principal - row.e2_minus_m2).abs() <= 1e-12 * row.e2_minus_m2.abs().max(1.0));
            }
        }
    }
}

#[test]
fn convergence_study_reports_second_order() {
    let p = set_a();
    let dc = derive_constants(&p).unwrap();
    let table = spectrum_table(BranchKind::NegSpinSameXi, &p, HalfInt::from_twice(1), 6).unwrap();
    let study = convergence_study(&dc, &p, &table, [400, 800, 1600], 4).unwrap();
    for order in &study.orders {
        assert!((order - 2.0).abs() < 0.05, "{order}");
    }
    let finest = study.residuals[2].iter().copied().fold(0.0, f64::max);
    assert!(study.richardson.iter().all(|r| *r < finest / 10.0));
}

#[test]
fn first_excited_state_by_recursion() {
    // One b+ step from the (k=2, xi=0.54) ground form, divided by sqrt(e_1) = sqrt(2.32).
    let p = set_a();
    let dc = derive_constants(&p).unwrap();
    assert!((dc.xi - 0.5).abs() < 1e-15);
    let grid = make_grid(p.beta, 2000).unwrap();
    let upper = Branch {
        xi_prime: dc.xi + p.beta,
        ..Branch::new(BranchKind::ZeroGS, 2, &dc)
    };
    let start = ground_state_wf(&upper, &dc, p.beta, 2).unwrap();
    assert!((start.a - (0.54 / 0.04 - 0.5)).abs() < 1e-12);
    let manual = apply_b_plus_nodes(1, Complex::new(dc.xi, dc.zeta), &start.sample(&grid, Stagger::Nodes))
        .unwrap()
        .scaled(Complex::new(1.0 / 2.32f64.sqrt(), 0.0));
    let base = Branch::new(BranchKind::ZeroGS, 1, &dc);
    let rec = recursion_large_component(&base, &dc, p.beta, 1, &grid).unwrap();
    assert!(manual.sub(&rec).unwrap().norm() < 1e-12);

    let qn = QuantumNumbers::new(Spin::Up, HalfInt::from_twice(1), 1).unwrap();
    let closed = RadialWavefunction::new(&base, &dc, &p, &qn)
        .unwrap()
        .large
        .sample(&grid, Stagger::Nodes);
    let closed = closed.scaled(Complex::new(1.0 / closed.norm(), 0.0));
    let scale = closed.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let dev = rec
        .values
        .iter()
        .zip(&closed.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(dev / scale < 1e-4);
}

#[test]
fn invalid_inputs_surface_typed_errors() {
    assert!(matches!(
        ModelParams::new(-1.0, 0.04, 0.0, 1.0, 1.0),
        Err(Error::InvalidParameter { .. })
    ));
    let p = set_a();
    assert!(matches!(
        spectrum_table(BranchKind::PosSpinShifted, &p, HalfInt::from_twice(1), 4),
        Err(Error::InvalidBranch { .. })
    ));
    assert!(spectrum_table(BranchKind::ZeroGS, &p, HalfInt::from_twice(1), 65).is_err());
    // Q(m omega) = 0 exactly at m omega = 1 for alpha = 1, beta = 1.
    let boundary = ModelParams::new(1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
    assert_eq!(
        classify_regime(&boundary, HalfInt::from_twice(1), Spin::Up),
        Err(Error::RegimeBoundary)
    );
    assert!(uncertainty_bounds(&p, f64::NAN, 0.0).is_err());
}
