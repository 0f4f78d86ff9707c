use sta_coupler::experiments::{
    efficiency_curve, linspace, minimum_switch_length, sweep_kappa_length, CouplerMode, Resolution,
    SweepGrid, SwitchSearch, MODE_ORDERING_TOLERANCE,
};

fn first_at_least(points: &[(f64, Option<f64>)], threshold: f64) -> Option<f64> {
    points.iter().find(|(_, e)| e.unwrap() >= threshold).map(|(l, _)| *l)
}

#[test]
fn gaussian_row_switches_before_adiabatic() {
    let grid = SweepGrid::new(1.0, vec![1.0], linspace(0.5, 12.0, 47)).unwrap();
    let modes = [CouplerMode::Adiabatic, CouplerMode::sta_gauss()];
    let result = sweep_kappa_length(&grid, &modes, &Resolution::default());
    assert!(result.failures.is_empty());

    let first = |m: usize| (0..47).find(|&j| result.cell(m, 0, j).unwrap() >= 0.99);
    let (adiabatic, gauss) = (first(0).unwrap(), first(1).unwrap());
    assert!(gauss < adiabatic, "gauss at L={}, adiabatic at L={}", grid.half_length[gauss], grid.half_length[adiabatic]);

    for m in 0..2 {
        for j in 0..47 {
            assert!((0.0..=1.0 + 1e-6).contains(&result.cell(m, 0, j).unwrap()));
        }
    }
}

#[test]
fn adiabatic_cell_deep_in_adiabatic_regime() {
    let grid = SweepGrid::new(1.0, vec![2.0], vec![10.0]).unwrap();
    let result = sweep_kappa_length(&grid, &[CouplerMode::Adiabatic], &Resolution::MaxStep(1e-3));
    assert!(result.cell(0, 0, 0).unwrap() >= 0.99);
}

#[test]
fn overdriven_gaussian_cells_are_reported() {
    // κ₀ = 2.4 makes the default amplitude (κ₀) far stronger than the shortcut
    // a 2.9 mm device needs, while the adiabatic coupler already switches.
    let grid = SweepGrid::new(1.0, vec![0.5, 2.4], vec![1.45, 8.0]).unwrap();
    let result = sweep_kappa_length(&grid, &[CouplerMode::Adiabatic, CouplerMode::sta_gauss()], &Resolution::default());
    let violations = result.mode_ordering_violations(MODE_ORDERING_TOLERANCE);
    assert!(violations.iter().any(|&(k, l, a, s)| k == 2.4 && l == 1.45 && a > 0.99 && s < 0.5), "{violations:?}");
    assert!(violations.iter().all(|&(k, _, _, _)| k == 2.4));
}

#[test]
fn efficiency_curves_separate() {
    let lengths = linspace(0.25, 16.0, 64);
    let curves = efficiency_curve(
        1.0,
        1.0,
        &lengths,
        &[CouplerMode::Adiabatic, CouplerMode::sta_gauss(), CouplerMode::StaExact],
        &Resolution::default(),
    )
    .unwrap();
    let adiabatic = first_at_least(&curves[0].points, 0.99).unwrap();
    let gauss = first_at_least(&curves[1].points, 0.99).unwrap();
    assert!(gauss <= 5.0);
    assert!(adiabatic > gauss);
    assert!(curves[2].points.iter().all(|(_, e)| e.unwrap() >= 1.0 - 1.4e-5));
}

#[test]
fn switch_length_ordering() {
    let search = SwitchSearch { max_total_length: 100.0, ..SwitchSearch::default() };
    let adiabatic: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&k| minimum_switch_length(1.0, k, &CouplerMode::Adiabatic, &search).unwrap())
        .collect();
    assert!(adiabatic.windows(2).all(|w| w[1] <= w[0]), "{adiabatic:?}");

    let gauss = minimum_switch_length(1.0, 1.0, &CouplerMode::sta_gauss(), &search).unwrap();
    assert!(adiabatic[1] >= 2.0 * gauss, "{} vs {gauss}", adiabatic[1]);
}

#[test]
fn switch_length_grows_with_threshold() {
    let lengths: Vec<f64> = [0.5, 0.9, 0.95, 0.99, 0.995]
        .iter()
        .map(|&t| {
            let search = SwitchSearch { threshold: t, ..SwitchSearch::default() };
            minimum_switch_length(1.0, 1.0, &CouplerMode::sta_gauss(), &search).unwrap()
        })
        .collect();
    assert!(lengths.windows(2).all(|w| w[0] <= w[1]), "{lengths:?}");
}
