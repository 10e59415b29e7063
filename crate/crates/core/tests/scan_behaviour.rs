use std::f64::consts::PI;

use tc_squeeze::analytic::{self, AnalyticModel};
use tc_squeeze::field::{coherent_coefficients, custom_coefficients, fock_coefficients, squeezed_vacuum_coefficients};
use tc_squeeze::scan::{self, Column, FieldTemplate, ScanAxis, ScanSpec, TimeGrid, MINIMA_HEADER, ROWS_HEADER};
use tc_squeeze::{Error, Field, DEFAULT_EPS_TAIL};

fn coherent(alpha: f64) -> Field {
    coherent_coefficients(alpha, None, DEFAULT_EPS_TAIL).unwrap()
}

fn custom_state() -> Field {
    let raw = [-0.79f64, 0.0, -0.594, 0.0, 0.15, 0.0, 0.021].map(|x| num_complex::Complex::new(x, 0.0));
    custom_coefficients(&raw, None).unwrap()
}

#[test]
fn two_atom_series_dips() {
    let grid = TimeGrid::new(2, 30.0, None).unwrap();
    let s = scan::time_series(2, &coherent(0.4), &grid).unwrap();
    assert_eq!(s.rows.len(), grid.points().len());
    assert_eq!(s.rows[0].gt, 0.0);
    assert_eq!(s.rows[0].xi_min_plane, 1.0);
    assert_eq!(s.rows[0].xi_x, 1.0);
    let m = &s.minima[0];
    assert!(m.xi_min < 0.93, "{}", m.xi_min);
    let row = s
        .rows
        .iter()
        .find(|r| r.gt == m.gt_at_min)
        .expect("minimum lies on the grid");
    assert_eq!(row.xi_min_plane, m.xi_min);
}

#[test]
fn fock_series_never_squeezes() {
    let grid = TimeGrid::new(2, 200.0, None).unwrap();
    let s = scan::time_series(2, &fock_coefficients(2, 2).unwrap(), &grid).unwrap();
    assert!(s
        .rows
        .iter()
        .filter(|r| !r.flags.degenerate)
        .all(|r| r.xi_min_plane >= 1.0 - 1e-9));
    assert!(s.envelope_minima.is_empty());
}

#[test]
fn csv_output_is_deterministic() {
    let grid = TimeGrid::new(3, 20.0, None).unwrap();
    let render = || {
        let s = scan::time_series(3, &coherent(0.7), &grid).unwrap();
        let mut rows = Vec::new();
        scan::write_rows_csv(&mut rows, &s.rows).unwrap();
        let mut minima = Vec::new();
        scan::write_minima_csv(&mut minima, &s).unwrap();
        (rows, minima)
    };
    let (a, b) = (render(), render());
    assert_eq!(a, b);
    let text = String::from_utf8(a.0).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(ROWS_HEADER));
    assert_eq!(lines.next(), Some("0.7,0,1,1,1,1,1,"));
    assert!(String::from_utf8(a.1).unwrap().starts_with(MINIMA_HEADER));
}

#[test]
fn parameter_scan_is_deterministic_and_ordered() {
    let spec = ScanSpec {
        axis: ScanAxis::Alpha,
        values: vec![0.6, 0.1, 0.3],
        n_atoms: 3,
        field: FieldTemplate::Coherent { alpha: 0.0 },
        gt_max: Some(30.0),
        step: None,
        eps_tail: DEFAULT_EPS_TAIL,
        include_field: true,
    };
    let a = scan::scan_parameter(&spec).unwrap();
    let b = scan::scan_parameter(&spec).unwrap();
    assert_eq!(a, b);
    let params: Vec<f64> = a.rows.iter().map(|r| r.param).collect();
    assert_eq!(params, vec![0.6, 0.1, 0.3]);
    assert_eq!(a.minima.len(), 9);
    let axes: Vec<&str> = a.minima.iter().take(3).map(|m| m.axis.as_str()).collect();
    assert_eq!(&axes[1..], &["Q", "P"]);
    for (row, m) in a.rows.iter().zip(a.minima.iter().step_by(3)) {
        assert_eq!(row.param, m.param);
        assert_eq!(row.gt, m.gt_at_min);
        assert_eq!(row.xi_min_plane, m.xi_min);
    }
}

#[test]
fn halving_the_step_barely_moves_optima() {
    let cases: [(usize, Field, f64); 4] = [
        (2, coherent(0.1), 200.0),
        (2, coherent(0.4), 500.0),
        (2, custom_state(), 500.0),
        (20, coherent(0.6), 35.0),
    ];
    for (n, f, gt_max) in cases {
        let coarse = TimeGrid::new(n, gt_max, None).unwrap();
        let fine = TimeGrid::new(n, gt_max, Some(coarse.step / 2.0)).unwrap();
        let traj = {
            let p = std::sync::Arc::new(tc_squeeze::Propagator::new(n, f.n_max()).unwrap());
            tc_squeeze::Trajectory::new(p, &tc_squeeze::initial_joint_state(n, &f).unwrap()).unwrap()
        };
        for column in [Column::XiMinPlane, Column::XiQ, Column::XiP] {
            let a = scan::optimize_column(&traj, &coarse, column).unwrap();
            let b = scan::optimize_column(&traj, &fine, column).unwrap();
            assert!(
                (a.xi_min - b.xi_min).abs() < 1e-4,
                "N={n} {column:?}: {} vs {}",
                a.xi_min,
                b.xi_min
            );
        }
    }
}

#[test]
fn weak_field_formulas_track_exact_dynamics() {
    let cases = [
        (AnalyticModel::SmallAlpha, 2usize, 50.0, 5.0),
        (AnalyticModel::NSmallAlpha, 20, 30.0, 5.0),
        (AnalyticModel::FieldQ, 2, 50.0, 10.0),
        (AnalyticModel::FieldP, 2, 50.0, 10.0),
        (AnalyticModel::FieldQ, 20, 30.0, 10.0),
    ];
    for (model, n, gt_max, c) in cases {
        for alpha in [0.05, 0.1] {
            let grid = TimeGrid::new(n, gt_max, None).unwrap();
            let cmp = scan::compare_exact_analytic(model, n, &coherent(alpha), &grid).unwrap();
            let bound = c * alpha.powi(4);
            assert!(
                cmp.max_diff <= bound,
                "{model} N={n} α={alpha}: {} > {bound}",
                cmp.max_diff
            );
        }
    }
}

#[test]
fn weak_squeezed_vacuum_form_matches_squared_xi() {
    // The closed form tracks ξ² to second order in r, while ξ itself is off
    // at first order: its dip is 1 - 2r/3, not 1 - 4r/3.
    let gaps = |r: f64| {
        let f = squeezed_vacuum_coefficients(r, None, DEFAULT_EPS_TAIL).unwrap();
        let grid = TimeGrid::new(2, 20.0, None).unwrap();
        let s = scan::time_series(2, &f, &grid).unwrap();
        let (mut on_xi, mut on_square) = (0.0f64, 0.0f64);
        for row in &s.rows {
            let (_, y) = analytic::xi_n2_squeezed_vacuum_small_r(r, row.gt);
            on_xi = on_xi.max((row.xi_yprime - y).abs());
            on_square = on_square.max((row.xi_yprime.powi(2) - y).abs());
        }
        (on_xi, on_square)
    };
    let (xi_big, sq_big) = gaps(0.05);
    let (xi_small, sq_small) = gaps(0.025);
    assert!(sq_big <= 10.0 * 0.05f64.powi(2), "{sq_big}");
    assert!((3.5..4.5).contains(&(sq_big / sq_small)));
    assert!((1.8..2.2).contains(&(xi_big / xi_small)));

    let f = squeezed_vacuum_coefficients(0.0125, None, DEFAULT_EPS_TAIL).unwrap();
    let best = scan::optimal_squeezing(2, &f, 20.0).unwrap();
    assert!(((1.0 - best.xi_min) / 0.0125 - 2.0 / 3.0).abs() < 0.02);
}

#[test]
fn hp_outside_its_regime_is_reported_not_hidden() {
    let grid = TimeGrid::new(2, 50.0, None).unwrap();
    let cmp = scan::compare_exact_analytic(AnalyticModel::HolsteinPrimakoff, 2, &coherent(0.5), &grid).unwrap();
    assert!(cmp.max_diff > 0.05);
    assert!(cmp.rows.iter().all(|r| r.li_ok == Some(false)));
}

#[test]
fn comparison_rejects_mismatched_inputs() {
    let grid = TimeGrid::new(2, 5.0, None).unwrap();
    let sq = squeezed_vacuum_coefficients(0.2, None, DEFAULT_EPS_TAIL).unwrap();
    assert!(matches!(
        scan::compare_exact_analytic(AnalyticModel::HolsteinPrimakoff, 2, &sq, &grid),
        Err(Error::ModelFieldMismatch { .. })
    ));
    let grid = TimeGrid::new(5, 5.0, None).unwrap();
    assert_eq!(
        scan::compare_exact_analytic(AnalyticModel::SmallAlpha, 5, &coherent(0.1), &grid).unwrap_err(),
        Error::NotTwoAtoms(5)
    );
}

#[test]
fn hp_tracks_exact_early_on() {
    // where gt/(2N^{3/2}) is small and α²/N ≪ 1 the bosonized form holds
    let n = 60;
    let grid = TimeGrid::new(n, 5.0, None).unwrap();
    let cmp = scan::compare_exact_analytic(AnalyticModel::HolsteinPrimakoff, n, &coherent(2.0), &grid).unwrap();
    assert!(cmp.max_diff < 0.05, "{}", cmp.max_diff);
}

#[test]
fn large_n_field_minimum() {
    let grid = TimeGrid::new(50, 4.0 * PI * 50f64.sqrt(), None).unwrap();
    let traj = {
        let f = coherent(0.1);
        let p = std::sync::Arc::new(tc_squeeze::Propagator::new(50, f.n_max()).unwrap());
        tc_squeeze::Trajectory::new(p, &tc_squeeze::initial_joint_state(50, &f).unwrap()).unwrap()
    };
    let q = scan::optimize_column(&traj, &grid, Column::XiQ).unwrap();
    assert!((q.xi_min - analytic::field_xi_q_min_n(50, 0.1)).abs() < 1e-3);
}

#[test]
fn single_precision_optimum() {
    let f32_field = coherent_coefficients(0.3f32, None, 1e-6).unwrap();
    let lo = scan::optimal_squeezing(2, &f32_field, 60.0).unwrap();
    let hi = scan::optimal_squeezing(2, &coherent(0.3), 60.0).unwrap();
    assert!(
        (lo.xi_min as f64 - hi.xi_min).abs() < 1e-4,
        "{} vs {}",
        lo.xi_min,
        hi.xi_min
    );
}
