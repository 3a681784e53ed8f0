use std::sync::OnceLock;

use scj_core::analytic::{nsee, Analytic, TableResolution, TabulatedModel};
use scj_core::optimizer::{nsee_at_optimum, solve_p1, solve_p2, solve_p3, solve_p4, SolverConfig, StcModel};
use scj_core::quadrature::QuadratureConfig;
use scj_core::{Scheme, SystemParams};

fn table() -> &'static TabulatedModel {
    static TABLE: OnceLock<TabulatedModel> = OnceLock::new();
    TABLE.get_or_init(|| {
        let a = Analytic::new(SystemParams::default(), QuadratureConfig::default()).unwrap();
        TabulatedModel::new(&a, TableResolution::default()).unwrap()
    })
}

#[test]
fn no_eavesdroppers_means_no_jamming() {
    let p = SystemParams { lambda_e: 0.0, ..SystemParams::default() };
    let cfg = SolverConfig::default();
    assert_eq!(solve_p1(table(), &p, &cfg).unwrap().argmax.jamming, 0.0);
    assert_eq!(solve_p2(table(), &p, &cfg).unwrap().argmax.jamming, 0.0);
}

#[test]
fn no_potential_jammers_ties_to_zero() {
    let p = SystemParams { lambda_p: 0.0, ..SystemParams::default() };
    let r = solve_p2(table(), &p, &SolverConfig::default()).unwrap();
    assert_eq!(r.argmax.jamming, 0.0);
    let first = r.trace[0].1;
    assert!(r.trace.iter().all(|&(_, v)| v == first));
}

#[test]
fn optimum_dominates_trace_and_reevaluates() {
    let p = SystemParams::default();
    let cfg = SolverConfig::default();
    for r in [solve_p1(table(), &p, &cfg).unwrap(), solve_p2(table(), &p, &cfg).unwrap()] {
        assert!(r.trace.iter().all(|&(_, v)| v <= r.value));
        assert!((0.0..=1.0).contains(&r.argmax.jamming));
        let again = StcModel::stc(table(), &r.params(&p), r.scheme).unwrap();
        assert!((again - r.value).abs() <= 1e-12 * r.value.abs().max(1e-300));
    }
}

#[test]
fn refinement_stays_in_the_grid_bracket() {
    let p = SystemParams { lambda_p: 2e-4, lambda_e: 5e-4, ..SystemParams::default() };
    let cfg = SolverConfig::default();
    let r = solve_p1(table(), &p, &cfg).unwrap();
    let n = cfg.grid_points;
    let h = 1.0 / (n - 1) as f64;
    let (grid, refine) = r.trace.split_at(n);
    let best = grid.iter().fold((0.0, f64::NEG_INFINITY), |b, &(x, v)| if v > b.1 { (x.jamming, v) } else { b });
    assert!(!refine.is_empty());
    for &(x, _) in refine {
        assert!(x.jamming >= best.0 - h - 1e-12 && x.jamming <= best.0 + h + 1e-12);
    }
}

#[test]
fn solver_is_deterministic() {
    let p = SystemParams::default();
    let cfg = SolverConfig::default();
    assert_eq!(solve_p1(table(), &p, &cfg).unwrap(), solve_p1(table(), &p, &cfg).unwrap());
}

#[test]
fn scj_beats_pj_at_the_reference_point() {
    let p = SystemParams::default();
    let cfg = SolverConfig::default();
    let scj = solve_p1(table(), &p, &cfg).unwrap();
    let pj = solve_p2(table(), &p, &cfg).unwrap();
    assert!(scj.value >= pj.value, "{} vs {}", scj.value, pj.value);
}

#[test]
fn zero_budget_gives_zero() {
    let p = SystemParams::default();
    let cfg = SolverConfig::default();
    assert_eq!(solve_p3(table(), &p, 0.0, &cfg).unwrap().value, 0.0);
    let (r, e) = nsee_at_optimum(table(), &p, Scheme::Pj, 0.0, &cfg).unwrap();
    assert_eq!((r.value, e), (0.0, 0.0));
    assert!(solve_p4(table(), &p, -1e-4, &cfg).is_err());
}

#[test]
fn budget_optimum_grows_with_budget() {
    let p = SystemParams::default();
    let cfg = SolverConfig { grid_points: 11, refinements: 8, density_step: Some(1e-4), ..SolverConfig::default() };
    let mut last = 0.0;
    for eps in [1e-4, 2e-4, 4e-4] {
        let r = solve_p3(table(), &p, eps, &cfg).unwrap();
        assert!(r.argmax.lambda_t + r.argmax.lambda_p <= eps * (1.0 + 1e-9));
        assert!(r.argmax.lambda_t > 0.0);
        assert!(r.value >= last);
        last = r.value;
    }
}

#[test]
fn nsee_uses_the_optimum() {
    let p = SystemParams::default();
    let cfg = SolverConfig { grid_points: 6, refinements: 4, lattice_steps: 2, density_step: None };
    let (r, e) = nsee_at_optimum(table(), &p, Scheme::Scj, 2e-4, &cfg).unwrap();
    assert_eq!(e, nsee(r.value, &r.params(&p), Scheme::Scj));
}

#[test]
fn invalid_solver_settings_are_rejected() {
    let p = SystemParams::default();
    let bad = SolverConfig { grid_points: 1, ..SolverConfig::default() };
    assert!(solve_p1(table(), &p, &bad).is_err());
    let bad = SolverConfig { density_step: Some(0.0), ..SolverConfig::default() };
    assert!(solve_p3(table(), &p, 1e-4, &bad).is_err());
}
