use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;
use scj_core::analytic::region::{
    in_ball_weight, in_ball_weight_by_case, nn2_pdf, nn_pdf, out_ball_weight, out_ball_weight_by_case,
    pair_distance_pdf, partial_fraction, hole_area,
};
use scj_core::analytic::{kernel, nsee, stc, Analytic, TableResolution, TabulatedModel, Victim};
use scj_core::quadrature::QuadratureConfig;
use scj_core::{LinkState, Scenario, Scheme, SystemParams};

fn engine(p: SystemParams) -> Analytic {
    Analytic::new(p, QuadratureConfig::default()).unwrap()
}

fn table() -> &'static TabulatedModel {
    static TABLE: OnceLock<TabulatedModel> = OnceLock::new();
    TABLE.get_or_init(|| TabulatedModel::new(&engine(SystemParams::default()), TableResolution::default()).unwrap())
}

/// Composite midpoint rule.
fn midpoint<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Composite Simpson rule.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + inner + f(b)) * h / 3.0
}

#[test]
fn kernel_hand_value() {
    let p = SystemParams::default();
    assert_eq!(kernel(LinkState::Nlos, 0.0, 50.0, &p), 0.0);
    assert!((kernel(LinkState::Nlos, 16.0, 2.0, &p) - 5.0 / 9.0).abs() < 1e-14);
    assert!(kernel(LinkState::Los, 1e300, 5.0, &p) > 1.0 - 1e-12);
}

#[test]
fn connection_constants() {
    let a = engine(SystemParams::default());
    let tau = 3.0 * 6f64.powf(-1.0 / 3.0);
    assert!((tau - 1.650_963_6).abs() < 1e-6);
    let mu = tau * 1e4 * 255.0 / 100.0;
    assert!((a.mu() / mu - 1.0).abs() < 1e-12);
    assert!((a.mu() - 4.210e4).abs() < 5.0);
}

#[test]
fn noise_only_connection() {
    let p = SystemParams { lambda_p: 0.0, lambda_t: 0.0, ..SystemParams::default() };
    let a = engine(p);
    let mu = a.mu();
    let n = p.sigma2 / p.power;
    let closed = 3.0 * (-mu * n).exp() - 3.0 * (-2.0 * mu * n).exp() + (-3.0 * mu * n).exp();
    for scenario in [Scenario::Simplified, Scenario::General] {
        let pc = a.connection_probability(Scheme::Scj, scenario).unwrap();
        assert!((pc - closed).abs() < 1e-12, "{pc} vs {closed}");
    }
}

#[test]
fn transforms_are_one_at_zero_argument_or_density() {
    let a = engine(SystemParams::default());
    let checks = [
        a.lt_jam_rx_simplified(0.0).unwrap(),
        a.lt_php_rx_simplified(0.0).unwrap(),
        a.lt_ppp_eve(1e-3, 0.0).unwrap(),
        a.lt_ppp_eve(0.0, 1e9).unwrap(),
        a.lt_tx_rx(0.0, 1e9).unwrap(),
        a.lt_php_eve_simplified(0.0, 120.0).unwrap(),
        a.lt_php_eve_single(1e9, 120.0, 0.0).unwrap(),
        a.lt_php_eve_general(0.0, 120.0).unwrap(),
        a.lt_jam_rx_general(0.0).unwrap(),
    ];
    for v in checks {
        assert_eq!(v.value, 1.0);
    }
    let quiet = engine(SystemParams { rho: 0.0, ..SystemParams::default() });
    assert_eq!(quiet.lt_jam_rx_simplified(1e5).unwrap().value, 1.0);
    assert_eq!(quiet.lt_jam_rx_general(1e5).unwrap().value, 1.0);
    let saturated = engine(SystemParams { rho: 1.0, p_los: 0.0, ..SystemParams::default() });
    assert_eq!(saturated.lt_php_rx_simplified(1e5).unwrap().value, 1.0);
}

#[test]
fn far_ball_leaves_no_out_of_ball_interference() {
    let p = SystemParams { d: 1e4, ..SystemParams::default() };
    let quad = QuadratureConfig { tail_cutoff_radius: 1e5, ..QuadratureConfig::default() };
    let a = Analytic::new(p, quad).unwrap();
    let v = a.lt_php_rx_simplified(a.mu()).unwrap().value;
    assert!(v > 1.0 - 1e-6, "{v}");
}

#[test]
fn all_nlos_ppp_collapses_to_jammer_form() {
    let p = SystemParams { p_los: 0.0, rho: 1.0, ..SystemParams::default() };
    let a = engine(p);
    for s in [1e3, 4e4, 1e6] {
        let split = a.lt_ppp(p.lambda_p, s, Victim::Receiver).unwrap().value;
        let whole = a.lt_jam_rx_simplified(s).unwrap().value;
        assert!((split - whole).abs() < 1e-8, "{split} vs {whole}");
    }
}

#[test]
fn transmitter_transform_is_ppp_transform_with_receiver_gains() {
    let a = engine(SystemParams::default());
    for s in [1e3, 4e4] {
        assert_eq!(a.lt_tx_rx(7e-5, s).unwrap(), a.lt_ppp(7e-5, s, Victim::Receiver).unwrap());
    }
}

#[test]
fn t1_geometry() {
    let p = SystemParams::default();
    let a = engine(p);
    let s = 1e5;
    assert_eq!(a.t1(s, 0.0, 10.0, LinkState::Los).unwrap(), 0.0);
    for state in [LinkState::Los, LinkState::Nlos] {
        let free = 2.0 * PI * simpson(|r| kernel(state, s * 10.0, r, &p) * r, 0.0, p.d, 20_000);
        for u in [2.0 * p.d, 500.0] {
            let t1 = a.t1(s, u, 10.0, state).unwrap();
            assert!((t1 - free).abs() < 1e-10 * free.max(1.0), "{t1} vs {free}");
        }
    }
}

#[test]
fn holes_only_remove_interference() {
    let a = engine(SystemParams::default());
    let s = 1e5;
    let free_tail = a.t2(s, 1e5, 1.0).unwrap();
    let mut last = f64::INFINITY;
    for u in [600.0, 400.0, 300.0, 200.0, 100.0, 10.0] {
        let t1 = a.t1(s, u, 1.0, LinkState::Nlos).unwrap();
        assert!(t1 <= last + 1e-12);
        last = t1;
        assert!(a.t2(s, u, 1.0).unwrap() <= free_tail + 1e-12);
    }
}

#[test]
fn piecewise_weights_match_c_function_form() {
    let d = 200.0;
    for i in 0..20 {
        let u = 1.0 + i as f64 * 25.0;
        for j in 0..20 {
            let r_in = 0.5 + j as f64 * 10.0;
            let r_out = d + 1.0 + j as f64 * 30.0;
            assert!((in_ball_weight(u, r_in, d) - in_ball_weight_by_case(u, r_in, d)).abs() < 1e-10);
            assert!((out_ball_weight(u, r_out, d) - out_ball_weight_by_case(u, r_out, d)).abs() < 1e-10);
        }
    }
}

#[test]
fn pair_distance_pdf_normalises() {
    // The substitution u = √(r0² + r_e² − 2 r0 r_e cos φ) makes the mass ∫ dφ/π.
    let mass = |r_e: f64, r0: f64| {
        midpoint(
            |phi: f64| {
                let u = (r0 * r0 + r_e * r_e - 2.0 * r0 * r_e * phi.cos()).sqrt();
                let du = r0 * r_e * phi.sin() / u;
                pair_distance_pdf(u, r_e, r0) * du
            },
            0.0,
            PI,
            200_000,
        )
    };
    for (r_e, r0) in [(100.0, 100.0), (50.0, 100.0), (300.0, 100.0), (1e4, 100.0)] {
        assert!((mass(r_e, r0) - 1.0).abs() < 1e-6, "{r_e} {r0}");
    }
}

#[test]
fn nearest_neighbour_laws_normalise() {
    let lambda = 7e-5;
    let one = midpoint(|v| nn_pdf(v, lambda), 0.0, 1000.0, 100_000);
    assert!((one - 1.0).abs() < 1e-6);
    // ∫_{v1}^∞ f(v1, v2) dv2 = 2πλ v1 e^{−λπv1²}.
    for v1 in [10.0, 60.0, 150.0] {
        let marginal = simpson(|v2| nn2_pdf(v1, v2, lambda), v1 + 1e-12, 1200.0, 100_000);
        assert!((marginal - nn_pdf(v1, lambda)).abs() < 1e-6 * nn_pdf(v1, lambda).max(1e-3));
    }
    assert_eq!(nn2_pdf(50.0, 40.0, lambda), 0.0);
}

#[test]
fn partial_fraction_against_midpoint() {
    let d = 200.0;
    let lambda_r = 7e-5;
    let xi = partial_fraction(100.0, lambda_r, d, &QuadratureConfig::default()).unwrap();
    let area = midpoint(|r| hole_area(r, d) * r, 100.0, 400.0, 10_000);
    let oracle = (2.0 * lambda_r * area / (d * d - 2500.0)).min(1.0);
    assert!((xi - oracle).abs() < 1e-6, "{xi} vs {oracle}");
    assert_eq!(partial_fraction(450.0, lambda_r, d, &QuadratureConfig::default()).unwrap(), 0.0);
    assert_eq!(partial_fraction(10.0, 10.0, d, &QuadratureConfig::default()).unwrap(), 1.0);
}

#[test]
fn q_corrections() {
    let a = engine(SystemParams::default());
    assert_eq!(a.q1(1e5, 450.0, 10.0).unwrap(), 0.0);
    assert_eq!(a.q1(0.0, 50.0, 10.0).unwrap(), 0.0);
    assert_eq!(a.q2(0.0, 50.0, 80.0, 10.0).unwrap(), 0.0);
    for v1 in [10.0, 50.0, 150.0, 300.0] {
        assert!(a.q1(4e4, v1, 10.0).unwrap() >= 0.0);
    }
    let p = SystemParams::default();
    for i in 1..=100 {
        let r = i as f64 * 2.0;
        assert!(kernel(LinkState::Los, 4e4, r, &p) >= kernel(LinkState::Nlos, 4e4, r, &p));
    }
}

#[test]
fn blended_density_reference() {
    let p = SystemParams::default();
    let ratio = p.lambda_j_blended() / p.lambda_j_bar();
    assert!((ratio - 0.20012).abs() < 5e-6, "{ratio}");
    assert_eq!(SystemParams { beta: 0.0, ..p }.lambda_j_blended(), p.lambda_j_bar());
    let full = SystemParams { beta: 1.0, ..p }.lambda_j_blended();
    assert!((full - (-7e-5 * PI * 4e4f64).exp() * p.lambda_j_bar()).abs() < 1e-18);
}

#[test]
fn nearest_hole_collapses_to_single_hole_without_receivers() {
    let p = SystemParams { lambda_t: 1e-14, ..SystemParams::default() };
    let a = engine(p);
    for (s, r_e) in [(1e4, 80.0), (1e6, 150.0), (2e7, 300.0)] {
        let general = a.lt_php_eve_general(s, r_e).unwrap().value;
        let single = a.lt_php_eve_simplified(s, r_e).unwrap().value;
        assert!((general - single).abs() < 1e-6, "{general} vs {single}");
    }
}

#[test]
fn distant_hole_reduces_to_homogeneous_transform() {
    let p = SystemParams::default();
    let quad = QuadratureConfig { tail_cutoff_radius: 5e4, ..QuadratureConfig::default() };
    let a = Analytic::new(p, quad).unwrap();
    let s = 1e6;
    let holed = a.lt_php_eve_simplified(s, 1e4).unwrap().value;
    let plain = a.lt_ppp_eve(p.lambda_j_bar(), s).unwrap().value;
    assert!((holed - plain).abs() < 1e-6, "{holed} vs {plain}");
}

#[test]
fn blend_lies_between_its_extremes() {
    let p = SystemParams::default();
    let a = engine(p);
    let lambda_bar = p.lambda_j_bar();
    let thinned = SystemParams { beta: 1.0, ..p }.lambda_j_blended();
    for (s, r_e) in [(1e4, 80.0), (1e6, 150.0), (2e7, 300.0)] {
        let dense = a.lt_php_eve_nearest(s, r_e, lambda_bar).unwrap().value;
        let sparse = a.lt_php_eve_nearest(s, r_e, thinned).unwrap().value;
        let blend = a.lt_php_eve_general(s, r_e).unwrap().value;
        assert!(dense <= blend && blend <= sparse, "{dense} {blend} {sparse}");
    }
}

#[test]
fn general_connection_falls_with_transmitter_density() {
    let mut last = 1.0;
    for lambda_t in [1e-5, 3e-5, 5e-5, 7e-5, 1e-4] {
        let p = SystemParams { lambda_t, ..SystemParams::default() };
        let pc = engine(p).connection_probability(Scheme::Scj, Scenario::General).unwrap();
        assert!(pc <= last);
        last = pc;
    }
}

#[test]
fn partial_jamming_limits() {
    let base = SystemParams::default();
    let silent = engine(SystemParams { varrho: 0.0, ..base }).connection_probability(Scheme::Pj, Scenario::General);
    let unjammed =
        engine(SystemParams { lambda_p: 0.0, ..base }).connection_probability(Scheme::None, Scenario::General);
    assert!((silent.unwrap() - unjammed.unwrap()).abs() < 1e-12);

    // Fewer jammers: better connection, weaker protection.
    let mut last_pc = 0.0;
    let mut last_exp = 0.0;
    for varrho in [1.0, 0.75, 0.5, 0.25, 0.0] {
        let a = engine(SystemParams { varrho, ..base });
        let pc = a.connection_probability(Scheme::Pj, Scenario::General).unwrap();
        assert!(pc >= last_pc);
        last_pc = pc;
        let exponent = -a.secrecy_probability(Scheme::Pj, Scenario::General).unwrap().ln();
        assert!(exponent >= last_exp);
        last_exp = exponent;
    }
}

#[test]
fn secrecy_exponent_is_linear_in_eavesdropper_density() {
    let base = SystemParams::default();
    let log_ps = |lambda_e: f64| {
        engine(SystemParams { lambda_e, ..base }).secrecy_probability(Scheme::Pj, Scenario::General).unwrap().ln()
    };
    let one = log_ps(1e-4);
    assert!((log_ps(3e-4) / one - 3.0).abs() < 1e-9);
    assert_eq!(log_ps(0.0), 0.0);
}

#[test]
fn secrecy_grows_with_rho_and_falls_with_eavesdroppers() {
    let table = table();
    let mut last = 0.0;
    for rho in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let p = SystemParams { rho, ..SystemParams::default() };
        let ps = table.secrecy_probability(&p, Scheme::Scj, Scenario::General).unwrap();
        assert!(ps >= last);
        last = ps;
    }
    let mut last = 1.0;
    for lambda_e in [0.0, 1e-4, 1e-3, 5e-3] {
        let ps = engine(SystemParams { lambda_e, ..SystemParams::default() })
            .secrecy_probability(Scheme::Scj, Scenario::Simplified)
            .unwrap();
        assert!(if lambda_e == 0.0 { ps == 1.0 } else { ps < last });
        last = ps;
    }
}

#[test]
fn power_and_noise_scale_out() {
    let p = SystemParams::default();
    let q = SystemParams { power: 4.0, sigma2: 4.0 * p.sigma2, ..p };
    let (a, b) = (engine(p), engine(q));
    for scheme in [Scheme::Scj, Scheme::Pj, Scheme::ScjQuiet, Scheme::None] {
        for scenario in [Scenario::Simplified, Scenario::General] {
            let pc = (a.connection_probability(scheme, scenario).unwrap(), b.connection_probability(scheme, scenario).unwrap());
            assert!((pc.0 - pc.1).abs() < 1e-12);
        }
        let ps = |m: &Analytic| m.secrecy_probability(scheme, Scenario::Simplified).unwrap();
        assert!((ps(&a) - ps(&b)).abs() < 1e-12);
    }
}

#[test]
fn stc_and_nsee_scaling() {
    let p = SystemParams::default();
    assert!((stc(1.0, 1.0, &p) - 2.8e-4).abs() < 1e-18);
    let quiet = SystemParams { rho: 0.0, lambda_p: 0.0, ..p };
    let v = stc(0.7, 0.9, &quiet);
    assert!((nsee(v, &quiet, Scheme::Scj) - v / (quiet.lambda_t * quiet.power)).abs() < 1e-15);
    let doubled = SystemParams { power: 2.0, ..p };
    assert!((nsee(v, &p, Scheme::Scj) / nsee(v, &doubled, Scheme::Scj) - 2.0).abs() < 1e-12);
    assert_eq!(nsee(0.0, &p, Scheme::Pj), 0.0);
}

#[test]
fn tabulated_model_agrees_with_adaptive_engine() {
    let base = SystemParams::default();
    let table = table();
    for (lambda_t, lambda_p, rho) in [(3e-5, 2e-4, 0.9), (1e-4, 5e-3, 0.1)] {
        let p = SystemParams { lambda_t, lambda_p, rho, varrho: rho, ..base };
        assert!(table.covers(&p));
        let a = engine(p);
        for scheme in [Scheme::Scj, Scheme::Pj, Scheme::ScjQuiet, Scheme::None] {
            for scenario in [Scenario::Simplified, Scenario::General] {
                let pc = table.connection_probability(&p, scheme, scenario).unwrap();
                let ps = table.secrecy_probability(&p, scheme, scenario).unwrap();
                assert!((pc - a.connection_probability(scheme, scenario).unwrap()).abs() < 1e-6);
                assert!((ps - a.secrecy_probability(scheme, scenario).unwrap()).abs() < 1e-6);
            }
        }
    }
    assert!(!table.covers(&SystemParams { d: 150.0, ..base }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn transforms_are_decreasing_unit_values(
        s in 0.0f64..1e8,
        ds in 1.0f64..1e8,
        r_e in 5.0f64..500.0,
        rho in 0.0f64..=1.0,
    ) {
        let a = engine(SystemParams { rho, ..SystemParams::default() });
        let pairs = [
            (a.lt_jam_rx_simplified(s).unwrap().value, a.lt_jam_rx_simplified(s + ds).unwrap().value),
            (a.lt_php_rx_simplified(s).unwrap().value, a.lt_php_rx_simplified(s + ds).unwrap().value),
            (a.lt_ppp_eve(1e-3, s).unwrap().value, a.lt_ppp_eve(1e-3, s + ds).unwrap().value),
            (a.lt_php_eve_simplified(s, r_e).unwrap().value, a.lt_php_eve_simplified(s + ds, r_e).unwrap().value),
        ];
        for (lo, hi) in pairs {
            prop_assert!(lo > 0.0 && lo <= 1.0);
            prop_assert!(hi <= lo + 1e-9);
        }
    }

    #[test]
    fn nearest_hole_transform_is_a_decreasing_unit_value(s in 0.0f64..1e8, ds in 1.0f64..1e8, r_e in 5.0f64..500.0) {
        let a = engine(SystemParams::default());
        let lo = a.lt_php_eve_general(s, r_e).unwrap().value;
        let hi = a.lt_php_eve_general(s + ds, r_e).unwrap().value;
        prop_assert!(lo > 0.0 && lo <= 1.0);
        prop_assert!(hi <= lo + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kernel_is_a_cdf_in_x_decreasing_in_r(x in 0.0f64..1e12, dx in 1.0f64..1e10, r in 1.0f64..2000.0, dr in 1.0f64..500.0) {
        let p = SystemParams::default();
        for state in [LinkState::Los, LinkState::Nlos] {
            let f = kernel(state, x, r, &p);
            prop_assert!((0.0..1.0).contains(&f) || f == 1.0);
            prop_assert!(kernel(state, x + dx, r, &p) >= f);
            prop_assert!(kernel(state, x, r + dr, &p) <= f);
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probabilities_lie_in_unit_interval(
        lambda_t in 0.0f64..2e-4,
        lambda_p in 0.0f64..5e-3,
        lambda_e in 0.0f64..1e-2,
        rho in 0.0f64..=1.0,
    ) {
        let p = SystemParams { lambda_t, lambda_p, lambda_e, rho, varrho: rho, ..SystemParams::default() };
        for scheme in [Scheme::Scj, Scheme::Pj, Scheme::ScjQuiet] {
            let pc = table().connection_probability(&p, scheme, Scenario::General).unwrap();
            let ps = table().secrecy_probability(&p, scheme, Scenario::General).unwrap();
            prop_assert!((0.0..=1.0).contains(&pc) && (0.0..=1.0).contains(&ps));
        }
    }

    #[test]
    fn pair_distance_pdf_is_symmetric(u in 0.0f64..600.0, a in 1.0f64..300.0, b in 1.0f64..300.0) {
        let x = pair_distance_pdf(u, a, b);
        let y = pair_distance_pdf(u, b, a);
        prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
    }
}
