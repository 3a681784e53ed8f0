use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scj_core::geometry::Point;
use scj_core::point_process::{nearest_linear, sample_ppp, GridIndex, LinkModel, NetworkRealization, NodeId};
use scj_core::{Error, LinkState, Scenario, Scheme, SystemParams};

fn sampled(params: &SystemParams, scenario: Scenario, trial: u64) -> NetworkRealization {
    NetworkRealization::sample(params, scenario, 500.0, 7, trial, false)
}

#[test]
fn empty_density_gives_no_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(sample_ppp(0.0, 500.0, &mut rng).is_empty());
}

#[test]
fn ppp_count_has_poisson_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 10_000;
    let expected = 0.001 * std::f64::consts::PI * 500.0 * 500.0;
    let total: usize = (0..n).map(|_| sample_ppp(0.001, 500.0, &mut rng).len()).sum();
    let mean = total as f64 / n as f64;
    let se = (expected / n as f64).sqrt();
    assert!((mean - expected).abs() < 4.0 * se, "mean {mean} vs {expected}");
}

#[test]
fn ppp_radii_are_uniform_in_area() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let radius = 500.0;
    let mut u: Vec<f64> = sample_ppp(0.001, radius, &mut rng).iter().map(|p| (p.norm() / radius).powi(2)).collect();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    let ks = u
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs()))
        .fold(0.0, f64::max);
    // Asymptotic 1% critical value of the one-sample Kolmogorov–Smirnov statistic.
    assert!(ks < 1.628 / n.sqrt(), "KS statistic {ks} over {n} points");
}

#[test]
fn typical_pair_geometry() {
    let p = SystemParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut net = NetworkRealization::empty(500.0, 0);
    let n = 10_000;
    let mut sum_x = 0.0;
    for _ in 0..n {
        let (x0, y0) = net.place_typical_pair(&p, &mut rng);
        assert_eq!(y0, Point::ORIGIN);
        assert!((x0.distance(&y0) - p.r0).abs() < 1e-12);
        sum_x += x0.x;
    }
    // x = r0 cos θ has variance r0²/2.
    let se = p.r0 / (2.0 * n as f64).sqrt();
    assert!((sum_x / n as f64).abs() < 4.0 * se);
}

#[test]
fn typical_link_is_always_los() {
    let p = SystemParams { p_los: 0.0, ..SystemParams::default() };
    let model = LinkModel::new(&p);
    for trial in 0..50 {
        let net = sampled(&p, Scenario::Simplified, trial);
        let link = net.link(NodeId::Transmitter(0), NodeId::Receiver(0), &p, &model).unwrap();
        assert_eq!(link.state, LinkState::Los);
        assert_eq!(link.gain, p.tx.main * p.rx.main);
    }
}

#[test]
fn pairs_are_r0_apart() {
    let p = SystemParams::default();
    for trial in 0..20 {
        let net = sampled(&p, Scenario::General, trial);
        assert!(net.transmitters.len() > 1);
        for (x, y) in net.transmitters.iter().zip(&net.receivers) {
            assert!((x.distance(y) - p.r0).abs() < 1e-9);
        }
    }
}

#[test]
fn links_are_consistent_across_queries() {
    let p = SystemParams::default();
    let model = LinkModel::new(&p);
    let net = sampled(&p, Scenario::General, 0);
    for i in 0..net.potential_jammers.len().min(50) as u32 {
        let a = net.link(NodeId::Jammer(i), NodeId::Receiver(0), &p, &model).unwrap();
        let b = net.link(NodeId::Jammer(i), NodeId::Receiver(0), &p, &model).unwrap();
        assert_eq!(a, b);
        let d = a.distance;
        assert_eq!(net.link_state(NodeId::Jammer(i), NodeId::Receiver(0), d, &p), a.state);
    }
}

fn nearest_distances(net: &NetworkRealization) -> Vec<f64> {
    net.potential_jammers.iter().map(|x| net.nearest_receiver(x).unwrap().1).collect()
}

#[test]
fn scj_with_rho_zero_activates_exactly_the_far_jammers() {
    let p = SystemParams { rho: 0.0, ..SystemParams::default() };
    for trial in 0..10 {
        let mut net = sampled(&p, Scenario::General, trial);
        let dist = nearest_distances(&net);
        let flags = net.scj_select(&p).unwrap().to_vec();
        for (f, d) in flags.iter().zip(dist) {
            assert_eq!(*f, d > p.d);
        }
    }
}

#[test]
fn scj_with_certain_nlos_activates_everyone() {
    let p = SystemParams { rho: 1.0, p_los: 0.0, ..SystemParams::default() };
    let mut net = sampled(&p, Scenario::General, 0);
    assert!(net.scj_select(&p).unwrap().iter().all(|&f| f));
}

#[test]
fn scj_thins_in_ball_jammers_by_rho_pn() {
    let p = SystemParams { rho: 0.5, p_los: 0.2, lambda_p: 1e-3, ..SystemParams::default() };
    let (mut inside, mut active, mut outside_active, mut outside) = (0u64, 0u64, 0u64, 0u64);
    for trial in 0..10_000 {
        let mut net = NetworkRealization::sample(&p, Scenario::Simplified, 300.0, 11, trial, false);
        let dist = nearest_distances(&net);
        let flags = net.scj_select(&p).unwrap();
        for (&f, d) in flags.iter().zip(dist) {
            if d <= p.d {
                inside += 1;
                active += f as u64;
            } else {
                outside += 1;
                outside_active += f as u64;
            }
        }
    }
    let q = 0.5 * 0.8;
    let frac = active as f64 / inside as f64;
    let se = (q * (1.0 - q) / inside as f64).sqrt();
    assert!((frac - q).abs() < 4.0 * se, "{frac}");
    assert_eq!(outside_active, outside);
}

#[test]
fn pj_thinning() {
    let p = SystemParams::default();
    let mut net = sampled(&p, Scenario::General, 0);
    assert!(net.pj_select(1.0).iter().all(|&f| f));
    assert!(net.pj_select(0.0).iter().all(|&f| !f));
    let (mut n, mut k) = (0u64, 0u64);
    for trial in 0..10_000 {
        let mut net = NetworkRealization::sample(&p, Scenario::Simplified, 200.0, 5, trial, false);
        let flags = net.pj_select(0.3);
        n += flags.len() as u64;
        k += flags.iter().filter(|&&f| f).count() as u64;
    }
    let frac = k as f64 / n as f64;
    assert!((frac - 0.3).abs() < 4.0 * (0.21 / n as f64).sqrt(), "{frac}");
}

#[test]
fn scjq_is_quiet_at_rho_zero_and_a_subset_of_scj() {
    let p = SystemParams::default();
    for trial in 0..20 {
        let mut net = sampled(&p, Scenario::General, trial);
        let quiet = net.scjq_select(&p).unwrap().to_vec();
        let full = net.scj_select(&p).unwrap().to_vec();
        assert!(quiet.iter().zip(&full).all(|(&q, &f)| !q || f));
        let zero = SystemParams { rho: 0.0, ..p };
        assert!(net.scjq_select(&zero).unwrap().iter().all(|&f| !f));
    }
}

#[test]
fn scjq_in_ball_density() {
    let p = SystemParams { lambda_p: 1e-3, ..SystemParams::default() };
    let n = 4_000;
    let mut active = 0usize;
    for trial in 0..n {
        let mut net = NetworkRealization::sample(&p, Scenario::Simplified, 250.0, 3, trial, false);
        active += net.select(Scheme::ScjQuiet, &p).unwrap().iter().filter(|&&f| f).count();
    }
    let area = std::f64::consts::PI * p.d * p.d;
    let expected = p.lambda_j() * area;
    let mean = active as f64 / n as f64;
    assert!((mean - expected).abs() < 4.0 * (expected / n as f64).sqrt(), "{mean} vs {expected}");
}

#[test]
fn nearest_receiver_basics() {
    let mut net = NetworkRealization::empty(10.0, 0);
    assert!(matches!(net.nearest_receiver(&Point::ORIGIN), Err(Error::NoReceivers)));
    net.receivers.push(Point::ORIGIN);
    assert_eq!(net.nearest_receiver(&Point::new(3.0, 4.0)).unwrap(), (0, 5.0));
    let two = [Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
    assert_eq!(nearest_linear(&Point::ORIGIN, &two), Some((0, 1.0)));
    assert_eq!(GridIndex::new(&two, 0.5).nearest(&Point::ORIGIN), Some((0, 1.0)));
}

#[test]
fn grid_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..1_000 {
        let density = [1e-5, 1e-4, 1e-3][case % 3];
        let points = sample_ppp(density, 500.0, &mut rng);
        if points.is_empty() {
            continue;
        }
        let grid = GridIndex::new(&points, 200.0);
        for q in sample_ppp(2e-5, 800.0, &mut rng) {
            assert_eq!(grid.nearest(&q), nearest_linear(&q, &points));
        }
    }
}
