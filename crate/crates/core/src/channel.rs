//! Blockage, path loss and fading.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::params::{LinkState, SystemParams};

/// LoS with probability `p_los` inside the ball of radius `d`, NLoS beyond.
///
/// One uniform is consumed whatever the distance, so streams stay aligned
/// across parameter changes.
pub fn sample_link_state<R: Rng + ?Sized>(r: f64, p_los: f64, d: f64, rng: &mut R) -> LinkState {
    let u: f64 = rng.random();
    if r <= d && u < p_los {
        LinkState::Los
    } else {
        LinkState::Nlos
    }
}

/// Pre-built unit-mean Γ(N, N) samplers for both link classes.
#[derive(Debug, Clone, Copy)]
pub struct Fading {
    los: Gamma<f64>,
    nlos: Gamma<f64>,
}

impl Fading {
    pub fn new(params: &SystemParams) -> Self {
        let make = |n: u32| Gamma::new(n as f64, 1.0 / n as f64).expect("shape and scale are positive");
        Fading { los: make(params.n_los), nlos: make(params.n_nlos) }
    }

    pub fn sample<R: Rng + ?Sized>(&self, state: LinkState, rng: &mut R) -> f64 {
        match state {
            LinkState::Los => self.los.sample(rng),
            LinkState::Nlos => self.nlos.sample(rng),
        }
    }
}

/// One Γ(N_b, N_b) draw for a link in `state`.
pub fn sample_fading<R: Rng + ?Sized>(state: LinkState, params: &SystemParams, rng: &mut R) -> f64 {
    Fading::new(params).sample(state, rng)
}

/// Distance attenuation r^{−α_b}.
pub fn path_loss(state: LinkState, r: f64, params: &SystemParams) -> f64 {
    match state {
        LinkState::Los => power(r, params.alpha_los),
        LinkState::Nlos => power(r, params.alpha_nlos),
    }
    .recip()
}

pub(crate) fn power(r: f64, alpha: f64) -> f64 {
    if alpha == 2.0 {
        r * r
    } else if alpha == 4.0 {
        let r2 = r * r;
        r2 * r2
    } else {
        libm::pow(r, alpha)
    }
}

/// 2^{R_t} − 1.
pub fn sinr_threshold_connection(params: &SystemParams) -> f64 {
    params.connection_threshold()
}

/// 2^{R_e} − 1.
pub fn sinr_threshold_secrecy(params: &SystemParams) -> f64 {
    params.secrecy_threshold()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    #[test]
    fn beyond_ball_is_never_los() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            assert_eq!(sample_link_state(201.0, 1.0, 200.0, &mut rng), LinkState::Nlos);
        }
        for _ in 0..1000 {
            assert_eq!(sample_link_state(50.0, 1.0, 200.0, &mut rng), LinkState::Los);
        }
    }

    #[test]
    fn los_fraction_is_binomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let hits = (0..n).filter(|_| sample_link_state(120.0, 0.2, 200.0, &mut rng) == LinkState::Los).count();
        let frac = hits as f64 / n as f64;
        let sd = (0.2f64 * 0.8 / n as f64).sqrt();
        assert!((frac - 0.2).abs() < 3.0 * sd, "{frac}");
    }

    #[test]
    fn fading_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let p = SystemParams { n_nlos: 1, ..SystemParams::default() };
        let exp: Vec<f64> = (0..n).map(|_| sample_fading(LinkState::Nlos, &p, &mut rng)).collect();
        let (m, v) = moments(&exp);
        assert!((m - 1.0).abs() < 3.0 * (v / n as f64).sqrt(), "exponential mean {m}");
        assert!(exp.iter().all(|&x| x >= 0.0));

        let f = Fading::new(&p);
        let los: Vec<f64> = (0..n).map(|_| f.sample(LinkState::Los, &mut rng)).collect();
        let (_, v) = moments(&los);
        // Standard error of the sample variance from the empirical fourth moment.
        let m4 = los.iter().map(|x| (x - 1.0).powi(4)).sum::<f64>() / n as f64;
        let se = ((m4 - v * v) / n as f64).sqrt();
        assert!((v - 1.0 / 3.0).abs() < 3.0 * se, "variance {v} se {se}");
    }

    #[test]
    fn path_loss_values() {
        let p = SystemParams::default();
        assert_eq!(path_loss(LinkState::Los, 100.0, &p), 1e-4);
        assert!((path_loss(LinkState::Nlos, 10.0, &p) - 1e-4).abs() < 1e-18);
    }
}
