//! The per-interferer kernel F_b(x, r) = 1 − (1 + x/(N_b r^{α_b}))^{−N_b}.

use crate::channel::power;
use crate::params::{LinkState, SystemParams};

#[derive(Debug, Clone, Copy)]
pub(crate) struct PathClass {
    n: i32,
    nf: f64,
    alpha: f64,
}

impl PathClass {
    pub(crate) fn new(params: &SystemParams, state: LinkState) -> Self {
        let n = params.nakagami(state);
        PathClass { n: n as i32, nf: n as f64, alpha: params.path_loss_exponent(state) }
    }

    #[inline]
    pub(crate) fn f(&self, x: f64, r: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if r <= 0.0 {
            return 1.0;
        }
        let a = x / (self.nf * power(r, self.alpha));
        if a < 0.125 {
            // 1 − (1 + a)^{−N} loses every digit for small a.
            -libm::expm1(-self.nf * libm::log1p(a))
        } else if a > 1e300 {
            1.0
        } else {
            let b = 1.0 + a;
            1.0 - 1.0 / (1..self.n).fold(b, |acc, _| acc * b)
        }
    }
}

/// F_b(x, r). Defined as its limit 1 at r = 0.
pub fn kernel(state: LinkState, x: f64, r: f64, params: &SystemParams) -> f64 {
    PathClass::new(params, state).f(x, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        let p = SystemParams::default();
        assert_eq!(kernel(LinkState::Nlos, 0.0, 10.0, &p), 0.0);
        assert!((kernel(LinkState::Nlos, 16.0, 2.0, &p) - 5.0 / 9.0).abs() < 1e-15);
        assert!(kernel(LinkState::Nlos, 1e300, 1.0, &p) == 1.0);
        assert_eq!(kernel(LinkState::Los, 3.0, 0.0, &p), 1.0);
    }

    #[test]
    fn small_argument_branch_is_continuous() {
        let p = SystemParams::default();
        let k = PathClass::new(&p, LinkState::Los);
        // a = x/(3 r²) = 0.125 at x = 0.375, r = 1
        let lo = k.f(0.375 * (1.0 - 1e-12), 1.0);
        let hi = k.f(0.375 * (1.0 + 1e-12), 1.0);
        assert!((lo - hi).abs() < 1e-11);
        let tiny = k.f(3e-20, 1.0);
        assert!((tiny - 3e-20).abs() < 1e-33);
    }
}
