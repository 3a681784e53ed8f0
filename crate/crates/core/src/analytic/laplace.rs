//! Laplace transforms of the aggregate interference of each interferer
//! process at a receiver or an eavesdropper.

use core::f64::consts::PI;

use alloc::vec::Vec;

use super::region::{
    c1, c2, c3, clamped_acos, in_ball_weight, nn2_pdf, nn_pdf, out_ball_weight, pair_distance,
    pair_distance_survival, partial_fraction,
};
use super::{check_argument, Analytic, Victim};
use crate::error::{Error, Result};
use crate::params::LinkState;
use crate::quadrature::{integrate, integrate_sqrt_ends, integrate_to_infinity, Integral};

/// A transform value with its estimated quadrature error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceValue {
    pub value: f64,
    pub est_error: f64,
}

impl LaplaceValue {
    pub const ONE: LaplaceValue = LaplaceValue { value: 1.0, est_error: 0.0 };

    /// `exp(−scale·I)` with the error of `I` propagated to first order.
    fn exp_neg(scale: f64, integral: Integral) -> Self {
        let value = libm::exp(-scale * integral.value);
        LaplaceValue { value, est_error: value * scale * integral.error }
    }

    fn expectation(integral: Integral) -> Self {
        LaplaceValue { value: integral.value.clamp(0.0, 1.0), est_error: integral.error }
    }
}

/// The radial integrals of the eavesdropper-side kernels at one Laplace
/// argument, shared by the homogeneous transform and the hole corrections.
pub(crate) struct HoleExponent<'a> {
    model: &'a Analytic,
    s: f64,
    ball: f64,
    tail: f64,
}

impl<'a> HoleExponent<'a> {
    pub(crate) fn new(model: &'a Analytic, s: f64) -> Result<Self> {
        let (ball, tail) = if s == 0.0 {
            (0.0, 0.0)
        } else {
            let v = Victim::Eavesdropper;
            (model.ball_integral(v, s)?.value, model.nlos_integral(v, s, model.params.d)?.value)
        };
        Ok(HoleExponent { model, s, ball, tail })
    }

    /// Exponent per unit density of the homogeneous-PPP transform.
    pub(crate) fn homogeneous(&self) -> f64 {
        2.0 * PI * (self.ball + self.tail)
    }

    /// Σ_b Σ_ĝ p_b q_ĝ T1(s, u) + Σ_ĝ q_ĝ T2(s, u): the exponent per unit
    /// density once a LoS ball centred at distance `u` is carved out.
    pub(crate) fn at(&self, u: f64) -> Result<f64> {
        if self.s == 0.0 {
            return Ok(0.0);
        }
        let m = self.model;
        let v = Victim::Eavesdropper;
        let t1 = m.t1_with(u, self.ball, |r| m.ball_mix(v, self.s, r))?;
        let t2 = m.t2_with(u, self.tail, |r| m.nlos_mix(v, self.s, r))?;
        Ok(t1 + t2)
    }
}

impl Analytic {
    /// Σ_g q_g F_N(s g, r) over the gain law of `victim`.
    pub(crate) fn nlos_mix(&self, victim: Victim, s: f64, r: f64) -> f64 {
        self.gains(victim).iter().map(|(g, q)| q * self.nlos.f(s * g, r)).sum()
    }

    /// Σ_g q_g (p_L F_L + p_N F_N)(s g, r): the in-ball kernel.
    pub(crate) fn ball_mix(&self, victim: Victim, s: f64, r: f64) -> f64 {
        let pl = self.params.p_los;
        let pn = 1.0 - pl;
        self.gains(victim).iter().map(|(g, q)| q * (pl * self.los.f(s * g, r) + pn * self.nlos.f(s * g, r))).sum()
    }

    /// Σ_g q_g (F_L − F_N)(s g, r).
    pub(crate) fn los_excess_mix(&self, victim: Victim, s: f64, r: f64) -> f64 {
        self.gains(victim).iter().map(|(g, q)| q * (self.los.f(s * g, r) - self.nlos.f(s * g, r))).sum()
    }

    /// ∫_a^∞ Σ_g q_g F_N(s g, r) r dr.
    pub fn nlos_integral(&self, victim: Victim, s: f64, a: f64) -> Result<Integral> {
        integrate_to_infinity(|r| Ok(self.nlos_mix(victim, s, r) * r), a, &self.quad)
    }

    /// ∫_0^D Σ_b p_b Σ_g q_g F_b(s g, r) r dr.
    pub fn ball_integral(&self, victim: Victim, s: f64) -> Result<Integral> {
        integrate(|r| Ok(self.ball_mix(victim, s, r) * r), 0.0, self.params.d, &self.quad)
    }

    /// Transform of the in-ball SCJ jammers at the typical receiver when the
    /// typical pair is alone: a PPP of density λ_J, NLoS to the receiver.
    pub fn lt_jam_rx_simplified(&self, s: f64) -> Result<LaplaceValue> {
        check_argument(s)?;
        let lambda = self.params.lambda_j();
        if s == 0.0 || lambda == 0.0 {
            return Ok(LaplaceValue::ONE);
        }
        Ok(LaplaceValue::exp_neg(2.0 * PI * lambda, self.nlos_integral(Victim::Receiver, s, 0.0)?))
    }

    /// Transform of the out-of-ball jammers at the typical receiver: density
    /// λ̄_J outside its own LoS ball, hence all NLoS.
    pub fn lt_php_rx_simplified(&self, s: f64) -> Result<LaplaceValue> {
        check_argument(s)?;
        let lambda = self.params.lambda_j_bar();
        if s == 0.0 || lambda == 0.0 {
            return Ok(LaplaceValue::ONE);
        }
        Ok(LaplaceValue::exp_neg(2.0 * PI * lambda, self.nlos_integral(Victim::Receiver, s, self.params.d)?))
    }

    /// Transform of a homogeneous PPP of density `lambda` with blockage-law
    /// links to `victim`.
    pub fn lt_ppp(&self, lambda: f64, s: f64, victim: Victim) -> Result<LaplaceValue> {
        check_argument(s)?;
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::param("lambda", "density must be finite and >= 0"));
        }
        if s == 0.0 || lambda == 0.0 {
            return Ok(LaplaceValue::ONE);
        }
        let total = self.ball_integral(victim, s)? + self.nlos_integral(victim, s, self.params.d)?;
        Ok(LaplaceValue::exp_neg(2.0 * PI * lambda, total))
    }

    /// [`Analytic::lt_ppp`] at an eavesdropper.
    pub fn lt_ppp_eve(&self, lambda: f64, s: f64) -> Result<LaplaceValue> {
        self.lt_ppp(lambda, s, Victim::Eavesdropper)
    }

    /// Transform of the concurrent transmitters at the typical receiver.
    pub fn lt_tx_rx(&self, lambda_t: f64, s: f64) -> Result<LaplaceValue> {
        self.lt_ppp(lambda_t, s, Victim::Receiver)
    }

    /// T1 for a single gain and link class: the in-ball exponent integral
    /// with a hole of radius D centred at distance `u`.
    pub fn t1(&self, s: f64, u: f64, gain: f64, state: LinkState) -> Result<f64> {
        let k = *self.class(state);
        let x = s * gain;
        let full = integrate(|r| Ok(k.f(x, r) * r), 0.0, self.params.d, &self.quad)?.value;
        self.t1_with(u, full, |r| k.f(x, r))
    }

    /// T2 for a single gain: the NLoS exponent integral beyond the ball.
    pub fn t2(&self, s: f64, u: f64, gain: f64) -> Result<f64> {
        let k = self.nlos;
        let x = s * gain;
        let full = integrate_to_infinity(|r| Ok(k.f(x, r) * r), self.params.d, &self.quad)?.value;
        self.t2_with(u, full, |r| k.f(x, r))
    }

    /// `full` is ∫_0^D kernel(r) r dr.
    pub(crate) fn t1_with<K: Fn(f64) -> f64>(&self, u: f64, full: f64, kernel: K) -> Result<f64> {
        let d = self.params.d;
        if u <= 0.0 {
            return Ok(0.0);
        }
        if u >= 2.0 * d {
            return Ok(2.0 * PI * full);
        }
        if u < d {
            let inside = |r: f64| Ok(kernel(r) * in_ball_weight(u, r, d) * r);
            return Ok(integrate_sqrt_ends(inside, c1(u, d), d, &self.quad)?.value);
        }
        let cut = |r: f64| Ok(kernel(r) * (2.0 * PI - in_ball_weight(u, r, d)) * r);
        Ok(2.0 * PI * full - integrate_sqrt_ends(cut, c2(u, d), d, &self.quad)?.value)
    }

    /// `full` is ∫_D^∞ kernel(r) r dr.
    pub(crate) fn t2_with<K: Fn(f64) -> f64>(&self, u: f64, full: f64, kernel: K) -> Result<f64> {
        let d = self.params.d;
        if u <= 0.0 {
            return Ok(2.0 * PI * full);
        }
        let cut = |r: f64| Ok(kernel(r) * (2.0 * PI - out_ball_weight(u, r, d)) * r);
        Ok(2.0 * PI * full - integrate_sqrt_ends(cut, c3(u, d), u + d, &self.quad)?.value)
    }

    /// Angles on `[0, π]` where the pair distance crosses D and 2D.
    fn hole_breaks(&self, r_e: f64) -> Vec<f64> {
        let p = &self.params;
        let mut phis = alloc::vec![0.0];
        for w in [p.d, 2.0 * p.d] {
            let c = (p.r0 * p.r0 + r_e * r_e - w * w) / (2.0 * p.r0 * r_e);
            if c > -1.0 && c < 1.0 {
                phis.push(libm::acos(c));
            }
        }
        phis.push(PI);
        phis
    }

    /// E_u[exp(−density·E(u))] for the pair distance u of a transmitter at
    /// distance `r_e`, weighted by `survival(u)`.
    fn angular_mean<S: Fn(f64) -> f64>(
        &self,
        h: &HoleExponent<'_>,
        density: f64,
        r_e: f64,
        survival: S,
    ) -> Result<Integral> {
        let r0 = self.params.r0;
        let breaks = self.hole_breaks(r_e);
        let mut total = Integral::default();
        for seg in breaks.windows(2) {
            total = total
                + integrate(
                    |phi| {
                        let u = pair_distance(phi, r_e, r0);
                        Ok(libm::exp(-density * h.at(u)?) * survival(u) / PI)
                    },
                    seg[0],
                    seg[1],
                    &self.quad,
                )?;
        }
        Ok(total)
    }

    /// E over the pair distance u and the nearest-other-receiver distance v
    /// of exp(−density·E(min{u, v})).
    fn nearest_hole_mean(&self, h: &HoleExponent<'_>, density: f64, r_e: f64, lambda_r: f64) -> Result<Integral> {
        let p = &self.params;
        let near = self.angular_mean(h, density, r_e, |u| libm::exp(-lambda_r * PI * u * u))?;
        let g = |w: f64| -> Result<f64> { Ok(libm::exp(-density * h.at(w)?) * nn_pdf(w, lambda_r)) };
        let lo = (r_e - p.r0).abs();
        let hi = r_e + p.r0;
        let mut far = if lo > 0.0 { integrate(&g, 0.0, lo, &self.quad)? } else { Integral::default() };
        let mut knots = alloc::vec![lo];
        knots.extend([p.d, 2.0 * p.d].into_iter().filter(|&w| w > lo && w < hi));
        knots.push(hi);
        for seg in knots.windows(2) {
            far = far
                + integrate_sqrt_ends(
                    |w| Ok(g(w)? * pair_distance_survival(w, r_e, p.r0)),
                    seg[0],
                    seg[1],
                    &self.quad,
                )?;
        }
        Ok(near + far)
    }

    pub(crate) fn hole_mean_single(&self, h: &HoleExponent<'_>, density: f64, r_e: f64) -> Result<Integral> {
        self.angular_mean(h, density, r_e, |_| 1.0)
    }

    pub(crate) fn hole_mean_nearest(&self, h: &HoleExponent<'_>, density: f64, r_e: f64) -> Result<Integral> {
        let lambda_r = self.params.lambda_r();
        if lambda_r == 0.0 {
            self.hole_mean_single(h, density, r_e)
        } else {
            self.nearest_hole_mean(h, density, r_e, lambda_r)
        }
    }

    /// Transform of the out-of-ball jammers at an eavesdropper at distance
    /// `r_e` from the typical transmitter, with the typical receiver's ball
    /// as the only hole.
    pub fn lt_php_eve_simplified(&self, s: f64, r_e: f64) -> Result<LaplaceValue> {
        self.lt_php_eve_single(s, r_e, self.params.lambda_j_bar())
    }

    /// As [`Analytic::lt_php_eve_simplified`] with an explicit parent density.
    pub fn lt_php_eve_single(&self, s: f64, r_e: f64, density: f64) -> Result<LaplaceValue> {
        check_argument(s)?;
        check_distance(r_e)?;
        if s == 0.0 || density == 0.0 {
            return Ok(LaplaceValue::ONE);
        }
        let h = HoleExponent::new(self, s)?;
        Ok(LaplaceValue::expectation(self.hole_mean_single(&h, density, r_e)?))
    }

    /// Transform of the out-of-ball jammers at an eavesdropper in the general
    /// scenario: the hole nearest the eavesdropper among the typical receiver
    /// and the other receivers is carved from a PPP of the blended density.
    pub fn lt_php_eve_general(&self, s: f64, r_e: f64) -> Result<LaplaceValue> {
        self.lt_php_eve_nearest(s, r_e, self.params.lambda_j_blended())
    }

    /// As [`Analytic::lt_php_eve_general`] with an explicit parent density.
    pub fn lt_php_eve_nearest(&self, s: f64, r_e: f64, density: f64) -> Result<LaplaceValue> {
        check_argument(s)?;
        check_distance(r_e)?;
        if s == 0.0 || density == 0.0 {
            return Ok(LaplaceValue::ONE);
        }
        let h = HoleExponent::new(self, s)?;
        Ok(LaplaceValue::expectation(self.hole_mean_nearest(&h, density, r_e)?))
    }

    /// Q1: LoS-minus-NLoS correction over the part of the typical receiver's
    /// ball not associated with the nearest other receiver at `v1`.
    pub fn q1(&self, s: f64, v1: f64, gain: f64) -> Result<f64> {
        let x = s * gain;
        self.q1_with(v1, |r| self.los.f(x, r) - self.nlos.f(x, r))
    }

    /// Q2: the same over the region shared with the second-nearest receiver.
    pub fn q2(&self, s: f64, v1: f64, v2: f64, gain: f64) -> Result<f64> {
        let x = s * gain;
        self.q2_with(v1, v2, |r| self.los.f(x, r) - self.nlos.f(x, r))
    }

    pub(crate) fn q1_with<K: Fn(f64) -> f64>(&self, v1: f64, kernel: K) -> Result<f64> {
        let d = self.params.d;
        let lo = (0.5 * v1).min(d);
        let f = |r: f64| Ok(kernel(r) * clamped_acos(v1 / (2.0 * r)) * r);
        Ok(integrate_sqrt_ends(f, lo, d, &self.quad)?.value)
    }

    pub(crate) fn q2_with<K: Fn(f64) -> f64>(&self, v1: f64, v2: f64, kernel: K) -> Result<f64> {
        let d = self.params.d;
        let lo = (0.5 * v2).min(d);
        let f = |r: f64| Ok(kernel(r) * (PI - clamped_acos(v1 / (2.0 * r))) * r);
        Ok(integrate_sqrt_ends(f, lo, d, &self.quad)?.value)
    }

    /// Transform of the in-ball SCJ jammers at the typical receiver in the
    /// general scenario, where jammers LoS to the typical receiver may still
    /// be selected through a nearer receiver.
    pub fn lt_jam_rx_general(&self, s: f64) -> Result<LaplaceValue> {
        let base = self.lt_jam_rx_simplified(s)?;
        let p = &self.params;
        let lambda_r = p.lambda_r();
        let lambda_j = p.lambda_j();
        if s == 0.0 || lambda_j == 0.0 || lambda_r == 0.0 || p.p_los == 0.0 {
            return Ok(base);
        }
        let d = p.d;
        let scale = 2.0 * p.p_los * lambda_j;
        let v = Victim::Receiver;
        let beyond = libm::exp(-4.0 * PI * lambda_r * d * d);
        let outer = integrate(
            |v1| {
                let q1 = self.q1_with(v1, |r| self.los_excess_mix(v, s, r))?;
                let inner = integrate(
                    |v2| {
                        let xi = partial_fraction(v2, lambda_r, d, &self.quad)?;
                        let q2 = if xi > 0.0 { self.q2_with(v1, v2, |r| self.los_excess_mix(v, s, r))? } else { 0.0 };
                        Ok(libm::exp(-scale * xi * q2) * nn2_pdf(v1, v2, lambda_r))
                    },
                    v1,
                    2.0 * d,
                    &self.quad,
                )?;
                // Second-nearest receiver beyond 2D: no correction from it.
                Ok(libm::exp(-scale * q1) * (inner.value + 2.0 * PI * lambda_r * v1 * beyond))
            },
            0.0,
            2.0 * d,
            &self.quad,
        )?;
        let correction = beyond + outer.value;
        Ok(LaplaceValue { value: base.value * correction, est_error: base.est_error + base.value * outer.error })
    }
}

fn check_distance(r_e: f64) -> Result<()> {
    if r_e.is_finite() && r_e > 0.0 {
        Ok(())
    } else {
        Err(Error::param("r_e", "eavesdropper distance must be finite and > 0"))
    }
}
