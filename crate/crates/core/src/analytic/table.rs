//! Density-independent tabulation of the analytic engine.
//!
//! Every transform exponent is linear in the interferer densities once the
//! kernel integrals are known, and the outer expectations only reweight them.
//! The table stores those integrals on fixed quadrature nodes, after which a
//! connection or secrecy probability for new densities, ρ, ϱ or β costs a few
//! hundred thousand exponentials. The optimizer searches on top of it.

use core::f64::consts::PI;

use alloc::vec::Vec;

use super::laplace::HoleExponent;
use super::probability::{alternating_sum, secrecy_densities, sign, HoleModel, NEGLIGIBLE};
use super::region::{hole_area, nn2_pdf, nn_pdf, pair_distance, pair_distance_survival};
use super::{Analytic, Victim};
use crate::error::{Error, Result};
use crate::par::map_ordered;
use crate::params::{binomial, LinkState, Scenario, Scheme, SystemParams};
use crate::quadrature::{fixed_rule, fixed_rule_sqrt_ends, fixed_rule_tail, integrate_sqrt_ends};

/// Kronrod panels per segment of each fixed rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableResolution {
    /// Per radial segment of the eavesdropper-distance integral.
    pub radial: usize,
    /// Per angular segment of the pair-distance expectation.
    pub angular: usize,
    /// Per segment of the nearest-other-receiver expectation.
    pub nearest: usize,
    /// Per axis of the two nearest-receiver distances.
    pub pair: usize,
}

impl Default for TableResolution {
    fn default() -> Self {
        TableResolution { radial: 1, angular: 2, nearest: 2, pair: 4 }
    }
}

/// Breakpoints of the eavesdropper-distance integral beyond the ball, in
/// multiples of D. The tail beyond the last one is mapped to `(0, 1]`.
const TAIL_BREAKS: [f64; 9] = [1.0, 1.5, 2.0, 2.5, 3.5, 5.0, 7.5, 12.5, 32.0];

#[derive(Debug, Clone)]
struct ConnectionTerm {
    /// C(N_L, k)(−1)^{k+1} e^{−kμσ²/P}.
    weight: f64,
    /// Exponents per unit density: homogeneous blockage-law PPP, NLoS PPP
    /// on the whole plane, NLoS PPP beyond D.
    ppp: f64,
    nlos_all: f64,
    nlos_out: f64,
    /// Q1 at each v1 node and Q2 at each (v1, v2) node, gain-averaged.
    q1: Vec<f64>,
    q2: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
struct PairNode {
    v1: f64,
    weight: f64,
    /// (v2, weight, ∫_{v2}^{2D} A(r) r dr)
    v2: Vec<(f64, f64, f64)>,
}

#[derive(Debug, Clone)]
struct SecrecyTerm {
    /// p_b q_ĝ C(N_b, k)(−1)^{k+1} e^{−sσ²/P}.
    weight: f64,
    homogeneous: f64,
    /// Hole exponent at the angular and nearest-receiver nodes.
    angular: Vec<f64>,
    nearest: Vec<f64>,
}

#[derive(Debug, Clone)]
struct RadialNode {
    /// Quadrature weight times r_e.
    weight: f64,
    /// (u, weight / π) of the pair-distance expectation.
    angular: Vec<(f64, f64)>,
    /// (w, weight · P(U ≥ w)) of the nearest-receiver expectation.
    nearest: Vec<(f64, f64)>,
    terms: Vec<SecrecyTerm>,
}

/// Connection and secrecy probabilities for one geometry at any densities.
#[derive(Debug, Clone)]
pub struct TabulatedModel {
    params: SystemParams,
    connection: Vec<ConnectionTerm>,
    pairs: Vec<PairNode>,
    radial: Vec<RadialNode>,
}

/// `params` with every field the table leaves free reset.
fn geometry(params: &SystemParams) -> SystemParams {
    SystemParams { lambda_t: 0.0, lambda_p: 0.0, lambda_e: 0.0, rho: 0.0, varrho: 0.0, beta: 0.0, ..*params }
}

impl TabulatedModel {
    /// Tabulates everything the densities, ρ, ϱ and β do not enter.
    pub fn new(model: &Analytic, resolution: TableResolution) -> Result<Self> {
        if resolution.radial == 0 || resolution.angular == 0 || resolution.nearest == 0 || resolution.pair == 0 {
            return Err(Error::param("resolution", "every panel count must be at least 1"));
        }
        let params = *model.params();
        let pairs = pair_nodes(model, resolution.pair)?;
        let connection = connection_terms(model, &pairs)?;
        let radial = radial_nodes(model, resolution)?;
        Ok(TabulatedModel { params, connection, pairs, radial })
    }

    /// The parameters the table was built from.
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// Whether `params` differs from the tabulated point only in λ_T, λ_P,
    /// λ_E, ρ, ϱ or β.
    pub fn covers(&self, params: &SystemParams) -> bool {
        geometry(params) == geometry(&self.params)
    }

    fn check(&self, params: &SystemParams) -> Result<()> {
        params.validate()?;
        if self.covers(params) {
            Ok(())
        } else {
            Err(Error::param("params", "differ from the tabulated geometry beyond densities and jamming knobs"))
        }
    }

    pub fn connection_probability(&self, params: &SystemParams, scheme: Scheme, scenario: Scenario) -> Result<f64> {
        self.check(params)?;
        let p = params;
        let tx = match scenario {
            Scenario::Simplified => 0.0,
            Scenario::General => p.lambda_t,
        };
        let mut terms: Vec<f64> = Vec::with_capacity(self.connection.len());
        for (i, t) in self.connection.iter().enumerate() {
            if t.weight == 0.0 {
                terms.push(0.0);
                continue;
            }
            let in_ball = || match scenario {
                Scenario::Simplified => libm::exp(-p.lambda_j() * t.nlos_all),
                Scenario::General => {
                    libm::exp(-tx * t.ppp - p.lambda_j() * t.nlos_all) * self.sight_correction(i, p)
                }
            };
            let factor = match scheme {
                Scheme::Scj => in_ball() * libm::exp(-p.lambda_j_bar() * t.nlos_out),
                Scheme::ScjQuiet => in_ball(),
                Scheme::Pj => libm::exp(-(tx + p.varrho * p.lambda_p) * t.ppp),
                Scheme::None => libm::exp(-tx * t.ppp),
            };
            terms.push(t.weight * factor);
        }
        Ok(alternating_sum(&mut terms).clamp(0.0, 1.0))
    }

    /// The factor by which jammers LoS to the typical receiver but selected
    /// through a nearer receiver scale the in-ball transform.
    fn sight_correction(&self, k: usize, p: &SystemParams) -> f64 {
        let lambda_r = p.lambda_r();
        let lambda_j = p.lambda_j();
        if lambda_j == 0.0 || lambda_r == 0.0 || p.p_los == 0.0 {
            return 1.0;
        }
        let t = &self.connection[k];
        let d = p.d;
        let scale = 2.0 * p.p_los * lambda_j;
        let beyond = libm::exp(-4.0 * PI * lambda_r * d * d);
        let denom = |v2: f64| d * d - 0.25 * v2 * v2;
        let mut outer = 0.0;
        for (i, node) in self.pairs.iter().enumerate() {
            let mut inner = 0.0;
            for (j, &(v2, w, area)) in node.v2.iter().enumerate() {
                let xi = (2.0 * lambda_r * area / denom(v2)).min(1.0);
                inner += w * libm::exp(-scale * xi * t.q2[i][j]) * nn2_pdf(node.v1, v2, lambda_r);
            }
            let tail = 2.0 * PI * lambda_r * node.v1 * beyond;
            outer += node.weight * libm::exp(-scale * t.q1[i]) * (inner + tail);
        }
        beyond + outer
    }

    pub fn secrecy_probability(&self, params: &SystemParams, scheme: Scheme, scenario: Scenario) -> Result<f64> {
        self.check(params)?;
        let (ppp, holes) = secrecy_densities(params, scheme, scenario);
        Ok(self.secrecy_with(params, ppp, holes))
    }

    fn secrecy_with(&self, p: &SystemParams, ppp: f64, holes: HoleModel) -> f64 {
        if p.lambda_e == 0.0 {
            return 1.0;
        }
        let lambda_r = p.lambda_r();
        let mut terms = Vec::new();
        let mut total = 0.0;
        for node in &self.radial {
            terms.clear();
            for t in &node.terms {
                let homogeneous = t.weight * libm::exp(-ppp * t.homogeneous);
                if homogeneous.abs() < NEGLIGIBLE {
                    continue;
                }
                let hole = match holes {
                    HoleModel::Single { density } if density > 0.0 => single_mean(node, t, density),
                    HoleModel::Nearest { density } if density > 0.0 => {
                        if lambda_r == 0.0 {
                            single_mean(node, t, density)
                        } else {
                            nearest_mean(node, t, density, lambda_r)
                        }
                    }
                    _ => 1.0,
                };
                terms.push(homogeneous * hole);
            }
            total += node.weight * alternating_sum(&mut terms);
        }
        libm::exp(-2.0 * PI * p.lambda_e * total).clamp(0.0, 1.0)
    }

    /// STC under `scheme` in the general scenario.
    pub fn stc(&self, params: &SystemParams, scheme: Scheme) -> Result<f64> {
        let pc = self.connection_probability(params, scheme, Scenario::General)?;
        let ps = self.secrecy_probability(params, scheme, Scenario::General)?;
        Ok(super::stc(pc, ps, params))
    }
}

fn single_mean(node: &RadialNode, t: &SecrecyTerm, density: f64) -> f64 {
    let v: f64 = node.angular.iter().zip(&t.angular).map(|(&(_, w), &e)| w * libm::exp(-density * e)).sum();
    v.clamp(0.0, 1.0)
}

fn nearest_mean(node: &RadialNode, t: &SecrecyTerm, density: f64, lambda_r: f64) -> f64 {
    let near: f64 = node
        .angular
        .iter()
        .zip(&t.angular)
        .map(|(&(u, w), &e)| w * libm::exp(-density * e - lambda_r * PI * u * u))
        .sum();
    let far: f64 =
        node.nearest.iter().zip(&t.nearest).map(|(&(v, w), &e)| w * libm::exp(-density * e) * nn_pdf(v, lambda_r)).sum();
    (near + far).clamp(0.0, 1.0)
}

fn pair_nodes(model: &Analytic, panels: usize) -> Result<Vec<PairNode>> {
    let d = model.params().d;
    let cfg = model.quadrature();
    let mut out = Vec::new();
    for (v1, weight) in fixed_rule(0.0, 2.0 * d, panels) {
        let mut v2 = Vec::new();
        for (v, w) in fixed_rule(v1, 2.0 * d, panels) {
            let area = integrate_sqrt_ends(|r| Ok(hole_area(r, d) * r), v, 2.0 * d, cfg)?.value;
            v2.push((v, w, area));
        }
        out.push(PairNode { v1, weight, v2 });
    }
    Ok(out)
}

fn connection_terms(model: &Analytic, pairs: &[PairNode]) -> Result<Vec<ConnectionTerm>> {
    let p = model.params();
    let mu = model.mu();
    let nz = p.noise_to_power();
    let v = Victim::Receiver;
    let mut out = Vec::new();
    for k in 1..=p.n_los {
        let s = k as f64 * mu;
        let weight = sign(k) * binomial(p.n_los, k) * libm::exp(-s * nz);
        let ppp = 2.0 * PI * (model.ball_integral(v, s)?.value + model.nlos_integral(v, s, p.d)?.value);
        let nlos_all = 2.0 * PI * model.nlos_integral(v, s, 0.0)?.value;
        let nlos_out = 2.0 * PI * model.nlos_integral(v, s, p.d)?.value;
        let rows = map_ordered(pairs, |node| -> Result<(f64, Vec<f64>)> {
            let excess = |r: f64| model.los_excess_mix(v, s, r);
            let q1 = model.q1_with(node.v1, excess)?;
            let mut q2 = Vec::with_capacity(node.v2.len());
            for &(v2, _, _) in &node.v2 {
                q2.push(model.q2_with(node.v1, v2, excess)?);
            }
            Ok((q1, q2))
        });
        let mut q1 = Vec::with_capacity(pairs.len());
        let mut q2 = Vec::with_capacity(pairs.len());
        for row in rows {
            let (a, b) = row?;
            q1.push(a);
            q2.push(b);
        }
        out.push(ConnectionTerm { weight, ppp, nlos_all, nlos_out, q1, q2 });
    }
    Ok(out)
}

/// (r_e, weight) nodes of the eavesdropper-distance integral, split where
/// the pair-distance range `[|r_e − r0|, r_e + r0]` meets D or 2D.
fn radial_rule(p: &SystemParams, panels: usize) -> Vec<(f64, f64, bool)> {
    let d = p.d;
    let mut knots = alloc::vec![0.0, d / 256.0, d / 64.0, d / 16.0, d / 4.0, d];
    for w in [d, 2.0 * d] {
        knots.extend([w - p.r0, w + p.r0]);
    }
    knots.extend(TAIL_BREAKS.iter().map(|m| m * d));
    knots.retain(|&x| x >= 0.0);
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * d);
    let mut out = Vec::new();
    for seg in knots.windows(2) {
        let in_ball = seg[1] <= d;
        out.extend(fixed_rule(seg[0], seg[1], panels).into_iter().map(|(r, w)| (r, w, in_ball)));
    }
    let last = *knots.last().expect("knots are non-empty");
    out.extend(fixed_rule_tail(last, panels).into_iter().map(|(r, w)| (r, w, false)));
    out
}

fn radial_nodes(model: &Analytic, res: TableResolution) -> Result<Vec<RadialNode>> {
    let p = *model.params();
    let rule = radial_rule(&p, res.radial);
    let rows = map_ordered(&rule, |&(r, w, in_ball)| radial_node(model, &p, r, w, in_ball, res));
    rows.into_iter().collect()
}

fn radial_node(
    model: &Analytic,
    p: &SystemParams,
    r: f64,
    w: f64,
    in_ball: bool,
    res: TableResolution,
) -> Result<RadialNode> {
    let angular = angular_rule(p, r, res.angular);
    let nearest = nearest_rule(p, r, res.nearest);
    let states: &[(LinkState, f64)] = if in_ball {
        &[(LinkState::Los, p.p_los), (LinkState::Nlos, 1.0 - p.p_los)]
    } else {
        &[(LinkState::Nlos, 1.0)]
    };
    let nz = p.noise_to_power();
    let mut terms = Vec::new();
    for &(state, pb) in states {
        if pb == 0.0 {
            continue;
        }
        let n = p.nakagami(state);
        let ra = crate::channel::power(r, p.path_loss_exponent(state));
        for (g, q) in model.gains(Victim::Eavesdropper).iter() {
            if q == 0.0 {
                continue;
            }
            let base = model.nu(state, g) * ra;
            for k in 1..=n {
                let s = k as f64 * base;
                let weight = pb * q * sign(k) * binomial(n, k) * libm::exp(-s * nz);
                if weight.abs() < NEGLIGIBLE {
                    continue;
                }
                let h = HoleExponent::new(model, s)?;
                let at = |nodes: &[(f64, f64)]| -> Result<Vec<f64>> { nodes.iter().map(|&(u, _)| h.at(u)).collect() };
                terms.push(SecrecyTerm {
                    weight,
                    homogeneous: h.homogeneous(),
                    angular: at(&angular)?,
                    nearest: at(&nearest)?,
                });
            }
        }
    }
    Ok(RadialNode { weight: w * r, angular, nearest, terms })
}

fn angular_rule(p: &SystemParams, r_e: f64, panels: usize) -> Vec<(f64, f64)> {
    let mut breaks = alloc::vec![0.0];
    for w in [p.d, 2.0 * p.d] {
        let c = (p.r0 * p.r0 + r_e * r_e - w * w) / (2.0 * p.r0 * r_e);
        if c > -1.0 && c < 1.0 {
            breaks.push(libm::acos(c));
        }
    }
    breaks.push(PI);
    let mut out = Vec::new();
    for seg in breaks.windows(2) {
        for (phi, w) in fixed_rule(seg[0], seg[1], panels) {
            out.push((pair_distance(phi, r_e, p.r0), w / PI));
        }
    }
    out
}

fn nearest_rule(p: &SystemParams, r_e: f64, panels: usize) -> Vec<(f64, f64)> {
    let lo = (r_e - p.r0).abs();
    let hi = r_e + p.r0;
    let mut out = if lo > 0.0 { fixed_rule(0.0, lo, panels) } else { Vec::new() };
    let mut knots = alloc::vec![lo];
    knots.extend([p.d, 2.0 * p.d].into_iter().filter(|&w| w > lo && w < hi));
    knots.push(hi);
    for seg in knots.windows(2) {
        for (w, wt) in fixed_rule_sqrt_ends(seg[0], seg[1], panels) {
            out.push((w, wt * pair_distance_survival(w, r_e, p.r0)));
        }
    }
    out
}
