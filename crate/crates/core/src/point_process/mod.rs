//! Spatial realizations: PPP sampling, the typical pair, jammer selection and
//! per-link channel draws.

mod grid;

pub use grid::{nearest_linear, GridIndex};

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::channel::{path_loss, sample_link_state, Fading};
use crate::error::{Error, Result};
use crate::gain::GainDistribution;
use crate::geometry::Point;
use crate::params::{LinkState, Scenario, Scheme, SystemParams};
use crate::rng::{link_rng, process_rng, trial_key, Process};

/// Below this many receivers nearest-neighbour queries scan linearly.
const LINEAR_SCAN_LIMIT: usize = 64;

/// Homogeneous PPP of `density` in the disk of radius `radius` at the origin.
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, radius: f64, rng: &mut R) -> Vec<Point> {
    let mean = density * PI * radius * radius;
    if !(mean > 0.0) {
        return Vec::new();
    }
    let n = Poisson::new(mean).map_or(0.0, |d| d.sample(rng)) as usize;
    (0..n).map(|_| uniform_in_disk(radius, rng)).collect()
}

pub(crate) fn uniform_in_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point {
    let r = radius * libm::sqrt(rng.random::<f64>());
    Point::polar(r, 2.0 * PI * rng.random::<f64>())
}

/// Identity of a node inside one realization. Index 0 of the transmitter and
/// receiver lists is the typical pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    Transmitter(u32),
    Receiver(u32),
    Jammer(u32),
    Eavesdropper(u32),
}

impl NodeId {
    fn code(self) -> u64 {
        let (tag, i) = match self {
            NodeId::Transmitter(i) => (0u64, i),
            NodeId::Receiver(i) => (1, i),
            NodeId::Jammer(i) => (2, i),
            NodeId::Eavesdropper(i) => (3, i),
        };
        tag << 32 | i as u64
    }
}

/// The channel of one ordered link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub distance: f64,
    pub state: LinkState,
    pub gain: f64,
    pub fading: f64,
}

impl Link {
    /// Received power per unit transmit power.
    pub fn power(&self, params: &SystemParams) -> f64 {
        self.gain * self.fading * path_loss(self.state, self.distance, params)
    }
}

/// Draws shared by every link of a simulation.
#[derive(Debug, Clone, Copy)]
pub struct LinkModel {
    pub fading: Fading,
    pub rx_gains: GainDistribution,
    pub eve_gains: GainDistribution,
}

impl LinkModel {
    pub fn new(params: &SystemParams) -> Self {
        LinkModel {
            fading: Fading::new(params),
            rx_gains: GainDistribution::receiver(params),
            eve_gains: GainDistribution::eavesdropper(params),
        }
    }
}

/// One sampled network.
///
/// Link draws are not stored: they are a pure function of the realization key
/// and the ordered node pair, which makes repeated queries consistent without
/// any mutable state.
#[derive(Debug, Clone)]
pub struct NetworkRealization {
    pub window_radius: f64,
    pub transmitters: Vec<Point>,
    pub receivers: Vec<Point>,
    pub potential_jammers: Vec<Point>,
    pub eavesdroppers: Vec<Point>,
    pub jammer_flags: Vec<bool>,
    /// Uniform activation draw of each potential jammer.
    pub selection_draws: Vec<f64>,
    key: u64,
    receiver_index: Option<GridIndex>,
}

impl NetworkRealization {
    /// An empty realization whose links are keyed by `key`.
    pub fn empty(window_radius: f64, key: u64) -> Self {
        NetworkRealization {
            window_radius,
            transmitters: Vec::new(),
            receivers: Vec::new(),
            potential_jammers: Vec::new(),
            eavesdroppers: Vec::new(),
            jammer_flags: Vec::new(),
            selection_draws: Vec::new(),
            key,
            receiver_index: None,
        }
    }

    /// Samples trial `trial` of the stream `seed`: the typical pair, the other
    /// pairs (general scenario), potential jammers with their activation
    /// draws and, when `with_eavesdroppers`, the eavesdroppers. Jammers are
    /// not yet selected.
    pub fn sample(
        params: &SystemParams,
        scenario: Scenario,
        window_radius: f64,
        seed: u64,
        trial: u64,
        with_eavesdroppers: bool,
    ) -> Self {
        let mut net = NetworkRealization::empty(window_radius, trial_key(seed, trial));
        net.place_typical_pair(params, &mut process_rng(seed, trial, Process::Pair));
        if scenario == Scenario::General {
            let mut rng = process_rng(seed, trial, Process::Transmitters);
            for x in sample_ppp(params.lambda_t, window_radius, &mut rng) {
                let a = 2.0 * PI * rng.random::<f64>();
                net.transmitters.push(x);
                net.receivers.push(Point::new(x.x + params.r0 * libm::cos(a), x.y + params.r0 * libm::sin(a)));
            }
        }
        let mut rng = process_rng(seed, trial, Process::Jammers);
        net.potential_jammers = sample_ppp(params.lambda_p, window_radius, &mut rng);
        net.selection_draws = (0..net.potential_jammers.len()).map(|_| rng.random::<f64>()).collect();
        net.jammer_flags = alloc::vec![false; net.potential_jammers.len()];
        if with_eavesdroppers {
            let mut rng = process_rng(seed, trial, Process::Eavesdroppers);
            net.eavesdroppers = sample_ppp(params.lambda_e, window_radius, &mut rng);
        }
        net.index_receivers(params.d);
        net
    }

    /// Puts the typical receiver at the origin and its transmitter at distance
    /// r0 in a uniform direction, as entry 0 of both lists.
    pub fn place_typical_pair<R: Rng + ?Sized>(&mut self, params: &SystemParams, rng: &mut R) -> (Point, Point) {
        let y0 = Point::ORIGIN;
        let x0 = Point::polar(params.r0, 2.0 * PI * rng.random::<f64>());
        if self.transmitters.is_empty() {
            self.transmitters.push(x0);
            self.receivers.push(y0);
        } else {
            self.transmitters[0] = x0;
            self.receivers[0] = y0;
        }
        self.receiver_index = None;
        (x0, y0)
    }

    /// Builds the grid index over receivers once there are enough of them.
    pub fn index_receivers(&mut self, cell: f64) {
        self.receiver_index =
            (self.receivers.len() >= LINEAR_SCAN_LIMIT).then(|| GridIndex::new(&self.receivers, cell));
    }

    pub fn nearest_receiver(&self, p: &Point) -> Result<(usize, f64)> {
        let found = match &self.receiver_index {
            Some(g) => g.nearest(p),
            None => nearest_linear(p, &self.receivers),
        };
        found.ok_or(Error::NoReceivers)
    }

    pub fn position(&self, id: NodeId) -> Point {
        match id {
            NodeId::Transmitter(i) => self.transmitters[i as usize],
            NodeId::Receiver(i) => self.receivers[i as usize],
            NodeId::Jammer(i) => self.potential_jammers[i as usize],
            NodeId::Eavesdropper(i) => self.eavesdroppers[i as usize],
        }
    }

    /// Blockage of the link `from → to`, from the same draw [`Self::link`] uses.
    pub fn link_state(&self, from: NodeId, to: NodeId, distance: f64, params: &SystemParams) -> LinkState {
        if is_typical_pair(from, to) {
            return LinkState::Los;
        }
        let mut rng = link_rng(self.key, from.code(), to.code());
        sample_link_state(distance, params.p_los, params.d, &mut rng)
    }

    /// The channel of `from → to`. The typical pair is LoS with aligned beams;
    /// every other link draws its blockage, an unaligned gain for the
    /// receiving role and Γ(N, N) fading.
    pub fn link(&self, from: NodeId, to: NodeId, params: &SystemParams, model: &LinkModel) -> Result<Link> {
        let a = self.position(from);
        let b = self.position(to);
        let distance = a.distance(&b);
        if distance == 0.0 {
            return Err(Error::ZeroDistance);
        }
        Ok(self.link_at(from, to, distance, params, model))
    }

    pub(crate) fn link_at(&self, from: NodeId, to: NodeId, distance: f64, params: &SystemParams, model: &LinkModel) -> Link {
        let mut rng = link_rng(self.key, from.code(), to.code());
        if is_typical_pair(from, to) {
            let state = LinkState::Los;
            return Link { distance, state, gain: params.tx.main * params.rx.main, fading: model.fading.sample(state, &mut rng) };
        }
        let state = sample_link_state(distance, params.p_los, params.d, &mut rng);
        let gains = match to {
            NodeId::Eavesdropper(_) => &model.eve_gains,
            _ => &model.rx_gains,
        };
        let gain = gains.sample(&mut rng);
        Link { distance, state, gain, fading: model.fading.sample(state, &mut rng) }
    }

    /// SCJ: a potential jammer beyond D of its nearest receiver is active; one
    /// within D is active when that link is NLoS and its draw is below ρ.
    pub fn scj_select(&mut self, params: &SystemParams) -> Result<&[bool]> {
        self.select_sight(params, true)
    }

    /// SCJ-Q: as SCJ, but jammers outside every LoS ball stay quiet.
    pub fn scjq_select(&mut self, params: &SystemParams) -> Result<&[bool]> {
        self.select_sight(params, false)
    }

    fn select_sight(&mut self, params: &SystemParams, far_active: bool) -> Result<&[bool]> {
        if self.receivers.is_empty() {
            return Err(Error::NoReceivers);
        }
        for i in 0..self.potential_jammers.len() {
            let p = self.potential_jammers[i];
            let (j, d) = self.nearest_receiver(&p)?;
            self.jammer_flags[i] = if d > params.d {
                far_active
            } else {
                let state = self.link_state(NodeId::Jammer(i as u32), NodeId::Receiver(j as u32), d, params);
                state == LinkState::Nlos && self.selection_draws[i] < params.rho
            };
        }
        Ok(&self.jammer_flags)
    }

    /// PJ: each potential jammer is active when its draw is below ϱ.
    pub fn pj_select(&mut self, varrho: f64) -> &[bool] {
        for (flag, &u) in self.jammer_flags.iter_mut().zip(&self.selection_draws) {
            *flag = u < varrho;
        }
        &self.jammer_flags
    }

    pub fn select(&mut self, scheme: Scheme, params: &SystemParams) -> Result<&[bool]> {
        match scheme {
            Scheme::Scj => self.scj_select(params),
            Scheme::ScjQuiet => self.scjq_select(params),
            Scheme::Pj => Ok(self.pj_select(params.varrho)),
            Scheme::None => {
                self.jammer_flags.iter_mut().for_each(|f| *f = false);
                Ok(&self.jammer_flags)
            }
        }
    }

    /// Every radiating node other than `source`: all transmitters and the
    /// active jammers.
    pub fn active_interferers(&self, source: NodeId) -> Vec<NodeId> {
        let tx = (0..self.transmitters.len() as u32).map(NodeId::Transmitter);
        let jam = (0..self.potential_jammers.len() as u32).filter(|&i| self.jammer_flags[i as usize]).map(NodeId::Jammer);
        tx.chain(jam).filter(|&id| id != source).collect()
    }

    /// SINR of `source → victim` against every active interferer.
    pub fn sinr_at(&self, victim: NodeId, source: NodeId, params: &SystemParams, model: &LinkModel) -> Result<f64> {
        if victim == source {
            return Err(Error::ZeroDistance);
        }
        let signal = self.link(source, victim, params, model)?.power(params);
        let mut interference = 0.0;
        for id in self.active_interferers(source) {
            interference += self.link(id, victim, params, model)?.power(params);
        }
        Ok(signal / (interference + params.noise_to_power()))
    }
}

fn is_typical_pair(from: NodeId, to: NodeId) -> bool {
    from == NodeId::Transmitter(0) && to == NodeId::Receiver(0)
}
