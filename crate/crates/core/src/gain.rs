//! Effective antenna gain between two randomly oriented sectored antennas.

use rand::Rng;

use crate::params::{Antenna, SystemParams};

/// Discrete law of the product of transmit and receive lobe gains.
///
/// Entries are ordered main-main, main-back, back-main, back-back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainDistribution {
    entries: [(f64, f64); 4],
}

impl GainDistribution {
    pub fn between(tx: &Antenna, rx: &Antenna) -> Self {
        let pt = tx.main_lobe_probability();
        let pr = rx.main_lobe_probability();
        GainDistribution {
            entries: [
                (tx.main * rx.main, pt * pr),
                (tx.main * rx.back, pt * (1.0 - pr)),
                (tx.back * rx.main, (1.0 - pt) * pr),
                (tx.back * rx.back, (1.0 - pt) * (1.0 - pr)),
            ],
        }
    }

    /// Gain seen by a receiver from an unaligned transmitter or jammer.
    pub fn receiver(params: &SystemParams) -> Self {
        Self::between(&params.tx, &params.rx)
    }

    /// Gain seen by an eavesdropper.
    pub fn eavesdropper(params: &SystemParams) -> Self {
        Self::between(&params.tx, &params.eve)
    }

    /// `(gain, probability)` pairs.
    pub fn entries(&self) -> &[(f64, f64); 4] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(g, q)| g * q).sum()
    }

    /// Inverse-CDF lookup for a uniform `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for &(g, q) in &self.entries {
            acc += q;
            if u < acc {
                return g;
            }
        }
        // Rounding left a sliver above the last cumulative sum; fall back to
        // the last entry with positive mass.
        self.entries.iter().rev().find(|e| e.1 > 0.0).map_or(self.entries[3].0, |e| e.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}
