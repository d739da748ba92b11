//! Upper bounds on the ML frame error probability of a binary linear code.
//!
//! Every bound splits the output space by type. Over one part the pairwise
//! error events are union-bounded using the weight spectrum; the rest (the
//! large-noise region) is bounded by its probability. The full bound takes
//! the smaller of the two per type.

mod closed_form;
mod engine;
mod rect;

use std::time::Duration;

pub use closed_form::{bec_bound, bsc_bec_bound, poltyrev_bsc, zeta_star};
pub use engine::extended_bound;
pub use rect::{choose_rect, rect_bound, rect_bound_chernoff, RectLimits, DEFAULT_RECT_SIGMA};

use crate::channels::BmsChannel;
use crate::combinatorics::{LogSum, LogValue};
use crate::error::{param, Result};
use crate::spectrum::WeightSpectrum;

/// Default pruning margin in nats below `ln(target_fer)`.
pub const DEFAULT_PRUNE_MARGIN: f64 = 30.0;

/// Output of a bound computation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// `min(1, exp(log_p))`.
    pub p_upper: f64,
    /// Unclamped log of the bound.
    pub log_p: LogValue,
    /// Contribution of types where the union arm was selected.
    pub union_mass: LogValue,
    /// Contribution of the large-noise region (probability arm).
    pub noise_mass: LogValue,
    /// Probability of types skipped by pruning, already included in `p_upper`.
    pub pruned_mass: LogValue,
    /// Output types whose union term was evaluated.
    pub types_visited: u64,
    pub wall_time: Duration,
    /// Bound-specific scalars (e.g. `alpha`, `rate_eff`, `exponent`).
    pub diagnostics: Vec<(String, f64)>,
}

impl BoundResult {
    pub(crate) fn from_parts(
        union_mass: LogValue,
        noise_mass: LogValue,
        pruned_mass: LogValue,
        types_visited: u64,
        wall_time: Duration,
    ) -> Self {
        let mut acc = LogSum::new();
        acc.push(union_mass.ln());
        acc.push(noise_mass.ln());
        acc.push(pruned_mass.ln());
        let log_p = acc.value();
        BoundResult {
            p_upper: log_p.exp().min(1.0),
            log_p,
            union_mass,
            noise_mass,
            pruned_mass,
            types_visited,
            wall_time,
            diagnostics: Vec::new(),
        }
    }

    /// A bound with no decomposition, e.g. an exponent bound.
    pub(crate) fn single(log_p: LogValue, wall_time: Duration) -> Self {
        Self::from_parts(log_p, LogValue::ZERO, LogValue::ZERO, 0, wall_time)
    }

    pub(crate) fn zero(wall_time: Duration) -> Self {
        Self::from_parts(LogValue::ZERO, LogValue::ZERO, LogValue::ZERO, 0, wall_time)
    }

    pub fn diagnostic(&self, key: &str) -> Option<f64> {
        self.diagnostics
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
    }
}

/// Skipping of improbable output types.
///
/// Skipped types contribute their full probability, so the result stays an
/// upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Pruning {
    #[default]
    Off,
    /// Skip types whose log-probability is below this value.
    Below(f64),
}

impl Pruning {
    /// Threshold `ln(target_fer) - margin`.
    pub fn for_target(target_fer: f64, margin: f64) -> Self {
        Pruning::Below(target_fer.ln() - margin)
    }

    pub(crate) fn threshold(self) -> Option<f64> {
        match self {
            Pruning::Off => None,
            Pruning::Below(t) => Some(t),
        }
    }
}

/// `extended_bound` on the quinary channel with the given parameters.
pub fn quinary_bound(
    spectrum: &WeightSpectrum,
    epsilon: f64,
    delta: f64,
    gamma: f64,
    pruning: Pruning,
) -> Result<BoundResult> {
    let channel = BmsChannel::quinary(epsilon, delta, gamma)?;
    extended_bound(&channel, spectrum, pruning)
}

pub(crate) fn require_d_min(spectrum: &WeightSpectrum) -> Result<u32> {
    match spectrum.d_min() {
        Some(d) => Ok(d),
        None => param("spectrum has no nonzero codeword (d_min undefined)"),
    }
}

/// `count * ln_p` with `0^0 = 1`.
#[inline]
pub(crate) fn ln_pow(ln_p: f64, count: u32) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * ln_p
    }
}
