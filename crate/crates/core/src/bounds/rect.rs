//! Reduced-complexity bounds over a rectangular set of output types.
//!
//! The rectangle caps the count of every symbol except `-M`. Inside it the
//! min-form bound is evaluated as usual; the outside is charged either its
//! exact probability or a per-symbol Chernoff tail.

use std::time::Instant;

use super::engine::{Engine, Region};
use super::{BoundResult, Pruning};
use crate::channels::BmsChannel;
use crate::combinatorics::LogSum;
use crate::error::{param, Result};
use crate::spectrum::WeightSpectrum;

/// Caps `m_j` for symbols `j = -M+1..=M` (alphabet indices `1..2M+1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectLimits {
    caps: Vec<u32>,
}

impl RectLimits {
    pub fn new(caps: Vec<u32>) -> Self {
        RectLimits { caps }
    }

    /// Every cap equal to `n`: the rectangle covers all types.
    pub fn full(channel: &BmsChannel, n: u32) -> Self {
        RectLimits {
            caps: vec![n; channel.alphabet_size() - 1],
        }
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    fn validate(&self, channel: &BmsChannel, n: u32) -> Result<()> {
        if self.caps.len() != channel.alphabet_size() - 1 {
            return param(format!(
                "rectangle needs {} caps, got {}",
                channel.alphabet_size() - 1,
                self.caps.len()
            ));
        }
        if let Some(m) = self.caps.iter().find(|&&m| m > n) {
            return param(format!("cap {m} exceeds block length {n}"));
        }
        Ok(())
    }
}

impl std::fmt::Display for RectLimits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.caps.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Default width, in standard deviations, of [`choose_rect`]'s caps.
pub const DEFAULT_RECT_SIGMA: f64 = 8.0;

/// Caps at the mean symbol count plus `sigma_count` standard deviations:
/// `m_j = min(n, ceil(n p_j + sigma sqrt(n p_j (1 - p_j))))`.
pub fn choose_rect(channel: &BmsChannel, n: u32, sigma_count: f64) -> Result<RectLimits> {
    if sigma_count.is_nan() || sigma_count <= 0.0 {
        return param(format!("sigma count must be positive, got {sigma_count}"));
    }
    let nf = n as f64;
    let caps = channel.p0()[1..]
        .iter()
        .map(|&p| {
            let m = (nf * p + sigma_count * (nf * p * (1.0 - p)).sqrt()).ceil();
            m.clamp(0.0, nf) as u32
        })
        .collect();
    Ok(RectLimits { caps })
}

/// Min-form bound inside the rectangle plus the exact probability of the
/// types outside it.
pub fn rect_bound(
    channel: &BmsChannel,
    spectrum: &WeightSpectrum,
    limits: &RectLimits,
) -> Result<BoundResult> {
    let start = Instant::now();
    let engine = Engine::new(channel, spectrum)?;
    limits.validate(channel, engine.n())?;
    let acc = engine.run(
        &Region::Rect {
            caps: limits.caps(),
            charge_outside: true,
        },
        Pruning::Off.threshold(),
    );
    Ok(acc.into_result(start))
}

/// Binary KL divergence `D(p || q)` in nats.
pub(crate) fn binary_kl(p: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// Min-form bound inside the rectangle plus
/// `sum_j exp(-n D(m_j / n || P(j|0)))` for the outside.
///
/// Each cap must satisfy `m_j / n >= P(j|0)`. Symbols with `P(j|0) = 0`
/// or `m_j = n` can never exceed their cap and contribute nothing.
pub fn rect_bound_chernoff(
    channel: &BmsChannel,
    spectrum: &WeightSpectrum,
    limits: &RectLimits,
) -> Result<BoundResult> {
    let start = Instant::now();
    let engine = Engine::new(channel, spectrum)?;
    let n = engine.n();
    limits.validate(channel, n)?;
    let mut tail = LogSum::new();
    for (i, (&m, &p)) in limits.caps().iter().zip(&channel.p0()[1..]).enumerate() {
        if p == 0.0 || m == n {
            continue;
        }
        let frac = m as f64 / n as f64;
        if frac < p {
            return param(format!(
                "Chernoff tail for symbol {} needs m/n >= {p}, got {m}/{n}",
                channel.symbol(i + 1)
            ));
        }
        tail.push(-(n as f64) * binary_kl(frac, p));
    }
    let mut acc = engine.run(
        &Region::Rect {
            caps: limits.caps(),
            charge_outside: false,
        },
        Pruning::Off.threshold(),
    );
    acc.noise.merge(&tail);
    Ok(acc.into_result(start))
}
