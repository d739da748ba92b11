//! Evaluation of the min-form bound over all (or a restricted set of) output
//! types.
//!
//! For an output type `ell` and a weight-`w` codeword, the sum over error
//! subtypes `mu` of `|T(mu)| |T(ell - mu)|` equals
//! `multinomial(n; ell) / C(n, w) * sum_mu prod_j C(ell_j, mu_j)`. The engine
//! works with the ratio to `multinomial(n; ell)`, so the min against the
//! probability arm becomes a comparison with 1.
//!
//! Subtypes are enumerated coordinate by coordinate in ascending LLR order.
//! A subtree whose completions are all errors is summed in closed form
//! (Vandermonde: `sum prod C(ell_j, mu_j) = C(sum ell_j, rem)`); a subtree with
//! no error completion is skipped.

use std::time::Instant;

use rayon::prelude::*;

use super::{require_d_min, BoundResult, Pruning};
use crate::channels::{BmsChannel, TIE_RTOL};
use crate::combinatorics::{ln_type_probability, Compositions, LnFactorials, LogSum};
use crate::error::{param, Result};
use crate::spectrum::WeightSpectrum;

/// Extended bound over every output type, with optional pruning.
pub fn extended_bound(
    channel: &BmsChannel,
    spectrum: &WeightSpectrum,
    pruning: Pruning,
) -> Result<BoundResult> {
    let start = Instant::now();
    let engine = Engine::new(channel, spectrum)?;
    let acc = engine.run(&Region::All, pruning.threshold());
    Ok(acc.into_result(start))
}

/// Which output types are evaluated.
pub(crate) enum Region<'a> {
    All,
    /// Types with `ell_i <= caps[i - 1]` for alphabet indices `i >= 1`.
    /// Types outside are charged their probability when `charge_outside`.
    Rect {
        caps: &'a [u32],
        charge_outside: bool,
    },
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulated {
    pub union: LogSum,
    pub noise: LogSum,
    pub pruned: LogSum,
    pub visited: u64,
}

impl Accumulated {
    fn merge(&mut self, other: &Accumulated) {
        self.union.merge(&other.union);
        self.noise.merge(&other.noise);
        self.pruned.merge(&other.pruned);
        self.visited += other.visited;
    }

    pub fn into_result(self, start: Instant) -> BoundResult {
        BoundResult::from_parts(
            self.union.value(),
            self.noise.value(),
            self.pruned.value(),
            self.visited,
            start.elapsed(),
        )
    }
}

pub(crate) struct Engine<'a> {
    channel: &'a BmsChannel,
    n: u32,
    q: usize,
    lf: LnFactorials,
    /// Alphabet indices in ascending LLR order.
    order: Vec<usize>,
    /// LLRs in that order.
    llr: Vec<f64>,
    /// `(w, ln S_w - ln C(n, w))` over the spectrum support.
    support: Vec<(u32, f64)>,
    /// Slack for deciding that no completion of a partial subtype is an error.
    none_margin_per_symbol: f64,
}

struct Scratch {
    caps: Vec<u32>,
    suffix: Vec<u32>,
    mu: Vec<u32>,
}

impl<'a> Engine<'a> {
    pub fn new(channel: &'a BmsChannel, spectrum: &WeightSpectrum) -> Result<Self> {
        require_d_min(spectrum)?;
        let n = spectrum.n();
        if n == 0 {
            return param("block length must be positive");
        }
        let q = channel.alphabet_size();
        let lf = LnFactorials::new(n);
        let llrs = channel.llrs();
        let mut order: Vec<usize> = (0..q).collect();
        order.sort_by(|&a, &b| llrs[a].cmp(&llrs[b]).then(a.cmp(&b)));
        let llr: Vec<f64> = order.iter().map(|&i| llrs[i].value()).collect();
        let max_abs = llr
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let support = spectrum
            .support()
            .map(|w| (w, spectrum.log_s(w).ln() - lf.ln_binomial(n, w)))
            .collect();
        Ok(Engine {
            channel,
            n,
            q,
            lf,
            order,
            llr,
            support,
            none_margin_per_symbol: 2.0 * TIE_RTOL * max_abs,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Evaluates `region`, splitting by the count of symbol `-M` into
    /// independent chunks that are merged in chunk order.
    pub fn run(&self, region: &Region<'_>, prune_below: Option<f64>) -> Accumulated {
        let partials: Vec<Accumulated> = (0..=self.n)
            .into_par_iter()
            .map(|lead| self.run_chunk(lead, region, prune_below))
            .collect();
        let mut total = Accumulated::default();
        for p in &partials {
            total.merge(p);
        }
        total
    }

    fn run_chunk(&self, lead: u32, region: &Region<'_>, prune_below: Option<f64>) -> Accumulated {
        let mut acc = Accumulated::default();
        let rest = self.n - lead;
        let mut scratch = Scratch {
            caps: vec![0; self.q],
            suffix: vec![0; self.q + 1],
            mu: vec![0; self.q],
        };
        let mut ell = vec![0u32; self.q];
        ell[0] = lead;
        let tail = match region {
            Region::Rect {
                caps,
                charge_outside: false,
            } => Compositions::bounded(rest, caps.to_vec()),
            _ => Compositions::new(rest, self.q - 1),
        };
        let ln_p0 = self.channel.ln_p0();
        for t in tail {
            ell[1..].copy_from_slice(t.counts());
            let ln_prob = ln_type_probability(ln_p0, &ell);
            if ln_prob == f64::NEG_INFINITY {
                continue;
            }
            let ln_type = ln_prob + self.lf.ln_multinomial(&ell);
            if let Region::Rect {
                caps,
                charge_outside: true,
            } = region
            {
                if ell[1..].iter().zip(caps.iter()).any(|(l, m)| l > m) {
                    acc.noise.push(ln_type);
                    continue;
                }
            }
            if let Some(thr) = prune_below {
                if ln_type < thr {
                    acc.pruned.push(ln_type);
                    continue;
                }
            }
            acc.visited += 1;
            match self.log_union_ratio(&ell, &mut scratch) {
                Some(r) => acc.union.push(ln_type + r),
                None => acc.noise.push(ln_type),
            }
        }
        acc
    }

    /// `ln(union / multinomial(n; ell))`, or `None` once the ratio reaches 1
    /// (the probability arm is the minimum).
    fn log_union_ratio(&self, ell: &[u32], s: &mut Scratch) -> Option<f64> {
        for t in 0..self.q {
            s.caps[t] = ell[self.order[t]];
        }
        s.suffix[self.q] = 0;
        for t in (0..self.q).rev() {
            s.suffix[t] = s.suffix[t + 1] + s.caps[t];
        }
        let max_margin = self.none_margin_per_symbol * self.n as f64;
        let mut ratio = LogSum::new();
        for &(w, base) in &self.support {
            let (mn, slope) = self.min_completion(s, 0, w);
            if mn > max_margin && slope >= 0.0 {
                // Minimal completion only grows with w from here on.
                break;
            }
            let mut inner = LogSum::new();
            self.visit(s, 0, w, w, 0.0, 0.0, &mut inner);
            if inner.ln() == f64::NEG_INFINITY {
                continue;
            }
            ratio.push(base + inner.ln());
            if ratio.ln() >= 0.0 {
                return None;
            }
        }
        Some(ratio.ln())
    }

    /// Smallest LLR sum over completions placing `rem` symbols on sorted
    /// coordinates `t..`, and the LLR of the last unit placed.
    fn min_completion(&self, s: &Scratch, t: usize, mut rem: u32) -> (f64, f64) {
        let mut mn = 0.0;
        let mut slope = f64::NEG_INFINITY;
        for u in t..self.q {
            if rem == 0 {
                break;
            }
            let take = rem.min(s.caps[u]);
            if take > 0 {
                mn += take as f64 * self.llr[u];
                slope = self.llr[u];
                rem -= take;
            }
        }
        (mn, slope)
    }

    fn max_completion(&self, s: &Scratch, t: usize, mut rem: u32) -> f64 {
        let mut mx = 0.0;
        for u in (t..self.q).rev() {
            if rem == 0 {
                break;
            }
            let take = rem.min(s.caps[u]);
            if take > 0 {
                mx += take as f64 * self.llr[u];
                rem -= take;
            }
        }
        mx
    }

    #[allow(clippy::too_many_arguments)]
    fn visit(
        &self,
        s: &mut Scratch,
        t: usize,
        w: u32,
        rem: u32,
        partial: f64,
        ln_prod: f64,
        out: &mut LogSum,
    ) {
        if rem > s.suffix[t] {
            return;
        }
        let last = self.q - 1;
        if t == last {
            s.mu[self.order[t]] = rem;
            if self.channel.is_error_type(&s.mu) {
                out.push(ln_prod + self.lf.ln_binomial(s.caps[t], rem));
            }
            return;
        }
        let (mn, _) = self.min_completion(s, t, rem);
        if partial + mn > self.none_margin_per_symbol * w as f64 {
            return;
        }
        let mx = self.max_completion(s, t, rem);
        if partial + mx <= 0.0 {
            out.push(ln_prod + self.lf.ln_binomial(s.suffix[t], rem));
            return;
        }
        let top = s.caps[t].min(rem);
        for v in 0..=top {
            s.mu[self.order[t]] = v;
            let p = if v == 0 {
                partial
            } else {
                partial + v as f64 * self.llr[t]
            };
            let lp = ln_prod + self.lf.ln_binomial(s.caps[t], v);
            self.visit(s, t + 1, w, rem - v, p, lp, out);
        }
    }
}
