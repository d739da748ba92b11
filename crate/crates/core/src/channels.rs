//! Binary-input memoryless symmetric channels with a discrete output alphabet.
//!
//! Outputs are the integers `-M..=M`. Only the row for input 0 is stored; the
//! row for input 1 is its mirror image, `P(y|1) = P(-y|0)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg};

use crate::error::{param, Result};

/// Tolerance on the sum of a probability row before renormalization.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Relative tolerance under which a log-likelihood-ratio sum counts as a tie.
///
/// Ties are pessimistic: a competitor that is exactly as likely as the
/// transmitted word is an error.
pub const TIE_RTOL: f64 = 1e-9;

/// A real number extended with `+inf` and `-inf`. Never NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedReal(f64);

impl ExtendedReal {
    pub const ZERO: Self = ExtendedReal(0.0);
    pub const POS_INF: Self = ExtendedReal(f64::INFINITY);
    pub const NEG_INF: Self = ExtendedReal(f64::NEG_INFINITY);

    /// Wraps `v`; returns `None` for NaN.
    pub fn new(v: f64) -> Option<Self> {
        (!v.is_nan()).then_some(ExtendedReal(v))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_pos_inf(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `count * self` with the convention `0 * inf = 0`.
    pub fn scale(self, count: u32) -> Self {
        if count == 0 {
            ExtendedReal::ZERO
        } else {
            ExtendedReal(self.0 * count as f64)
        }
    }
}

impl Eq for ExtendedReal {}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    /// Panics in debug builds on `+inf + -inf`, which no reachable
    /// computation forms.
    fn add(self, rhs: Self) -> Self {
        let v = self.0 + rhs.0;
        debug_assert!(!v.is_nan(), "opposite infinities added");
        ExtendedReal(v)
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;

    fn neg(self) -> Self {
        ExtendedReal(-self.0)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Named channel families, kept for reporting and closed-form dispatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelFamily {
    Bsc {
        epsilon: f64,
    },
    Bec {
        delta: f64,
    },
    BscBec {
        epsilon: f64,
        delta: f64,
    },
    Quinary {
        epsilon: f64,
        delta: f64,
        gamma: f64,
    },
    Raw,
}

/// A binary-input memoryless symmetric channel over outputs `-M..=M`.
#[derive(Debug, Clone)]
pub struct BmsChannel {
    half_width: usize,
    p0: Vec<f64>,
    ln_p0: Vec<f64>,
    llr: Vec<ExtendedReal>,
    family: ChannelFamily,
}

fn check_prob(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return param(format!("{name} = {v} is not a probability"));
    }
    Ok(())
}

impl BmsChannel {
    /// Builds a channel from the input-0 row `p0[j + M] = P(j|0)`.
    ///
    /// The row must have odd length at least 3, entries in `[0, 1]` and a
    /// sum within [`SUM_TOLERANCE`] of one. It is renormalized once.
    pub fn from_p0(p0: Vec<f64>) -> Result<Self> {
        Self::with_family(p0, ChannelFamily::Raw)
    }

    fn with_family(mut p0: Vec<f64>, family: ChannelFamily) -> Result<Self> {
        if p0.len() < 3 || p0.len().is_multiple_of(2) {
            return param(format!(
                "probability row must have odd length >= 3, got {}",
                p0.len()
            ));
        }
        for (i, &v) in p0.iter().enumerate() {
            check_prob(&format!("p0[{i}]"), v)?;
        }
        let sum: f64 = p0.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return param(format!("probability row sums to {sum}, not 1"));
        }
        for v in p0.iter_mut() {
            *v /= sum;
        }
        let half_width = p0.len() / 2;
        let ln_p0 = p0.iter().map(|v| v.ln()).collect();
        let mut llr = vec![ExtendedReal::ZERO; p0.len()];
        for j in 1..=half_width {
            let neg = half_width - j;
            let pos = half_width + j;
            let l = match (p0[neg] > 0.0, p0[pos] > 0.0) {
                (true, true) => ExtendedReal((p0[neg] / p0[pos]).ln()),
                (true, false) => ExtendedReal::POS_INF,
                (false, true) => ExtendedReal::NEG_INF,
                (false, false) => ExtendedReal::ZERO,
            };
            llr[neg] = l;
            llr[pos] = -l;
        }
        Ok(BmsChannel {
            half_width,
            p0,
            ln_p0,
            llr,
            family,
        })
    }

    /// BSC(epsilon): outputs `-1` (correct) and `+1` (flipped).
    pub fn bsc(epsilon: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&epsilon) {
            return param(format!("BSC crossover {epsilon} outside [0, 1/2]"));
        }
        Self::with_family(
            vec![1.0 - epsilon, 0.0, epsilon],
            ChannelFamily::Bsc { epsilon },
        )
    }

    /// BEC(delta): outputs `-1` (correct) and `0` (erasure).
    pub fn bec(delta: f64) -> Result<Self> {
        check_prob("BEC erasure probability", delta)?;
        Self::with_family(vec![1.0 - delta, delta, 0.0], ChannelFamily::Bec { delta })
    }

    /// Hybrid BSC-BEC(epsilon, delta).
    pub fn bsc_bec(epsilon: f64, delta: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&epsilon) {
            return param(format!("crossover {epsilon} outside [0, 1/2]"));
        }
        check_prob("erasure probability", delta)?;
        if epsilon + delta > 1.0 {
            return param(format!("epsilon + delta = {} exceeds 1", epsilon + delta));
        }
        Self::with_family(
            vec![(1.0 - epsilon - delta).max(0.0), delta, epsilon],
            ChannelFamily::BscBec { epsilon, delta },
        )
    }

    /// Quinary(epsilon, delta, gamma) over outputs `-2..=2`.
    ///
    /// Given input 0: strong-correct `-2` with `1 - epsilon - delta - gamma`,
    /// weak-correct `-1` with `gamma`, erasure `0` with `delta`, weak-error
    /// `+1` with `epsilon`; a strong error `+2` never occurs.
    pub fn quinary(epsilon: f64, delta: f64, gamma: f64) -> Result<Self> {
        check_prob("epsilon", epsilon)?;
        check_prob("delta", delta)?;
        check_prob("gamma", gamma)?;
        let rest = 1.0 - epsilon - delta - gamma;
        if rest < -SUM_TOLERANCE {
            return param(format!(
                "epsilon + delta + gamma = {} exceeds 1",
                epsilon + delta + gamma
            ));
        }
        Self::with_family(
            vec![rest.max(0.0), gamma, delta, epsilon, 0.0],
            ChannelFamily::Quinary {
                epsilon,
                delta,
                gamma,
            },
        )
    }

    /// `M`: outputs range over `-M..=M`.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// `2M + 1`.
    pub fn alphabet_size(&self) -> usize {
        self.p0.len()
    }

    pub fn family(&self) -> ChannelFamily {
        self.family
    }

    /// The stored input-0 row, indexed by `j + M`.
    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub(crate) fn ln_p0(&self) -> &[f64] {
        &self.ln_p0
    }

    /// Per-index LLRs, indexed by `j + M`.
    pub fn llrs(&self) -> &[ExtendedReal] {
        &self.llr
    }

    /// Alphabet index of symbol `j`. Panics if `|j| > M`.
    pub fn index(&self, j: i32) -> usize {
        let idx = j + self.half_width as i32;
        assert!(
            idx >= 0 && (idx as usize) < self.p0.len(),
            "symbol {j} outside alphabet"
        );
        idx as usize
    }

    /// Symbol at alphabet index `i`.
    pub fn symbol(&self, i: usize) -> i32 {
        i as i32 - self.half_width as i32
    }

    /// `P(y|x)` for `x` in {0, 1}.
    pub fn prob(&self, y: i32, x: u8) -> f64 {
        if x == 0 {
            self.p0[self.index(y)]
        } else {
            self.p0[self.index(-y)]
        }
    }

    /// `ln(P(j|0) / P(j|1))`.
    ///
    /// `+inf` when only input 0 can produce `j`, `-inf` when only input 1 can,
    /// and 0 when neither can (see [`Self::is_reachable`]).
    pub fn llr(&self, j: i32) -> ExtendedReal {
        self.llr[self.index(j)]
    }

    /// Whether symbol `j` has positive probability under some input.
    pub fn is_reachable(&self, j: i32) -> bool {
        self.p0[self.index(j)] > 0.0 || self.p0[self.index(-j)] > 0.0
    }

    /// Pairwise-error membership of a subvector type `mu` (counts indexed by
    /// alphabet index): true iff `sum_j mu_j * LLR_j <= 0`.
    ///
    /// Any `+inf` term forces false; otherwise any `-inf` term forces true.
    /// Sums within [`TIE_RTOL`] of zero, relative to the magnitude of the
    /// terms, are ties and count as errors.
    pub fn is_error_type(&self, mu: &[u32]) -> bool {
        assert_eq!(mu.len(), self.p0.len(), "type length differs from alphabet");
        let m = self.half_width;
        let mut pos_inf = false;
        let mut neg_inf = false;
        let mut sum = 0.0;
        let mut scale = 0.0;
        // Pair j with -j so exact cancellations stay exact.
        for j in 1..=m {
            let a = mu[m - j];
            let b = mu[m + j];
            let l = self.llr[m - j];
            if l.is_pos_inf() {
                pos_inf |= a > 0;
                neg_inf |= b > 0;
            } else if l.is_neg_inf() {
                neg_inf |= a > 0;
                pos_inf |= b > 0;
            } else {
                let lv = l.value();
                sum += (a as f64 - b as f64) * lv;
                scale += (a + b) as f64 * lv.abs();
            }
        }
        if pos_inf {
            return false;
        }
        if neg_inf {
            return true;
        }
        sum <= TIE_RTOL * scale
    }
}

/// Builds a BSC. See [`BmsChannel::bsc`].
pub fn make_bsc(epsilon: f64) -> Result<BmsChannel> {
    BmsChannel::bsc(epsilon)
}

/// Builds a BEC. See [`BmsChannel::bec`].
pub fn make_bec(delta: f64) -> Result<BmsChannel> {
    BmsChannel::bec(delta)
}

/// Builds a hybrid BSC-BEC. See [`BmsChannel::bsc_bec`].
pub fn make_bsc_bec(epsilon: f64, delta: f64) -> Result<BmsChannel> {
    BmsChannel::bsc_bec(epsilon, delta)
}

/// Builds a quinary channel. See [`BmsChannel::quinary`].
pub fn make_quinary(epsilon: f64, delta: f64, gamma: f64) -> Result<BmsChannel> {
    BmsChannel::quinary(epsilon, delta, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15)
    }

    #[test]
    fn constructors() {
        assert!(close(make_bsc(0.1).unwrap().p0(), &[0.9, 0.0, 0.1]));
        assert!(close(make_bsc(0.0).unwrap().p0(), &[1.0, 0.0, 0.0]));
        assert!(close(make_bsc(0.5).unwrap().p0(), &[0.5, 0.0, 0.5]));
        assert!(close(make_bec(0.1).unwrap().p0(), &[0.9, 0.1, 0.0]));
        assert!(close(make_bec(1.0).unwrap().p0(), &[0.0, 1.0, 0.0]));
        assert!(close(make_bec(0.0).unwrap().p0(), &[1.0, 0.0, 0.0]));
        assert!(close(
            make_bsc_bec(0.01, 0.1).unwrap().p0(),
            &[0.89, 0.1, 0.01]
        ));
        assert!(close(
            make_quinary(0.05, 0.1, 0.2).unwrap().p0(),
            &[0.65, 0.2, 0.1, 0.05, 0.0]
        ));
        assert!(close(
            make_quinary(0.0, 0.0, 0.0).unwrap().p0(),
            &[1.0, 0.0, 0.0, 0.0, 0.0]
        ));
    }

    #[test]
    fn degenerate_hybrids() {
        for e in [0.0, 0.03, 0.5] {
            assert!(close(
                make_bsc_bec(e, 0.0).unwrap().p0(),
                make_bsc(e).unwrap().p0()
            ));
        }
        for d in [0.0, 0.3, 1.0] {
            assert!(close(
                make_bsc_bec(0.0, d).unwrap().p0(),
                make_bec(d).unwrap().p0()
            ));
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(make_bsc(-0.1).is_err());
        assert!(make_bsc(0.51).is_err());
        assert!(make_bsc(f64::NAN).is_err());
        assert!(make_bec(1.5).is_err());
        assert!(make_bsc_bec(0.5, 0.6).is_err());
        assert!(make_bsc_bec(0.6, 0.1).is_err());
        assert!(make_quinary(0.5, 0.3, 0.3).is_err());
        assert!(BmsChannel::from_p0(vec![0.5, 0.5]).is_err());
        assert!(BmsChannel::from_p0(vec![0.5, 0.4, 0.0]).is_err());
        assert!(BmsChannel::from_p0(vec![1.0]).is_err());
    }

    #[test]
    fn llr_values() {
        let bsc = make_bsc(0.1).unwrap();
        assert!((bsc.llr(-1).value() - 9f64.ln()).abs() < 1e-15);
        assert_eq!(bsc.llr(1).value(), -(9f64.ln()));
        assert_eq!(bsc.llr(0), ExtendedReal::ZERO);
        assert!(!bsc.is_reachable(0));
        let bec = make_bec(0.2).unwrap();
        assert_eq!(bec.llr(0), ExtendedReal::ZERO);
        assert!(bec.llr(-1).is_pos_inf());
        assert!(bec.llr(1).is_neg_inf());
        let q = make_quinary(0.05, 0.1, 0.2).unwrap();
        assert!(q.llr(-2).is_pos_inf());
        assert!(q.llr(2).is_neg_inf());
        assert!((q.llr(-1).value() - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn error_type_examples() {
        let bsc = make_bsc(0.1).unwrap();
        assert!(bsc.is_error_type(&[1, 0, 1]));
        assert!(!bsc.is_error_type(&[2, 0, 1]));
        assert!(bsc.is_error_type(&[0, 0, 1]));
        let hybrid = make_bsc_bec(0.01, 0.1).unwrap();
        assert!(hybrid.is_error_type(&[1, 2, 1]));
        assert!(hybrid.is_error_type(&[0, 3, 0]));
        let bec = make_bec(0.3).unwrap();
        assert!(!bec.is_error_type(&[1, 2, 0]));
        assert!(bec.is_error_type(&[0, 2, 0]));
    }

    #[test]
    fn antisymmetry() {
        let chans = [
            make_bsc(0.07).unwrap(),
            make_bec(0.4).unwrap(),
            make_bsc_bec(0.02, 0.2).unwrap(),
            make_quinary(0.05, 0.1, 0.2).unwrap(),
            BmsChannel::from_p0(vec![0.4, 0.25, 0.0, 0.2, 0.1, 0.05, 0.0]).unwrap(),
        ];
        for c in &chans {
            let m = c.half_width() as i32;
            for j in -m..=m {
                assert_eq!(c.llr(j), -c.llr(-j));
            }
        }
    }

    #[test]
    fn renormalizes_once() {
        let c = BmsChannel::from_p0(vec![0.5 + 4e-13, 0.25, 0.25]).unwrap();
        let s: f64 = c.p0().iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
    }
}
