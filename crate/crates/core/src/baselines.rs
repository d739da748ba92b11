//! Reference bounds: Gallager's random-coding exponent and the
//! Shulman-Feder bound for codes with a known spectrum.
//!
//! Exponents and rates are in bits.

use std::time::Instant;

use crate::bounds::BoundResult;
use crate::channels::BmsChannel;
use crate::combinatorics::LogValue;
use crate::error::{param, Result};
use crate::spectrum::WeightSpectrum;

const LN2: f64 = std::f64::consts::LN_2;

/// Golden-section tolerance on the optimizing `rho`.
pub const RHO_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentResult {
    /// Rate in bits per channel use.
    pub rate: f64,
    /// `E_r(R)` in bits.
    pub exponent: f64,
    pub rho_star: f64,
}

impl ExponentResult {
    /// `2^(-n E_r)`.
    pub fn bound(&self, n: u32) -> f64 {
        (-(n as f64) * self.exponent * LN2).exp()
    }
}

/// Gallager's `E_0(rho)` for equiprobable inputs, in bits:
/// `-log2 sum_y [ (p(y|0)^(1/(1+rho)) + p(y|1)^(1/(1+rho))) / 2 ]^(1+rho)`.
pub fn gallager_e0(channel: &BmsChannel, rho: f64) -> f64 {
    let s = 1.0 / (1.0 + rho);
    let p0 = channel.p0();
    let q = p0.len();
    let mut total = 0.0;
    for y in 0..q {
        let (a, b) = (p0[y], p0[q - 1 - y]);
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let inner = 0.5 * (a.powf(s) + b.powf(s));
        total += inner.powf(1.0 + rho);
    }
    -total.log2()
}

/// `E_r(R) = max_{0 <= rho <= 1} E_0(rho) - rho R`, by golden-section search
/// (the maximand is concave in `rho`). Endpoints win ties.
pub fn gallager_exponent(channel: &BmsChannel, rate: f64) -> ExponentResult {
    let f = |rho: f64| gallager_e0(channel, rho) - rho * rate;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > RHO_TOLERANCE {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = (0.0, f(0.0));
    let f1 = f(1.0);
    if f1 > best.1 {
        best = (1.0, f1);
    }
    let fm = f(mid);
    if fm > best.1 {
        best = (mid, fm);
    }
    ExponentResult {
        rate,
        exponent: best.1.max(0.0),
        rho_star: best.0,
    }
}

/// `2^(-n E_r(k/n))` for the code's length and rate.
pub fn random_coding_bound(channel: &BmsChannel, spectrum: &WeightSpectrum) -> Result<BoundResult> {
    let start = Instant::now();
    let Some(rate) = spectrum.rate() else {
        return param("random-coding bound needs the code dimension k");
    };
    let er = gallager_exponent(channel, rate);
    let log_p = LogValue::from_ln((-(spectrum.n() as f64) * er.exponent * LN2).min(0.0));
    let mut r = BoundResult::single(log_p, start.elapsed());
    r.diagnostics = vec![
        ("rate".into(), rate),
        ("exponent".into(), er.exponent),
        ("rho_star".into(), er.rho_star),
    ];
    Ok(r)
}

/// Largest ratio of `S_w` to the binomial spectrum over the support `w >= 1`,
/// as a natural log.
pub fn ln_spectrum_alpha(spectrum: &WeightSpectrum) -> Result<f64> {
    let Some(k) = spectrum.k() else {
        return param("Shulman-Feder bound needs the code dimension k");
    };
    let n = spectrum.n();
    let binom = WeightSpectrum::binomial(n, k.max(1))?;
    let alpha = spectrum
        .support()
        .map(|w| spectrum.log_s(w).ln() - binom.log_s(w).ln())
        .fold(f64::NEG_INFINITY, f64::max);
    if alpha == f64::NEG_INFINITY {
        return param("spectrum has no nonzero codeword");
    }
    Ok(alpha)
}

/// Shulman-Feder: `2^(-n E_r(R + log2(alpha) / n))`, with `alpha` the
/// largest spectrum-to-binomial ratio over the spectrum support.
pub fn shulman_feder(channel: &BmsChannel, spectrum: &WeightSpectrum) -> Result<BoundResult> {
    let start = Instant::now();
    let Some(rate) = spectrum.rate() else {
        return param("Shulman-Feder bound needs the code dimension k");
    };
    let ln_alpha = ln_spectrum_alpha(spectrum)?;
    let n = spectrum.n() as f64;
    let rate_eff = rate + ln_alpha / LN2 / n;
    let er = gallager_exponent(channel, rate_eff);
    let log_p = LogValue::from_ln((-n * er.exponent * LN2).min(0.0));
    let mut r = BoundResult::single(log_p, start.elapsed());
    r.diagnostics = vec![
        ("alpha".into(), ln_alpha.exp()),
        ("rate_eff".into(), rate_eff),
        ("exponent".into(), er.exponent),
        ("rho_star".into(), er.rho_star),
    ];
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{make_bec, make_bsc, make_bsc_bec};

    #[test]
    fn e0_examples() {
        for c in [make_bsc(0.1).unwrap(), make_bec(0.3).unwrap()] {
            assert!(gallager_e0(&c, 0.0).abs() < 1e-15);
        }
        assert!((gallager_e0(&make_bsc(0.0).unwrap(), 1.0) - 1.0).abs() < 1e-15);
        // BEC(d), rho = 1: outputs -1 and +1 give (sqrt(1-d)/2)^2 each, the
        // erasure gives d.
        let d: f64 = 0.3;
        let expect = -(2.0 * (1.0 - d) / 4.0 + d).log2();
        assert!((gallager_e0(&make_bec(d).unwrap(), 1.0) - expect).abs() < 1e-15);
    }

    #[test]
    fn exponent_endpoints() {
        let c = make_bsc(0.1).unwrap();
        let above = gallager_exponent(&c, 1.0);
        assert_eq!(above.exponent, 0.0);
        assert_eq!(above.rho_star, 0.0);
        let zero = gallager_exponent(&c, 0.0);
        assert_eq!(zero.rho_star, 1.0);
        assert_eq!(zero.exponent, gallager_e0(&c, 1.0));
    }

    #[test]
    fn bsc_half_rate_positive() {
        let c = make_bsc(0.05).unwrap();
        let r = gallager_exponent(&c, 0.5);
        assert!(r.exponent > 0.0);
        let grid = (0..=10_000)
            .map(|i| {
                let rho = i as f64 / 10_000.0;
                gallager_e0(&c, rho) - rho * 0.5
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(r.exponent >= grid - 1e-8);
    }

    #[test]
    fn alpha_of_binomial_is_one() {
        let s = WeightSpectrum::binomial(31, 16).unwrap();
        let c = make_bsc_bec(0.01, 0.1).unwrap();
        let sf = shulman_feder(&c, &s).unwrap();
        assert!((sf.diagnostic("alpha").unwrap() - 1.0).abs() < 1e-12);
        let rc = random_coding_bound(&c, &s).unwrap();
        assert!((sf.p_upper - rc.p_upper).abs() <= 1e-9 * rc.p_upper);
    }
}
