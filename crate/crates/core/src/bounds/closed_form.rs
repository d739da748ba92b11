//! Explicit sums for channels whose pairwise-error region does not depend on
//! the channel parameters: BSC, BEC and the hybrid BSC-BEC.

use std::time::Instant;

use num_bigint::BigUint;

use super::{ln_pow, require_d_min, BoundResult};
use crate::combinatorics::{exact_binomial, LnFactorials, LogSum, LogValue};
use crate::error::{param, Result};
use crate::spectrum::WeightSpectrum;

/// Poltyrev's bound for BSC(epsilon):
/// `sum_l eps^l (1-eps)^(n-l) min{ sum_w S_w sum_{mu >= ceil(w/2)} C(w,mu) C(n-w,l-mu), C(n,l) }`.
pub fn poltyrev_bsc(spectrum: &WeightSpectrum, epsilon: f64) -> Result<BoundResult> {
    let start = Instant::now();
    require_d_min(spectrum)?;
    if !(0.0..0.5).contains(&epsilon) {
        return param(format!("BSC crossover {epsilon} outside [0, 1/2)"));
    }
    if epsilon == 0.0 {
        return Ok(BoundResult::zero(start.elapsed()));
    }
    let n = spectrum.n();
    let lf = LnFactorials::new(n);
    let (le, l1e) = (epsilon.ln(), (-epsilon).ln_1p());
    let support: Vec<u32> = spectrum.support().collect();
    let mut union = LogSum::new();
    let mut noise = LogSum::new();
    for l in 0..=n {
        let lp = ln_pow(le, l) + ln_pow(l1e, n - l);
        let arm = lf.ln_binomial(n, l);
        let mut inner = LogSum::new();
        let mut decided = false;
        for &w in support.iter().take_while(|&&w| w <= 2 * l) {
            let ls = spectrum.log_s(w).ln();
            for mu in w.div_ceil(2)..=l.min(w) {
                if l - mu > n - w {
                    continue;
                }
                inner.push(ls + lf.ln_binomial(w, mu) + lf.ln_binomial(n - w, l - mu));
            }
            if inner.ln() >= arm {
                decided = true;
                break;
            }
        }
        if decided || inner.ln() >= arm {
            noise.push(lp + arm);
        } else {
            union.push(lp + inner.ln());
        }
    }
    Ok(BoundResult::from_parts(
        union.value(),
        noise.value(),
        LogValue::ZERO,
        n as u64 + 1,
        start.elapsed(),
    ))
}

/// Smallest `l` whose BSC union count reaches `C(n, l)`; `n + 1` if none.
///
/// Exact integer arithmetic is used when the spectrum carries exact counts.
pub fn zeta_star(spectrum: &WeightSpectrum) -> u32 {
    let n = spectrum.n();
    let support: Vec<u32> = spectrum.support().collect();
    if let Some(exact) = spectrum.exact() {
        for l in 0..=n {
            let mut lhs = BigUint::default();
            for &w in support.iter().take_while(|&&w| w <= 2 * l) {
                for mu in w.div_ceil(2)..=l.min(w) {
                    if l - mu <= n - w {
                        lhs += &exact[w as usize]
                            * exact_binomial(w as u64, mu as u64)
                            * exact_binomial((n - w) as u64, (l - mu) as u64);
                    }
                }
            }
            if lhs >= exact_binomial(n as u64, l as u64) {
                return l;
            }
        }
        return n + 1;
    }
    let lf = LnFactorials::new(n);
    for l in 0..=n {
        let mut lhs = LogSum::new();
        for &w in support.iter().take_while(|&&w| w <= 2 * l) {
            for mu in w.div_ceil(2)..=l.min(w) {
                if l - mu <= n - w {
                    lhs.push(
                        spectrum.log_s(w).ln()
                            + lf.ln_binomial(w, mu)
                            + lf.ln_binomial(n - w, l - mu),
                    );
                }
            }
        }
        let rhs = lf.ln_binomial(n, l);
        if lhs.ln() >= rhs - 1e-12 * rhs.abs().max(1.0) {
            return l;
        }
    }
    n + 1
}

/// Bound for BEC(delta):
/// `sum_l delta^l (1-delta)^(n-l) min{ sum_w S_w C(n-w, l-w), C(n,l) }`.
pub fn bec_bound(spectrum: &WeightSpectrum, delta: f64) -> Result<BoundResult> {
    let start = Instant::now();
    require_d_min(spectrum)?;
    if !(0.0..=1.0).contains(&delta) {
        return param(format!("erasure probability {delta} outside [0, 1]"));
    }
    let n = spectrum.n();
    let lf = LnFactorials::new(n);
    let (ld, l1d) = (delta.ln(), (-delta).ln_1p());
    let support: Vec<u32> = spectrum.support().collect();
    let mut union = LogSum::new();
    let mut noise = LogSum::new();
    let mut visited = 0;
    for l in 0..=n {
        let lp = ln_pow(ld, l) + ln_pow(l1d, n - l);
        if lp == f64::NEG_INFINITY {
            continue;
        }
        visited += 1;
        let arm = lf.ln_binomial(n, l);
        let mut inner = LogSum::new();
        for &w in support.iter().take_while(|&&w| w <= l) {
            inner.push(spectrum.log_s(w).ln() + lf.ln_binomial(n - w, l - w));
        }
        if inner.ln() >= arm {
            noise.push(lp + arm);
        } else {
            union.push(lp + inner.ln());
        }
    }
    Ok(BoundResult::from_parts(
        union.value(),
        noise.value(),
        LogValue::ZERO,
        visited,
        start.elapsed(),
    ))
}

/// Bound for the hybrid BSC-BEC(epsilon, delta): a double sum over flips `l`
/// and erasures `u`, with error subtypes `mu >= ceil((w - rho) / 2)` for `rho`
/// erased error positions.
///
/// Requires `epsilon = 0` or `epsilon < 1 - epsilon - delta`, where the
/// error condition takes this form.
pub fn bsc_bec_bound(spectrum: &WeightSpectrum, epsilon: f64, delta: f64) -> Result<BoundResult> {
    let start = Instant::now();
    require_d_min(spectrum)?;
    if !(0.0..=0.5).contains(&epsilon) || !(0.0..=1.0).contains(&delta) || epsilon + delta > 1.0 {
        return param(format!("invalid BSC-BEC parameters ({epsilon}, {delta})"));
    }
    let correct = 1.0 - epsilon - delta;
    if epsilon > 0.0 && epsilon >= correct {
        return param(format!(
            "closed form needs epsilon < 1 - epsilon - delta, got ({epsilon}, {delta})"
        ));
    }
    let n = spectrum.n();
    let lf = LnFactorials::new(n);
    let (le, ld, lc) = (epsilon.ln(), delta.ln(), correct.max(0.0).ln());
    let support: Vec<u32> = spectrum.support().collect();
    let mut union = LogSum::new();
    let mut noise = LogSum::new();
    let mut visited = 0;
    for l in 0..=n {
        for u in 0..=n - l {
            let lp = ln_pow(le, l) + ln_pow(ld, u) + ln_pow(lc, n - l - u);
            if lp == f64::NEG_INFINITY {
                continue;
            }
            visited += 1;
            let arm = lf.ln_factorial(n)
                - lf.ln_factorial(l)
                - lf.ln_factorial(u)
                - lf.ln_factorial(n - l - u);
            let mut inner = LogSum::new();
            let mut decided = false;
            for &w in support.iter().take_while(|&&w| w <= u + 2 * l) {
                let ls = spectrum.log_s(w).ln();
                let head = lf.ln_factorial(w);
                let tail = lf.ln_factorial(n - w);
                for rho in 0..=u.min(w) {
                    for mu in (w - rho).div_ceil(2)..=l.min(w - rho) {
                        let (fl, fu) = (l - mu, u - rho);
                        let Some(rest) = (n - w).checked_sub(fl + fu) else {
                            continue;
                        };
                        inner.push(
                            ls + head
                                - lf.ln_factorial(mu)
                                - lf.ln_factorial(rho)
                                - lf.ln_factorial(w - mu - rho)
                                + tail
                                - lf.ln_factorial(fl)
                                - lf.ln_factorial(fu)
                                - lf.ln_factorial(rest),
                        );
                    }
                }
                if inner.ln() >= arm {
                    decided = true;
                    break;
                }
            }
            if decided || inner.ln() >= arm {
                noise.push(lp + arm);
            } else {
                union.push(lp + inner.ln());
            }
        }
    }
    Ok(BoundResult::from_parts(
        union.value(),
        noise.value(),
        LogValue::ZERO,
        visited,
        start.elapsed(),
    ))
}
