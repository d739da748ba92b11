//! Ground-truth ML decoding for small codes: exhaustive output enumeration
//! and Monte-Carlo simulation.
//!
//! Ties between the transmitted word and a competitor count as errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::BmsChannel;
use crate::error::{param, Error, Result};
use crate::spectrum::Codebook;

/// Default cap on the number of output vectors `(2M+1)^n` enumerated.
pub const DEFAULT_OUTPUT_BUDGET: u64 = 10_000_000;

/// Trials per independently seeded simulation block.
pub const SIM_BLOCK: u64 = 4096;

/// Relative tolerance for likelihood ties in the oracle.
const ORACLE_TIE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub errors: u64,
    pub fer: f64,
    /// Binomial standard error of `fer`.
    pub stderr: f64,
    pub seed: u64,
}

/// Outcome of ML decoding one received vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decoded {
    /// Lowest-index codeword attaining the maximum likelihood.
    pub index: usize,
    /// Some other codeword attains the same likelihood.
    pub tie: bool,
}

/// Exact ML error probability with the all-zero word sent.
pub fn exact_ml_error(channel: &BmsChannel, codebook: &Codebook) -> Result<f64> {
    exact_ml_error_given(channel, codebook, 0, DEFAULT_OUTPUT_BUDGET)
}

/// Exact ML error probability with codeword `sent` transmitted, enumerating
/// every output vector of positive probability.
pub fn exact_ml_error_given(
    channel: &BmsChannel,
    codebook: &Codebook,
    sent: usize,
    budget: u64,
) -> Result<f64> {
    let n = codebook.n();
    let q = channel.alphabet_size() as u128;
    let required = q.checked_pow(n as u32);
    if required.is_none_or(|r| r > budget as u128) {
        return Err(Error::Budget {
            required: format!("{q}^{n} output vectors"),
            budget: budget.to_string(),
        });
    }
    if sent >= codebook.len() {
        return param(format!("codeword index {sent} out of range"));
    }
    let m = channel.half_width() as i32;
    let symbols: Vec<i32> = (-m..=m).collect();
    let sent_bits = codebook.bits(sent);
    // Per position, the symbols the sent bit can produce.
    let choices: Vec<Vec<i32>> = sent_bits
        .iter()
        .map(|&b| {
            symbols
                .iter()
                .copied()
                .filter(|&y| channel.prob(y, b) > 0.0)
                .collect()
        })
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(0.0);
    }
    let words: Vec<Vec<u8>> = (0..codebook.len()).map(|i| codebook.bits(i)).collect();
    let ln_prob = |y: i32, b: u8| channel.prob(y, b).ln();

    let mut digits = vec![0usize; n];
    let mut y = vec![0i32; n];
    let mut total = 0.0;
    'outer: loop {
        for i in 0..n {
            y[i] = choices[i][digits[i]];
        }
        let ll_sent: f64 = (0..n).map(|i| ln_prob(y[i], sent_bits[i])).sum();
        let error = words.iter().enumerate().any(|(c, word)| {
            if c == sent {
                return false;
            }
            let mut ratio = 0.0;
            let mut scale = 0.0;
            for i in 0..n {
                if word[i] != sent_bits[i] {
                    let t = ln_prob(y[i], word[i]) - ln_prob(y[i], sent_bits[i]);
                    if t == f64::NEG_INFINITY {
                        return false;
                    }
                    ratio += t;
                    scale += t.abs();
                }
            }
            ratio >= -ORACLE_TIE_RTOL * scale
        });
        if error {
            total += ll_sent.exp();
        }
        for i in 0..n {
            digits[i] += 1;
            if digits[i] < choices[i].len() {
                continue 'outer;
            }
            digits[i] = 0;
        }
        break;
    }
    Ok(total)
}

/// Maximum-likelihood decoding of `received` (symbols in `-M..=M`).
pub fn ml_decode(channel: &BmsChannel, received: &[i32], codebook: &Codebook) -> Decoded {
    assert_eq!(
        received.len(),
        codebook.n(),
        "received length differs from code length"
    );
    let ln0: Vec<f64> = received.iter().map(|&y| channel.prob(y, 0).ln()).collect();
    let ln1: Vec<f64> = received.iter().map(|&y| channel.prob(y, 1).ln()).collect();
    let scale: f64 = ln0
        .iter()
        .chain(&ln1)
        .filter(|v| v.is_finite())
        .map(|v| v.abs())
        .sum::<f64>()
        .max(1.0);
    let tol = ORACLE_TIE_RTOL * scale;
    let mut best = Decoded {
        index: 0,
        tie: false,
    };
    let mut best_ll = f64::NAN;
    for c in 0..codebook.len() {
        let ll: f64 = (0..codebook.n())
            .map(|i| {
                if codebook.bit(c, i) == 0 {
                    ln0[i]
                } else {
                    ln1[i]
                }
            })
            .sum();
        if best_ll.is_nan() {
            best_ll = ll;
            continue;
        }
        if ll == best_ll || (ll - best_ll).abs() <= tol {
            best.tie = true;
        } else if ll > best_ll {
            best = Decoded {
                index: c,
                tie: false,
            };
            best_ll = ll;
        }
    }
    best
}

/// Monte-Carlo FER with the all-zero word sent and pessimistic ties.
///
/// Trials run in blocks of [`SIM_BLOCK`]; block `b` draws from the ChaCha8
/// stream `b` of `seed`, so the result depends only on `(trials, seed)`.
pub fn simulate_fer(
    channel: &BmsChannel,
    codebook: &Codebook,
    trials: u64,
    seed: u64,
) -> SimResult {
    assert!(trials >= 1, "at least one trial");
    let n = codebook.n();
    let p0 = channel.p0();
    let m = channel.half_width() as i32;
    let mut cdf = Vec::with_capacity(p0.len());
    let mut acc = 0.0;
    for &p in p0 {
        acc += p;
        cdf.push(acc);
    }
    let last_positive = p0.iter().rposition(|&p| p > 0.0).expect("nonempty row");
    let blocks = trials.div_ceil(SIM_BLOCK);
    let errors: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = SIM_BLOCK.min(trials - b * SIM_BLOCK);
            let mut y = vec![0i32; n];
            let mut errs = 0;
            for _ in 0..count {
                for yi in y.iter_mut() {
                    let u: f64 = rng.random();
                    let idx = cdf.iter().position(|&c| u < c).unwrap_or(last_positive);
                    let idx = if p0[idx] > 0.0 { idx } else { last_positive };
                    *yi = idx as i32 - m;
                }
                let d = ml_decode(channel, &y, codebook);
                if d.index != 0 || d.tie {
                    errs += 1;
                }
            }
            errs
        })
        .sum();
    let fer = errors as f64 / trials as f64;
    SimResult {
        trials,
        errors,
        fer,
        stderr: (fer * (1.0 - fer) / trials as f64).sqrt(),
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{make_bec, make_bsc, make_bsc_bec};
    use crate::spectrum::{brute_force_spectrum, GeneratorMatrix};

    fn code(g: GeneratorMatrix) -> Codebook {
        brute_force_spectrum(&g).unwrap().1
    }

    #[test]
    fn repetition_exact() {
        let cb = code(GeneratorMatrix::repetition(3));
        let e = exact_ml_error(&make_bsc(0.1).unwrap(), &cb).unwrap();
        assert!((e - 0.028).abs() < 1e-15);
        for d in [0.1, 0.5] {
            let e = exact_ml_error(&make_bec(d).unwrap(), &cb).unwrap();
            assert!((e - d * d * d).abs() < 1e-15);
        }
    }

    #[test]
    fn noiseless_is_zero() {
        let cb = code(GeneratorMatrix::hamming_7_4());
        assert_eq!(exact_ml_error(&make_bsc(0.0).unwrap(), &cb).unwrap(), 0.0);
        let sim = simulate_fer(&make_bsc_bec(0.0, 0.0).unwrap(), &cb, 500, 1);
        assert_eq!(sim.errors, 0);
    }

    #[test]
    fn all_erased_always_fails() {
        let cb = code(GeneratorMatrix::hamming_7_4());
        let sim = simulate_fer(&make_bec(1.0).unwrap(), &cb, 300, 9);
        assert_eq!(sim.fer, 1.0);
    }

    #[test]
    fn budget_refusal() {
        let cb = code(GeneratorMatrix::repetition(20));
        let r = exact_ml_error(&make_bsc_bec(0.1, 0.1).unwrap(), &cb);
        assert!(matches!(r, Err(Error::Budget { .. })));
    }

    #[test]
    fn decode_examples() {
        let ch = make_bsc(0.1).unwrap();
        let cb = code(GeneratorMatrix::repetition(3));
        assert_eq!(
            ml_decode(&ch, &[-1, -1, -1], &cb),
            Decoded {
                index: 0,
                tie: false
            }
        );
        assert_eq!(
            ml_decode(&ch, &[1, 1, -1], &cb),
            Decoded {
                index: 1,
                tie: false
            }
        );
        assert_eq!(
            ml_decode(&ch, &[1, 1, 1], &cb),
            Decoded {
                index: 1,
                tie: false
            }
        );
        let bec = make_bec(0.3).unwrap();
        assert_eq!(
            ml_decode(&bec, &[0, 0, 0], &cb),
            Decoded {
                index: 0,
                tie: true
            }
        );
        let h = code(GeneratorMatrix::hamming_7_4());
        for c in 0..h.len() {
            let y: Vec<i32> = h
                .bits(c)
                .iter()
                .map(|&b| if b == 0 { -1 } else { 1 })
                .collect();
            assert_eq!(
                ml_decode(&ch, &y, &h),
                Decoded {
                    index: c,
                    tie: false
                }
            );
        }
    }

    #[test]
    fn simulation_is_reproducible() {
        let cb = code(GeneratorMatrix::hamming_7_4());
        let ch = make_bsc_bec(0.05, 0.05).unwrap();
        let a = simulate_fer(&ch, &cb, 10_000, 42);
        let b = simulate_fer(&ch, &cb, 10_000, 42);
        assert_eq!(a, b);
        let c = simulate_fer(&ch, &cb, 10_000, 43);
        assert_ne!(a.errors, c.errors);
    }
}
