#![allow(dead_code)]

use typebound::combinatorics::{
    enumerate_subtypes, enumerate_types, log_multinomial, log_type_probability,
};
use typebound::{brute_force_spectrum, BmsChannel, Codebook, GeneratorMatrix, WeightSpectrum};

pub fn code(g: GeneratorMatrix) -> (WeightSpectrum, Codebook) {
    brute_force_spectrum(&g).expect("small code")
}

pub fn rep(n: usize) -> (WeightSpectrum, Codebook) {
    code(GeneratorMatrix::repetition(n))
}

pub fn spc(n: usize) -> (WeightSpectrum, Codebook) {
    code(GeneratorMatrix::single_parity_check(n))
}

pub fn hamming() -> (WeightSpectrum, Codebook) {
    code(GeneratorMatrix::hamming_7_4())
}

pub fn bch_15_7() -> (WeightSpectrum, Codebook) {
    code(GeneratorMatrix::cyclic(15, &[1, 0, 0, 0, 1, 0, 1, 1, 1]).unwrap())
}

pub fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    a == b || (a - b).abs() <= rtol * a.abs().max(b.abs())
}

/// The min-form bound by direct enumeration of types and error subtypes.
pub fn literal_bound(channel: &BmsChannel, spectrum: &WeightSpectrum) -> f64 {
    let n = spectrum.n();
    let q = channel.alphabet_size();
    let mut total = 0.0;
    for ell in enumerate_types(n, q) {
        let p = log_type_probability(channel, &ell).exp();
        if p == 0.0 {
            continue;
        }
        let size = log_multinomial(&ell).exp();
        let mut union = 0.0;
        for w in spectrum.support() {
            let s = spectrum.log_s(w).exp();
            for mu in enumerate_subtypes(w, &ell) {
                if channel.is_error_type(mu.counts()) {
                    let rest = ell.checked_sub(&mu).unwrap();
                    union += s * (log_multinomial(&mu).exp() * log_multinomial(&rest).exp());
                }
            }
        }
        total += p * union.min(size);
    }
    total
}

fn fact(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Quinary bound by explicit sums, valid for `gamma > epsilon`.
///
/// Output counts: `a` strong-correct (-2), `b` weak-correct (-1), `c`
/// erasures (0), `d` weak errors (+1). A weight-`w` competitor placing `mu`
/// positions on weak errors, `rho` on erasures and `w - mu - rho` on
/// weak-correct outputs is at least as likely iff `2 mu + rho >= w`.
pub fn quinary_closed_form(spectrum: &WeightSpectrum, epsilon: f64, delta: f64, gamma: f64) -> f64 {
    assert!(gamma > epsilon);
    let n = spectrum.n();
    let strong = 1.0 - epsilon - delta - gamma;
    let mut total = 0.0;
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                let d = n - a - b - c;
                let p = strong.powi(a as i32)
                    * gamma.powi(b as i32)
                    * delta.powi(c as i32)
                    * epsilon.powi(d as i32);
                if p == 0.0 {
                    continue;
                }
                let size = fact(n) / (fact(a) * fact(b) * fact(c) * fact(d));
                let mut union = 0.0;
                for w in spectrum.support() {
                    let s = spectrum.log_s(w).exp();
                    for mu in 0..=d.min(w) {
                        for rho in 0..=c.min(w - mu) {
                            let nu = w - mu - rho;
                            if nu > b || 2 * mu + rho < w {
                                continue;
                            }
                            union += s * fact(w) / (fact(mu) * fact(rho) * fact(nu)) * fact(n - w)
                                / (fact(a) * fact(b - nu) * fact(c - rho) * fact(d - mu));
                        }
                    }
                }
                total += p * union.min(size);
            }
        }
    }
    total
}
