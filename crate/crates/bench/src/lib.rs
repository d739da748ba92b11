//! Shared inputs for the criterion benchmarks.

use typebound::{brute_force_spectrum, BmsChannel, GeneratorMatrix, WeightSpectrum};

/// BCH(15,7) generated by `1 + x^4 + x^6 + x^7 + x^8`.
pub fn bch_15_7() -> WeightSpectrum {
    let g = GeneratorMatrix::cyclic(15, &[1, 0, 0, 0, 1, 0, 1, 1, 1]).expect("valid generator");
    brute_force_spectrum(&g).expect("small code").0
}

pub fn hamming_7_4() -> WeightSpectrum {
    brute_force_spectrum(&GeneratorMatrix::hamming_7_4())
        .expect("small code")
        .0
}

pub fn hybrid(epsilon: f64, delta: f64) -> BmsChannel {
    BmsChannel::bsc_bec(epsilon, delta).expect("valid parameters")
}
