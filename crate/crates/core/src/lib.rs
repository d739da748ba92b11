//! Method-of-types upper bounds on the ML decoding error probability of
//! binary linear codes over binary-input memoryless symmetric channels.
//!
//! The central entry point is [`extended_bound`], which evaluates a min-form
//! bound over all output types of a channel with outputs `-M..=M`, given the
//! code's weight spectrum. Closed forms for the BSC, BEC and BSC-BEC hybrid,
//! rectangular reduced-complexity variants, Gallager and Shulman-Feder
//! baselines, and exhaustive or simulated ML oracles are provided alongside.

pub mod baselines;
pub mod bounds;
pub mod channels;
pub mod combinatorics;
pub mod error;
pub mod oracle;
pub mod spectrum;

pub use baselines::{
    gallager_e0, gallager_exponent, random_coding_bound, shulman_feder, ExponentResult,
};
pub use bounds::{
    bec_bound, bsc_bec_bound, choose_rect, extended_bound, poltyrev_bsc, quinary_bound, rect_bound,
    rect_bound_chernoff, zeta_star, BoundResult, Pruning, RectLimits,
};
pub use channels::{
    make_bec, make_bsc, make_bsc_bec, make_quinary, BmsChannel, ChannelFamily, ExtendedReal,
};
pub use combinatorics::{LogValue, TypeVector};
pub use error::{Error, Result};
pub use oracle::{exact_ml_error, ml_decode, simulate_fer, SimResult};
pub use spectrum::{
    brute_force_spectrum, load_spectrum, Codebook, GeneratorMatrix, WeightSpectrum,
};
