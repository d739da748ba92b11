//! Type vectors, their enumeration, and log-domain counting.

use std::fmt;
use std::ops::Index;

use num_bigint::BigUint;
use num_traits::One;

use crate::channels::BmsChannel;

/// Non-normalized type: symbol occurrence counts, indexed by alphabet index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeVector {
    counts: Vec<u32>,
    total: u32,
}

impl TypeVector {
    pub fn new(counts: Vec<u32>) -> Self {
        let total = counts.iter().sum();
        TypeVector { counts, total }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Componentwise `self - other`, or `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &TypeVector) -> Option<TypeVector> {
        if self.len() != other.len() {
            return None;
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(TypeVector::new(counts))
    }
}

impl Index<usize> for TypeVector {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.counts[i]
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Colexicographic iterator over compositions of `total` with per-part caps.
///
/// Vectors are compared from the last coordinate backwards; the first item
/// puts as much mass as possible into the leading coordinates. Memory is
/// `O(parts)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    caps: Vec<u32>,
    current: Vec<u32>,
    total: u32,
    started: bool,
    done: bool,
}

impl Compositions {
    /// All compositions of `total` into `parts` non-negative parts.
    pub fn new(total: u32, parts: usize) -> Self {
        Self::bounded(total, vec![total; parts])
    }

    /// Compositions of `total` with `0 <= part_i <= caps[i]`.
    pub fn bounded(total: u32, caps: Vec<u32>) -> Self {
        let capacity: u64 = caps.iter().map(|&c| c as u64).sum();
        let done = capacity < total as u64 || (caps.is_empty() && total > 0);
        Compositions {
            current: vec![0; caps.len()],
            caps,
            total,
            started: false,
            done,
        }
    }

    /// Greedy colex-smallest fill of coordinates `0..upto` with `mass`.
    fn fill_prefix(&mut self, upto: usize, mut mass: u32) {
        for i in 0..upto {
            let take = mass.min(self.caps[i]);
            self.current[i] = take;
            mass -= take;
        }
        debug_assert_eq!(mass, 0);
    }

    fn advance(&mut self) -> bool {
        let parts = self.caps.len();
        let mut prefix_cap: u32 = 0;
        let mut suffix: u32 = self.current.iter().sum();
        for i in 0..parts {
            suffix -= self.current[i];
            if i > 0 {
                let remaining = self.total - suffix;
                let lower = remaining.saturating_sub(prefix_cap);
                let cand = (self.current[i] + 1).max(lower);
                if cand <= self.caps[i].min(remaining) {
                    self.current[i] = cand;
                    self.fill_prefix(i, remaining - cand);
                    return true;
                }
            }
            prefix_cap = prefix_cap.saturating_add(self.caps[i]);
        }
        false
    }
}

impl Iterator for Compositions {
    type Item = TypeVector;

    fn next(&mut self) -> Option<TypeVector> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            let parts = self.caps.len();
            self.fill_prefix(parts, self.total);
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(TypeVector::new(self.current.clone()))
    }
}

/// Every non-normalized type of length `n` over `alphabet_size` symbols.
pub fn enumerate_types(n: u32, alphabet_size: usize) -> Compositions {
    Compositions::new(n, alphabet_size)
}

/// Conditional types: every `mu` with `sum(mu) = w` and `mu <= ell`.
pub fn enumerate_subtypes(w: u32, ell: &TypeVector) -> Compositions {
    Compositions::bounded(w, ell.counts().to_vec())
}

/// Natural-log magnitude of a non-negative quantity; `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    /// From a natural log. Panics on NaN.
    pub fn from_ln(ln: f64) -> Self {
        assert!(!ln.is_nan(), "NaN log value");
        LogValue(ln)
    }

    /// From a linear non-negative value.
    pub fn from_value(v: f64) -> Self {
        assert!(v >= 0.0, "negative value {v}");
        LogValue(v.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn exp(self) -> f64 {
        self.0.exp()
    }

    pub fn log10(self) -> f64 {
        self.0 / std::f64::consts::LN_10
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl std::ops::Mul for LogValue {
    type Output = LogValue;

    /// Product in the linear domain.
    fn mul(self, other: LogValue) -> LogValue {
        if self.is_zero() || other.is_zero() {
            LogValue::ZERO
        } else {
            LogValue(self.0 + other.0)
        }
    }
}

impl std::ops::Add for LogValue {
    type Output = LogValue;

    /// Sum in the linear domain.
    fn add(self, other: LogValue) -> LogValue {
        let mut acc = LogSum::new();
        acc.push(self.0);
        acc.push(other.0);
        acc.value()
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", self.0)
    }
}

/// Log-sum-exp accumulator: max-shifted, Neumaier-compensated linear sum.
///
/// The result depends only on the order of pushes, so a fixed reduction order
/// gives bit-identical results.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    shift: f64,
    sum: f64,
    comp: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum {
            shift: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    fn add_linear(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Adds `exp(ln_term)`.
    #[inline]
    pub fn push(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        debug_assert!(!ln_term.is_nan());
        if ln_term > self.shift {
            if self.shift != f64::NEG_INFINITY {
                let r = (self.shift - ln_term).exp();
                self.sum *= r;
                self.comp *= r;
            }
            self.shift = ln_term;
            self.add_linear(1.0);
        } else {
            self.add_linear((ln_term - self.shift).exp());
        }
    }

    /// Merges another accumulator as if its terms were pushed here.
    pub fn merge(&mut self, other: &LogSum) {
        if other.shift == f64::NEG_INFINITY {
            return;
        }
        if other.shift > self.shift {
            if self.shift != f64::NEG_INFINITY {
                let r = (self.shift - other.shift).exp();
                self.sum *= r;
                self.comp *= r;
            }
            self.shift = other.shift;
            self.add_linear(other.sum);
            self.add_linear(other.comp);
        } else {
            let r = (other.shift - self.shift).exp();
            self.add_linear(other.sum * r);
            self.add_linear(other.comp * r);
        }
    }

    pub fn ln(&self) -> f64 {
        if self.shift == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.shift + (self.sum + self.comp).ln()
        }
    }

    pub fn value(&self) -> LogValue {
        LogValue(self.ln())
    }
}

/// `ln(sum_i exp(v_i))` in stream order; the empty sum is `-inf`.
pub fn log_sum_exp<I: IntoIterator<Item = LogValue>>(values: I) -> LogValue {
    let mut acc = LogSum::new();
    for v in values {
        acc.push(v.ln());
    }
    acc.value()
}

/// Table of `ln(k!)` for `k = 0..=n`.
#[derive(Debug, Clone)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn new(n: u32) -> Self {
        let mut table = Vec::with_capacity(n as usize + 1);
        table.push(0.0);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for k in 1..=n {
            let x = (k as f64).ln();
            let t = sum + x;
            if sum.abs() >= x.abs() {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
            table.push(sum + comp);
        }
        LnFactorials { table }
    }

    pub fn max_n(&self) -> u32 {
        (self.table.len() - 1) as u32
    }

    #[inline]
    pub fn ln_factorial(&self, k: u32) -> f64 {
        self.table[k as usize]
    }

    /// `ln C(n, k)`, `-inf` when `k > n`.
    #[inline]
    pub fn ln_binomial(&self, n: u32, k: u32) -> f64 {
        if k > n {
            f64::NEG_INFINITY
        } else {
            self.table[n as usize] - self.table[k as usize] - self.table[(n - k) as usize]
        }
    }

    /// `ln(total! / prod_j counts_j!)`.
    pub fn ln_multinomial(&self, counts: &[u32]) -> f64 {
        let total: u32 = counts.iter().sum();
        let mut v = self.ln_factorial(total);
        for &c in counts {
            v -= self.ln_factorial(c);
        }
        v
    }

    pub fn log_multinomial(&self, counts: &TypeVector) -> LogValue {
        LogValue(self.ln_multinomial(counts.counts()))
    }
}

/// `ln` of the multinomial coefficient of `counts`, using a fresh table.
pub fn log_multinomial(counts: &TypeVector) -> LogValue {
    LnFactorials::new(counts.total()).log_multinomial(counts)
}

/// Exact `C(n, k)`; zero when `k > n`.
pub fn exact_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `sum_j ell_j * ln P(j|0)`, with `0^0 = 1`.
pub fn log_type_probability(channel: &BmsChannel, ell: &TypeVector) -> LogValue {
    LogValue(ln_type_probability(channel.ln_p0(), ell.counts()))
}

#[inline]
pub(crate) fn ln_type_probability(ln_p0: &[f64], counts: &[u32]) -> f64 {
    let mut v = 0.0;
    for (&c, &lp) in counts.iter().zip(ln_p0) {
        if c > 0 {
            if lp == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            v += c as f64 * lp;
        }
    }
    v
}

/// Natural log of a big integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(x).unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    num_traits::ToPrimitive::to_f64(&top).unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}
