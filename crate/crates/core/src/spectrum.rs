//! Weight spectra, codebooks and generator matrices over GF(2).

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{ln_biguint, LnFactorials, LogValue};
use crate::error::{param, Error, Result};

/// Hamming weight distribution `S_w`, `w = 0..=n`, held as `ln S_w`.
///
/// Ensemble spectra may be fractional; exact integer counts are kept
/// alongside when known.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpectrum {
    n: u32,
    log_s: Vec<LogValue>,
    exact: Option<Vec<BigUint>>,
    k: Option<u32>,
    d_min: Option<u32>,
}

/// Sidecar metadata written next to a spectrum CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_min: Option<u32>,
}

fn first_support(log_s: &[LogValue]) -> Option<u32> {
    log_s
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, v)| !v.is_zero())
        .map(|(w, _)| w as u32)
}

impl WeightSpectrum {
    /// From exact counts `S_0..=S_n`. Requires `S_0 = 1`; when `k` is given
    /// the counts must sum to `2^k`. Without `k`, a power-of-two total fixes it.
    pub fn from_exact(counts: Vec<BigUint>, k: Option<u32>) -> Result<Self> {
        if counts.is_empty() {
            return param("empty spectrum");
        }
        if !counts[0].is_one() {
            return param(format!("S_0 must be 1, got {}", counts[0]));
        }
        let n = (counts.len() - 1) as u32;
        let total: BigUint = counts.iter().sum();
        let k = match k {
            Some(k) => {
                if total != BigUint::one() << k {
                    return param(format!("spectrum sums to {total}, not 2^{k}"));
                }
                Some(k)
            }
            None => {
                let bits = total.bits();
                (total == BigUint::one() << (bits - 1)).then(|| (bits - 1) as u32)
            }
        };
        if let Some(k) = k {
            if k > n {
                return param(format!("dimension {k} exceeds length {n}"));
            }
        }
        let log_s: Vec<LogValue> = counts
            .iter()
            .map(|c| LogValue::from_ln(ln_biguint(c)))
            .collect();
        Ok(WeightSpectrum {
            n,
            d_min: first_support(&log_s),
            log_s,
            exact: Some(counts),
            k,
        })
    }

    /// From `ln S_w`. `ln S_0` must be 0.
    pub fn from_log(log_s: Vec<LogValue>, k: Option<u32>) -> Result<Self> {
        if log_s.is_empty() || log_s[0].ln() != 0.0 {
            return param("S_0 must be 1");
        }
        let n = (log_s.len() - 1) as u32;
        if matches!(k, Some(k) if k > n) {
            return param("dimension exceeds length");
        }
        Ok(WeightSpectrum {
            n,
            d_min: first_support(&log_s),
            log_s,
            exact: None,
            k,
        })
    }

    /// Average spectrum of random linear `[n, k]` codes:
    /// `S_w = (2^k - 1) C(n, w) / (2^n - 1)` for `w >= 1`.
    pub fn binomial(n: u32, k: u32) -> Result<Self> {
        if k == 0 || k > n {
            return param(format!(
                "binomial spectrum needs 0 < k <= n, got k={k}, n={n}"
            ));
        }
        let lf = LnFactorials::new(n);
        let ln_ratio = ln_pow2_minus_one(k) - ln_pow2_minus_one(n);
        let mut log_s = vec![LogValue::ONE];
        for w in 1..=n {
            log_s.push(LogValue::from_ln(ln_ratio + lf.ln_binomial(n, w)));
        }
        Self::from_log(log_s, Some(k))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> Option<u32> {
        self.k
    }

    /// Rate `k / n` when the dimension is known.
    pub fn rate(&self) -> Option<f64> {
        self.k.map(|k| k as f64 / self.n as f64)
    }

    /// Smallest `w >= 1` with `S_w > 0`; `None` for the zero-rate code.
    pub fn d_min(&self) -> Option<u32> {
        self.d_min
    }

    pub fn log_s(&self, w: u32) -> LogValue {
        self.log_s[w as usize]
    }

    pub fn log_counts(&self) -> &[LogValue] {
        &self.log_s
    }

    pub fn exact(&self) -> Option<&[BigUint]> {
        self.exact.as_deref()
    }

    /// Weights `w >= 1` with `S_w > 0`, ascending.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.log_s
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, v)| !v.is_zero())
            .map(|(w, _)| w as u32)
    }

    pub fn with_k(mut self, k: u32) -> Result<Self> {
        if k > self.n {
            return param("dimension exceeds length");
        }
        self.k = Some(k);
        Ok(self)
    }

    pub fn meta(&self) -> SpectrumMeta {
        SpectrumMeta {
            n: self.n,
            k: self.k,
            d_min: self.d_min,
        }
    }

    /// Writes the `w,count` CSV (nonzero rows only) and its JSON sidecar.
    pub fn save(&self, path: &Path) -> Result<()> {
        let exact = self.exact.as_ref().ok_or_else(|| {
            Error::Parameter("only spectra with exact integer counts can be saved".into())
        })?;
        let mut out = String::from("w,count\n");
        for (w, c) in exact.iter().enumerate() {
            if !c.is_zero() {
                out.push_str(&format!("{w},{c}\n"));
            }
        }
        write_file(path, out.as_bytes())?;
        let side = sidecar_path(path);
        let json = serde_json::to_string_pretty(&self.meta()).expect("metadata serializes");
        write_file(&side, format!("{json}\n").as_bytes())
    }
}

fn ln_pow2_minus_one(k: u32) -> f64 {
    // ln(2^k - 1) = k ln 2 + ln(1 - 2^-k)
    k as f64 * std::f64::consts::LN_2 + (-(-(k as f64) * std::f64::consts::LN_2).exp()).ln_1p()
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `ham74.csv` -> `ham74.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Loads a spectrum CSV, taking `n` and `k` from the JSON sidecar when present.
pub fn load_spectrum(path: &Path) -> Result<WeightSpectrum> {
    load_spectrum_with(path, None, None)
}

/// Loads a spectrum CSV; explicit `n` / `k` override the sidecar.
///
/// Without any declared length, `n` is the largest listed weight.
pub fn load_spectrum_with(path: &Path, n: Option<u32>, k: Option<u32>) -> Result<WeightSpectrum> {
    let load_err = |line: u64, message: String| Error::Load {
        path: path.to_path_buf(),
        line,
        message,
    };
    let side = sidecar_path(path);
    let meta: Option<SpectrumMeta> = if side.exists() && side != path {
        let text = fs::read_to_string(&side).map_err(|source| Error::Io {
            path: side.clone(),
            source,
        })?;
        Some(serde_json::from_str(&text).map_err(|e| Error::Load {
            path: side.clone(),
            line: e.line() as u64,
            message: e.to_string(),
        })?)
    } else {
        None
    };
    let declared_n = n.or(meta.as_ref().map(|m| m.n));
    let k = k.or(meta.as_ref().and_then(|m| m.k));

    let file = fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| load_err(1, e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "w" || &headers[1] != "count" {
        return Err(load_err(1, "header must be `w,count`".into()));
    }
    let mut rows: Vec<(u32, BigUint)> = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            load_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            return Err(load_err(
                line,
                format!("expected 2 fields, got {}", record.len()),
            ));
        }
        let w: u32 = record[0]
            .parse()
            .map_err(|_| load_err(line, format!("bad weight `{}`", &record[0])))?;
        let c: BigUint = record[1]
            .parse()
            .map_err(|_| load_err(line, format!("bad count `{}`", &record[1])))?;
        if !seen.insert(w) {
            return Err(load_err(line, format!("duplicate weight {w}")));
        }
        if let Some(n) = declared_n {
            if w > n {
                return Err(load_err(
                    line,
                    format!("weight {w} exceeds block length {n}"),
                ));
            }
        }
        if w == 0 && !c.is_one() {
            return Err(load_err(line, format!("S_0 must be 1, got {c}")));
        }
        rows.push((w, c));
    }
    if !seen.contains(&0) {
        return Err(load_err(1, "missing row for w = 0".into()));
    }
    let n = match declared_n {
        Some(n) => n,
        None => {
            let max_w = rows.iter().map(|r| r.0).max().unwrap_or(0);
            if max_w == 0 {
                return Err(load_err(
                    1,
                    "block length undeclared for a zero-rate spectrum".into(),
                ));
            }
            max_w
        }
    };
    let mut counts = vec![BigUint::zero(); n as usize + 1];
    for (w, c) in rows {
        counts[w as usize] = c;
    }
    let spectrum = WeightSpectrum::from_exact(counts, k).map_err(|e| load_err(0, e.to_string()))?;
    if let Some(meta_d) = meta.as_ref().and_then(|m| m.d_min) {
        if spectrum.d_min() != Some(meta_d) {
            eprintln!(
                "warning: {}: declared d_min {meta_d} disagrees with spectrum ({:?}); using the spectrum",
                path.display(),
                spectrum.d_min()
            );
        }
    }
    Ok(spectrum)
}

/// Explicit list of codewords, bit-packed. Word 0 is the all-zero word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Codebook {
    /// Builds a codebook from 0/1 vectors and checks that it is linear:
    /// distinct words, containing zero, numbering `2^rank`.
    pub fn from_words(n: usize, words: &[Vec<u8>]) -> Result<Self> {
        let stride = n.div_ceil(64).max(1);
        let mut data = Vec::with_capacity(words.len() * stride);
        let mut packed: Vec<Vec<u64>> = Vec::with_capacity(words.len());
        for w in words {
            if w.len() != n {
                return param(format!(
                    "codeword of length {} in a length-{n} code",
                    w.len()
                ));
            }
            packed.push(pack(w, stride)?);
        }
        let zero = vec![0u64; stride];
        let zero_pos = packed
            .iter()
            .position(|w| *w == zero)
            .ok_or_else(|| Error::Parameter("codebook lacks the all-zero word".into()))?;
        packed.swap(0, zero_pos);
        let distinct: HashSet<&Vec<u64>> = packed.iter().collect();
        if distinct.len() != packed.len() {
            return param("codebook contains repeated words");
        }
        let rank = gf2_rank(packed.clone(), n);
        if packed.len() != 1usize << rank {
            return param(format!(
                "{} words do not form a linear code (span has 2^{rank})",
                packed.len()
            ));
        }
        for w in &packed {
            data.extend_from_slice(w);
        }
        Ok(Codebook { n, stride, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.stride
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `log2` of the number of words.
    pub fn dimension(&self) -> u32 {
        self.len().trailing_zeros()
    }

    pub fn word(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn bit(&self, i: usize, pos: usize) -> u8 {
        ((self.word(i)[pos / 64] >> (pos % 64)) & 1) as u8
    }

    pub fn bits(&self, i: usize) -> Vec<u8> {
        (0..self.n).map(|p| self.bit(i, p)).collect()
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.word(i).iter().map(|x| x.count_ones()).sum()
    }

    /// Same words in a different order (word 0 stays first).
    pub fn permuted(&self, order: &[usize]) -> Result<Codebook> {
        let words: Vec<Vec<u8>> = order.iter().map(|&i| self.bits(i)).collect();
        Codebook::from_words(self.n, &words)
    }
}

fn pack(bits: &[u8], stride: usize) -> Result<Vec<u64>> {
    let mut out = vec![0u64; stride];
    for (i, &b) in bits.iter().enumerate() {
        match b {
            0 => {}
            1 => out[i / 64] |= 1 << (i % 64),
            _ => return param(format!("non-binary entry {b}")),
        }
    }
    Ok(out)
}

fn gf2_rank(mut rows: Vec<Vec<u64>>, n: usize) -> usize {
    let mut rank = 0;
    for col in 0..n {
        let (word, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][word] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[word] & bit != 0 {
                row.iter_mut().zip(&p).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A `k x n` binary generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl GeneratorMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let Some(n) = rows.first().map(Vec::len) else {
            return param("generator matrix has no rows");
        };
        if n == 0 {
            return param("generator rows are empty");
        }
        if rows.iter().any(|r| r.len() != n) {
            return param("generator rows differ in length");
        }
        if rows.iter().flatten().any(|&b| b > 1) {
            return param("generator entries must be 0 or 1");
        }
        Ok(GeneratorMatrix { n, rows })
    }

    /// Parses rows of 0/1 digits, one row per line. Whitespace and commas
    /// between digits are ignored, as are blank lines and `#` comments.
    pub fn parse(text: &str) -> std::result::Result<Self, (u64, String)> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            let mut row = Vec::new();
            for ch in line.chars() {
                match ch {
                    '0' => row.push(0),
                    '1' => row.push(1),
                    c if c.is_whitespace() || c == ',' => {}
                    c => return Err((i as u64 + 1, format!("unexpected character `{c}`"))),
                }
            }
            if !row.is_empty() {
                if let Some(first) = rows.first().map(Vec::len) {
                    if row.len() != first {
                        return Err((
                            i as u64 + 1,
                            format!("row has {} entries, expected {first}", row.len()),
                        ));
                    }
                }
                rows.push(row);
            }
        }
        GeneratorMatrix::new(rows).map_err(|e| (0, e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|(line, message)| Error::Load {
            path: path.to_path_buf(),
            line,
            message,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// `[n, 1]` repetition code.
    pub fn repetition(n: usize) -> Self {
        GeneratorMatrix::new(vec![vec![1; n]]).expect("valid")
    }

    /// `[n, n-1]` single-parity-check code.
    pub fn single_parity_check(n: usize) -> Self {
        let rows = (0..n - 1)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r[n - 1] = 1;
                r
            })
            .collect();
        GeneratorMatrix::new(rows).expect("valid")
    }

    /// Systematic `[7, 4]` Hamming code.
    pub fn hamming_7_4() -> Self {
        GeneratorMatrix::new(vec![
            vec![1, 0, 0, 0, 1, 1, 0],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ])
        .expect("valid")
    }

    /// Cyclic code of length `n` from generator polynomial coefficients
    /// `g[0] + g[1] x + ...`; rows are the shifts `x^i g(x)`.
    pub fn cyclic(n: usize, g: &[u8]) -> Result<Self> {
        let deg = g
            .len()
            .checked_sub(1)
            .filter(|&d| d < n && g[d] == 1 && g[0] == 1);
        let Some(deg) = deg else {
            return param(
                "generator polynomial must be monic with unit constant term and degree < n",
            );
        };
        let rows = (0..n - deg)
            .map(|shift| {
                let mut r = vec![0; n];
                r[shift..shift + g.len()].copy_from_slice(g);
                r
            })
            .collect();
        GeneratorMatrix::new(rows)
    }
}

/// Default limit on `k` for exhaustive codeword enumeration.
pub const DEFAULT_MAX_DIMENSION: usize = 24;

/// Enumerates all `2^k` codewords; returns the exact spectrum and codebook.
pub fn brute_force_spectrum(generator: &GeneratorMatrix) -> Result<(WeightSpectrum, Codebook)> {
    brute_force_spectrum_with_budget(generator, DEFAULT_MAX_DIMENSION)
}

pub fn brute_force_spectrum_with_budget(
    generator: &GeneratorMatrix,
    max_dimension: usize,
) -> Result<(WeightSpectrum, Codebook)> {
    let (n, k) = (generator.n(), generator.k());
    if k > max_dimension {
        return Err(Error::Budget {
            required: format!("2^{k} codewords"),
            budget: format!("2^{max_dimension}"),
        });
    }
    let stride = n.div_ceil(64).max(1);
    let rows: Vec<Vec<u64>> = generator
        .rows()
        .iter()
        .map(|r| pack(r, stride))
        .collect::<Result<_>>()?;
    let rank = gf2_rank(rows.clone(), n);
    if rank < k {
        return Err(Error::Rank { rank, rows: k });
    }
    let size = 1usize << k;
    let mut data = vec![0u64; size * stride];
    let mut hist = vec![0u64; n + 1];
    hist[0] = 1;
    for i in 1..size {
        // word(i) = word(i without its lowest set bit) + row(lowest set bit)
        let prev = i & (i - 1);
        let row = &rows[i.trailing_zeros() as usize];
        let mut weight = 0;
        for s in 0..stride {
            let v = data[prev * stride + s] ^ row[s];
            data[i * stride + s] = v;
            weight += v.count_ones();
        }
        hist[weight as usize] += 1;
    }
    let counts = hist.into_iter().map(BigUint::from).collect();
    let spectrum = WeightSpectrum::from_exact(counts, Some(k as u32))?;
    Ok((spectrum, Codebook { n, stride, data }))
}
