//! Run settings shared by `bound` and `sweep`: flags, an optional JSON file,
//! and their resolution into library inputs.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use typebound::spectrum::{brute_force_spectrum, load_spectrum_with, GeneratorMatrix};
use typebound::{BmsChannel, Codebook, WeightSpectrum};

use crate::CliError;

/// Every semantic setting. Each field is optional so that a config file and
/// command-line flags can be layered; flags win.
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    /// Channel family: bsc, bec, bsc-bec, quinary or p0.
    #[arg(long)]
    pub channel: Option<String>,
    /// Crossover (BSC part) or weak-error probability.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Erasure probability.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Weak-correct probability (quinary).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Raw input-0 probability row over outputs -M..=M, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub p0: Option<Vec<f64>>,

    /// Spectrum CSV with header `w,count`.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Block length, overriding the sidecar.
    #[arg(long)]
    pub n: Option<u32>,
    /// Code dimension, overriding the sidecar.
    #[arg(long)]
    pub k: Option<u32>,
    /// Binomial spectrum `N,K`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub binomial: Option<Vec<u32>>,
    /// Generator matrix file, brute-forced into a spectrum.
    #[arg(long)]
    pub generator: Option<PathBuf>,
    /// Built-in code: hamming, bch15, rep:N or spc:N.
    #[arg(long)]
    pub code: Option<String>,

    /// Bounds to evaluate, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub bounds: Option<Vec<String>>,
    /// Rectangle caps for symbols -M+1..=M, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub rect: Option<Vec<u32>>,
    /// Standard deviations for the automatic rectangle (default 8).
    #[arg(long)]
    pub rect_sigma: Option<f64>,
    /// Enables pruning of types far below this error rate.
    #[arg(long)]
    pub target_fer: Option<f64>,
    /// Pruning margin in nats below ln(target-fer) (default 30).
    #[arg(long)]
    pub prune_margin: Option<f64>,

    /// Swept parameter: eps, delta or gamma.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub points: Option<u32>,
    /// lin or log; log by default when 0 < start and stop <= 0.1.
    #[arg(long)]
    pub spacing: Option<String>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        Config { $($f: $top.$f.or($base.$f)),* }
    };
}

impl Config {
    pub fn load(path: &PathBuf) -> Result<Config, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: Config) -> Config {
        overlay!(
            self,
            top,
            channel,
            eps,
            delta,
            gamma,
            p0,
            spectrum,
            n,
            k,
            binomial,
            generator,
            code,
            bounds,
            rect,
            rect_sigma,
            target_fer,
            prune_margin,
            sweep,
            start,
            stop,
            points,
            spacing
        )
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            write!(hex, "{b:02x}").expect("write to string");
        }
        hex
    }

    pub fn bound_names(&self) -> Result<Vec<String>, CliError> {
        let names = self
            .bounds
            .clone()
            .unwrap_or_else(|| vec!["extended".into()]);
        for name in &names {
            if !crate::commands::BOUND_NAMES.contains(&name.as_str()) {
                return Err(CliError::input(format!(
                    "unknown bound `{name}`; expected one of {}",
                    crate::commands::BOUND_NAMES.join(", ")
                )));
            }
        }
        Ok(names)
    }
}

/// Channel parameters for one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub family: String,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub p0: Option<Vec<f64>>,
}

impl ChannelSpec {
    pub fn from_config(cfg: &Config) -> Result<ChannelSpec, CliError> {
        let Some(family) = cfg.channel.clone() else {
            return Err(CliError::input("--channel is required"));
        };
        let spec = ChannelSpec {
            family,
            eps: cfg.eps,
            delta: cfg.delta,
            gamma: cfg.gamma,
            p0: cfg.p0.clone(),
        };
        spec.build()?;
        Ok(spec)
    }

    fn need(&self, v: Option<f64>, flag: &str) -> Result<f64, CliError> {
        v.ok_or_else(|| CliError::input(format!("channel {} needs --{flag}", self.family)))
    }

    pub fn build(&self) -> Result<BmsChannel, CliError> {
        let ch = match self.family.as_str() {
            "bsc" => BmsChannel::bsc(self.need(self.eps, "eps")?),
            "bec" => BmsChannel::bec(self.need(self.delta, "delta")?),
            "bsc-bec" => {
                BmsChannel::bsc_bec(self.need(self.eps, "eps")?, self.need(self.delta, "delta")?)
            }
            "quinary" => BmsChannel::quinary(
                self.need(self.eps, "eps")?,
                self.need(self.delta, "delta")?,
                self.need(self.gamma, "gamma")?,
            ),
            "p0" => match &self.p0 {
                Some(row) => BmsChannel::from_p0(row.clone()),
                None => return Err(CliError::input("channel p0 needs --p0")),
            },
            other => {
                return Err(CliError::input(format!(
                    "unknown channel `{other}`; expected bsc, bec, bsc-bec, quinary or p0"
                )))
            }
        };
        ch.map_err(CliError::from)
    }

    /// The channel column: the family, or the raw row for `p0`.
    pub fn label(&self) -> String {
        match &self.p0 {
            Some(row) if self.family == "p0" => {
                let parts: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                format!("p0({})", parts.join(";"))
            }
            _ => self.family.clone(),
        }
    }

    /// Sets the swept parameter.
    pub fn with(&self, param: &str, value: f64) -> Result<ChannelSpec, CliError> {
        let mut out = self.clone();
        let slot = match (param, self.family.as_str()) {
            ("eps", "bsc" | "bsc-bec" | "quinary") => &mut out.eps,
            ("delta", "bec" | "bsc-bec" | "quinary") => &mut out.delta,
            ("gamma", "quinary") => &mut out.gamma,
            _ => {
                return Err(CliError::input(format!(
                    "cannot sweep `{param}` for channel {}",
                    self.family
                )))
            }
        };
        *slot = Some(value);
        Ok(out)
    }
}

pub fn builtin_code(name: &str) -> Result<GeneratorMatrix, CliError> {
    let sized = |prefix: &str| -> Option<Result<usize, CliError>> {
        name.strip_prefix(prefix).map(|s| {
            s.parse::<usize>()
                .ok()
                .filter(|&n| n >= 2)
                .ok_or_else(|| CliError::input(format!("bad length in code `{name}`")))
        })
    };
    if let Some(n) = sized("rep:") {
        return Ok(GeneratorMatrix::repetition(n?));
    }
    if let Some(n) = sized("spc:") {
        return Ok(GeneratorMatrix::single_parity_check(n?));
    }
    match name {
        "hamming" => Ok(GeneratorMatrix::hamming_7_4()),
        "bch15" => Ok(GeneratorMatrix::cyclic(15, &[1, 0, 0, 0, 1, 0, 1, 1, 1])?),
        _ => Err(CliError::input(format!(
            "unknown code `{name}`; expected hamming, bch15, rep:N or spc:N"
        ))),
    }
}

/// A generator from `--generator` or `--code`.
pub fn generator(
    generator: Option<&PathBuf>,
    code: Option<&str>,
) -> Result<Option<GeneratorMatrix>, CliError> {
    match (generator, code) {
        (Some(_), Some(_)) => Err(CliError::input("give only one of --generator and --code")),
        (Some(path), None) => Ok(Some(GeneratorMatrix::load(path)?)),
        (None, Some(name)) => Ok(Some(builtin_code(name)?)),
        (None, None) => Ok(None),
    }
}

/// Resolves the spectrum source, brute-forcing a generator when one is given.
pub fn spectrum(cfg: &Config) -> Result<(WeightSpectrum, Option<Codebook>), CliError> {
    let gen = generator(cfg.generator.as_ref(), cfg.code.as_deref())?;
    let sources = [
        cfg.spectrum.is_some(),
        cfg.binomial.is_some(),
        gen.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(CliError::input(
            "give exactly one spectrum source: --spectrum, --binomial, --generator or --code",
        ));
    }
    if let Some(path) = &cfg.spectrum {
        return Ok((load_spectrum_with(path, cfg.n, cfg.k)?, None));
    }
    if let Some(nk) = &cfg.binomial {
        let [n, k] = nk[..] else {
            return Err(CliError::input("--binomial takes N,K"));
        };
        return Ok((WeightSpectrum::binomial(n, k)?, None));
    }
    let (s, cb) = brute_force_spectrum(gen.as_ref().expect("checked above"))?;
    Ok((s, Some(cb)))
}
