//! The four subcommands. Each returns its CSV text and exit status; the
//! caller decides where the text goes.

use std::fmt::Write as _;

use rayon::prelude::*;
use typebound::bounds::{DEFAULT_PRUNE_MARGIN, DEFAULT_RECT_SIGMA};
use typebound::oracle::exact_ml_error_given;
use typebound::{
    bec_bound, bsc_bec_bound, choose_rect, extended_bound, poltyrev_bsc, quinary_bound,
    random_coding_bound, rect_bound, rect_bound_chernoff, shulman_feder, simulate_fer, BmsChannel,
    BoundResult, ChannelFamily, Error, Pruning, RectLimits, WeightSpectrum,
};

use crate::config::{self, ChannelSpec, Config};
use crate::{CliError, SpectrumArgs, VerifyArgs, EXIT_FAILURE, EXIT_OK};

pub const BOUND_NAMES: &[&str] = &[
    "extended", "poltyrev", "bec", "bsc-bec", "quinary", "rect", "chernoff", "sf", "gallager",
];

/// Tolerance on `bound - truth` before an exact-oracle point fails.
pub const MARGIN_TOLERANCE: f64 = 1e-12;

/// Standard errors a simulated FER may exceed the bound by.
pub const SIM_SIGMAS: f64 = 4.0;

const BOUND_HEADER: &str = "bound_name,channel,eps,delta,gamma,n,k,value,log10_value,union_mass,noise_mass,types_visited,wall_ms,rect_m,status";
const SWEEP_HEADER: &str = "point,bound_name,channel,eps,delta,gamma,n,k,value,log10_value,union_mass,noise_mass,types_visited,rect_m,status";
const VERIFY_HEADER: &str =
    "bound_name,channel,eps,delta,gamma,n,k,bound,exact,sim_fer,sim_stderr,margin,status";

pub struct Output {
    pub text: String,
    pub status: i32,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn sci(v: f64) -> String {
    format!("{v:e}")
}

/// Settings for evaluating a bound at one channel point.
struct Evaluator<'a> {
    spectrum: &'a WeightSpectrum,
    pruning: Pruning,
    rect: Option<RectLimits>,
    rect_sigma: f64,
}

impl<'a> Evaluator<'a> {
    fn new(cfg: &Config, spectrum: &'a WeightSpectrum) -> Result<Self, CliError> {
        let margin = cfg.prune_margin.unwrap_or(DEFAULT_PRUNE_MARGIN);
        let pruning = match cfg.target_fer {
            Some(t) if t > 0.0 && t <= 1.0 => Pruning::for_target(t, margin),
            Some(t) => return Err(CliError::input(format!("--target-fer {t} outside (0, 1]"))),
            None => Pruning::Off,
        };
        Ok(Evaluator {
            spectrum,
            pruning,
            rect: cfg.rect.clone().map(RectLimits::new),
            rect_sigma: cfg.rect_sigma.unwrap_or(DEFAULT_RECT_SIGMA),
        })
    }

    fn limits(&self, ch: &BmsChannel) -> typebound::Result<RectLimits> {
        match &self.rect {
            Some(r) => Ok(r.clone()),
            None => choose_rect(ch, self.spectrum.n(), self.rect_sigma),
        }
    }

    /// The bound and, for rectangle bounds, the caps used.
    fn eval(
        &self,
        name: &str,
        ch: &BmsChannel,
    ) -> typebound::Result<(BoundResult, Option<RectLimits>)> {
        let s = self.spectrum;
        let family = ch.family();
        let mismatch =
            || Error::Parameter(format!("bound {name} does not apply to channel {family:?}"));
        let r = match name {
            "extended" => extended_bound(ch, s, self.pruning)?,
            "poltyrev" => match family {
                ChannelFamily::Bsc { epsilon } => poltyrev_bsc(s, epsilon)?,
                _ => return Err(mismatch()),
            },
            "bec" => match family {
                ChannelFamily::Bec { delta } => bec_bound(s, delta)?,
                _ => return Err(mismatch()),
            },
            "bsc-bec" => match family {
                ChannelFamily::BscBec { epsilon, delta } => bsc_bec_bound(s, epsilon, delta)?,
                ChannelFamily::Bsc { epsilon } => bsc_bec_bound(s, epsilon, 0.0)?,
                ChannelFamily::Bec { delta } => bsc_bec_bound(s, 0.0, delta)?,
                _ => return Err(mismatch()),
            },
            "quinary" => match family {
                ChannelFamily::Quinary {
                    epsilon,
                    delta,
                    gamma,
                } => quinary_bound(s, epsilon, delta, gamma, self.pruning)?,
                _ => return Err(mismatch()),
            },
            "rect" | "chernoff" => {
                let limits = self.limits(ch)?;
                let r = if name == "rect" {
                    rect_bound(ch, s, &limits)?
                } else {
                    rect_bound_chernoff(ch, s, &limits)?
                };
                return Ok((r, Some(limits)));
            }
            "sf" => shulman_feder(ch, s)?,
            "gallager" => random_coding_bound(ch, s)?,
            other => return Err(Error::Parameter(format!("unknown bound `{other}`"))),
        };
        Ok((r, None))
    }
}

/// Columns `value..types_visited`, the optional `wall_ms`, then `rect_m,status`.
fn result_columns(
    out: &mut String,
    res: &typebound::Result<(BoundResult, Option<RectLimits>)>,
    wall: bool,
    errors: &mut Vec<String>,
    context: &str,
) -> bool {
    match res {
        Ok((r, limits)) => {
            let log10 = if r.p_upper > 0.0 {
                r.p_upper.log10()
            } else {
                f64::NEG_INFINITY
            };
            write!(
                out,
                "{},{},{},{},{}",
                sci(r.p_upper),
                log10,
                sci(r.union_mass.exp()),
                sci(r.noise_mass.exp()),
                r.types_visited
            )
            .unwrap();
            if wall {
                write!(out, ",{:.3}", r.wall_time.as_secs_f64() * 1e3).unwrap();
            }
            let rect = limits.as_ref().map(|l| l.to_string()).unwrap_or_default();
            writeln!(out, ",{rect},ok").unwrap();
            true
        }
        Err(e) => {
            out.push_str(",,,,");
            if wall {
                out.push(',');
            }
            out.push_str(",,error\n");
            errors.push(format!("{context}: {e}"));
            false
        }
    }
}

fn channel_columns(spec: &ChannelSpec, s: &WeightSpectrum) -> String {
    format!(
        "{},{},{},{},{},{}",
        spec.label(),
        opt(spec.eps),
        opt(spec.delta),
        opt(spec.gamma),
        s.n(),
        s.k().map(|k| k.to_string()).unwrap_or_default()
    )
}

fn trailer(out: &mut String, cfg: &Config) {
    writeln!(
        out,
        "# typebound {} config_sha256={}",
        env!("CARGO_PKG_VERSION"),
        cfg.hash()
    )
    .unwrap();
}

pub fn bound(cfg: &Config, messages: &mut Vec<String>) -> Result<Output, CliError> {
    let spec = ChannelSpec::from_config(cfg)?;
    let channel = spec.build()?;
    let names = cfg.bound_names()?;
    let (spectrum, _) = config::spectrum(cfg)?;
    let eval = Evaluator::new(cfg, &spectrum)?;
    let mut text = format!("{BOUND_HEADER}\n");
    let mut status = EXIT_OK;
    let cols = channel_columns(&spec, &spectrum);
    for name in &names {
        let res = eval.eval(name, &channel);
        write!(text, "{name},{cols},").unwrap();
        if !result_columns(&mut text, &res, true, messages, name) {
            status = EXIT_FAILURE;
        }
    }
    trailer(&mut text, cfg);
    Ok(Output { text, status })
}

/// Sweep grid from the config; log spacing by default when
/// `0 < start` and `stop <= 0.1`.
pub fn sweep_points(cfg: &Config) -> Result<Vec<f64>, CliError> {
    let (Some(start), Some(stop)) = (cfg.start, cfg.stop) else {
        return Err(CliError::input("sweep needs --start and --stop"));
    };
    let points = cfg.points.unwrap_or(10);
    if points == 0 {
        return Err(CliError::input("--points must be at least 1"));
    }
    if start.partial_cmp(&stop) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::input(format!(
            "sweep needs start < stop, got {start} and {stop}"
        )));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let spacing = match cfg.spacing.as_deref() {
        Some(s) => s.to_string(),
        None if start > 0.0 && stop <= 0.1 => "log".into(),
        None => "lin".into(),
    };
    let last = (points - 1) as f64;
    match spacing.as_str() {
        "lin" => Ok((0..points)
            .map(|i| start + (stop - start) * i as f64 / last)
            .collect()),
        "log" if start > 0.0 => {
            let (a, b) = (start.ln(), stop.ln());
            Ok((0..points)
                .map(|i| match i {
                    0 => start,
                    i if i == points - 1 => stop,
                    i => (a + (b - a) * i as f64 / last).exp(),
                })
                .collect())
        }
        "log" => Err(CliError::input("log spacing needs start > 0")),
        other => Err(CliError::input(format!(
            "unknown spacing `{other}`; expected lin or log"
        ))),
    }
}

pub fn sweep(cfg: &Config, messages: &mut Vec<String>) -> Result<Output, CliError> {
    let Some(param) = cfg.sweep.clone() else {
        return Err(CliError::input("sweep needs --sweep eps|delta|gamma"));
    };
    let base = ChannelSpec {
        family: cfg
            .channel
            .clone()
            .ok_or_else(|| CliError::input("--channel is required"))?,
        eps: cfg.eps,
        delta: cfg.delta,
        gamma: cfg.gamma,
        p0: cfg.p0.clone(),
    };
    let grid = sweep_points(cfg)?;
    let specs: Vec<ChannelSpec> = grid
        .iter()
        .map(|&v| base.with(&param, v))
        .collect::<Result<_, _>>()?;
    let names = cfg.bound_names()?;
    let (spectrum, _) = config::spectrum(cfg)?;
    let eval = Evaluator::new(cfg, &spectrum)?;

    // Points run concurrently; rows are assembled in point order.
    let rows: Vec<(String, Vec<String>)> = specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let mut text = String::new();
            let mut errs = Vec::new();
            let cols = channel_columns(spec, &spectrum);
            let channel = spec.build();
            for name in &names {
                write!(text, "{i},{name},{cols},").unwrap();
                let res = match &channel {
                    Ok(ch) => eval.eval(name, ch),
                    Err(e) => Err(Error::Parameter(e.message.clone())),
                };
                result_columns(
                    &mut text,
                    &res,
                    false,
                    &mut errs,
                    &format!("point {i} {name}"),
                );
            }
            (text, errs)
        })
        .collect();
    let mut text = format!("{SWEEP_HEADER}\n");
    let mut status = EXIT_OK;
    for (rows, errs) in rows {
        text.push_str(&rows);
        if !errs.is_empty() {
            status = EXIT_FAILURE;
        }
        messages.extend(errs);
    }
    trailer(&mut text, cfg);
    Ok(Output { text, status })
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Output, CliError> {
    let Some(gen) = config::generator(args.generator.as_ref(), args.code.as_deref())? else {
        return Err(CliError::input("spectrum needs --generator or --code"));
    };
    let (s, _) = typebound::spectrum::brute_force_spectrum_with_budget(&gen, args.max_k)?;
    s.save(&args.output)?;
    let rows = s.support().count() + 1;
    let text = format!(
        "wrote {} (n={}, k={}, d_min={}, {} rows)\n",
        args.output.display(),
        s.n(),
        s.k().unwrap_or(0),
        s.d_min()
            .map(|d| d.to_string())
            .unwrap_or_else(|| "none".into()),
        rows
    );
    Ok(Output {
        text,
        status: EXIT_OK,
    })
}

fn grid(values: &[f64]) -> Vec<Option<f64>> {
    if values.is_empty() {
        vec![None]
    } else {
        values.iter().copied().map(Some).collect()
    }
}

pub fn verify(args: &VerifyArgs, messages: &mut Vec<String>) -> Result<Output, CliError> {
    let Some(gen) = config::generator(args.generator.as_ref(), args.code.as_deref())? else {
        return Err(CliError::input("verify needs --generator or --code"));
    };
    let (brute, codebook) = typebound::spectrum::brute_force_spectrum(&gen)?;
    // A separate spectrum file lets a (possibly wrong) spectrum be checked
    // against the true code.
    let spectrum = match &args.spectrum {
        Some(path) => typebound::spectrum::load_spectrum_with(path, Some(brute.n()), None)?,
        None => brute,
    };
    if spectrum.n() as usize != codebook.n() {
        return Err(CliError::input(format!(
            "spectrum length {} differs from code length {}",
            spectrum.n(),
            codebook.n()
        )));
    }
    let (exact_on, sim_on) = match args.oracle.as_str() {
        "exact" => (true, false),
        "sim" => (false, true),
        "both" => (true, true),
        other => {
            return Err(CliError::input(format!(
                "unknown oracle `{other}`; expected exact, sim or both"
            )))
        }
    };
    let names = Config {
        bounds: args.bounds.clone(),
        ..Config::default()
    }
    .bound_names()?;
    let cfg = Config {
        rect_sigma: args.rect_sigma,
        ..Config::default()
    };
    let eval = Evaluator::new(&cfg, &spectrum)?;

    let mut points = Vec::new();
    for &eps in &grid(&args.eps) {
        for &delta in &grid(&args.delta) {
            for &gamma in &grid(&args.gamma) {
                points.push(ChannelSpec {
                    family: args.channel.clone(),
                    eps,
                    delta,
                    gamma,
                    p0: args.p0.clone(),
                });
            }
        }
    }

    let mut text = format!("{VERIFY_HEADER}\n");
    let mut status = EXIT_OK;
    for spec in &points {
        let ch = spec.build()?;
        let exact = if exact_on {
            Some(exact_ml_error_given(&ch, &codebook, 0, args.budget).map_err(CliError::from)?)
        } else {
            None
        };
        let sim = sim_on.then(|| simulate_fer(&ch, &codebook, args.trials, args.seed));
        let cols = channel_columns(spec, &spectrum);
        for name in &names {
            write!(text, "{name},{cols},").unwrap();
            match eval.eval(name, &ch) {
                Ok((r, _)) => {
                    let (truth, slack) = match (exact, sim) {
                        (Some(e), _) => (e, MARGIN_TOLERANCE),
                        (None, Some(s)) => (s.fer, SIM_SIGMAS * s.stderr + MARGIN_TOLERANCE),
                        (None, None) => unreachable!("an oracle is always selected"),
                    };
                    let margin = r.p_upper - truth;
                    let verdict = if margin < -slack {
                        status = status.max(EXIT_FAILURE);
                        messages.push(format!(
                            "{name} at {} eps={} delta={} gamma={}: bound {:e} below oracle {:e}",
                            spec.label(),
                            opt(spec.eps),
                            opt(spec.delta),
                            opt(spec.gamma),
                            r.p_upper,
                            truth
                        ));
                        "violation"
                    } else {
                        "ok"
                    };
                    writeln!(
                        text,
                        "{},{},{},{},{},{verdict}",
                        sci(r.p_upper),
                        exact.map(sci).unwrap_or_default(),
                        sim.map(|s| sci(s.fer)).unwrap_or_default(),
                        sim.map(|s| sci(s.stderr)).unwrap_or_default(),
                        sci(margin)
                    )
                    .unwrap();
                }
                Err(e) => {
                    status = status.max(EXIT_FAILURE);
                    messages.push(format!("{name}: {e}"));
                    text.push_str(",,,,,error\n");
                }
            }
        }
    }
    Ok(Output { text, status })
}
