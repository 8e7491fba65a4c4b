//! Run configuration: defaults, JSON config file, command-line overrides.
//! Flags win over the file; the `IONCAV_CUTOFF` environment variable sets
//! the default cutoff when neither provides one.

use num_complex::Complex64 as C64;
use serde::Deserialize;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Protocol {
    Su2Cat,
    EntangledCoherent,
    SqueezedCat,
    PhaseGate,
    ValidateRwa,
}

impl Protocol {
    pub fn label(self) -> &'static str {
        match self {
            Protocol::Su2Cat => "su2-cat",
            Protocol::EntangledCoherent => "entangled-coherent",
            Protocol::SqueezedCat => "squeezed-cat",
            Protocol::PhaseGate => "phase-gate",
            Protocol::ValidateRwa => "validate-rwa",
        }
    }

    fn from_label(s: &str) -> Result<Self, CliError> {
        match s {
            "su2-cat" => Ok(Protocol::Su2Cat),
            "entangled-coherent" => Ok(Protocol::EntangledCoherent),
            "squeezed-cat" => Ok(Protocol::SqueezedCat),
            "phase-gate" => Ok(Protocol::PhaseGate),
            "validate-rwa" => Ok(Protocol::ValidateRwa),
            other => Err(CliError::usage(format!("unknown protocol in config file: {other}"))),
        }
    }

    fn default_cutoff(self) -> usize {
        match self {
            Protocol::Su2Cat => 8,
            Protocol::EntangledCoherent => 25,
            Protocol::SqueezedCat => 40,
            Protocol::PhaseGate => 2,
            Protocol::ValidateRwa => 10,
        }
    }

    fn default_amplitudes(self) -> (C64, C64) {
        match self {
            // modest amplitudes keep the default rwa cutoff honest
            Protocol::ValidateRwa => (C64::new(0.4, 0.0), C64::new(0.0, 0.4)),
            _ => (C64::new(0.8, 0.0), C64::new(0.0, 0.4)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Variant {
    HalfAngle,
    FullSwap,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::HalfAngle => "half-angle",
            Variant::FullSwap => "full-swap",
        }
    }

    fn from_label(s: &str) -> Result<Self, CliError> {
        match s {
            "half-angle" => Ok(Variant::HalfAngle),
            "full-swap" => Ok(Variant::FullSwap),
            other => Err(CliError::usage(format!("unknown variant in config file: {other}"))),
        }
    }

    pub fn to_core(self) -> ioncav_core::EcsVariant {
        match self {
            Variant::HalfAngle => ioncav_core::EcsVariant::HalfAngle,
            Variant::FullSwap => ioncav_core::EcsVariant::FullSwap,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
struct ComplexField {
    re: f64,
    im: f64,
}

impl From<ComplexField> for C64 {
    fn from(c: ComplexField) -> C64 {
        C64::new(c.re, c.im)
    }
}

/// Shape of the JSON config file; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    protocol: Option<String>,
    n: Option<usize>,
    theta: Option<f64>,
    alpha: Option<ComplexField>,
    beta: Option<ComplexField>,
    variant: Option<String>,
    r: Option<f64>,
    ratio: Option<f64>,
    gate_input: Option<[ComplexField; 4]>,
    cutoff: Option<usize>,
    cutoff_a: Option<usize>,
    cutoff_b: Option<usize>,
    tolerance: Option<f64>,
}

/// Fully resolved configuration a run executes against.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub protocol: Protocol,
    pub n: usize,
    pub theta: f64,
    pub alpha: C64,
    pub beta: C64,
    pub variant: Variant,
    pub r: f64,
    pub ratio: f64,
    pub gate_input: [C64; 4],
    pub cutoff_a: usize,
    pub cutoff_b: usize,
    pub tolerance: f64,
    pub check: bool,
    pub sample_seed: Option<u64>,
    pub compare_full: bool,
    pub out: Option<PathBuf>,
}

pub struct RunFlags {
    pub protocol: Option<Protocol>,
    pub config: Option<PathBuf>,
    pub n: Option<usize>,
    pub theta: Option<f64>,
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub beta_re: Option<f64>,
    pub beta_im: Option<f64>,
    pub variant: Option<Variant>,
    pub r: Option<f64>,
    pub ratio: Option<f64>,
    pub input: Option<String>,
    pub cutoff: Option<usize>,
    pub cutoff_a: Option<usize>,
    pub cutoff_b: Option<usize>,
    pub tolerance: Option<f64>,
    pub check: bool,
    pub sample: bool,
    pub seed: u64,
    pub compare_full: bool,
    pub out: Option<PathBuf>,
}

fn read_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("invalid config file {}: {e}", path.display())))
}

fn parse_gate_input(text: &str) -> Result<[C64; 4], CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage(format!("gate input must be 8 comma-separated floats: {e}")))?;
    if parts.len() != 8 {
        return Err(CliError::usage(format!(
            "gate input needs 8 values (re,im per basis state), got {}",
            parts.len()
        )));
    }
    Ok([
        C64::new(parts[0], parts[1]),
        C64::new(parts[2], parts[3]),
        C64::new(parts[4], parts[5]),
        C64::new(parts[6], parts[7]),
    ])
}

fn env_cutoff() -> Result<Option<usize>, CliError> {
    match std::env::var("IONCAV_CUTOFF") {
        Ok(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::usage(format!("IONCAV_CUTOFF must be an integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

impl RunConfig {
    pub fn resolve(flags: RunFlags) -> Result<RunConfig, CliError> {
        let file = match &flags.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };

        let protocol = match (flags.protocol, &file.protocol) {
            (Some(p), _) => p,
            (None, Some(s)) => Protocol::from_label(s)?,
            (None, None) => {
                return Err(CliError::usage(
                    "no protocol selected; pass --protocol or set it in the config file".into(),
                ))
            }
        };

        let n = flags.n.or(file.n).unwrap_or(1);
        let theta = flags.theta.or(file.theta).unwrap_or(std::f64::consts::FRAC_PI_4);
        let (default_alpha, default_beta) = protocol.default_amplitudes();
        let file_alpha: Option<C64> = file.alpha.map(Into::into);
        let file_beta: Option<C64> = file.beta.map(Into::into);
        let alpha = C64::new(
            flags.alpha_re.unwrap_or_else(|| file_alpha.map_or(default_alpha.re, |a| a.re)),
            flags.alpha_im.unwrap_or_else(|| file_alpha.map_or(default_alpha.im, |a| a.im)),
        );
        let beta = C64::new(
            flags.beta_re.unwrap_or_else(|| file_beta.map_or(default_beta.re, |b| b.re)),
            flags.beta_im.unwrap_or_else(|| file_beta.map_or(default_beta.im, |b| b.im)),
        );
        let variant = match (flags.variant, &file.variant) {
            (Some(v), _) => v,
            (None, Some(s)) => Variant::from_label(s)?,
            (None, None) => Variant::HalfAngle,
        };
        let r = flags.r.or(file.r).unwrap_or(0.5);
        let ratio = flags.ratio.or(file.ratio).unwrap_or(30.0);
        let gate_input = match (&flags.input, &file.gate_input) {
            (Some(text), _) => parse_gate_input(text)?,
            (None, Some(fields)) => {
                let mut out = [C64::new(0.0, 0.0); 4];
                for (slot, f) in out.iter_mut().zip(fields.iter()) {
                    *slot = C64::new(f.re, f.im);
                }
                out
            }
            (None, None) => [C64::new(0.5, 0.0); 4],
        };

        let shared_cutoff = match flags.cutoff.or(file.cutoff) {
            Some(c) => Some(c),
            None => env_cutoff()?,
        };
        let fallback = shared_cutoff.unwrap_or_else(|| protocol.default_cutoff());
        let cutoff_a = flags.cutoff_a.or(file.cutoff_a).unwrap_or(fallback);
        let cutoff_b = flags.cutoff_b.or(file.cutoff_b).unwrap_or(fallback);
        let tolerance = flags.tolerance.or(file.tolerance).unwrap_or(ioncav_core::tol::EVOLVE_DEFAULT);
        if !(tolerance > 0.0) {
            return Err(CliError::usage(format!("tolerance must be positive, got {tolerance}")));
        }

        if flags.sample
            && matches!(protocol, Protocol::PhaseGate | Protocol::ValidateRwa)
        {
            return Err(CliError::usage(format!(
                "--sample applies to detection protocols, not {}",
                protocol.label()
            )));
        }
        if flags.compare_full && protocol != Protocol::ValidateRwa {
            return Err(CliError::usage("--compare-full applies to validate-rwa only".into()));
        }

        Ok(RunConfig {
            protocol,
            n,
            theta,
            alpha,
            beta,
            variant,
            r,
            ratio,
            gate_input,
            cutoff_a,
            cutoff_b,
            tolerance,
            check: flags.check,
            sample_seed: flags.sample.then_some(flags.seed),
            compare_full: flags.compare_full,
            out: flags.out,
        })
    }
}
