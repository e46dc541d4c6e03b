//! Flag, config-file and default resolution.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use qutrit_core::{ChainParams, CriticalObjective, Eq6Variant, FactorSource, QutritCoupling, SweepOptions, ThreeSiteSign, TimeGrid};

use crate::CliError;

pub const DEFAULT_N: usize = 3001;
pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_ETA: f64 = 1.0;
pub const DEFAULT_G: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Magnitude,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Lambda,
    XiAsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    AsPrinted,
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    TimeAverage,
    LateTime,
}

impl From<SignArg> for ThreeSiteSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::AsPrinted => ThreeSiteSign::AsPrinted,
            SignArg::Flipped => ThreeSiteSign::Flipped,
        }
    }
}

impl From<ObjectiveArg> for CriticalObjective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::TimeAverage => CriticalObjective::TimeAverage,
            ObjectiveArg::LateTime => CriticalObjective::LateTime,
        }
    }
}

/// Parameters shared by every sweeping subcommand.
///
/// Each value is taken from the flag if given, otherwise from `--config`,
/// otherwise from the built-in default.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Chain length (odd, >= 3) [default: 3001]
    #[arg(long)]
    pub n: Option<usize>,
    /// Anisotropy γ [default: 0.5]
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Three-site coupling α [default: 0.5]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Transverse field η [default: 1.0]
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Coupling of both qutrits; overridden by --g-a / --g-b [default: 0.005]
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g_b: Option<f64>,
    /// [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    /// [default: 50]
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    /// Number of time points, endpoints included [default: 501]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Worker threads [default: 1]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Per-mode magnitudes or modulus of the complex product [default: magnitude]
    #[arg(long, value_enum)]
    pub factor_source: Option<SourceArg>,
    /// Complex product form used with --factor-source complex [default: lambda]
    #[arg(long, value_enum)]
    pub eq6_variant: Option<VariantArg>,
    /// `key=value` file mirroring the long flag names
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Resolved parameters for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ChainParams,
    pub coupling: QutritCoupling,
    pub grid: TimeGrid,
    pub options: SweepOptions,
}

/// Parsed `key=value` file. Lookups remove the key so leftovers can be
/// reported as unknown.
#[derive(Debug, Default)]
pub struct ConfigFile {
    path: Option<PathBuf>,
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_owned(), source })?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{}:{}: expected key=value", path.display(), lineno + 1))
            })?;
            entries.insert(k.trim().replace('_', "-"), v.trim().to_owned());
        }
        Ok(Self { path: Some(path.to_owned()), entries })
    }

    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| {
                CliError::Config(format!("{}: cannot parse {key} = {v:?}", self.origin()))
            }),
        }
    }

    fn take_enum<T: ValueEnum>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(v) => T::from_str(&v, true)
                .map(Some)
                .map_err(|_| CliError::Config(format!("{}: invalid {key} = {v:?}", self.origin()))),
        }
    }

    fn origin(&self) -> String {
        self.path.as_ref().map_or_else(|| "config".into(), |p| p.display().to_string())
    }

    pub fn finish(self) -> Result<(), CliError> {
        if let Some(k) = self.entries.keys().next() {
            return Err(CliError::Config(format!("{}: unknown key {k:?}", self.origin())));
        }
        Ok(())
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

impl ModelArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut file = ConfigFile::load(self.config.as_deref())?;
        let config = self.resolve_with(&mut file)?;
        file.finish()?;
        Ok(config)
    }

    /// Resolves against an already opened config file, leaving keys that
    /// belong to the subcommand in place.
    pub fn resolve_with(&self, file: &mut ConfigFile) -> Result<RunConfig, CliError> {
        let n = pick(self.n, file.take("n")?, DEFAULT_N);
        let gamma = pick(self.gamma, file.take("gamma")?, DEFAULT_GAMMA);
        let alpha = pick(self.alpha, file.take("alpha")?, DEFAULT_ALPHA);
        let eta = pick(self.eta, file.take("eta")?, DEFAULT_ETA);
        let g = pick(self.g, file.take("g")?, DEFAULT_G);
        let g_a = pick(self.g_a, file.take("g-a")?, g);
        let g_b = pick(self.g_b, file.take("g-b")?, g);
        let defaults = TimeGrid::default();
        let t_start = pick(self.t_start, file.take("t-start")?, defaults.t_start());
        let t_end = pick(self.t_end, file.take("t-end")?, defaults.t_end());
        let steps = pick(self.steps, file.take("steps")?, defaults.steps());
        let workers = pick(self.workers, file.take("workers")?, 1);
        let source = pick(self.factor_source, file.take_enum("factor-source")?, SourceArg::Magnitude);
        let variant = pick(self.eq6_variant, file.take_enum("eq6-variant")?, VariantArg::Lambda);

        if workers == 0 {
            return Err(CliError::Config("workers must be >= 1".into()));
        }
        let variant = match variant {
            VariantArg::Lambda => Eq6Variant::Lambda,
            VariantArg::XiAsPrinted => Eq6Variant::XiAsPrinted,
        };
        let source = match source {
            SourceArg::Magnitude => FactorSource::Magnitude,
            SourceArg::Complex => FactorSource::Complex(variant),
        };
        Ok(RunConfig {
            params: ChainParams::new(n, gamma, alpha, eta)?,
            coupling: QutritCoupling::new(g_a, g_b)?,
            grid: TimeGrid::new(t_start, t_end, steps)?,
            options: SweepOptions { workers, source },
        })
    }
}

/// Takes a subcommand-specific value with the same precedence rules.
pub fn resolve_extra<T: FromStr>(flag: Option<T>, file: &mut ConfigFile, key: &str, default: T) -> Result<T, CliError> {
    Ok(pick(flag, file.take(key)?, default))
}

pub fn resolve_extra_enum<T: ValueEnum>(flag: Option<T>, file: &mut ConfigFile, key: &str, default: T) -> Result<T, CliError> {
    Ok(pick(flag, file.take_enum(key)?, default))
}
