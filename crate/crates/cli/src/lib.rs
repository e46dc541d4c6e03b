//! Command-line front end for the `qutrit-core` sweeps.
//!
//! Exit codes: 0 success, 1 I/O or numerical failure, 2 invalid parameters,
//! 3 `validate` threshold exceeded, 64 usage error.

pub mod config;
pub mod figures;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use qutrit_core::oracle_ed::{max_magnitude_deviation, MAX_SITES, MIN_SITES};
use qutrit_core::{
    alpha_time_grid, determine_three_site_sign, eta_family, find_critical_alpha, lambda_table, time_series, AlphaRange,
    ChainParams, CriticalSearch, EchoSetup, InitialSector, QutritCoupling, ThreeSiteSign, DEFAULT_ETAS,
};
use serde::Serialize;

use config::{resolve_extra, resolve_extra_enum, ConfigFile, ModelArgs, ObjectiveArg, SignArg};
use figures::{FigureKind, FIGURES, GRID_ETA};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] qutrit_core::Error),
    #[error("{0}")]
    Config(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(qutrit_core::Error::NotHermitian { .. } | qutrit_core::Error::NoConvergence { .. }) => EXIT_IO,
            CliError::Domain(_) | CliError::Config(_) => EXIT_DOMAIN,
            CliError::Read { .. } | CliError::Write { .. } => EXIT_IO,
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }
}

const EXIT_CODES_HELP: &str = "Exit codes: 0 success, 1 I/O or numerical failure, 2 invalid parameters, \
3 validation threshold exceeded, 64 usage error.";

#[derive(Debug, Parser)]
#[command(name = "qutrit", version, about = "Negativity of two qutrits dephasing under an XY chain with three-site coupling")]
#[command(after_help = EXIT_CODES_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Negativity and |F15|, |F19|, |F59| over the time grid
    Timeseries {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// One time series per field value η, in a single long-format CSV
    EtaFamily {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated field values [default: 0,0.5,0.9,1,1.2]
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        etas: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Negativity over (α, t)
    Grid {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        range: AlphaRangeArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// α maximising the negativity objective
    CriticalAlpha {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        range: AlphaRangeArgs,
        /// Golden-section iteration cap [default: 60]
        #[arg(long)]
        refine_iters: Option<usize>,
        /// [default: time-average]
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        /// Also write the coarse objective curve as `alpha,objective`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the product formula against exact diagonalisation of short rings
    Validate(ValidateArgs),
    /// Write fig1.csv .. fig9.csv with the caption parameters
    #[command(after_help = figures::table())]
    Figures {
        #[command(flatten)]
        model: ModelArgs,
        /// Points on the α axis of the grid figures [default: 61]
        #[arg(long)]
        alpha_steps: Option<usize>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct AlphaRangeArgs {
    /// [default: -1]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_min: Option<f64>,
    /// [default: 0.5]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_max: Option<f64>,
    /// Points on the α axis, endpoints included [default: 61]
    #[arg(long)]
    pub alpha_steps: Option<usize>,
}

impl AlphaRangeArgs {
    fn resolve(&self, file: &mut ConfigFile) -> Result<AlphaRange, CliError> {
        let d = AlphaRange::default();
        Ok(AlphaRange::new(
            resolve_extra(self.alpha_min, file, "alpha-min", d.min)?,
            resolve_extra(self.alpha_max, file, "alpha-max", d.max)?,
            resolve_extra(self.alpha_steps, file, "alpha-steps", d.steps)?,
        )?)
    }
}

/// The gate compares the lowest odd-parity eigenstate (periodic fermions,
/// the momenta of the product formula) at α = 0 and fails above
/// `--tolerance`. Ground-state deviations and the three-site sign test are
/// reported without gating.
#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Odd ring lengths between 3 and 12
    #[arg(long, value_delimiter = ',', default_values_t = [7usize, 9, 11])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub eta: f64,
    /// Coupling of both qutrits; the echo uses the (λ1, λ5) pair
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub g: f64,
    #[arg(long, default_value_t = 5.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 51)]
    pub steps: usize,
    /// α of the reported ground-state comparison
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Sign of the three-site term in the exact Hamiltonian
    #[arg(long, value_enum, default_value_t = SignArg::AsPrinted)]
    pub sign: SignArg,
    /// |α| used by the sign test
    #[arg(long, default_value_t = 0.5)]
    pub sign_alpha: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    err.chain()
        .find_map(|cause| {
            cause
                .downcast_ref::<CliError>()
                .map(CliError::exit_code)
                .or_else(|| cause.downcast_ref::<qutrit_core::Error>().map(|e| CliError::Domain(e.clone()).exit_code()))
        })
        .unwrap_or(EXIT_IO)
}

pub fn execute(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Timeseries { model, out } => {
            let cfg = model.resolve()?;
            let r = time_series(&cfg.params, cfg.coupling, &cfg.grid, &cfg.options).map_err(CliError::from)?;
            output::write_timeseries_csv(&r, out)?;
            println!("wrote {} ({} rows)", out.display(), r.negativity.len());
        }
        Command::EtaFamily { model, etas, out } => {
            let mut file = ConfigFile::load(model.config.as_deref())?;
            let cfg = model.resolve_with(&mut file)?;
            file.finish()?;
            let etas = etas.clone().unwrap_or_else(|| DEFAULT_ETAS.to_vec());
            let rs = eta_family(&cfg.params, cfg.coupling, &cfg.grid, &etas, &cfg.options).map_err(CliError::from)?;
            write_eta_family(&rs, out, None)?;
            println!("wrote {} ({} series)", out.display(), rs.len());
        }
        Command::Grid { model, range, out } => {
            let mut file = ConfigFile::load(model.config.as_deref())?;
            let cfg = model.resolve_with(&mut file)?;
            let range = range.resolve(&mut file)?;
            file.finish()?;
            let r = alpha_time_grid(&cfg.params, cfg.coupling, &cfg.grid, &range, &cfg.options).map_err(CliError::from)?;
            output::write_grid_csv(&r, out)?;
            println!("wrote {} ({} rows)", out.display(), r.negativity.len());
        }
        Command::CriticalAlpha { model, range, refine_iters, objective, out } => {
            let mut file = ConfigFile::load(model.config.as_deref())?;
            let cfg = model.resolve_with(&mut file)?;
            let d = CriticalSearch::default();
            let search = CriticalSearch {
                range: range.resolve(&mut file)?,
                refine_iters: resolve_extra(*refine_iters, &mut file, "refine-iters", d.refine_iters)?,
                resolution: d.resolution,
                objective: resolve_extra_enum(*objective, &mut file, "objective", ObjectiveArg::TimeAverage)?.into(),
            };
            file.finish()?;
            let found = find_critical_alpha(&cfg.params, cfg.coupling, &cfg.grid, &search, &cfg.options)
                .map_err(CliError::from)?;
            println!("alpha* = {}  objective = {}", output::fmt_f64(found.alpha), output::fmt_f64(found.objective));
            if let Some(out) = out {
                #[derive(Serialize)]
                struct Meta<'a> {
                    params: ChainParams,
                    coupling: QutritCoupling,
                    grid: qutrit_core::TimeGrid,
                    search: &'a CriticalSearch,
                    alpha_star: f64,
                    objective: f64,
                    refine_iterations: usize,
                }
                let meta = Meta {
                    params: cfg.params,
                    coupling: cfg.coupling,
                    grid: cfg.grid,
                    search: &search,
                    alpha_star: found.alpha,
                    objective: found.objective,
                    refine_iterations: found.refine_iterations,
                };
                let csv = output::curve_csv("alpha,objective", &found.coarse);
                output::write_with_metadata(out, &csv, "critical-alpha", "alpha,objective", None, meta)?;
                println!("wrote {}", out.display());
            }
        }
        Command::Validate(args) => validate(args)?,
        Command::Figures { model, alpha_steps, out_dir } => figures_cmd(model, *alpha_steps, out_dir)?,
    }
    Ok(())
}

fn write_eta_family(rs: &[qutrit_core::SweepResult], out: &Path, note: Option<&str>) -> Result<(), CliError> {
    let csv = output::eta_family_csv(rs)?;
    let meta: Vec<_> = rs.iter().map(|r| &r.metadata).collect();
    output::write_with_metadata(out, &csv, "eta-family", output::ETA_FAMILY_HEADER, note, meta)
}

fn figures_cmd(model: &ModelArgs, alpha_steps: Option<usize>, out_dir: &Path) -> anyhow::Result<()> {
    if model.gamma.is_some() || model.alpha.is_some() || model.eta.is_some() {
        return Err(CliError::Config("figures takes gamma, alpha and eta from the caption table".into()).into());
    }
    let mut file = ConfigFile::load(model.config.as_deref())?;
    let cfg = model.resolve_with(&mut file)?;
    let d = AlphaRange::default();
    let range = AlphaRange::new(d.min, d.max, resolve_extra(alpha_steps, &mut file, "alpha-steps", d.steps)?)
        .map_err(CliError::from)?;
    file.finish()?;
    fs::create_dir_all(out_dir).map_err(|source| CliError::Write { path: out_dir.to_owned(), source })?;

    for fig in &FIGURES {
        let path = out_dir.join(format!("fig{}.csv", fig.number));
        let run = || -> Result<(), CliError> {
            match fig.kind {
                FigureKind::EtaFamily { gamma, alpha } => {
                    let base = ChainParams::new(cfg.params.n(), gamma, alpha, DEFAULT_ETAS[0])?;
                    let rs = eta_family(&base, cfg.coupling, &cfg.grid, &DEFAULT_ETAS, &cfg.options)?;
                    write_eta_family(&rs, &path, fig.note)
                }
                FigureKind::AlphaGrid { gamma } => {
                    let base = ChainParams::new(cfg.params.n(), gamma, 0.0, GRID_ETA)?;
                    let r = alpha_time_grid(&base, cfg.coupling, &cfg.grid, &range, &cfg.options)?;
                    output::write_grid_csv(&r, &path)
                }
            }
        };
        run().with_context(|| format!("fig{}", fig.number))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn validate(args: &ValidateArgs) -> anyhow::Result<()> {
    for &n in &args.sizes {
        if !(MIN_SITES..=MAX_SITES).contains(&n) || n % 2 == 0 {
            return Err(CliError::Config(format!("validate sizes must be odd and within {MIN_SITES}..={MAX_SITES} (got {n})")).into());
        }
    }
    let grid = qutrit_core::TimeGrid::new(0.0, args.t_end, args.steps).map_err(CliError::from)?;
    let times = grid.points();
    let table = lambda_table(args.eta, QutritCoupling::uniform(args.g).map_err(CliError::from)?);
    let (lambda_mu, lambda_nu) = (table.get(1), table.get(5));
    let sign: ThreeSiteSign = args.sign.into();
    println!(
        "echo pair lambda = ({lambda_mu}, {lambda_nu}), gamma = {}, eta = {}, t in [0, {}] x {}",
        args.gamma, args.eta, args.t_end, args.steps
    );
    println!("{:>4}  {:>22}  {:>22}", "n", "odd sector, alpha = 0", format!("ground, alpha = {}", args.alpha));

    let mut failures = Vec::new();
    for &n in &args.sizes {
        let base = EchoSetup {
            n,
            gamma: args.gamma,
            alpha: 0.0,
            eta: args.eta,
            lambda_mu,
            lambda_nu,
            sign,
            sector: InitialSector::LowestOdd,
        };
        let odd = max_magnitude_deviation(&base, &times).map_err(CliError::from)?;
        let ground = max_magnitude_deviation(&EchoSetup { alpha: args.alpha, sector: InitialSector::Ground, ..base }, &times)
            .map_err(CliError::from)?;
        let verdict = if odd <= args.tolerance { "ok" } else { "FAIL" };
        println!("{n:>4}  {:>17.3e} {verdict:>4}  {ground:>22.3e}", odd);
        if odd > args.tolerance {
            failures.push(n);
        }
    }

    if let Some(&n) = args.sizes.iter().max() {
        let base = EchoSetup {
            n,
            gamma: args.gamma,
            alpha: args.sign_alpha,
            eta: args.eta,
            lambda_mu,
            lambda_nu,
            sign,
            sector: InitialSector::Ground,
        };
        let det = determine_three_site_sign(&base, args.sign_alpha, &times).map_err(CliError::from)?;
        println!(
            "sign test n = {n}, |alpha| = {}: formula response {:.3e}, mismatch as-printed {:.3e}, flipped {:.3e}, selected {}",
            det.alpha,
            det.formula_response,
            det.mismatch_as_printed,
            det.mismatch_flipped,
            det.selected.map_or("none".to_string(), |s| format!("{s:?}")),
        );
    }

    if !failures.is_empty() {
        return Err(CliError::Validation(format!(
            "odd-sector deviation above {:e} for n = {failures:?}",
            args.tolerance
        ))
        .into());
    }
    Ok(())
}
