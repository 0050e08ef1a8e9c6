//! Command-line front end.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use optionforge::battery::flagship;
use optionforge::gbm::{simulate_paths, write_paths_csv, GbmSpec};
use optionforge::pde::{
    convergence_study, sigma_surface, surface_file_name, write_surface_csv, GridSpec, SigmaSource, SigmaSweepSpec,
    Smoothing,
};
use optionforge::{Method, OptionContract, OptionKind, PricingError};

use crate::pricing::{price_contract, PricingOptions, DEFAULT_GRID_SIZE, DEFAULT_MC_PATHS, DEFAULT_SEED};
use crate::request::{InputsEcho, PriceResponse};
use crate::service::{self, ServiceConfig, DEFAULT_PORT, PORT_ENV};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "optionforge",
    version,
    about = "European option pricing: closed form, Crank-Nicolson, heat kernel, Monte Carlo"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Price one contract and print the result as JSON.
    Price(PriceArgs),
    /// Grid-refinement study of the finite-difference solver against the closed form.
    Converge(ConvergeArgs),
    /// Write one finite-difference price surface (CSV) per volatility.
    Surface(SurfaceArgs),
    /// Simulate geometric Brownian motion paths to CSV.
    Simulate(SimulateArgs),
    /// Run the JSON HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Cn,
    Heat,
    Mc,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Analytic => Method::Analytic,
            MethodArg::Cn => Method::CrankNicolson,
            MethodArg::Heat => Method::HeatKernel,
            MethodArg::Mc => Method::MonteCarlo,
        }
    }
}

/// `MxN`: space intervals by time steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridDimsArg {
    pub n_space: usize,
    pub n_time: usize,
}

impl FromStr for GridDimsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (m, n) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected MxN, got {s:?}"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
        Ok(GridDimsArg {
            n_space: parse(m)?,
            n_time: parse(n)?,
        })
    }
}

fn parse_kind(s: &str) -> Result<OptionKind, String> {
    s.parse().map_err(|e: PricingError| e.to_string())
}

#[derive(Debug, Args)]
pub struct ContractArgs {
    /// call | put (or 0 | 1)
    #[arg(long = "type", value_parser = parse_kind)]
    pub kind: OptionKind,
    #[arg(long)]
    pub spot: f64,
    #[arg(long)]
    pub strike: f64,
    /// Continuously compounded rate as a decimal (0.02 = 2%).
    #[arg(long, allow_hyphen_values = true)]
    pub rate: f64,
    /// Volatility as a decimal (0.5 = 50%).
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: f64,
    /// Time to expiry in years.
    #[arg(long, allow_hyphen_values = true)]
    pub maturity: f64,
}

impl ContractArgs {
    fn contract(&self) -> Result<OptionContract, PricingError> {
        OptionContract::new(self.kind, self.spot, self.strike, self.rate, self.sigma, self.maturity)
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Finite-difference lattice as MxN (space intervals x time steps).
    #[arg(long)]
    pub grid: Option<GridDimsArg>,
    /// Far asset boundary; defaults to 4·max(strike, spot).
    #[arg(long)]
    pub smax: Option<f64>,
    /// Time-stepping weight: 0.5 Crank-Nicolson, 1 implicit Euler.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Start with four implicit half-steps.
    #[arg(long)]
    pub rannacher: bool,
}

impl GridArgs {
    fn apply(&self, mut g: GridSpec) -> GridSpec {
        if let Some(d) = self.grid {
            g.n_space = d.n_space;
            g.n_time = d.n_time;
        }
        if self.smax.is_some() {
            g.s_max = self.smax;
        }
        if let Some(t) = self.theta {
            g.theta = t;
        }
        if self.rannacher {
            g.smoothing = Smoothing::Rannacher;
        }
        g
    }
}

#[derive(Debug, Args)]
pub struct PriceArgs {
    #[command(flatten)]
    pub contract: ContractArgs,
    #[arg(long, value_enum, default_value = "analytic")]
    pub method: MethodArg,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Monte Carlo path count.
    #[arg(long, default_value_t = DEFAULT_MC_PATHS)]
    pub paths: usize,
    /// Monte Carlo time steps per path.
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long = "type", value_parser = parse_kind, default_value = "call")]
    pub kind: OptionKind,
    #[arg(long, default_value_t = 100.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 120.0)]
    pub strike: f64,
    #[arg(long, default_value_t = 0.02, allow_hyphen_values = true)]
    pub rate: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 89.0 / 365.0, allow_hyphen_values = true)]
    pub maturity: f64,
    /// Number of doubling levels (at least 3).
    #[arg(long, default_value_t = 5)]
    pub levels: usize,
    /// M = N of the coarsest level.
    #[arg(long, default_value_t = 50)]
    pub base: usize,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long)]
    pub smax: Option<f64>,
    /// Emit the rows as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long = "type", value_parser = parse_kind)]
    pub kind: OptionKind,
    #[arg(long)]
    pub strike: f64,
    /// Only sets the default far boundary; defaults to the strike.
    #[arg(long)]
    pub spot: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rate: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub maturity: f64,
    /// Comma-separated volatilities (decimals).
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["seed", "count"], required_unless_present = "count")]
    pub sigmas: Option<Vec<f64>>,
    /// Seed for uniform volatility draws in [0.05, 0.95).
    #[arg(long, requires = "count")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub outdir: PathBuf,
    /// Lattice as MxN; defaults to 10x29.
    #[arg(long)]
    pub grid: Option<GridDimsArg>,
    #[arg(long)]
    pub smax: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub s0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long)]
    pub horizon: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub paths: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output CSV file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = PORT_ENV, default_value_t = DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Concurrent pricing jobs; defaults to the number of processors.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Directory with the built calculator UI.
    #[arg(long)]
    pub webui_dir: Option<PathBuf>,
}

/// Failure of a subcommand, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        })
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<PricingError> for CliError {
    fn from(e: PricingError) -> Self {
        if e.is_validation() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

fn io_error(context: &str, e: io::Error) -> CliError {
    CliError::Runtime(format!("{context}: {e}"))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Price(args) => run_price(&args, out),
        Command::Converge(args) => run_converge(&args, out),
        Command::Surface(args) => run_surface(&args, out),
        Command::Simulate(args) => run_simulate(&args, out),
        Command::Serve(args) => run_serve(args),
    }
}

pub fn price_response(args: &PriceArgs) -> Result<PriceResponse, CliError> {
    let c = args.contract.contract()?;
    let opts = PricingOptions {
        grid: args.grid.apply(GridSpec::new(DEFAULT_GRID_SIZE, DEFAULT_GRID_SIZE)),
        mc_paths: args.paths,
        mc_steps: args.steps,
        seed: args.seed,
        ..PricingOptions::default()
    };
    let quote = price_contract(&c, args.method.into(), &opts)?;
    let inputs = InputsEcho {
        option_type: c.kind,
        spot: c.spot,
        strike: c.strike,
        rate_pct: c.rate * 100.0,
        vol_pct: c.sigma * 100.0,
        rate: c.rate,
        sigma: c.sigma,
        purchase_date: None,
        expiry_date: None,
        time_days: None,
        maturity_years: c.maturity,
    };
    Ok(PriceResponse::new(quote, inputs))
}

fn run_price(args: &PriceArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let resp = price_response(args)?;
    let text = serde_json::to_string_pretty(&resp).map_err(|e| CliError::Runtime(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| io_error("stdout", e))
}

fn run_converge(args: &ConvergeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = OptionContract::new(args.kind, args.spot, args.strike, args.rate, args.sigma, args.maturity)?;
    let mut base = GridSpec::new(args.base, args.base).with_theta(args.theta);
    base.s_max = args.smax;
    let rows = convergence_study(&c, args.levels, &base)?;
    let w = |e| io_error("stdout", e);
    if args.json {
        let text = serde_json::to_string_pretty(&rows).map_err(|e| CliError::Runtime(e.to_string()))?;
        return writeln!(out, "{text}").map_err(w);
    }
    writeln!(out, "{:>6} {:>6} {:>12} {:>14} {:>12}", "M", "N", "h", "error", "order").map_err(w)?;
    for r in &rows {
        let order = match r.observed_order {
            Some(o) => format!("{o:.4}"),
            None if r.is_exact() => "exact".to_string(),
            None => "-".to_string(),
        };
        writeln!(
            out,
            "{:>6} {:>6} {:>12.6} {:>14.6e} {:>12}",
            r.n_space, r.n_time, r.h, r.error, order
        )
        .map_err(w)?;
    }
    Ok(())
}

fn run_surface(args: &SurfaceArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spot = args.spot.unwrap_or(args.strike);
    // sigma is swept; any positive placeholder validates the rest
    let base = OptionContract::new(args.kind, spot, args.strike, args.rate, 0.5, args.maturity)?;
    let source = match (&args.sigmas, args.count) {
        (Some(list), _) => SigmaSource::Explicit(list.clone()),
        (None, Some(count)) => SigmaSource::Seeded {
            seed: args.seed.unwrap_or(DEFAULT_SEED),
            count,
        },
        (None, None) => return Err(CliError::Usage("give --sigmas or --count".into())),
    };
    let mut sweep = SigmaSweepSpec::new(source);
    if let Some(d) = args.grid {
        sweep.grid.n_space = d.n_space;
        sweep.grid.n_time = d.n_time;
    }
    sweep.grid.s_max = args.smax;
    sweep.grid.validate(&base)?;

    fs::create_dir_all(&args.outdir).map_err(|e| io_error(&args.outdir.display().to_string(), e))?;
    let mut manifest = Vec::new();
    let mut written = 0usize;
    let mut last_io_error = None;
    for outcome in sigma_surface(&base, &sweep) {
        let entry = match outcome.grid {
            Ok(grid) => {
                let path = args.outdir.join(surface_file_name(outcome.sigma));
                let result = fs::File::create(&path).and_then(|f| {
                    let mut w = BufWriter::new(f);
                    write_surface_csv(&grid, &mut w)?;
                    w.flush()
                });
                match result {
                    Ok(()) => {
                        written += 1;
                        json!({ "sigma": outcome.sigma, "file": path.display().to_string() })
                    }
                    Err(e) => {
                        let msg = format!("{}: {e}", path.display());
                        last_io_error = Some(msg.clone());
                        json!({ "sigma": outcome.sigma, "error": msg })
                    }
                }
            }
            Err(e) => json!({ "sigma": outcome.sigma, "error": e.to_string() }),
        };
        manifest.push(entry);
    }
    let text = serde_json::to_string_pretty(&json!({ "surfaces": manifest, "written": written }))
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| io_error("stdout", e))?;
    if written == 0 {
        return Err(CliError::Runtime(
            last_io_error.unwrap_or_else(|| "no surface could be computed".to_string()),
        ));
    }
    Ok(())
}

fn run_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = GbmSpec {
        s0: args.s0,
        mu: args.mu,
        sigma: args.sigma,
        horizon: args.horizon,
        n_steps: args.steps,
        n_paths: args.paths,
        seed: args.seed,
    };
    let set = simulate_paths(&spec)?;
    let path = args.out.display().to_string();
    let file = fs::File::create(&args.out).map_err(|e| io_error(&path, e))?;
    let mut w = BufWriter::new(file);
    write_paths_csv(&set, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| io_error(&path, e))?;
    writeln!(out, "wrote {} paths x {} steps to {path}", args.paths, args.steps).map_err(|e| io_error("stdout", e))
}

fn run_serve(args: ServeArgs) -> Result<(), CliError> {
    let mut config = ServiceConfig::default();
    if let Some(w) = args.workers {
        config.workers = w;
    }
    if let Some(dir) = args.webui_dir {
        config.webui_dir = dir;
    }
    let runtime = tokio::runtime::Runtime::new().map_err(|e| io_error("runtime", e))?;
    runtime
        .block_on(service::serve(&args.host, args.port, config))
        .map_err(|e| io_error("serve", e))
}

/// Default contract of the `converge` subcommand.
pub fn converge_default_contract() -> OptionContract {
    flagship(OptionKind::Call)
}
