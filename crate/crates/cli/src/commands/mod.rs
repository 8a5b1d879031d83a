mod callias;
mod eta;
mod examples;
mod harmonic;
mod stability;
mod sweep;
mod width;

use bandwidth_core::config::ExtrinsicConfig;
use bandwidth_core::grid::{nodes_and_midpoints, pairwise_max};
use bandwidth_core::width::Verdict;
use bandwidth_core::{ExtrinsicSpec, WarpedBand, WidthMode};

use crate::args::{BandArgs, Cli, Command};
use crate::config::{LoadedConfig, ModeKind, RunConfig};
use crate::error::{CliError, EXIT_HYPOTHESIS_VIOLATED, EXIT_OK, EXIT_THEOREM_VIOLATED};
use crate::Outcome;

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let loaded = cli.config.as_deref().map(LoadedConfig::load).transpose()?;
    match &cli.command {
        Command::SolveEta(a) => eta::run(a, loaded.as_ref()),
        Command::CheckWidth(a) => width::run(a, require(loaded, "check-width")?),
        Command::Stability(a) => stability::run(a, require(loaded, "stability")?),
        Command::Harmonic(a) => harmonic::run(a, require(loaded, "harmonic")?),
        Command::CalliasCert(a) => callias::run(a, require(loaded, "callias-cert")?),
        Command::Examples => examples::run(),
        Command::Sweep(a) => sweep::run(a, cli.seed.or(loaded.and_then(|l| l.config.seed))),
    }
}

fn require(loaded: Option<LoadedConfig>, command: &str) -> Result<LoadedConfig, CliError> {
    loaded.ok_or_else(|| CliError::Usage(format!("{command} needs --config PATH describing the band")))
}

pub(crate) fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Consistent | Verdict::Tight => EXIT_OK,
        Verdict::HypothesisViolated => EXIT_HYPOTHESIS_VIOLATED,
        Verdict::TheoremViolated => EXIT_THEOREM_VIOLATED,
    }
}

/// Band parameters after merging flags into the configuration file.
pub(crate) struct BandRun {
    pub band: WarpedBand<f64>,
    pub k: ExtrinsicSpec<f64>,
    pub config: RunConfig,
    pub sigma: f64,
    pub t_minus: f64,
    pub t_plus: f64,
    pub grid: usize,
    pub mode: WidthMode<f64>,
}

pub(crate) fn resolve_band(loaded: LoadedConfig, args: &BandArgs, default_grid: usize) -> Result<BandRun, CliError> {
    let (band, k) = loaded.build()?;
    let mut config = loaded.config;
    let sigma = args
        .sigma
        .or(config.sigma)
        .ok_or_else(|| CliError::Usage("sigma is required (--sigma or the config key \"sigma\")".into()))?;
    let (t0, t1) = band.interval();
    let t_minus = args.tminus.or(config.t_minus).unwrap_or(t0);
    let t_plus = args.tplus.or(config.t_plus).unwrap_or(t1);
    let grid = args.grid.or(config.grid).unwrap_or(default_grid);
    let mode_kind = args.mode.or(config.mode).unwrap_or(ModeKind::Cmc);
    let lambda = match args.lambda.or(config.lambda) {
        Some(l) => l,
        None => default_lambda(&band, &k, &config.k, mode_kind, grid)?,
    };
    let mode = match mode_kind {
        ModeKind::Cmc => WidthMode::Cmc { lambda },
        ModeKind::SupTrace => WidthMode::SupTrace { lambda_sup: lambda },
    };
    config.sigma = Some(sigma);
    config.t_minus = Some(t_minus);
    config.t_plus = Some(t_plus);
    config.grid = Some(grid);
    config.mode = Some(mode_kind);
    config.lambda = Some(lambda);
    Ok(BandRun { band, k, config, sigma, t_minus, t_plus, grid, mode })
}

/// The umbilic constant, `tr k` at `t0` in CMC mode, or the sampled
/// maximum of `tr k` in sup-trace mode.
fn default_lambda(
    band: &WarpedBand<f64>,
    k: &ExtrinsicSpec<f64>,
    k_config: &ExtrinsicConfig,
    mode: ModeKind,
    grid: usize,
) -> Result<f64, CliError> {
    if let ExtrinsicConfig::Umbilic { lambda } = k_config {
        return Ok(*lambda);
    }
    let n = band.n();
    match mode {
        ModeKind::Cmc => Ok(k.trace(n, band.t0())?),
        ModeKind::SupTrace => {
            let ts = nodes_and_midpoints(band.t0(), band.t1(), grid)?;
            let traces = ts.iter().map(|&t| k.trace(n, t)).collect::<Result<Vec<_>, _>>()?;
            pairwise_max(traces).ok_or_else(|| CliError::Config("empty grid".into()))
        }
    }
}
