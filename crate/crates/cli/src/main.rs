//! `preschwarz`: command-line access to the evaluators of the `preschwarz`
//! library.
//!
//! Exit status is 0 when every check passes, 1 when a verification fails and
//! 2 on a usage or domain error.

mod commands;
mod input;
mod output;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use commands::{MeansPart, NormKind, Suite, SubordOptions, VerifyOptions};
use input::{build_plan, load_map, parse_grid, parse_list, read_config, MapSource};
use output::{render_csv, render_json, render_plot, render_table, Format, Outcome, ReportDocument};

/// A malformed command line or a library domain error; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<preschwarz::Error> for UsageError {
    fn from(e: preschwarz::Error) -> Self {
        Self(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "preschwarz", version, about = "Pre-Schwarzian analysis of planar harmonic maps")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit `x y` blocks per curve instead of the report.
    #[arg(long, global = true)]
    plot_data: bool,
    /// TOML file with format, output, seed, plot_data and a [plan] table.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Number of geometric sampling rings.
    #[arg(long, global = true)]
    rings: Option<usize>,
    /// Step size at which local refinement stops.
    #[arg(long, global = true)]
    refine_tol: Option<f64>,
    /// Record the wall-clock time (seconds since the epoch) in the report.
    #[arg(long, global = true)]
    timestamp: bool,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Family spec, e.g. `K`, `tag=H a=1 b=-2`, `tag=F a=0.5 b=1.5 theta=1`.
    #[arg(long)]
    family: Option<String>,
    /// Coefficient file: `N`, then N+1 lines `re im` for h, then N+1 for g.
    #[arg(long)]
    coeffs: Option<PathBuf>,
}

impl MapArgs {
    fn load(&self) -> Result<MapSource, UsageError> {
        load_map(self.family.as_deref(), self.coeffs.as_deref())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Norm of the pre-Schwarzian, Schwarzian or Bloch quantity.
    Norm {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_enum, default_value = "pre")]
        kind: NormKind,
    },
    /// Run the sharp-constant suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Parameter grid `lo:hi:step` for the H and F suites.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Number of random shears per family.
        #[arg(long, default_value_t = 20)]
        eps_count: usize,
        /// Restrict the shear suite to one family.
        #[arg(long)]
        family: Option<String>,
    },
    /// Distortion and growth bounds over a grid of radii.
    Distortion {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        b1: f64,
        /// Radii as `lo:hi:step`.
        #[arg(long, default_value = "0.1:0.9:0.1")]
        r: String,
    },
    /// Covering radii of h(D) and f(D).
    Covering {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        b1: f64,
    },
    /// Taylor coefficients and their growth exponent.
    Coeffs {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 256)]
        n_max: usize,
        /// Also report the Stirling-normalised ratios for this λ > 1.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Integral means and their growth exponent.
    Means {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, value_enum, default_value = "map")]
        part: MeansPart,
        /// Comma-separated radii in (0, 1).
        #[arg(long)]
        radii: Option<String>,
    },
    /// Bounds on the uniformly hyperbolic radius.
    Radius {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Subordination checks for one outer family.
    Subord {
        #[arg(long)]
        family: String,
        /// Inner maps: identity, rotation:θ, scale:s, disk:re,im (repeatable).
        #[arg(long, allow_hyphen_values = true)]
        inner: Vec<String>,
        /// Keep only the analytic part of the outer map and pair it with
        /// this co-analytic series `re,im;re,im;...`.
        #[arg(long, allow_hyphen_values = true)]
        co_analytic: Option<String>,
    },
    /// Every evaluator on one map.
    Report {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
}

struct Settings {
    format: Format,
    output: Option<PathBuf>,
    seed: u64,
    plot_data: bool,
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(text) = std::env::var("PRESCHWARZ_THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError(format!("PRESCHWARZ_THREADS must be a positive integer, got '{text}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| UsageError(format!("cannot size the worker pool: {e}")))
}

fn execute(cli: &Cli) -> Result<(Outcome, Settings), UsageError> {
    let config = match &cli.global.config {
        Some(path) => read_config(path)?,
        None => Default::default(),
    };
    let settings = Settings {
        format: cli.global.format.or(config.format).unwrap_or(Format::Json),
        output: cli.global.output.clone().or(config.output),
        seed: cli.global.seed.or(config.seed).unwrap_or(42),
        plot_data: cli.global.plot_data || config.plot_data.unwrap_or(false),
    };
    let plan = build_plan(config.plan.as_ref(), cli.global.rings, cli.global.refine_tol)?;
    let outcome = match &cli.command {
        Command::Norm { map, kind } => commands::norm(&map.load()?, *kind, &plan)?,
        Command::Verify { suite, grid, eps_count, family } => {
            let opts = VerifyOptions {
                suite: *suite,
                grid: grid.as_deref().map(parse_grid).transpose()?,
                eps_count: *eps_count,
                family: family.as_deref().map(|f| f.parse()).transpose()?,
                seed: settings.seed,
            };
            commands::verify(&opts, &plan)?
        }
        Command::Distortion { lambda, b1, r } => commands::distortion(*lambda, *b1, &parse_grid(r)?)?,
        Command::Covering { lambda, b1 } => commands::covering(*lambda, *b1)?,
        Command::Coeffs { map, n_max, lambda } => commands::coeffs(&map.load()?, *n_max, *lambda)?,
        Command::Means { map, p, part, radii } => {
            let radii = radii.as_deref().map(parse_list).transpose()?;
            commands::means(&map.load()?, *p, *part, radii.as_deref())?
        }
        Command::Radius { map, samples } => commands::radius(&map.load()?, &plan, *samples)?,
        Command::Subord { family, inner, co_analytic } => {
            let opts = SubordOptions {
                outer: family.parse()?,
                inner: inner.clone(),
                co_analytic: co_analytic.clone(),
            };
            commands::subord(&opts, &plan)?
        }
        Command::Report { map, samples } => commands::report(&map.load()?, &plan, *samples)?,
    };
    Ok((outcome, settings))
}

fn emit(outcome: &Outcome, settings: &Settings, argv: &[String], timestamp: bool) -> Result<(), UsageError> {
    let text = if settings.plot_data {
        render_plot(&outcome.curves)
    } else {
        match settings.format {
            Format::Json => {
                let stamp = timestamp.then(|| {
                    SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0)
                });
                render_json(&ReportDocument {
                    tool: "preschwarz",
                    version: env!("CARGO_PKG_VERSION"),
                    command: argv,
                    timestamp: stamp,
                    passed: outcome.passed,
                    payload: &outcome.payload,
                    warnings: &outcome.warnings,
                })
            }
            Format::Csv => render_csv(&outcome.table),
            Format::Table => render_table(&outcome.table),
        }
    };
    if settings.plot_data || settings.format != Format::Json {
        for w in &outcome.warnings {
            eprintln!("warning: {w}");
        }
    }
    match &settings.output {
        Some(path) => fs::write(path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| UsageError(format!("cannot write output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let run = configure_threads()
        .and_then(|_| execute(&cli))
        .and_then(|(outcome, settings)| {
            emit(&outcome, &settings, &argv, cli.global.timestamp)?;
            Ok(outcome.passed)
        });
    match run {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {}", msg.lines().next().unwrap_or(""));
            ExitCode::from(2)
        }
    }
}
