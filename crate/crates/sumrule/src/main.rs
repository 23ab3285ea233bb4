use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sumrule::commands::{execute, exit};
use sumrule::config::{
    parse_grid, Command, EnsembleConfig, EnsembleName, Format, RunConfig, SideName, SCHEMA,
};
use sumrule::{CliError, Result};

/// Sum rules and large deviations for classical random-matrix ensembles.
#[derive(Debug, Parser)]
#[command(name = "sumrule", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Compare both sides of the sum rule for one measure.
    Verify(VerifyArgs),
    /// Draw eigenvalues and weights from a tridiagonal ensemble.
    Sample(SampleArgs),
    /// Tabulate outlier rates against the effective-potential rates.
    Rates(RatesArgs),
    /// Monte-Carlo estimate of an extreme-eigenvalue tail rate.
    Probe(ProbeArgs),
    /// Execute a JSON run configuration.
    Run {
        config: PathBuf,
        /// Output file, overriding the configuration.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the JSON schema of run configurations.
    Schema,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum, default_value = "hermite")]
    ensemble: EnsembleName,
    /// Laguerre ratio parameter in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long, default_value_t = 0.0)]
    kappa1: f64,
    #[arg(long, default_value_t = 0.0)]
    kappa2: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; defaults to `$SUMRULE_OUT_DIR/<command>.<ext>` or stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Built-in measure or path of a measure JSON file.
    #[arg(long)]
    measure: String,
    /// Coefficient file (JSON or CSV) replacing the recovered coefficients.
    #[arg(long)]
    coefficients: Option<PathBuf>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long = "tol")]
    tolerance: Option<f64>,
    #[arg(long)]
    eps_tail: Option<f64>,
    #[arg(long)]
    tail_window: Option<usize>,
    #[arg(long)]
    kl_cap: Option<f64>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Use the spectral weights instead of uniform 1/n.
    #[arg(long)]
    weighted: bool,
}

#[derive(Debug, Args)]
struct RatesArgs {
    #[command(flatten)]
    common: Common,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    grid: Option<String>,
    /// Single evaluation point.
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    #[arg(long, value_enum, default_value = "plus")]
    side: SideName,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, value_enum, default_value = "plus")]
    side: SideName,
    #[arg(long, value_delimiter = ',')]
    nladder: Option<Vec<usize>>,
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
}

fn base(command: Command, c: &Common) -> RunConfig {
    let mut config = RunConfig::new(
        command,
        EnsembleConfig {
            kind: c.ensemble,
            tau: c.tau,
            kappa1: c.kappa1,
            kappa2: c.kappa2,
        },
    );
    config.seed = c.seed;
    config.output.format = c.format;
    config.output.path = c.out.clone();
    config
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn build(cmd: Cmd) -> Result<Option<RunConfig>> {
    let config = match cmd {
        Cmd::Schema => return Ok(None),
        Cmd::Run { config, out } => {
            let mut c = RunConfig::from_file(&config)?;
            if out.is_some() {
                c.output.path = out;
            }
            c
        }
        Cmd::Verify(a) => {
            let mut c = base(Command::Verify, &a.common);
            c.measure = Some(a.measure);
            c.coefficients = a.coefficients;
            set(&mut c.depth, a.depth);
            set(&mut c.panels, a.panels);
            set(&mut c.order, a.order);
            set(&mut c.tolerance, a.tolerance);
            set(&mut c.eps_tail, a.eps_tail);
            set(&mut c.tail_window, a.tail_window);
            set(&mut c.kl_cap, a.kl_cap);
            c
        }
        Cmd::Sample(a) => {
            let mut c = base(Command::Sample, &a.common);
            set(&mut c.n, a.n);
            set(&mut c.beta, a.beta);
            c.weighted = a.weighted;
            c
        }
        Cmd::Rates(a) => {
            let mut c = base(Command::Rates, &a.common);
            if let Some(g) = a.grid {
                c.grid = parse_grid(&g)?;
            }
            c.x = a.x;
            c.side = a.side;
            c
        }
        Cmd::Probe(a) => {
            let mut c = base(Command::Probe, &a.common);
            c.x = Some(a.x);
            c.side = a.side;
            set(&mut c.nladder, a.nladder);
            set(&mut c.draws, a.draws);
            set(&mut c.beta, a.beta);
            c
        }
    };
    config.validate()?;
    Ok(Some(config))
}

fn destination(config: &RunConfig) -> Option<PathBuf> {
    config.output.path.clone().or_else(|| {
        std::env::var_os("SUMRULE_OUT_DIR").map(|dir| {
            Path::new(&dir).join(format!(
                "{}.{}",
                config.command.name(),
                config.output.format.extension()
            ))
        })
    })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.to_owned(),
                    source,
                })?;
            }
            std::fs::write(path, text).map_err(|source| CliError::Io {
                path: path.to_owned(),
                source,
            })
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    let Some(config) = build(cmd)? else {
        write_out(None, SCHEMA)?;
        return Ok(exit::OK);
    };
    let timestamp = chrono::Utc::now().to_rfc3339();
    let outcome = execute(&config, &timestamp)?;
    write_out(destination(&config).as_deref(), &outcome.text)?;
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let message = e.render().to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!(
                "{}",
                serde_json::json!({ "error": { "kind": "usage", "message": first } })
            );
            return ExitCode::from(exit::INPUT);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(exit::INPUT)
        }
    }
}
