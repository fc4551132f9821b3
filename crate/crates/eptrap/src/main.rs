use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eptrap::bundle::Manifest;
use eptrap::config::Config;
use eptrap::{commands, parallel, CliError};

#[derive(Parser)]
#[command(name = "eptrap", version, about = "Non-Hermitian spectra, exceptional points and resonance trapping")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the mode set of the configured model as JSON.
    Eig { config: PathBuf },
    /// Continuity-matched branches over the `grid` section, as CSV.
    Sweep {
        config: PathBuf,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate an exceptional point in the `ep` plane.
    EpFind { config: PathBuf },
    /// Encircle the located (or given) exceptional point.
    EpCycle { config: PathBuf },
    /// Write the series requested in `observables`.
    Observe {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
    },
    /// Run a canned scenario into a bundle directory.
    Scenario {
        /// One of: trapping, three-resonance, phase-lapse, spin-swap, pt, observer.
        #[arg(required_unless_present = "manifest")]
        name: Option<String>,
        /// Parameter override, repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Re-run the experiment recorded in a bundle manifest.
        #[arg(long, conflicts_with_all = ["name", "set"])]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
    },
    /// Run the invariant suite.
    Selftest,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.cmd {
        Cmd::Eig { config } => commands::eig(&Config::load(&config)?, &mut out),
        Cmd::Sweep { config, out: path } => commands::sweep(&Config::load(&config)?, path.as_deref(), &mut out),
        Cmd::EpFind { config } => commands::ep_find(&Config::load(&config)?, &mut out),
        Cmd::EpCycle { config } => commands::ep_cycle(&Config::load(&config)?, &mut out),
        Cmd::Observe { config, out: dir, svg } => commands::observe(&Config::load(&config)?, &dir, svg, &mut out),
        Cmd::Scenario { name, set, manifest, out: dir, svg } => {
            if let Some(path) = manifest {
                let m = Manifest::load(&path)?;
                let dir = dir.unwrap_or_else(|| PathBuf::from(&m.scenario));
                commands::replay(&m, &dir, svg, &mut out).map(|_| ())
            } else {
                let name = name.expect("required by clap");
                let dir = dir.unwrap_or_else(|| PathBuf::from(&name));
                commands::scenario(&name, &commands::parse_sets(&set)?, &dir, svg, &mut out).map(|_| ())
            }
        }
        Cmd::Selftest => commands::run_selftest(&mut out),
    }?;
    out.flush().map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("{}", CliError::Config(format!("{msg}; see --help")).line());
            return ExitCode::from(1);
        }
    };
    match parallel::with_pool(move || run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
