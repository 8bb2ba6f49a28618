use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pco_sim::config::parse_config;
use pco_sim::figures::reproduce_figures;
use pco_sim::output::{write_run, RunOutcome};
use pco_sim::sweep::{median_sync_times, run_sweep, write_sweep_csv, SweepAxis};

#[derive(Parser)]
#[command(name = "pco-sim", version, about = "Pulse-coupled oscillator synchronization simulator")]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Seed for random initial phases and coupling draws; overrides the scenario file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print nothing on success.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file.
    Run { config: PathBuf },
    /// Run the built-in scenarios in all three adjustment modes.
    Figures,
    /// Run a scenario template over a parameter grid and several seeds.
    Sweep {
        template: PathBuf,
        /// Grid axis as `section.key=v1,v2,...`; repeat for more axes.
        #[arg(long = "param", short = 'p')]
        params: Vec<String>,
        /// Number of seeds per grid point, starting at `--seed` (default 0).
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
}

fn summary(name: &str, o: &RunOutcome) -> String {
    let sync = match o.sync.sync_time {
        Some(t) => format!("synced at {t:.3} s"),
        None => "not synced".into(),
    };
    format!(
        "{name}: {sync}, final arc {:.3e}, {} firings, monotone = {}",
        o.final_lambda, o.firings, o.monotonicity.monotone
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pco-sim: error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: &Cli) -> pco_sim::Result<()> {
    match &cli.command {
        Command::Run { config } => {
            let mut scenario = parse_config(config)?;
            if let Some(seed) = cli.seed {
                scenario.override_seed(seed);
            }
            let dir = cli
                .out_dir
                .clone()
                .or_else(|| scenario.output.dir.clone().map(|d| resolve(config, &d)))
                .unwrap_or_else(|| PathBuf::from("out"));
            let o = write_run(&scenario.sim, &dir, &scenario.output.label, scenario.sync_tol, scenario.sync_hold)?;
            if !cli.quiet {
                println!("{}", summary(&scenario.output.label, &o));
                println!("wrote {}", dir.display());
            }
        }
        Command::Figures => {
            let dir = cli.out_dir.clone().unwrap_or_else(|| PathBuf::from("figures"));
            let results = reproduce_figures(&dir)?;
            if !cli.quiet {
                for (path, o) in &results {
                    let name = path.strip_prefix(&dir).unwrap_or(path);
                    println!("{}", summary(&name.display().to_string(), o));
                }
                println!("wrote {} output sets to {}", results.len(), dir.display());
            }
        }
        Command::Sweep { template, params, seeds } => {
            let text = std::fs::read_to_string(template)?;
            let axes = params.iter().map(|p| SweepAxis::parse(p)).collect::<pco_sim::Result<Vec<_>>>()?;
            let base = cli.seed.unwrap_or(0);
            let seed_list: Vec<u64> = (0..*seeds).map(|k| base + k).collect();
            let rows = run_sweep(&text, template.parent(), &axes, &seed_list)?;
            let dir = cli.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
            let path = dir.join("sweep.csv");
            write_sweep_csv(&axes, &rows, &path)?;
            if !cli.quiet {
                for (point, median) in median_sync_times(&rows) {
                    let label: Vec<String> = axes.iter().zip(&point).map(|(a, v)| format!("{}={v}", a.key)).collect();
                    println!("{}: median sync time {median:.3} s", label.join(" "));
                }
                println!("wrote {} rows to {}", rows.len(), path.display());
            }
        }
    }
    Ok(())
}

fn resolve(config: &Path, dir: &Path) -> PathBuf {
    match config.parent() {
        Some(base) if dir.is_relative() => base.join(dir),
        _ => dir.to_path_buf(),
    }
}
