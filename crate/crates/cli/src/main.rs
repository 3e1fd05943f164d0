use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use multispread_cli::commands::{compare, lvc, parse_layer_arg, run, spectrum, stream};
use multispread_cli::{CliError, ExperimentSpec, Overrides, Result};

#[derive(Parser)]
#[command(
    name = "multispread",
    version,
    about = "Spreading activation on single-layer and multiplex networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment file over its (seed layer, D_x, R) grid.
    Run {
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        retention: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        coupling: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        seed_layers: Option<Vec<String>>,
        /// Write per-cell trace files.
        #[arg(long)]
        traces: bool,
    },
    /// Prune layers to their Largest Viable Cluster.
    Lvc {
        /// LAYER=PATH, repeated.
        #[arg(long = "layer", required = true)]
        layers: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// λ2 sweep over coupling values for a two-layer network.
    Spectrum {
        #[arg(long = "layer", required = true)]
        layers: Vec<String>,
        #[arg(
            long,
            value_delimiter = ',',
            conflicts_with = "dx_log",
            required_unless_present = "dx_log"
        )]
        dx: Option<Vec<f64>>,
        /// START:STOP:COUNT, log-spaced.
        #[arg(long)]
        dx_log: Option<String>,
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [1.0, 1.0])]
        rates: Vec<f64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise Cohen's d and Kruskal-Wallis per cell of a metrics table.
    Compare {
        metrics: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "group")]
        group: String,
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',', default_values_t = ["alpha_m".to_string(), "t_m".to_string()])]
        measures: Vec<String>,
        /// Column to correlate each measure with (Kendall tau-b).
        #[arg(long)]
        frequency: Option<String>,
    },
    /// Mindset streams between node pairs within one layer.
    Stream {
        #[arg(long = "layer", required = true)]
        layers: Vec<String>,
        #[arg(long)]
        attributes: Option<PathBuf>,
        /// Layer the streams are computed in.
        #[arg(long)]
        within: String,
        /// SOURCE,TARGET, repeated.
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn layer_args(args: &[String]) -> Result<Vec<(String, PathBuf)>> {
    args.iter().map(|a| parse_layer_arg(a)).collect()
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run {
            config,
            output,
            horizon,
            retention,
            coupling,
            seed_layers,
            traces,
        } => {
            let mut spec = ExperimentSpec::load(&config)?;
            spec.apply(Overrides {
                output,
                horizon,
                retention,
                coupling,
                seed_layers,
                traces: traces.then_some(true),
            });
            let report = run::cmd_run(&spec)?;
            info!(
                "{} of {} items, {} cells, {} rows -> {}",
                report.items_run,
                report.items_total,
                report.cells,
                report.rows,
                spec.output.display()
            );
        }
        Command::Lvc { layers, out } => {
            let report = lvc::cmd_lvc(&layer_args(&layers)?, &out)?;
            info!("LVC: {} of {} nodes", report.nodes, report.input_nodes);
        }
        Command::Spectrum {
            layers,
            dx,
            dx_log,
            rates,
            out,
        } => {
            let grid = match (dx, dx_log) {
                (Some(grid), _) => grid,
                (None, Some(spec)) => spectrum::parse_log_grid(&spec)?,
                (None, None) => return Err(CliError::Argument("give --dx or --dx-log".into())),
            };
            let reports =
                spectrum::cmd_spectrum(&layer_args(&layers)?, &grid, [rates[0], rates[1]])?;
            let text = spectrum::spectrum_csv(&reports);
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|source| CliError::Io { path, source })?
                }
                None => print!("{text}"),
            }
        }
        Command::Compare {
            metrics,
            out,
            group,
            levels,
            measures,
            frequency,
        } => {
            let opts = compare::CompareOptions {
                group_column: group,
                measures,
                levels,
                frequency_column: frequency,
            };
            let report = compare::cmd_compare(&metrics, &out, &opts)?;
            info!(
                "{} comparisons, {} skipped",
                report.comparisons,
                report.skipped.len()
            );
        }
        Command::Stream {
            layers,
            attributes,
            within,
            pairs,
            out,
        } => {
            let pairs = pairs
                .iter()
                .map(|p| stream::parse_pair(p))
                .collect::<Result<Vec<_>>>()?;
            stream::cmd_stream(
                &layer_args(&layers)?,
                attributes.as_deref(),
                &within,
                &pairs,
                &out,
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::to_string(&e.report()).expect("error report serializes")
            );
            ExitCode::FAILURE
        }
    }
}
