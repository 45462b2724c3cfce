//! The `hdi` command-line tool.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 1 for usage or configuration errors, 2 for
//! unreadable or unusable data, 3 when training diverges.

mod args;
mod commands;
pub mod config;
mod error;
mod output;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use hdi_core::eval::{DisplayOrder, StatedTotals};
use hdi_core::kmeans::CentroidFile;

use args::{ClassifyAction, Cli, Command, OrderFlag};
pub use config::PipelineConfig;
pub use error::CliError;
use error::Result;
use output::{open, Console, OutDir};

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                1
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let mut console = Console::new(stdout, stderr);
    match dispatch(cli.command, &mut console) {
        Ok(()) => 0,
        Err(e) => {
            console.error(format_args!("{e}"));
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, console: &mut Console) -> Result<()> {
    match command {
        Command::Ingest(a) => {
            let config = a.common.resolve()?;
            let out = commands::prepare(&config)?;
            commands::ingest::run(&config, &out, console).map(drop)
        }
        Command::Classify { action } => match action {
            ClassifyAction::Train(a) => {
                let mut config = a.common.resolve()?;
                a.model.apply(&mut config);
                if let Some(h) = a.hidden {
                    config.train.hidden_neurons = h;
                }
                let out = commands::prepare(&config)?;
                commands::classify::train(&config, &out, console)
            }
            ClassifyAction::Sweep(a) => {
                let mut config = a.common.resolve()?;
                a.model.apply(&mut config);
                if let Some(h) = a.hidden_sizes {
                    config.sweep.hidden_sizes = h;
                }
                if let Some(r) = a.runs {
                    config.sweep.runs_per_config = r;
                }
                let out = commands::prepare(&config)?;
                let table = commands::load_table(&config, console)?;
                commands::classify::sweep(&config, &table, &out, console).map(drop)
            }
            ClassifyAction::Predict(a) => {
                let mut config = a.common.resolve()?;
                if let Some(y) = a.year {
                    config.classification_year = y;
                }
                let out = commands::prepare(&config)?;
                commands::classify::predict_cmd(
                    &config,
                    &a.model,
                    a.dataset.as_deref(),
                    &out,
                    console,
                )
            }
        },
        Command::Cluster(a) => {
            let mut config = a.common.resolve()?;
            if let Some(y) = a.year {
                config.clustering_year = y;
            }
            if let Some(k) = a.k {
                config.kmeans.k = k;
            }
            if let Some(init) = a.init {
                config.kmeans.init = init.into();
            }
            if a.scale {
                config.kmeans.scale = true;
            }
            if let Some(path) = &a.centroids {
                let file =
                    CentroidFile::read(open(path)?).map_err(|e| CliError::in_file(path, e))?;
                config.kmeans.k = file.k;
                config.kmeans.centroids = Some(file.centroids);
            }
            let out = commands::prepare(&config)?;
            let table = commands::load_table(&config, console)?;
            commands::cluster::run(&config, &table, &out, console)
        }
        Command::Evaluate(a) => {
            let matrix = match (&a.pairs, &a.predictions, &a.labels, &a.matrix) {
                (Some(p), None, None, None) => commands::evaluate::from_pairs(p)?,
                (None, Some(p), Some(l), None) => commands::evaluate::from_predictions(p, l)?,
                (None, None, None, Some(m)) => commands::evaluate::from_matrix(m)?,
                _ => {
                    return Err(args::usage(
                        "give exactly one of --pairs, --predictions with --labels, or --matrix",
                    ))
                }
            };
            let options = commands::evaluate::Options {
                order: match a.order {
                    OrderFlag::Descending => DisplayOrder::Descending,
                    OrderFlag::Ascending => DisplayOrder::Ascending,
                },
                show_empty: a.show_empty,
                stated: a
                    .stated_total
                    .zip(a.stated_correct)
                    .map(|(total, correct)| StatedTotals { total, correct }),
            };
            if let Some(s) = options.stated {
                if s.correct > s.total {
                    return Err(args::usage("--stated-correct exceeds --stated-total"));
                }
            }
            let out = OutDir::create(&a.out)?;
            commands::evaluate::run(&matrix, &options, &out, console)
        }
        Command::Report(a) => {
            let config = a.common.resolve()?;
            let out = commands::prepare(&config)?;
            commands::report::run(&config, &out, console)
        }
    }
}
