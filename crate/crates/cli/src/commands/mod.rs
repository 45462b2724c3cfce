pub mod classify;
pub mod cluster;
pub mod evaluate;
pub mod ingest;
pub mod report;

use hdi_core::ingest::{parse_wide_csv_report, IndicatorTable};

use crate::config::PipelineConfig;
use crate::error::{CliError, Result};
use crate::output::{open, Console, OutDir};

/// Parses the configured input, warning about rows noise removal dropped.
pub fn load_table(config: &PipelineConfig, console: &mut Console) -> Result<IndicatorTable> {
    let path = config.input()?;
    let file = open(path)?;
    let (table, noise) =
        parse_wide_csv_report(file, &config.csv).map_err(|e| CliError::in_file(path, e))?;
    for row in &noise.dropped_rows {
        console.warn(format_args!(
            "{}: line {} dropped: {}",
            path.display(),
            row.line,
            row.reason
        ));
    }
    for line in &noise.duplicate_lines {
        console.warn(format_args!(
            "{}: line {line} repeats an earlier row, skipped",
            path.display()
        ));
    }
    Ok(table)
}

/// Validates `config`, creates its output directory and echoes the config there.
pub fn prepare(config: &PipelineConfig) -> Result<OutDir> {
    config.validate()?;
    let out = OutDir::create(config.output_dir()?)?;
    out.write_text("config.json", &config.to_json())?;
    Ok(out)
}
