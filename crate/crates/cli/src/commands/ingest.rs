use hdi_core::ingest::{completeness, CompletenessReport, IndicatorTable};
use serde::Serialize;

use super::load_table;
use crate::config::PipelineConfig;
use crate::error::Result;
use crate::output::{Console, OutDir};

#[derive(Serialize)]
struct IngestSummary<'a> {
    regions: usize,
    indicators: &'a [String],
    years: &'a [i32],
    records: usize,
    non_missing: usize,
    complete_pairs: Vec<(&'a str, i32)>,
}

pub fn run(config: &PipelineConfig, out: &OutDir, console: &mut Console) -> Result<IndicatorTable> {
    let table = load_table(config, console)?;
    let report = completeness(&table, None)?;
    write(&table, &report, out)?;

    let years = table.years();
    console.say(format_args!(
        "{} regions, {} indicators, years {}-{}, {} records ({} with values)",
        table.regions().len(),
        table.indicators().len(),
        years.first().copied().unwrap_or_default(),
        years.last().copied().unwrap_or_default(),
        table.len(),
        table.non_missing_count(),
    ));
    let complete: Vec<_> = report.complete_pairs().collect();
    console.say(format_args!(
        "{} complete (indicator, year) pairs:",
        complete.len()
    ));
    for (indicator, year) in complete {
        console.say(format_args!("  {year}  {indicator}"));
    }
    Ok(table)
}

fn write(table: &IndicatorTable, report: &CompletenessReport, out: &OutDir) -> Result<()> {
    out.write_with("completeness.csv", |buf| report.write_csv(buf))?;
    out.write_json("completeness.json", report)?;
    out.write_json(
        "ingest_summary.json",
        &IngestSummary {
            regions: table.regions().len(),
            indicators: table.indicators(),
            years: table.years(),
            records: table.len(),
            non_missing: table.non_missing_count(),
            complete_pairs: report.complete_pairs().collect(),
        },
    )?;
    Ok(())
}
