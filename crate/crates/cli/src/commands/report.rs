use hdi_core::eval::{confusion, DisplayOrder};

use super::{classify, cluster, evaluate, ingest};
use crate::config::PipelineConfig;
use crate::error::Result;
use crate::output::{Console, OutDir};

/// Ingest, sweep, cluster and evaluate, each into its own subdirectory.
pub fn run(config: &PipelineConfig, out: &OutDir, console: &mut Console) -> Result<()> {
    console.say(format_args!("== ingest"));
    let table = ingest::run(config, &out.sub("ingest")?, console)?;

    console.say(format_args!("== classify sweep"));
    let (test, predicted) = classify::sweep(config, &table, &out.sub("classify")?, console)?;

    console.say(format_args!("== cluster"));
    cluster::run(config, &table, &out.sub("cluster")?, console)?;

    console.say(format_args!("== evaluate"));
    let matrix = confusion(&test.labels, &predicted)?;
    let options = evaluate::Options {
        order: DisplayOrder::Descending,
        show_empty: false,
        stated: None,
    };
    evaluate::run(&matrix, &options, &out.sub("evaluate")?, console)
}
