//! Writes the synthetic wide-CSV region table to stdout.
//!
//! ```text
//! cargo run -p hdi-core --example make_fixture -- [regions] [seed] > regions.csv
//! ```

use std::io;

use hdi_core::ingest::{write_wide_csv, WideCsvFormat};
use hdi_core::synth::{region_table, RegionTableConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let mut config = RegionTableConfig::default();
    if let Some(n) = args.next() {
        config.regions = n.parse().expect("regions must be a positive integer");
    }
    if let Some(s) = args.next() {
        config.seed = s.parse().expect("seed must be an unsigned integer");
    }
    let table = region_table(&config);
    write_wide_csv(&table, io::stdout().lock(), &WideCsvFormat::default())
        .expect("write to stdout");
}
