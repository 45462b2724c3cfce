//! Wide-format indicator tables.
//!
//! Open-government exports put one `(region, indicator)` pair per row and one
//! column per year, with blank cells wherever a measurement was not taken:
//!
//! ```text
//! Area Name,Indicator Name,2005,2006,2007
//! "Bandung, Kota",Number of Doctors,1091,,
//! ```
//!
//! [`parse_wide_csv`] turns such a file into an [`IndicatorTable`], a sparse
//! long-form store keyed by `(region, indicator, year)` in which blank cells
//! are kept as explicit missing values. [`completeness`] measures how many
//! regions carry each `(indicator, year)` pair and [`slice`] extracts the
//! row-complete join used to build model inputs.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("line {line}: duplicate row for region {region:?}, indicator {indicator:?}")]
    DuplicateKey {
        line: u64,
        region: String,
        indicator: String,
    },
    #[error("duplicate record for region {region:?}, indicator {indicator:?}, year {year}")]
    DuplicateRecord {
        region: String,
        indicator: String,
        year: i32,
    },
    #[error("line {line}, column {column} ({header}): cannot parse {value:?} as a finite number")]
    UnparsableCell {
        line: u64,
        column: usize,
        header: String,
        value: String,
    },
    #[error("non-finite value for region {region:?}, indicator {indicator:?}, year {year}")]
    NonFiniteValue {
        region: String,
        indicator: String,
        year: i32,
    },
    #[error("unknown region {0:?}")]
    UnknownRegion(String),
    #[error("unknown indicator {0:?}")]
    UnknownIndicator(String),
    #[error("region subset is empty")]
    EmptyRegionSubset,
    #[error("no region has values for all of {indicators:?} in {year}")]
    EmptyResult { indicators: Vec<String>, year: i32 },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Column layout and parsing rules of a wide CSV export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct WideCsvFormat {
    /// Field separator; must be a single ASCII character.
    pub delimiter: char,
    pub region_column: String,
    pub indicator_column: String,
    /// Strip `,` grouping separators from numeric cells (`"1,234"`).
    pub permissive_numbers: bool,
    /// Drop rows holding unparsable or non-finite cells and skip exact
    /// duplicate rows instead of failing. Each dropped row is reported.
    pub noise_removal: bool,
}

impl Default for WideCsvFormat {
    fn default() -> Self {
        Self {
            delimiter: ',',
            region_column: "Area Name".to_string(),
            indicator_column: "Indicator Name".to_string(),
            permissive_numbers: false,
            noise_removal: false,
        }
    }
}

impl WideCsvFormat {
    fn delimiter_byte(&self) -> Result<u8, IngestError> {
        u8::try_from(self.delimiter)
            .ok()
            .filter(u8::is_ascii)
            .ok_or_else(|| {
                IngestError::MalformedHeader(format!(
                    "delimiter {:?} is not a single ASCII character",
                    self.delimiter
                ))
            })
    }
}

/// One `(region, indicator, year)` entry. `value` is `None` for a blank cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record<'a> {
    pub region: &'a str,
    pub indicator: &'a str,
    pub year: i32,
    pub value: Option<f64>,
}

/// Sparse store of indicator measurements.
///
/// Region and indicator lists keep first-appearance order; years are sorted.
/// All three lists contain exactly the keys present in the records. The table
/// is immutable once built.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IndicatorTable {
    regions: Vec<String>,
    indicators: Vec<String>,
    years: Vec<i32>,
    region_index: HashMap<String, usize>,
    indicator_index: HashMap<String, usize>,
    cells: BTreeMap<(usize, usize, i32), Option<f64>>,
}

impl IndicatorTable {
    pub fn builder() -> TableBuilder {
        TableBuilder::default()
    }

    /// Builds a table from loose records; duplicate keys are rejected.
    pub fn from_records<I, R, S>(records: I) -> Result<Self, IngestError>
    where
        I: IntoIterator<Item = (R, S, i32, Option<f64>)>,
        R: AsRef<str>,
        S: AsRef<str>,
    {
        let mut builder = Self::builder();
        for (region, indicator, year, value) in records {
            builder.insert(region.as_ref(), indicator.as_ref(), year, value)?;
        }
        Ok(builder.finish())
    }

    pub fn regions(&self) -> &[String] {
        &self.regions
    }

    pub fn indicators(&self) -> &[String] {
        &self.indicators
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    /// Number of records, missing ones included.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn non_missing_count(&self) -> usize {
        self.cells.values().filter(|v| v.is_some()).count()
    }

    pub fn has_region(&self, region: &str) -> bool {
        self.region_index.contains_key(region)
    }

    pub fn has_indicator(&self, indicator: &str) -> bool {
        self.indicator_index.contains_key(indicator)
    }

    /// `None` when the record is absent, `Some(None)` when it is a blank cell.
    pub fn record(&self, region: &str, indicator: &str, year: i32) -> Option<Option<f64>> {
        let r = *self.region_index.get(region)?;
        let i = *self.indicator_index.get(indicator)?;
        self.cells.get(&(r, i, year)).copied()
    }

    /// The measured value, if there is one.
    pub fn value(&self, region: &str, indicator: &str, year: i32) -> Option<f64> {
        self.record(region, indicator, year).flatten()
    }

    /// Records ordered by region, then indicator (first-appearance order), then year.
    pub fn records(&self) -> impl Iterator<Item = Record<'_>> + '_ {
        self.cells
            .iter()
            .map(move |(&(r, i, year), &value)| Record {
                region: &self.regions[r],
                indicator: &self.indicators[i],
                year,
                value,
            })
    }
}

/// Incremental constructor for [`IndicatorTable`].
#[derive(Debug, Default)]
pub struct TableBuilder {
    table: IndicatorTable,
}

impl TableBuilder {
    pub fn insert(
        &mut self,
        region: &str,
        indicator: &str,
        year: i32,
        value: Option<f64>,
    ) -> Result<(), IngestError> {
        if value.is_some_and(|v| !v.is_finite()) {
            return Err(IngestError::NonFiniteValue {
                region: region.to_string(),
                indicator: indicator.to_string(),
                year,
            });
        }
        let t = &mut self.table;
        let r = intern(&mut t.regions, &mut t.region_index, region);
        let i = intern(&mut t.indicators, &mut t.indicator_index, indicator);
        if t.cells.insert((r, i, year), value).is_some() {
            return Err(IngestError::DuplicateRecord {
                region: region.to_string(),
                indicator: indicator.to_string(),
                year,
            });
        }
        Ok(())
    }

    pub fn finish(mut self) -> IndicatorTable {
        let years: BTreeSet<i32> = self.table.cells.keys().map(|&(_, _, y)| y).collect();
        self.table.years = years.into_iter().collect();
        self.table
    }
}

fn intern(names: &mut Vec<String>, index: &mut HashMap<String, usize>, name: &str) -> usize {
    if let Some(&i) = index.get(name) {
        return i;
    }
    names.push(name.to_string());
    index.insert(name.to_string(), names.len() - 1);
    names.len() - 1
}

/// Rows skipped while parsing with [`WideCsvFormat::noise_removal`] enabled.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseReport {
    pub dropped_rows: Vec<DroppedRow>,
    /// Lines that repeated an earlier row exactly.
    pub duplicate_lines: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedRow {
    pub line: u64,
    pub reason: String,
}

/// Parses a wide CSV export. Blank and whitespace-only cells become missing
/// values; region and indicator names are trimmed.
pub fn parse_wide_csv<R: Read>(
    source: R,
    format: &WideCsvFormat,
) -> Result<IndicatorTable, IngestError> {
    parse_wide_csv_report(source, format).map(|(table, _)| table)
}

/// Same as [`parse_wide_csv`], also returning what noise removal discarded.
pub fn parse_wide_csv_report<R: Read>(
    source: R,
    format: &WideCsvFormat,
) -> Result<(IndicatorTable, NoiseReport), IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter_byte()?)
        .has_headers(false)
        .flexible(true)
        .from_reader(source);

    let mut records = reader.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(IngestError::MalformedHeader("input is empty".into())),
    };
    let layout = HeaderLayout::parse(&header, format)?;

    let mut builder = IndicatorTable::builder();
    let mut report = NoiseReport::default();
    let mut seen_rows: HashMap<(String, String), Vec<Option<f64>>> = HashMap::new();

    for row in records {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let parsed = match layout.parse_row(&row, line, format) {
            Ok(p) => p,
            Err(e) if format.noise_removal && is_noise(&e) => {
                report.dropped_rows.push(DroppedRow {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
            Err(e) => return Err(e),
        };

        let key = (parsed.region, parsed.indicator);
        if let Some(previous) = seen_rows.get(&key) {
            if format.noise_removal && same_cells(previous, &parsed.values) {
                report.duplicate_lines.push(line);
                continue;
            }
            return Err(IngestError::DuplicateKey {
                line,
                region: key.0,
                indicator: key.1,
            });
        }
        for (&year, &value) in layout.years.iter().map(|(_, y)| y).zip(&parsed.values) {
            builder.insert(&key.0, &key.1, year, value)?;
        }
        seen_rows.insert(key, parsed.values);
    }
    Ok((builder.finish(), report))
}

fn is_noise(e: &IngestError) -> bool {
    matches!(
        e,
        IngestError::UnparsableCell { .. } | IngestError::MalformedRow { .. }
    )
}

fn same_cells(a: &[Option<f64>], b: &[Option<f64>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (Some(x), Some(y)) => x.to_bits() == y.to_bits(),
            (None, None) => true,
            _ => false,
        })
}

struct HeaderLayout {
    region: usize,
    indicator: usize,
    /// (column index, year)
    years: Vec<(usize, i32)>,
    names: Vec<String>,
}

struct ParsedRow {
    region: String,
    indicator: String,
    values: Vec<Option<f64>>,
}

impl HeaderLayout {
    fn parse(header: &csv::StringRecord, format: &WideCsvFormat) -> Result<Self, IngestError> {
        let names: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
        let find = |wanted: &str| names.iter().position(|n| n == wanted);
        let region = find(&format.region_column).ok_or_else(|| {
            IngestError::MalformedHeader(format!("no {:?} column", format.region_column))
        })?;
        let indicator = find(&format.indicator_column).ok_or_else(|| {
            IngestError::MalformedHeader(format!("no {:?} column", format.indicator_column))
        })?;

        let mut years = Vec::new();
        let mut seen = HashSet::new();
        for (col, name) in names.iter().enumerate() {
            if col == region || col == indicator {
                continue;
            }
            // Columns that are not years (codes, units, notes) are ignored.
            if let Ok(year) = name.parse::<i32>() {
                if !seen.insert(year) {
                    return Err(IngestError::MalformedHeader(format!(
                        "year column {year} appears twice"
                    )));
                }
                years.push((col, year));
            }
        }
        if years.is_empty() {
            return Err(IngestError::MalformedHeader("no year columns".into()));
        }
        Ok(Self {
            region,
            indicator,
            years,
            names,
        })
    }

    fn parse_row(
        &self,
        row: &csv::StringRecord,
        line: u64,
        format: &WideCsvFormat,
    ) -> Result<ParsedRow, IngestError> {
        if let Some((col, _)) = row
            .iter()
            .enumerate()
            .skip(self.names.len())
            .find(|(_, f)| !f.trim().is_empty())
        {
            return Err(IngestError::MalformedRow {
                line,
                message: format!(
                    "{} fields but header has {} (extra value in column {})",
                    row.len(),
                    self.names.len(),
                    col + 1
                ),
            });
        }
        let field = |col: usize| row.get(col).unwrap_or("");
        let region = field(self.region).trim();
        let indicator = field(self.indicator).trim();
        if region.is_empty() || indicator.is_empty() {
            return Err(IngestError::MalformedRow {
                line,
                message: "blank region or indicator name".into(),
            });
        }
        let values = self
            .years
            .iter()
            .map(|&(col, _)| {
                parse_cell(field(col), format.permissive_numbers).ok_or_else(|| {
                    IngestError::UnparsableCell {
                        line,
                        column: col + 1,
                        header: self.names[col].clone(),
                        value: field(col).to_string(),
                    }
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ParsedRow {
            region: region.to_string(),
            indicator: indicator.to_string(),
            values,
        })
    }
}

/// `Some(None)` for a blank cell, `Some(Some(v))` for a finite number and
/// `None` for anything else.
fn parse_cell(raw: &str, permissive: bool) -> Option<Option<f64>> {
    let text = raw.trim();
    if text.is_empty() {
        return Some(None);
    }
    let value = if permissive && text.contains(',') {
        text.replace(',', "").parse::<f64>()
    } else {
        text.parse::<f64>()
    };
    match value {
        Ok(v) if v.is_finite() => Some(Some(v)),
        _ => None,
    }
}

/// Writes `table` back in wide form. Absent records and missing values both
/// come out as blank cells.
pub fn write_wide_csv<W: Write>(
    table: &IndicatorTable,
    sink: W,
    format: &WideCsvFormat,
) -> Result<(), IngestError> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(format.delimiter_byte()?)
        .from_writer(sink);
    let mut header = vec![
        format.region_column.clone(),
        format.indicator_column.clone(),
    ];
    header.extend(table.years.iter().map(i32::to_string));
    writer.write_record(&header)?;

    let pairs: BTreeSet<(usize, usize)> = table.cells.keys().map(|&(r, i, _)| (r, i)).collect();
    for (r, i) in pairs {
        let mut row = vec![table.regions[r].clone(), table.indicators[i].clone()];
        for &year in &table.years {
            row.push(match table.cells.get(&(r, i, year)) {
                Some(Some(v)) => v.to_string(),
                _ => String::new(),
            });
        }
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Coverage of one `(indicator, year)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessEntry {
    pub indicator: String,
    pub year: i32,
    /// Regions under consideration with a measured value.
    pub covered: usize,
    pub considered: usize,
    pub coverage: f64,
    pub complete: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub entries: Vec<CompletenessEntry>,
}

impl CompletenessReport {
    pub fn complete_pairs(&self) -> impl Iterator<Item = (&str, i32)> + '_ {
        self.entries
            .iter()
            .filter(|e| e.complete)
            .map(|e| (e.indicator.as_str(), e.year))
    }

    /// `indicator,year,coverage,complete`
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<(), IngestError> {
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(["indicator", "year", "coverage", "complete"])?;
        for e in &self.entries {
            writer.write_record([
                e.indicator.clone(),
                e.year.to_string(),
                e.coverage.to_string(),
                e.complete.to_string(),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Fraction of regions holding a value for each `(indicator, year)` pair that
/// appears in the table. `regions` restricts the denominator to a subset.
/// Entries are sorted by indicator name, then year.
pub fn completeness(
    table: &IndicatorTable,
    regions: Option<&[String]>,
) -> Result<CompletenessReport, IngestError> {
    let considered: Vec<usize> = match regions {
        None => (0..table.regions.len()).collect(),
        Some([]) => return Err(IngestError::EmptyRegionSubset),
        Some(subset) => {
            let mut ids = BTreeSet::new();
            for name in subset {
                let id = table
                    .region_index
                    .get(name)
                    .ok_or_else(|| IngestError::UnknownRegion(name.clone()))?;
                ids.insert(*id);
            }
            ids.into_iter().collect()
        }
    };
    let considered_set: HashSet<usize> = considered.iter().copied().collect();

    // (indicator, year) -> covered count among considered regions
    let mut counts: BTreeMap<(&str, i32), usize> = BTreeMap::new();
    for (&(r, i, year), value) in &table.cells {
        let slot = counts.entry((&table.indicators[i], year)).or_insert(0);
        if value.is_some() && considered_set.contains(&r) {
            *slot += 1;
        }
    }

    let n = considered.len();
    let entries = counts
        .into_iter()
        .map(|((indicator, year), covered)| CompletenessEntry {
            indicator: indicator.to_string(),
            year,
            covered,
            considered: n,
            coverage: covered as f64 / n as f64,
            complete: covered == n,
        })
        .collect();
    Ok(CompletenessReport { entries })
}

/// One region of a [`slice`], values in requested indicator order.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceRow {
    pub region: String,
    pub values: Vec<f64>,
}

/// Row-complete join: the regions having a value for every requested
/// indicator in `year`, in table region order.
pub fn slice<S: AsRef<str>>(
    table: &IndicatorTable,
    indicators: &[S],
    year: i32,
) -> Result<Vec<SliceRow>, IngestError> {
    let ids = indicators
        .iter()
        .map(|name| {
            table
                .indicator_index
                .get(name.as_ref())
                .copied()
                .ok_or_else(|| IngestError::UnknownIndicator(name.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let rows: Vec<SliceRow> = table
        .regions
        .iter()
        .enumerate()
        .filter_map(|(r, region)| {
            let values = ids
                .iter()
                .map(|&i| table.cells.get(&(r, i, year)).copied().flatten())
                .collect::<Option<Vec<f64>>>()?;
            Some(SliceRow {
                region: region.clone(),
                values,
            })
        })
        .collect();

    if rows.is_empty() {
        return Err(IngestError::EmptyResult {
            indicators: indicators.iter().map(|s| s.as_ref().to_string()).collect(),
            year,
        });
    }
    Ok(rows)
}
