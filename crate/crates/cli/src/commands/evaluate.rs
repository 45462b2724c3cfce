use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use hdi_core::eval::{
    format_percent, metrics, reconcile, ConfusionMatrix, DisplayOrder, Metrics, Reconciliation,
    StatedTotals,
};
use hdi_core::features::HdiCategory;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::output::{open, Console, OutDir};

#[derive(Serialize)]
struct EvaluationReport {
    confusion: ConfusionMatrix,
    metrics: Metrics,
    prediction_error: String,
    reconciliation: Option<Reconciliation>,
}

pub struct Options {
    pub order: DisplayOrder,
    pub show_empty: bool,
    pub stated: Option<StatedTotals>,
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    Ok(csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(open(path)?))
}

fn column(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::in_file(path, format!("missing column {name:?}")))
}

fn category(value: &str, path: &Path, line: u64) -> Result<HdiCategory> {
    value
        .parse()
        .map_err(|_| CliError::in_file(path, format!("line {line}: unknown category {value:?}")))
}

/// Category per region from a two-column CSV.
fn read_categories(path: &Path, value_column: &str) -> Result<Vec<(String, HdiCategory)>> {
    let mut r = reader(path)?;
    let headers = r.headers().map_err(|e| CliError::in_file(path, e))?.clone();
    let (rc, vc) = (
        column(&headers, "region", path)?,
        column(&headers, value_column, path)?,
    );
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| CliError::in_file(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push((record[rc].to_string(), category(&record[vc], path, line)?));
    }
    Ok(rows)
}

pub fn from_pairs(path: &Path) -> Result<ConfusionMatrix> {
    let mut r = reader(path)?;
    let headers = r.headers().map_err(|e| CliError::in_file(path, e))?.clone();
    let (ac, pc) = (
        column(&headers, "actual", path)?,
        column(&headers, "predicted", path)?,
    );
    let mut m = ConfusionMatrix::default();
    for record in r.records() {
        let record = record.map_err(|e| CliError::in_file(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        m.add(
            category(&record[ac], path, line)?,
            category(&record[pc], path, line)?,
            1,
        );
    }
    Ok(m)
}

/// Joins predictions to labels by region; both files must cover the same regions.
pub fn from_predictions(predictions: &Path, labels: &Path) -> Result<ConfusionMatrix> {
    let predicted: HashMap<String, HdiCategory> =
        read_categories(predictions, "predicted_category")?
            .into_iter()
            .collect();
    let actual = read_categories(labels, "actual_category")?;
    if actual.len() != predicted.len() {
        return Err(CliError::Data(format!(
            "{} labels but {} predictions",
            actual.len(),
            predicted.len()
        )));
    }
    let mut m = ConfusionMatrix::default();
    for (region, a) in &actual {
        let p = predicted
            .get(region)
            .ok_or_else(|| CliError::Data(format!("no prediction for region {region:?}")))?;
        m.add(*a, *p, 1);
    }
    Ok(m)
}

pub fn from_matrix(path: &Path) -> Result<ConfusionMatrix> {
    let mut r = reader(path)?;
    let headers = r.headers().map_err(|e| CliError::in_file(path, e))?.clone();
    if headers.get(0) != Some("actual") {
        return Err(CliError::in_file(path, "first column must be \"actual\""));
    }
    let predicted = headers
        .iter()
        .skip(1)
        .map(|h| category(h, path, 1))
        .collect::<Result<Vec<_>>>()?;
    let mut m = ConfusionMatrix::default();
    for record in r.records() {
        let record = record.map_err(|e| CliError::in_file(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let actual = category(&record[0], path, line)?;
        for (p, cell) in predicted.iter().zip(record.iter().skip(1)) {
            let n: u64 = cell.parse().map_err(|_| {
                CliError::in_file(path, format!("line {line}: {cell:?} is not a count"))
            })?;
            m.add(actual, *p, n);
        }
    }
    Ok(m)
}

fn ratio(value: f64, undefined: bool) -> String {
    if undefined {
        "n/a".to_string()
    } else {
        format!("{value:.4}")
    }
}

fn render(matrix: &ConfusionMatrix, report: &EvaluationReport, options: &Options) -> String {
    let m = &report.metrics;
    let mut text = matrix.render_text(options.order, !options.show_empty);
    text.push('\n');
    let _ = writeln!(text, "total: {}", m.total);
    let _ = writeln!(text, "correct: {}", m.correct);
    let _ = writeln!(text, "accuracy: {:.4}", m.accuracy);
    let _ = writeln!(text, "prediction error: {}", report.prediction_error);
    text.push_str("\nclass      support  predicted  precision  recall\n");
    for c in &m.per_class {
        let _ = writeln!(
            text,
            "{:<9}  {:>7}  {:>9}  {:>9}  {:>6}",
            c.class.name(),
            c.support,
            c.predicted,
            ratio(c.precision, c.precision_undefined),
            ratio(c.recall, c.recall_undefined)
        );
    }
    if let Some(r) = &report.reconciliation {
        let _ = writeln!(
            text,
            "\nstated: {} correct of {}, prediction error {}",
            r.stated.correct,
            r.stated.total,
            format_percent(r.stated_error_percent)
        );
        let _ = writeln!(
            text,
            "matrix: {} correct of {}, prediction error {}",
            r.matrix_correct,
            r.matrix_total,
            format_percent(r.matrix_error_percent)
        );
        if r.consistent {
            text.push_str("stated totals agree with the matrix\n");
        } else {
            for note in &r.notes {
                let _ = writeln!(text, "discrepancy: {note}");
            }
            text.push_str("all derived metrics above use the matrix counts\n");
        }
    }
    text
}

pub fn run(
    matrix: &ConfusionMatrix,
    options: &Options,
    out: &OutDir,
    console: &mut Console,
) -> Result<()> {
    if matrix.total() == 0 {
        return Err(CliError::Data("no rows to evaluate".into()));
    }
    let m = metrics(matrix);
    let report = EvaluationReport {
        confusion: matrix.clone(),
        prediction_error: format_percent(m.prediction_error_percent),
        metrics: m,
        reconciliation: options.stated.map(|s| reconcile(matrix, s)),
    };
    out.write_with("confusion.csv", |buf| {
        matrix.write_csv(buf, options.order, false)
    })?;
    let text = render(matrix, &report, options);
    out.write_text("evaluation.txt", &text)?;
    out.write_json("metrics.json", &report)?;
    console.say(format_args!("{}", text.trim_end()));
    if report
        .reconciliation
        .as_ref()
        .is_some_and(|r| !r.consistent)
    {
        console.warn(format_args!(
            "stated totals disagree with the confusion matrix"
        ));
    }
    Ok(())
}
