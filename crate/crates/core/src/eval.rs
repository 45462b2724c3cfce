//! Confusion matrices and agreement measures.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::HdiCategory;
use crate::kmeans::{ClusterModel, KMeansError, Point};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{left} actual labels but {right} predictions")]
    LengthMismatch { left: usize, right: usize },
    #[error("no rows to evaluate")]
    EmptyInput,
    #[error(transparent)]
    KMeans(#[from] KMeansError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const N: usize = HdiCategory::COUNT;

/// Counts over the four HDI categories. Rows are actual classes, columns
/// predicted classes, both in `Low, Medium, High, VeryHigh` order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: [[u64; N]; N],
}

/// Order in which categories are displayed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisplayOrder {
    /// Low first.
    #[default]
    Ascending,
    /// Very High first.
    Descending,
}

impl DisplayOrder {
    pub fn classes(self) -> [HdiCategory; N] {
        let mut all = HdiCategory::ALL;
        if self == Self::Descending {
            all.reverse();
        }
        all
    }
}

impl ConfusionMatrix {
    pub fn from_counts(counts: [[u64; N]; N]) -> Self {
        Self { counts }
    }

    pub fn add(&mut self, actual: HdiCategory, predicted: HdiCategory, count: u64) {
        self.counts[actual.index()][predicted.index()] += count;
    }

    pub fn counts(&self) -> &[[u64; N]; N] {
        &self.counts
    }

    pub fn count(&self, actual: HdiCategory, predicted: HdiCategory) -> u64 {
        self.counts[actual.index()][predicted.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..N).map(|i| self.counts[i][i]).sum()
    }

    /// `trace / total`; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            t => self.trace() as f64 / t as f64,
        }
    }

    pub fn prediction_error_percent(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            t => 100.0 * (t - self.trace()) as f64 / t as f64,
        }
    }

    /// Per actual class.
    pub fn row_sums(&self) -> [u64; N] {
        self.counts.map(|row| row.iter().sum())
    }

    /// Per predicted class.
    pub fn column_sums(&self) -> [u64; N] {
        let mut out = [0; N];
        for row in &self.counts {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }

    /// Classes with at least one actual or predicted row, in `order`.
    pub fn observed_classes(&self, order: DisplayOrder) -> Vec<HdiCategory> {
        let (rows, cols) = (self.row_sums(), self.column_sums());
        order
            .classes()
            .into_iter()
            .filter(|c| rows[c.index()] + cols[c.index()] > 0)
            .collect()
    }

    fn shown(&self, order: DisplayOrder, elide_empty: bool) -> Vec<HdiCategory> {
        if elide_empty {
            self.observed_classes(order)
        } else {
            order.classes().to_vec()
        }
    }

    /// Aligned text table, actual classes down the side.
    pub fn render_text(&self, order: DisplayOrder, elide_empty: bool) -> String {
        let classes = self.shown(order, elide_empty);
        let corner = "actual \\ predicted";
        let label_w = classes
            .iter()
            .map(|c| c.name().len())
            .chain([corner.len()])
            .max()
            .unwrap_or(0);
        let widths: Vec<usize> = classes
            .iter()
            .map(|&p| {
                classes
                    .iter()
                    .map(|&a| self.count(a, p).to_string().len())
                    .chain([p.name().len()])
                    .max()
                    .unwrap_or(1)
            })
            .collect();

        let mut out = String::new();
        let _ = write!(out, "{corner:<label_w$}");
        for (c, w) in classes.iter().zip(&widths) {
            let _ = write!(out, "  {:>w$}", c.name());
        }
        out.push('\n');
        for &a in &classes {
            let _ = write!(out, "{:<label_w$}", a.name());
            for (&p, w) in classes.iter().zip(&widths) {
                let _ = write!(out, "  {:>w$}", self.count(a, p));
            }
            out.push('\n');
        }
        out
    }

    /// `actual,<class>...` header followed by one row per actual class.
    pub fn write_csv<W: Write>(
        &self,
        mut sink: W,
        order: DisplayOrder,
        elide_empty: bool,
    ) -> std::io::Result<()> {
        let classes = self.shown(order, elide_empty);
        let names: Vec<&str> = classes.iter().map(|c| c.name()).collect();
        writeln!(sink, "actual,{}", names.join(","))?;
        for &a in &classes {
            let row: Vec<String> = classes
                .iter()
                .map(|&p| self.count(a, p).to_string())
                .collect();
            writeln!(sink, "{},{}", a.name(), row.join(","))?;
        }
        Ok(())
    }
}

pub fn confusion(
    actual: &[HdiCategory],
    predicted: &[HdiCategory],
) -> Result<ConfusionMatrix, EvalError> {
    if actual.len() != predicted.len() {
        return Err(EvalError::LengthMismatch {
            left: actual.len(),
            right: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut m = ConfusionMatrix::default();
    for (&a, &p) in actual.iter().zip(predicted) {
        m.add(a, p, 1);
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: HdiCategory,
    /// Rows whose actual class is `class`.
    pub support: u64,
    /// Rows predicted as `class`.
    pub predicted: u64,
    pub precision: f64,
    pub recall: f64,
    /// Precision was 0/0 and reported as 0.
    pub precision_undefined: bool,
    /// Recall was 0/0 and reported as 0.
    pub recall_undefined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub total: u64,
    pub correct: u64,
    pub accuracy: f64,
    pub prediction_error_percent: f64,
    pub per_class: Vec<ClassMetrics>,
}

pub fn metrics(matrix: &ConfusionMatrix) -> Metrics {
    let (rows, cols) = (matrix.row_sums(), matrix.column_sums());
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            (0.0, true)
        } else {
            (num as f64 / den as f64, false)
        }
    };
    let per_class = HdiCategory::ALL
        .iter()
        .map(|&c| {
            let i = c.index();
            let hits = matrix.counts[i][i];
            let (precision, precision_undefined) = ratio(hits, cols[i]);
            let (recall, recall_undefined) = ratio(hits, rows[i]);
            ClassMetrics {
                class: c,
                support: rows[i],
                predicted: cols[i],
                precision,
                recall,
                precision_undefined,
                recall_undefined,
            }
        })
        .collect();
    Metrics {
        total: matrix.total(),
        correct: matrix.trace(),
        accuracy: matrix.accuracy(),
        prediction_error_percent: matrix.prediction_error_percent(),
        per_class,
    }
}

/// Two-decimal percentage, e.g. `9.09%`.
pub fn format_percent(value: f64) -> String {
    format!("{value:.2}%")
}

/// Totals stated alongside a matrix, e.g. in a written report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatedTotals {
    pub total: u64,
    pub correct: u64,
}

impl StatedTotals {
    pub fn prediction_error_percent(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * (self.total - self.correct.min(self.total)) as f64 / self.total as f64
        }
    }
}

/// Both error computations side by side. The matrix is authoritative for
/// every derived metric; this only records whether the stated totals agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconciliation {
    pub stated: StatedTotals,
    pub stated_error_percent: f64,
    pub matrix_total: u64,
    pub matrix_correct: u64,
    pub matrix_error_percent: f64,
    pub consistent: bool,
    pub notes: Vec<String>,
}

pub fn reconcile(matrix: &ConfusionMatrix, stated: StatedTotals) -> Reconciliation {
    let mut notes = Vec::new();
    if stated.total != matrix.total() {
        notes.push(format!(
            "stated total {} differs from matrix total {}",
            stated.total,
            matrix.total()
        ));
    }
    if stated.correct != matrix.trace() {
        notes.push(format!(
            "stated correct count {} differs from matrix trace {}",
            stated.correct,
            matrix.trace()
        ));
    }
    Reconciliation {
        stated,
        stated_error_percent: stated.prediction_error_percent(),
        matrix_total: matrix.total(),
        matrix_correct: matrix.trace(),
        matrix_error_percent: matrix.prediction_error_percent(),
        consistent: notes.is_empty(),
        notes,
    }
}

/// Fraction of `points` whose nearest centroid equals `reference`.
pub fn cluster_assignment_check(
    model: &ClusterModel,
    points: &[Point],
    reference: &[usize],
) -> Result<f64, EvalError> {
    if points.len() != reference.len() {
        return Err(EvalError::LengthMismatch {
            left: reference.len(),
            right: points.len(),
        });
    }
    if points.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut hits = 0usize;
    for (&p, &r) in points.iter().zip(reference) {
        if model.assign(p)? == r {
            hits += 1;
        }
    }
    Ok(hits as f64 / points.len() as f64)
}

fn pairs(n: u64) -> f64 {
    (n as f64) * (n as f64 - 1.0) / 2.0
}

/// Adjusted Rand index between two labelings of the same rows. Returns 1.0
/// when both labelings are trivial in the same way (the index is 0/0).
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&n| pairs(n)).sum();
    let sum_a: f64 = rows.values().map(|&n| pairs(n)).sum();
    let sum_b: f64 = cols.values().map(|&n| pairs(n)).sum();
    let expected = sum_a * sum_b / pairs(a.len() as u64);
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}
