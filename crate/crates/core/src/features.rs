//! Model inputs built from an [`IndicatorTable`].
//!
//! The classification dataset pairs five predictors (GDP, population in
//! poverty, internet users, labor force, population) with the HDI category of
//! the same region and year. The clustering dataset is the raw `(HDI, GDP)`
//! plane.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{self, IndicatorTable, IngestError};
use crate::matrix::Matrix;
use crate::rng;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("non-finite input {0}")]
    NonFiniteInput(f64),
    #[error("category thresholds must be finite and strictly increasing, got {0:?}")]
    InvalidThresholds([f64; 3]),
    #[error("indicator {0:?} not found in table")]
    MissingIndicator(String),
    #[error("no region has complete data for {year}")]
    EmptyResult { year: i32 },
    #[error("dataset has {0} rows, need at least 2 to split")]
    TooSmall(usize),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("expected {expected} feature columns, got {actual}")]
    ColumnMismatch { expected: usize, actual: usize },
    #[error("{rows} rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("unknown HDI category {0:?}")]
    UnknownCategory(String),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// UNDP human development band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HdiCategory {
    Low,
    Medium,
    High,
    VeryHigh,
}

impl HdiCategory {
    pub const ALL: [HdiCategory; 4] = [Self::Low, Self::Medium, Self::High, Self::VeryHigh];
    pub const COUNT: usize = 4;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Low => "Low",
            Self::Medium => "Medium",
            Self::High => "High",
            Self::VeryHigh => "VeryHigh",
        }
    }
}

impl fmt::Display for HdiCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HdiCategory {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        let key = key.strip_suffix("hdi").unwrap_or(&key);
        match key {
            "low" => Ok(Self::Low),
            "medium" => Ok(Self::Medium),
            "high" => Ok(Self::High),
            "veryhigh" => Ok(Self::VeryHigh),
            _ => Err(FeatureError::UnknownCategory(s.to_string())),
        }
    }
}

/// Lower bounds of the Medium, High and Very High bands on the 0-100 scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoryThresholds {
    medium: f64,
    high: f64,
    very_high: f64,
}

impl Default for CategoryThresholds {
    fn default() -> Self {
        Self {
            medium: 60.0,
            high: 70.0,
            very_high: 80.0,
        }
    }
}

impl CategoryThresholds {
    pub fn new(medium: f64, high: f64, very_high: f64) -> Result<Self, FeatureError> {
        let t = Self {
            medium,
            high,
            very_high,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        let all = [self.medium, self.high, self.very_high];
        if all.iter().all(|v| v.is_finite())
            && self.medium < self.high
            && self.high < self.very_high
        {
            Ok(())
        } else {
            Err(FeatureError::InvalidThresholds(all))
        }
    }

    pub fn medium(&self) -> f64 {
        self.medium
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn very_high(&self) -> f64 {
        self.very_high
    }
}

/// Maps an HDI value to its band. Bounds are lower-inclusive.
pub fn categorize(hdi: f64, thresholds: &CategoryThresholds) -> Result<HdiCategory, FeatureError> {
    if !hdi.is_finite() {
        return Err(FeatureError::NonFiniteInput(hdi));
    }
    Ok(if hdi < thresholds.medium {
        HdiCategory::Low
    } else if hdi < thresholds.high {
        HdiCategory::Medium
    } else if hdi < thresholds.very_high {
        HdiCategory::High
    } else {
        HdiCategory::VeryHigh
    })
}

/// The five classification inputs, in column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predictor {
    Gdp,
    PopulationInPoverty,
    InternetUsers,
    Labors,
    Population,
}

impl Predictor {
    pub const ALL: [Predictor; 5] = [
        Self::Gdp,
        Self::PopulationInPoverty,
        Self::InternetUsers,
        Self::Labors,
        Self::Population,
    ];

    /// Short column name used in dataset files.
    pub fn code(self) -> &'static str {
        match self {
            Self::Gdp => "gdp",
            Self::PopulationInPoverty => "npp",
            Self::InternetUsers => "niu",
            Self::Labors => "nl",
            Self::Population => "np",
        }
    }
}

pub const PREDICTOR_COUNT: usize = Predictor::ALL.len();

/// Source indicator names for the six logical variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct IndicatorMap {
    pub hdi: String,
    pub gdp: String,
    pub npp: String,
    pub niu: String,
    pub nl: String,
    pub np: String,
}

impl Default for IndicatorMap {
    fn default() -> Self {
        Self {
            hdi: "Human Development Index".into(),
            gdp: "Gross Domestic Product".into(),
            npp: "Number of Population in Poverty".into(),
            niu: "Number of Internet Users".into(),
            nl: "Number of Labors".into(),
            np: "Number of Population".into(),
        }
    }
}

impl IndicatorMap {
    pub fn predictor(&self, p: Predictor) -> &str {
        match p {
            Predictor::Gdp => &self.gdp,
            Predictor::PopulationInPoverty => &self.npp,
            Predictor::InternetUsers => &self.niu,
            Predictor::Labors => &self.nl,
            Predictor::Population => &self.np,
        }
    }

    /// HDI followed by the predictors in column order.
    pub fn classification_indicators(&self) -> Vec<&str> {
        std::iter::once(self.hdi.as_str())
            .chain(Predictor::ALL.iter().map(|&p| self.predictor(p)))
            .collect()
    }
}

/// Scale of HDI values in the source. `Unit` (0-1) values are multiplied by 100.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HdiScale {
    #[default]
    Percent,
    Unit,
}

impl HdiScale {
    pub fn to_percent(self, hdi: f64) -> f64 {
        match self {
            Self::Percent => hdi,
            Self::Unit => hdi * 100.0,
        }
    }
}

/// How source indicators become model variables.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetSpec {
    pub indicators: IndicatorMap,
    pub thresholds: CategoryThresholds,
    pub hdi_scale: HdiScale,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingMethod {
    None,
    #[default]
    MinMax,
    ZScore,
}

/// Fitted parameters of one column. Constant columns map to 0.0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnScaling {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub std_dev: f64,
}

impl ColumnScaling {
    fn fit(values: &[f64]) -> Self {
        let n = values.len().max(1) as f64;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        if values.is_empty() {
            return Self {
                min: 0.0,
                max: 0.0,
                mean: 0.0,
                std_dev: 0.0,
            };
        }
        Self {
            min,
            max,
            mean,
            std_dev: var.sqrt(),
        }
    }
}

/// Per-column scaling fitted on one matrix and reusable on others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub method: ScalingMethod,
    pub columns: Vec<ColumnScaling>,
}

impl Scaler {
    pub fn fit(method: ScalingMethod, data: &Matrix) -> Self {
        let columns = (0..data.cols())
            .map(|c| ColumnScaling::fit(&data.column(c)))
            .collect();
        Self { method, columns }
    }

    pub fn dims(&self) -> usize {
        self.columns.len()
    }

    fn forward(&self, c: usize, v: f64) -> f64 {
        let s = &self.columns[c];
        match self.method {
            ScalingMethod::None => v,
            ScalingMethod::MinMax if s.max > s.min => (v - s.min) / (s.max - s.min),
            ScalingMethod::ZScore if s.std_dev > 0.0 => (v - s.mean) / s.std_dev,
            _ => 0.0,
        }
    }

    fn backward(&self, c: usize, v: f64) -> f64 {
        let s = &self.columns[c];
        match self.method {
            ScalingMethod::None => v,
            ScalingMethod::MinMax if s.max > s.min => v * (s.max - s.min) + s.min,
            ScalingMethod::MinMax => s.min,
            ScalingMethod::ZScore if s.std_dev > 0.0 => v * s.std_dev + s.mean,
            ScalingMethod::ZScore => s.mean,
        }
    }

    fn check(&self, cols: usize) -> Result<(), FeatureError> {
        if cols == self.dims() {
            Ok(())
        } else {
            Err(FeatureError::ColumnMismatch {
                expected: self.dims(),
                actual: cols,
            })
        }
    }

    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>, FeatureError> {
        self.check(row.len())?;
        Ok(row
            .iter()
            .enumerate()
            .map(|(c, &v)| self.forward(c, v))
            .collect())
    }

    pub fn transform(&self, data: &Matrix) -> Result<Matrix, FeatureError> {
        self.check(data.cols())?;
        let mut out = data.clone();
        for r in 0..out.rows() {
            for (c, v) in out.row_mut(r).iter_mut().enumerate() {
                *v = self.forward(c, *v);
            }
        }
        Ok(out)
    }

    pub fn inverse_transform(&self, data: &Matrix) -> Result<Matrix, FeatureError> {
        self.check(data.cols())?;
        let mut out = data.clone();
        for r in 0..out.rows() {
            for (c, v) in out.row_mut(r).iter_mut().enumerate() {
                *v = self.backward(c, *v);
            }
        }
        Ok(out)
    }

    /// Columns of `row` that fall outside the fitted `[min, max]` range.
    pub fn out_of_range(&self, row: &[f64]) -> Vec<usize> {
        row.iter()
            .zip(&self.columns)
            .enumerate()
            .filter(|(_, (&v, s))| v < s.min || v > s.max)
            .map(|(c, _)| c)
            .collect()
    }
}

/// Regions with raw and scaled predictors and their HDI category.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub region_ids: Vec<String>,
    /// Unscaled predictors, columns in [`Predictor::ALL`] order.
    pub raw: Matrix,
    /// `raw` after `scaling`; this is what the network sees.
    pub features: Matrix,
    pub labels: Vec<HdiCategory>,
    pub scaling: Scaler,
}

impl LabeledDataset {
    /// Fits `method` on `raw` and scales it.
    pub fn from_raw(
        region_ids: Vec<String>,
        raw: Matrix,
        labels: Vec<HdiCategory>,
        method: ScalingMethod,
    ) -> Result<Self, FeatureError> {
        let scaling = Scaler::fit(method, &raw);
        Self::with_scaler(region_ids, raw, labels, scaling)
    }

    /// Scales `raw` with parameters fitted elsewhere (e.g. a training set).
    pub fn with_scaler(
        region_ids: Vec<String>,
        raw: Matrix,
        labels: Vec<HdiCategory>,
        scaling: Scaler,
    ) -> Result<Self, FeatureError> {
        if raw.rows() != labels.len() || raw.rows() != region_ids.len() {
            return Err(FeatureError::LengthMismatch {
                rows: raw.rows(),
                labels: labels.len(),
            });
        }
        let features = scaling.transform(&raw)?;
        Ok(Self {
            region_ids,
            raw,
            features,
            labels,
            scaling,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label_indices(&self) -> Vec<usize> {
        self.labels.iter().map(|c| c.index()).collect()
    }

    /// Rows at `indices`, keeping this dataset's scaling.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            region_ids: indices
                .iter()
                .map(|&i| self.region_ids[i].clone())
                .collect(),
            raw: self.raw.select_rows(indices),
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            scaling: self.scaling.clone(),
        }
    }

    /// `region,gdp,npp,niu,nl,np,label` with raw feature values.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<(), FeatureError> {
        let mut w = csv::Writer::from_writer(sink);
        let mut header = vec!["region"];
        header.extend(Predictor::ALL.iter().map(|p| p.code()));
        header.push("label");
        w.write_record(&header)?;
        for (i, region) in self.region_ids.iter().enumerate() {
            let mut row = vec![region.clone()];
            row.extend(self.raw.row(i).iter().map(f64::to_string));
            row.push(self.labels[i].to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Rows read from a dataset CSV. `labels` is present when the file has a
/// `label` column.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRows {
    pub region_ids: Vec<String>,
    pub raw: Matrix,
    pub labels: Option<Vec<HdiCategory>>,
}

impl FeatureRows {
    pub fn into_dataset(self, scaling: ScalingOrFit) -> Result<LabeledDataset, FeatureError> {
        let labels = self.labels.ok_or(FeatureError::Parse {
            line: 1,
            message: "no label column".into(),
        })?;
        match scaling {
            ScalingOrFit::Fit(method) => {
                LabeledDataset::from_raw(self.region_ids, self.raw, labels, method)
            }
            ScalingOrFit::Use(scaler) => {
                LabeledDataset::with_scaler(self.region_ids, self.raw, labels, scaler)
            }
        }
    }
}

pub enum ScalingOrFit {
    Fit(ScalingMethod),
    Use(Scaler),
}

/// Reads the format written by [`LabeledDataset::write_csv`]; the `label`
/// column is optional.
pub fn read_dataset_csv<R: Read>(source: R) -> Result<FeatureRows, FeatureError> {
    let mut reader = csv::Reader::from_reader(source);
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let find = |name: &str| header.iter().position(|h| h == name);
    let missing = |name: &str| FeatureError::Parse {
        line: 1,
        message: format!("missing column {name:?}"),
    };
    let region_col = find("region").ok_or_else(|| missing("region"))?;
    let feature_cols = Predictor::ALL
        .iter()
        .map(|p| find(p.code()).ok_or_else(|| missing(p.code())))
        .collect::<Result<Vec<_>, _>>()?;
    let label_col = find("label");

    let mut region_ids = Vec::new();
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let cell = |c: usize| row.get(c).unwrap_or("").trim();
        region_ids.push(cell(region_col).to_string());
        for &c in &feature_cols {
            let v: f64 = cell(c)
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| FeatureError::Parse {
                    line,
                    message: format!(
                        "column {:?}: {:?} is not a finite number",
                        header[c],
                        cell(c)
                    ),
                })?;
            data.push(v);
        }
        if let Some(c) = label_col {
            labels.push(
                cell(c)
                    .parse::<HdiCategory>()
                    .map_err(|_| FeatureError::Parse {
                        line,
                        message: format!("unknown label {:?}", cell(c)),
                    })?,
            );
        }
    }
    let raw = Matrix::from_vec(region_ids.len(), PREDICTOR_COUNT, data)
        .expect("row width fixed by header");
    Ok(FeatureRows {
        region_ids,
        raw,
        labels: label_col.map(|_| labels),
    })
}

fn map_slice_error(e: IngestError, year: i32) -> FeatureError {
    match e {
        IngestError::UnknownIndicator(name) => FeatureError::MissingIndicator(name),
        _ => FeatureError::EmptyResult { year },
    }
}

/// Rows are the regions complete in HDI and all five predictors for `year`.
/// Labels come from unscaled HDI.
pub fn build_classification_dataset(
    table: &IndicatorTable,
    year: i32,
    spec: &DatasetSpec,
    scaling: ScalingMethod,
) -> Result<LabeledDataset, FeatureError> {
    spec.thresholds.validate()?;
    let names = spec.indicators.classification_indicators();
    let rows = ingest::slice(table, &names, year).map_err(|e| map_slice_error(e, year))?;

    let mut region_ids = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    let mut data = Vec::with_capacity(rows.len() * PREDICTOR_COUNT);
    for row in rows {
        let hdi = spec.hdi_scale.to_percent(row.values[0]);
        labels.push(categorize(hdi, &spec.thresholds)?);
        data.extend_from_slice(&row.values[1..]);
        region_ids.push(row.region);
    }
    let raw = Matrix::from_vec(region_ids.len(), PREDICTOR_COUNT, data).expect("slice width");
    LabeledDataset::from_raw(region_ids, raw, labels, scaling)
}

/// Unscaled `(HDI, GDP)` points with their regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringDataset {
    pub region_ids: Vec<String>,
    pub points: Vec<[f64; 2]>,
}

impl ClusteringDataset {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn build_clustering_dataset(
    table: &IndicatorTable,
    year: i32,
    spec: &DatasetSpec,
) -> Result<ClusteringDataset, FeatureError> {
    let names = [spec.indicators.hdi.as_str(), spec.indicators.gdp.as_str()];
    let rows = ingest::slice(table, &names, year).map_err(|e| map_slice_error(e, year))?;
    let (region_ids, points) = rows
        .into_iter()
        .map(|r| {
            (
                r.region,
                [spec.hdi_scale.to_percent(r.values[0]), r.values[1]],
            )
        })
        .unzip();
    Ok(ClusteringDataset { region_ids, points })
}

/// Holdout rule. The test set holds `round(test_fraction * n)` rows, clamped
/// to `[1, n - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            test_fraction: 0.2,
            seed: 0,
            stratified: true,
        }
    }
}

impl SplitSpec {
    pub fn test_size(&self, n: usize) -> Result<usize, FeatureError> {
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(FeatureError::InvalidSplit(format!(
                "test_fraction {} not in (0, 1)",
                self.test_fraction
            )));
        }
        if n < 2 {
            return Err(FeatureError::TooSmall(n));
        }
        let t = (self.test_fraction * n as f64).round() as usize;
        Ok(t.clamp(1, n - 1))
    }
}

/// Row indices of the train and test parts, each in ascending order.
pub fn split_indices(
    labels: &[HdiCategory],
    spec: &SplitSpec,
) -> Result<(Vec<usize>, Vec<usize>), FeatureError> {
    let n = labels.len();
    let target = spec.test_size(n)?;
    let mut rng = rng::seeded(spec.seed);

    let mut test = if spec.stratified {
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); HdiCategory::COUNT];
        for (i, c) in labels.iter().enumerate() {
            groups[c.index()].push(i);
        }
        let quotas = apportion(&groups.iter().map(Vec::len).collect::<Vec<_>>(), target);
        let mut test = Vec::with_capacity(target);
        for (mut group, quota) in groups.into_iter().zip(quotas) {
            group.shuffle(&mut rng);
            test.extend_from_slice(&group[..quota]);
        }
        test
    } else {
        let mut all: Vec<usize> = (0..n).collect();
        all.shuffle(&mut rng);
        all.truncate(target);
        all
    };
    test.sort_unstable();

    let mut in_test = vec![false; n];
    for &i in &test {
        in_test[i] = true;
    }
    let train = (0..n).filter(|&i| !in_test[i]).collect();
    Ok((train, test))
}

/// Largest-remainder apportionment of `total` seats over groups sized `sizes`,
/// proportional to size. Remainder ties go to the lower group index.
fn apportion(sizes: &[usize], total: usize) -> Vec<usize> {
    let n: usize = sizes.iter().sum();
    if n == 0 {
        return vec![0; sizes.len()];
    }
    // exact integer arithmetic: quota_i = total * size_i / n
    let mut seats: Vec<usize> = sizes.iter().map(|&s| total * s / n).collect();
    let mut remainders: Vec<(usize, usize)> = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| (total * s % n, i))
        .collect();
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut left = total - seats.iter().sum::<usize>();
    for (rem, i) in remainders {
        if left == 0 {
            break;
        }
        if rem > 0 {
            seats[i] += 1;
            left -= 1;
        }
    }
    seats
}

/// Seeded train/test partition. Both parts keep the dataset's scaling.
pub fn split(
    dataset: &LabeledDataset,
    spec: &SplitSpec,
) -> Result<(LabeledDataset, LabeledDataset), FeatureError> {
    let (train, test) = split_indices(&dataset.labels, spec)?;
    Ok((dataset.subset(&train), dataset.subset(&test)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> CategoryThresholds {
        CategoryThresholds::default()
    }

    #[test]
    fn cluster_mean_anchors() {
        let t = defaults();
        assert_eq!(categorize(52.30, &t).unwrap(), HdiCategory::Low);
        assert_eq!(categorize(67.80, &t).unwrap(), HdiCategory::Medium);
        assert_eq!(categorize(72.39, &t).unwrap(), HdiCategory::High);
        assert_eq!(categorize(76.82, &t).unwrap(), HdiCategory::High);
    }

    #[test]
    fn bounds_are_lower_inclusive() {
        let t = defaults();
        assert_eq!(categorize(60.0, &t).unwrap(), HdiCategory::Medium);
        assert_eq!(categorize(70.0, &t).unwrap(), HdiCategory::High);
        assert_eq!(categorize(80.0, &t).unwrap(), HdiCategory::VeryHigh);
        assert_eq!(categorize(59.999_999, &t).unwrap(), HdiCategory::Low);
    }

    #[test]
    fn non_finite_hdi() {
        assert!(matches!(
            categorize(f64::NAN, &defaults()),
            Err(FeatureError::NonFiniteInput(_))
        ));
    }

    #[test]
    fn thresholds_must_increase() {
        assert!(CategoryThresholds::new(60.0, 60.0, 80.0).is_err());
        assert!(CategoryThresholds::new(60.0, f64::NAN, 80.0).is_err());
        assert!(CategoryThresholds::new(0.5, 0.6, 0.7).is_ok());
    }

    #[test]
    fn category_names_parse() {
        for c in HdiCategory::ALL {
            assert_eq!(c.name().parse::<HdiCategory>().unwrap(), c);
        }
        assert_eq!(
            "Very High HDI".parse::<HdiCategory>().unwrap(),
            HdiCategory::VeryHigh
        );
        assert!("Huge".parse::<HdiCategory>().is_err());
    }

    fn table(rows: &[(&str, [Option<f64>; 6])]) -> IndicatorTable {
        let map = IndicatorMap::default();
        let names = map.classification_indicators();
        let mut b = IndicatorTable::builder();
        for (region, values) in rows {
            for (name, v) in names.iter().zip(values) {
                b.insert(region, name, 2010, *v).unwrap();
            }
        }
        b.finish()
    }

    #[test]
    fn one_region_labeled_high() {
        let t = table(&[(
            "A",
            [
                Some(76.82),
                Some(1.0),
                Some(2.0),
                Some(3.0),
                Some(4.0),
                Some(5.0),
            ],
        )]);
        let ds =
            build_classification_dataset(&t, 2010, &DatasetSpec::default(), ScalingMethod::MinMax)
                .unwrap();
        assert_eq!(ds.labels, vec![HdiCategory::High]);
        assert_eq!(ds.raw.row(0), &[1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn four_regions_four_bands() {
        let rows: Vec<(String, [Option<f64>; 6])> = [55.0, 65.0, 75.0, 85.0]
            .iter()
            .enumerate()
            .map(|(i, &h)| {
                (
                    format!("R{i}"),
                    [
                        Some(h),
                        Some(i as f64),
                        Some(1.0),
                        Some(1.0),
                        Some(1.0),
                        Some(1.0),
                    ],
                )
            })
            .collect();
        let borrowed: Vec<(&str, [Option<f64>; 6])> =
            rows.iter().map(|(r, v)| (r.as_str(), *v)).collect();
        let ds = build_classification_dataset(
            &table(&borrowed),
            2010,
            &DatasetSpec::default(),
            ScalingMethod::MinMax,
        )
        .unwrap();
        assert_eq!(ds.labels, HdiCategory::ALL.to_vec());
        // constant columns scale to zero; the GDP column spans [0, 1]
        assert_eq!(ds.features.column(1), vec![0.0; 4]);
        assert_eq!(ds.features.column(0), vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
    }

    #[test]
    fn incomplete_regions_dropped() {
        let t = table(&[
            (
                "A",
                [
                    Some(70.0),
                    Some(1.0),
                    Some(2.0),
                    Some(3.0),
                    Some(4.0),
                    Some(5.0),
                ],
            ),
            (
                "B",
                [Some(70.0), None, Some(2.0), Some(3.0), Some(4.0), Some(5.0)],
            ),
        ]);
        let ds =
            build_classification_dataset(&t, 2010, &DatasetSpec::default(), ScalingMethod::None)
                .unwrap();
        assert_eq!(ds.region_ids, vec!["A"]);
    }

    #[test]
    fn missing_indicator_and_empty() {
        let t = IndicatorTable::from_records([("A", "Human Development Index", 2010, Some(70.0))])
            .unwrap();
        assert!(matches!(
            build_classification_dataset(&t, 2010, &DatasetSpec::default(), ScalingMethod::MinMax),
            Err(FeatureError::MissingIndicator(_))
        ));
        let t = table(&[(
            "A",
            [Some(70.0), None, Some(2.0), Some(3.0), Some(4.0), Some(5.0)],
        )]);
        assert!(matches!(
            build_classification_dataset(&t, 2010, &DatasetSpec::default(), ScalingMethod::MinMax),
            Err(FeatureError::EmptyResult { year: 2010 })
        ));
    }

    #[test]
    fn unit_scale_hdi() {
        let spec = DatasetSpec {
            hdi_scale: HdiScale::Unit,
            ..Default::default()
        };
        let t = table(&[(
            "A",
            [
                Some(0.7239),
                Some(1.0),
                Some(2.0),
                Some(3.0),
                Some(4.0),
                Some(5.0),
            ],
        )]);
        let ds = build_classification_dataset(&t, 2010, &spec, ScalingMethod::MinMax).unwrap();
        assert_eq!(ds.labels, vec![HdiCategory::High]);
    }

    #[test]
    fn clustering_rows() {
        let t = IndicatorTable::from_records([
            ("A", "Human Development Index", 2012, Some(70.0)),
            ("A", "Gross Domestic Product", 2012, Some(30.0)),
            ("B", "Human Development Index", 2012, Some(65.0)),
            ("B", "Gross Domestic Product", 2012, None),
        ])
        .unwrap();
        let ds = build_clustering_dataset(&t, 2012, &DatasetSpec::default()).unwrap();
        assert_eq!(ds.region_ids, vec!["A"]);
        assert_eq!(ds.points, vec![[70.0, 30.0]]);
    }

    #[test]
    fn zscore_constant_column() {
        let m = Matrix::from_rows(&[[2.0, 1.0], [2.0, 3.0]]).unwrap();
        let s = Scaler::fit(ScalingMethod::ZScore, &m);
        let t = s.transform(&m).unwrap();
        assert_eq!(t.column(0), vec![0.0, 0.0]);
        assert_eq!(t.column(1), vec![-1.0, 1.0]);
        assert_eq!(s.inverse_transform(&t).unwrap(), m);
    }

    #[test]
    fn out_of_range_columns() {
        let m = Matrix::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let s = Scaler::fit(ScalingMethod::MinMax, &m);
        assert_eq!(s.out_of_range(&[0.5, 2.0]), vec![1]);
        assert!(s.transform_row(&[1.0]).is_err());
    }

    fn labeled(labels: Vec<HdiCategory>) -> LabeledDataset {
        let n = labels.len();
        let raw = Matrix::from_vec(n, 5, (0..n * 5).map(|v| v as f64).collect()).unwrap();
        LabeledDataset::from_raw(
            (0..n).map(|i| format!("R{i}")).collect(),
            raw,
            labels,
            ScalingMethod::MinMax,
        )
        .unwrap()
    }

    #[test]
    fn split_sizes_and_determinism() {
        let ds = labeled(vec![HdiCategory::Low; 10]);
        let spec = SplitSpec {
            test_fraction: 0.2,
            seed: 7,
            stratified: false,
        };
        let (train, test) = split(&ds, &spec).unwrap();
        assert_eq!((train.len(), test.len()), (8, 2));
        assert_eq!(split(&ds, &spec).unwrap(), (train, test));
    }

    #[test]
    fn stratified_even_classes() {
        let labels: Vec<HdiCategory> = (0..100)
            .map(|i| {
                if i % 2 == 0 {
                    HdiCategory::Low
                } else {
                    HdiCategory::High
                }
            })
            .collect();
        let ds = labeled(labels);
        let (_, test) = split(
            &ds,
            &SplitSpec {
                test_fraction: 0.2,
                seed: 3,
                stratified: true,
            },
        )
        .unwrap();
        let lows = test
            .labels
            .iter()
            .filter(|&&c| c == HdiCategory::Low)
            .count();
        assert_eq!((lows, test.len() - lows), (10, 10));
    }

    #[test]
    fn split_edge_cases() {
        let ds = labeled(vec![HdiCategory::Low]);
        assert!(matches!(
            split(&ds, &SplitSpec::default()),
            Err(FeatureError::TooSmall(1))
        ));
        let ds = labeled(vec![HdiCategory::Low; 3]);
        let bad = SplitSpec {
            test_fraction: 1.0,
            ..Default::default()
        };
        assert!(matches!(
            split(&ds, &bad),
            Err(FeatureError::InvalidSplit(_))
        ));
        // tiny fractions still leave one test row, large ones one training row
        let small = SplitSpec {
            test_fraction: 0.01,
            ..Default::default()
        };
        assert_eq!(split(&ds, &small).unwrap().1.len(), 1);
        let large = SplitSpec {
            test_fraction: 0.99,
            ..Default::default()
        };
        assert_eq!(split(&ds, &large).unwrap().0.len(), 1);
    }

    #[test]
    fn apportion_largest_remainder() {
        assert_eq!(apportion(&[50, 50, 0, 0], 20), vec![10, 10, 0, 0]);
        assert_eq!(apportion(&[1, 1, 1, 0], 2), vec![1, 1, 0, 0]);
        assert_eq!(apportion(&[7, 2, 1, 0], 3), vec![2, 1, 0, 0]);
    }

    #[test]
    fn dataset_csv_round_trip() {
        let ds = labeled(vec![HdiCategory::Low, HdiCategory::VeryHigh]);
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("region,gdp,npp,niu,nl,np,label\n"));
        let rows = read_dataset_csv(buf.as_slice()).unwrap();
        let back = rows
            .into_dataset(ScalingOrFit::Fit(ScalingMethod::MinMax))
            .unwrap();
        assert_eq!(back, ds);
    }
}
