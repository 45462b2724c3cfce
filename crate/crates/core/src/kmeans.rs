//! Lloyd's K-means in the (HDI, GDP) plane.
//!
//! Each iteration assigns every point to its nearest centroid (squared
//! Euclidean distance, ties to the lower index), re-seeds any empty cluster
//! with the point farthest from the centroid of the largest cluster, and moves
//! each centroid to the mean of its members. Fitting stops once the assignment
//! no longer changes, once the largest centroid move drops below `tol`, or
//! after `max_iters` updates.
//!
//! Clusters of a fitted model are numbered by ascending centroid HDI.

use std::io::{Read, Write};

use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{categorize, CategoryThresholds, FeatureError, HdiCategory};
use crate::rng;

/// `[hdi, gdp]`
pub type Point = [f64; 2];

#[derive(Debug, Error)]
pub enum KMeansError {
    #[error("{n} points cannot form {k} clusters")]
    TooFewPoints { n: usize, k: usize },
    #[error("only {distinct} distinct points for {k} clusters")]
    DegenerateInput { distinct: usize, k: usize },
    #[error("non-finite coordinate")]
    NonFiniteInput,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{points} points but {assignments} assignments")]
    LengthMismatch { points: usize, assignments: usize },
    #[error(transparent)]
    Category(#[from] FeatureError),
    #[error("centroid file: {0}")]
    CentroidFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method", content = "centroids")]
pub enum Init {
    /// D²-weighted seeding.
    #[default]
    KMeansPlusPlus,
    /// `k` distinct rows drawn uniformly.
    Random,
    /// Fixed starting centroids in unscaled coordinates.
    Provided(Vec<Point>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KMeansConfig {
    pub k: usize,
    pub init: Init,
    pub seed: u64,
    pub max_iters: usize,
    pub tol: f64,
    /// Independent seeded starts; the lowest final wcss wins, earlier starts
    /// on ties. Ignored for provided centroids.
    pub n_init: usize,
    /// Min-max scale both axes to [0, 1] before clustering.
    pub scale: bool,
    /// Fit even with fewer than `k` distinct points; duplicate points then
    /// fill the surplus clusters.
    pub allow_degenerate: bool,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            k: 4,
            init: Init::default(),
            seed: 0,
            max_iters: 300,
            tol: 1e-6,
            n_init: 10,
            scale: false,
            allow_degenerate: false,
        }
    }
}

/// Per-axis min-max scaling. A constant axis maps to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointScaling {
    pub min: Point,
    pub max: Point,
}

impl PointScaling {
    fn fit(points: &[Point]) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for a in 0..2 {
                min[a] = min[a].min(p[a]);
                max[a] = max[a].max(p[a]);
            }
        }
        Self { min, max }
    }

    pub fn apply(&self, p: Point) -> Point {
        let f = |a: usize| {
            let span = self.max[a] - self.min[a];
            if span > 0.0 {
                (p[a] - self.min[a]) / span
            } else {
                0.0
            }
        };
        [f(0), f(1)]
    }

    pub fn invert(&self, p: Point) -> Point {
        let f = |a: usize| p[a] * (self.max[a] - self.min[a]) + self.min[a];
        [f(0), f(1)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub k: usize,
    /// In the fitting space (scaled when `feature_scaling` is set).
    pub centroids: Vec<Point>,
    pub assignments: Vec<usize>,
    pub iterations_run: usize,
    pub converged: bool,
    /// Within-cluster sum of squared distances of the final model.
    pub wcss: f64,
    /// Objective at the initial assignment, then after every update step.
    pub wcss_history: Vec<f64>,
    pub feature_scaling: Option<PointScaling>,
    /// Set when fitting went ahead with fewer than `k` distinct points.
    pub degenerate: bool,
}

pub fn squared_distance(a: Point, b: Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

/// Nearest centroid, ties to the lower index.
pub fn nearest(centroids: &[Point], p: Point) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &c) in centroids.iter().enumerate() {
        let d = squared_distance(p, c);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

pub fn wcss(points: &[Point], centroids: &[Point], assignments: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .map(|(&p, &c)| squared_distance(p, centroids[c]))
        .sum()
}

fn assign_all(points: &[Point], centroids: &[Point]) -> Vec<usize> {
    points.iter().map(|&p| nearest(centroids, p)).collect()
}

fn means(points: &[Point], assignments: &[usize], k: usize) -> Vec<Point> {
    let mut sums = vec![[0.0; 2]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in points.iter().zip(assignments) {
        sums[c][0] += p[0];
        sums[c][1] += p[1];
        counts[c] += 1;
    }
    sums.into_iter()
        .zip(counts)
        .map(|(s, n)| [s[0] / n as f64, s[1] / n as f64])
        .collect()
}

/// Moves the farthest member of the largest cluster into each empty cluster.
fn repair_empty(points: &[Point], assignments: &mut [usize], centroids: &mut [Point]) {
    let k = centroids.len();
    loop {
        let mut counts = vec![0usize; k];
        for &c in assignments.iter() {
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&n| n == 0) else {
            return;
        };
        let largest = (0..k)
            .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
            .expect("k >= 1");
        let mut far = None;
        let mut far_d = f64::NEG_INFINITY;
        for (i, (&p, &c)) in points.iter().zip(assignments.iter()).enumerate() {
            if c == largest {
                let d = squared_distance(p, centroids[largest]);
                if d > far_d {
                    far = Some(i);
                    far_d = d;
                }
            }
        }
        let far = far.expect("largest cluster has members");
        assignments[far] = empty;
        centroids[empty] = points[far];
    }
}

fn distinct_count(points: &[Point]) -> usize {
    // + 0.0 folds -0.0 into 0.0
    let mut keys: Vec<(u64, u64)> = points
        .iter()
        .map(|p| ((p[0] + 0.0).to_bits(), (p[1] + 0.0).to_bits()))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

fn kmeans_plus_plus(points: &[Point], k: usize, rng: &mut rng::Rng) -> Vec<Point> {
    let n = points.len();
    let mut chosen = vec![rng.gen_range(0..n)];
    let mut d2: Vec<f64> = points
        .iter()
        .map(|&p| squared_distance(p, points[chosen[0]]))
        .collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 {
                    acc += d;
                    pick = Some(i);
                    if acc > target {
                        break;
                    }
                }
            }
            pick.expect("total > 0")
        } else {
            // every point coincides with a chosen centre
            (0..n).find(|i| !chosen.contains(i)).expect("n >= k")
        };
        chosen.push(next);
        for (d, &p) in d2.iter_mut().zip(points) {
            *d = d.min(squared_distance(p, points[next]));
        }
    }
    chosen.into_iter().map(|i| points[i]).collect()
}

struct Lloyd {
    centroids: Vec<Point>,
    assignments: Vec<usize>,
    history: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn lloyd(pts: &[Point], mut centroids: Vec<Point>, config: &KMeansConfig) -> Lloyd {
    let k = centroids.len();
    let mut assignments = assign_all(pts, &centroids);
    let mut history = vec![wcss(pts, &centroids, &assignments)];
    let mut converged = false;
    let mut iterations = 0;
    for iter in 1..=config.max_iters {
        iterations = iter;
        repair_empty(pts, &mut assignments, &mut centroids);
        let updated = means(pts, &assignments, k);
        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(&a, &b)| squared_distance(a, b).sqrt())
            .fold(0.0, f64::max);
        centroids = updated;
        history.push(wcss(pts, &centroids, &assignments));

        let next = assign_all(pts, &centroids);
        if next == assignments {
            converged = true;
            break;
        }
        assignments = next;
        if shift < config.tol {
            repair_empty(pts, &mut assignments, &mut centroids);
            centroids = means(pts, &assignments, k);
            history.push(wcss(pts, &centroids, &assignments));
            converged = true;
            break;
        }
    }
    if !converged {
        repair_empty(pts, &mut assignments, &mut centroids);
    }
    Lloyd {
        centroids,
        assignments,
        history,
        iterations,
        converged,
    }
}

/// Fits `config.k` clusters to `points` (unscaled `(HDI, GDP)` rows).
pub fn kmeans_fit(points: &[Point], config: &KMeansConfig) -> Result<ClusterModel, KMeansError> {
    let k = config.k;
    let n = points.len();
    if k == 0 {
        return Err(KMeansError::InvalidConfig("k must be at least 1".into()));
    }
    if config.max_iters == 0 {
        return Err(KMeansError::InvalidConfig(
            "max_iters must be at least 1".into(),
        ));
    }
    if !(config.tol.is_finite() && config.tol >= 0.0) {
        return Err(KMeansError::InvalidConfig(format!(
            "tol {} must be finite and >= 0",
            config.tol
        )));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(KMeansError::NonFiniteInput);
    }
    if n < k {
        return Err(KMeansError::TooFewPoints { n, k });
    }
    let distinct = distinct_count(points);
    let degenerate = distinct < k;
    if degenerate && !config.allow_degenerate {
        return Err(KMeansError::DegenerateInput { distinct, k });
    }

    let scaling = config.scale.then(|| PointScaling::fit(points));
    let pts: Vec<Point> = match &scaling {
        Some(s) => points.iter().map(|&p| s.apply(p)).collect(),
        None => points.to_vec(),
    };

    let starts = match &config.init {
        Init::Provided(given) => {
            if given.len() != k {
                return Err(KMeansError::InvalidConfig(format!(
                    "{} provided centroids for k = {k}",
                    given.len()
                )));
            }
            if given.iter().flatten().any(|v| !v.is_finite()) {
                return Err(KMeansError::NonFiniteInput);
            }
            vec![match &scaling {
                Some(s) => given.iter().map(|&c| s.apply(c)).collect(),
                None => given.clone(),
            }]
        }
        seeded_init => {
            let mut rng = rng::seeded(config.seed);
            (0..config.n_init.max(1))
                .map(|_| match seeded_init {
                    Init::Random => index::sample(&mut rng, n, k)
                        .into_iter()
                        .map(|i| pts[i])
                        .collect(),
                    _ => kmeans_plus_plus(&pts, k, &mut rng),
                })
                .collect::<Vec<Vec<Point>>>()
        }
    };

    let mut best: Option<Lloyd> = None;
    for start in starts {
        let run = lloyd(&pts, start, config);
        let last = *run.history.last().expect("history is never empty");
        if best
            .as_ref()
            .is_none_or(|b| last < *b.history.last().expect("non-empty"))
        {
            best = Some(run);
        }
    }
    let Lloyd {
        centroids,
        assignments,
        history,
        iterations,
        converged,
    } = best.expect("at least one start");

    // renumber by ascending HDI, then GDP, then old index
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        centroids[a][0]
            .total_cmp(&centroids[b][0])
            .then(centroids[a][1].total_cmp(&centroids[b][1]))
            .then(a.cmp(&b))
    });
    let mut relabel = vec![0; k];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let centroids: Vec<Point> = order.iter().map(|&old| centroids[old]).collect();
    let assignments: Vec<usize> = assignments.iter().map(|&c| relabel[c]).collect();
    let final_wcss = wcss(&pts, &centroids, &assignments);

    Ok(ClusterModel {
        k,
        centroids,
        assignments,
        iterations_run: iterations,
        converged,
        wcss: final_wcss,
        wcss_history: history,
        feature_scaling: scaling,
        degenerate,
    })
}

impl ClusterModel {
    /// Nearest centroid for an unscaled point, ties to the lower index.
    pub fn assign(&self, point: Point) -> Result<usize, KMeansError> {
        if point.iter().any(|v| !v.is_finite()) {
            return Err(KMeansError::NonFiniteInput);
        }
        let p = match &self.feature_scaling {
            Some(s) => s.apply(point),
            None => point,
        };
        Ok(nearest(&self.centroids, p))
    }

    /// Centroids in unscaled `(HDI, GDP)` coordinates.
    pub fn centroids_raw(&self) -> Vec<Point> {
        match &self.feature_scaling {
            Some(s) => self.centroids.iter().map(|&c| s.invert(c)).collect(),
            None => self.centroids.clone(),
        }
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignments {
            sizes[c] += 1;
        }
        sizes
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterStats {
    pub cluster: usize,
    pub size: usize,
    pub mean_hdi: f64,
    pub mean_gdp: f64,
    pub hdi_category_of_mean: HdiCategory,
    pub hdi_range: (f64, f64),
    pub gdp_range: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub clusters: Vec<ClusterStats>,
}

/// Per-cluster statistics over unscaled `points`, which must be the rows the
/// model was fitted on.
pub fn summarize(
    model: &ClusterModel,
    points: &[Point],
    thresholds: &CategoryThresholds,
) -> Result<ClusterSummary, KMeansError> {
    if points.len() != model.assignments.len() {
        return Err(KMeansError::LengthMismatch {
            points: points.len(),
            assignments: model.assignments.len(),
        });
    }
    let mut clusters = Vec::with_capacity(model.k);
    for c in 0..model.k {
        let members: Vec<Point> = points
            .iter()
            .zip(&model.assignments)
            .filter(|(_, &a)| a == c)
            .map(|(&p, _)| p)
            .collect();
        if members.is_empty() {
            return Err(KMeansError::InvalidConfig(format!("cluster {c} is empty")));
        }
        let range = |axis: usize| {
            members
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[axis]), hi.max(p[axis]))
                })
        };
        let (hdi_range, gdp_range) = (range(0), range(1));
        let n = members.len() as f64;
        // rounding in the sum can land a hair outside the member range
        let mean_hdi =
            (members.iter().map(|p| p[0]).sum::<f64>() / n).clamp(hdi_range.0, hdi_range.1);
        let mean_gdp =
            (members.iter().map(|p| p[1]).sum::<f64>() / n).clamp(gdp_range.0, gdp_range.1);
        clusters.push(ClusterStats {
            cluster: c,
            size: members.len(),
            mean_hdi,
            mean_gdp,
            hdi_category_of_mean: categorize(mean_hdi, thresholds)?,
            hdi_range,
            gdp_range,
        });
    }
    Ok(ClusterSummary { clusters })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Hdi,
    Gdp,
}

/// Two clusters whose closed value ranges on one axis intersect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub first: usize,
    pub second: usize,
    pub interval: (f64, f64),
}

pub fn cluster_overlap_report(summary: &ClusterSummary, axis: Axis) -> Vec<Overlap> {
    let range = |s: &ClusterStats| match axis {
        Axis::Hdi => s.hdi_range,
        Axis::Gdp => s.gdp_range,
    };
    let mut out = Vec::new();
    for (i, a) in summary.clusters.iter().enumerate() {
        for b in &summary.clusters[i + 1..] {
            let (ra, rb) = (range(a), range(b));
            let lo = ra.0.max(rb.0);
            let hi = ra.1.min(rb.1);
            if lo <= hi {
                out.push(Overlap {
                    first: a.cluster,
                    second: b.cluster,
                    interval: (lo, hi),
                });
            }
        }
    }
    out
}

/// Centroids in unscaled coordinates; readable back as [`Init::Provided`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentroidFile {
    pub k: usize,
    pub centroids: Vec<Point>,
}

impl CentroidFile {
    pub fn from_model(model: &ClusterModel) -> Self {
        Self {
            k: model.k,
            centroids: model.centroids_raw(),
        }
    }

    pub fn write<W: Write>(&self, mut sink: W) -> Result<(), KMeansError> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| KMeansError::CentroidFile(e.to_string()))?;
        sink.write_all(text.as_bytes())?;
        sink.write_all(b"\n")?;
        Ok(())
    }

    pub fn read<R: Read>(source: R) -> Result<Self, KMeansError> {
        let file: Self = serde_json::from_reader(source)
            .map_err(|e| KMeansError::CentroidFile(e.to_string()))?;
        if file.centroids.len() != file.k {
            return Err(KMeansError::CentroidFile(format!(
                "k = {} but {} centroids",
                file.k,
                file.centroids.len()
            )));
        }
        Ok(file)
    }

    pub fn into_init(self) -> Init {
        Init::Provided(self.centroids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(k: usize) -> KMeansConfig {
        KMeansConfig {
            k,
            ..Default::default()
        }
    }

    #[test]
    fn exact_fit_one_point_per_cluster() {
        let pts = [[50.0, 1.0], [70.0, 30.0], [60.0, 90.0]];
        let m = kmeans_fit(&pts, &cfg(3)).unwrap();
        assert_eq!(m.wcss, 0.0);
        assert_eq!(m.cluster_sizes(), vec![1, 1, 1]);
        // numbered by ascending HDI
        assert_eq!(m.assignments, vec![0, 2, 1]);
        assert!(m.converged);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            kmeans_fit(&[[1.0, 1.0]], &cfg(2)),
            Err(KMeansError::TooFewPoints { n: 1, k: 2 })
        ));
        assert!(matches!(
            kmeans_fit(&[[1.0, 1.0], [1.0, 1.0]], &cfg(2)),
            Err(KMeansError::DegenerateInput { distinct: 1, k: 2 })
        ));
        assert!(matches!(
            kmeans_fit(&[[f64::NAN, 1.0]], &cfg(1)),
            Err(KMeansError::NonFiniteInput)
        ));
        assert!(matches!(
            kmeans_fit(&[[1.0, 1.0]], &cfg(0)),
            Err(KMeansError::InvalidConfig(_))
        ));
        let bad = KMeansConfig {
            init: Init::Provided(vec![[0.0, 0.0]]),
            ..cfg(2)
        };
        assert!(matches!(
            kmeans_fit(&[[0.0, 0.0], [1.0, 1.0]], &bad),
            Err(KMeansError::InvalidConfig(_))
        ));
    }

    #[test]
    fn degenerate_fallback_keeps_k_clusters() {
        let pts = [[1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [5.0, 5.0]];
        let c = KMeansConfig {
            allow_degenerate: true,
            ..cfg(3)
        };
        let m = kmeans_fit(&pts, &c).unwrap();
        assert!(m.degenerate);
        assert!(m.cluster_sizes().iter().all(|&s| s > 0));
        assert_eq!(m.wcss, 0.0);
    }

    #[test]
    fn empty_cluster_repair() {
        // both provided centroids sit nearest to the same points; cluster 1 starts empty
        let pts = [[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]];
        let c = KMeansConfig {
            init: Init::Provided(vec![[5.0, 0.5], [100.0, 100.0]]),
            ..cfg(2)
        };
        let m = kmeans_fit(&pts, &c).unwrap();
        assert_eq!(m.cluster_sizes(), vec![2, 2]);
        assert!((m.wcss - 1.0).abs() < 1e-12);
    }

    #[test]
    fn assign_and_ties() {
        let pts = [[0.0, 0.0], [2.0, 0.0]];
        let m = kmeans_fit(&pts, &cfg(2)).unwrap();
        assert_eq!(m.assign([2.0, 0.0]).unwrap(), 1);
        assert_eq!(m.assign([1.0, 0.0]).unwrap(), 0);
        assert!(m.assign([f64::INFINITY, 0.0]).is_err());
        for (i, &p) in pts.iter().enumerate() {
            assert_eq!(m.assign(p).unwrap(), m.assignments[i]);
        }
    }

    #[test]
    fn scaled_fit_reports_raw_centroids() {
        let pts = [
            [50.0, 1000.0],
            [52.0, 1000.0],
            [80.0, 5000.0],
            [82.0, 5000.0],
        ];
        let c = KMeansConfig {
            scale: true,
            ..cfg(2)
        };
        let m = kmeans_fit(&pts, &c).unwrap();
        let raw = m.centroids_raw();
        assert!((raw[0][0] - 51.0).abs() < 1e-9 && (raw[0][1] - 1000.0).abs() < 1e-9);
        assert!((raw[1][0] - 81.0).abs() < 1e-9 && (raw[1][1] - 5000.0).abs() < 1e-9);
        assert_eq!(m.assign([51.0, 1200.0]).unwrap(), 0);
    }

    #[test]
    fn summary_single_point_cluster() {
        let pts = [[52.30, 5.0], [76.0, 10.0], [78.0, 12.0]];
        let m = kmeans_fit(&pts, &cfg(2)).unwrap();
        let s = summarize(&m, &pts, &CategoryThresholds::default()).unwrap();
        assert_eq!(s.clusters[0].size, 1);
        assert_eq!(s.clusters[0].mean_hdi, 52.30);
        assert_eq!(s.clusters[0].hdi_category_of_mean, HdiCategory::Low);
        assert_eq!(s.clusters[1].hdi_category_of_mean, HdiCategory::High);
        assert_eq!(s.clusters[1].hdi_range, (76.0, 78.0));
        assert!(summarize(&m, &pts[..2], &CategoryThresholds::default()).is_err());
    }

    #[test]
    fn summary_mean_of_two() {
        let pts = [[70.0, 1.0], [80.0, 1.0]];
        let m = kmeans_fit(&pts, &cfg(1)).unwrap();
        let s = summarize(&m, &pts, &CategoryThresholds::default()).unwrap();
        assert_eq!(s.clusters[0].mean_hdi, 75.0);
        assert_eq!(s.clusters[0].hdi_category_of_mean, HdiCategory::High);
    }

    fn stats(cluster: usize, hdi: (f64, f64), gdp: (f64, f64)) -> ClusterStats {
        ClusterStats {
            cluster,
            size: 1,
            mean_hdi: hdi.0,
            mean_gdp: gdp.0,
            hdi_category_of_mean: HdiCategory::Low,
            hdi_range: hdi,
            gdp_range: gdp,
        }
    }

    #[test]
    fn overlap_intervals() {
        let s = ClusterSummary {
            clusters: vec![
                stats(0, (50.0, 55.0), (0.0, 40.0)),
                stats(1, (60.0, 65.0), (20.0, 60.0)),
            ],
        };
        assert_eq!(
            cluster_overlap_report(&s, Axis::Gdp),
            vec![Overlap {
                first: 0,
                second: 1,
                interval: (20.0, 40.0)
            }]
        );
        assert!(cluster_overlap_report(&s, Axis::Hdi).is_empty());
    }

    #[test]
    fn centroid_file_round_trip_as_init() {
        let pts = [[50.0, 1.0], [51.0, 2.0], [80.0, 9.0], [81.0, 8.0]];
        let m = kmeans_fit(&pts, &cfg(2)).unwrap();
        let mut buf = Vec::new();
        CentroidFile::from_model(&m).write(&mut buf).unwrap();
        let init = CentroidFile::read(buf.as_slice()).unwrap().into_init();
        let again = kmeans_fit(&pts, &KMeansConfig { init, ..cfg(2) }).unwrap();
        assert_eq!(again.assignments, m.assignments);
        assert_eq!(again.centroids, m.centroids);
        assert!(CentroidFile::read(&b"{\"k\":3,\"centroids\":[[1,2]]}"[..]).is_err());
    }

    #[test]
    fn history_starts_at_initial_assignment() {
        let pts = [[0.0, 0.0], [0.0, 1.0], [9.0, 9.0], [9.0, 8.0], [4.0, 4.0]];
        let m = kmeans_fit(
            &pts,
            &KMeansConfig {
                init: Init::Random,
                ..cfg(2)
            },
        )
        .unwrap();
        assert_eq!(m.wcss_history.len(), m.iterations_run + 1);
        assert!(m.wcss_history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*m.wcss_history.last().unwrap(), m.wcss);
    }
}
