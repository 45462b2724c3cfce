//! Benchmark fixtures shared by the criterion targets.

use hdi_core::features::{HdiCategory, LabeledDataset, ScalingMethod};
use hdi_core::kmeans::Point;
use hdi_core::synth;

/// 495 points around four (HDI, GDP) centres.
pub fn planted_points() -> Vec<Point> {
    let centers = [[55.0, 10.0], [65.0, 30.0], [75.0, 60.0], [85.0, 90.0]];
    synth::planted_clusters(&centers, [3.0, 6.0], &[200, 150, 100, 45], 7).0
}

/// A 200-row separable classification dataset.
pub fn separable_dataset() -> LabeledDataset {
    let (raw, labels) = synth::linearly_separable(200, 0.05, 4);
    let labels = labels
        .into_iter()
        .map(|l| HdiCategory::from_index(l).expect("four classes"))
        .collect();
    let regions = (0..raw.rows()).map(|i| format!("r{i}")).collect();
    LabeledDataset::from_raw(regions, raw, labels, ScalingMethod::MinMax)
        .expect("consistent lengths")
}
