use hdi_core::eval::cluster_assignment_check;
use hdi_core::features::build_clustering_dataset;
use hdi_core::ingest::IndicatorTable;
use hdi_core::kmeans::{
    cluster_overlap_report, kmeans_fit, summarize, Axis, CentroidFile, ClusterStats, Overlap,
    Point, PointScaling,
};
use serde::Serialize;

use crate::config::PipelineConfig;
use crate::error::Result;
use crate::output::{Console, OutDir};
use crate::svg;

#[derive(Serialize)]
struct Overlaps {
    hdi: Vec<Overlap>,
    gdp: Vec<Overlap>,
}

#[derive(Serialize)]
struct ClusterReport {
    year: i32,
    k: usize,
    points: usize,
    iterations_run: usize,
    converged: bool,
    degenerate: bool,
    wcss: f64,
    wcss_history: Vec<f64>,
    feature_scaling: Option<PointScaling>,
    /// Raw `(HDI, GDP)` coordinates.
    centroids: Vec<Point>,
    /// Share of fitted points whose nearest centroid is their own cluster.
    assignment_consistency: f64,
    clusters: Vec<ClusterStats>,
    overlaps: Overlaps,
}

pub fn run(
    config: &PipelineConfig,
    table: &IndicatorTable,
    out: &OutDir,
    console: &mut Console,
) -> Result<()> {
    let year = config.clustering_year;
    let data = build_clustering_dataset(table, year, &config.dataset)?;
    let model = kmeans_fit(&data.points, &config.kmeans_config())?;
    let summary = summarize(&model, &data.points, &config.dataset.thresholds)?;
    let centroids = model.centroids_raw();

    out.write_with("clusters.csv", |buf| -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["region", "hdi", "gdp", "cluster"])?;
        for ((region, p), c) in data
            .region_ids
            .iter()
            .zip(&data.points)
            .zip(&model.assignments)
        {
            w.write_record([
                region.clone(),
                p[0].to_string(),
                p[1].to_string(),
                c.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    out.write_with("centroids.json", |buf| {
        CentroidFile::from_model(&model).write(buf)
    })?;

    let report = ClusterReport {
        year,
        k: model.k,
        points: data.len(),
        iterations_run: model.iterations_run,
        converged: model.converged,
        degenerate: model.degenerate,
        wcss: model.wcss,
        wcss_history: model.wcss_history.clone(),
        feature_scaling: model.feature_scaling,
        centroids: centroids.clone(),
        assignment_consistency: cluster_assignment_check(&model, &data.points, &model.assignments)?,
        overlaps: Overlaps {
            hdi: cluster_overlap_report(&summary, Axis::Hdi),
            gdp: cluster_overlap_report(&summary, Axis::Gdp),
        },
        clusters: summary.clusters,
    };
    out.write_json("cluster_summary.json", &report)?;
    let title = format!(
        "K-means clustering of HDI and GDP, {year} (k = {})",
        model.k
    );
    out.write_text(
        "clusters.svg",
        &svg::scatter(&title, &data.points, &model.assignments, &centroids),
    )?;

    console.say(format_args!(
        "{} regions in {} clusters after {} iterations{}",
        data.len(),
        model.k,
        model.iterations_run,
        if model.converged {
            ""
        } else {
            " (not converged)"
        }
    ));
    for s in &report.clusters {
        console.say(format_args!(
            "  cluster {}: n={}, mean HDI {:.2} ({}), mean GDP {:.2}, HDI {:.2}-{:.2}, GDP {:.2}-{:.2}",
            s.cluster,
            s.size,
            s.mean_hdi,
            s.hdi_category_of_mean,
            s.mean_gdp,
            s.hdi_range.0,
            s.hdi_range.1,
            s.gdp_range.0,
            s.gdp_range.1
        ));
    }
    for (axis, overlaps) in [("HDI", &report.overlaps.hdi), ("GDP", &report.overlaps.gdp)] {
        for o in overlaps {
            console.say(format_args!(
                "  {axis} ranges of clusters {} and {} overlap on [{:.2}, {:.2}]",
                o.first, o.second, o.interval.0, o.interval.1
            ));
        }
    }
    if model.degenerate {
        console.warn(format_args!(
            "fewer distinct points than clusters; some clusters share a location"
        ));
    }
    Ok(())
}
