mod common;

use std::fs;

use common::{fixture, hdi, path_str, tree, write_points_csv};
use hdi_core::synth::planted_clusters;
use serde_json::Value;

fn json(path: &std::path::Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn missing_input_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = hdi(&["ingest", "-i", "no/such/file.csv", "-o", path_str(&out)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("no/such/file.csv"), "{}", r.stderr);
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(hdi(&["frobnicate"]).code, 1);
    assert_eq!(hdi(&["cluster", "-k", "many"]).code, 1);
    let help = hdi(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("classify"));
    let r = hdi(&["ingest", "-o", "/tmp/unused-hdi-out"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--input"));
}

#[test]
fn ingest_creates_nested_output_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a/b/c");
    let r = hdi(&[
        "ingest",
        "-i",
        path_str(&fixture("preview_export.csv")),
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for f in [
        "completeness.csv",
        "completeness.json",
        "ingest_summary.json",
        "config.json",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let summary = json(&out.join("ingest_summary.json"));
    assert_eq!(summary["regions"], 1);
    let csv = fs::read_to_string(out.join("completeness.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "indicator,year,coverage,complete"
    );
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"version": 1, "seed": 5, "clustering_year": 2012, "kmeans": {"k": 3}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let r = hdi(&[
        "cluster",
        "--config",
        path_str(&cfg),
        "-i",
        path_str(&fixture("synthetic_regions.csv")),
        "-o",
        path_str(&out),
        "--seed",
        "9",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let echoed = json(&out.join("config.json"));
    assert_eq!(echoed["seed"], 9);
    assert_eq!(echoed["kmeans"]["k"], 3);
    assert_eq!(json(&out.join("cluster_summary.json"))["k"], 3);

    fs::write(&cfg, r#"{"version": 7}"#).unwrap();
    let r = hdi(&[
        "ingest",
        "--config",
        path_str(&cfg),
        "-i",
        "x.csv",
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("version"));
    fs::write(&cfg, r#"{"version": 1, "sede": 3}"#).unwrap();
    assert_eq!(
        hdi(&["ingest", "--config", path_str(&cfg), "-o", path_str(&out)]).code,
        1
    );
}

#[test]
fn cluster_svg_has_one_mark_per_point_and_centroid() {
    let dir = tempfile::tempdir().unwrap();
    let centers = [[55.0, 10.0], [65.0, 30.0], [75.0, 60.0], [85.0, 90.0]];
    let (points, _) = planted_clusters(&centers, [3.0, 6.0], &[40, 30, 20, 10], 3);
    let input = dir.path().join("points.csv");
    write_points_csv(&input, &points, 2012);
    let out = dir.path().join("out");
    let r = hdi(&["cluster", "-i", path_str(&input), "-o", path_str(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);

    let svg = fs::read_to_string(out.join("clusters.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="point""#).count(), 100);
    assert_eq!(svg.matches(r#"class="centroid""#).count(), 4);
    let clusters = fs::read_to_string(out.join("clusters.csv")).unwrap();
    assert_eq!(clusters.lines().next().unwrap(), "region,hdi,gdp,cluster");
    assert_eq!(clusters.lines().count(), 101);
    let summary = json(&out.join("cluster_summary.json"));
    assert_eq!(summary["assignment_consistency"], 1.0);
    let sizes: Vec<u64> = summary["clusters"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, [40, 30, 20, 10]);
}

#[test]
fn four_points_four_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("four.csv");
    write_points_csv(
        &input,
        &[[52.3, 5.0], [67.8, 20.0], [72.39, 35.0], [76.82, 60.0]],
        2012,
    );
    let out = dir.path().join("out");
    let r = hdi(&["cluster", "-i", path_str(&input), "-o", path_str(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let summary = json(&out.join("cluster_summary.json"));
    let clusters = summary["clusters"].as_array().unwrap();
    assert!(clusters.iter().all(|c| c["size"] == 1));
    let categories: Vec<&str> = clusters
        .iter()
        .map(|c| c["hdi_category_of_mean"].as_str().unwrap())
        .collect();
    assert_eq!(categories, ["Low", "Medium", "High", "High"]);
}

#[test]
fn gdp_ranges_overlap_while_hdi_bands_separate() {
    let dir = tempfile::tempdir().unwrap();
    let mut points = Vec::new();
    for (band, gdp_low) in [(52.0, 2.0), (64.0, 8.0), (74.0, 14.0), (84.0, 20.0)] {
        for i in 0..12 {
            let t = i as f64 / 11.0;
            points.push([band + 3.0 * t, gdp_low + 10.0 * t]);
        }
    }
    let input = dir.path().join("bands.csv");
    write_points_csv(&input, &points, 2012);
    let out = dir.path().join("out");
    assert_eq!(
        hdi(&["cluster", "-i", path_str(&input), "-o", path_str(&out)]).code,
        0
    );
    let summary = json(&out.join("cluster_summary.json"));
    assert_eq!(summary["overlaps"]["hdi"].as_array().unwrap().len(), 0);
    assert!(!summary["overlaps"]["gdp"].as_array().unwrap().is_empty());
}

#[test]
fn evaluate_pairs_and_perfect_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.csv");
    let mut text = String::from("actual,predicted\n");
    for i in 0..20 {
        let c = ["Low", "Medium", "High", "VeryHigh"][i % 4];
        text.push_str(&format!("{c},{c}\n"));
    }
    fs::write(&pairs, text).unwrap();
    let out = dir.path().join("perfect");
    let r = hdi(&[
        "evaluate",
        "--pairs",
        path_str(&pairs),
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("prediction error: 0.00%"));
    assert_eq!(json(&out.join("metrics.json"))["metrics"]["accuracy"], 1.0);

    assert_eq!(hdi(&["evaluate", "-o", path_str(&out)]).code, 1);
    fs::write(&pairs, "actual,predicted\nLow,Unknown\n").unwrap();
    let r = hdi(&[
        "evaluate",
        "--pairs",
        path_str(&pairs),
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
}

#[test]
fn evaluate_reports_mismatched_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.csv");
    let l = dir.path().join("l.csv");
    fs::write(
        &p,
        "region,predicted_category,probabilities\nA,Low,1;0;0;0\n",
    )
    .unwrap();
    fs::write(&l, "region,actual_category\nA,Low\nB,High\n").unwrap();
    let out = dir.path().join("out");
    let r = hdi(&[
        "evaluate",
        "--predictions",
        path_str(&p),
        "--labels",
        path_str(&l),
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 2);
    assert!(
        r.stderr.contains("2 labels but 1 predictions"),
        "{}",
        r.stderr
    );
}

fn quick_sweep(out: &std::path::Path, jobs: &str) -> common::Output {
    hdi(&[
        "classify",
        "sweep",
        "-i",
        path_str(&fixture("synthetic_regions.csv")),
        "-o",
        path_str(out),
        "--epochs",
        "60",
        "--runs",
        "3",
        "--seed",
        "11",
        "--jobs",
        jobs,
    ])
}

#[test]
fn sweep_output_does_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(quick_sweep(&a, "1").code, 0);
    assert_eq!(quick_sweep(&b, "4").code, 0);
    let strip_jobs = |t: Vec<(std::path::PathBuf, Vec<u8>)>| {
        t.into_iter()
            .filter(|(p, _)| p.to_str() != Some("config.json"))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip_jobs(tree(&a)), strip_jobs(tree(&b)));
    let runs = fs::read_to_string(a.join("sweep_runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 1 + 4 * 3);
}

#[test]
fn predict_warns_on_extrapolation_and_still_predicts() {
    let dir = tempfile::tempdir().unwrap();
    let trained = dir.path().join("trained");
    let r = hdi(&[
        "classify",
        "train",
        "-i",
        path_str(&fixture("synthetic_regions.csv")),
        "-o",
        path_str(&trained),
        "--epochs",
        "50",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(trained.join("model.json").is_file());
    let trace = fs::read_to_string(trained.join("loss_trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 51);

    let data = dir.path().join("new.csv");
    fs::write(&data, "region,gdp,npp,niu,nl,np\n\"Far, Kab\",1e6,10,10,10,10\nNear,20,50000,50000,200000,500000\n").unwrap();
    let out = dir.path().join("pred");
    let r = hdi(&[
        "classify",
        "predict",
        "--model",
        path_str(&trained.join("model.json")),
        "--dataset",
        path_str(&data),
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.contains("Far, Kab: gdp"), "{}", r.stderr);
    let predictions = fs::read_to_string(out.join("predictions.csv")).unwrap();
    let lines: Vec<&str> = predictions.lines().collect();
    assert_eq!(lines[0], "region,predicted_category,probabilities");
    assert_eq!(lines.len(), 3);
    let probs: f64 = lines[1]
        .rsplit(',')
        .next()
        .unwrap()
        .split(';')
        .map(|p| p.parse::<f64>().unwrap())
        .sum();
    assert!((probs - 1.0).abs() < 1e-9);
}

#[test]
fn corrupt_model_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    fs::write(&model, r#"{"magic": "hdi-ann-model", "version": 99}"#).unwrap();
    let r = hdi(&[
        "classify",
        "predict",
        "--model",
        path_str(&model),
        "-i",
        path_str(&fixture("synthetic_regions.csv")),
        "-o",
        path_str(&dir.path().join("o")),
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("version"), "{}", r.stderr);
}

#[test]
fn divergence_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let r = hdi(&[
        "classify",
        "train",
        "-i",
        path_str(&fixture("synthetic_regions.csv")),
        "-o",
        path_str(&dir.path().join("o")),
        "--epochs",
        "50",
        "--learning-rate",
        "1.7976931348623157e308",
    ]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("diverged"));
}

#[test]
fn shipped_default_config_matches_builtin_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let shipped =
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json");
    let input = fixture("preview_export.csv");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(
        hdi(&[
            "ingest",
            "--config",
            path_str(&shipped),
            "-i",
            path_str(&input),
            "-o",
            path_str(&a)
        ])
        .code,
        0
    );
    assert_eq!(
        hdi(&["ingest", "-i", path_str(&input), "-o", path_str(&b)]).code,
        0
    );
    assert_eq!(
        fs::read(a.join("config.json")).unwrap(),
        fs::read(b.join("config.json")).unwrap()
    );
}
