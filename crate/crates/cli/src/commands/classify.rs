use std::io::Write;

use hdi_core::ann::{self, init_network, load_model, predict, save_model, SweepOutcome};
use hdi_core::features::{
    build_classification_dataset, read_dataset_csv, split, HdiCategory, LabeledDataset, Predictor,
    PREDICTOR_COUNT,
};
use hdi_core::ingest::{slice, IndicatorTable};
use hdi_core::matrix::Matrix;
use hdi_core::{NetworkModel, SweepResult};
use serde::Serialize;

use super::load_table;
use crate::config::PipelineConfig;
use crate::error::{CliError, Result};
use crate::output::{open, Console, OutDir};

pub fn dataset(config: &PipelineConfig, table: &IndicatorTable) -> Result<LabeledDataset> {
    Ok(build_classification_dataset(
        table,
        config.classification_year,
        &config.dataset,
        config.scaling,
    )?)
}

fn accuracy(model: &NetworkModel, data: &LabeledDataset) -> Result<f64> {
    let predicted = predict(model, &data.features)?;
    let hits = predicted
        .iter()
        .zip(&data.labels)
        .filter(|(p, a)| p == a)
        .count();
    Ok(hits as f64 / data.len().max(1) as f64)
}

fn write_split(out: &OutDir, train: &LabeledDataset, test: &LabeledDataset) -> Result<()> {
    out.write_with("split.csv", |buf| -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["region", "part", "label"])?;
        for (part, data) in [("train", train), ("test", test)] {
            for (region, label) in data.region_ids.iter().zip(&data.labels) {
                w.write_record([region.as_str(), part, label.name()])?;
            }
        }
        w.flush()?;
        Ok(())
    })?;
    Ok(())
}

/// `region,predicted_category,probabilities`, probabilities `;`-joined in
/// `Low;Medium;High;VeryHigh` order.
pub fn write_predictions(
    out: &OutDir,
    name: &str,
    model: &NetworkModel,
    regions: &[String],
    features: &Matrix,
) -> Result<Vec<HdiCategory>> {
    let predicted = predict(model, features)?;
    let mut probabilities = Vec::with_capacity(regions.len());
    for row in features.iter_rows() {
        let p = model.forward(row)?;
        probabilities.push(p.iter().map(f64::to_string).collect::<Vec<_>>().join(";"));
    }
    out.write_with(name, |buf| -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["region", "predicted_category", "probabilities"])?;
        for ((region, category), p) in regions.iter().zip(&predicted).zip(&probabilities) {
            w.write_record([region.as_str(), category.name(), p.as_str()])?;
        }
        w.flush()?;
        Ok(())
    })?;
    Ok(predicted)
}

/// `region,actual_category`
pub fn write_labels(
    out: &OutDir,
    name: &str,
    regions: &[String],
    labels: &[HdiCategory],
) -> Result<()> {
    out.write_with(name, |buf| -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["region", "actual_category"])?;
        for (region, label) in regions.iter().zip(labels) {
            w.write_record([region.as_str(), label.name()])?;
        }
        w.flush()?;
        Ok(())
    })?;
    Ok(())
}

fn save(out: &OutDir, name: &str, model: &NetworkModel) -> Result<()> {
    out.write_with(name, |buf| save_model(model, buf))?;
    Ok(())
}

#[derive(Serialize)]
struct TrainSummary {
    hidden_neurons: usize,
    epochs: usize,
    learning_rate: f64,
    initial_loss: f64,
    final_loss: f64,
    train_rows: usize,
    test_rows: usize,
    train_accuracy: f64,
    test_accuracy: f64,
}

pub fn train(config: &PipelineConfig, out: &OutDir, console: &mut Console) -> Result<()> {
    let table = load_table(config, console)?;
    let data = dataset(config, &table)?;
    let (train, test) = split(&data, &config.split_spec())?;
    write_split(out, &train, &test)?;

    let hidden = config.train.hidden_neurons;
    let init = init_network(
        &[PREDICTOR_COUNT, hidden, HdiCategory::COUNT],
        config.train.hidden_activation,
        config.train_init_seed(),
    )?;
    let (model, trace) = ann::train(&init, &train, &config.train_config())?;
    save(out, "model.json", &model)?;
    out.write_with("loss_trace.csv", |buf| -> std::io::Result<()> {
        writeln!(buf, "epoch,loss")?;
        for (epoch, loss) in trace.iter().enumerate() {
            writeln!(buf, "{},{loss}", epoch + 1)?;
        }
        Ok(())
    })?;
    write_predictions(
        out,
        "predictions.csv",
        &model,
        &test.region_ids,
        &test.features,
    )?;
    write_labels(out, "labels.csv", &test.region_ids, &test.labels)?;

    let summary = TrainSummary {
        hidden_neurons: hidden,
        epochs: trace.len(),
        learning_rate: config.train.learning_rate,
        initial_loss: trace[0],
        final_loss: *trace.last().expect("epochs >= 1"),
        train_rows: train.len(),
        test_rows: test.len(),
        train_accuracy: accuracy(&model, &train)?,
        test_accuracy: accuracy(&model, &test)?,
    };
    out.write_json("train_summary.json", &summary)?;
    console.say(format_args!(
        "trained (5:{hidden}:4) for {} epochs: loss {:.4} -> {:.4}, train accuracy {:.4}, test accuracy {:.4}",
        summary.epochs, summary.initial_loss, summary.final_loss, summary.train_accuracy, summary.test_accuracy
    ));
    Ok(())
}

fn print_sweep(result: &SweepResult, console: &mut Console) {
    console.say(format_args!("hidden  mean error  diverged"));
    for e in &result.entries {
        let diverged = e.runs.iter().filter(|r| r.diverged).count();
        console.say(format_args!(
            "{:>6}  {:>10.4}  {diverged:>8}",
            e.hidden_neurons, e.mean_error
        ));
    }
    console.say(format_args!(
        "best: {} hidden neurons, mean error {} (run {})",
        result.best.hidden_neurons, result.best.mean_error, result.best_run_index
    ));
    if !result.ties.is_empty() {
        console.say(format_args!("tied hidden sizes: {:?}", result.ties));
    }
}

/// Runs the sweep and writes its reports. Returns the test split with the
/// best model's predictions for it.
pub fn sweep(
    config: &PipelineConfig,
    table: &IndicatorTable,
    out: &OutDir,
    console: &mut Console,
) -> Result<(LabeledDataset, Vec<HdiCategory>)> {
    let data = dataset(config, table)?;
    let (train, test) = split(&data, &config.split_spec())?;
    write_split(out, &train, &test)?;

    let SweepOutcome { result, best_model } =
        ann::sweep(&train, &test, &config.sweep_config(), config.jobs())?;
    out.write_with("sweep_runs.csv", |buf| result.write_runs_csv(buf))?;
    out.write_json("sweep_result.json", &result)?;
    print_sweep(&result, console);

    let model = best_model.ok_or_else(|| {
        CliError::Numeric(format!(
            "every run with {} hidden neurons diverged; no model to save",
            result.best.hidden_neurons
        ))
    })?;
    save(out, "best_model.json", &model)?;
    let predicted = write_predictions(
        out,
        "predictions.csv",
        &model,
        &test.region_ids,
        &test.features,
    )?;
    write_labels(out, "labels.csv", &test.region_ids, &test.labels)?;
    Ok((test, predicted))
}

pub fn predict_cmd(
    config: &PipelineConfig,
    model_path: &std::path::Path,
    dataset_path: Option<&std::path::Path>,
    out: &OutDir,
    console: &mut Console,
) -> Result<()> {
    let model = load_model(open(model_path)?).map_err(|e| CliError::in_file(model_path, e))?;
    let (regions, raw, labels) = match dataset_path {
        Some(path) => {
            let rows = read_dataset_csv(open(path)?).map_err(|e| CliError::in_file(path, e))?;
            (rows.region_ids, rows.raw, rows.labels)
        }
        None => {
            let table = load_table(config, console)?;
            let names: Vec<&str> = Predictor::ALL
                .iter()
                .map(|&p| config.dataset.indicators.predictor(p))
                .collect();
            let rows = slice(&table, &names, config.classification_year)?;
            let regions: Vec<String> = rows.iter().map(|r| r.region.clone()).collect();
            let data: Vec<f64> = rows.into_iter().flat_map(|r| r.values).collect();
            let raw = Matrix::from_vec(regions.len(), PREDICTOR_COUNT, data).expect("slice width");
            (regions, raw, None)
        }
    };

    let features = match model.scaling() {
        Some(scaler) => {
            for (region, row) in regions.iter().zip(raw.iter_rows()) {
                let outside = scaler.out_of_range(row);
                if !outside.is_empty() {
                    let cols: Vec<&str> =
                        outside.iter().map(|&c| Predictor::ALL[c].code()).collect();
                    console.warn(format_args!(
                        "{region}: {} outside the training range; prediction extrapolates",
                        cols.join(", ")
                    ));
                }
            }
            scaler.transform(&raw)?
        }
        None => {
            console.warn(format_args!(
                "model carries no input scaling; features are used as given"
            ));
            raw
        }
    };
    let predicted = write_predictions(out, "predictions.csv", &model, &regions, &features)?;
    if let Some(labels) = labels {
        write_labels(out, "labels.csv", &regions, &labels)?;
    }
    console.say(format_args!(
        "{} predictions written to {}",
        predicted.len(),
        out.path("predictions.csv").display()
    ));
    Ok(())
}
