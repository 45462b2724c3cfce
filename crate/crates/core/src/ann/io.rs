//! Model files.
//!
//! A model file is pretty-printed JSON:
//!
//! ```text
//! {
//!   "magic": "hdi-ann-model",
//!   "version": 1,
//!   "checksum": "<sha256 of the compact model JSON, hex>",
//!   "model": { "layer_sizes": [5, 20, 4], ... }
//! }
//! ```
//!
//! Floats are written in shortest round-trip form and read back exactly, so
//! save, load, save yields identical bytes.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{AnnError, NetworkModel};

pub const MODEL_MAGIC: &str = "hdi-ann-model";
pub const MODEL_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    magic: String,
    version: u64,
    checksum: String,
    model: NetworkModel,
}

fn checksum(model: &NetworkModel) -> String {
    let compact = serde_json::to_string(model).expect("model serializes");
    hex::encode(Sha256::digest(compact.as_bytes()))
}

pub fn model_to_string(model: &NetworkModel) -> String {
    let file = ModelFile {
        magic: MODEL_MAGIC.to_string(),
        version: MODEL_VERSION,
        checksum: checksum(model),
        model: model.clone(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("model serializes");
    text.push('\n');
    text
}

pub fn save_model<W: Write>(model: &NetworkModel, mut sink: W) -> Result<(), AnnError> {
    sink.write_all(model_to_string(model).as_bytes())?;
    Ok(())
}

pub fn load_model<R: Read>(mut source: R) -> Result<NetworkModel, AnnError> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| AnnError::CorruptModelFile(format!("unreadable: {e}")))?;
    let corrupt = |msg: String| AnnError::CorruptModelFile(msg);

    let value: Value =
        serde_json::from_str(&text).map_err(|e| corrupt(format!("not JSON: {e}")))?;
    match value.get("magic").and_then(Value::as_str) {
        Some(MODEL_MAGIC) => {}
        other => return Err(corrupt(format!("bad magic {other:?}"))),
    }
    match value.get("version").and_then(Value::as_u64) {
        Some(MODEL_VERSION) => {}
        other => {
            return Err(corrupt(format!(
                "unsupported version {other:?}, expected {MODEL_VERSION}"
            )))
        }
    }
    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| corrupt(format!("bad layout: {e}")))?;
    let actual = checksum(&file.model);
    if actual != file.checksum {
        return Err(corrupt(format!(
            "checksum mismatch: file says {}, content hashes to {actual}",
            file.checksum
        )));
    }
    file.model
        .validate()
        .map_err(|e| corrupt(format!("inconsistent model: {e}")))?;
    Ok(file.model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ann::{init_network, Activation};
    use crate::features::{Scaler, ScalingMethod};
    use crate::matrix::Matrix;

    fn model() -> NetworkModel {
        let mut m = init_network(&[5, 20, 4], Activation::Sigmoid, 42).unwrap();
        let data =
            Matrix::from_rows(&[[1.0, 2.0, 3.0, 4.0, 5.0], [2.0, 2.5, 3.0, 1e9, 0.1]]).unwrap();
        m.set_scaling(Some(Scaler::fit(ScalingMethod::MinMax, &data)));
        m
    }

    #[test]
    fn save_load_save_is_byte_identical() {
        let m = model();
        let first = model_to_string(&m);
        let loaded = load_model(first.as_bytes()).unwrap();
        assert_eq!(loaded, m);
        assert_eq!(model_to_string(&loaded), first);
    }

    #[test]
    fn version_change_is_corrupt() {
        let text = model_to_string(&model()).replacen("\"version\": 1", "\"version\": 3", 1);
        let err = load_model(text.as_bytes()).unwrap_err();
        assert!(
            matches!(err, AnnError::CorruptModelFile(ref m) if m.contains("version")),
            "{err}"
        );
    }

    #[test]
    fn tampered_weight_fails_checksum() {
        let m = model();
        let text = model_to_string(&m);
        let w = m.weights()[0].get(0, 0).to_string();
        let tampered = text.replacen(&w, "0.125", 1);
        assert_ne!(tampered, text);
        let err = load_model(tampered.as_bytes()).unwrap_err();
        assert!(
            matches!(err, AnnError::CorruptModelFile(ref m) if m.contains("checksum")),
            "{err}"
        );
    }

    #[test]
    fn other_corruptions() {
        for text in [
            "",
            "{}",
            "[1,2]",
            "{\"magic\":\"hdi-ann-model\",\"version\":1}",
        ] {
            assert!(matches!(
                load_model(text.as_bytes()),
                Err(AnnError::CorruptModelFile(_))
            ));
        }
    }
}
