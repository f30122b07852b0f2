//! Run manifests: enough to reproduce a run byte for byte.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct Manifest {
    command: String,
    version: &'static str,
    seed: Option<u64>,
    parameters: Value,
    inputs: Vec<Value>,
    outputs: Vec<String>,
    exit_code: u8,
}

impl Manifest {
    pub fn new(command: String) -> Self {
        Manifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed: None,
            parameters: Value::Object(Map::new()),
            inputs: Vec::new(),
            outputs: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn parameters<T: Serialize>(&mut self, args: &T) {
        self.parameters = serde_json::to_value(args).unwrap_or(Value::Null);
    }

    pub fn seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(json!({
            "path": path.display().to_string(),
            "sha256": hex::encode(Sha256::digest(bytes)),
        }));
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn failure(&mut self, code: u8) {
        self.exit_code = code;
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
