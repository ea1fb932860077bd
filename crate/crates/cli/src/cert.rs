//! JSON-lines certificate envelope.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Scan,
    Kraus,
    Sieve,
    Bounds,
    Threelog,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub stage: Stage,
    pub inputs: Value,
    pub outputs: Value,
    /// SHA-256 of the canonical `{schema, stage, inputs, outputs}` text.
    pub hash: String,
    /// Wall-clock data; never hashed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Value>,
}

impl Certificate {
    pub fn new(stage: Stage, inputs: Value, outputs: Value, timing: Option<Value>) -> Self {
        let mut c = Certificate { schema: SCHEMA_VERSION, stage, inputs, outputs, hash: String::new(), timing };
        c.hash = c.payload_hash();
        c
    }

    pub fn payload_hash(&self) -> String {
        let payload = serde_json::json!({
            "schema": self.schema,
            "stage": self.stage,
            "inputs": self.inputs,
            "outputs": self.outputs,
        });
        hex::encode(Sha256::digest(payload.to_string().as_bytes()))
    }
}

/// Single writer for certificate lines: a file or standard output.
pub struct CertWriter {
    out: Box<dyn Write>,
    label: String,
    pub written: usize,
}

impl CertWriter {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => {
                let f = std::fs::File::create(p).map_err(|e| CliError::io(p, e))?;
                Ok(CertWriter { out: Box::new(std::io::BufWriter::new(f)), label: p.display().to_string(), written: 0 })
            }
            None => Ok(CertWriter { out: Box::new(std::io::stdout().lock()), label: "stdout".into(), written: 0 }),
        }
    }

    pub fn write(&mut self, c: &Certificate) -> Result<(), CliError> {
        let line = serde_json::to_string(c).map_err(|e| CliError::Compute(e.to_string()))?;
        writeln!(self.out, "{line}").map_err(|e| CliError::Io(format!("{}: {e}", self.label)))?;
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<usize, CliError> {
        self.out.flush().map_err(|e| CliError::Io(format!("{}: {e}", self.label)))?;
        Ok(self.written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hash_ignores_timing_and_key_order() {
        let a = Certificate::new(Stage::Kraus, json!({"p": 7, "kind": "fib"}), json!({"k": 2}), Some(json!({"ms": 3})));
        let b = Certificate::new(Stage::Kraus, json!({"kind": "fib", "p": 7}), json!({"k": 2}), None);
        assert_eq!(a.hash, b.hash);
        let c = Certificate::new(Stage::Kraus, json!({"kind": "fib", "p": 7}), json!({"k": 3}), None);
        assert_ne!(a.hash, c.hash);
    }
}
