use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::FieldKind;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Record of one run: command line, seed, field, hashes of inputs and
/// outputs, version and wall-clock time.
#[derive(Debug)]
pub struct RunManifest {
    command_line: Vec<String>,
    seed: u64,
    field: Option<FieldKind>,
    inputs: Vec<(String, String)>,
    outputs: Vec<(String, String)>,
    started: Instant,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, seed: u64) -> Self {
        RunManifest { command_line, seed, field: None, inputs: Vec::new(), outputs: Vec::new(), started: Instant::now() }
    }

    pub fn set_field(&mut self, field: FieldKind) {
        self.field = Some(field);
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push((path.display().to_string(), sha256_hex(bytes)));
    }

    pub fn add_output(&mut self, path: &Path, bytes: &[u8]) {
        self.outputs.push((path.display().to_string(), sha256_hex(bytes)));
    }

    pub fn finish(&self) -> Value {
        let hashes = |v: &[(String, String)]| -> Value {
            v.iter().map(|(p, h)| json!({"path": p, "sha256": h})).collect::<Vec<_>>().into()
        };
        json!({
            "command_line": self.command_line,
            "seed": self.seed,
            "field": self.field.map(FieldKind::tag),
            "inputs": hashes(&self.inputs),
            "outputs": hashes(&self.outputs),
            "version": env!("CARGO_PKG_VERSION"),
            "threads": crate::parallel::thread_count(),
            "wall_clock_seconds": self.started.elapsed().as_secs_f64(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
