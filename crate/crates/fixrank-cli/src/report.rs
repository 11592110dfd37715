//! Report skeleton shared by all commands: the command name, a digest of
//! every input file, the effective parameters, and the numeric results.
//! Nothing time- or host-dependent goes in, so identical invocations emit
//! identical bytes.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::run::CliError;

pub fn digest_file(path: &Path) -> Result<String, CliError> {
    let bytes =
        fs::read(path).map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let out = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for b in out {
        hex.push_str(&format!("{:02x}", b));
    }
    Ok(hex)
}

pub fn report(command: &str, inputs: Value, parameters: Value, results: Value) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "parameters": parameters,
        "results": results,
    })
}
