use std::path::Path;

use jsonschema::{Retrieve, Uri, Validator};
use serde_json::{json, Value};

fn load(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Resolves `$ref`s by file name within the shipped schema directory.
struct SchemaDir;

impl Retrieve for SchemaDir {
    fn retrieve(&self, uri: &Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.path().as_str().rsplit('/').next().unwrap_or_default().to_string();
        Ok(load(&name))
    }
}

fn validator(name: &str) -> Validator {
    jsonschema::options().with_retriever(SchemaDir).build(&load(name)).unwrap()
}

#[test]
fn weight_schema() {
    let v = validator("weight.schema.json");
    assert!(v.is_valid(&json!({"pieces": [["2", "0"], ["0", "3"]], "scale": "3/2"})));
    assert!(v.is_valid(&json!({"pieces": [[1, 0]]})));
    assert!(!v.is_valid(&json!({"pieces": [["x"]]})));
    assert!(!v.is_valid(&json!({"scale": "1"})));
}

#[test]
fn diagonal_schema() {
    let v = validator("diagonal.schema.json");
    assert!(v.is_valid(&json!({"a": ["2/1", "2/1"]})));
    assert!(!v.is_valid(&json!({"a": []})));
}

#[test]
fn ideal_schema() {
    let v = validator("ideal.schema.json");
    assert!(v.is_valid(&json!({"dim": 2, "generators": [[1, 0], [0, 2]]})));
    assert!(!v.is_valid(&json!({"dim": 2, "generators": [[-1, 0]]})));
}

#[test]
fn job_schema() {
    let v = validator("job.schema.json");
    assert!(v.is_valid(&json!({"command": "jump", "g": "1,0", "a": "2/1,2/1"})));
    assert!(v.is_valid(&json!({"command": "integral", "a": "2,2", "samples": 20000, "seed": 3})));
    assert!(!v.is_valid(&json!({"command": "integral", "a": "2,2", "samples": 20000})));
    assert!(!v.is_valid(&json!({"command": "run"})));
    assert!(!v.is_valid(&json!({"g": "1,0"})));
}

#[test]
fn cli_accepts_schema_shaped_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(&w, json!({"pieces": [["1", "0"], ["0", "2"]]}).to_string()).unwrap();
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_plurival"))
        .args(["lct", "--weight", w.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "3/2");
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_plurival"))
        .args(["jump", "--ideal", r#"{"dim":2,"generators":[[1,0],[0,1]]}"#, "--a", r#"{"a":["2","2"]}"#])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "3/2");
}
