//! JSON job specs: `{"command": "jump", "g": "1,0", "a": "2/1,2/1"}`.
//! Every other key becomes the matching `--kebab-case` flag.

use serde_json::Value;

use crate::Failure;

const COMMANDS: [&str; 13] = [
    "lct", "jump", "type", "valuation", "mideal", "tian", "integral", "approx", "thmA", "include", "divides",
    "green", "verify",
];

const STOCHASTIC_KEYS: [&str; 1] = ["samples"];

/// Shipped job schema; a job must validate before it runs.
pub const JOB_SCHEMA: &str = include_str!("../schemas/job.schema.json");

fn validate(spec: &Value) -> Result<(), Failure> {
    let schema: Value = serde_json::from_str(JOB_SCHEMA).expect("job schema is valid JSON");
    let validator = jsonschema::validator_for(&schema).expect("job schema compiles");
    let problems: Vec<String> = validator
        .iter_errors(spec)
        .map(|e| {
            let at = e.instance_path().to_string();
            if at.is_empty() {
                e.to_string()
            } else {
                format!("{at}: {e}")
            }
        })
        .collect();
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("job does not match schema: {}", problems.join("; "))))
    }
}

fn flag_value(key: &str, v: &Value) -> Result<Option<String>, Failure> {
    Ok(match v {
        Value::Null => None,
        Value::Bool(true) => Some(String::new()),
        Value::Bool(false) => None,
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(items) => {
            let parts = items
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(Failure::Usage(format!("job key {key:?}: arrays hold strings or numbers"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(parts.join(","))
        }
        Value::Object(_) => Some(v.to_string()),
    })
}

/// Converts a job spec into command-line arguments.
pub fn to_args(raw: &str) -> Result<Vec<String>, Failure> {
    let text = if raw.trim_start().starts_with('{') {
        raw.to_string()
    } else {
        std::fs::read_to_string(raw).map_err(|e| Failure::Io(format!("cannot read job {raw}: {e}")))?
    };
    let spec: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("job is not valid JSON: {e}")))?;
    if STOCHASTIC_KEYS.iter().any(|k| spec.get(*k).is_some()) && spec.get("seed").is_none() {
        return Err(Failure::Usage("stochastic jobs need a \"seed\"".into()));
    }
    validate(&spec)?;
    let Value::Object(map) = spec else {
        return Err(Failure::Usage("job must be a JSON object".into()));
    };
    let command = match map.get("command") {
        Some(Value::String(c)) if COMMANDS.contains(&c.as_str()) => c.clone(),
        _ => return Err(Failure::Usage(format!("job command must be one of {}", COMMANDS.join(", ")))),
    };
    let mut args = vec!["plurival".to_string(), command];
    for (key, value) in &map {
        if key == "command" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match flag_value(key, value)? {
            Some(v) if v.is_empty() => args.push(flag),
            Some(v) => {
                args.push(flag);
                args.push(v);
            }
            None => {}
        }
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_gates_jobs() {
        let args = to_args(r#"{"command":"jump","g":"1,0","a":["2/1","2/1"]}"#).ok().unwrap();
        assert_eq!(args, ["plurival", "jump", "--a", "2/1,2/1", "--g", "1,0"]);
        assert!(to_args(r#"{"command":"run","job":"x"}"#).is_err());
        assert!(to_args(r#"{"command":"lct","a":"2,2","colour":"red"}"#).is_err());
        assert!(to_args(r#"{"command":"integral","a":"2,2","samples":10}"#).is_err());
        assert!(to_args(r#"{"command":"integral","a":"2,2","samples":20000,"seed":1}"#).is_ok());
        assert!(to_args("[1,2]").is_err());
    }
}
