use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Rounds every float to 15 significant digits and turns `-0` into `0`.
pub fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or_default();
            let r: f64 = format!("{x:.14e}").parse().unwrap_or(x);
            Value::from(if r == 0.0 { 0.0 } else { r })
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_numbers).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_numbers(v))).collect()),
        other => other,
    }
}

/// Writes the rounded document to `out`, or stdout when absent.
pub fn emit(doc: Value, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&round_numbers(doc))
        .map_err(|e| CliError::Consistency(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        let v = round_numbers(json!({"a": [32.0 / 3.0, -0.0, 1e-17], "b": 3, "c": "x"}));
        assert_eq!(v, json!({"a": [10.6666666666667, 0.0, 1e-17], "b": 3, "c": "x"}));
    }

    #[test]
    fn rounding_is_idempotent() {
        let once = round_numbers(json!([0.1 + 0.2, 2.0f64.sqrt()]));
        assert_eq!(round_numbers(once.clone()), once);
    }
}
