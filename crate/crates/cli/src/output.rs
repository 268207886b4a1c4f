use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::failure::Failure;

fn first_null(v: &Value, path: &str) -> Option<String> {
    match v {
        Value::Null => Some(path.to_string()),
        Value::Array(items) => items.iter().enumerate().find_map(|(i, x)| first_null(x, &format!("{path}[{i}]"))),
        Value::Object(map) => map.iter().find_map(|(k, x)| first_null(x, &format!("{path}.{k}"))),
        _ => None,
    }
}

/// Serializes `value` as one line of JSON. serde_json turns NaN and
/// infinities into `null`, and no output field is ever null, so a null
/// anywhere means a non-finite number and the write is refused.
pub fn json_line<T: Serialize>(value: &T) -> Result<String, Failure> {
    let tree = serde_json::to_value(value).map_err(Failure::runtime)?;
    if let Some(path) = first_null(&tree, "$") {
        return Err(Failure::runtime(format!("non-finite value at {path}; nothing written")));
    }
    Ok(tree.to_string())
}

pub fn ensure_finite<'a>(values: impl IntoIterator<Item = &'a f64>, what: &str) -> Result<(), Failure> {
    if values.into_iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Failure::runtime(format!("non-finite value in {what}; nothing written")))
    }
}

/// Writes the fully rendered output in one go so that a late failure never
/// leaves partial data on stdout.
pub fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|e| Failure::runtime(format!("writing output: {e}")))
}

pub fn csv_text(write_rows: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write_rows(&mut w).map_err(Failure::runtime)?;
    let bytes = w.into_inner().map_err(|e| Failure::runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(Failure::runtime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_numbers_are_refused() {
        assert!(json_line(&serde_json::json!({"a": [1.0, 2.0]})).is_ok());
        let err = json_line(&vec![1.0, f64::NAN]).unwrap_err();
        assert_eq!(err.code, crate::failure::RUNTIME);
        assert!(err.message.contains("$[1]"));
        assert!(json_line(&serde_json::json!({"x": {"y": f64::INFINITY}})).is_err());
    }
}
