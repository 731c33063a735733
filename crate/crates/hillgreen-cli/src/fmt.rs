//! Deterministic serialization. serde_json's default float printing is
//! shortest-roundtrip, which varies in width from value to value; every float
//! here goes out as {:.16e} so that identical invocations are byte-identical
//! and diffable. Integers stay plain, map keys come out in BTreeMap order.

use serde_json::Value;

/// 17 significant digits, exponent form.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact one-line JSON with fixed float formatting.
pub fn json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}

/// Flatten a JSON value into "quantity,value" CSV rows. Nested objects and
/// arrays become dotted paths (constants.k1, w.0.1).
pub fn kv_csv(v: &Value) -> String {
    let mut out = String::from("quantity,value\n");
    flatten("", v, &mut out);
    out
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let path = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                flatten(&path(k), item, out);
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&path(&i.to_string()), item, out);
            }
        }
        scalar => {
            out.push_str(prefix);
            out.push(',');
            out.push_str(&scalar_csv(scalar));
            out.push('\n');
        }
    }
}

pub fn scalar_csv(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                u.to_string()
            } else if let Some(i) = n.as_i64() {
                i.to_string()
            } else {
                float(n.as_f64().unwrap_or(f64::NAN))
            }
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_are_fixed_width_scientific() {
        let v = json!({ "x": 1.0, "n": 3usize, "s": "dirichlet", "b": true });
        let text = super::json(&v);
        assert_eq!(
            text,
            "{\"b\":true,\"n\":3,\"s\":\"dirichlet\",\"x\":1.0000000000000000e0}\n"
        );
    }

    #[test]
    fn nested_values_flatten_to_dotted_paths() {
        let v = json!({ "w": [[1.0, 2.0]], "inner": { "k1": 0.5 } });
        let text = kv_csv(&v);
        assert!(text.starts_with("quantity,value\n"));
        assert!(text.contains("inner.k1,5.0000000000000000e-1\n"));
        assert!(text.contains("w.0.1,2.0000000000000000e0\n"));
    }
}
