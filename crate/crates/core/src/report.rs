//! Deterministic text output: JSON with fixed float formatting, and CSV.
//!
//! Floats are always written with 17 significant digits in exponent form,
//! so output is byte-stable and round-trips exactly. Non-finite values
//! become `null` in JSON and an empty cell in CSV.

use serde::Serialize;
use serde_json::Value;

/// `x` with 17 significant digits, e.g. `1.4142135623730951e0`.
pub fn format_float(x: f64) -> String {
    // `-0.0 + 0.0` is `+0.0`, so signed zeros print alike.
    let x = x + 0.0;
    format!("{x:.16e}")
}

fn write_string(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    const STEP: usize = 2;
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64().filter(|_| !n.is_f64()) {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64().filter(|_| !n.is_f64()) {
                out.push_str(&u.to_string());
            } else {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if x.is_finite() {
                    out.push_str(&format_float(x));
                } else {
                    out.push_str("null");
                }
            }
        }
        Value::String(s) => write_string(out, s),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Short numeric arrays (vectors) stay on one line.
            if items.len() <= 4 && items.iter().all(|x| x.is_number() || x.is_null()) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&" ".repeat(indent + STEP));
                write_value(out, x, indent + STEP);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&" ".repeat(indent + STEP));
                write_string(out, k);
                out.push_str(": ");
                write_value(out, x, indent + STEP);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push('}');
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize to JSON");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

/// One CSV cell for a float.
pub fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format_float(x)
    } else {
        String::new()
    }
}

/// Joins rows with `,` and LF, with a header row first.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}
