use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use polycurv::Vec3;
use serde_json::{Number, Value};

/// A float with 17 significant digits; `null` if not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    serde_json::from_str::<Number>(&s).map(Value::Number).unwrap_or(Value::Null)
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn vec3(v: &Vec3) -> Value {
    Value::Array(v.iter().map(|&c| num(c)).collect())
}

pub fn csv_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

pub fn csv_opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, csv_num)
}

/// CSV text: a `# config` comment line, a header, and the rows.
pub fn csv_table(config: &Value, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# config {config}");
    let _ = writeln!(s, "{}", header.join(","));
    for r in rows {
        let _ = writeln!(s, "{}", r.join(","));
    }
    s
}

/// Write to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(-2.0).to_string(), "-2.0000000000000000e+0");
        assert_eq!(num(f64::NAN), Value::Null);
        let back: f64 = num(std::f64::consts::PI).to_string().parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
        assert_eq!(csv_num(f64::INFINITY), "");
    }
}
