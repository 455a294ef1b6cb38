//! Number formatting and output sinks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// C-style `%.*g`: `precision` significant digits, trailing zeros removed,
/// exponent form when the decimal exponent is below −4 or at least
/// `precision`.
pub fn fmt_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = precision.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Serializes `value` with every float rounded to `precision` significant
/// digits; non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T, precision: usize) -> Result<String, CliError> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    round_floats(&mut v, precision);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn round_floats(v: &mut Value, precision: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = fmt_g(x, precision)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_floats(x, precision)),
        Value::Object(map) => map.values_mut().for_each(|x| round_floats(x, precision)),
        _ => {}
    }
}

/// CSV text with the given header; rows are already formatted fields.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    let io = |e: io::Error| CliError::Io(e.to_string());
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?);
            w.write_all(text.as_bytes()).map_err(io)?;
            w.flush().map_err(io)
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io)?;
            out.flush().map_err(io)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(fmt_g(-2.51338, 9), "-2.51338");
        assert_eq!(fmt_g(0.0023241, 6), "0.0023241");
        assert_eq!(fmt_g(1e-5, 9), "1e-05");
        assert_eq!(fmt_g(123456789.0, 6), "1.23457e+08");
        assert_eq!(fmt_g(100.0, 9), "100");
        assert_eq!(fmt_g(1.0 / 3.0, 6), "0.333333");
        assert_eq!(fmt_g(999999.5, 6), "1e+06");
        assert_eq!(fmt_g(0.0, 9), "0");
        assert_eq!(fmt_g(f64::NAN, 9), "nan");
    }

    #[test]
    fn json_rounds_floats() {
        let s = to_json(&serde_json::json!({"a": 1.0 / 3.0, "b": [2, f64::NAN]}), 6).unwrap();
        assert!(s.contains("0.333333") && !s.contains("0.3333333"));
        assert!(s.contains("null"));
    }

    #[test]
    fn csv_uses_lf() {
        let s = to_csv(&["a", "b"], &[vec!["1".into(), "2".into()]]).unwrap();
        assert_eq!(s, "a,b\n1,2\n");
    }
}
