//! JSON and CSV writers.
//!
//! JSON is the canonical format; floats print with 17 significant digits so
//! every `f64` round-trips exactly.  CSV is a lossy convenience projection.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// 17-significant-digit float rendering (`{:.16e}`), round-trip exact.
pub fn fmt_f64(value: f64) -> String {
    if value == value.trunc() && value.abs() < 1e15 {
        // keep integers readable; still exact
        format!("{value:.1}")
    } else {
        format!("{value:.16e}")
    }
}

/// serde_json formatter that renders every float with 17 significant digits.
#[derive(Default)]
pub struct Float17Formatter;

impl Formatter for Float17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_f64(value as f64).as_bytes())
    }
}

/// Serialize to a JSON string with the 17-digit float convention.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Float17Formatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}

/// A rectangular CSV table.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_roundtrip_exactly() {
        for &x in &[
            0.3,
            1.0 / 3.0,
            2.0_f64.powi(-40),
            123456.789,
            -0.000123,
            4.0,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn json_uses_17_digits() {
        #[derive(Serialize)]
        struct S {
            a: f64,
        }
        let s = to_json_string(&S { a: 0.1 }).unwrap();
        assert_eq!(s, "{\"a\":1.0000000000000001e-1}");
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["a"].as_f64().unwrap(), 0.1);
    }
}
