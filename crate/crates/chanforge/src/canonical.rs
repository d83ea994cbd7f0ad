//! Canonical number and JSON formatting.
//!
//! Every float leaving this crate is printed with 17 significant digits in
//! scientific notation, which round-trips any f64 exactly and makes file
//! output a pure function of the data. Unit changes that are powers of ten
//! (seconds ↔ nanoseconds in the ray CSV) are done by shifting the decimal
//! exponent in the *string*, never by multiplying the float, so the
//! parse/write cycle is lossless and idempotent.

use std::io::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Canonical 17-significant-digit representation, e.g. `3.3356409519815204e-7`.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x }; // collapse -0.0
    format!("{:.16e}", x)
}

/// Canonical representation of `x · 10^shift`, computed textually.
pub fn fmt_f64_shifted(x: f64, shift: i32) -> String {
    let s = fmt_f64(x);
    let (mant, exp) = s.split_once('e').expect("canonical form has exponent");
    let e: i32 = exp.parse().expect("canonical exponent is an integer");
    format!("{mant}e{}", e + shift)
}

/// Parses a decimal string as `value · 10^shift`, exactly.
///
/// The exponent shift happens on the digit string before the (correctly
/// rounded) f64 conversion, so `parse_f64_shifted(fmt_f64_shifted(x, k), -k)`
/// returns `x` bit-for-bit.
pub fn parse_f64_shifted(s: &str, shift: i32) -> Option<f64> {
    let t = s.trim();
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => ("-", r),
        None => ("", t.strip_prefix('+').unwrap_or(t)),
    };
    let (mant, exp) = match rest.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let e_total = exp + shift as i64 - frac_part.len() as i64;
    format!("{sign}{digits}e{e_total}").parse::<f64>().ok()
}

/// Plain parse with full validation (finite result required).
pub fn parse_f64(s: &str) -> Option<f64> {
    let v = parse_f64_shifted(s, 0)?;
    v.is_finite().then_some(v)
}

/// serde_json formatter that prints floats in canonical 17-digit form.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

/// Serializes to compact JSON with canonical float formatting.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = to_canonical_json(value);
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn read_json_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}
