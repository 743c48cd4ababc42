//! Output shaping and flag-value parsing.
//!
//! Everything the binary prints flows through this module so the output
//! contract lives in one place:
//!
//! - JSON documents are serialized with the same 17-significant-digit
//!   scientific float format the expansion writer uses, so every number
//!   round-trips losslessly and repeated runs emit identical bytes.
//! - CSV is reserved for sample tables (radius sweeps, per-degree mass,
//!   per-cell isometry rows); the same float formatter applies.
//! - Complex numbers appear in JSON as `{"re": …, "im": …}` objects.
//!
//! The parsers accept the comma-separated list syntax used by flags like
//! `--xi 1,0.5,-0.25` and `--at 0.5+0.25i,-1`. Errors name the offending
//! entry rather than the whole list.

use hida::json::{format_f64, SciFormatter};
use hida::poly1d::Polynomial1D;
use hida::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::str::FromStr;

/// Serialize a report as compact JSON with full-precision floats.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidConfig(format!("JSON encoding failed: {e}")))?;
    Ok(String::from_utf8(buf).expect("JSON output is ASCII"))
}

/// A complex value in the JSON output shape.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

/// Build a CSV document: header row plus one line per record, no trailing
/// newline (the writer appends exactly one).
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    for row in rows {
        out.push('\n');
        out.push_str(&row.join(","));
    }
    out
}

/// Render one float for CSV cells: same format as the JSON writer.
pub fn csv_f64(v: f64) -> String {
    format_f64(v)
}

/// Parse a comma-separated list of reals, e.g. `0.5,1,2,4`.
pub fn parse_f64_list(text: &str, flag: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>().map_err(|_| {
                Error::InvalidConfig(format!("{flag} entry '{part}' is not a number"))
            })
        })
        .collect()
}

/// Parse a comma-separated list of complex numbers in `a+bi` form, e.g.
/// `0.5+0.25i,-1,2i`.
pub fn parse_complex_list(text: &str, flag: &str) -> Result<Vec<Complex64>> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            Complex64::from_str(part).map_err(|_| {
                Error::InvalidConfig(format!(
                    "{flag} entry '{part}' is not a complex number (expected forms: 1.5, 2i, 1+0.5i)"
                ))
            })
        })
        .collect()
}

/// Print a real-coefficient polynomial the way a person would write it:
/// highest power first, unit coefficients omitted, explicit `*` between a
/// coefficient and its power. Degree-three Hermite, for example, renders
/// as `x^3 - 3*x`.
///
/// Coefficients that are exact integers print as integers; anything else
/// falls back to the full-precision float format.
pub fn polynomial_text(p: &Polynomial1D) -> String {
    let Some(degree) = p.degree() else {
        return "0".to_string();
    };
    let mut out = String::new();
    for k in (0..=degree).rev() {
        let c = p.coeff(k).re;
        if c == 0.0 {
            continue;
        }
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        let magnitude = c.abs();
        let mag_text = coefficient_text(magnitude);
        match k {
            0 => out.push_str(&mag_text),
            _ => {
                if magnitude != 1.0 {
                    out.push_str(&mag_text);
                    out.push('*');
                }
                out.push('x');
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
    }
    out
}

/// Integer rendering when the value is an exact integer of reasonable
/// size, full-precision scientific notation otherwise.
fn coefficient_text(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 9.0e18 {
        format!("{}", v as i128)
    } else {
        format_f64(v)
    }
}
