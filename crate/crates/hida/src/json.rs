//! JSON interchange format for chaos expansions.
//!
//! The document shape is
//!
//! ```json
//! {
//!   "dim": 2,
//!   "max_degree": 3,
//!   "terms": [
//!     { "alpha": [[0, 1], [1, 2]], "re": 0.5, "im": 0.0 }
//!   ]
//! }
//! ```
//!
//! `alpha` lists `[dimension, exponent]` pairs; exponents must be positive
//! and dimensions unique within a term. Terms are emitted in the expansion's
//! canonical order and floats are printed with 17 significant digits, so
//! writing is deterministic and `from_json(to_json(a)) == a` holds exactly
//! (the crate enables serde_json's `float_roundtrip` parser for the reverse
//! direction).
//!
//! Loading validates the document and reports the first offending term by
//! position: duplicate multi-indices (within a term or across terms), zero
//! exponents, out-of-range dimensions and over-degree terms are all errors
//! rather than silent fixes. Exact-zero coefficients are legal on input and
//! are pruned, matching the in-memory convention.

use crate::chaos::ChaosExpansion;
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io;

#[derive(Serialize, Deserialize)]
struct ExpansionDoc {
    dim: usize,
    max_degree: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    alpha: Vec<(usize, u32)>,
    re: f64,
    im: f64,
}

/// Serialize an expansion to a compact JSON string.
pub fn to_json(e: &ChaosExpansion) -> Result<String> {
    let doc = ExpansionDoc {
        dim: e.dim(),
        max_degree: e.max_degree(),
        terms: e
            .terms()
            .map(|(a, c)| TermDoc {
                alpha: a.iter().map(|(d, x)| (d as usize, x)).collect(),
                re: c.re,
                im: c.im,
            })
            .collect(),
    };
    let mut buf = Vec::new();
    let fmt = SciFormatter;
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    doc.serialize(&mut ser)
        .map_err(|e| Error::InvalidExpansion {
            detail: format!("serialization failed: {e}"),
            term_index: None,
        })?;
    // The formatter only ever writes ASCII.
    Ok(String::from_utf8(buf).expect("JSON output is ASCII"))
}

/// Parse and validate an expansion from JSON text.
pub fn from_json(text: &str) -> Result<ChaosExpansion> {
    let doc: ExpansionDoc = serde_json::from_str(text).map_err(|e| Error::InvalidExpansion {
        detail: format!("malformed document: {e}"),
        term_index: None,
    })?;
    expansion_from_doc(doc)
}

fn expansion_from_doc(doc: ExpansionDoc) -> Result<ChaosExpansion> {
    let mut out = ChaosExpansion::zero(doc.dim, doc.max_degree)?;
    let mut seen: Vec<MultiIndex> = Vec::with_capacity(doc.terms.len());
    for (k, term) in doc.terms.iter().enumerate() {
        let pairs: Vec<(usize, u32)> = term.alpha.clone();
        let index = MultiIndex::from_pairs(&pairs).map_err(|e| locate(e, k))?;
        out.check_index(&index).map_err(|e| locate(e, k))?;
        if seen.contains(&index) {
            return Err(Error::InvalidExpansion {
                detail: format!("duplicate multi-index {index}"),
                term_index: Some(k),
            });
        }
        if !term.re.is_finite() || !term.im.is_finite() {
            return Err(Error::InvalidExpansion {
                detail: "non-finite coefficient".to_string(),
                term_index: Some(k),
            });
        }
        seen.push(index.clone());
        out.add_term(index, Complex64::new(term.re, term.im));
    }
    Ok(out)
}

/// Attach a term position to a validation error that arose inside a term.
fn locate(e: Error, k: usize) -> Error {
    match e {
        Error::InvalidExpansion { detail, .. } => Error::InvalidExpansion {
            detail,
            term_index: Some(k),
        },
        Error::IndexOutOfRange { index, dim } => Error::InvalidExpansion {
            detail: format!("dimension index {index} out of range for dim {dim}"),
            term_index: Some(k),
        },
        Error::DegreeTooHigh { degree, max_degree } => Error::InvalidExpansion {
            detail: format!("term degree {degree} exceeds max_degree {max_degree}"),
            term_index: Some(k),
        },
        other => other,
    }
}

/// Compact JSON formatter that prints every float with 17 significant
/// digits in scientific notation, enough for a lossless f64 round trip.
#[derive(Clone, Copy)]
pub struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if !value.is_finite() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                "non-finite float cannot be encoded as JSON",
            ));
        }
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Format one float the same way the JSON writer does. The CLI uses this for
/// CSV and report output so every emitted number carries full precision.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}
