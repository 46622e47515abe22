//! JSON signature files and the short inline notation used on the command line.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{SigError, Signature};
use crate::exactnum::{format_scalar, parse_scalar, Mode, ParseError};

#[derive(Debug, Error)]
pub enum SignatureFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad scalar {text:?}: {source}")]
    Scalar { text: String, source: ParseError },
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("{0}")]
    Inconsistent(String),
    #[error(transparent)]
    Signature(#[from] SigError),
}

#[derive(Debug, Serialize, Deserialize)]
struct SignatureDoc {
    #[serde(default = "default_format")]
    format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symmetric: Option<Vec<String>>,
}

fn default_format() -> u32 {
    1
}

fn parse_all(texts: &[String], mode: Mode) -> Result<Vec<crate::exactnum::Scalar>, SignatureFileError> {
    texts
        .iter()
        .map(|t| {
            parse_scalar(t, mode)
                .map_err(|source| SignatureFileError::Scalar { text: t.clone(), source })
        })
        .collect()
}

/// Parses a signature document. Returns the optional name with the signature.
pub fn parse_signature_json(
    value: &serde_json::Value,
    default_mode: Mode,
) -> Result<(Option<String>, Signature), SignatureFileError> {
    let doc: SignatureDoc = serde_json::from_value(value.clone())?;
    if doc.format != 1 {
        return Err(SignatureFileError::Version(doc.format));
    }
    let mode = match &doc.mode {
        Some(m) => m.parse().map_err(SignatureFileError::Inconsistent)?,
        None => default_mode,
    };
    let sig = match (&doc.entries, &doc.symmetric) {
        (Some(entries), sym) => {
            let s = Signature::from_entries(parse_all(entries, mode)?)?;
            if let Some(sym) = sym {
                let expanded = Signature::symmetric(&parse_all(sym, mode)?)?;
                if expanded != s {
                    return Err(SignatureFileError::Inconsistent(
                        "\"symmetric\" disagrees with \"entries\"".into(),
                    ));
                }
            }
            s
        }
        (None, Some(sym)) => Signature::symmetric(&parse_all(sym, mode)?)?,
        (None, None) => {
            return Err(SignatureFileError::Inconsistent(
                "signature needs \"entries\" or \"symmetric\"".into(),
            ))
        }
    };
    if let Some(arity) = doc.arity {
        if arity != sig.arity() {
            return Err(SignatureFileError::Inconsistent(format!(
                "declared arity {arity} but table has arity {}",
                sig.arity()
            )));
        }
    }
    Ok((doc.name, sig))
}

pub fn signature_to_json(name: Option<&str>, sig: &Signature) -> serde_json::Value {
    let doc = SignatureDoc {
        format: 1,
        name: name.map(str::to_string),
        arity: Some(sig.arity()),
        mode: Some(sig.mode().to_string()),
        entries: Some(sig.entries().iter().map(format_scalar).collect()),
        symmetric: sig
            .detect_symmetric()
            .map(|s| s.values.iter().map(format_scalar).collect()),
    };
    serde_json::to_value(doc).expect("signature serializes")
}

/// Loads a signature from a path, or from the inline forms `sym:1,0,1` and
/// `table:1,0,0,1`.
pub fn load_signature(spec: &str, mode: Mode) -> Result<(Option<String>, Signature), SignatureFileError> {
    if let Some(rest) = spec.strip_prefix("sym:") {
        let values = split_list(rest);
        return Ok((None, Signature::symmetric(&parse_all(&values, mode)?)?));
    }
    if let Some(rest) = spec.strip_prefix("table:") {
        let values = split_list(rest);
        return Ok((None, Signature::from_entries(parse_all(&values, mode)?)?));
    }
    let text = std::fs::read_to_string(Path::new(spec))
        .map_err(|source| SignatureFileError::Io { path: spec.to_string(), source })?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    parse_signature_json(&value, mode)
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn symmetric_only_documents_expand() {
        let v = json!({"format": 1, "name": "eq3", "arity": 3, "symmetric": ["1", "0", "0", "1"]});
        let (name, sig) = parse_signature_json(&v, Mode::Exact).unwrap();
        assert_eq!(name.as_deref(), Some("eq3"));
        assert_eq!(sig, Signature::equality(3, Mode::Exact));
    }

    #[test]
    fn round_trip_through_json() {
        let sig = Signature::from_ints(&[1, 0, 0, 2], Mode::Exact).unwrap();
        let v = signature_to_json(Some("f"), &sig);
        let (_, back) = parse_signature_json(&v, Mode::Exact).unwrap();
        assert_eq!(back, sig);
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let v = json!({"arity": 2, "entries": ["1", "0"]});
        assert!(matches!(parse_signature_json(&v, Mode::Exact), Err(SignatureFileError::Inconsistent(_))));
        let v = json!({"format": 2, "entries": ["1", "0"]});
        assert!(matches!(parse_signature_json(&v, Mode::Exact), Err(SignatureFileError::Version(2))));
        let v = json!({"entries": ["1", "q"]});
        assert!(matches!(parse_signature_json(&v, Mode::Exact), Err(SignatureFileError::Scalar { .. })));
    }

    #[test]
    fn inline_forms() {
        let (_, s) = load_signature("sym:1,0,1", Mode::Exact).unwrap();
        assert_eq!(s, Signature::equality(2, Mode::Exact));
        let (_, t) = load_signature("table:1, 0, 0, i", Mode::Exact).unwrap();
        assert_eq!(t.arity(), 2);
    }
}
