//! JSON gadget files.
//!
//! ```json
//! {"format": 1, "edges": 3, "dangling": [1, 2],
//!  "vertices": [{"signature": "sym:1,0,1", "edges": [0, 1], "side": "left"}, …],
//!  "rotation": [[0, 1], …]}
//! ```
//! Rotations list variable slots (0-based) clockwise; `side` and `rotation`
//! are optional.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use super::{GadgetError, GadgetGraph, GadgetVertex};
use crate::exactnum::Mode;
use crate::holant::Side;
use crate::signature::{load_signature, parse_signature_json, signature_to_json, Signature, SignatureFileError};

#[derive(Debug, Error)]
pub enum GadgetFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("bad signature: {0}")]
    Signature(#[from] SignatureFileError),
    #[error("unknown side {0:?}")]
    Side(String),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

#[derive(Deserialize)]
struct GadgetDoc {
    #[serde(default = "one")]
    format: u32,
    edges: usize,
    dangling: Vec<usize>,
    vertices: Vec<VertexDoc>,
    #[serde(default)]
    rotation: Option<Vec<Vec<usize>>>,
}

fn one() -> u32 {
    1
}

#[derive(Deserialize)]
struct VertexDoc {
    signature: Value,
    edges: Vec<usize>,
    #[serde(default)]
    side: Option<String>,
}

fn signature_ref(value: &Value, mode: Mode, base: &Path) -> Result<Signature, GadgetFileError> {
    match value {
        Value::String(s) => {
            let resolved = if s.starts_with("sym:") || s.starts_with("table:") {
                s.clone()
            } else {
                base.join(s).to_string_lossy().into_owned()
            };
            Ok(load_signature(&resolved, mode)?.1)
        }
        other => Ok(parse_signature_json(other, mode)?.1),
    }
}

pub fn parse_gadget_json(value: &Value, mode: Mode, base: &Path) -> Result<GadgetGraph, GadgetFileError> {
    let doc: GadgetDoc = serde_json::from_value(value.clone())?;
    if doc.format != 1 {
        return Err(GadgetFileError::Version(doc.format));
    }
    let vertices = doc
        .vertices
        .into_iter()
        .map(|v| {
            let side = match v.side.as_deref() {
                None => None,
                Some("left") => Some(Side::Left),
                Some("right") => Some(Side::Right),
                Some(other) => return Err(GadgetFileError::Side(other.to_string())),
            };
            Ok(GadgetVertex { signature: signature_ref(&v.signature, mode, base)?, edges: v.edges, side })
        })
        .collect::<Result<Vec<_>, GadgetFileError>>()?;
    Ok(GadgetGraph::new(vertices, doc.edges, doc.dangling, doc.rotation)?)
}

pub fn load_gadget(path: &str, mode: Mode) -> Result<GadgetGraph, GadgetFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| GadgetFileError::Io { path: path.to_string(), source })?;
    let value: Value = serde_json::from_str(&text)?;
    let base = Path::new(path).parent().map(Path::to_path_buf).unwrap_or_default();
    parse_gadget_json(&value, mode, &base)
}

pub fn gadget_to_json(g: &GadgetGraph) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .iter()
        .map(|v| {
            let mut obj = json!({"signature": signature_to_json(None, &v.signature), "edges": v.edges});
            if let Some(side) = v.side {
                obj["side"] = json!(if side == Side::Left { "left" } else { "right" });
            }
            obj
        })
        .collect();
    let mut doc = json!({
        "format": 1,
        "edges": g.edge_count(),
        "dangling": g.dangling(),
        "vertices": vertices,
    });
    if let Some(rot) = g.rotation() {
        doc["rotation"] = json!(rot);
    }
    doc
}
