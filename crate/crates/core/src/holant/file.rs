//! JSON instance files.
//!
//! ```json
//! {"format": 1, "kind": "holant", "edges": 3,
//!  "vertices": [{"signature": "sym:0,1,0", "edges": [0, 2], "side": "left"}, …]}
//! {"format": 1, "kind": "csp", "variables": 3, "occurrence_bound": 3,
//!  "constraints": [{"signature": {"symmetric": ["0","1","1","0"]}, "scope": [0, 1, 2]}]}
//! {"format": 1, "kind": "graph", "vertices": 4, "edges": [[0, 1, "1"], [1, 2, "i"]]}
//! ```
//! Indices are 0-based. A signature is an inline object, an inline string
//! (`sym:…`, `table:…`) or a path relative to the instance file.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use super::{Constraint, CspInstance, HolantError, HolantInstance, HolantVertex, Side, WeightedGraph};
use crate::exactnum::{parse_scalar, Mode, ParseError};
use crate::signature::{load_signature, parse_signature_json, Signature, SignatureFileError};

#[derive(Debug, Error)]
pub enum InstanceFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("bad signature: {0}")]
    Signature(#[from] SignatureFileError),
    #[error("bad scalar {text:?}: {source}")]
    Scalar { text: String, source: ParseError },
    #[error("unknown side {0:?}")]
    Side(String),
    #[error(transparent)]
    Instance(#[from] HolantError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Holant(HolantInstance),
    Csp(CspInstance),
    Graph(WeightedGraph),
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum InstanceDoc {
    Holant {
        #[serde(default = "one")]
        format: u32,
        edges: usize,
        vertices: Vec<VertexDoc>,
    },
    Csp {
        #[serde(default = "one")]
        format: u32,
        variables: usize,
        #[serde(default)]
        occurrence_bound: Option<usize>,
        constraints: Vec<ConstraintDoc>,
    },
    Graph {
        #[serde(default = "one")]
        format: u32,
        vertices: usize,
        edges: Vec<(usize, usize, String)>,
    },
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

#[derive(Deserialize)]
struct ConstraintDoc {
    signature: Value,
    scope: Vec<usize>,
}

fn signature_ref(value: &Value, mode: Mode, base: &Path) -> Result<Signature, InstanceFileError> {
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

fn check_version(format: u32) -> Result<(), InstanceFileError> {
    if format != 1 {
        return Err(InstanceFileError::Version(format));
    }
    Ok(())
}

pub fn parse_instance_json(value: &Value, mode: Mode, base: &Path) -> Result<Instance, InstanceFileError> {
    let doc: InstanceDoc = serde_json::from_value(value.clone())?;
    match doc {
        InstanceDoc::Holant { format, edges, vertices } => {
            check_version(format)?;
            let vertices = vertices
                .into_iter()
                .map(|v| {
                    let side = match v.side.as_deref() {
                        None => None,
                        Some("left") => Some(Side::Left),
                        Some("right") => Some(Side::Right),
                        Some(other) => return Err(InstanceFileError::Side(other.to_string())),
                    };
                    Ok(HolantVertex { signature: signature_ref(&v.signature, mode, base)?, edges: v.edges, side })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Instance::Holant(HolantInstance::new(edges, vertices)?))
        }
        InstanceDoc::Csp { format, variables, occurrence_bound, constraints } => {
            check_version(format)?;
            let constraints = constraints
                .into_iter()
                .map(|c| Ok(Constraint { signature: signature_ref(&c.signature, mode, base)?, scope: c.scope }))
                .collect::<Result<Vec<_>, InstanceFileError>>()?;
            Ok(Instance::Csp(CspInstance::new(variables, constraints, occurrence_bound)?))
        }
        InstanceDoc::Graph { format, vertices, edges } => {
            check_version(format)?;
            let mut g = WeightedGraph::new(vertices, mode);
            for (u, v, w) in edges {
                if u >= vertices || v >= vertices {
                    return Err(HolantError::BadVariable(u.max(v)).into());
                }
                let weight = parse_scalar(&w, mode).map_err(|source| InstanceFileError::Scalar { text: w, source })?;
                g.add_edge(u, v, weight);
            }
            Ok(Instance::Graph(g))
        }
    }
}

pub fn load_instance(path: &str, mode: Mode) -> Result<Instance, InstanceFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| InstanceFileError::Io { path: path.to_string(), source })?;
    let value: Value = serde_json::from_str(&text)?;
    let base = Path::new(path).parent().map(Path::to_path_buf).unwrap_or_default();
    parse_instance_json(&value, mode, &base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Scalar;
    use crate::holant::{count_pm, eval_csp, eval_holant};
    use serde_json::json;

    const E: Mode = Mode::Exact;

    #[test]
    fn parses_each_kind() {
        let base = Path::new(".");
        let h = json!({"format": 1, "kind": "holant", "edges": 2, "vertices": [
            {"signature": "sym:1,0,1", "edges": [0, 1], "side": "left"},
            {"signature": {"symmetric": ["1", "0", "1"]}, "edges": [0, 1], "side": "right"}]});
        let Instance::Holant(h) = parse_instance_json(&h, E, base).unwrap() else { panic!() };
        assert_eq!(eval_holant(&h).unwrap(), Scalar::from_int(2, E));

        let c = json!({"kind": "csp", "variables": 3,
            "constraints": [{"signature": "sym:0,1,1,0", "scope": [0, 1, 2]}]});
        let Instance::Csp(c) = parse_instance_json(&c, E, base).unwrap() else { panic!() };
        assert_eq!(eval_csp(&c).unwrap(), Scalar::from_int(6, E));

        let g = json!({"kind": "graph", "vertices": 2, "edges": [[0, 1, "i"]]});
        let Instance::Graph(g) = parse_instance_json(&g, E, base).unwrap() else { panic!() };
        assert_eq!(count_pm(&g).unwrap(), Scalar::i(E));
    }

    #[test]
    fn rejects_bad_documents() {
        let base = Path::new(".");
        let bad_side = json!({"kind": "holant", "edges": 0, "vertices": [
            {"signature": "table:1", "edges": [], "side": "up"}]});
        assert!(matches!(parse_instance_json(&bad_side, E, base), Err(InstanceFileError::Side(_))));
        let bad_version = json!({"format": 7, "kind": "graph", "vertices": 0, "edges": []});
        assert!(matches!(parse_instance_json(&bad_version, E, base), Err(InstanceFileError::Version(7))));
    }
}
