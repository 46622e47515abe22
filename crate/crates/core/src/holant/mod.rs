//! Brute-force Holant, #CSP and #PM evaluators used as ground truth.

mod file;

use std::fmt;

use thiserror::Error;

use crate::exactnum::{Mode, Scalar};
use crate::signature::{BinaryMatrix, SigError, Signature};

pub use file::{load_instance, parse_instance_json, Instance, InstanceFileError};

pub const MAX_HOLANT_EDGES: usize = 24;
pub const MAX_CSP_VARIABLES: usize = 20;
pub const MAX_PM_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HolantError {
    #[error("{what} count {size} exceeds the brute-force cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("vertex {vertex} has degree {degree} but its signature has arity {arity}")]
    DegreeMismatch { vertex: usize, degree: usize, arity: usize },
    #[error("edge {0} does not have exactly two endpoints")]
    BadEdge(usize),
    #[error("edge {0} is a self-loop; split it with a [1,0,1] vertex")]
    SelfLoop(usize),
    #[error("variable {0} out of range")]
    BadVariable(usize),
    #[error("variable {var} occurs {count} times, above the bound {bound}")]
    OccurrenceBound { var: usize, count: usize, bound: usize },
    #[error("instance is not bipartite")]
    NotBipartite,
    #[error("transformation matrix is singular")]
    SingularMatrix,
    #[error("operands use different numeric modes")]
    MixedModes,
    #[error(transparent)]
    Signature(#[from] SigError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Undirected graph with edge weights; multi-edges allowed, loops ignored by
/// matching counts.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, Scalar)>,
    pub mode: Mode,
}

impl WeightedGraph {
    pub fn new(vertices: usize, mode: Mode) -> Self {
        WeightedGraph { vertices, edges: Vec::new(), mode }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: Scalar) {
        assert!(u < self.vertices && v < self.vertices, "edge endpoint out of range");
        self.edges.push((u, v, w));
    }
}

/// Weighted perfect matching count `Σ_M Π_{e∈M} w(e)` over the vertices in
/// `mask` (bit v = vertex v).
pub fn count_pm_on(g: &WeightedGraph, mask: usize) -> Result<Scalar, HolantError> {
    if g.vertices > MAX_PM_VERTICES {
        return Err(HolantError::CapExceeded { what: "vertex", size: g.vertices, cap: MAX_PM_VERTICES });
    }
    if mask.count_ones() % 2 == 1 {
        return Ok(Scalar::zero(g.mode));
    }
    let mut adj: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); g.vertices];
    for (u, v, w) in &g.edges {
        if u != v {
            adj[*u].push((*v, w));
            adj[*v].push((*u, w));
        }
    }
    let mut memo = std::collections::HashMap::new();
    Ok(pm_rec(&adj, mask, g.mode, &mut memo))
}

fn pm_rec(
    adj: &[Vec<(usize, &Scalar)>],
    mask: usize,
    mode: Mode,
    memo: &mut std::collections::HashMap<usize, Scalar>,
) -> Scalar {
    if mask == 0 {
        return Scalar::one(mode);
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let v = mask.trailing_zeros() as usize;
    let mut total = Scalar::zero(mode);
    for &(u, w) in &adj[v] {
        if mask & (1 << u) != 0 {
            let sub = pm_rec(adj, mask & !(1 << v) & !(1 << u), mode, memo);
            if !sub.is_zero() {
                total = &total + &(w * &sub);
            }
        }
    }
    memo.insert(mask, total.clone());
    total
}

pub fn count_pm(g: &WeightedGraph) -> Result<Scalar, HolantError> {
    count_pm_on(g, (1usize << g.vertices) - 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolantVertex {
    pub signature: Signature,
    /// Incident edge ids in variable order.
    pub edges: Vec<usize>,
    pub side: Option<Side>,
}

/// A signature grid: vertices carry signatures, edges are the variables.
#[derive(Clone, Debug, PartialEq)]
pub struct HolantInstance {
    pub edge_count: usize,
    pub vertices: Vec<HolantVertex>,
}

impl HolantInstance {
    pub fn new(edge_count: usize, vertices: Vec<HolantVertex>) -> Result<Self, HolantError> {
        let mut ends = vec![Vec::new(); edge_count];
        for (vi, v) in vertices.iter().enumerate() {
            if v.edges.len() != v.signature.arity() {
                return Err(HolantError::DegreeMismatch {
                    vertex: vi,
                    degree: v.edges.len(),
                    arity: v.signature.arity(),
                });
            }
            for &e in &v.edges {
                if e >= edge_count {
                    return Err(HolantError::BadEdge(e));
                }
                ends[e].push(vi);
            }
        }
        for (e, list) in ends.iter().enumerate() {
            if list.len() != 2 {
                return Err(HolantError::BadEdge(e));
            }
            if list[0] == list[1] {
                return Err(HolantError::SelfLoop(e));
            }
        }
        let modes: Vec<Mode> = vertices.iter().map(|v| v.signature.mode()).collect();
        if modes.windows(2).any(|w| w[0] != w[1]) {
            return Err(HolantError::MixedModes);
        }
        Ok(HolantInstance { edge_count, vertices })
    }

    pub fn mode(&self) -> Mode {
        self.vertices.first().map_or(Mode::from_env(), |v| v.signature.mode())
    }

    /// Endpoints of every edge, in vertex order.
    pub fn endpoints(&self) -> Vec<(usize, usize)> {
        let mut ends = vec![Vec::new(); self.edge_count];
        for (vi, v) in self.vertices.iter().enumerate() {
            for &e in &v.edges {
                ends[e].push(vi);
            }
        }
        ends.into_iter().map(|l| (l[0], l[1])).collect()
    }

    pub fn is_bipartite_tagged(&self) -> bool {
        self.vertices.iter().all(|v| v.side.is_some())
            && self
                .endpoints()
                .iter()
                .all(|&(a, b)| self.vertices[a].side != self.vertices[b].side)
    }
}

/// `Z = Σ_σ Π_v f_v(σ|E(v))` over all edge assignments.
pub fn eval_holant(inst: &HolantInstance) -> Result<Scalar, HolantError> {
    if inst.edge_count > MAX_HOLANT_EDGES {
        return Err(HolantError::CapExceeded {
            what: "edge",
            size: inst.edge_count,
            cap: MAX_HOLANT_EDGES,
        });
    }
    let mode = inst.mode();
    let mut total = Scalar::zero(mode);
    for sigma in 0..1usize << inst.edge_count {
        let mut term = Scalar::one(mode);
        for v in &inst.vertices {
            let idx = v.edges.iter().fold(0usize, |acc, &e| (acc << 1) | (sigma >> e & 1));
            term = &term * v.signature.at(idx);
            if term.is_zero() {
                break;
            }
        }
        if !term.is_zero() {
            total = &total + &term;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub signature: Signature,
    /// 0-based variable indices; repetitions allowed.
    pub scope: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CspInstance {
    pub variables: usize,
    pub constraints: Vec<Constraint>,
    pub occurrence_bound: Option<usize>,
}

impl CspInstance {
    pub fn new(
        variables: usize,
        constraints: Vec<Constraint>,
        occurrence_bound: Option<usize>,
    ) -> Result<Self, HolantError> {
        let mut count = vec![0usize; variables];
        for (ci, c) in constraints.iter().enumerate() {
            if c.scope.len() != c.signature.arity() {
                return Err(HolantError::DegreeMismatch {
                    vertex: ci,
                    degree: c.scope.len(),
                    arity: c.signature.arity(),
                });
            }
            for &x in &c.scope {
                if x >= variables {
                    return Err(HolantError::BadVariable(x));
                }
                count[x] += 1;
            }
        }
        if let Some(bound) = occurrence_bound {
            if let Some((var, &c)) = count.iter().enumerate().find(|(_, &c)| c > bound) {
                return Err(HolantError::OccurrenceBound { var, count: c, bound });
            }
        }
        let modes: Vec<Mode> = constraints.iter().map(|c| c.signature.mode()).collect();
        if modes.windows(2).any(|w| w[0] != w[1]) {
            return Err(HolantError::MixedModes);
        }
        Ok(CspInstance { variables, constraints, occurrence_bound })
    }

    pub fn mode(&self) -> Mode {
        self.constraints.first().map_or(Mode::from_env(), |c| c.signature.mode())
    }
}

/// `Z = Σ_x Π_c f_c(x|scope(c))`.
pub fn eval_csp(inst: &CspInstance) -> Result<Scalar, HolantError> {
    if inst.variables > MAX_CSP_VARIABLES {
        return Err(HolantError::CapExceeded {
            what: "variable",
            size: inst.variables,
            cap: MAX_CSP_VARIABLES,
        });
    }
    let mode = inst.mode();
    let mut total = Scalar::zero(mode);
    for x in 0..1usize << inst.variables {
        let mut term = Scalar::one(mode);
        for c in &inst.constraints {
            let idx = c.scope.iter().fold(0usize, |acc, &v| (acc << 1) | (x >> v & 1));
            term = &term * c.signature.at(idx);
            if term.is_zero() {
                break;
            }
        }
        if !term.is_zero() {
            total = &total + &term;
        }
    }
    Ok(total)
}

/// The bipartite grid `Holant(F | EQ)`: constraints on the left, an `=_d`
/// vertex on the right for each variable of degree `d`. A variable that
/// occurs nowhere becomes an arity-0 vertex of value 2.
pub fn csp_to_holant(inst: &CspInstance) -> Result<HolantInstance, HolantError> {
    let mode = inst.mode();
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); inst.variables];
    let mut vertices = Vec::new();
    let mut next_edge = 0;
    for c in &inst.constraints {
        let mut edges = Vec::with_capacity(c.scope.len());
        for &x in &c.scope {
            occurrences[x].push(next_edge);
            edges.push(next_edge);
            next_edge += 1;
        }
        vertices.push(HolantVertex { signature: c.signature.clone(), edges, side: Some(Side::Left) });
    }
    for occ in occurrences {
        let signature = if occ.is_empty() {
            Signature::scalar(Scalar::from_int(2, mode))
        } else {
            crate::signature::check_arity(occ.len())?;
            Signature::equality(occ.len(), mode)
        };
        vertices.push(HolantVertex { signature, edges: occ, side: Some(Side::Right) });
    }
    HolantInstance::new(next_edge, vertices)
}

/// Basis change `Holant(F | G) → Holant(F T⁻¹ | T G)`: left signatures become
/// `(T⁻¹)ᵀ f`, right ones `T g`.
pub fn holographic_rewrite(inst: &HolantInstance, t: &BinaryMatrix) -> Result<HolantInstance, HolantError> {
    if !inst.is_bipartite_tagged() {
        return Err(HolantError::NotBipartite);
    }
    let inv = t.inverse().ok_or(HolantError::SingularMatrix)?;
    let left = inv.transpose();
    let vertices = inst
        .vertices
        .iter()
        .map(|v| {
            let signature = match v.side {
                Some(Side::Left) => v.signature.transform(&left),
                _ => v.signature.transform(t),
            };
            HolantVertex { signature, edges: v.edges.clone(), side: v.side }
        })
        .collect();
    HolantInstance::new(inst.edge_count, vertices)
}
