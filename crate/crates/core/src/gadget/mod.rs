//! Gadget graphs: contraction, planarity certification, matchgates from
//! weighted graphs, and the constructive syntheses built on them.

mod appendix;
mod file;
mod mating;
mod realize;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::classification::ClassError;
use crate::exactnum::{Mode, Scalar};
use crate::holant::{count_pm_on, HolantError, Side, WeightedGraph};
use crate::signature::{arity_cap, bit, SigError, Signature};

pub use appendix::{realize_binary_or_001, realize_nondeg_binary, BinaryKind};
pub use file::{gadget_to_json, load_gadget, parse_gadget_json, GadgetFileError};
pub use mating::{mating_gadget, synthesize_star, MatingRole, MatingSpec, StarGadget};
pub use realize::{realize_symmetric_from_mp, SymmetricRealization};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GadgetError {
    #[error("vertex {vertex} has {got} incident edges but its signature has arity {expected}")]
    DegreeMismatch { vertex: usize, expected: usize, got: usize },
    #[error("edge {edge} has {count} endpoints")]
    BadEdge { edge: usize, count: usize },
    #[error("dangling list is inconsistent at edge {0}")]
    BadDangling(usize),
    #[error("vertex {0}: rotation is not a permutation of its variable slots")]
    BadRotation(usize),
    #[error("edge {0} breaks the left-side bipartition")]
    NotLeftSide(usize),
    #[error("port {1} of vertex {0} is left unassigned")]
    UnassignedPort(usize, usize),
    #[error("intermediate arity {arity} exceeds the cap {cap}")]
    ArityCapExceeded { arity: usize, cap: usize },
    #[error("no rotation system")]
    MissingRotation,
    #[error("gadget graph is disconnected")]
    Disconnected,
    #[error("external vertex list is invalid at {0}")]
    BadExternal(usize),
    #[error("mating spec has no dangling variable")]
    NoDangling,
    #[error("mating spec has more than one dangling variable")]
    MultipleDangling,
    #[error("mating spec has {got} roles for arity {expected}")]
    SpecLength { expected: usize, got: usize },
    #[error("not a permutable matchgate signature")]
    NotPermutableMatchgate,
    #[error("square root not in Q(ζ8); retry in float mode")]
    SqrtNotInField,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("signature is degenerate")]
    DegenerateInput,
    #[error("no construction succeeded ({0}); this is a bug")]
    CaseExhaustion(String),
    #[error(transparent)]
    Signature(#[from] SigError),
    #[error(transparent)]
    Holant(#[from] HolantError),
}

impl From<ClassError> for GadgetError {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::SqrtNotInField => GadgetError::SqrtNotInField,
            other => GadgetError::PreconditionViolated(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GadgetVertex {
    pub signature: Signature,
    /// Incident edge ids in variable order.
    pub edges: Vec<usize>,
    pub side: Option<Side>,
}

/// `GG = (V, E, D)`. Internal edges have two endpoints, dangling ones one.
/// The rotation, when present, lists each vertex's variable slots (0-based)
/// in clockwise order.
#[derive(Clone, Debug, PartialEq)]
pub struct GadgetGraph {
    vertices: Vec<GadgetVertex>,
    edge_count: usize,
    dangling: Vec<usize>,
    rotation: Option<Vec<Vec<usize>>>,
}

impl GadgetGraph {
    pub fn new(
        vertices: Vec<GadgetVertex>,
        edge_count: usize,
        dangling: Vec<usize>,
        rotation: Option<Vec<Vec<usize>>>,
    ) -> Result<Self, GadgetError> {
        let mut count = vec![0usize; edge_count];
        for (v, vx) in vertices.iter().enumerate() {
            if vx.edges.len() != vx.signature.arity() {
                return Err(GadgetError::DegreeMismatch {
                    vertex: v,
                    expected: vx.signature.arity(),
                    got: vx.edges.len(),
                });
            }
            for &e in &vx.edges {
                if e >= edge_count {
                    return Err(GadgetError::BadEdge { edge: e, count: 0 });
                }
                count[e] += 1;
            }
        }
        let mut is_dangling = vec![false; edge_count];
        for &d in &dangling {
            if d >= edge_count || is_dangling[d] || count[d] != 1 {
                return Err(GadgetError::BadDangling(d));
            }
            is_dangling[d] = true;
        }
        for e in 0..edge_count {
            let want = if is_dangling[e] { 1 } else { 2 };
            if count[e] != want {
                return Err(GadgetError::BadEdge { edge: e, count: count[e] });
            }
        }
        if let Some(rot) = &rotation {
            if rot.len() != vertices.len() {
                return Err(GadgetError::BadRotation(rot.len()));
            }
            for (v, r) in rot.iter().enumerate() {
                let mut sorted = r.clone();
                sorted.sort_unstable();
                if sorted != (0..vertices[v].edges.len()).collect::<Vec<_>>() {
                    return Err(GadgetError::BadRotation(v));
                }
            }
        }
        let gg = GadgetGraph { vertices, edge_count, dangling, rotation };
        if gg.vertices.iter().any(|v| v.side.is_some()) {
            gg.check_left_side()?;
        }
        Ok(gg)
    }

    pub fn vertices(&self) -> &[GadgetVertex] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn dangling(&self) -> &[usize] {
        &self.dangling
    }

    pub fn rotation(&self) -> Option<&[Vec<usize>]> {
        self.rotation.as_deref()
    }

    pub fn mode(&self) -> Mode {
        self.vertices.first().map_or_else(Mode::from_env, |v| v.signature.mode())
    }

    /// Endpoints of every edge as `(vertex, slot)` lists.
    pub fn endpoints(&self) -> Vec<Vec<(usize, usize)>> {
        let mut ends = vec![Vec::new(); self.edge_count];
        for (v, vx) in self.vertices.iter().enumerate() {
            for (slot, &e) in vx.edges.iter().enumerate() {
                ends[e].push((v, slot));
            }
        }
        ends
    }

    /// Every internal edge joins a left vertex to a right one and every
    /// dangling edge hangs off a left vertex.
    pub fn check_left_side(&self) -> Result<(), GadgetError> {
        for (e, ends) in self.endpoints().iter().enumerate() {
            let sides: Vec<Option<Side>> = ends.iter().map(|&(v, _)| self.vertices[v].side).collect();
            let ok = match sides.as_slice() {
                [s] => *s == Some(Side::Left),
                [a, b] => {
                    matches!((a, b), (Some(Side::Left), Some(Side::Right)) | (Some(Side::Right), Some(Side::Left)))
                }
                _ => false,
            };
            if !ok {
                return Err(GadgetError::NotLeftSide(e));
            }
        }
        Ok(())
    }

    pub fn is_left_side(&self) -> bool {
        self.vertices.iter().all(|v| v.side.is_some()) && self.check_left_side().is_ok()
    }
}

/// A variable slot of a builder vertex.
pub type Port = (usize, usize);

struct Draft {
    signature: Signature,
    side: Option<Side>,
    edges: Vec<Option<usize>>,
    rotation: Vec<usize>,
}

/// Incremental gadget assembly. Ports are linked pairwise or left dangling;
/// `join` inserts a `[1,0,1]` right vertex between two left ports so the
/// result stays a left-side gadget.
pub struct GadgetBuilder {
    mode: Mode,
    drafts: Vec<Draft>,
    edge_count: usize,
    dangling: Vec<usize>,
}

impl GadgetBuilder {
    pub fn new(mode: Mode) -> Self {
        GadgetBuilder { mode, drafts: Vec::new(), edge_count: 0, dangling: Vec::new() }
    }

    /// Adds a vertex whose rotation is its variable order (or the reverse
    /// when `mirrored`) and returns its ports.
    pub fn vertex(&mut self, signature: Signature, side: Option<Side>, mirrored: bool) -> Vec<Port> {
        let k = signature.arity();
        let mut rotation: Vec<usize> = (0..k).collect();
        if mirrored {
            rotation.reverse();
        }
        let v = self.drafts.len();
        self.drafts.push(Draft { signature, side, edges: vec![None; k], rotation });
        (0..k).map(|s| (v, s)).collect()
    }

    fn assign(&mut self, p: Port, e: usize) {
        let slot = &mut self.drafts[p.0].edges[p.1];
        assert!(slot.is_none(), "port {p:?} assigned twice");
        *slot = Some(e);
    }

    pub fn link(&mut self, p: Port, q: Port) {
        let e = self.edge_count;
        self.edge_count += 1;
        self.assign(p, e);
        self.assign(q, e);
    }

    pub fn join(&mut self, p: Port, q: Port) {
        let left = |b: &Self, x: Port| b.drafts[x.0].side == Some(Side::Left);
        if left(self, p) && left(self, q) {
            let w = self.vertex(Signature::symmetric_ints(&[1, 0, 1], self.mode).expect("binary"), Some(Side::Right), false);
            self.link(p, w[0]);
            self.link(w[1], q);
        } else {
            self.link(p, q);
        }
    }

    /// Attaches a right-side unary vertex carrying `[a, b]`.
    pub fn pin(&mut self, p: Port, a: i64, b: i64) {
        let u = Signature::from_ints(&[a, b], self.mode).expect("unary");
        let w = self.vertex(u, Some(Side::Right), false);
        self.link(p, w[0]);
    }

    pub fn dangle(&mut self, p: Port) {
        let e = self.edge_count;
        self.edge_count += 1;
        self.assign(p, e);
        self.dangling.push(e);
    }

    /// Copies a finished gadget in and returns the ports that were its
    /// dangling edges, in order. Mirroring reverses every rotation.
    pub fn embed(&mut self, g: &GadgetGraph, mirrored: bool) -> Vec<Port> {
        let offset = self.drafts.len();
        for (v, vx) in g.vertices.iter().enumerate() {
            let mut rotation = g.rotation.as_ref().map_or_else(|| (0..vx.edges.len()).collect(), |r| r[v].clone());
            if mirrored {
                rotation.reverse();
            }
            self.drafts.push(Draft {
                signature: vx.signature.clone(),
                side: vx.side,
                edges: vec![None; vx.edges.len()],
                rotation,
            });
        }
        let ends = g.endpoints();
        let dangling_set: Vec<bool> = (0..g.edge_count).map(|e| g.dangling.contains(&e)).collect();
        for (e, pts) in ends.iter().enumerate() {
            if !dangling_set[e] {
                let (a, b) = (pts[0], pts[1]);
                self.link((a.0 + offset, a.1), (b.0 + offset, b.1));
            }
        }
        g.dangling.iter().map(|&d| (ends[d][0].0 + offset, ends[d][0].1)).collect()
    }

    pub fn build(self) -> Result<GadgetGraph, GadgetError> {
        let mut vertices = Vec::with_capacity(self.drafts.len());
        let mut rotation = Vec::with_capacity(self.drafts.len());
        for (v, d) in self.drafts.into_iter().enumerate() {
            let edges = d
                .edges
                .iter()
                .enumerate()
                .map(|(s, e)| e.ok_or(GadgetError::UnassignedPort(v, s)))
                .collect::<Result<Vec<_>, _>>()?;
            vertices.push(GadgetVertex { signature: d.signature, edges, side: d.side });
            rotation.push(d.rotation);
        }
        GadgetGraph::new(vertices, self.edge_count, self.dangling, Some(rotation))
    }
}

/// A partially contracted factor: `table` indexed with `vars[0]` as MSB.
#[derive(Clone, Debug)]
struct Factor {
    vars: Vec<usize>,
    table: Vec<Scalar>,
}

impl Factor {
    fn value(&self, assign: &BTreeMap<usize, bool>) -> &Scalar {
        let m = self.vars.len();
        let idx = self
            .vars
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, v)| if assign[v] { acc | 1 << (m - 1 - j) } else { acc });
        &self.table[idx]
    }
}

fn check_cap(arity: usize) -> Result<(), GadgetError> {
    let cap = arity_cap();
    if arity > cap {
        return Err(GadgetError::ArityCapExceeded { arity, cap });
    }
    Ok(())
}

/// Sums out `summed` from the product of `parts`; the result ranges over
/// `keep` (each var in `keep` appears somewhere in `parts`).
fn eliminate(parts: &[&Factor], keep: &[usize], summed: &[usize], mode: Mode) -> Result<Factor, GadgetError> {
    check_cap(keep.len())?;
    check_cap(keep.len() + summed.len())?;
    let (k, s) = (keep.len(), summed.len());
    let mut table = Vec::with_capacity(1 << k);
    let mut assign = BTreeMap::new();
    for x in 0..1usize << k {
        for (j, &v) in keep.iter().enumerate() {
            assign.insert(v, bit(x, j + 1, k));
        }
        let mut total = Scalar::zero(mode);
        for y in 0..1usize << s {
            for (j, &v) in summed.iter().enumerate() {
                assign.insert(v, bit(y, j + 1, s));
            }
            let mut prod = Scalar::one(mode);
            for p in parts {
                prod = &prod * p.value(&assign);
                if prod.is_zero() {
                    break;
                }
            }
            total = &total + &prod;
        }
        table.push(total);
    }
    Ok(Factor { vars: keep.to_vec(), table })
}

/// Contracts internal edges in increasing id order.
pub fn contract(gg: &GadgetGraph) -> Result<Signature, GadgetError> {
    let ends = gg.endpoints();
    let order: Vec<usize> = (0..gg.edge_count).filter(|&e| ends[e].len() == 2).collect();
    contract_with_order(gg, &order)
}

/// Contracts the internal edges in the given order (which must list each
/// internal edge exactly once); the result does not depend on the order.
/// A self-loop is a factor naming the same edge twice, which `eliminate`
/// evaluates diagonally.
pub fn contract_with_order(gg: &GadgetGraph, order: &[usize]) -> Result<Signature, GadgetError> {
    let mode = gg.mode();
    let ends = gg.endpoints();
    check_cap(gg.dangling.len())?;
    let mut factors: Vec<Option<Factor>> = gg
        .vertices
        .iter()
        .map(|vx| Some(Factor { vars: vx.edges.clone(), table: vx.signature.entries().to_vec() }))
        .collect();
    for &e in order {
        if ends.get(e).is_none_or(|x| x.len() != 2) {
            return Err(GadgetError::BadEdge { edge: e, count: ends.get(e).map_or(0, Vec::len) });
        }
        let holders: Vec<usize> = (0..factors.len())
            .filter(|&i| factors[i].as_ref().is_some_and(|f| f.vars.contains(&e)))
            .collect();
        if holders.is_empty() {
            continue; // summed earlier together with a parallel edge
        }
        let parts: Vec<&Factor> = holders.iter().map(|&i| factors[i].as_ref().expect("live")).collect();
        let mut all: Vec<usize> = Vec::new();
        for p in &parts {
            for &v in &p.vars {
                if !all.contains(&v) {
                    all.push(v);
                }
            }
        }
        // an edge whose two endpoints are both inside the merge is summed
        let occurrences = |v: usize| parts.iter().map(|p| p.vars.iter().filter(|&&w| w == v).count()).sum::<usize>();
        let (summed, keep): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&v| occurrences(v) == 2);
        let merged = eliminate(&parts, &keep, &summed, mode)?;
        for &h in &holders {
            factors[h] = None;
        }
        factors[holders[0]] = Some(merged);
    }
    let live: Vec<&Factor> = factors.iter().flatten().collect();
    for f in &live {
        if let Some(&v) = f.vars.iter().find(|v| !gg.dangling.contains(v)) {
            return Err(GadgetError::BadEdge { edge: v, count: 2 });
        }
    }
    let product = eliminate(&live, &gg.dangling, &[], mode)?;
    Ok(Signature::from_entries(product.table)?)
}

/// Euler check `V − E + F = 2` of the declared rotation system. Each dangling
/// edge is treated as an edge to a fresh leaf vertex.
pub fn check_rotation_planar(gg: &GadgetGraph) -> Result<bool, GadgetError> {
    let rot = gg.rotation.as_ref().ok_or(GadgetError::MissingRotation)?;
    let ends = gg.endpoints();
    let n = gg.vertices.len();
    // leaves get ids n.. ; each leaf has a single slot 0
    let leaves: BTreeMap<usize, usize> = gg.dangling.iter().enumerate().map(|(i, &e)| (e, n + i)).collect();
    let total_v = n + leaves.len();
    let mut rotation: Vec<Vec<usize>> = rot.clone();
    rotation.extend(std::iter::repeat_n(vec![0], leaves.len()));
    // opposite half-edge of (vertex, slot)
    let opposite = |v: usize, s: usize| -> (usize, usize) {
        if v >= n {
            let e = gg.dangling[v - n];
            return ends[e][0];
        }
        let e = gg.vertices[v].edges[s];
        if let Some(&leaf) = leaves.get(&e) {
            return (leaf, 0);
        }
        let pts = &ends[e];
        if pts[0] == (v, s) {
            pts[1]
        } else {
            pts[0]
        }
    };
    // connectivity
    let mut seen = vec![false; total_v];
    let mut stack = vec![0usize];
    if total_v > 0 {
        seen[0] = true;
    }
    while let Some(v) = stack.pop() {
        let deg = if v >= n { 1 } else { gg.vertices[v].edges.len() };
        for s in 0..deg {
            let (u, _) = opposite(v, s);
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(GadgetError::Disconnected);
    }
    let edges = gg.edge_count;
    if edges == 0 {
        return Ok(total_v == 1);
    }
    // position of each slot inside its vertex's cyclic order
    let pos: Vec<Vec<usize>> = rotation
        .iter()
        .map(|r| {
            let mut p = vec![0; r.len()];
            for (i, &s) in r.iter().enumerate() {
                p[s] = i;
            }
            p
        })
        .collect();
    let succ = |v: usize, s: usize| rotation[v][(pos[v][s] + 1) % rotation[v].len()];
    let mut visited: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
    let mut faces = 0i64;
    for v in 0..total_v {
        for s in 0..rotation[v].len() {
            if visited[v][s] {
                continue;
            }
            faces += 1;
            let (mut cv, mut cs) = (v, s);
            while !visited[cv][cs] {
                visited[cv][cs] = true;
                let (u, t) = opposite(cv, cs);
                cv = u;
                cs = succ(u, t);
            }
        }
    }
    Ok(total_v as i64 - edges as i64 + faces == 2)
}

/// `f(α) = #PM(G − X)` where `X` holds the external vertices flagged 1;
/// variable i is `external[i-1]`.
pub fn matchgate_signature_from_graph(g: &WeightedGraph, external: &[usize]) -> Result<Signature, GadgetError> {
    let k = external.len();
    for (i, &x) in external.iter().enumerate() {
        if x >= g.vertices || external[..i].contains(&x) {
            return Err(GadgetError::BadExternal(x));
        }
    }
    check_cap(k)?;
    let full = (1usize << g.vertices) - 1;
    let entries = (0..1usize << k)
        .map(|a| {
            let mut mask = full;
            for (i, &x) in external.iter().enumerate() {
                if bit(a, i + 1, k) {
                    mask &= !(1 << x);
                }
            }
            count_pm_on(g, mask)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Signature::from_entries(entries)?)
}

#[cfg(test)]
mod tests;
