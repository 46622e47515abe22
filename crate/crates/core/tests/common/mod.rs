//! Brute-force oracles and corpus generators shared by the integration tests.
//! Nothing here calls the library's deciders; it only uses the signature and
//! scalar types to hold values.
#![allow(dead_code)]

use std::collections::BTreeMap;

use matchkit::exactnum::{Mode, Scalar};
use matchkit::gadget::GadgetGraph;
use matchkit::holant::{Side, WeightedGraph};
use matchkit::signature::Signature;
use rand::seq::SliceRandom;
use rand::Rng;

pub const E: Mode = Mode::Exact;

pub fn int(v: i64) -> Scalar {
    Scalar::from_int(v, E)
}

pub fn w() -> Scalar {
    Scalar::root_of_unity(1, E)
}

pub fn i() -> Scalar {
    Scalar::i(E)
}

pub fn sym(v: &[i64]) -> Signature {
    Signature::symmetric_ints(v, E).unwrap()
}

pub fn table(v: &[i64]) -> Signature {
    Signature::from_ints(v, E).unwrap()
}

/// Variable `a` (1-based) of an arity-`n` index; variable 1 is the top bit.
pub fn bit(x: usize, a: usize, n: usize) -> bool {
    x >> (n - a) & 1 == 1
}

pub fn e(a: usize, n: usize) -> usize {
    1 << (n - a)
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 1..=n {
            if !prefix.contains(&v) {
                prefix.push(v);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// `f_π(x) = f(x_π(1) … x_π(n))`.
pub fn permute(f: &Signature, pi: &[usize]) -> Signature {
    let n = f.arity();
    Signature::from_fn(n, |x| {
        let y = (1..=n).fold(0, |acc, j| if bit(x, pi[j - 1], n) { acc | e(j, n) } else { acc });
        f.at(y).clone()
    })
    .unwrap()
}

/// The matchgate identities, summed straight from their definition.
pub fn naive_mgi(f: &Signature) -> bool {
    let n = f.arity();
    let size = 1usize << n;
    for beta in 0..size {
        for gamma in 0..size {
            let diff = beta ^ gamma;
            let mut total = Scalar::zero(f.mode());
            let mut j = 0;
            for p in 1..=n {
                if !bit(diff, p, n) {
                    continue;
                }
                j += 1;
                let term = f.at(beta ^ e(p, n)) * f.at(gamma ^ e(p, n));
                total = if j % 2 == 1 { &total - &term } else { &total + &term };
            }
            if !total.is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn naive_permutable(f: &Signature) -> bool {
    permutations(f.arity()).iter().all(|pi| naive_mgi(&permute(f, pi)))
}

/// `H2` applied to every variable by direct summation.
pub fn naive_hat(f: &Signature) -> Signature {
    let n = f.arity();
    Signature::from_fn(n, |a| {
        let mut total = Scalar::zero(f.mode());
        for b in 0..1usize << n {
            if (a & b).count_ones() % 2 == 1 {
                total = &total - f.at(b);
            } else {
                total = &total + f.at(b);
            }
        }
        total
    })
    .unwrap()
}

fn power_of_i(r: &Scalar) -> Option<u32> {
    (0..4).find(|&k| &Scalar::i(r.mode()).pow(k) == r)
}

/// `λ · χ_S · i^Q` with `S` affine and `Q` a quadratic form whose cross
/// terms are even, tested on a parametrization of the support.
pub fn naive_affine(f: &Signature) -> bool {
    let support = f.support();
    let Some(&x0) = support.first() else { return true };
    let set: std::collections::HashSet<usize> = support.iter().copied().collect();
    for &a in &support {
        for &b in &support {
            if !set.contains(&(x0 ^ a ^ b)) {
                return false;
            }
        }
    }
    // basis of the direction space
    let mut basis: Vec<usize> = Vec::new();
    for &s in &support {
        let mut v = s ^ x0;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let d = basis.len();
    let point = |t: usize| (0..d).fold(x0, |acc, k| if t >> k & 1 == 1 { acc ^ basis[k] } else { acc });
    let f0 = f.at(x0).clone();
    let q = |t: usize| power_of_i(&(f.at(point(t)) / &f0));
    let mut lin = vec![0u32; d];
    for k in 0..d {
        match q(1 << k) {
            Some(v) => lin[k] = v,
            None => return false,
        }
    }
    let mut cross = vec![vec![0u32; d]; d];
    for k in 0..d {
        for l in k + 1..d {
            let Some(v) = q(1 << k | 1 << l) else { return false };
            let c = (v + 8 - lin[k] - lin[l]) % 4;
            if c % 2 == 1 {
                return false;
            }
            cross[k][l] = c;
        }
    }
    (0..1usize << d).all(|t| {
        let mut v = 0;
        for k in 0..d {
            if t >> k & 1 == 1 {
                v += lin[k];
                for l in k + 1..d {
                    if t >> l & 1 == 1 {
                        v += cross[k][l];
                    }
                }
            }
        }
        q(t) == Some(v % 4)
    })
}

fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else { return vec![vec![]] };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for k in 0..p.len() {
            let mut q = p.clone();
            q[k].insert(0, first);
            out.push(q);
        }
        let mut q = p.clone();
        q.insert(0, vec![first]);
        out.push(q);
    }
    out
}

/// A tensor product of signatures each supported on at most two
/// complementary inputs of its block.
pub fn naive_product(f: &Signature) -> bool {
    let n = f.arity();
    let support = f.support();
    let Some(&x0) = support.first() else { return true };
    let f0 = f.at(x0).clone();
    let vars: Vec<usize> = (1..=n).collect();
    set_partitions(&vars).into_iter().any(|blocks| {
        let block_mask = |b: &[usize]| b.iter().fold(0, |acc, &a| acc | e(a, n));
        let complementary = blocks.iter().all(|b| {
            let m = block_mask(b);
            support.iter().all(|&x| (x ^ x0) & m == 0 || (x ^ x0) & m == m)
        });
        if !complementary {
            return false;
        }
        // f(x) f(x0)^{m-1} = Π_B f(x0 with block B taken from x)
        let m = blocks.len() as u32;
        (0..1usize << n).all(|x| {
            let lhs = f.at(x) * &f0.pow(m.saturating_sub(1));
            let rhs = blocks.iter().fold(Scalar::one(E), |acc, b| {
                let mask = block_mask(b);
                &acc * f.at(x0 & !mask | x & mask)
            });
            lhs == rhs
        })
    })
}

/// Brute-force contraction of a gadget: sum over every edge assignment with
/// a nonzero product, found by walking the vertices' supports.
pub fn brute_contract(g: &GadgetGraph) -> Signature {
    fn walk(g: &GadgetGraph, v: usize, value: &mut [Option<bool>], acc: Scalar, total: &mut Scalar) {
        let Some(vert) = g.vertices().get(v) else {
            *total = &*total + &acc;
            return;
        };
        let a = vert.edges.len();
        for x in vert.signature.support() {
            let bits: Vec<bool> = (1..=a).map(|j| bit(x, j, a)).collect();
            // a self-loop needs equal values on both of its slots
            let consistent = vert.edges.iter().zip(&bits).enumerate().all(|(j, (&ed, &b))| {
                value[ed].is_none_or(|cur| cur == b)
                    && vert.edges[..j].iter().zip(&bits).all(|(&e2, &b2)| e2 != ed || b2 == b)
            });
            if !consistent {
                continue;
            }
            let fresh: Vec<usize> = vert.edges.iter().copied().filter(|&ed| value[ed].is_none()).collect();
            for (&ed, &b) in vert.edges.iter().zip(&bits) {
                value[ed] = Some(b);
            }
            walk(g, v + 1, value, &acc * vert.signature.at(x), total);
            for ed in fresh {
                value[ed] = None;
            }
        }
    }
    let k = g.dangling().len();
    let mode = g.mode();
    Signature::from_fn(k, |out| {
        let mut value = vec![None; g.edge_count()];
        for (j, &d) in g.dangling().iter().enumerate() {
            value[d] = Some(bit(out, j + 1, k));
        }
        let mut total = Scalar::zero(mode);
        walk(g, 0, &mut value, Scalar::one(mode), &mut total);
        total
    })
    .unwrap()
}

/// Every edge joins a left and a right vertex, every dangling edge leaves a
/// left vertex.
pub fn naive_left_side(g: &GadgetGraph) -> bool {
    let mut ends: Vec<Vec<Option<Side>>> = vec![Vec::new(); g.edge_count()];
    for v in g.vertices() {
        for &ed in &v.edges {
            ends[ed].push(v.side);
        }
    }
    ends.iter().all(|s| match s.as_slice() {
        [a] => *a == Some(Side::Left),
        [a, b] => a.is_some() && b.is_some() && a != b,
        _ => false,
    })
}

/// `λ` with `a = λ b`, if any.
pub fn ratio(a: &Signature, b: &Signature) -> Option<Scalar> {
    let k = (0..b.len()).find(|&x| !b.at(x).is_zero())?;
    let lambda = a.at(k) / b.at(k);
    (0..b.len()).all(|x| a.at(x) == &(&lambda * b.at(x))).then_some(lambda)
}

pub fn rank2_binary(f: &Signature) -> bool {
    f.arity() == 2 && !(&(f.at(0) * f.at(3)) - &(f.at(1) * f.at(2))).is_zero()
}

pub fn random_scalar<R: Rng>(rng: &mut R, pool: &[Scalar]) -> Scalar {
    pool.choose(rng).unwrap().clone()
}

/// Normalized permutable matchgate of the given type, moved by the shift
/// `beta` and multiplied by `scale`: `f(x) = scale · F(x ⊕ beta)`.
pub fn shifted(norm: &Signature, beta: usize, scale: &Scalar) -> Signature {
    Signature::from_fn(norm.arity(), |x| scale * norm.at(x ^ beta)).unwrap()
}

/// Parity type: `F(B) = Π_{a∈B} G(a)` on even `|B|`.
pub fn parity_normal(g: &[Scalar]) -> Signature {
    let n = g.len();
    Signature::from_fn(n, |x| {
        if x.count_ones() % 2 == 1 {
            return Scalar::zero(E);
        }
        (1..=n).filter(|&a| bit(x, a, n)).fold(Scalar::one(E), |acc, a| &acc * &g[a - 1])
    })
    .unwrap()
}

/// Matching type: `F(∅) = 1`, `F(hub a) = weights[a-1]`.
pub fn matching_normal(hub: usize, weights: &[Scalar]) -> Signature {
    let n = weights.len();
    Signature::from_fn(n, |x| {
        if x == 0 {
            return Scalar::one(E);
        }
        if x.count_ones() == 2 && bit(x, hub, n) {
            let a = (1..=n).find(|&a| a != hub && bit(x, a, n)).unwrap();
            return weights[a - 1].clone();
        }
        Scalar::zero(E)
    })
    .unwrap()
}

pub fn pinning_normal(n: usize) -> Signature {
    Signature::from_fn(n, |x| if x == 0 { Scalar::one(E) } else { Scalar::zero(E) }).unwrap()
}

/// `odd` picks the odd-weight center: `f(x) = [|x| odd] Π_{a∈x} y_a`.
pub fn weighted_parity(y: &[Scalar], odd: bool) -> Signature {
    let n = y.len();
    Signature::from_fn(n, |x| {
        if (x.count_ones() % 2 == 1) != odd {
            return Scalar::zero(E);
        }
        (1..=n).filter(|&a| bit(x, a, n)).fold(Scalar::one(E), |acc, a| &acc * &y[a - 1])
    })
    .unwrap()
}

/// Random outerplanar weighted graph: vertices on a cycle, non-crossing
/// chords. Any increasing list of vertices is a valid external order.
pub fn random_outerplanar<R: Rng>(rng: &mut R, n: usize, weights: &[Scalar]) -> WeightedGraph {
    let mut g = WeightedGraph::new(n, E);
    let mut chords: Vec<(usize, usize)> = Vec::new();
    if n >= 2 {
        for v in 0..n {
            let u = (v + 1) % n;
            if (u != v) && (n > 2 || v == 0) && rng.gen_bool(0.8) {
                chords.push((v.min(u), v.max(u)));
            }
        }
    }
    let crosses = |(a, b): (usize, usize), (c, d): (usize, usize)| (a < c && c < b && b < d) || (c < a && a < d && d < b);
    for _ in 0..2 * n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let (a, b) = (a.min(b), a.max(b));
        if a == b || chords.contains(&(a, b)) || chords.iter().any(|&c| crosses((a, b), c)) {
            continue;
        }
        chords.push((a, b));
    }
    for (a, b) in chords {
        g.add_edge(a, b, random_scalar(rng, weights));
    }
    g
}

pub fn pair_map(n: usize, mut value: impl FnMut(usize, usize) -> Scalar) -> BTreeMap<(usize, usize), Scalar> {
    let mut m = BTreeMap::new();
    for a in 1..=n {
        for b in a + 1..=n {
            m.insert((a, b), value(a, b));
        }
    }
    m
}
