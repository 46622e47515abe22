use std::collections::BTreeMap;

use super::*;
use crate::classification::is_affine;
use crate::exactnum::parse_scalar;
use crate::matchgate::{generate_from_pairs, mgi_check};

const E: Mode = Mode::Exact;

fn ex(s: &str) -> Scalar {
    parse_scalar(s, E).unwrap()
}

fn sym(v: &[i64]) -> Signature {
    Signature::symmetric_ints(v, E).unwrap()
}

fn table(v: &[i64]) -> Signature {
    Signature::from_ints(v, E).unwrap()
}

fn roles(s: &str) -> MatingSpec {
    let r = s
        .chars()
        .map(|c| match c {
            'D' => MatingRole::Dangling,
            'S' => MatingRole::SumUp,
            '0' => MatingRole::Fix0,
            _ => MatingRole::Fix1,
        })
        .collect();
    MatingSpec::new(r).unwrap()
}

#[test]
fn contract_examples() {
    let mut b = GadgetBuilder::new(E);
    let u = b.vertex(table(&[1, 0]), None, false);
    let v = b.vertex(table(&[1, 0]), None, false);
    b.link(u[0], v[0]);
    assert_eq!(contract(&b.build().unwrap()).unwrap(), Signature::scalar(Scalar::one(E)));

    let mut b = GadgetBuilder::new(E);
    let p: Vec<Vec<Port>> = (0..3).map(|_| b.vertex(sym(&[0, 1, 0]), None, false)).collect();
    b.link(p[0][1], p[1][0]);
    b.link(p[1][1], p[2][0]);
    b.link(p[2][1], p[0][0]);
    assert!(contract(&b.build().unwrap()).unwrap().at(0).is_zero());
}

#[test]
fn edge_split_leaves_contraction_unchanged() {
    let f = table(&[1, 2, 3, 4, 0, 1, 5, 7]);
    let g = table(&[2, 1, 0, 3]);
    let mut b = GadgetBuilder::new(E);
    let x = b.vertex(f.clone(), None, false);
    let y = b.vertex(g.clone(), None, false);
    b.link(x[1], y[0]);
    for p in [x[0], x[2], y[1]] {
        b.dangle(p);
    }
    let direct = contract(&b.build().unwrap()).unwrap();
    let mut b = GadgetBuilder::new(E);
    let x = b.vertex(f, None, false);
    let y = b.vertex(g, None, false);
    let w = b.vertex(sym(&[1, 0, 1]), None, false);
    b.link(x[1], w[0]);
    b.link(w[1], y[0]);
    for p in [x[0], x[2], y[1]] {
        b.dangle(p);
    }
    assert_eq!(contract(&b.build().unwrap()).unwrap(), direct);
}

#[test]
fn contraction_order_and_self_loops() {
    // f(x1,x2,x3) with x1,x3 joined in a loop, x2 joined to g
    let f = table(&[1, 2, 3, 4, 5, 6, 7, 8]);
    let g = table(&[1, -1, 2, 0]);
    let mut b = GadgetBuilder::new(E);
    let x = b.vertex(f.clone(), None, false);
    let y = b.vertex(g.clone(), None, false);
    b.link(x[0], x[2]);
    b.link(x[1], y[0]);
    b.dangle(y[1]);
    let gg = b.build().unwrap();
    let forward = contract_with_order(&gg, &[0, 1]).unwrap();
    let backward = contract_with_order(&gg, &[1, 0]).unwrap();
    assert_eq!(forward, backward);
    // oracle: Σ_{z,u} f(z,u,z) g(u,x)
    let expect = Signature::from_fn(1, |xv| {
        let mut t = Scalar::zero(E);
        for z in 0..2 {
            for u in 0..2 {
                t = &t + &(f.at(z << 2 | u << 1 | z) * g.at(u << 1 | xv));
            }
        }
        t
    })
    .unwrap();
    assert_eq!(forward, expect);
}

#[test]
fn arity_cap_refuses_wide_results() {
    // four arity-7 vertices in a chain leave 22 dangling edges
    let mut b = GadgetBuilder::new(E);
    let ports: Vec<Vec<Port>> = (0..4).map(|_| b.vertex(Signature::equality(7, E), None, false)).collect();
    for j in 0..3 {
        b.link(ports[j][6], ports[j + 1][0]);
    }
    for (j, p) in ports.iter().enumerate() {
        for (s, &port) in p.iter().enumerate() {
            if !(j > 0 && s == 0) && !(j < 3 && s == 6) {
                b.dangle(port);
            }
        }
    }
    let r = contract(&b.build().unwrap());
    assert!(matches!(r, Err(GadgetError::ArityCapExceeded { arity: 22, .. })));
}

#[test]
fn planarity_examples() {
    let mut b = GadgetBuilder::new(E);
    let p: Vec<Vec<Port>> = (0..3).map(|_| b.vertex(sym(&[0, 1, 0]), None, false)).collect();
    b.link(p[0][1], p[1][0]);
    b.link(p[1][1], p[2][0]);
    b.link(p[2][1], p[0][0]);
    assert!(check_rotation_planar(&b.build().unwrap()).unwrap());

    let lone = GadgetGraph::new(
        vec![GadgetVertex { signature: Signature::scalar(Scalar::one(E)), edges: vec![], side: None }],
        0,
        vec![],
        Some(vec![vec![]]),
    )
    .unwrap();
    assert!(check_rotation_planar(&lone).unwrap());

    let no_rot = GadgetGraph::new(lone.vertices().to_vec(), 0, vec![], None).unwrap();
    assert_eq!(check_rotation_planar(&no_rot), Err(GadgetError::MissingRotation));

    let mut b = GadgetBuilder::new(E);
    b.vertex(Signature::scalar(Scalar::one(E)), None, false);
    b.vertex(Signature::scalar(Scalar::one(E)), None, false);
    assert_eq!(check_rotation_planar(&b.build().unwrap()), Err(GadgetError::Disconnected));
}

/// All cyclic orders of 4 slots with slot 0 first.
fn cyclic_orders() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 1..4 {
        for b in 1..4 {
            for c in 1..4 {
                if a != b && b != c && a != c {
                    out.push(vec![0, a, b, c]);
                }
            }
        }
    }
    out
}

#[test]
fn k5_is_never_planar() {
    // vertex v has slots for its four neighbours in increasing order
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); 5];
    let mut id = 0;
    for u in 0..5 {
        for v in u + 1..5 {
            edges[u].push(id);
            edges[v].push(id);
            id += 1;
        }
    }
    let vertices: Vec<GadgetVertex> = edges
        .iter()
        .map(|e| GadgetVertex { signature: sym(&[1, 0, 0, 0, 1]), edges: e.clone(), side: None })
        .collect();
    let orders = cyclic_orders();
    let mut checked = 0;
    for code in 0..orders.len().pow(5) {
        let mut c = code;
        let rot: Vec<Vec<usize>> = (0..5)
            .map(|_| {
                let r = orders[c % orders.len()].clone();
                c /= orders.len();
                r
            })
            .collect();
        let gg = GadgetGraph::new(vertices.clone(), 10, vec![], Some(rot)).unwrap();
        assert!(!check_rotation_planar(&gg).unwrap());
        checked += 1;
    }
    assert_eq!(checked, 7776);
}

#[test]
fn matchgate_from_graph_examples() {
    let mut g = WeightedGraph::new(2, E);
    g.add_edge(0, 1, Scalar::one(E));
    assert_eq!(matchgate_signature_from_graph(&g, &[0, 1]).unwrap(), table(&[1, 0, 0, 1]));
    assert_eq!(matchgate_signature_from_graph(&g, &[0]).unwrap(), table(&[1, 0]));

    let mut path = WeightedGraph::new(3, E);
    path.add_edge(0, 1, Scalar::one(E));
    path.add_edge(1, 2, Scalar::one(E));
    let f = matchgate_signature_from_graph(&path, &[0, 2]).unwrap();
    assert_eq!(f, table(&[0, 1, 1, 0]));
    assert!(mgi_check(&f).passed());
    assert_eq!(matchgate_signature_from_graph(&path, &[0, 0]), Err(GadgetError::BadExternal(0)));
}

#[test]
fn mating_examples() {
    let eq2 = Signature::equality(2, E);
    let eq3 = Signature::equality(3, E);
    assert_eq!(contract(&mating_gadget(&eq2, &roles("DS")).unwrap()).unwrap(), table(&[1, 0, 0, 1]));
    assert_eq!(contract(&mating_gadget(&eq3, &roles("DS0")).unwrap()).unwrap(), table(&[1, 0, 0, 0]));
    assert_eq!(contract(&mating_gadget(&eq3, &roles("DSS")).unwrap()).unwrap(), table(&[1, 0, 0, 1]));
    assert_eq!(contract(&mating_gadget(&eq3, &roles("DS1")).unwrap()).unwrap(), table(&[0, 0, 0, 1]));
    assert_eq!(MatingSpec::new(vec![MatingRole::SumUp]), Err(GadgetError::NoDangling));
    assert_eq!(
        MatingSpec::new(vec![MatingRole::Dangling, MatingRole::Dangling]),
        Err(GadgetError::MultipleDangling)
    );
    let gg = mating_gadget(&eq3, &roles("SDS")).unwrap();
    assert!(gg.is_left_side());
    assert!(check_rotation_planar(&gg).unwrap());
}

fn from_pairs(n: usize, v: impl Fn(usize, usize) -> Scalar) -> Signature {
    let mut m = BTreeMap::new();
    for a in 1..=n {
        for b in a + 1..=n {
            m.insert((a, b), v(a, b));
        }
    }
    generate_from_pairs(n, &m, E).unwrap()
}

#[test]
fn star_examples() {
    let pin = table(&[1, 0]).tensor(&table(&[0, 1])).unwrap();
    let star = synthesize_star(&pin).unwrap();
    assert_eq!(star.center, sym(&[1, 0, 0]));
    assert!(star.chains[0].is_empty());
    assert_eq!(star.chains[1], vec![sym(&[0, 1, 0])]);
    assert_eq!(star.evaluate().unwrap(), pin);

    let g = [2, 2, 3];
    let par = from_pairs(3, |a, b| Scalar::from_int(g[a - 1] * g[b - 1], E));
    let star = synthesize_star(&par).unwrap();
    assert_eq!(star.center, sym(&[1, 0, 1, 0]));
    let edges: Vec<Signature> = star.chains.iter().map(|c| c[0].clone()).collect();
    assert_eq!(edges, vec![sym(&[1, 0, 2]), sym(&[1, 0, 2]), sym(&[1, 0, 3])]);

    let w = [0, 2, 3, 5];
    let m = from_pairs(4, |a, b| if a == 1 { Scalar::from_int(w[b - 1], E) } else { Scalar::zero(E) });
    let star = synthesize_star(&m).unwrap();
    assert_eq!(star.center, sym(&[0, 1, 0, 0, 0]));
    assert_eq!(star.chains[0], vec![sym(&[0, 1, 0])]);
    assert_eq!(star.chains[3], vec![sym(&[1, 0, 5])]);
    assert_eq!(star.evaluate().unwrap(), m);

    assert_eq!(synthesize_star(&sym(&[0, 1, 1, 0])), Err(GadgetError::NotPermutableMatchgate));
}

#[test]
fn star_with_scale_and_shift() {
    // 3·F(α ⊕ 0110) for a parity-type F
    let g = [1, 2, 1, 1];
    let par = from_pairs(4, |a, b| Scalar::from_int(g[a - 1] * g[b - 1], E));
    let shifted = crate::matchgate::xor_shift(&par, 0b0110).scale(&Scalar::from_int(3, E));
    let star = synthesize_star(&shifted).unwrap();
    assert_eq!(star.evaluate().unwrap(), shifted);
    assert!(star.chains.iter().flatten().all(|s| mgi_check(s).passed()));
}

fn check_realization(f: &Signature) -> SymmetricRealization {
    let r = realize_symmetric_from_mp(f).unwrap();
    let g = r.g.expand().unwrap();
    assert_eq!(contract(&r.gadget).unwrap(), g);
    assert!(mgi_check(&g).passed());
    assert!(is_affine(&g).is_none());
    assert!(r.gadget.is_left_side());
    assert!(check_rotation_planar(&r.gadget).unwrap(), "{} not planar", r.case);
    r
}

#[test]
fn realize_parity_case_1_pin() {
    // [1,0,1,0] center with edges [1,0,2], [1,0,1], [1,0,1]
    let y = [2, 1, 1];
    let f = Signature::from_fn(3, |x| {
        if x.count_ones() % 2 == 1 {
            return Scalar::zero(E);
        }
        let v: i64 = (1..=3).filter(|&a| crate::signature::bit(x, a, 3)).map(|a| y[a - 1]).product();
        Scalar::from_int(v, E)
    })
    .unwrap();
    let r = check_realization(&f);
    assert_eq!(r.case, "parity-1/pin");
    assert_eq!(r.g.expand().unwrap(), sym(&[1, 0, 2]));
    assert_eq!(r.form.form, 3);
}

#[test]
fn realize_parity_case_2_n2() {
    let f = Signature::from_entries(vec![Scalar::zero(E), ex("w"), Scalar::one(E), Scalar::zero(E)]).unwrap();
    let r = check_realization(&f);
    assert_eq!(r.case, "parity-2/mod3");
    let expect = Signature::symmetric(&[Scalar::zero(E), ex("i"), Scalar::zero(E), Scalar::one(E)]).unwrap();
    assert!(r.g.expand().unwrap().proportional(&expect).unwrap().is_some());
}

#[test]
fn realize_matching_l0() {
    // h = [0,1,0,0,0] with edges [1,0,y], y = (1,2,1,1)
    let y = [1, 2, 1, 1];
    let f = Signature::from_fn(4, |x| {
        if x.count_ones() != 1 {
            return Scalar::zero(E);
        }
        let a = (1..=4).find(|&a| crate::signature::bit(x, a, 4)).unwrap();
        Scalar::from_int(y[a - 1], E)
    })
    .unwrap();
    let r = check_realization(&f);
    assert_eq!(r.case, "matching-l0/gadget1");
    assert_eq!(r.g.expand().unwrap(), sym(&[4, 0, 1]));
}

#[test]
fn realize_rejects_bad_input() {
    assert!(matches!(
        realize_symmetric_from_mp(&Signature::equality(3, E)),
        Err(GadgetError::PreconditionViolated(_))
    ));
    assert!(matches!(realize_symmetric_from_mp(&sym(&[0, 1, 1, 0])), Err(GadgetError::PreconditionViolated(_))));
}

#[test]
fn appendix_examples() {
    let eq3 = Signature::equality(3, E);
    assert_eq!(contract(&realize_nondeg_binary(&eq3).unwrap()).unwrap(), table(&[1, 0, 0, 1]));
    let eq2 = Signature::equality(2, E);
    assert_eq!(contract(&realize_nondeg_binary(&eq2).unwrap()).unwrap(), table(&[1, 0, 0, 1]));
    let g = contract(&realize_nondeg_binary(&sym(&[1, 0, 1, 0])).unwrap()).unwrap();
    assert!(g.is_degenerate().is_none());
    assert_eq!(realize_nondeg_binary(&table(&[1, 2, 2, 4])), Err(GadgetError::DegenerateInput));

    let f = table(&[1, 1, 1, 1, 1, 1, 1, 2]);
    let (gg, kind) = realize_binary_or_001(&f).unwrap();
    assert_eq!(kind, BinaryKind::NondegBinary);
    assert_eq!(contract(&gg).unwrap(), table(&[2, 2, 2, 3]));

    // [1,i] ⊗ [1,1] ⊗ [1,1] + [0,1]^{⊗3}
    let f = Signature::from_fn(3, |x| {
        let base = if x & 4 != 0 { Scalar::i(E) } else { Scalar::one(E) };
        if x == 7 { &base + &Scalar::one(E) } else { base }
    })
    .unwrap();
    let (gg, kind) = realize_binary_or_001(&f).unwrap();
    assert_eq!(kind, BinaryKind::Point001);
    let g = contract(&gg).unwrap();
    assert!(g.proportional(&table(&[0, 0, 0, 1])).unwrap().is_some());

    let (gg, kind) = realize_binary_or_001(&eq2).unwrap();
    assert_eq!(kind, BinaryKind::NondegBinary);
    assert_eq!(contract(&gg).unwrap(), eq2);
}

#[test]
fn gadget_json_round_trip() {
    let gg = mating_gadget(&Signature::equality(3, E), &roles("DS1")).unwrap();
    let v = gadget_to_json(&gg);
    let back = parse_gadget_json(&v, E, std::path::Path::new(".")).unwrap();
    assert_eq!(back, gg);
}
