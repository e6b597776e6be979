//! Test oracles and random generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use dagcat::diagram::Node;
use dagcat::tensor::{Model, Semiring, TensorValue};
use dagcat::{Color, Diagram, GeneratorDecl, Signature, WireType};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn q() -> WireType {
    WireType::new("Q")
}

/// Evaluate a diagram by summing over every assignment of basis indices to
/// its wires, without any contraction order.
pub fn brute_force_eval<S: Semiring>(d: &Diagram, m: &Model<S>) -> TensorValue<S> {
    let nodes = d.nodes();
    let edges = d.edges();
    let edge_dim: Vec<usize> = edges
        .iter()
        .map(|e| m.dim(nodes[e.0.node].port_type(e.0.port)).unwrap())
        .collect();
    let boundary_edge = |b: usize| -> usize {
        edges
            .iter()
            .position(|e| e.0.node == b || e.1.node == b)
            .expect("boundary has a wire")
    };
    let open: Vec<usize> = d.outputs().iter().chain(d.inputs()).copied().collect();
    let open_edges: Vec<usize> = open.iter().map(|&b| boundary_edge(b)).collect();
    let shape: Vec<usize> = open_edges.iter().map(|&e| edge_dim[e]).collect();
    let free: Vec<usize> = (0..edges.len()).filter(|e| !open_edges.contains(e)).collect();
    let loops = d.circles().iter().fold(S::one(), |acc, t| {
        acc.mul(S::from_count(m.dim(t).unwrap()))
    });
    TensorValue::from_fn(shape, |idx| {
        let mut value = vec![usize::MAX; edges.len()];
        for (k, &e) in open_edges.iter().enumerate() {
            if value[e] != usize::MAX && value[e] != idx[k] {
                return S::zero();
            }
            value[e] = idx[k];
        }
        let mut total = S::zero();
        let mut counter = vec![0usize; free.len()];
        loop {
            for (k, &e) in free.iter().enumerate() {
                value[e] = counter[k];
            }
            total = total.add(weight(d, m, &value));
            let mut k = 0;
            loop {
                if k == free.len() {
                    return total.mul(loops);
                }
                counter[k] += 1;
                if counter[k] < edge_dim[free[k]] {
                    break;
                }
                counter[k] = 0;
                k += 1;
            }
        }
    })
}

fn weight<S: Semiring>(d: &Diagram, m: &Model<S>, value: &[usize]) -> S {
    let mut w = S::one();
    for (v, n) in d.nodes().iter().enumerate() {
        let ports: Vec<(usize, usize)> = d
            .edges()
            .iter()
            .enumerate()
            .flat_map(|(i, e)| {
                let mut ends = vec![];
                if e.0.node == v {
                    ends.push((e.0.port, value[i]));
                }
                if e.1.node == v {
                    ends.push((e.1.port, value[i]));
                }
                ends
            })
            .collect();
        match n {
            Node::Boundary { .. } => {}
            Node::Spider { color, ty } => {
                let basis = m.basis(*color, ty).unwrap();
                let s = basis.iter().fold(S::zero(), |acc, b| {
                    acc.add(ports.iter().fold(S::one(), |p, &(_, x)| p.mul(b[x])))
                });
                w = w.mul(s);
            }
            Node::Generator(g) => {
                let t = m.generator_tensor(&g.name).unwrap();
                let n_in = g.inputs.len();
                let mut idx = vec![0; g.arity()];
                for &(port, x) in &ports {
                    // tensor axes: outputs first, then inputs
                    let axis = if port < n_in { g.outputs.len() + port } else { port - n_in };
                    idx[axis] = x;
                }
                w = w.mul(t.get(&idx));
            }
        }
        if w.is_zero() {
            return w;
        }
    }
    w
}

pub fn random_complex(r: &mut TestRng) -> Complex64 {
    Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// A real orthonormal basis other than the standard one.
pub fn rotated_basis(d: usize) -> Vec<Vec<f64>> {
    let s2 = 0.5f64.sqrt();
    match d {
        2 => vec![vec![s2, s2], vec![s2, -s2]],
        3 => {
            let (a, b, c) = (1.0 / 3f64.sqrt(), s2, 1.0 / 6f64.sqrt());
            vec![vec![a, a, a], vec![b, -b, 0.0], vec![c, c, -2.0 * c]]
        }
        4 => vec![
            vec![0.5, 0.5, 0.5, 0.5],
            vec![0.5, -0.5, 0.5, -0.5],
            vec![0.5, 0.5, -0.5, -0.5],
            vec![0.5, -0.5, -0.5, 0.5],
        ],
        _ => panic!("no rotated basis for dimension {d}"),
    }
}

/// Types `Q` and `R` with the given dimensions, generators with random
/// arities (0..=2 inputs and outputs) and random complex entries, and a
/// rotated dark basis on both types.
pub fn random_complex_model(r: &mut TestRng, dq: usize, dr: usize, gens: usize) -> Model<Complex64> {
    let mut m = Model::new();
    m.add_type("Q", dq).unwrap();
    m.add_type("R", dr).unwrap();
    for (t, d) in [("Q", dq), ("R", dr)] {
        let b = rotated_basis(d)
            .into_iter()
            .map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect();
        m.set_basis(Color::Dark, &WireType::new(t), b).unwrap();
    }
    for k in 0..gens {
        let pick = |r: &mut TestRng| -> Vec<&'static str> {
            let n = r.gen_range(0..=2);
            (0..n).map(|_| *["Q", "R"].choose(r).unwrap()).collect()
        };
        let (mut ins, mut outs) = (pick(r), pick(r));
        if ins.is_empty() && outs.is_empty() {
            ins.push("Q");
            outs.push("Q");
        }
        let dim = |t: &&str| if *t == "Q" { dq } else { dr };
        let shape: Vec<usize> = outs.iter().chain(&ins).map(dim).collect();
        let size: usize = shape.iter().product();
        let data = (0..size).map(|_| random_complex(r)).collect();
        let t = TensorValue::new(shape, data).unwrap();
        m.add_generator(GeneratorDecl::new(&format!("g{k}"), &ins, &outs), t)
            .unwrap();
    }
    m
}

/// A random well-typed diagram with the given inputs, built from `layers`
/// layers of generators, identities, swaps, spiders, cups and caps. The
/// number of open wires is kept at or below `max_wires`. Dark spiders are
/// only used when `dark` is set.
pub fn random_diagram_with(
    r: &mut TestRng,
    sig: &Signature,
    inputs: &[WireType],
    layers: usize,
    max_wires: usize,
    dark: bool,
) -> Diagram {
    let gens: Vec<GeneratorDecl> = sig.generators().cloned().collect();
    let types: Vec<WireType> = sig.types().cloned().collect();
    let mut d = Diagram::identity(inputs);
    for _ in 0..layers {
        let wires = d.output_types();
        let mut layer = Diagram::empty();
        let mut i = 0;
        let mut budget = max_wires.saturating_sub(wires.len());
        if wires.is_empty() && budget >= 2 {
            let states: Vec<&GeneratorDecl> = gens
                .iter()
                .filter(|g| g.inputs.is_empty() && g.outputs.len() <= budget)
                .collect();
            match states.choose(r) {
                Some(g) if r.gen_bool(0.5) => layer = sig.generator(&g.name).unwrap(),
                _ => layer = Diagram::cup(types.choose(r).unwrap()),
            }
        }
        while i < wires.len() {
            let rest = &wires[i..];
            let choice = r.gen_range(0..7);
            let atom = match choice {
                0 => {
                    let fits: Vec<&GeneratorDecl> = gens
                        .iter()
                        .filter(|g| {
                            !g.inputs.is_empty()
                                && rest.starts_with(&g.inputs)
                                && g.outputs.len() <= g.inputs.len() + budget
                        })
                        .collect();
                    fits.choose(r).map(|g| {
                        budget = (budget + g.inputs.len()) - g.outputs.len();
                        (sig.generator(&g.name).unwrap(), g.inputs.len())
                    })
                }
                1 if rest.len() >= 2 => Some((Diagram::swap(&rest[0], &rest[1]), 2)),
                2 if rest.len() >= 2 && rest[0] == rest[1] => Some((Diagram::cap(&rest[0]), 2)),
                3 => {
                    let n = if rest.len() >= 2 && rest[0] == rest[1] && r.gen_bool(0.5) { 2 } else { 1 };
                    let m = r.gen_range(0..=(1 + budget.min(1)));
                    budget = (budget + n).saturating_sub(m);
                    let c = if !dark || r.gen_bool(0.5) { Color::Light } else { Color::Dark };
                    Some((Diagram::spider(c, &rest[0], n, m), n))
                }
                _ => None,
            };
            let (a, used) = atom.unwrap_or_else(|| (Diagram::identity(&rest[..1]), 1));
            layer = layer.compose_par(&a);
            i += used;
            if budget >= 2 && r.gen_bool(0.1) {
                let t = types.choose(r).unwrap();
                layer = layer.compose_par(&Diagram::cup(t));
                budget -= 2;
            }
        }
        d = d.compose_seq(&layer).unwrap();
    }
    d
}

/// [`random_diagram_with`] using both spider colours.
pub fn random_diagram(
    r: &mut TestRng,
    sig: &Signature,
    inputs: &[WireType],
    layers: usize,
    max_wires: usize,
) -> Diagram {
    random_diagram_with(r, sig, inputs, layers, max_wires, true)
}

/// Random list of at most `max` types.
pub fn random_types(r: &mut TestRng, sig: &Signature, max: usize) -> Vec<WireType> {
    let types: Vec<WireType> = sig.types().cloned().collect();
    let n = r.gen_range(0..=max);
    (0..n).map(|_| types.choose(r).unwrap().clone()).collect()
}

/// A relation as a set of (input tuple, output tuple) pairs.
pub type Relation = BTreeSet<(Vec<usize>, Vec<usize>)>;

pub fn rel_compose(a: &Relation, b: &Relation) -> Relation {
    let mut out = Relation::new();
    for (x, y) in a {
        for (y2, z) in b {
            if y == y2 {
                out.insert((x.clone(), z.clone()));
            }
        }
    }
    out
}

pub fn rel_product(a: &Relation, b: &Relation) -> Relation {
    let mut out = Relation::new();
    for (x1, y1) in a {
        for (x2, y2) in b {
            out.insert((
                x1.iter().chain(x2).copied().collect(),
                y1.iter().chain(y2).copied().collect(),
            ));
        }
    }
    out
}

pub fn rel_converse(a: &Relation) -> Relation {
    a.iter().map(|(x, y)| (y.clone(), x.clone())).collect()
}

/// Read a boolean tensor (outputs first) as a relation.
pub fn tensor_relation(t: &TensorValue<bool>, n_out: usize) -> Relation {
    let shape = t.shape().to_vec();
    let mut out = Relation::new();
    let mut idx = vec![0; shape.len()];
    if shape.contains(&0) {
        return out;
    }
    loop {
        if t.get(&idx) {
            out.insert((idx[n_out..].to_vec(), idx[..n_out].to_vec()));
        }
        let mut k = shape.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Sum over all indices of `a[i] * b[i]`: plain reference contraction for
/// matrices stored outputs-first.
pub fn matmul<S: Semiring>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(S::zero(), |acc, l| acc.add(a[i][l].mul(b[l][j]))))
                .collect()
        })
        .collect()
}

/// Spider `(n, m)` whose last `k` outputs feed the first `k` inputs of a
/// spider `(n2, m2)` of the same colour.
pub fn two_spiders(c: Color, t: &WireType, n: usize, m: usize, n2: usize, m2: usize, k: usize) -> Diagram {
    assert!(k <= m && k <= n2);
    let first = Diagram::spider(c, t, n, m).compose_par(&Diagram::identity(&vec![t.clone(); n2 - k]));
    let second = Diagram::identity(&vec![t.clone(); m - k]).compose_par(&Diagram::spider(c, t, n2, m2));
    first.compose_seq(&second).unwrap()
}

/// What fusing [`two_spiders`] should leave: one spider, or a bare wire
/// (identity, cup or cap) when the spider has two legs, or a closed loop
/// when it has none.
pub fn fused_spider(c: Color, t: &WireType, n: usize, m: usize) -> Diagram {
    match (n, m) {
        (1, 1) => Diagram::identity(std::slice::from_ref(t)),
        (0, 2) => Diagram::cup(t),
        (2, 0) => Diagram::cap(t),
        (0, 0) => Diagram::cup(t).compose_seq(&Diagram::cap(t)).unwrap(),
        _ => Diagram::spider(c, t, n, m),
    }
}

/// A light spider with `a` inputs whose first `p` outputs run into a dark
/// spider with `b` outputs; `e` further light outputs stay open.
pub fn light_dark_pair(t: &WireType, a: usize, p: usize, e: usize, b: usize) -> Diagram {
    let light = Diagram::spider(Color::Light, t, a, p + e);
    let dark = Diagram::spider(Color::Dark, t, p, b).compose_par(&Diagram::identity(&vec![t.clone(); e]));
    light.compose_seq(&dark).unwrap()
}

/// A model with one type `Q` of dimension `d`, the standard light basis and
/// a rotated real dark basis.
pub fn spider_model(d: usize) -> Model<Complex64> {
    let mut m = Model::new();
    m.add_type("Q", d).unwrap();
    let b = rotated_basis(d)
        .into_iter()
        .map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
        .collect();
    m.set_basis(Color::Dark, &q(), b).unwrap();
    m
}

/// Boolean model over `A`, `B` with random relations.
pub fn random_relation_model(r: &mut TestRng, da: usize, db: usize) -> Model<bool> {
    let mut m = Model::new();
    m.add_type("A", da).unwrap();
    m.add_type("B", db).unwrap();
    for (k, (ins, outs)) in [
        (vec!["A"], vec!["B"]),
        (vec!["B"], vec!["A"]),
        (vec!["A", "B"], vec!["A"]),
        (vec!["A"], vec!["A"]),
    ]
    .into_iter()
    .enumerate()
    {
        let dim = |t: &&str| if *t == "A" { da } else { db };
        let shape: Vec<usize> = outs.iter().chain(&ins).map(dim).collect();
        let t = TensorValue::from_fn(shape, |_| r.gen_bool(0.4));
        m.add_generator(GeneratorDecl::new(&format!("r{k}"), &ins, &outs), t)
            .unwrap();
    }
    m
}
