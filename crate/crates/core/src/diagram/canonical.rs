//! Canonical serialization of diagrams.
//!
//! Node orderings are found by colour refinement with individualization on
//! ties; the lexicographically least serialization over the whole search
//! tree is the canonical form. Closed components are canonicalized one at a
//! time and sorted, so scalars form an unordered multiset.

use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use super::{Diagram, Node};

/// Byte-comparable serialization; equal iff the diagrams are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Hex SHA-256 of the serialization.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.0.as_bytes()))
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Canonical position of every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    /// `order[position] = node id`
    pub order: Vec<usize>,
    /// `rank[node id] = position`
    pub rank: Vec<usize>,
}

type PortKey = Option<usize>;

struct Local {
    labels: Vec<String>,
    // (own port, neighbour, neighbour port)
    adj: Vec<Vec<(PortKey, usize, PortKey)>>,
    edges: Vec<(usize, PortKey, usize, PortKey)>,
}

fn node_label(d: &Diagram, id: usize) -> String {
    match &d.nodes[id] {
        Node::Boundary { ty } => match d.boundary_position(id) {
            Some((super::Role::Input, p)) => format!("I{p}:{ty}"),
            Some((super::Role::Output, p)) => format!("O{p}:{ty}"),
            None => format!("B?:{ty}"),
        },
        Node::Spider { color, ty } => format!("S:{color}:{ty}"),
        Node::Generator(g) => {
            let join = |ts: &[super::WireType]| {
                ts.iter().map(|t| t.name()).collect::<Vec<_>>().join(",")
            };
            format!("G:{}:[{}]->[{}]", g.name, join(&g.inputs), join(&g.outputs))
        }
    }
}

fn port_key(d: &Diagram, node: usize, port: usize) -> PortKey {
    match &d.nodes[node] {
        Node::Generator(_) => Some(port),
        _ => None,
    }
}

fn refine(g: &Local, mut colors: Vec<usize>) -> Vec<usize> {
    let mut count = distinct(&colors);
    loop {
        let sigs: Vec<(usize, Vec<(PortKey, usize, PortKey)>)> = (0..colors.len())
            .map(|v| {
                let mut nb: Vec<_> = g.adj[v]
                    .iter()
                    .map(|&(p, u, q)| (p, colors[u], q))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        colors = rank_of(&sigs);
        let c = distinct(&colors);
        if c == count {
            return colors;
        }
        count = c;
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn rank_of<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("present"))
        .collect()
}

fn serialize(g: &Local, colors: &[usize]) -> String {
    let n = colors.len();
    let mut order = vec![0; n];
    for (v, &c) in colors.iter().enumerate() {
        order[c] = v;
    }
    let mut s = String::new();
    for &v in &order {
        s.push_str(&g.labels[v]);
        s.push(';');
    }
    let key = |k: PortKey| k.map_or("*".to_string(), |p| p.to_string());
    let mut es: Vec<((usize, PortKey), (usize, PortKey))> = g
        .edges
        .iter()
        .map(|&(a, pa, b, pb)| {
            let x = (colors[a], pa);
            let y = (colors[b], pb);
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    es.sort_unstable();
    s.push('|');
    for ((a, pa), (b, pb)) in es {
        s.push_str(&format!("{a}.{}-{b}.{};", key(pa), key(pb)));
    }
    s
}

/// Least serialization over the individualization-refinement tree.
fn search(g: &Local, colors: Vec<usize>) -> (String, Vec<usize>) {
    let colors = refine(g, colors);
    let n = colors.len();
    if distinct(&colors) == n {
        return (serialize(g, &colors), colors);
    }
    // first non-singleton cell
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    let (&cell_color, members) = cells
        .iter()
        .find(|(_, m)| m.len() > 1)
        .expect("partition is not discrete");
    let mut best: Option<(String, Vec<usize>)> = None;
    for &v in members {
        let split: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(u, &c)| 2 * c + usize::from(c == cell_color && u != v))
            .collect();
        let cand = search(g, rank_of(&split));
        if best.as_ref().is_none_or(|b| cand.0 < b.0) {
            best = Some(cand);
        }
    }
    best.expect("cell is non-empty")
}

fn local_graph(d: &Diagram, members: &[usize], index: &[usize]) -> Local {
    let labels = members.iter().map(|&v| node_label(d, v)).collect();
    let mut adj = vec![Vec::new(); members.len()];
    let mut edges = Vec::new();
    for e in &d.edges {
        let (a, b) = (e.0, e.1);
        if index[a.node] == usize::MAX {
            continue;
        }
        let (la, lb) = (index[a.node], index[b.node]);
        let (pa, pb) = (port_key(d, a.node, a.port), port_key(d, b.node, b.port));
        adj[la].push((pa, lb, pb));
        adj[lb].push((pb, la, pa));
        edges.push((la, pa, lb, pb));
    }
    Local { labels, adj, edges }
}

fn components(d: &Diagram) -> Vec<Vec<usize>> {
    let n = d.nodes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for e in &d.edges {
        let (a, b) = (find(&mut parent, e.0.node), find(&mut parent, e.1.node));
        if a != b {
            parent[a] = b;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

pub(super) fn canonicalize(d: &Diagram) -> (CanonicalForm, Labeling) {
    let n = d.nodes.len();
    let mut anchored = Vec::new();
    let mut closed = Vec::new();
    for comp in components(d) {
        if comp.iter().any(|&v| d.nodes[v].is_boundary()) {
            anchored.extend(comp);
        } else {
            closed.push(comp);
        }
    }
    anchored.sort_unstable();

    let run = |members: &[usize]| -> (String, Vec<usize>) {
        let mut index = vec![usize::MAX; n];
        for (i, &v) in members.iter().enumerate() {
            index[v] = i;
        }
        let g = local_graph(d, members, &index);
        let init = rank_of(&g.labels);
        let (s, colors) = search(&g, init);
        let mut order = vec![0; members.len()];
        for (i, &c) in colors.iter().enumerate() {
            order[c] = members[i];
        }
        (s, order)
    };

    let (anchored_s, mut order) = run(&anchored);
    let mut closed_runs: Vec<(String, Vec<usize>)> = closed.iter().map(|c| run(c)).collect();
    closed_runs.sort();

    let types = |ids: &[usize]| {
        ids.iter()
            .map(|&i| d.nodes[i].port_type(0).name().to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut s = format!(
        "in[{}] out[{}] open{{{}}} closed{{",
        types(&d.inputs),
        types(&d.outputs),
        anchored_s
    );
    for (cs, corder) in &closed_runs {
        s.push('(');
        s.push_str(cs);
        s.push(')');
        order.extend(corder);
    }
    s.push_str("} circles[");
    s.push_str(
        &d.circles
            .iter()
            .map(|t| t.name())
            .collect::<Vec<_>>()
            .join(","),
    );
    s.push(']');

    let mut rank = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        rank[v] = p;
    }
    (CanonicalForm(s), Labeling { order, rank })
}
