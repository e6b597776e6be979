use std::collections::VecDeque;
use std::fmt::Write;

use super::{Color, Diagram, Node};

fn fill(color: Color) -> &'static str {
    match color {
        Color::Light => "#d9d9d9",
        Color::Dark => "#595959",
    }
}

/// Graphviz rendering: inputs ranked on the left, outputs on the right,
/// spiders as filled circles, boxes as records with one cell per port.
pub fn to_dot(d: &Diagram, name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph {:?} {{", name);
    s.push_str("  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n");
    for (id, n) in d.nodes().iter().enumerate() {
        match n {
            Node::Boundary { ty } => {
                let (role, pos) = d.boundary_position(id).expect("boundary is listed");
                let tag = match role {
                    super::Role::Input => "in",
                    super::Role::Output => "out",
                };
                let _ = writeln!(
                    s,
                    "  n{id} [shape=plaintext, label=\"{tag}{pos}: {ty}\"];"
                );
            }
            Node::Spider { color, ty } => {
                let _ = writeln!(
                    s,
                    "  n{id} [shape=circle, style=filled, fillcolor=\"{}\", label=\"\", width=0.25, tooltip=\"{color} {ty}\"];",
                    fill(*color)
                );
            }
            Node::Generator(g) => {
                let ins: Vec<String> = (0..g.inputs.len()).map(|p| format!("<p{p}>")).collect();
                let outs: Vec<String> = (0..g.outputs.len())
                    .map(|p| format!("<p{}>", p + g.inputs.len()))
                    .collect();
                let _ = writeln!(
                    s,
                    "  n{id} [shape=record, label=\"{{{}}}|{}|{{{}}}\"];",
                    ins.join("|"),
                    g.name,
                    outs.join("|")
                );
            }
        }
    }
    let port = |node: usize, p: usize| match &d.nodes()[node] {
        Node::Generator(_) => format!("n{node}:p{p}"),
        _ => format!("n{node}"),
    };
    for e in d.edges() {
        let ty = d.nodes()[e.0.node].port_type(e.0.port);
        let _ = writeln!(
            s,
            "  {} -- {} [label=\"{ty}\"];",
            port(e.0.node, e.0.port),
            port(e.1.node, e.1.port)
        );
    }
    for (k, t) in d.circles().iter().enumerate() {
        let _ = writeln!(s, "  loop{k} [shape=circle, label=\"{t}\", style=dashed];");
    }
    let ids = |v: &[usize]| v.iter().map(|i| format!("n{i}")).collect::<Vec<_>>().join("; ");
    if !d.inputs().is_empty() {
        let _ = writeln!(s, "  {{ rank=source; {} }}", ids(d.inputs()));
    }
    if !d.outputs().is_empty() {
        let _ = writeln!(s, "  {{ rank=sink; {} }}", ids(d.outputs()));
    }
    s.push_str("}\n");
    s
}

/// Column of every node: BFS distance from the inputs, outputs last.
fn layers(d: &Diagram) -> Vec<usize> {
    let n = d.node_count();
    let mut adj = vec![Vec::new(); n];
    for e in d.edges() {
        adj[e.0.node].push(e.1.node);
        adj[e.1.node].push(e.0.node);
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &i in d.inputs() {
        dist[i] = 0;
        queue.push_back(i);
    }
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if dist[u] == usize::MAX && !d.outputs().contains(&u) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    for (v, x) in dist.iter_mut().enumerate() {
        if *x == usize::MAX && !d.outputs().contains(&v) {
            *x = 1;
        }
    }
    let last = dist
        .iter()
        .filter(|&&x| x != usize::MAX)
        .max()
        .copied()
        .unwrap_or(0)
        + 1;
    for &o in d.outputs() {
        dist[o] = last;
    }
    dist
}

/// Standalone SVG with a simple layered layout.
pub fn to_svg(d: &Diagram) -> String {
    let layer = layers(d);
    let cols = layer.iter().copied().max().unwrap_or(0) + 1;
    let mut row_of = vec![0usize; d.node_count()];
    let mut rows = vec![0usize; cols];
    for v in 0..d.node_count() {
        let l = layer[v];
        row_of[v] = match d.boundary_position(v) {
            Some((_, p)) => p,
            None => rows[l],
        };
        rows[l] = rows[l].max(row_of[v] + 1);
    }
    let height = rows.iter().copied().max().unwrap_or(1).max(1) * 60 + 40 + d.circles().len() * 40;
    let width = cols * 110 + 40;
    let pos = |v: usize| (40 + layer[v] * 110, 40 + row_of[v] * 60);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" font-family=\"Helvetica\" font-size=\"12\">"
    );
    for e in d.edges() {
        let (x1, y1) = pos(e.0.node);
        let (x2, y2) = pos(e.1.node);
        if e.0.node == e.1.node {
            let _ = writeln!(
                s,
                "  <circle cx=\"{}\" cy=\"{}\" r=\"12\" fill=\"none\" stroke=\"black\"/>",
                x1 + 12,
                y1
            );
        } else {
            let _ = writeln!(
                s,
                "  <line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"black\"/>"
            );
        }
    }
    for (v, n) in d.nodes().iter().enumerate() {
        let (x, y) = pos(v);
        match n {
            Node::Boundary { ty } => {
                let _ = writeln!(s, "  <text x=\"{}\" y=\"{}\">{ty}</text>", x - 10, y - 6);
            }
            Node::Spider { color, .. } => {
                let _ = writeln!(
                    s,
                    "  <circle cx=\"{x}\" cy=\"{y}\" r=\"8\" fill=\"{}\" stroke=\"black\"/>",
                    fill(*color)
                );
            }
            Node::Generator(g) => {
                let _ = writeln!(
                    s,
                    "  <rect x=\"{}\" y=\"{}\" width=\"40\" height=\"24\" fill=\"white\" stroke=\"black\"/>\n  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
                    x - 20,
                    y - 12,
                    x,
                    y + 4,
                    g.name
                );
            }
        }
    }
    for (k, t) in d.circles().iter().enumerate() {
        let cy = height - 20 - k * 40;
        let _ = writeln!(
            s,
            "  <circle cx=\"40\" cy=\"{cy}\" r=\"12\" fill=\"none\" stroke=\"black\"/>\n  <text x=\"60\" y=\"{}\">{t}</text>",
            cy + 4
        );
    }
    s.push_str("</svg>\n");
    s
}
