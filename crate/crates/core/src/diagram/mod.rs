//! Typed string diagrams represented as open graphs.
//!
//! A [`Diagram`] only records *what is connected to what*: generator boxes
//! with ordered ports, spiders with unordered legs, and boundary nodes that
//! carry the ordered inputs and outputs. Bending a wire is not a thing that
//! can be represented, so two diagrams that differ by a deformation have the
//! same graph and therefore the same [`CanonicalForm`].
//!
//! Generator ports are numbered inputs first (`0..n`) then outputs
//! (`n..n+m`). Boundary nodes have a single port `0`. Spider legs are
//! numbered `0..degree` but the numbering carries no meaning.

mod builder;
mod canonical;
mod dot;
mod json;
mod signature;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use builder::Builder;
pub use canonical::{CanonicalForm, Labeling};
pub use dot::{to_dot, to_svg};
pub use json::DiagramJson;
pub use signature::{GeneratorDecl, Signature};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("unknown wire type `{0}`")]
    UnknownType(WireType),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("boundary arity mismatch: left side has {left} wire(s), right side has {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("boundary type mismatch at position {position}: `{left}` vs `{right}`")]
    TypeMismatch {
        position: usize,
        left: WireType,
        right: WireType,
    },

    #[error("inconsistent generator declaration for `{0}`: {1}")]
    BadDeclaration(String, String),

    #[error("malformed diagram: {0}")]
    Malformed(String),
}

pub type DiagramResult<T> = Result<T, DiagramError>;

/// An abstract system type. Dimensions are assigned by models, not here.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WireType(String);

impl WireType {
    pub fn new(name: impl Into<String>) -> Self {
        WireType(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for WireType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for WireType {
    fn from(s: &str) -> Self {
        WireType::new(s)
    }
}

/// Spider family. Each family is tied to a basis by the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Light,
    Dark,
}

impl Color {
    pub fn name(self) -> &'static str {
        match self {
            Color::Light => "light",
            Color::Dark => "dark",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "light" => Ok(Color::Light),
            "dark" => Ok(Color::Dark),
            other => Err(format!("unknown spider color `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Input,
    Output,
}

/// Everything a generator node needs to know about itself, so that diagrams
/// stay self-contained (taking the dagger does not need the signature).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenLabel {
    pub name: String,
    pub dagger: String,
    pub inputs: Vec<WireType>,
    pub outputs: Vec<WireType>,
}

impl GenLabel {
    pub fn arity(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn port_type(&self, port: usize) -> &WireType {
        if port < self.inputs.len() {
            &self.inputs[port]
        } else {
            &self.outputs[port - self.inputs.len()]
        }
    }

    pub fn is_input_port(&self, port: usize) -> bool {
        port < self.inputs.len()
    }

    /// The label of the dagger partner.
    pub fn flipped(&self) -> GenLabel {
        GenLabel {
            name: self.dagger.clone(),
            dagger: self.name.clone(),
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
        }
    }

    /// Port of the dagger partner that corresponds to `port` of this box.
    pub fn flipped_port(&self, port: usize) -> usize {
        let (n, m) = (self.inputs.len(), self.outputs.len());
        if port < n {
            m + port
        } else {
            port - n
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Generator(Arc<GenLabel>),
    Spider { color: Color, ty: WireType },
    Boundary { ty: WireType },
}

impl Node {
    pub fn is_boundary(&self) -> bool {
        matches!(self, Node::Boundary { .. })
    }

    pub fn is_spider(&self) -> bool {
        matches!(self, Node::Spider { .. })
    }

    /// Type carried by `port` (any leg, for spiders and boundaries).
    pub fn port_type(&self, port: usize) -> &WireType {
        match self {
            Node::Generator(g) => g.port_type(port),
            Node::Spider { ty, .. } | Node::Boundary { ty } => ty,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct End {
    pub node: usize,
    pub port: usize,
}

impl End {
    pub fn new(node: usize, port: usize) -> Self {
        End { node, port }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge(pub End, pub End);

impl Edge {
    pub fn end(&self, side: usize) -> End {
        if side == 0 {
            self.0
        } else {
            self.1
        }
    }
}

/// A typed open graph with an ordered input and output boundary.
///
/// Values are immutable once built; every operation returns a new diagram.
#[derive(Clone, Debug)]
pub struct Diagram {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    circles: Vec<WireType>,
    splices: usize,
}

impl Diagram {
    /// The empty diagram: no wires, no nodes, the trivial process.
    pub fn empty() -> Diagram {
        Diagram {
            nodes: Vec::new(),
            edges: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            circles: Vec::new(),
            splices: 0,
        }
    }

    pub fn identity(types: &[WireType]) -> Diagram {
        let mut b = Builder::new();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for t in types {
            let i = b.add(Node::Boundary { ty: t.clone() });
            let o = b.add(Node::Boundary { ty: t.clone() });
            b.connect(End::new(i, 0), End::new(o, 0));
            inputs.push(i);
            outputs.push(o);
        }
        b.finish(inputs, outputs)
    }

    pub fn generator(label: Arc<GenLabel>) -> Diagram {
        let mut b = Builder::new();
        let g = b.add(Node::Generator(label.clone()));
        let n = label.inputs.len();
        let inputs = label
            .inputs
            .iter()
            .enumerate()
            .map(|(p, t)| {
                let i = b.add(Node::Boundary { ty: t.clone() });
                b.connect(End::new(i, 0), End::new(g, p));
                i
            })
            .collect();
        let outputs = label
            .outputs
            .iter()
            .enumerate()
            .map(|(p, t)| {
                let o = b.add(Node::Boundary { ty: t.clone() });
                b.connect(End::new(g, n + p), End::new(o, 0));
                o
            })
            .collect();
        b.finish(inputs, outputs)
    }

    /// Two output wires joined: the 0-in/2-out bent wire.
    pub fn cup(ty: &WireType) -> Diagram {
        let mut b = Builder::new();
        let o0 = b.add(Node::Boundary { ty: ty.clone() });
        let o1 = b.add(Node::Boundary { ty: ty.clone() });
        b.connect(End::new(o0, 0), End::new(o1, 0));
        b.finish(vec![], vec![o0, o1])
    }

    pub fn cap(ty: &WireType) -> Diagram {
        Diagram::cup(ty).dagger()
    }

    pub fn swap(s: &WireType, t: &WireType) -> Diagram {
        let mut b = Builder::new();
        let i0 = b.add(Node::Boundary { ty: s.clone() });
        let i1 = b.add(Node::Boundary { ty: t.clone() });
        let o0 = b.add(Node::Boundary { ty: t.clone() });
        let o1 = b.add(Node::Boundary { ty: s.clone() });
        b.connect(End::new(i0, 0), End::new(o1, 0));
        b.connect(End::new(i1, 0), End::new(o0, 0));
        b.finish(vec![i0, i1], vec![o0, o1])
    }

    pub fn spider(color: Color, ty: &WireType, n_in: usize, m_out: usize) -> Diagram {
        let mut b = Builder::new();
        let s = b.add(Node::Spider {
            color,
            ty: ty.clone(),
        });
        let mut leg = 0;
        let mut boundary = |b: &mut Builder| {
            let x = b.add(Node::Boundary { ty: ty.clone() });
            b.connect(End::new(x, 0), End::new(s, leg));
            leg += 1;
            x
        };
        let inputs = (0..n_in).map(|_| boundary(&mut b)).collect();
        let outputs = (0..m_out).map(|_| boundary(&mut b)).collect();
        b.finish(inputs, outputs)
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn compose_seq(&self, next: &Diagram) -> DiagramResult<Diagram> {
        check_boundary(&self.output_types(), &next.input_types())?;
        let mut b = Builder::new();
        let off_a = b.absorb(self);
        let off_b = b.absorb(next);
        for (&o, &i) in self.outputs.iter().zip(&next.inputs) {
            let (o, i) = (o + off_a, i + off_b);
            b.make_connector(o);
            b.make_connector(i);
            b.connect(End::new(o, 0), End::new(i, 0));
        }
        let inputs = self.inputs.iter().map(|&i| i + off_a).collect();
        let outputs = next.outputs.iter().map(|&o| o + off_b).collect();
        Ok(b.finish(inputs, outputs))
    }

    /// Parallel composition; `other`'s wires are placed after `self`'s.
    pub fn compose_par(&self, other: &Diagram) -> Diagram {
        let mut b = Builder::new();
        let off_a = b.absorb(self);
        let off_b = b.absorb(other);
        let inputs = self
            .inputs
            .iter()
            .map(|&i| i + off_a)
            .chain(other.inputs.iter().map(|&i| i + off_b))
            .collect();
        let outputs = self
            .outputs
            .iter()
            .map(|&o| o + off_a)
            .chain(other.outputs.iter().map(|&o| o + off_b))
            .collect();
        b.finish(inputs, outputs)
    }

    /// Flip the diagram: inputs and outputs exchange roles and every box is
    /// replaced by its dagger partner. Spiders are unchanged.
    pub fn dagger(&self) -> Diagram {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Generator(g) => Node::Generator(Arc::new(g.flipped())),
                other => other.clone(),
            })
            .collect();
        let remap = |e: End| match &self.nodes[e.node] {
            Node::Generator(g) => End::new(e.node, g.flipped_port(e.port)),
            _ => e,
        };
        let edges = self
            .edges
            .iter()
            .map(|e| Edge(remap(e.0), remap(e.1)))
            .collect();
        Diagram {
            nodes,
            edges,
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
            circles: self.circles.clone(),
            splices: self.splices,
        }
    }

    /// Rotate by half a turn: the old outputs, reversed, become the inputs
    /// and the old inputs, reversed, become the outputs.
    pub fn transpose(&self) -> Diagram {
        let mut d = self.clone();
        d.inputs = self.outputs.iter().rev().copied().collect();
        d.outputs = self.inputs.iter().rev().copied().collect();
        d
    }

    /// Transpose spelled out with explicit caps and cups; splices to the same
    /// graph as [`Diagram::transpose`].
    pub fn transpose_by_bending(&self) -> Diagram {
        let ins = self.input_types();
        let outs = self.output_types();
        let rev = |ts: &[WireType]| ts.iter().rev().cloned().collect::<Vec<_>>();
        // nested cups: 0 -> ins ++ rev(ins)
        let cups = nested_cups(&ins);
        // caps on rev(outs) ++ outs
        let caps = nested_cups(&rev(&outs)).dagger();
        let first = Diagram::identity(&rev(&outs)).compose_par(&cups);
        let middle = Diagram::identity(&rev(&outs))
            .compose_par(self)
            .compose_par(&Diagram::identity(&rev(&ins)));
        let last = caps.compose_par(&Diagram::identity(&rev(&ins)));
        first
            .compose_seq(&middle)
            .and_then(|d| d.compose_seq(&last))
            .expect("bending wires is always well-typed")
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canonical::canonicalize(self).0
    }

    pub fn canonical_labeling(&self) -> (CanonicalForm, Labeling) {
        canonical::canonicalize(self)
    }

    /// Equality up to deformation: an isomorphism of open graphs preserving
    /// boundary order, labels and wire types.
    pub fn canonical_equal(&self, other: &Diagram) -> bool {
        self.input_types() == other.input_types()
            && self.output_types() == other.output_types()
            && self.node_count() == other.node_count()
            && self.edges.len() == other.edges.len()
            && self.canonical_form() == other.canonical_form()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Closed wire loops with no node on them, one entry per loop.
    pub fn circles(&self) -> &[WireType] {
        &self.circles
    }

    /// Number of boundary splices performed while this diagram was built.
    /// Not part of the diagram's identity.
    pub fn splices(&self) -> usize {
        self.splices
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.circles.is_empty()
    }

    pub fn input_types(&self) -> Vec<WireType> {
        self.boundary_types(&self.inputs)
    }

    pub fn output_types(&self) -> Vec<WireType> {
        self.boundary_types(&self.outputs)
    }

    fn boundary_types(&self, ids: &[usize]) -> Vec<WireType> {
        ids.iter()
            .map(|&i| self.nodes[i].port_type(0).clone())
            .collect()
    }

    /// `(role, position)` of a boundary node.
    pub fn boundary_position(&self, node: usize) -> Option<(Role, usize)> {
        if let Some(p) = self.inputs.iter().position(|&i| i == node) {
            return Some((Role::Input, p));
        }
        self.outputs
            .iter()
            .position(|&o| o == node)
            .map(|p| (Role::Output, p))
    }

    /// Every edge end sitting at `node`, as `(edge index, side)`.
    pub fn ends_at(&self, node: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.0.node == node {
                out.push((i, 0));
            }
            if e.1.node == node {
                out.push((i, 1));
            }
        }
        out
    }

    /// Number of edge ends at `node` (a self-loop counts twice).
    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.0.node == node) as usize + (e.1.node == node) as usize)
            .sum()
    }

    /// Every generator box and spider, by node id.
    pub fn internal_nodes(&self) -> impl Iterator<Item = (usize, &Node)> {
        self.nodes.iter().enumerate().filter(|(_, n)| !n.is_boundary())
    }

    /// Check the structural invariants of an open graph.
    pub fn validate(&self) -> DiagramResult<()> {
        let bad = |m: String| Err(DiagramError::Malformed(m));
        let mut seen = std::collections::HashSet::new();
        let mut counts = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            for end in [e.0, e.1] {
                if end.node >= self.nodes.len() {
                    return bad(format!("edge end refers to missing node {}", end.node));
                }
                if !seen.insert(end) {
                    return bad(format!(
                        "port {} of node {} used twice",
                        end.port, end.node
                    ));
                }
                counts[end.node] += 1;
                if let Node::Generator(g) = &self.nodes[end.node] {
                    if end.port >= g.arity() {
                        return bad(format!("generator `{}` has no port {}", g.name, end.port));
                    }
                }
            }
            let (ta, tb) = (
                self.nodes[e.0.node].port_type(e.0.port),
                self.nodes[e.1.node].port_type(e.1.port),
            );
            if ta != tb {
                return bad(format!("edge joins wires of type `{ta}` and `{tb}`"));
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            match n {
                Node::Generator(g) if counts[i] != g.arity() => {
                    return bad(format!("generator `{}` has unconnected ports", g.name));
                }
                Node::Boundary { .. } if counts[i] != 1 => {
                    return bad(format!("boundary node {i} must have exactly one wire"));
                }
                _ => {}
            }
        }
        let mut boundary: Vec<usize> = self.inputs.iter().chain(&self.outputs).copied().collect();
        boundary.sort_unstable();
        let listed = boundary.len();
        boundary.dedup();
        if boundary.len() != listed {
            return bad("boundary node listed twice".into());
        }
        let actual: Vec<usize> = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_boundary())
            .map(|(i, _)| i)
            .collect();
        if actual != boundary {
            return bad("boundary lists do not match the boundary nodes".into());
        }
        Ok(())
    }

    /// Build a diagram from raw parts, checking every invariant.
    pub fn from_parts(
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        circles: Vec<WireType>,
    ) -> DiagramResult<Diagram> {
        let mut circles = circles;
        circles.sort();
        let d = Diagram {
            nodes,
            edges,
            inputs,
            outputs,
            circles,
            splices: 0,
        };
        d.validate()?;
        Ok(d)
    }

    /// Drop every closed component and circle, keeping only the part
    /// connected to the boundary.
    pub fn without_scalars(&self) -> Diagram {
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.0.node].push(e.1.node);
            adj[e.1.node].push(e.0.node);
        }
        let mut keep = vec![false; n];
        let mut stack: Vec<usize> = self.inputs.iter().chain(&self.outputs).copied().collect();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut keep[v], true) {
                stack.extend(adj[v].iter().copied());
            }
        }
        let mut b = Builder::new();
        let mut id = vec![usize::MAX; n];
        for (i, node) in self.nodes.iter().enumerate() {
            if keep[i] {
                id[i] = b.add(node.clone());
            }
        }
        for e in &self.edges {
            if keep[e.0.node] {
                b.connect(
                    End::new(id[e.0.node], e.0.port),
                    End::new(id[e.1.node], e.1.port),
                );
            }
        }
        let mut d = b.finish(
            self.inputs.iter().map(|&i| id[i]).collect(),
            self.outputs.iter().map(|&o| id[o]).collect(),
        );
        d.splices = self.splices;
        d
    }

    /// Number of closed components, circles included.
    pub fn scalar_count(&self) -> usize {
        let full = self.node_count();
        let open = self.without_scalars().node_count();
        if full == open {
            return self.circles.len();
        }
        // count components among the dropped nodes
        let mut parent: Vec<usize> = (0..full).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (root(&mut parent, e.0.node), root(&mut parent, e.1.node));
            parent[a] = b;
        }
        let mut roots: Vec<usize> = (0..full).map(|v| root(&mut parent, v)).collect();
        let anchored: std::collections::HashSet<usize> = self
            .inputs
            .iter()
            .chain(&self.outputs)
            .map(|&b| roots[b])
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.iter().filter(|r| !anchored.contains(r)).count() + self.circles.len()
    }

    /// The same diagram with internal node ids permuted by `perm`
    /// (`perm[old] = new`). Used to exercise relabeling invariance.
    pub fn relabeled(&self, perm: &[usize]) -> Diagram {
        assert_eq!(perm.len(), self.nodes.len());
        let mut nodes = vec![None; self.nodes.len()];
        for (old, n) in self.nodes.iter().enumerate() {
            nodes[perm[old]] = Some(n.clone());
        }
        let mv = |e: End| End::new(perm[e.node], e.port);
        Diagram {
            nodes: nodes.into_iter().map(|n| n.expect("perm is a bijection")).collect(),
            edges: self.edges.iter().rev().map(|e| Edge(mv(e.1), mv(e.0))).collect(),
            inputs: self.inputs.iter().map(|&i| perm[i]).collect(),
            outputs: self.outputs.iter().map(|&o| perm[o]).collect(),
            circles: self.circles.clone(),
            splices: self.splices,
        }
    }
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_equal(other)
    }
}

impl Eq for Diagram {}

pub(crate) fn check_boundary(left: &[WireType], right: &[WireType]) -> DiagramResult<()> {
    if let Some(position) = left.iter().zip(right).position(|(a, b)| a != b) {
        return Err(DiagramError::TypeMismatch {
            position,
            left: left[position].clone(),
            right: right[position].clone(),
        });
    }
    if left.len() != right.len() {
        return Err(DiagramError::ArityMismatch {
            left: left.len(),
            right: right.len(),
        });
    }
    Ok(())
}

/// `0 -> ts ++ reverse(ts)` with the innermost cup on the last type.
fn nested_cups(ts: &[WireType]) -> Diagram {
    let mut d = Diagram::empty();
    for t in ts.iter().rev() {
        // wrap: 1 ⊗ d ⊗ 1 after a fresh cup
        let mut b = Builder::new();
        let off = b.absorb(&d);
        let left = b.add(Node::Boundary { ty: t.clone() });
        let right = b.add(Node::Boundary { ty: t.clone() });
        b.connect(End::new(left, 0), End::new(right, 0));
        let mut outputs = vec![left];
        outputs.extend(d.outputs.iter().map(|&o| o + off));
        outputs.push(right);
        d = b.finish(vec![], outputs);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> WireType {
        WireType::new("Q")
    }

    fn gen(name: &str, dagger: &str, ins: &[&str], outs: &[&str]) -> Diagram {
        Diagram::generator(Arc::new(GenLabel {
            name: name.into(),
            dagger: dagger.into(),
            inputs: ins.iter().map(|&t| t.into()).collect(),
            outputs: outs.iter().map(|&t| t.into()).collect(),
        }))
    }

    #[test]
    fn identity_of_nothing_is_empty() {
        let d = Diagram::identity(&[]);
        assert!(d.is_empty());
        assert!(d.canonical_equal(&Diagram::empty()));
    }

    #[test]
    fn single_identity_wire() {
        let d = Diagram::identity(&[q()]);
        assert_eq!(d.node_count(), 2);
        assert_eq!(d.edges().len(), 1);
        let e = d.edges()[0];
        assert_eq!(
            [e.0.node, e.1.node].iter().copied().collect::<std::collections::BTreeSet<_>>(),
            [d.inputs()[0], d.outputs()[0]].into_iter().collect()
        );
    }

    #[test]
    fn state_then_valuation_is_closed() {
        let psi = gen("psi", "psi_dag", &[], &["Q"]);
        let v = gen("v", "v_dag", &["Q"], &[]);
        let value = psi.compose_seq(&v).unwrap();
        assert!(value.inputs().is_empty() && value.outputs().is_empty());
        assert_eq!(value.node_count(), 2);
        value.validate().unwrap();
    }

    #[test]
    fn snake_splices_to_identity() {
        let lhs = Diagram::cap(&q())
            .compose_par(&Diagram::identity(&[q()]));
        let rhs = Diagram::identity(&[q()]).compose_par(&Diagram::cup(&q()));
        let snake = rhs.compose_seq(&lhs).unwrap();
        assert!(snake.canonical_equal(&Diagram::identity(&[q()])));
        assert!(snake.splices() > 0);
    }

    #[test]
    fn cap_after_cup_is_a_circle() {
        let loop_ = Diagram::cup(&q()).compose_seq(&Diagram::cap(&q())).unwrap();
        assert_eq!(loop_.circles(), &[q()]);
        assert_eq!(loop_.node_count(), 0);
    }

    #[test]
    fn mismatch_reports_first_position() {
        let a = Diagram::identity(&[q(), "R".into()]);
        let b = Diagram::identity(&[q(), "S".into()]);
        assert_eq!(
            a.compose_seq(&b).unwrap_err(),
            DiagramError::TypeMismatch {
                position: 1,
                left: "R".into(),
                right: "S".into()
            }
        );
        let c = Diagram::identity(&[q()]);
        assert!(matches!(
            a.compose_seq(&c),
            Err(DiagramError::ArityMismatch { left: 2, right: 1 })
        ));
    }

    #[test]
    fn dagger_of_cup_is_cap() {
        let cap = Diagram::cup(&q()).dagger();
        assert_eq!(cap.input_types(), vec![q(), q()]);
        assert!(cap.output_types().is_empty());
    }

    #[test]
    fn swap_twice_is_identity() {
        let r = WireType::new("R");
        let twice = Diagram::swap(&q(), &r)
            .compose_seq(&Diagram::swap(&r, &q()))
            .unwrap();
        assert!(twice.canonical_equal(&Diagram::identity(&[q(), r])));
    }

    #[test]
    fn spider_is_not_a_wire() {
        let s = Diagram::spider(Color::Light, &q(), 1, 1);
        assert!(!s.canonical_equal(&Diagram::identity(&[q()])));
        assert_eq!(s.dagger().input_types().len(), 1);
    }

    #[test]
    fn bending_matches_relabeling() {
        let f = gen("f", "f_dag", &["Q", "R"], &["S"]);
        assert!(f.transpose().canonical_equal(&f.transpose_by_bending()));
        assert_eq!(f.transpose().input_types(), vec![WireType::new("S")]);
        assert_eq!(
            f.transpose().output_types(),
            vec![WireType::new("R"), WireType::new("Q")]
        );
        assert!(f.transpose().transpose().canonical_equal(&f));
    }

    #[test]
    fn scalars_are_dropped() {
        let f = gen("f", "f_dag", &["Q"], &["Q"]);
        let psi = gen("psi", "psi_dag", &[], &["Q"]);
        let value = psi.compose_seq(&psi.dagger()).unwrap();
        let loop_ = Diagram::cup(&q()).compose_seq(&Diagram::cap(&q())).unwrap();
        let d = f.compose_par(&value).compose_par(&loop_);
        assert_eq!(d.scalar_count(), 2);
        assert!(d.without_scalars().canonical_equal(&f));
        assert_eq!(f.scalar_count(), 0);
    }

    #[test]
    fn validation_rejects_dangling_generator() {
        let label = Arc::new(GenLabel {
            name: "f".into(),
            dagger: "f".into(),
            inputs: vec![q()],
            outputs: vec![q()],
        });
        let err = Diagram::from_parts(
            vec![Node::Generator(label), Node::Boundary { ty: q() }],
            vec![Edge(End::new(1, 0), End::new(0, 0))],
            vec![1],
            vec![],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, DiagramError::Malformed(_)));
    }
}
