use super::{Diagram, Edge, End, Node, WireType};

#[derive(Clone, Debug)]
enum Slot {
    Node(Node),
    /// A transparent two-ended point; removed by splicing in `finish`.
    Connector(WireType),
}

/// Mutable scratch graph used to assemble diagrams. Boundary nodes that get
/// glued together are turned into connectors and spliced away on `finish`,
/// which is where wires get "pulled straight".
#[derive(Debug, Default)]
pub(crate) struct Builder {
    slots: Vec<Slot>,
    edges: Vec<Edge>,
    circles: Vec<WireType>,
    splices: usize,
}

impl Builder {
    pub fn new() -> Self {
        Builder::default()
    }

    pub fn add(&mut self, node: Node) -> usize {
        self.slots.push(Slot::Node(node));
        self.slots.len() - 1
    }

    pub fn add_connector(&mut self, ty: WireType) -> usize {
        self.slots.push(Slot::Connector(ty));
        self.slots.len() - 1
    }

    pub fn connect(&mut self, a: End, b: End) {
        self.edges.push(Edge(a, b));
    }

    /// Copy a whole diagram in; returns the id offset of its nodes.
    pub fn absorb(&mut self, d: &Diagram) -> usize {
        let off = self.slots.len();
        self.slots
            .extend(d.nodes.iter().cloned().map(Slot::Node));
        self.edges.extend(d.edges.iter().map(|e| {
            Edge(
                End::new(e.0.node + off, e.0.port),
                End::new(e.1.node + off, e.1.port),
            )
        }));
        self.circles.extend(d.circles.iter().cloned());
        self.splices += d.splices;
        off
    }

    pub fn make_connector(&mut self, id: usize) {
        let ty = match &self.slots[id] {
            Slot::Node(n) => n.port_type(0).clone(),
            Slot::Connector(t) => t.clone(),
        };
        self.slots[id] = Slot::Connector(ty);
    }

    pub fn add_circle(&mut self, ty: WireType) {
        self.circles.push(ty);
    }

    /// Splice out every connector, drop removed slots, and renumber.
    ///
    /// `inputs`/`outputs` are slot ids of the boundary nodes. Every connector
    /// must have exactly two edge ends.
    pub fn finish(self, inputs: Vec<usize>, outputs: Vec<usize>) -> Diagram {
        self.finish_keeping(inputs, outputs, &[]).0
    }

    /// Like `finish`, additionally returning the new ids of `track`ed slots
    /// (`None` for slots that were removed).
    pub fn finish_keeping(
        self,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        track: &[usize],
    ) -> (Diagram, Vec<Option<usize>>) {
        let Builder {
            slots,
            edges,
            mut circles,
            mut splices,
        } = self;
        let is_conn = |n: usize| matches!(slots[n], Slot::Connector(_));

        // incidence of connectors
        let mut conn_ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); slots.len()];
        for (i, e) in edges.iter().enumerate() {
            for side in 0..2 {
                let n = e.end(side).node;
                if is_conn(n) {
                    conn_ends[n].push((i, side));
                }
            }
        }
        debug_assert!(slots
            .iter()
            .enumerate()
            .all(|(i, s)| !matches!(s, Slot::Connector(_)) || conn_ends[i].len() == 2));

        let mut visited = vec![false; edges.len()];
        let mut out_edges = Vec::with_capacity(edges.len());

        // walk from `(edge, side)` through connectors until a real node
        let walk = |start_edge: usize,
                    start_side: usize,
                    visited: &mut Vec<bool>,
                    splices: &mut usize|
         -> End {
            let (mut e, mut exit) = (start_edge, 1 - start_side);
            loop {
                visited[e] = true;
                let end = edges[e].end(exit);
                if !is_conn(end.node) {
                    return end;
                }
                *splices += 1;
                let (ne, nside) = conn_ends[end.node]
                    .iter()
                    .copied()
                    .find(|&(ie, is)| (ie, is) != (e, exit))
                    .expect("connector has two ends");
                e = ne;
                exit = 1 - nside;
            }
        };

        for i in 0..edges.len() {
            if visited[i] {
                continue;
            }
            for side in 0..2 {
                let start = edges[i].end(side);
                if !is_conn(start.node) {
                    let other = walk(i, side, &mut visited, &mut splices);
                    out_edges.push(Edge(start, other));
                    break;
                }
            }
        }
        // what is left is made of connectors only: closed loops
        for i in 0..edges.len() {
            if visited[i] {
                continue;
            }
            let ty = match &slots[edges[i].0.node] {
                Slot::Connector(t) => t.clone(),
                Slot::Node(_) => unreachable!(),
            };
            let mut e = i;
            let mut exit = 1;
            loop {
                visited[e] = true;
                let c = edges[e].end(exit).node;
                splices += 1;
                let (ne, nside) = conn_ends[c]
                    .iter()
                    .copied()
                    .find(|&(ie, is)| (ie, is) != (e, exit))
                    .expect("connector has two ends");
                if visited[ne] {
                    break;
                }
                e = ne;
                exit = 1 - nside;
            }
            circles.push(ty);
        }

        // compact
        let mut new_id = vec![usize::MAX; slots.len()];
        let mut nodes = Vec::new();
        for (i, s) in slots.into_iter().enumerate() {
            if let Slot::Node(n) = s {
                new_id[i] = nodes.len();
                nodes.push(n);
            }
        }
        let mut legs = vec![0usize; nodes.len()];
        let mut renum = |end: End, nodes: &[Node]| {
            let id = new_id[end.node];
            if nodes[id].is_spider() {
                legs[id] += 1;
                End::new(id, legs[id] - 1)
            } else {
                End::new(id, end.port)
            }
        };
        let edges = out_edges
            .into_iter()
            .map(|e| {
                let a = renum(e.0, &nodes);
                let b = renum(e.1, &nodes);
                Edge(a, b)
            })
            .collect();
        circles.sort();
        let tracked = track
            .iter()
            .map(|&t| (new_id[t] != usize::MAX).then_some(new_id[t]))
            .collect();
        let d = Diagram {
            nodes,
            edges,
            inputs: inputs.into_iter().map(|i| new_id[i]).collect(),
            outputs: outputs.into_iter().map(|o| new_id[o]).collect(),
            circles,
            splices,
        };
        (d, tracked)
    }
}
