use std::collections::{BTreeMap, VecDeque};

use sha2::{Digest, Sha256};

use super::{RewriteError, RewriteRule};
use crate::diagram::{Builder, Diagram, End, Node, Role};

/// An embedding of a rule's lhs into a host diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    /// Host node for each lhs internal node, in the rule's search order.
    pub nodes: Vec<(usize, usize)>,
    /// Canonical ranks of the matched host nodes, in the same order.
    pub key: Vec<usize>,
    /// Host edge for each lhs internal edge.
    edges: Vec<usize>,
    /// Host end `(edge, side)` sitting at the matched node for each lhs
    /// boundary node.
    legs: BTreeMap<usize, (usize, usize)>,
    fingerprint: String,
}

/// Hash of the exact graph (node ids included); detects stale matches.
pub(crate) fn fingerprint(d: &Diagram) -> String {
    let text = format!(
        "{:?}|{:?}|{:?}|{:?}|{:?}",
        d.nodes(),
        d.edges(),
        d.inputs(),
        d.outputs(),
        d.circles()
    );
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn same_label(a: &Node, b: &Node) -> bool {
    match (a, b) {
        (Node::Generator(x), Node::Generator(y)) => {
            x.name == y.name && x.inputs == y.inputs && x.outputs == y.outputs
        }
        (Node::Spider { color: c1, ty: t1 }, Node::Spider { color: c2, ty: t2 }) => {
            c1 == c2 && t1 == t2
        }
        _ => false,
    }
}

/// lhs internal nodes in breadth-first order from the lowest id.
fn search_order(lhs: &Diagram) -> Vec<usize> {
    let internal: Vec<usize> = lhs.internal_nodes().map(|(i, _)| i).collect();
    let mut order = Vec::new();
    let mut seen = vec![false; lhs.node_count()];
    let mut queue = VecDeque::from([internal[0]]);
    seen[internal[0]] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let mut next: Vec<usize> = Vec::new();
        for e in lhs.edges() {
            for (a, b) in [(e.0, e.1), (e.1, e.0)] {
                if a.node == v && !lhs.nodes()[b.node].is_boundary() && !seen[b.node] {
                    next.push(b.node);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        for n in next {
            if !seen[n] {
                seen[n] = true;
                queue.push_back(n);
            }
        }
    }
    order
}

struct Search<'a> {
    rule: &'a RewriteRule,
    host: &'a Diagram,
    order: Vec<usize>,
    candidates: Vec<usize>,
    /// lhs internal edges, each listed once, with the position in `order`
    /// at which both ends are mapped.
    lhs_edges: Vec<(usize, End, End)>,
    found: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Search<'_> {
    fn end_fits(&self, l: End, h: End, map: &[usize]) -> bool {
        if map[l.node] != h.node {
            return false;
        }
        match &self.rule.lhs.nodes()[l.node] {
            Node::Generator(_) => l.port == h.port,
            _ => true,
        }
    }

    fn degree_fits(&self, u: usize, h: usize) -> bool {
        let (dl, dh) = (self.rule.lhs.degree(u), self.host.degree(h));
        match &self.rule.lhs.nodes()[u] {
            Node::Spider { .. } if self.rule.leg_polymorphic => dh >= dl,
            _ => dh == dl,
        }
    }

    /// Assign host edges to the lhs internal edges completed at `depth`.
    fn assign_edges(&self, depth: usize, map: &[usize], used: &mut [bool], out: &mut Vec<usize>) -> bool {
        for &(_, a, b) in self.lhs_edges.iter().filter(|(d, _, _)| *d == depth) {
            let hit = self.host.edges().iter().enumerate().find(|(i, e)| {
                !used[*i]
                    && ((self.end_fits(a, e.0, map) && self.end_fits(b, e.1, map))
                        || (self.end_fits(a, e.1, map) && self.end_fits(b, e.0, map)))
            });
            match hit {
                Some((i, _)) => {
                    used[i] = true;
                    out.push(i);
                }
                None => return false,
            }
        }
        true
    }

    fn go(&mut self, depth: usize, map: &mut Vec<usize>, taken: &mut Vec<bool>, used: &mut Vec<bool>, edges: &mut Vec<usize>) {
        if depth == self.order.len() {
            self.found.push((map.clone(), edges.clone()));
            return;
        }
        let u = self.order[depth];
        for ci in 0..self.candidates.len() {
            let h = self.candidates[ci];
            if taken[h]
                || !same_label(&self.rule.lhs.nodes()[u], &self.host.nodes()[h])
                || !self.degree_fits(u, h)
            {
                continue;
            }
            map[u] = h;
            taken[h] = true;
            let mark = edges.len();
            let mut used2 = used.clone();
            if self.assign_edges(depth, map, &mut used2, edges) {
                self.go(depth + 1, map, taken, &mut used2, edges);
            }
            edges.truncate(mark);
            taken[h] = false;
            map[u] = usize::MAX;
        }
    }
}

/// All embeddings of `rule.lhs` into `d`, ordered by the canonical ranks of
/// the matched nodes.
pub fn find_matches(rule: &RewriteRule, d: &Diagram) -> Vec<Match> {
    let lhs = &rule.lhs;
    if d.internal_nodes().next().is_none() {
        return Vec::new();
    }
    let (_, labeling) = d.canonical_labeling();
    let order = search_order(lhs);
    let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let lhs_edges = lhs
        .edges()
        .iter()
        .filter(|e| pos.contains_key(&e.0.node) && pos.contains_key(&e.1.node))
        .map(|e| (pos[&e.0.node].max(pos[&e.1.node]), e.0, e.1))
        .collect();
    let mut candidates: Vec<usize> = d.internal_nodes().map(|(i, _)| i).collect();
    candidates.sort_by_key(|&v| labeling.rank[v]);
    let mut s = Search {
        rule,
        host: d,
        order,
        candidates,
        lhs_edges,
        found: Vec::new(),
    };
    let mut map = vec![usize::MAX; lhs.node_count()];
    let mut taken = vec![false; d.node_count()];
    let mut used = vec![false; d.edge_count()];
    s.go(0, &mut map, &mut taken, &mut used, &mut Vec::new());

    let fp = fingerprint(d);
    let mut out: Vec<Match> = Vec::new();
    for (map, edges) in s.found {
        let Some(legs) = boundary_legs(rule, d, &map, &edges) else {
            continue;
        };
        let nodes: Vec<(usize, usize)> = s.order.iter().map(|&u| (u, map[u])).collect();
        let key = nodes.iter().map(|&(_, h)| labeling.rank[h]).collect();
        out.push(Match {
            nodes,
            key,
            edges,
            legs,
            fingerprint: fp.clone(),
        });
    }
    out.sort_by(|a, b| {
        let sa = sorted(&a.key);
        let sb = sorted(&b.key);
        sa.cmp(&sb).then_with(|| a.key.cmp(&b.key))
    });
    out.dedup_by(|a, b| a.key == b.key);
    out
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

fn boundary_legs(
    rule: &RewriteRule,
    d: &Diagram,
    map: &[usize],
    edges: &[usize],
) -> Option<BTreeMap<usize, (usize, usize)>> {
    let lhs = &rule.lhs;
    let mut used_edge = vec![false; d.edge_count()];
    for &e in edges {
        used_edge[e] = true;
    }
    let mut used_end = std::collections::BTreeSet::new();
    let mut legs = BTreeMap::new();
    let boundary: Vec<usize> = lhs.inputs().iter().chain(lhs.outputs()).copied().collect();
    for b in boundary {
        let (ei, side) = lhs.ends_at(b)[0];
        let inner = lhs.edges()[ei].end(1 - side);
        let h = map[inner.node];
        let is_gen = matches!(lhs.nodes()[inner.node], Node::Generator(_));
        let pick = d.ends_at(h).into_iter().find(|&(e, s)| {
            !used_edge[e] && !used_end.contains(&(e, s)) && (!is_gen || d.edges()[e].end(s).port == inner.port)
        })?;
        used_end.insert(pick);
        legs.insert(b, pick);
    }
    Some(legs)
}

/// Replace the matched subgraph of `d` by the rule's rhs.
pub fn apply(rule: &RewriteRule, d: &Diagram, m: &Match) -> Result<Diagram, RewriteError> {
    if fingerprint(d) != m.fingerprint {
        return Err(RewriteError::StaleMatch(rule.name.clone()));
    }
    let matched: BTreeMap<usize, usize> = m.nodes.iter().map(|&(u, h)| (h, u)).collect();
    let mut internal = vec![false; d.edge_count()];
    for &e in &m.edges {
        internal[e] = true;
    }
    let mut b = Builder::new();
    let mut id = vec![usize::MAX; d.node_count()];
    for (i, n) in d.nodes().iter().enumerate() {
        if !matched.contains_key(&i) {
            id[i] = b.add(n.clone());
        }
    }
    let off = b.absorb(&rule.rhs);
    for &r in rule.rhs.inputs().iter().chain(rule.rhs.outputs()) {
        b.make_connector(off + r);
    }
    // host end → replacement end
    let mut replace: BTreeMap<(usize, usize), End> = BTreeMap::new();
    for (&lb, &end) in &m.legs {
        let (role, p) = rule.lhs.boundary_position(lb).expect("boundary node");
        let rb = match role {
            Role::Input => rule.rhs.inputs()[rule.boundary_map.inputs[p]],
            Role::Output => rule.rhs.outputs()[rule.boundary_map.outputs[p]],
        };
        let ty = rule.lhs.nodes()[lb].port_type(0).clone();
        let c = b.add_connector(ty);
        b.connect(End::new(c, 1), End::new(off + rb, 0));
        replace.insert(end, End::new(c, 0));
    }
    let mut fresh = 1usize << 20;
    for (&h, &u) in &matched {
        for end in d.ends_at(h) {
            if internal[end.0] || replace.contains_key(&end) {
                continue;
            }
            let target = rule
                .leg_targets
                .get(&u)
                .ok_or_else(|| RewriteError::StaleMatch(rule.name.clone()))?;
            replace.insert(end, End::new(off + target, fresh));
            fresh += 1;
        }
    }
    for (i, e) in d.edges().iter().enumerate() {
        if internal[i] {
            continue;
        }
        let map_end = |side: usize| -> End {
            replace
                .get(&(i, side))
                .copied()
                .unwrap_or_else(|| {
                    let x = e.end(side);
                    End::new(id[x.node], x.port)
                })
        };
        b.connect(map_end(0), map_end(1));
    }
    for t in d.circles() {
        b.add_circle(t.clone());
    }
    let inputs = d.inputs().iter().map(|&i| id[i]).collect();
    let outputs = d.outputs().iter().map(|&o| id[o]).collect();
    Ok(b.finish(inputs, outputs))
}
