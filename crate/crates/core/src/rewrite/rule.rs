use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::RewriteError;
use crate::diagram::{Diagram, Node, WireType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Soundness {
    Exact,
    UpToScalar,
}

/// Built-in rule families, in priority order; user rules come last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    SpiderIdentity,
    SpiderLoop,
    SpiderScalar,
    SpiderFuse,
    Unitarity,
    ComplementarityHopf,
    User,
}

impl RuleKind {
    pub fn is_builtin(self) -> bool {
        self != RuleKind::User
    }
}

/// Correspondence between lhs and rhs boundary positions:
/// lhs input `i` is rhs input `inputs[i]`, likewise for outputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryMap {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl BoundaryMap {
    pub fn identity(n_in: usize, n_out: usize) -> Self {
        BoundaryMap {
            inputs: (0..n_in).collect(),
            outputs: (0..n_out).collect(),
        }
    }
}

/// `lhs ⇒ rhs`.
///
/// A leg-polymorphic rule lets each lhs spider match a host spider with more
/// legs than it has; the surplus legs are moved to the rhs spider named in
/// `leg_targets`.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: String,
    pub kind: RuleKind,
    pub lhs: Diagram,
    pub rhs: Diagram,
    pub boundary_map: BoundaryMap,
    pub soundness: Soundness,
    pub leg_polymorphic: bool,
    /// lhs spider node id → rhs spider node id.
    pub leg_targets: BTreeMap<usize, usize>,
}

impl RewriteRule {
    /// An exact or up-to-scalar user rule with the identity boundary map.
    pub fn new(
        name: &str,
        lhs: Diagram,
        rhs: Diagram,
        soundness: Soundness,
    ) -> Result<Self, RewriteError> {
        let boundary_map = BoundaryMap::identity(lhs.inputs().len(), lhs.outputs().len());
        let r = RewriteRule {
            name: name.to_string(),
            kind: RuleKind::User,
            lhs,
            rhs,
            boundary_map,
            soundness,
            leg_polymorphic: false,
            leg_targets: BTreeMap::new(),
        };
        r.validate()?;
        Ok(r)
    }

    pub(crate) fn with_kind(mut self, kind: RuleKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_boundary_map(mut self, map: BoundaryMap) -> Result<Self, RewriteError> {
        self.boundary_map = map;
        self.validate()?;
        Ok(self)
    }

    /// Make the rule leg-polymorphic. `targets` pairs lhs spiders with rhs
    /// spiders; when empty, spiders are paired by colour and type if that is
    /// unambiguous.
    pub fn polymorphic(mut self, targets: BTreeMap<usize, usize>) -> Result<Self, RewriteError> {
        self.leg_polymorphic = true;
        self.leg_targets = if targets.is_empty() {
            self.default_targets()?
        } else {
            targets
        };
        self.validate()?;
        Ok(self)
    }

    fn default_targets(&self) -> Result<BTreeMap<usize, usize>, RewriteError> {
        let mut out = BTreeMap::new();
        for (u, n) in self.lhs.internal_nodes() {
            if !n.is_spider() {
                continue;
            }
            let same: Vec<usize> = self
                .rhs
                .internal_nodes()
                .filter(|(_, m)| *m == n)
                .map(|(v, _)| v)
                .collect();
            match same.as_slice() {
                [v] => {
                    out.insert(u, *v);
                }
                _ => {
                    return Err(self.invalid(format!(
                        "cannot choose a target for the legs of lhs spider {u}"
                    )))
                }
            }
        }
        Ok(out)
    }

    fn invalid(&self, why: String) -> RewriteError {
        RewriteError::InvalidRule(self.name.clone(), why)
    }

    pub fn validate(&self) -> Result<(), RewriteError> {
        let (l, r) = (&self.lhs, &self.rhs);
        let perm_ok = |p: &[usize], n: usize| {
            let mut s = p.to_vec();
            s.sort_unstable();
            s == (0..n).collect::<Vec<_>>()
        };
        if l.inputs().len() != r.inputs().len() || l.outputs().len() != r.outputs().len() {
            return Err(self.invalid("lhs and rhs have different boundaries".into()));
        }
        if !perm_ok(&self.boundary_map.inputs, l.inputs().len())
            || !perm_ok(&self.boundary_map.outputs, l.outputs().len())
        {
            return Err(self.invalid("boundary map is not a bijection".into()));
        }
        let (li, lo, ri, ro) = (
            l.input_types(),
            l.output_types(),
            r.input_types(),
            r.output_types(),
        );
        let agree = |lt: &[WireType], rt: &[WireType], map: &[usize]| {
            lt.iter().enumerate().all(|(i, t)| &rt[map[i]] == t)
        };
        if !agree(&li, &ri, &self.boundary_map.inputs) || !agree(&lo, &ro, &self.boundary_map.outputs)
        {
            return Err(self.invalid("boundary types disagree".into()));
        }
        let internal: Vec<usize> = l.internal_nodes().map(|(i, _)| i).collect();
        if internal.is_empty() {
            return Err(self.invalid("lhs has no boxes or spiders".into()));
        }
        if !l.circles().is_empty() {
            return Err(self.invalid("lhs contains a closed loop".into()));
        }
        for e in l.edges() {
            if l.nodes()[e.0.node].is_boundary() && l.nodes()[e.1.node].is_boundary() {
                return Err(self.invalid("lhs has a bare wire between boundaries".into()));
            }
        }
        // connected through internal edges
        let mut seen = vec![false; l.node_count()];
        let mut stack = vec![internal[0]];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            for e in l.edges() {
                for (a, b) in [(e.0.node, e.1.node), (e.1.node, e.0.node)] {
                    if a == v && !l.nodes()[b].is_boundary() {
                        stack.push(b);
                    }
                }
            }
        }
        if internal.iter().any(|&v| !seen[v]) {
            return Err(self.invalid("lhs is not connected".into()));
        }
        if self.leg_polymorphic {
            for &u in &internal {
                if let Node::Spider { ty, .. } = &l.nodes()[u] {
                    let Some(&v) = self.leg_targets.get(&u) else {
                        return Err(self.invalid(format!("lhs spider {u} has no leg target")));
                    };
                    match r.nodes().get(v) {
                        Some(Node::Spider { ty: t2, .. }) if t2 == ty => {}
                        _ => {
                            return Err(self.invalid(format!(
                                "leg target {v} is not an rhs spider of type `{ty}`"
                            )))
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
