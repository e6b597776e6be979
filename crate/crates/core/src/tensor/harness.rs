use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{equal_tensors, interpret, CompareMode, Model, Semiring, DEFAULT_TOL};
use crate::diagram::{Diagram, Edge, End, Node};
use crate::rewrite::{apply, find_matches, RewriteRule, Ruleset, Soundness};

/// Most legs any spider gets in a random instance.
const MAX_LEGS: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessFailure {
    pub rule: String,
    pub case: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessReport {
    pub semiring: String,
    pub rules_checked: Vec<String>,
    /// Rules using something the model does not assign.
    pub rules_skipped: Vec<String>,
    pub cases_run: usize,
    pub failures: Vec<HarnessFailure>,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn stable_hash(s: &str) -> u64 {
    // FNV-1a
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

/// Check every rule against the model: for each case, build an instance of
/// the lhs (with random extra legs, parallel wires and loops on the spiders
/// of leg-polymorphic rules), rewrite it once, and compare the two tensors
/// exactly or up to scalar as the rule declares.
pub fn soundness_harness<S: Semiring>(
    rules: &Ruleset,
    m: &Model<S>,
    cases: usize,
    seed: u64,
) -> HarnessReport {
    let mut checked = Vec::new();
    let mut skipped = Vec::new();
    let mut jobs = Vec::new();
    for r in rules.rules() {
        if m.covers(&r.lhs).is_err() || m.covers(&r.rhs).is_err() {
            skipped.push(r.name.clone());
            continue;
        }
        checked.push(r.name.clone());
        let n = if r.leg_polymorphic { cases } else { cases.min(1) };
        jobs.extend((0..n).map(|c| (r, c)));
    }
    let mut failures: Vec<HarnessFailure> = jobs
        .par_iter()
        .filter_map(|&(r, case)| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ stable_hash(&r.name) ^ (case as u64).rotate_left(32));
            check_case(r, m, case, &mut rng).err()
        })
        .collect();
    failures.sort_by(|a, b| (&a.rule, a.case).cmp(&(&b.rule, b.case)));
    HarnessReport {
        semiring: S::NAME.to_string(),
        rules_checked: checked,
        rules_skipped: skipped,
        cases_run: jobs.len(),
        failures,
    }
}

fn check_case<S: Semiring>(
    r: &RewriteRule,
    m: &Model<S>,
    case: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), HarnessFailure> {
    let fail = |detail: String| HarnessFailure {
        rule: r.name.clone(),
        case,
        detail,
    };
    let instance = if r.leg_polymorphic {
        random_instance(&r.lhs, rng)
    } else {
        r.lhs.clone()
    };
    let matches = find_matches(r, &instance);
    let Some(first) = matches.first() else {
        return Err(fail("rule does not match its own instance".into()));
    };
    let rewritten = apply(r, &instance, first).map_err(|e| fail(e.to_string()))?;
    let a = interpret(&instance, m).map_err(|e| fail(e.to_string()))?;
    let b = interpret(&rewritten, m).map_err(|e| fail(e.to_string()))?;
    let mode = match r.soundness {
        Soundness::Exact => CompareMode::Exact,
        Soundness::UpToScalar => CompareMode::UpToScalar,
    };
    let cmp = equal_tensors(&a, &b, mode, DEFAULT_TOL).map_err(|e| fail(e.to_string()))?;
    if cmp.equal {
        Ok(())
    } else {
        Err(fail(format!(
            "tensors differ ({mode:?}), deviation {:.3e}",
            cmp.deviation
        )))
    }
}

/// The lhs with extra boundary legs, parallel wires between its spiders and
/// self-loops, keeping every spider at no more than `MAX_LEGS` legs.
pub(crate) fn random_instance(lhs: &Diagram, rng: &mut impl Rng) -> Diagram {
    let mut nodes = lhs.nodes().to_vec();
    let mut edges: Vec<Edge> = lhs.edges().to_vec();
    let mut inputs = lhs.inputs().to_vec();
    let mut outputs = lhs.outputs().to_vec();
    let spiders: Vec<usize> = lhs
        .internal_nodes()
        .filter(|(_, n)| n.is_spider())
        .map(|(i, _)| i)
        .collect();
    let mut legs: Vec<usize> = (0..nodes.len()).map(|v| lhs.degree(v)).collect();
    let mut next_port: Vec<usize> = legs.iter().map(|&d| d + 100).collect();
    let port = |v: usize, next_port: &mut Vec<usize>| {
        next_port[v] += 1;
        next_port[v]
    };
    let ops = rng.gen_range(0..=2 * MAX_LEGS);
    for _ in 0..ops {
        let u = spiders[rng.gen_range(0..spiders.len())];
        let ty = nodes[u].port_type(0).clone();
        match rng.gen_range(0..4) {
            0 | 1 if legs[u] < MAX_LEGS => {
                let b = nodes.len();
                nodes.push(Node::Boundary { ty });
                legs.push(1);
                next_port.push(0);
                let p = port(u, &mut next_port);
                edges.push(Edge(End::new(u, p), End::new(b, 0)));
                legs[u] += 1;
                if rng.gen_bool(0.5) {
                    inputs.push(b);
                } else {
                    outputs.push(b);
                }
            }
            2 if legs[u] + 2 <= MAX_LEGS => {
                let (p, q) = (port(u, &mut next_port), port(u, &mut next_port));
                edges.push(Edge(End::new(u, p), End::new(u, q)));
                legs[u] += 2;
            }
            3 => {
                let v = spiders[rng.gen_range(0..spiders.len())];
                let same_type = nodes[v].port_type(0) == &ty;
                if v != u && same_type && legs[u] < MAX_LEGS && legs[v] < MAX_LEGS {
                    let (p, q) = (port(u, &mut next_port), port(v, &mut next_port));
                    edges.push(Edge(End::new(u, p), End::new(v, q)));
                    legs[u] += 1;
                    legs[v] += 1;
                }
            }
            _ => {}
        }
    }
    Diagram::from_parts(nodes, edges, inputs, outputs, lhs.circles().to_vec())
        .expect("extra legs keep the instance well formed")
}
