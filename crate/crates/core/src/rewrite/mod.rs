//! Rule-based rewriting of diagrams with replayable traces.
//!
//! Rules are tried in a fixed priority order (see [`RuleKind`]) and matches
//! in order of the canonical ranks of the nodes they touch, so normalizing
//! the same diagram always produces the same trace.

mod builtin;
mod file;
mod matching;
mod rule;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, DiagramJson, Signature};

pub use builtin::{
    builtin_rules, complementarity_hopf, spider_fuse, spider_identity, spider_loop, spider_scalar,
    unitarity,
};
pub use file::{parse_rules, RuleJson};
pub use matching::{apply, find_matches, Match};
pub use rule::{BoundaryMap, RewriteRule, RuleKind, Soundness};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("match for rule `{0}` does not belong to this diagram")]
    StaleMatch(String),
    #[error("rule `{0}` is invalid: {1}")]
    InvalidRule(String, String),
    #[error("no rule named `{0}`")]
    UnknownRule(String),
    #[error("replay diverged at step {step}: {why}")]
    Replay { step: usize, why: String },
    #[error("boundary mismatch: {0}")]
    Boundary(DiagramError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("cannot read rules: {0}")]
    Json(String),
}

/// Rules kept sorted by priority.
#[derive(Clone, Debug, Default)]
pub struct Ruleset {
    rules: Vec<RewriteRule>,
}

impl Ruleset {
    pub fn new(rules: Vec<RewriteRule>) -> Self {
        let mut r = Ruleset { rules };
        r.rules.sort_by_key(|r| r.kind);
        r
    }

    /// The shipped rules for `sig`.
    pub fn builtin(sig: &Signature) -> Result<Self, RewriteError> {
        Ok(Ruleset::new(builtin_rules(sig)?))
    }

    /// Add rules; user rules go after every built-in rule.
    pub fn extend(&mut self, more: Vec<RewriteRule>) {
        self.rules.extend(more);
        self.rules.sort_by_key(|r| r.kind);
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn get(&self, name: &str) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    /// Canonical ranks, in the diagram before the step, of the matched nodes.
    pub matched: Vec<usize>,
    /// Canonical hash of the diagram after the step.
    pub hash: String,
    pub soundness: Soundness,
}

/// Record of a normalization.
#[derive(Clone, Debug)]
pub struct RewriteTrace {
    pub initial: Diagram,
    pub initial_hash: String,
    pub steps: Vec<TraceStep>,
    pub final_diagram: Diagram,
    pub final_hash: String,
    /// The step budget ran out before no rule matched.
    pub exhausted: bool,
    /// One marker per up-to-scalar step: the discarded scalar, symbolically.
    pub scalars: Vec<String>,
    pub notes: Vec<String>,
}

impl RewriteTrace {
    pub fn up_to_scalar(&self) -> bool {
        !self.scalars.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "initial": DiagramJson::from_diagram(&self.initial, None),
            "initial_hash": self.initial_hash,
            "steps": self.steps,
            "final": DiagramJson::from_diagram(&self.final_diagram, None),
            "final_hash": self.final_hash,
            "exhausted": self.exhausted,
            "scalars": self.scalars,
            "notes": self.notes,
        })
    }
}

/// Normalize with the default choice: the highest-priority rule that
/// matches, at its first match.
pub fn normalize(d: &Diagram, rules: &Ruleset, max_steps: usize) -> (Diagram, RewriteTrace) {
    run(d, rules, max_steps, None)
}

/// Normalize choosing among *all* current matches of all rules with
/// `pick(n)`, which must return an index below `n`. Used to test that the
/// result does not depend on the order in which rules fire.
pub fn normalize_by(
    d: &Diagram,
    rules: &Ruleset,
    max_steps: usize,
    pick: &mut dyn FnMut(usize) -> usize,
) -> (Diagram, RewriteTrace) {
    run(d, rules, max_steps, Some(pick))
}

fn run(
    d: &Diagram,
    rules: &Ruleset,
    max_steps: usize,
    mut pick: Option<&mut dyn FnMut(usize) -> usize>,
) -> (Diagram, RewriteTrace) {
    let mut cur = d.clone();
    let mut steps = Vec::new();
    let mut scalars = Vec::new();
    let mut notes = Vec::new();
    if d.splices() > 0 {
        notes.push(format!(
            "boundary normalization spliced {} connector(s) while building",
            d.splices()
        ));
    }
    let mut exhausted = false;
    loop {
        let mut options: Vec<(&RewriteRule, Match)> = Vec::new();
        for r in rules.rules() {
            let ms = find_matches(r, &cur);
            let found = !ms.is_empty();
            options.extend(ms.into_iter().map(|m| (r, m)));
            if found && pick.is_none() {
                break;
            }
        }
        if options.is_empty() {
            break;
        }
        if steps.len() == max_steps {
            exhausted = true;
            break;
        }
        let i = match pick.as_mut() {
            Some(p) => p(options.len()).min(options.len() - 1),
            None => 0,
        };
        let (r, m) = &options[i];
        let next = apply(r, &cur, m).expect("fresh match applies");
        if r.kind.is_builtin() {
            let before = (cur.node_count(), cur.edge_count());
            let after = (next.node_count(), next.edge_count());
            assert!(
                after < before,
                "rule `{}` did not shrink the diagram: {before:?} -> {after:?}",
                r.name
            );
        }
        if r.soundness == Soundness::UpToScalar {
            scalars.push(format!("scalar({})", r.name));
        }
        steps.push(TraceStep {
            rule: r.name.clone(),
            matched: m.key.clone(),
            hash: next.canonical_form().hash(),
            soundness: r.soundness,
        });
        cur = next;
    }
    let trace = RewriteTrace {
        initial: d.clone(),
        initial_hash: d.canonical_form().hash(),
        steps,
        final_hash: cur.canonical_form().hash(),
        final_diagram: cur.clone(),
        exhausted,
        scalars,
        notes,
    };
    (cur, trace)
}

/// Re-run a trace's steps from its initial diagram, checking every hash.
pub fn replay(trace: &RewriteTrace, rules: &Ruleset) -> Result<Diagram, RewriteError> {
    let mut cur = trace.initial.clone();
    if cur.canonical_form().hash() != trace.initial_hash {
        return Err(RewriteError::Replay {
            step: 0,
            why: "initial diagram does not match its hash".into(),
        });
    }
    for (i, s) in trace.steps.iter().enumerate() {
        let r = rules
            .get(&s.rule)
            .ok_or_else(|| RewriteError::UnknownRule(s.rule.clone()))?;
        let m = find_matches(r, &cur)
            .into_iter()
            .find(|m| m.key == s.matched)
            .ok_or_else(|| RewriteError::Replay {
                step: i,
                why: format!("rule `{}` no longer matches at {:?}", s.rule, s.matched),
            })?;
        cur = apply(r, &cur, &m)?;
        let h = cur.canonical_form().hash();
        if h != s.hash {
            return Err(RewriteError::Replay {
                step: i,
                why: format!("expected hash {}, got {h}", s.hash),
            });
        }
    }
    if cur.canonical_form().hash() != trace.final_hash {
        return Err(RewriteError::Replay {
            step: trace.steps.len(),
            why: "final diagram differs".into(),
        });
    }
    Ok(cur)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EqualExact,
    EqualUpToScalar,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::EqualExact => "equal-exact",
            Verdict::EqualUpToScalar => "equal-up-to-scalar",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Outcome of [`check_equal_by_rewriting`], with both traces.
#[derive(Clone, Debug)]
pub struct EqualityCheck {
    pub verdict: Verdict,
    pub left: RewriteTrace,
    pub right: RewriteTrace,
}

/// Normalize both sides and compare. Normal forms that agree once closed
/// components are dropped count as equal up to scalar.
pub fn check_equal_by_rewriting(
    a: &Diagram,
    b: &Diagram,
    rules: &Ruleset,
    budget: usize,
) -> Result<EqualityCheck, RewriteError> {
    crate::diagram::check_boundary(&a.input_types(), &b.input_types())
        .and_then(|_| crate::diagram::check_boundary(&a.output_types(), &b.output_types()))
        .map_err(RewriteError::Boundary)?;
    let (na, left) = normalize(a, rules, budget);
    let (nb, right) = normalize(b, rules, budget);
    let verdict = if na.canonical_equal(&nb) {
        if left.up_to_scalar() || right.up_to_scalar() {
            Verdict::EqualUpToScalar
        } else {
            Verdict::EqualExact
        }
    } else if na.without_scalars().canonical_equal(&nb.without_scalars()) {
        Verdict::EqualUpToScalar
    } else {
        Verdict::Unknown
    };
    Ok(EqualityCheck {
        verdict,
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Color, GeneratorDecl, WireType};

    fn q() -> WireType {
        WireType::new("Q")
    }

    fn sig() -> Signature {
        let mut s = Signature::with_types(&["Q"]);
        s.add_generator(GeneratorDecl::new("f", &["Q"], &["Q"]).unitary())
            .unwrap();
        s.add_generator(GeneratorDecl::new("g", &["Q"], &["Q"])).unwrap();
        s
    }

    fn spider(n: usize, m: usize) -> Diagram {
        Diagram::spider(Color::Light, &q(), n, m)
    }

    #[test]
    fn fusion_needs_a_shared_leg() {
        let fuse = spider_fuse(Color::Light, &q()).unwrap();
        let joined = spider(1, 1).compose_seq(&spider(1, 1)).unwrap();
        assert!(!find_matches(&fuse, &joined).is_empty());
        let apart = spider(1, 1).compose_par(&spider(1, 1));
        assert!(find_matches(&fuse, &apart).is_empty());
        assert!(find_matches(&fuse, &Diagram::empty()).is_empty());
    }

    #[test]
    fn cup_spider_fuses_with_cap_spider() {
        // spider(0,2) sharing one leg with spider(2,0)
        let d = Diagram::identity(&[q()])
            .compose_par(&spider(0, 2))
            .compose_seq(&spider(2, 0).compose_par(&Diagram::identity(&[q()])))
            .unwrap();
        let fuse = spider_fuse(Color::Light, &q()).unwrap();
        let m = &find_matches(&fuse, &d)[0];
        let out = apply(&fuse, &d, m).unwrap();
        assert!(out.canonical_equal(&spider(1, 1)));
    }

    #[test]
    fn stale_matches_are_refused() {
        let fuse = spider_fuse(Color::Light, &q()).unwrap();
        let d = spider(1, 1).compose_seq(&spider(1, 1)).unwrap();
        let m = find_matches(&fuse, &d).remove(0);
        let other = spider(1, 2).compose_seq(&spider(2, 1)).unwrap();
        assert!(matches!(
            apply(&fuse, &other, &m),
            Err(RewriteError::StaleMatch(_))
        ));
    }

    #[test]
    fn unitarity_cancels() {
        let s = sig();
        let rules = Ruleset::builtin(&s).unwrap();
        let f = s.generator("f").unwrap();
        let d = f.compose_seq(&f.dagger()).unwrap();
        let (n, t) = normalize(&d, &rules, 10);
        assert!(n.canonical_equal(&Diagram::identity(&[q()])));
        assert_eq!(t.steps.len(), 1);
        assert!(replay(&t, &rules).unwrap().canonical_equal(&n));
    }

    #[test]
    fn snake_takes_no_steps() {
        let snake = Diagram::identity(&[q()])
            .compose_par(&Diagram::cup(&q()))
            .compose_seq(&Diagram::cap(&q()).compose_par(&Diagram::identity(&[q()])))
            .unwrap();
        let (n, t) = normalize(&snake, &Ruleset::builtin(&sig()).unwrap(), 10);
        assert!(t.steps.is_empty());
        assert!(!t.notes.is_empty());
        assert!(n.canonical_equal(&Diagram::identity(&[q()])));
    }

    #[test]
    fn loop_on_single_wire_spider_becomes_circle() {
        // the trace of a one-in one-out spider
        let closed = Diagram::cup(&q())
            .compose_seq(&spider(1, 1).compose_par(&Diagram::identity(&[q()])))
            .and_then(|x| x.compose_seq(&Diagram::cap(&q())))
            .unwrap();
        let (n, _) = normalize(&closed, &Ruleset::builtin(&sig()).unwrap(), 10);
        assert_eq!(n.node_count(), 0);
        assert_eq!(n.circles().len(), 1);
    }

    #[test]
    fn legless_spider_becomes_circle() {
        let (n, t) = normalize(&spider(0, 0), &Ruleset::builtin(&sig()).unwrap(), 10);
        assert_eq!(t.steps.len(), 1);
        assert_eq!(n.node_count(), 0);
        assert_eq!(n.circles().len(), 1);
    }

    #[test]
    fn unrelated_generators_are_unknown() {
        let s = sig();
        let rules = Ruleset::builtin(&s).unwrap();
        let r = check_equal_by_rewriting(
            &s.generator("f").unwrap(),
            &s.generator("g").unwrap(),
            &rules,
            10,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Unknown);
        let bad = check_equal_by_rewriting(&s.generator("f").unwrap(), &Diagram::cup(&q()), &rules, 10);
        assert!(matches!(bad, Err(RewriteError::Boundary(_))));
    }

    #[test]
    fn hopf_is_up_to_scalar() {
        let s = sig();
        let rules = Ruleset::builtin(&s).unwrap();
        let d = Diagram::spider(Color::Light, &q(), 1, 2)
            .compose_seq(&Diagram::spider(Color::Dark, &q(), 2, 1))
            .unwrap();
        let r = check_equal_by_rewriting(
            &d,
            &Diagram::spider(Color::Light, &q(), 1, 0)
                .compose_seq(&Diagram::spider(Color::Dark, &q(), 0, 1))
                .unwrap(),
            &rules,
            10,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::EqualUpToScalar);
        assert_eq!(r.left.scalars.len(), 1);
    }

    #[test]
    fn invalid_rules_are_rejected() {
        let disconnected = spider(1, 1).compose_par(&spider(1, 1));
        let rhs = Diagram::identity(&[q(), q()]);
        assert!(RewriteRule::new("bad", disconnected, rhs, Soundness::Exact).is_err());
        let wire = Diagram::identity(&[q()]);
        assert!(RewriteRule::new("bare", wire.clone(), wire, Soundness::Exact).is_err());
    }
}
