use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BoundaryMap, RewriteError, RewriteRule, Soundness};
use crate::diagram::{DiagramJson, Signature};

/// One entry of a ruleset file. Node ids in `leg_targets` refer to the
/// `nodes` arrays of `lhs` and `rhs`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleJson {
    pub name: String,
    pub lhs: DiagramJson,
    pub rhs: DiagramJson,
    #[serde(default)]
    pub leg_polymorphic: bool,
    #[serde(default = "exact")]
    pub soundness: Soundness,
    #[serde(default)]
    pub leg_targets: Vec<[usize; 2]>,
    #[serde(default)]
    pub boundary_map: Option<BoundaryMap>,
}

fn exact() -> Soundness {
    Soundness::Exact
}

/// Parse a ruleset file: a JSON list of rules. Types and generators the
/// rules declare are merged into `sig`.
pub fn parse_rules(text: &str, sig: &mut Signature) -> Result<Vec<RewriteRule>, RewriteError> {
    let entries: Vec<RuleJson> =
        serde_json::from_str(text).map_err(|e| RewriteError::Json(e.to_string()))?;
    let mut out = Vec::new();
    for j in entries {
        sig.merge(&j.lhs.signature()?)?;
        sig.merge(&j.rhs.signature()?)?;
        let lhs = j.lhs.to_diagram(sig)?;
        let rhs = j.rhs.to_diagram(sig)?;
        let mut r = RewriteRule::new(&j.name, lhs, rhs, j.soundness)?;
        if let Some(map) = j.boundary_map {
            r = r.with_boundary_map(map)?;
        }
        if j.leg_polymorphic {
            let targets: BTreeMap<usize, usize> =
                j.leg_targets.iter().map(|[a, b]| (*a, *b)).collect();
            r = r.polymorphic(targets)?;
        }
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Diagram, GeneratorDecl};
    use crate::rewrite::{normalize, Ruleset};

    #[test]
    fn user_rule_from_json() {
        let mut sig = Signature::with_types(&["Q"]);
        sig.add_generator(GeneratorDecl::new("g", &["Q"], &["Q"])).unwrap();
        let g = sig.generator("g").unwrap();
        let lhs = g.compose_seq(&g).unwrap();
        let rhs = Diagram::identity(&["Q".into()]);
        let text = serde_json::to_string(&vec![RuleJson {
            name: "g_involutive".into(),
            lhs: DiagramJson::from_diagram(&lhs, Some(&sig)),
            rhs: DiagramJson::from_diagram(&rhs, Some(&sig)),
            leg_polymorphic: false,
            soundness: Soundness::Exact,
            leg_targets: vec![],
            boundary_map: None,
        }])
        .unwrap();
        let mut sig2 = Signature::new();
        let rules = parse_rules(&text, &mut sig2).unwrap();
        let rs = Ruleset::new(rules);
        let ggg = lhs.compose_seq(&g).unwrap();
        let (n, t) = normalize(&ggg, &rs, 5);
        assert!(n.canonical_equal(&g));
        assert_eq!(t.steps[0].rule, "g_involutive");
    }

    #[test]
    fn malformed_rules_are_errors() {
        let mut sig = Signature::new();
        assert!(matches!(
            parse_rules("{", &mut sig),
            Err(RewriteError::Json(_))
        ));
    }
}
