use std::collections::BTreeMap;

use super::{RewriteError, RewriteRule, RuleKind, Soundness};
use crate::diagram::{Color, Diagram, Signature, WireType};

fn spider_ids(d: &Diagram) -> Vec<usize> {
    d.internal_nodes()
        .filter(|(_, n)| n.is_spider())
        .map(|(i, _)| i)
        .collect()
}

fn rule(
    name: String,
    kind: RuleKind,
    lhs: Diagram,
    rhs: Diagram,
    soundness: Soundness,
) -> Result<RewriteRule, RewriteError> {
    Ok(RewriteRule::new(&name, lhs, rhs, soundness)?.with_kind(kind))
}

/// `spider(c,T,1,1) ⇒ id[T]`
pub fn spider_identity(c: Color, t: &WireType) -> Result<RewriteRule, RewriteError> {
    rule(
        format!("spider_identity[{c}:{t}]"),
        RuleKind::SpiderIdentity,
        Diagram::spider(c, t, 1, 1),
        Diagram::identity(std::slice::from_ref(t)),
        Soundness::Exact,
    )
}

/// A self-loop on a spider is deleted.
pub fn spider_loop(c: Color, t: &WireType) -> Result<RewriteRule, RewriteError> {
    let lhs = Diagram::spider(c, t, 0, 2).compose_seq(&Diagram::cap(t))?;
    let rhs = Diagram::spider(c, t, 0, 0);
    let targets = BTreeMap::from([(spider_ids(&lhs)[0], spider_ids(&rhs)[0])]);
    rule(
        format!("spider_loop[{c}:{t}]"),
        RuleKind::SpiderLoop,
        lhs,
        rhs,
        Soundness::Exact,
    )?
    .polymorphic(targets)
}

/// A spider with no legs is the closed loop: both are `dim T`.
pub fn spider_scalar(c: Color, t: &WireType) -> Result<RewriteRule, RewriteError> {
    rule(
        format!("spider_scalar[{c}:{t}]"),
        RuleKind::SpiderScalar,
        Diagram::spider(c, t, 0, 0),
        Diagram::cup(t).compose_seq(&Diagram::cap(t))?,
        Soundness::Exact,
    )
}

/// Two same-coloured spiders sharing a leg become one.
pub fn spider_fuse(c: Color, t: &WireType) -> Result<RewriteRule, RewriteError> {
    let lhs = Diagram::spider(c, t, 0, 1).compose_seq(&Diagram::spider(c, t, 1, 0))?;
    let rhs = Diagram::spider(c, t, 0, 0);
    let target = spider_ids(&rhs)[0];
    let targets = spider_ids(&lhs).into_iter().map(|s| (s, target)).collect();
    rule(
        format!("spider_fuse[{c}:{t}]"),
        RuleKind::SpiderFuse,
        lhs,
        rhs,
        Soundness::Exact,
    )?
    .polymorphic(targets)
}

/// A light and a dark spider joined by two parallel wires lose both wires.
pub fn complementarity_hopf(t: &WireType) -> Result<RewriteRule, RewriteError> {
    let light = Diagram::spider(Color::Light, t, 0, 2);
    let dark = Diagram::spider(Color::Dark, t, 2, 0);
    let lhs = light.compose_seq(&dark)?;
    let rhs = Diagram::spider(Color::Light, t, 0, 0).compose_par(&Diagram::spider(Color::Dark, t, 0, 0));
    let by_color = |d: &Diagram, c: Color| {
        d.internal_nodes()
            .find(|(_, n)| matches!(n, crate::diagram::Node::Spider { color, .. } if *color == c))
            .map(|(i, _)| i)
            .expect("spider present")
    };
    let targets = [Color::Light, Color::Dark]
        .into_iter()
        .map(|c| (by_color(&lhs, c), by_color(&rhs, c)))
        .collect();
    rule(
        format!("complementarity_hopf[{t}]"),
        RuleKind::ComplementarityHopf,
        lhs,
        rhs,
        Soundness::UpToScalar,
    )?
    .polymorphic(targets)
}

/// `f ; f† ⇒ id` and `f† ; f ⇒ id` for a generator declared unitary.
pub fn unitarity(sig: &Signature, name: &str) -> Result<Vec<RewriteRule>, RewriteError> {
    let decl = sig
        .get(name)
        .ok_or_else(|| RewriteError::InvalidRule(name.into(), "unknown generator".into()))?;
    let partner = decl.partner();
    let f = sig.generator(name)?;
    let g = sig.generator(&partner)?;
    let mut pairs = vec![(name.to_string(), partner.clone(), &f, &g)];
    if partner != name {
        pairs.push((partner.clone(), name.to_string(), &g, &f));
    }
    let mut out = Vec::new();
    for (a, b, first, second) in pairs {
        let lhs = first.compose_seq(second)?;
        let rhs = Diagram::identity(&first.input_types());
        out.push(rule(
            format!("unitarity[{a};{b}]"),
            RuleKind::Unitarity,
            lhs,
            rhs,
            Soundness::Exact,
        )?);
    }
    Ok(out)
}

/// The shipped rules for every type and unitary of `sig`.
pub fn builtin_rules(sig: &Signature) -> Result<Vec<RewriteRule>, RewriteError> {
    let mut rules = Vec::new();
    for t in sig.types() {
        for c in [Color::Light, Color::Dark] {
            rules.push(spider_identity(c, t)?);
            rules.push(spider_loop(c, t)?);
            rules.push(spider_scalar(c, t)?);
            rules.push(spider_fuse(c, t)?);
        }
        rules.push(complementarity_hopf(t)?);
    }
    for g in sig.unitaries() {
        // boxes without inputs or outputs give disconnected patterns
        if g.inputs.is_empty() || g.outputs.is_empty() {
            continue;
        }
        rules.extend(unitarity(sig, &g.name)?);
    }
    Ok(rules)
}
