//! Models, rules and a lexicon bundled with the library.

use crate::diagram::Signature;
use crate::distsem::{DistsemError, Lexicon};
use crate::rewrite::{parse_rules, RewriteError, Ruleset};
use crate::tensor::{AnyModel, TensorError};

pub const QUBIT: &str = include_str!("../data/qubit.json");
pub const QUTRIT: &str = include_str!("../data/qutrit.json");
pub const RELATIONS: &str = include_str!("../data/relations.json");
pub const STOCHASTIC: &str = include_str!("../data/stochastic.json");
pub const LEXICON: &str = include_str!("../data/lexicon.json");
pub const QUBIT_RULES: &str = include_str!("../data/qubit_rules.json");

/// Every shipped model by name.
pub const MODELS: [(&str, &str); 4] = [
    ("qubit", QUBIT),
    ("qutrit", QUTRIT),
    ("relations", RELATIONS),
    ("stochastic", STOCHASTIC),
];

pub fn model(name: &str) -> Result<AnyModel, TensorError> {
    let text = MODELS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| TensorError::Missing(format!("shipped model `{name}`")))?
        .1;
    AnyModel::from_json_str(text)
}

pub fn lexicon() -> Result<Lexicon, DistsemError> {
    Lexicon::from_json_str(LEXICON)
}

/// Built-in rules for `sig`, plus the shipped user rules whose generators
/// `sig` declares identically.
pub fn ruleset(sig: &Signature) -> Result<Ruleset, RewriteError> {
    let mut rules = Ruleset::builtin(sig)?;
    let mut merged = sig.clone();
    if let Ok(user) = parse_rules(QUBIT_RULES, &mut merged) {
        if merged == *sig {
            rules.extend(user);
        }
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn everything_loads() {
        for (name, _) in MODELS {
            model(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        let lex = lexicon().unwrap();
        assert!(lex.entries.contains_key("not"));
        let q = model("qubit").unwrap();
        let rs = ruleset(q.signature()).unwrap();
        assert!(rs.get("s_squared").is_some());
        let t = model("qutrit").unwrap();
        assert!(ruleset(t.signature()).unwrap().get("s_squared").is_none());
    }
}
