use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::DistsemError;
use crate::diagram::{Diagram, GeneratorDecl, WireType};
use crate::pregroup::{
    format_type, parse_type, reduce_to, reduction_to_diagram, Convention, Reduction, SimpleType,
};
use crate::tensor::{interpret, Model, TensorValue};

/// Generator name of the negation box on the sentence wire.
pub const NOT_BOX: &str = "not_box";

/// Functional words whose meaning is wiring rather than data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalWord {
    Does,
    Not,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Meaning {
    Tensor(TensorValue<f64>),
    Builtin(FunctionalWord),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LexiconEntry {
    pub word: String,
    pub ty: Vec<SimpleType>,
    pub meaning: Meaning,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lexicon {
    pub convention: Convention,
    /// Dimension of each atomic type.
    pub dims: BTreeMap<String, usize>,
    /// The atom sentences reduce to.
    pub sentence: String,
    /// Matrix of the negation box, outputs first.
    pub not_map: Option<TensorValue<f64>>,
    pub entries: BTreeMap<String, LexiconEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    #[serde(default)]
    convention: Convention,
    dims: BTreeMap<String, usize>,
    #[serde(default = "default_sentence")]
    sentence: String,
    #[serde(default)]
    not: Option<Value>,
    words: BTreeMap<String, EntryFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    #[serde(rename = "type")]
    ty: String,
    #[serde(default)]
    tensor: Option<Value>,
    #[serde(default)]
    builtin: Option<FunctionalWord>,
}

fn default_sentence() -> String {
    "s".into()
}

fn lex_err(m: impl Into<String>) -> DistsemError {
    DistsemError::Lexicon(m.into())
}

/// For `does` and `not`: the type must read `n⁻ s s⁺ n` (orders −1, 0, +1,
/// 0), returning the noun and sentence atoms.
fn functional_atoms(ty: &[SimpleType]) -> Option<(String, String)> {
    match ty {
        [a, b, c, d]
            if a.atom == d.atom
                && b.atom == c.atom
                && (a.z, b.z, c.z, d.z) == (-1, 0, 1, 0) =>
        {
            Some((a.atom.clone(), b.atom.clone()))
        }
        _ => None,
    }
}

impl Lexicon {
    pub fn from_json_str(text: &str) -> Result<Lexicon, DistsemError> {
        let f: LexiconFile = serde_json::from_str(text).map_err(|e| lex_err(e.to_string()))?;
        let not_map = f
            .not
            .as_ref()
            .map(TensorValue::<f64>::from_json)
            .transpose()
            .map_err(|e| lex_err(format!("not: {e}")))?;
        let mut lex = Lexicon {
            convention: f.convention,
            dims: f.dims,
            sentence: f.sentence,
            not_map,
            entries: BTreeMap::new(),
        };
        for (word, e) in f.words {
            let ty = parse_type(&e.ty, lex.convention).map_err(|err| lex_err(format!("{word}: {err}")))?;
            let meaning = match (e.tensor, e.builtin) {
                (Some(t), None) => Meaning::Tensor(
                    TensorValue::from_json(&t).map_err(|err| lex_err(format!("{word}: {err}")))?,
                ),
                (None, Some(b)) => Meaning::Builtin(b),
                _ => return Err(lex_err(format!("{word}: give exactly one of tensor, builtin"))),
            };
            lex.insert(LexiconEntry {
                word: word.clone(),
                ty,
                meaning,
            })?;
        }
        lex.validate()?;
        Ok(lex)
    }

    pub fn insert(&mut self, e: LexiconEntry) -> Result<(), DistsemError> {
        if let Meaning::Tensor(t) = &e.meaning {
            let shape = self.shape(&e.ty)?;
            if t.shape() != shape.as_slice() {
                return Err(lex_err(format!(
                    "{}: type {} needs shape {:?}, got {:?}",
                    e.word,
                    format_type(&e.ty),
                    shape,
                    t.shape()
                )));
            }
        }
        if let Meaning::Builtin(_) = e.meaning {
            if functional_atoms(&e.ty).is_none() {
                return Err(lex_err(format!(
                    "{}: functional words need a type of the form n^r s s^l n, got {}",
                    e.word,
                    format_type(&e.ty)
                )));
            }
        }
        self.entries.insert(e.word.clone(), e);
        Ok(())
    }

    fn validate(&self) -> Result<(), DistsemError> {
        if !self.dims.contains_key(&self.sentence) {
            return Err(lex_err(format!("no dimension for sentence type `{}`", self.sentence)));
        }
        if self.entries.contains_key(NOT_BOX) {
            return Err(lex_err(format!("`{NOT_BOX}` is reserved")));
        }
        for e in self.entries.values() {
            if e.meaning == Meaning::Builtin(FunctionalWord::Not) {
                let (_, s) = functional_atoms(&e.ty).expect("checked on insert");
                let d = self.dim(&s)?;
                match &self.not_map {
                    Some(t) if t.shape() == [d, d] => {}
                    Some(t) => {
                        return Err(lex_err(format!("not map needs shape [{d}, {d}], got {:?}", t.shape())))
                    }
                    None => return Err(lex_err(format!("`{}` needs a not map", e.word))),
                }
            }
        }
        Ok(())
    }

    fn dim(&self, atom: &str) -> Result<usize, DistsemError> {
        self.dims
            .get(atom)
            .copied()
            .ok_or_else(|| lex_err(format!("no dimension for atom `{atom}`")))
    }

    fn shape(&self, ty: &[SimpleType]) -> Result<Vec<usize>, DistsemError> {
        ty.iter().map(|t| self.dim(&t.atom)).collect()
    }

    pub fn entry(&self, word: &str) -> Result<&LexiconEntry, DistsemError> {
        self.entries
            .get(word)
            .ok_or_else(|| DistsemError::UnknownWord(word.to_string()))
    }

    /// Concatenated types of a word sequence.
    pub fn types_of(&self, words: &[String]) -> Result<Vec<SimpleType>, DistsemError> {
        let mut out = Vec::new();
        for w in words {
            out.extend(self.entry(w)?.ty.iter().cloned());
        }
        Ok(out)
    }

    /// Reduce a sentence's types to the sentence atom.
    pub fn parse(&self, words: &[String]) -> Result<Reduction, DistsemError> {
        let ts = self.types_of(words)?;
        reduce_to(&ts, &SimpleType::base(&self.sentence)).ok_or_else(|| {
            DistsemError::Grammar(format!(
                "`{}` with type {} does not reduce to {}",
                words.join(" "),
                format_type(&ts),
                self.sentence
            ))
        })
    }

    /// A tensor model with one state per word and the negation box.
    pub fn model(&self) -> Result<Model<f64>, DistsemError> {
        let mut m = Model::new();
        for (atom, &d) in &self.dims {
            m.add_type(atom, d)?;
        }
        if let Some(t) = &self.not_map {
            let s = self.sentence.as_str();
            m.add_generator(GeneratorDecl::new(NOT_BOX, &[s], &[s]), t.clone())?;
        }
        for e in self.entries.values() {
            if let Meaning::Tensor(t) = &e.meaning {
                m.add_generator(word_decl(e), t.clone())?;
            }
        }
        Ok(m)
    }

    /// The state diagram of one word.
    pub fn word_diagram(&self, word: &str) -> Result<Diagram, DistsemError> {
        let e = self.entry(word)?;
        Ok(match e.meaning {
            Meaning::Tensor(_) => {
                let mut sig = crate::diagram::Signature::new();
                for t in &e.ty {
                    sig.add_type(t.wire());
                }
                sig.add_generator(word_decl(e))?;
                sig.generator(word)?
            }
            Meaning::Builtin(kind) => {
                let (n, s) = functional_atoms(&e.ty).expect("checked on insert");
                functional_word_diagram(kind, &WireType::new(n), &WireType::new(s))?
            }
        })
    }
}

fn word_decl(e: &LexiconEntry) -> GeneratorDecl {
    let outs: Vec<&str> = e.ty.iter().map(|t| t.atom.as_str()).collect();
    GeneratorDecl::new(&e.word, &[], &outs)
}

/// The state of `does` or `not` on outputs `n, s, s, n`: a cup carrying the
/// subject from the first wire to the last, enclosing a cup on the sentence
/// wires with the negation box on its left leg for `not`.
pub fn functional_word_diagram(
    kind: FunctionalWord,
    noun: &WireType,
    sentence: &WireType,
) -> Result<Diagram, DistsemError> {
    let mut inner = Diagram::cup(sentence);
    if kind == FunctionalWord::Not {
        let mut sig = crate::diagram::Signature::new();
        sig.add_type(sentence.clone());
        sig.add_generator(GeneratorDecl::new(
            NOT_BOX,
            &[sentence.name()],
            &[sentence.name()],
        ))?;
        let boxed = sig.generator(NOT_BOX)?.compose_par(&Diagram::identity(std::slice::from_ref(sentence)));
        inner = inner.compose_seq(&boxed)?;
    }
    let id_n = Diagram::identity(std::slice::from_ref(noun));
    let middle = id_n.compose_par(&inner).compose_par(&id_n);
    Ok(Diagram::cup(noun).compose_seq(&middle)?)
}

/// Word states in parallel, followed by the reduction's caps.
pub fn sentence_diagram(
    words: &[String],
    lexicon: &Lexicon,
    reduction: &Reduction,
) -> Result<Diagram, DistsemError> {
    let ts = lexicon.types_of(words)?;
    if ts != reduction.types {
        return Err(DistsemError::Grammar(format!(
            "reduction is for {}, sentence has type {}",
            format_type(&reduction.types),
            format_type(&ts)
        )));
    }
    if reduction.result() != [SimpleType::base(&lexicon.sentence)] {
        return Err(DistsemError::Grammar(format!(
            "reduction leaves {}, not {}",
            format_type(&reduction.result()),
            lexicon.sentence
        )));
    }
    let mut states = Diagram::empty();
    for w in words {
        states = states.compose_par(&lexicon.word_diagram(w)?);
    }
    Ok(states.compose_seq(&reduction_to_diagram(reduction))?)
}

/// The sentence-space vector of a parsed sentence.
pub fn sentence_meaning(
    words: &[String],
    lexicon: &Lexicon,
    reduction: &Reduction,
    model: &Model<f64>,
) -> Result<TensorValue<f64>, DistsemError> {
    let d = sentence_diagram(words, lexicon, reduction)?;
    Ok(interpret(&d, model)?)
}

/// Tokenize, parse and evaluate a sentence with the lexicon's own model.
pub fn evaluate_sentence(
    text: &str,
    lexicon: &Lexicon,
) -> Result<(Reduction, TensorValue<f64>), DistsemError> {
    let words = super::tokenize_line(text);
    let r = lexicon.parse(&words)?;
    let v = sentence_meaning(&words, lexicon, &r, &lexicon.model()?)?;
    Ok((r, v))
}

/// A verb state `Σ subj ⊗ ŝ ⊗ obj` over observed subject/object pairs.
pub fn verb_tensor_from_pairs(
    pairs: &[(Vec<f64>, Vec<f64>)],
    s_hat: &[f64],
) -> Result<TensorValue<f64>, DistsemError> {
    let Some((s0, o0)) = pairs.first() else {
        return Err(lex_err("no subject/object pairs"));
    };
    let (n, m) = (s0.len(), o0.len());
    if pairs.iter().any(|(s, o)| s.len() != n || o.len() != m) {
        return Err(DistsemError::Dimension(n, m));
    }
    Ok(TensorValue::from_fn(vec![n, s_hat.len(), m], |ix| {
        pairs
            .iter()
            .map(|(s, o)| s[ix[0]] * s_hat[ix[1]] * o[ix[2]])
            .sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEX: &str = r#"{
        "convention": "mirrored",
        "dims": {"n": 2, "s": 2},
        "not": {"shape": [2, 2], "data": [0, 1, 1, 0]},
        "words": {
            "alice": {"type": "n", "tensor": {"shape": [2], "data": [1, 0]}},
            "bob": {"type": "n", "tensor": {"shape": [2], "data": [0, 1]}},
            "likes": {"type": "n^r s n^l", "tensor": {"shape": [2, 2, 2], "data": [0, 0.9, 0, 0.1, 0, 0, 0, 0]}},
            "does": {"type": "n^r s s^l n", "builtin": "does"},
            "not": {"type": "n^r s s^l n", "builtin": "not"}
        }
    }"#;

    #[test]
    fn transitive_sentence_contracts_subject_and_object() {
        let lex = Lexicon::from_json_str(LEX).unwrap();
        let (_, v) = evaluate_sentence("alice likes bob", &lex).unwrap();
        assert_eq!(v.shape(), &[2]);
        assert_eq!(v.data(), &[0.9, 0.1]);
    }

    #[test]
    fn negation_swaps_the_sentence_vector() {
        let lex = Lexicon::from_json_str(LEX).unwrap();
        let (r, v) = evaluate_sentence("alice does not likes bob", &lex).unwrap();
        assert_eq!(r.pairs.len(), 6);
        assert_eq!(v.data(), &[0.1, 0.9]);
        let (_, w) = evaluate_sentence("alice does likes bob", &lex).unwrap();
        assert_eq!(w.data(), &[0.9, 0.1]);
    }

    #[test]
    fn functional_word_shape() {
        let d = functional_word_diagram(FunctionalWord::Not, &WireType::new("n"), &WireType::new("s"))
            .unwrap();
        assert!(d.inputs().is_empty());
        let outs: Vec<_> = d.output_types().iter().map(|t| t.name().to_string()).collect();
        assert_eq!(outs, ["n", "s", "s", "n"]);
    }

    #[test]
    fn errors() {
        let lex = Lexicon::from_json_str(LEX).unwrap();
        assert!(matches!(
            evaluate_sentence("alice bob", &lex),
            Err(DistsemError::Grammar(_))
        ));
        assert!(matches!(
            evaluate_sentence("alice eats bob", &lex),
            Err(DistsemError::UnknownWord(_))
        ));
        let bad = LEX.replace("\"data\": [1, 0]", "\"data\": [1, 0, 0]");
        assert!(Lexicon::from_json_str(&bad).is_err());
        let no_not = LEX.replace("\"not\": {\"shape\": [2, 2], \"data\": [0, 1, 1, 0]},", "");
        assert!(Lexicon::from_json_str(&no_not).is_err());
    }

    #[test]
    fn verb_from_pairs() {
        let v = verb_tensor_from_pairs(&[(vec![1.0, 0.0], vec![0.0, 2.0])], &[1.0, 0.0]).unwrap();
        assert_eq!(v.get(&[0, 0, 1]), 2.0);
        assert_eq!(v.data().iter().sum::<f64>(), 2.0);
        assert!(verb_tensor_from_pairs(&[], &[1.0]).is_err());
    }
}
